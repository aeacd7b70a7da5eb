//! Constructors for the named operators and the two conjugations.
//!
//! The S^{-1} conjugation is the delicate one: on the truncated space the
//! raw matrix conjugate of L by tau*tau carries corruption coming from the
//! lost tail of pExp[X/M]-multiplication. The construction here crops the
//! conjugate to the degree shift the result must have, then certifies the
//! defining relation tau*tau . L = candidate . tau*tau column by column on
//! the guarded window. A candidate that fails certification is rejected, so
//! a returned operator is exact on its window rather than trusted by
//! construction.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::macdonald::nabla_op;
use crate::qtcoeff::{QtRat, UvPoly};
use crate::symfunc::{
    partitions_of, pexp, plethysm_windowed, Alphabet, Basis, Partition, SymFunc,
};

use super::graded::{DegreeWindow, GradedOperator, Mismatch, Pairing};
use super::series::OperatorSeries;

/// Matrix of the skewing operator F^perp.
pub fn skew_op(f: &SymFunc, n: usize, order: u16) -> GradedOperator {
    columns_to_op(n, order, |lambda| {
        f.skew_apply(&SymFunc::gen(Basis::PowerSum, lambda, n, order))
    })
}

/// Matrix of multiplication by F (truncated).
pub fn mult_op(f: &SymFunc, n: usize, order: u16) -> GradedOperator {
    columns_to_op(n, order, |lambda| {
        f.to_basis(Basis::PowerSum)
            .multiply(&SymFunc::gen(Basis::PowerSum, lambda, n, order))
    })
}

/// Assemble an operator from its action on the power-sum basis vectors.
pub fn columns_to_op(
    n: usize,
    order: u16,
    mut image: impl FnMut(&Partition) -> SymFunc,
) -> GradedOperator {
    let mut blocks: HashMap<(usize, usize), crate::linalg::UMat> = HashMap::new();
    for d in 0..=n {
        let src = partitions_of(d);
        for (col, lambda) in src.list.iter().enumerate() {
            let img = image(lambda);
            for (mu, c) in img.terms() {
                let t = mu.size();
                let tgt = partitions_of(t);
                let row = tgt.index[mu];
                let entry = blocks.entry((d, t)).or_insert_with(|| {
                    crate::linalg::UMat::zero(tgt.list.len(), src.list.len(), order)
                });
                entry[(row, col)] = c.clone();
            }
        }
    }
    let mut op = GradedOperator::zero(n, order);
    for ((s, t), m) in blocks {
        op.set_block(s, t, m);
    }
    op
}

fn hk(k: usize, n: usize, order: u16) -> SymFunc {
    SymFunc::gen(
        Basis::Homogeneous,
        &Partition::single(k as u32),
        k.max(n),
        order,
    )
}

fn ek(k: usize, n: usize, order: u16) -> SymFunc {
    SymFunc::gen(
        Basis::Elementary,
        &Partition::single(k as u32),
        k.max(n),
        order,
    )
}

fn skew_memo() -> &'static Mutex<HashMap<(usize, bool, usize, u16), GradedOperator>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, bool, usize, u16), GradedOperator>>> =
        OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// h_k^perp, memoized.
pub fn hk_skew(k: usize, n: usize, order: u16) -> GradedOperator {
    let key = (k, true, n, order);
    if let Some(op) = skew_memo().lock().unwrap().get(&key) {
        return op.clone();
    }
    let op = skew_op(&hk(k, n, order), n, order);
    skew_memo().lock().unwrap().insert(key, op.clone());
    op
}

/// e_k^perp, memoized.
pub fn ek_skew(k: usize, n: usize, order: u16) -> GradedOperator {
    let key = (k, false, n, order);
    if let Some(op) = skew_memo().lock().unwrap().get(&key) {
        return op.clone();
    }
    let op = skew_op(&ek(k, n, order), n, order);
    skew_memo().lock().unwrap().insert(key, op.clone());
    op
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauDirection {
    Forward,
    Inverse,
}

/// tau_u = sum_k u^k h_k^perp, or its inverse with coefficients
/// (-1)^k e_k^perp at u^k.
pub fn tau_series(direction: TauDirection, n: usize, order: u16) -> OperatorSeries {
    let mut s = OperatorSeries::zero(n, order);
    for k in 0..=order as usize {
        let op = match direction {
            TauDirection::Forward => hk_skew(k, n, order),
            TauDirection::Inverse => {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                ek_skew(k, n, order).scale(&QtRat::from_int(sign))
            }
        };
        s.set_coeff(k as u16, 0, op);
    }
    s
}

/// The translation tau at u = 1: F -> F[X+1] = sum_k h_k^perp F.
pub fn tau_op(n: usize, order: u16) -> GradedOperator {
    let mut op = GradedOperator::zero(n, order);
    for k in 0..=n {
        op = op.add(&hk_skew(k, n, order));
    }
    op
}

fn tau_inv_op(n: usize, order: u16) -> GradedOperator {
    let mut op = GradedOperator::zero(n, order);
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        op = op.add(&ek_skew(k, n, order).scale(&QtRat::from_int(sign)));
    }
    op
}

/// pExp[c X] as a symmetric function of degree <= n.
fn pexp_of_scaled_x(c: QtRat, n: usize, order: u16) -> SymFunc {
    let a = Alphabet::empty().plus_x(c);
    pexp(&a, n, n, order, n as i32)
        .expect("X-alphabets are truncatable")
        .expect_scalar()
}

/// Multiplication by pExp[-X/M].
pub fn taustar_op(n: usize, order: u16) -> GradedOperator {
    let inv_m = QtRat::m_const().inverse().unwrap();
    mult_op(&pexp_of_scaled_x(-&inv_m, n, order), n, order)
}

fn taustar_inv_op(n: usize, order: u16) -> GradedOperator {
    let inv_m = QtRat::m_const().inverse().unwrap();
    mult_op(&pexp_of_scaled_x(inv_m, n, order), n, order)
}

fn st_memo() -> &'static Mutex<HashMap<(usize, u16), (GradedOperator, GradedOperator)>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, u16), (GradedOperator, GradedOperator)>>> =
        OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The pair (tau* tau, (tau* tau)^{-1}) on the truncation. The inverse is
/// the exact matrix inverse: tau^{-1} then multiplication by pExp[X/M],
/// composed as truncated matrices.
pub fn taustar_tau(n: usize, order: u16) -> (GradedOperator, GradedOperator) {
    let key = (n, order);
    if let Some(pair) = st_memo().lock().unwrap().get(&key) {
        return pair.clone();
    }
    let st = taustar_op(n, order)
        .compose(&tau_op(n, order))
        .with_window(DegreeWindow::full(n));
    let st_inv = tau_inv_op(n, order)
        .compose(&taustar_inv_op(n, order))
        .with_window(DegreeWindow::full(n));
    debug_assert!(st
        .compose(&st_inv)
        .mismatches(&GradedOperator::identity(n, order), n as i64, n as i64)
        .is_empty());
    st_memo()
        .lock()
        .unwrap()
        .insert(key, (st.clone(), st_inv.clone()));
    (st, st_inv)
}

/// The operator F -> pExp[-X/M] F[X+1] (tau* tau), invertible on the
/// truncated space.
pub fn tau_star_tau_op(n: usize, order: u16) -> GradedOperator {
    taustar_tau(n, order).0
}

pub fn tau_star_tau_inverse(n: usize, order: u16) -> GradedOperator {
    taustar_tau(n, order).1
}

fn d_memo() -> &'static Mutex<HashMap<(i64, usize, u16), GradedOperator>> {
    static MEMO: OnceLock<Mutex<HashMap<(i64, usize, u16), GradedOperator>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// D_n: F -> coefficient of z^n in F[X + M z^{-1}] pExp[-Xz]; homogeneous of
/// degree n.
pub fn d_op(z_n: i64, n: usize, order: u16) -> GradedOperator {
    let key = (z_n, n, order);
    if let Some(op) = d_memo().lock().unwrap().get(&key) {
        return op.clone();
    }
    assert!(z_n.unsigned_abs() as usize <= n, "|n| must fit the z-window");
    let z_window = 2 * n as i32;
    let minus_xz = Alphabet::empty().plus_term(crate::symfunc::AlphabetTerm {
        coeff: QtRat::from_int(-1),
        u_exp: 0,
        v_exp: 0,
        z_exp: 1,
        letter: crate::symfunc::Letter::X,
    });
    let kernel = pexp(&minus_xz, n, n, order, z_window).expect("pExp[-Xz] is truncatable");
    let shifted = Alphabet::x().plus_unit(QtRat::m_const(), 0, 0, -1);
    let op = columns_to_op(n, order, |lambda| {
        let f = SymFunc::gen(Basis::PowerSum, lambda, n, order);
        let g = plethysm_windowed(&f, &shifted, z_window);
        debug_assert!(!g.truncated);
        g.mul(&kernel).component(z_n as i32)
    });
    debug_assert!(op
        .shift_profile()
        .into_iter()
        .all(|s| s == z_n));
    d_memo().lock().unwrap().insert(key, op.clone());
    op
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjDirection {
    /// N(L) = nabla L nabla^{-1}
    Forward,
    /// N^{-1}(L) = nabla^{-1} L nabla
    Inverse,
}

/// Conjugation by the (diagonal, degree-preserving) nabla; exact, no window
/// loss beyond the composition rule.
pub fn n_conj(l: &GradedOperator, direction: ConjDirection, n: usize, order: u16) -> GradedOperator {
    let (left, right) = match direction {
        ConjDirection::Forward => (nabla_op(false, n, order), nabla_op(true, n, order)),
        ConjDirection::Inverse => (nabla_op(true, n, order), nabla_op(false, n, order)),
    };
    left.compose(&l.compose(&right))
}

/// Series-level conjugation: conjugate every coefficient and re-index,
/// N^{-1} sending the cell (i,j) to (i, i+j).
pub fn n_conj_series(
    s: &OperatorSeries,
    direction: ConjDirection,
    n: usize,
    order: u16,
) -> OperatorSeries {
    let conj = OperatorSeries::zero(n, order);
    let mut conj = conj;
    for (&(i, j), op) in s.coeffs() {
        conj.set_coeff(i, j, n_conj(op, direction, n, order));
    }
    match direction {
        ConjDirection::Inverse => conj.re_index(|i, j| (i, i + j)),
        ConjDirection::Forward => {
            for (&(i, j), _) in conj.coeffs() {
                assert!(j >= i, "forward N re-index needs v-exponent >= u-exponent");
            }
            conj.re_index(|i, j| (i, j - i))
        }
    }
}

/// Column-by-column check of the defining relation
/// tau*tau . L = candidate . tau*tau
/// on inputs of degree <= min(window(L), N - max_raise(L)), comparing
/// outputs up to degree N - max_drop(candidate) (higher targets of the
/// right-hand side are corrupted by the argument's lost tail).
pub fn defining_relation_mismatches(
    l: &GradedOperator,
    candidate: &GradedOperator,
    n: usize,
    order: u16,
) -> Vec<Mismatch> {
    let (st, _) = taustar_tau(n, order);
    let cert_max = l
        .window()
        .max_input_degree
        .min(n as i64 - l.max_raise());
    let cap = n as i64 - candidate.max_drop();
    let mut out = Vec::new();
    if cert_max < 0 {
        return out;
    }
    for d in 0..=cert_max {
        let table = partitions_of(d as usize);
        for lambda in table.list.iter() {
            let lhs = st.apply(&l.apply_basis(lambda));
            let rhs = candidate.apply(&st.apply_basis(lambda));
            let diff = lhs.sub(&rhs);
            for (mu, c) in diff.terms() {
                if (mu.size() as i64) <= cap {
                    out.push(Mismatch {
                        source: lambda.clone(),
                        target: mu.clone(),
                        lhs: lhs.coeff(mu),
                        rhs: c.clone(), // nonzero difference marks the spot
                    });
                }
            }
        }
    }
    out
}

/// S^{-1} of a single operator known to be homogeneous. Constructs the
/// matrix conjugate by tau*tau, crops it to the expected shift, then
/// certifies the defining relation. `expected_shift` is the degree shift
/// the result must have (the input's shift minus the v-exponent of its
/// series cell).
pub fn s_inverse_homogeneous(
    l: &GradedOperator,
    expected_shift: i64,
    step: &str,
    n: usize,
    order: u16,
) -> Result<GradedOperator> {
    let r = l.max_raise();
    if r > 0 {
        return Err(Error::Certification {
            step: step.to_string(),
            detail: "conjugation route requires a non-raising operator".to_string(),
        });
    }
    let guard = r + 1;
    let window = l.window().shrink(guard);
    if window.is_empty() {
        return Err(Error::WindowExhausted {
            step: step.to_string(),
        });
    }
    let (st, st_inv) = taustar_tau(n, order);
    let candidate = st
        .compose(&l.compose(&st_inv))
        .crop_to_shift(expected_shift)
        .with_window(window);
    let mismatches = defining_relation_mismatches(l, &candidate, n, order);
    if !mismatches.is_empty() {
        return Err(certification_error(step, &mismatches));
    }
    Ok(candidate)
}

/// S^{-1} of a raising operator via the star-dual route: the star adjoint
/// turns it into a lowering operator, nabla conjugation plays the role of
/// the slot move, and the star adjoint transports it back. Certified
/// against the defining relation like the direct route.
pub fn s_inverse_star_dual(
    l: &GradedOperator,
    step: &str,
    n: usize,
    order: u16,
) -> Result<GradedOperator> {
    if l.window() != DegreeWindow::full(n) {
        return Err(Error::Certification {
            step: step.to_string(),
            detail: "star-dual route needs a full-window operator".to_string(),
        });
    }
    let dual = l.adjoint(Pairing::Star);
    let moved = n_conj(&dual, ConjDirection::Inverse, n, order)
        .with_window(DegreeWindow::full(n));
    let candidate = moved.adjoint(Pairing::Star);
    let guard = l.max_raise() + 1;
    let window = l.window().shrink(guard);
    if window.is_empty() {
        return Err(Error::WindowExhausted {
            step: step.to_string(),
        });
    }
    let candidate = candidate.with_window(window);
    let mismatches = defining_relation_mismatches(l, &candidate, n, order);
    if !mismatches.is_empty() {
        return Err(certification_error(step, &mismatches));
    }
    Ok(candidate)
}

fn certification_error(step: &str, mismatches: &[Mismatch]) -> Error {
    let first = &mismatches[0];
    Error::Certification {
        step: step.to_string(),
        detail: format!(
            "{} mismatches, first at p[{}] -> p[{}]",
            mismatches.len(),
            first.source,
            first.target
        ),
    }
}

/// S^{-1} of a whole series: each cell moves (i,j) -> (i+j, j), each
/// coefficient is conjugated through the route its shift profile demands,
/// and every move is certified. Coefficients must be homogeneous in degree
/// shift (they are, for every series along a T ray).
pub fn s_inverse_series(s: &OperatorSeries, step: &str, n: usize, order: u16) -> Result<OperatorSeries> {
    let mut out = OperatorSeries::zero(n, order);
    for (&(i, j), op) in s.coeffs() {
        if op.is_zero() {
            continue;
        }
        let slot_step = format!("{step}[u^{i} v^{j}]");
        let profile = op.shift_profile();
        if profile.len() != 1 {
            return Err(Error::Certification {
                step: slot_step,
                detail: format!("coefficient has mixed shift profile {:?}", profile),
            });
        }
        let shift = profile.into_iter().next().unwrap();
        let moved = if op.max_raise() > 0 {
            s_inverse_star_dual(op, &slot_step, n, order)?
        } else {
            s_inverse_homogeneous(op, shift - j as i64, &slot_step, n, order)?
        };
        let (ni, nj) = (i + j, j);
        if ni <= order && nj <= order {
            out.set_coeff(ni, nj, moved);
        }
    }
    Ok(out)
}

/// Hall or star adjoint of an operator (spec op `adjoint`).
pub fn adjoint(l: &GradedOperator, pairing: Pairing) -> GradedOperator {
    l.adjoint(pairing)
}
