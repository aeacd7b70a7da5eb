//! The modified Macdonald basis up to the truncation degree, the cell
//! statistics B_lambda, n, n', and the diagonal eigenoperators built on top
//! of it.
//!
//! The table at each degree is the unique solution of the triangularity
//! characterization: expanding in Schur coordinates,
//! H_lambda[X(q-1)] is supported on {s_mu : mu <= lambda'} and
//! H_lambda[X(t-1)] on {s_mu : mu <= lambda} (dominance order), normalized
//! by coefficient 1 on s_(d). Uniqueness is asserted by the solver, and the
//! q<->t/conjugation symmetry and specialization invariants are checked in
//! the test suite.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{QMat, UMat};
use crate::opcalc::{GradedOperator, OperatorSeries};
use crate::qtcoeff::{format_rat, parse_rat, power_twist, QtPoly, QtRat, UvPoly};
use crate::symfunc::{
    dominance_leq, from_p_mat, partitions_of, plethysm, to_p_mat, Alphabet, Basis, Partition,
    SymFunc,
};

/// Cell statistics of a partition: B_lambda = sum over cells of q^c t^r,
/// n = sum of row indices, n' = sum of column indices (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStats {
    pub partition: Partition,
    pub b_poly: QtPoly,
    pub n_stat: u64,
    pub nprime_stat: u64,
}

pub fn cell_stats(lambda: &Partition) -> CellStats {
    let mut b = QtPoly::zero();
    for (c, r) in lambda.cells() {
        b.add_term((c, r), &BigRational::from_integer(1.into()));
    }
    debug_assert_eq!(
        b.eval_at_one(),
        BigRational::from_integer((lambda.size() as i64).into())
    );
    CellStats {
        partition: lambda.clone(),
        b_poly: b,
        n_stat: lambda.n_stat(),
        nprime_stat: lambda.nprime_stat(),
    }
}

/// Transition data between the modified Macdonald and Schur bases at one
/// degree: `to_schur[lambda][mu]` is the coefficient of s_mu in H_lambda,
/// rows and columns in the fixed partition order; `from_schur` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacdonaldTable {
    pub degree: usize,
    pub to_schur: QMat,
    pub from_schur: QMat,
}

/// Matrix of F -> F[X(c-1)] on Schur coordinates at degree d, where the
/// twist sends p_n to (c^n - 1) p_n.
fn twist_matrix(d: usize, use_t: bool) -> QMat {
    let table = partitions_of(d);
    let n = table.list.len();
    let mut diag = QMat::zero(n, n);
    for (i, lambda) in table.list.iter().enumerate() {
        let mut c = QtRat::one();
        for &part in lambda.parts() {
            let gen = if use_t { QtPoly::t() } else { QtPoly::q() };
            c = &c * &QtRat::from_poly(&gen.pow(part) - &QtPoly::one());
        }
        diag[(i, i)] = c;
    }
    from_p_mat(d, Basis::Schur)
        .mul(&diag)
        .mul(&to_p_mat(d, Basis::Schur))
}

/// Solve the axiom system at one degree. Panics if the linear system fails
/// to pin the basis down uniquely, which would mean the characterization
/// was transcribed wrongly.
pub fn compute_htilde_table(d: usize) -> MacdonaldTable {
    let table = partitions_of(d);
    let dim = table.list.len();
    let tq = twist_matrix(d, false);
    let tt = twist_matrix(d, true);
    let mut to_schur = QMat::zero(dim, dim);
    for (li, lambda) in table.list.iter().enumerate() {
        let conj = lambda.conjugate();
        let mut rows: Vec<Vec<QtRat>> = Vec::new();
        for (mi, mu) in table.list.iter().enumerate() {
            if !dominance_leq(mu, &conj).unwrap() {
                rows.push((0..dim).map(|c| tq[(mi, c)].clone()).collect());
            }
            if !dominance_leq(mu, lambda).unwrap() {
                rows.push((0..dim).map(|c| tt[(mi, c)].clone()).collect());
            }
        }
        let mut a = QMat::zero(rows.len(), dim);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                a[(r, c)] = v.clone();
            }
        }
        let ns = a.null_space();
        assert_eq!(
            ns.len(),
            1,
            "triangularity system at degree {d} for {lambda} must have a line of solutions"
        );
        let v = &ns[0];
        let lead = v[0]
            .inverse()
            .expect("normalization coefficient <H, s_(d)> must be nonzero");
        for (c, val) in v.iter().enumerate() {
            to_schur[(li, c)] = val * &lead;
        }
    }
    let from_schur = to_schur
        .inverse()
        .expect("macdonald transition matrix is invertible");
    MacdonaldTable {
        degree: d,
        to_schur,
        from_schur,
    }
}

fn cache_dir_slot() -> &'static Mutex<Option<PathBuf>> {
    static SLOT: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();
    SLOT.get_or_init(|| Mutex::new(None))
}

/// Directory for the on-disk table cache; `None` disables persistence.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *cache_dir_slot().lock().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    cache_dir_slot().lock().unwrap().clone()
}

pub fn cache_file_name(d: usize) -> String {
    format!("htilde_d{}.qsf", d)
}

/// Serialize in the cache format: a header line, then one line per entry of
/// `to_schur` in the fixed partition order, LF endings.
pub fn table_to_string(t: &MacdonaldTable) -> String {
    let table = partitions_of(t.degree);
    let mut out = format!("QSF1 degree={} basis=schur order=revlex\n", t.degree);
    for (li, lambda) in table.list.iter().enumerate() {
        for (mi, mu) in table.list.iter().enumerate() {
            out.push_str(&format!(
                "{} : {} : {}\n",
                lambda,
                mu,
                format_rat(&t.to_schur[(li, mi)])
            ));
        }
    }
    out
}

/// Parse the cache format; the error detail names the first offending line.
pub fn table_from_str(d: usize, content: &str) -> std::result::Result<MacdonaldTable, String> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines.next().ok_or("empty cache file")?;
    let expected_header = format!("QSF1 degree={} basis=schur order=revlex", d);
    if header != expected_header {
        return Err(format!("line 1: bad header {:?}", header));
    }
    let table = partitions_of(d);
    let dim = table.list.len();
    let mut to_schur = QMat::zero(dim, dim);
    let mut count = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, " : ").collect();
        if parts.len() != 3 {
            return Err(format!("line {lineno}: expected '<lambda> : <mu> : <scalar>'"));
        }
        let (li, mi) = (count / dim, count % dim);
        if li >= dim {
            return Err(format!("line {lineno}: too many entries"));
        }
        let lambda: Partition = parts[0]
            .parse()
            .map_err(|e| format!("line {lineno}: {e}"))?;
        let mu: Partition = parts[1]
            .parse()
            .map_err(|e| format!("line {lineno}: {e}"))?;
        if lambda != table.list[li] || mu != table.list[mi] {
            return Err(format!(
                "line {lineno}: entry out of order, expected {} : {}",
                table.list[li], table.list[mi]
            ));
        }
        to_schur[(li, mi)] = parse_rat(parts[2]).map_err(|e| format!("line {lineno}: {e}"))?;
        count += 1;
    }
    if count != dim * dim {
        return Err(format!("expected {} entries, found {count}", dim * dim));
    }
    let from_schur = to_schur
        .inverse()
        .ok_or("stored matrix is singular".to_string())?;
    Ok(MacdonaldTable {
        degree: d,
        to_schur,
        from_schur,
    })
}

fn write_atomic(path: &std::path::Path, content: &str) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn table_memo() -> &'static Mutex<HashMap<usize, Arc<MacdonaldTable>>> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<MacdonaldTable>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The table at degree d, from the in-memory memo, the disk cache when a
/// cache directory is configured, or a fresh solve (persisted afterwards).
pub fn htilde_table(d: usize) -> Arc<MacdonaldTable> {
    if let Some(t) = table_memo().lock().unwrap().get(&d) {
        return Arc::clone(t);
    }
    let dir = cache_dir();
    let mut loaded = None;
    if let Some(dir) = &dir {
        let path = dir.join(cache_file_name(d));
        if let Ok(content) = std::fs::read_to_string(&path) {
            if let Ok(t) = table_from_str(d, &content) {
                loaded = Some(t);
            }
        }
    }
    let fresh = loaded.is_none();
    let t = Arc::new(loaded.unwrap_or_else(|| compute_htilde_table(d)));
    if fresh {
        if let Some(dir) = &dir {
            let _ = std::fs::create_dir_all(dir);
            let _ = write_atomic(&dir.join(cache_file_name(d)), &table_to_string(&t));
        }
    }
    table_memo().lock().unwrap().insert(d, Arc::clone(&t));
    t
}

fn conv_memo() -> &'static Mutex<HashMap<(usize, bool), Arc<QMat>>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, bool), Arc<QMat>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Columns are the H-basis elements in power-sum coordinates.
pub fn htilde_to_p(d: usize) -> Arc<QMat> {
    if let Some(m) = conv_memo().lock().unwrap().get(&(d, true)) {
        return Arc::clone(m);
    }
    let t = htilde_table(d);
    let m = Arc::new(to_p_mat(d, Basis::Schur).mul(&t.to_schur.transpose()));
    conv_memo().lock().unwrap().insert((d, true), Arc::clone(&m));
    m
}

pub fn p_to_htilde(d: usize) -> Arc<QMat> {
    if let Some(m) = conv_memo().lock().unwrap().get(&(d, false)) {
        return Arc::clone(m);
    }
    let t = htilde_table(d);
    let m = Arc::new(t.from_schur.transpose().mul(&from_p_mat(d, Basis::Schur)));
    conv_memo().lock().unwrap().insert((d, false), Arc::clone(&m));
    m
}

/// Basis conversion that also understands the Macdonald basis.
pub fn to_basis_full(f: &SymFunc, target: Basis) -> SymFunc {
    if f.basis().is_classical() && target.is_classical() {
        return f.to_basis(target);
    }
    if f.basis() == target {
        return f.clone();
    }
    // route through schur
    let mut out = SymFunc::zero(target, f.truncation(), f.order());
    for d in f.degrees() {
        let v = f.slice(d);
        let schur = if f.basis() == Basis::Htilde {
            apply_qmat_uv(&htilde_table(d).to_schur.transpose(), &v, f.order())
        } else {
            f.to_basis(Basis::Schur).slice(d)
        };
        let w = if target == Basis::Htilde {
            apply_qmat_uv(&htilde_table(d).from_schur.transpose(), &schur, f.order())
        } else {
            let mut tmp = SymFunc::zero(Basis::Schur, f.truncation(), f.order());
            tmp.set_slice(d, schur);
            tmp.to_basis(target).slice(d)
        };
        out.set_slice(d, w);
    }
    out
}

fn apply_qmat_uv(m: &QMat, v: &[UvPoly], order: u16) -> Vec<UvPoly> {
    (0..m.rows)
        .map(|i| {
            let mut acc = UvPoly::zero(order);
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || m[(i, j)].is_zero() {
                    continue;
                }
                acc = &acc + &vj.scale(&m[(i, j)]);
            }
            acc
        })
        .collect()
}

/// The Macdonald basis element itself, in Schur coordinates.
pub fn htilde_symfunc(lambda: &Partition, n: usize, order: u16) -> SymFunc {
    let d = lambda.size();
    let t = htilde_table(d);
    let li = partitions_of(d).index[lambda];
    let mut out = SymFunc::zero(Basis::Schur, n, order);
    for (mi, mu) in partitions_of(d).list.iter().enumerate() {
        out.add_coeff(mu, &UvPoly::constant(t.to_schur[(li, mi)].clone(), order));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaVariant {
    Plain,
    Prime,
}

/// B_lambda (optionally minus 1/M) as a plethystic alphabet.
fn b_alphabet(lambda: &Partition, variant: DeltaVariant) -> Alphabet {
    let mut a = Alphabet::empty();
    for (c, r) in lambda.cells() {
        a = a.plus_unit(QtRat::monomial(c, r, 1), 0, 0, 0);
    }
    if variant == DeltaVariant::Prime {
        let inv_m = QtRat::m_const().inverse().unwrap();
        a = a.plus_unit(-&inv_m, 0, 0, 0);
    }
    a
}

/// Eigenvalue of Delta_F (or Delta'_F) on H_lambda: F[B_lambda] or
/// F[B_lambda - 1/M], evaluated degree by degree.
pub fn delta_eigenvalue(f: &SymFunc, lambda: &Partition, variant: DeltaVariant) -> UvPoly {
    let scalar = plethysm(f, &b_alphabet(lambda, variant));
    debug_assert!(!scalar.truncated);
    scalar
        .expect_scalar()
        .coeff(&Partition::empty())
}

/// Eigenvalue of the signed nabla on H_lambda:
/// (-1)^{|lambda|} q^{n'(lambda)} t^{n(lambda)}, or its reciprocal.
pub fn nabla_eigenvalue(lambda: &Partition, inverse: bool) -> QtRat {
    let stats = cell_stats(lambda);
    let sign = if lambda.size() % 2 == 0 { 1 } else { -1 };
    let m = QtRat::monomial(stats.nprime_stat as u32, stats.n_stat as u32, sign);
    if inverse {
        m.inverse().expect("nabla eigenvalue is nonzero")
    } else {
        m
    }
}

/// Diagonal operator in the Macdonald basis with the given eigenvalues,
/// assembled in power-sum coordinates block by block.
fn diagonal_in_htilde(
    n: usize,
    order: u16,
    mut eig: impl FnMut(&Partition) -> UvPoly,
) -> GradedOperator {
    let mut op = GradedOperator::zero(n, order);
    for d in 0..=n {
        let table = partitions_of(d);
        let dim = table.list.len();
        let eigs: Vec<UvPoly> = table.list.iter().map(&mut eig).collect();
        let m1 = htilde_to_p(d);
        let m2 = p_to_htilde(d);
        if let Some(consts) = eigs
            .iter()
            .map(|e| {
                if e.is_zero() {
                    Some(QtRat::zero())
                } else {
                    e.as_constant().cloned()
                }
            })
            .collect::<Option<Vec<QtRat>>>()
        {
            // scalar eigenvalues: stay in plain q,t matrices
            let mut diag = QMat::zero(dim, dim);
            for (i, c) in consts.into_iter().enumerate() {
                diag[(i, i)] = c;
            }
            let block = m1.mul(&diag).mul(&m2);
            op.set_block(d, d, UMat::from_qmat(&block, order));
        } else {
            let mut diag = UMat::zero(dim, dim, order);
            for (i, e) in eigs.into_iter().enumerate() {
                diag[(i, i)] = e;
            }
            let block = UMat::from_qmat(&m1, order)
                .mul(&diag)
                .mul(&UMat::from_qmat(&m2, order));
            op.set_block(d, d, block);
        }
    }
    op
}

fn delta_memo() -> &'static Mutex<HashMap<(usize, u16, u32, DeltaVariant, bool), GradedOperator>> {
    static MEMO: OnceLock<
        Mutex<HashMap<(usize, u16, u32, DeltaVariant, bool), GradedOperator>>,
    > = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Delta_F or Delta'_F for arbitrary F; diagonal in the Macdonald basis with
/// eigenvalue F[B_lambda] (or F[B_lambda - 1/M]).
pub fn delta_op(f: &SymFunc, variant: DeltaVariant, n: usize, order: u16) -> GradedOperator {
    diagonal_in_htilde(n, order, |lambda| delta_eigenvalue(f, lambda, variant))
}

/// Memoized Delta_{e_k} / Delta'_{e_k} / Delta_{h_k} family.
pub fn delta_gen_op(
    k: usize,
    elementary: bool,
    variant: DeltaVariant,
    n: usize,
    order: u16,
) -> GradedOperator {
    let key = (k, order, n as u32, variant, elementary);
    if let Some(op) = delta_memo().lock().unwrap().get(&key) {
        return op.clone();
    }
    let basis = if elementary {
        Basis::Elementary
    } else {
        Basis::Homogeneous
    };
    // the generator degree may exceed the space truncation; eigenvalues are
    // scalars, so build F in a space just big enough to hold it
    let f = SymFunc::gen(basis, &Partition::single(k as u32), k.max(n), order);
    let op = delta_op(&f, variant, n, order);
    delta_memo()
        .lock()
        .unwrap()
        .insert(key, op.clone());
    op
}

fn nabla_memo() -> &'static Mutex<HashMap<(usize, u16, bool), GradedOperator>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, u16, bool), GradedOperator>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The signed nabla operator (or its inverse).
pub fn nabla_op(inverse: bool, n: usize, order: u16) -> GradedOperator {
    let key = (n, order, inverse);
    if let Some(op) = nabla_memo().lock().unwrap().get(&key) {
        return op.clone();
    }
    let op = diagonal_in_htilde(n, order, |lambda| {
        UvPoly::constant(nabla_eigenvalue(lambda, inverse), order)
    });
    nabla_memo().lock().unwrap().insert(key, op.clone());
    op
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSeriesKind {
    /// Delta_v = sum (-v)^k Delta_{e_k}
    DeltaV,
    /// Delta_v' = sum (-v)^k Delta'_{e_k}
    DeltaVPrime,
    /// Delta_v^{-1} = sum v^k Delta_{h_k}
    DeltaVInverse,
}

/// The diagonal one-parameter series in v.
pub fn delta_series(kind: DeltaSeriesKind, n: usize, order: u16) -> OperatorSeries {
    let mut s = OperatorSeries::zero(n, order);
    for k in 0..=order as usize {
        let op = match kind {
            DeltaSeriesKind::DeltaV => {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                delta_gen_op(k, true, DeltaVariant::Plain, n, order).scale(&QtRat::from_int(sign))
            }
            DeltaSeriesKind::DeltaVPrime => {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                delta_gen_op(k, true, DeltaVariant::Prime, n, order).scale(&QtRat::from_int(sign))
            }
            DeltaSeriesKind::DeltaVInverse => delta_gen_op(k, false, DeltaVariant::Plain, n, order),
        };
        s.set_coeff(0, k as u16, op);
    }
    s
}

/// h_k[1/M] and friends: scalar plethystic evaluations used by the glue
/// relations and the Delta_v' factorization.
pub fn scalar_pleth(f: &SymFunc, coeff: QtRat) -> QtRat {
    let a = Alphabet::empty().plus_unit(coeff, 0, 0, 0);
    plethysm(f, &a)
        .expect_scalar()
        .coeff(&Partition::empty())
        .as_constant()
        .cloned()
        .unwrap_or_else(QtRat::zero)
}

#[cfg(test)]
mod tests;
