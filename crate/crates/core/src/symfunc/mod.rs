//! Degree-truncated symmetric functions: five classical bases, the Hall
//! pairing, multiplication, skewing, plethysm on formal alphabets, and the
//! plethystic exponential.

pub mod partition;
pub mod tables;

use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::qtcoeff::{power_twist, QtRat, UvPoly};

pub use partition::{dominance_leq, partitions_of, Partition, PartitionTable};
pub use tables::{character, from_p_mat, to_p_mat};

/// Coefficient bases for symmetric functions. `Htilde` is the modified
/// Macdonald basis; its transition matrices live in the macdonald module,
/// everything else is classical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Monomial,
    Elementary,
    Homogeneous,
    PowerSum,
    Schur,
    Htilde,
}

impl Basis {
    pub fn letter(&self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::Elementary => "e",
            Basis::Homogeneous => "h",
            Basis::PowerSum => "p",
            Basis::Schur => "s",
            Basis::Htilde => "Ht",
        }
    }

    pub fn is_classical(&self) -> bool {
        *self != Basis::Htilde
    }
}

/// Symmetric function of degree at most `truncation`, expressed in `basis`
/// with coefficients in Q(q,t)[u,v] truncated at `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymFunc {
    basis: Basis,
    coeffs: BTreeMap<Partition, UvPoly>,
    truncation: usize,
    order: u16,
}

impl SymFunc {
    pub fn zero(basis: Basis, truncation: usize, order: u16) -> Self {
        SymFunc {
            basis,
            coeffs: BTreeMap::new(),
            truncation,
            order,
        }
    }

    pub fn one(basis: Basis, truncation: usize, order: u16) -> Self {
        let mut f = Self::zero(basis, truncation, order);
        f.set_coeff(Partition::empty(), UvPoly::one(order));
        f
    }

    /// The basis element indexed by `lambda`.
    pub fn gen(basis: Basis, lambda: &Partition, truncation: usize, order: u16) -> Self {
        assert!(
            lambda.size() <= truncation,
            "generator degree {} exceeds truncation {}",
            lambda.size(),
            truncation
        );
        let mut f = Self::zero(basis, truncation, order);
        f.set_coeff(lambda.clone(), UvPoly::one(order));
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> UvPoly {
        self.coeffs
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| UvPoly::zero(self.order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &UvPoly)> {
        self.coeffs.iter()
    }

    pub fn set_coeff(&mut self, lambda: Partition, c: UvPoly) {
        debug_assert!(lambda.size() <= self.truncation);
        if c.is_zero() {
            self.coeffs.remove(&lambda);
        } else {
            self.coeffs.insert(lambda, c);
        }
    }

    pub fn add_coeff(&mut self, lambda: &Partition, c: &UvPoly) {
        if c.is_zero() || lambda.size() > self.truncation {
            return;
        }
        let sum = &self.coeff(lambda) + c;
        self.set_coeff(lambda.clone(), sum);
    }

    pub fn add(&self, other: &SymFunc) -> SymFunc {
        assert_eq!(self.basis, other.basis, "basis mismatch in add");
        let truncation = self.truncation.min(other.truncation);
        let mut out = SymFunc::zero(self.basis, truncation, self.order.min(other.order));
        for (l, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if l.size() <= truncation {
                out.add_coeff(l, c);
            }
        }
        out
    }

    pub fn sub(&self, other: &SymFunc) -> SymFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymFunc {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &QtRat) -> SymFunc {
        if c.is_zero() {
            return SymFunc::zero(self.basis, self.truncation, self.order);
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.scale(c);
        }
        out
    }

    pub fn scale_uv(&self, c: &UvPoly) -> SymFunc {
        let mut out = SymFunc::zero(self.basis, self.truncation, self.order);
        for (l, v) in self.coeffs.iter() {
            out.add_coeff(l, &(v * c));
        }
        out
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.coeffs.keys().map(|l| l.size()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// `Some(d)` when nonzero and concentrated in a single degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let ds = self.degrees();
        if ds.len() == 1 {
            Some(ds[0])
        } else {
            None
        }
    }

    /// Coordinate vector of the degree-d component in the fixed partition order.
    pub fn slice(&self, d: usize) -> Vec<UvPoly> {
        let table = partitions_of(d);
        table
            .list
            .iter()
            .map(|l| self.coeff(l))
            .collect()
    }

    pub fn set_slice(&mut self, d: usize, values: Vec<UvPoly>) {
        let table = partitions_of(d);
        assert_eq!(values.len(), table.list.len());
        for (l, v) in table.list.iter().zip(values) {
            self.set_coeff(l.clone(), v);
        }
    }

    /// Change of classical basis; round trips are exact. `Htilde` conversions
    /// are provided by the macdonald module.
    pub fn to_basis(&self, target: Basis) -> SymFunc {
        assert!(
            self.basis.is_classical() && target.is_classical(),
            "htilde conversions live in the macdonald module"
        );
        if self.basis == target {
            return self.clone();
        }
        let mut out = SymFunc::zero(target, self.truncation, self.order);
        for d in self.degrees() {
            let v = self.slice(d);
            let vp = apply_qmat(&to_p_mat(d, self.basis), &v, self.order);
            let w = apply_qmat(&from_p_mat(d, target), &vp, self.order);
            out.set_slice(d, w);
        }
        out
    }

    /// Product, truncated to degree <= min truncation; commutative and
    /// bilinear. The result is expressed in `self`'s basis.
    pub fn multiply(&self, other: &SymFunc) -> SymFunc {
        self.multiply_flagged(other).0
    }

    /// Like `multiply`, also reporting whether any product term was discarded
    /// by the degree truncation (or the truncations differed).
    pub fn multiply_flagged(&self, other: &SymFunc) -> (SymFunc, bool) {
        let a = self.to_basis(Basis::PowerSum);
        let b = other.to_basis(Basis::PowerSum);
        let truncation = self.truncation.min(other.truncation);
        let mut clipped = self.truncation != other.truncation;
        let mut out = SymFunc::zero(Basis::PowerSum, truncation, self.order.min(other.order));
        for (la, ca) in a.coeffs.iter() {
            for (lb, cb) in b.coeffs.iter() {
                if la.size() + lb.size() > truncation {
                    clipped = true;
                    continue;
                }
                out.add_coeff(&la.union(lb), &(ca * cb));
            }
        }
        (out.to_basis(self.basis), clipped)
    }

    /// Hall inner product; power sums are orthogonal with norm z_lambda.
    pub fn hall_pair(&self, other: &SymFunc) -> UvPoly {
        let a = self.to_basis(Basis::PowerSum);
        let b = other.to_basis(Basis::PowerSum);
        let mut acc = UvPoly::zero(self.order.min(other.order));
        for (l, ca) in a.coeffs.iter() {
            let cb = b.coeff(l);
            if cb.is_zero() {
                continue;
            }
            let z = QtRat::from_rational(BigRational::from_integer(l.z()));
            acc = &acc + &(ca * &cb).scale(&z);
        }
        acc
    }

    /// Skewing: returns self^perp(other), the Hall adjoint of multiplication
    /// by self. In power-sum coordinates p_k^perp p_mu = k m_k(mu) p_{mu - k}.
    pub fn skew_apply(&self, other: &SymFunc) -> SymFunc {
        let f = self.to_basis(Basis::PowerSum);
        let g = other.to_basis(Basis::PowerSum);
        let mut out = SymFunc::zero(Basis::PowerSum, g.truncation, g.order);
        for (lf, cf) in f.coeffs.iter() {
            for (lg, cg) in g.coeffs.iter() {
                let mut current = lg.clone();
                let mut factor = QtRat::one();
                let mut ok = true;
                for &k in lf.parts() {
                    let mult = current.multiplicity(k);
                    if mult == 0 {
                        ok = false;
                        break;
                    }
                    factor = &factor * &QtRat::from_int(k as i64 * mult as i64);
                    current = current.remove_part(k).unwrap();
                }
                if !ok {
                    continue;
                }
                out.add_coeff(&current, &(cf * cg).scale(&factor));
            }
        }
        out.to_basis(other.basis)
    }
}

fn apply_qmat(m: &QMat, v: &[UvPoly], order: u16) -> Vec<UvPoly> {
    assert_eq!(m.cols, v.len());
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

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // degree descending, then the fixed partition order within a degree
        let mut keys: Vec<&Partition> = self.coeffs.keys().collect();
        keys.sort_by_key(|l| {
            let d = l.size();
            (std::cmp::Reverse(d), partitions_of(d).index[*l])
        });
        let letter = self.basis.letter();
        let mut first = true;
        for l in keys {
            let c = &self.coeffs[l];
            let base = if l.is_empty() {
                String::new()
            } else {
                format!("{}[{}]", letter, l)
            };
            let term = if base.is_empty() {
                c.to_string()
            } else if c.is_one() {
                base
            } else if (-c).is_one() {
                format!("-{}", base)
            } else {
                format!("({})*{}", c, base)
            };
            if first {
                f.write_str(&term)?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", term)?;
            }
        }
        Ok(())
    }
}

/// One summand of a formal plethystic alphabet: a scalar times a monomial in
/// u, v, z, optionally carrying a copy of the main alphabet X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetTerm {
    pub coeff: QtRat,
    pub u_exp: u16,
    pub v_exp: u16,
    pub z_exp: i32,
    pub letter: Letter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    X,
    Unit,
}

/// Formal plethystic alphabet: a signed combination of scalar monomials and
/// copies of X, e.g. X + u, X + M z^{-1}, -X/M, X(q-1), uv.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    terms: Vec<AlphabetTerm>,
}

impl Alphabet {
    pub fn empty() -> Self {
        Alphabet { terms: Vec::new() }
    }

    /// The plain alphabet X.
    pub fn x() -> Self {
        Alphabet::empty().plus_x(QtRat::one())
    }

    pub fn plus_x(mut self, coeff: QtRat) -> Self {
        self.push(AlphabetTerm {
            coeff,
            u_exp: 0,
            v_exp: 0,
            z_exp: 0,
            letter: Letter::X,
        });
        self
    }

    pub fn plus_unit(mut self, coeff: QtRat, u_exp: u16, v_exp: u16, z_exp: i32) -> Self {
        self.push(AlphabetTerm {
            coeff,
            u_exp,
            v_exp,
            z_exp,
            letter: Letter::Unit,
        });
        self
    }

    pub fn plus_term(mut self, term: AlphabetTerm) -> Self {
        self.push(term);
        self
    }

    fn push(&mut self, term: AlphabetTerm) {
        if !term.coeff.is_zero() {
            self.terms.push(term);
        }
    }

    pub fn negate(&self) -> Self {
        Alphabet {
            terms: self
                .terms
                .iter()
                .map(|t| AlphabetTerm {
                    coeff: -&t.coeff,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[AlphabetTerm] {
        &self.terms
    }

    /// Weight used for truncatability: X counts 1, plus all exponents.
    fn term_weight(t: &AlphabetTerm) -> usize {
        let letter = match t.letter {
            Letter::X => 1,
            Letter::Unit => 0,
        };
        letter + t.u_exp as usize + t.v_exp as usize + t.z_exp.unsigned_abs() as usize
    }
}

/// Finitely supported z-graded symmetric function; houses the variable z and
/// coefficient extraction at fixed powers of z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZGradedSym {
    components: BTreeMap<i32, SymFunc>,
    z_window: i32,
    truncation: usize,
    order: u16,
    /// Set when any contribution fell outside the degree, u/v, or z windows.
    pub truncated: bool,
}

impl ZGradedSym {
    pub fn zero(truncation: usize, order: u16, z_window: i32) -> Self {
        ZGradedSym {
            components: BTreeMap::new(),
            z_window,
            truncation,
            order,
            truncated: false,
        }
    }

    pub fn one(truncation: usize, order: u16, z_window: i32) -> Self {
        let mut out = Self::zero(truncation, order, z_window);
        out.components
            .insert(0, SymFunc::one(Basis::PowerSum, truncation, order));
        out
    }

    pub fn z_window(&self) -> i32 {
        self.z_window
    }

    /// Component at z^k; zero if absent.
    pub fn component(&self, z_exp: i32) -> SymFunc {
        self.components
            .get(&z_exp)
            .cloned()
            .unwrap_or_else(|| SymFunc::zero(Basis::PowerSum, self.truncation, self.order))
    }

    pub fn components(&self) -> impl Iterator<Item = (&i32, &SymFunc)> {
        self.components.iter()
    }

    /// The z-free part as a plain symmetric function.
    pub fn expect_scalar(&self) -> SymFunc {
        debug_assert!(self.components.keys().all(|&k| k == 0));
        self.component(0)
    }

    pub fn add_component(&mut self, z_exp: i32, f: &SymFunc) {
        if f.is_zero() {
            return;
        }
        if z_exp.abs() > self.z_window {
            self.truncated = true;
            return;
        }
        let sum = self.component(z_exp).add(f);
        if sum.is_zero() {
            self.components.remove(&z_exp);
        } else {
            self.components.insert(z_exp, sum);
        }
    }

    pub fn add(&self, other: &ZGradedSym) -> ZGradedSym {
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (&k, f) in other.components.iter() {
            out.add_component(k, f);
        }
        out
    }

    pub fn mul(&self, other: &ZGradedSym) -> ZGradedSym {
        let mut out = Self::zero(
            self.truncation.min(other.truncation),
            self.order.min(other.order),
            self.z_window.min(other.z_window),
        );
        out.truncated = self.truncated || other.truncated;
        for (&ka, fa) in self.components.iter() {
            for (&kb, fb) in other.components.iter() {
                let (prod, clipped) = fa.multiply_flagged(fb);
                out.truncated |= clipped;
                out.add_component(ka + kb, &prod);
            }
        }
        out
    }

    pub fn scale_uv(&self, c: &UvPoly) -> ZGradedSym {
        let mut out = Self::zero(self.truncation, self.order, self.z_window);
        out.truncated = self.truncated;
        for (&k, f) in self.components.iter() {
            out.add_component(k, &f.scale_uv(c));
        }
        out
    }
}

/// p_n[A]: additive over terms; on a scalar term the coefficient is
/// power-twisted and the u/v/z exponents are multiplied by n; an X term
/// contributes the twisted scalar times p_n.
fn p_n_of_alphabet(
    n: usize,
    alphabet: &Alphabet,
    truncation: usize,
    order: u16,
    z_window: i32,
) -> ZGradedSym {
    let mut out = ZGradedSym::zero(truncation, order, z_window);
    for term in alphabet.terms() {
        let twisted = power_twist(&term.coeff, n as u32);
        let u_exp = term.u_exp as usize * n;
        let v_exp = term.v_exp as usize * n;
        let z_exp = term.z_exp as i64 * n as i64;
        if u_exp > order as usize || v_exp > order as usize {
            out.truncated = true;
            continue;
        }
        if z_exp.unsigned_abs() > z_window as u64 {
            out.truncated = true;
            continue;
        }
        let uv = UvPoly::monomial(u_exp as u16, v_exp as u16, twisted, order);
        let f = match term.letter {
            Letter::Unit => SymFunc::one(Basis::PowerSum, truncation, order).scale_uv(&uv),
            Letter::X => {
                if n > truncation {
                    out.truncated = true;
                    continue;
                }
                SymFunc::gen(
                    Basis::PowerSum,
                    &Partition::single(n as u32),
                    truncation,
                    order,
                )
                .scale_uv(&uv)
            }
        };
        out.add_component(z_exp as i32, &f);
    }
    out
}

/// Plethystic substitution F[A]. An algebra homomorphism in F for fixed A;
/// contributions outside the degree/u/v/z windows are dropped and flagged
/// on the result, never silently lost.
pub fn plethysm(f: &SymFunc, alphabet: &Alphabet) -> ZGradedSym {
    plethysm_windowed(f, alphabet, f.truncation() as i32)
}

pub fn plethysm_windowed(f: &SymFunc, alphabet: &Alphabet, z_window: i32) -> ZGradedSym {
    let fp = f.to_basis(Basis::PowerSum);
    let truncation = f.truncation();
    let order = f.order();
    let mut pn: BTreeMap<u32, ZGradedSym> = BTreeMap::new();
    for (lambda, _) in fp.terms() {
        for &part in lambda.parts() {
            pn.entry(part).or_insert_with(|| {
                p_n_of_alphabet(part as usize, alphabet, truncation, order, z_window)
            });
        }
    }
    let mut out = ZGradedSym::zero(truncation, order, z_window);
    for (lambda, c) in fp.terms() {
        let mut prod = ZGradedSym::one(truncation, order, z_window);
        for &part in lambda.parts() {
            prod = prod.mul(&pn[&part]);
        }
        out = out.add(&prod.scale_uv(c));
    }
    out
}

/// Plethystic exponential pExp[A] = sum_k h_k[A], truncated at `cutoff`
/// (the largest k summed; every term of A has positive weight, so h_k only
/// produces contributions of weight >= k).
pub fn pexp(
    alphabet: &Alphabet,
    cutoff: usize,
    truncation: usize,
    order: u16,
    z_window: i32,
) -> Result<ZGradedSym> {
    for term in alphabet.terms() {
        if Alphabet::term_weight(term) == 0 {
            return Err(Error::NonTruncatable);
        }
    }
    // h_k[A] by the Newton recurrence k h_k = sum p_i h_{k-i}
    let pn: Vec<ZGradedSym> = (0..=cutoff)
        .map(|n| {
            if n == 0 {
                ZGradedSym::zero(truncation, order, z_window)
            } else {
                p_n_of_alphabet(n, alphabet, truncation, order, z_window)
            }
        })
        .collect();
    let mut h: Vec<ZGradedSym> = Vec::with_capacity(cutoff + 1);
    h.push(ZGradedSym::one(truncation, order, z_window));
    for k in 1..=cutoff {
        let mut acc = ZGradedSym::zero(truncation, order, z_window);
        for i in 1..=k {
            acc = acc.add(&pn[i].mul(&h[k - i]));
        }
        let inv_k = QtRat::from_rational(BigRational::new(1.into(), (k as i64).into()));
        acc = acc.scale_uv(&UvPoly::constant(inv_k, order));
        h.push(acc);
    }
    let mut out = ZGradedSym::zero(truncation, order, z_window);
    for hk in &h {
        out = out.add(hk);
    }
    Ok(out)
}
