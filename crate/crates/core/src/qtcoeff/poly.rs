use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Sparse polynomial in q and t with rational coefficients.
///
/// Keys are `(q_exponent, t_exponent)`; the `BTreeMap` order is
/// (q-degree, then t-degree) ascending, which is also the canonical
/// monomial order of the scalar grammar. No zero coefficient is stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QtPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl QtPoly {
    pub fn zero() -> Self {
        QtPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        QtPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn q() -> Self {
        Self::monomial(1, 0, BigRational::one())
    }

    pub fn t() -> Self {
        Self::monomial(0, 1, BigRational::one())
    }

    pub fn monomial(q_exp: u32, t_exp: u32, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((q_exp, t_exp), coeff);
        }
        QtPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(0, 0))
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|k| *k == (0, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, q_exp: u32, t_exp: u32) -> BigRational {
        self.terms
            .get(&(q_exp, t_exp))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn degree_q(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_t(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Least monomial in the canonical grammar order (constant first, then
    /// ascending with q varying fastest), if any.
    pub fn least_monomial(&self) -> Option<(&(u32, u32), &BigRational)> {
        self.terms
            .iter()
            .min_by_key(|(&(a, b), _)| (b, a))
    }

    /// Terms sorted in the canonical grammar order.
    pub fn canonical_terms(&self) -> Vec<(&(u32, u32), &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(&(a, b), _)| (b, a));
        v
    }

    /// Lexicographically greatest monomial; the leading term for exact division.
    pub fn leading(&self) -> Option<(&(u32, u32), &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Substitute q -> q^n, t -> t^n.
    pub fn twist(&self, n: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| ((a * n, b * n), c.clone()))
            .collect();
        QtPoly { terms }
    }

    /// Interchange q and t.
    pub fn swap_qt(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| ((b, a), c.clone()))
            .collect();
        QtPoly { terms }
    }

    /// Sum of all coefficients, i.e. the evaluation at q = t = 1.
    pub fn eval_at_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Componentwise minimum of exponents over all terms: the monomial content.
    pub fn monomial_content(&self) -> (u32, u32) {
        let mut mq = u32::MAX;
        let mut mt = u32::MAX;
        for k in self.terms.keys() {
            mq = mq.min(k.0);
            mt = mt.min(k.1);
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (mq, mt)
        }
    }

    pub fn mul_monomial(&self, q_exp: u32, t_exp: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| ((a + q_exp, b + t_exp), c.clone()))
            .collect();
        QtPoly { terms }
    }

    pub fn div_monomial(&self, q_exp: u32, t_exp: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| {
                debug_assert!(a >= q_exp && b >= t_exp);
                ((a - q_exp, b - t_exp), c.clone())
            })
            .collect();
        QtPoly { terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (*k, v * c))
            .collect();
        QtPoly { terms }
    }

    /// Split off the signed rational content: returns `(c, p)` with
    /// `self = c * p`, `p` having coprime integer coefficients whose
    /// lexicographically least one is positive. Zero splits as `(0, 0)`.
    pub fn content_split(&self) -> (BigRational, QtPoly) {
        if self.is_zero() {
            return (BigRational::zero(), QtPoly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        let least = self.least_monomial().unwrap().1;
        if least.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Exact division; `None` if `g` does not divide `self`.
    pub fn exact_div(&self, g: &QtPoly) -> Option<QtPoly> {
        assert!(!g.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(QtPoly::zero());
        }
        if g.is_one() {
            return Some(self.clone());
        }
        let (gkey, gc) = {
            let (k, c) = g.leading().unwrap();
            (*k, c.clone())
        };
        let mut rem = self.clone();
        let mut quot = QtPoly::zero();
        while !rem.is_zero() {
            let (rkey, rc) = {
                let (k, c) = rem.leading().unwrap();
                (*k, c.clone())
            };
            if rkey.0 < gkey.0 || rkey.1 < gkey.1 {
                return None;
            }
            let mkey = (rkey.0 - gkey.0, rkey.1 - gkey.1);
            let mc = rc / &gc;
            quot.add_term(mkey, &mc);
            let piece = g.mul_monomial(mkey.0, mkey.1).scale(&mc);
            rem = &rem - &piece;
        }
        Some(quot)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = QtPoly::one();
        for _ in 0..n {
            result = &result * self;
        }
        result
    }
}

impl Add for &QtPoly {
    type Output = QtPoly;
    fn add(self, rhs: Self) -> QtPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms.iter() {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &QtPoly {
    type Output = QtPoly;
    fn sub(self, rhs: Self) -> QtPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms.iter() {
            out.add_term(*k, &(-c));
        }
        out
    }
}

impl Neg for &QtPoly {
    type Output = QtPoly;
    fn neg(self) -> QtPoly {
        QtPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QtPoly {
    type Output = QtPoly;
    fn mul(self, rhs: Self) -> QtPoly {
        if self.is_zero() || rhs.is_zero() {
            return QtPoly::zero();
        }
        // Single-monomial fast paths cover most calls from fraction reduction.
        if self.terms.len() == 1 {
            let (&(a, b), c) = self.terms.iter().next().unwrap();
            return rhs.mul_monomial(a, b).scale(c);
        }
        if rhs.terms.len() == 1 {
            let (&(a, b), c) = rhs.terms.iter().next().unwrap();
            return self.mul_monomial(a, b).scale(c);
        }
        let mut out = QtPoly::zero();
        for (&(a1, b1), c1) in self.terms.iter() {
            for (&(a2, b2), c2) in rhs.terms.iter() {
                out.add_term((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn arithmetic_basics() {
        let q = QtPoly::q();
        let t = QtPoly::t();
        let sum = &q + &t;
        assert_eq!(sum.num_terms(), 2);
        let prod = &sum * &sum;
        // (q+t)^2 = q^2 + 2qt + t^2
        assert_eq!(prod.coeff(1, 1), big(2));
        assert_eq!(prod.coeff(2, 0), big(1));
        assert!((&prod - &prod).is_zero());
    }

    #[test]
    fn exact_division() {
        let q = QtPoly::q();
        let one = QtPoly::one();
        // (1 - q^2) / (1 - q) = 1 + q
        let num = &one - &q.pow(2);
        let den = &one - &q;
        let quot = num.exact_div(&den).unwrap();
        assert_eq!(quot, &one + &q);
        // non-divisible
        assert!((&one + &q).exact_div(&(&one - &q)).is_none());
    }

    #[test]
    fn content_split_normalizes_sign() {
        let p = QtPoly::monomial(1, 0, big(-2)); // -2q
        let (c, pp) = p.content_split();
        assert_eq!(c, big(-2));
        assert_eq!(pp, QtPoly::q());
    }

    #[test]
    fn twist_multiplies_exponents() {
        let m = &QtPoly::q() + &QtPoly::t(); // q + t
        let tw = m.twist(3);
        assert_eq!(tw.coeff(3, 0), big(1));
        assert_eq!(tw.coeff(0, 3), big(1));
        assert_eq!(tw.num_terms(), 2);
    }
}
