use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

use super::gcd::{div_exact_primitive, qt_gcd};
use super::poly::QtPoly;

/// Element of Q(q,t) in canonical form.
///
/// Invariants: `den != 0`; `gcd(num, den)` is a unit; both polynomials have
/// integer coefficients with coprime contents; the content of `den` is
/// positive and its lexicographically-least monomial has a positive
/// coefficient. Equal values therefore have identical representations and
/// `==` is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QtRat {
    num: QtPoly,
    den: QtPoly,
}

impl QtRat {
    /// Build from a numerator and denominator, reducing to canonical form.
    pub fn new(num: QtPoly, den: QtPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: QtPoly, den: QtPoly) -> Self {
        if num.is_zero() {
            return QtRat {
                num: QtPoly::zero(),
                den: QtPoly::one(),
            };
        }
        let g = qt_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                div_exact_primitive(&num, &g).expect("gcd divides numerator"),
                div_exact_primitive(&den, &g).expect("gcd divides denominator"),
            )
        };
        Self::normalize_coprime(num, den)
    }

    /// Content normalization only; caller guarantees gcd(num, den) = 1.
    fn normalize_coprime(num: QtPoly, den: QtPoly) -> Self {
        if num.is_zero() {
            return QtRat {
                num: QtPoly::zero(),
                den: QtPoly::one(),
            };
        }
        let (cn, num_p) = num.content_split();
        let (cd, den_p) = den.content_split();
        let c = cn / cd; // reduced, positive denominator
        let num = num_p.scale(&BigRational::from_integer(c.numer().clone()));
        let den = den_p.scale(&BigRational::from_integer(c.denom().clone()));
        QtRat { num, den }
    }

    pub fn zero() -> Self {
        QtRat {
            num: QtPoly::zero(),
            den: QtPoly::one(),
        }
    }

    pub fn one() -> Self {
        QtRat {
            num: QtPoly::one(),
            den: QtPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        QtRat {
            num: QtPoly::from_int(n),
            den: QtPoly::one(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        QtRat {
            num: QtPoly::constant(BigRational::from_integer(r.numer().clone())),
            den: QtPoly::constant(BigRational::from_integer(r.denom().clone())),
        }
    }

    pub fn from_poly(p: QtPoly) -> Self {
        Self::normalize_coprime(p, QtPoly::one())
    }

    pub fn q() -> Self {
        Self::from_poly(QtPoly::q())
    }

    pub fn t() -> Self {
        Self::from_poly(QtPoly::t())
    }

    /// A monomial c * q^a * t^b.
    pub fn monomial(a: u32, b: u32, c: i64) -> Self {
        Self::from_poly(QtPoly::monomial(
            a,
            b,
            BigRational::from_integer(BigInt::from(c)),
        ))
    }

    /// M = (1-q)(1-t).
    pub fn m_const() -> Self {
        let one = QtPoly::one();
        Self::from_poly(&(&one - &QtPoly::q()) * &(&one - &QtPoly::t()))
    }

    pub fn num(&self) -> &QtPoly {
        &self.num
    }

    pub fn den(&self) -> &QtPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_coprime(
            self.den.clone(),
            self.num.clone(),
        ))
    }

    /// Substitute q -> q^n, t -> t^n (the coefficient-level plethysm rule).
    pub fn twist(&self, n: u32) -> Self {
        assert!(n >= 1, "twist order must be positive");
        Self::normalize(self.num.twist(n), self.den.twist(n))
    }

    /// Interchange q and t.
    pub fn swap_qt(&self) -> Self {
        Self::normalize(self.num.swap_qt(), self.den.swap_qt())
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        Ok(out)
    }

    /// Evaluation at q = t = 1 when the denominator permits it.
    pub fn eval_at_one(&self) -> Option<BigRational> {
        let d = self.den.eval_at_one();
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_at_one() / d)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
}

impl Default for QtRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &QtRat {
    type Output = QtRat;
    fn add(self, rhs: Self) -> QtRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QtRat::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let g = qt_gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            // denominators coprime: the sum needs only content normalization
            // unless cancellation reaches the denominator; gcd(num, den)
            // can still be nontrivial, so reduce fully.
            return QtRat::normalize(num, den);
        }
        let da = div_exact_primitive(&self.den, &g).expect("gcd divides");
        let db = div_exact_primitive(&rhs.den, &g).expect("gcd divides");
        let num = &(&self.num * &db) + &(&rhs.num * &da);
        let den = &self.den * &db;
        QtRat::normalize(num, den)
    }
}

impl Sub for &QtRat {
    type Output = QtRat;
    fn sub(self, rhs: Self) -> QtRat {
        self + &(-rhs)
    }
}

impl Neg for &QtRat {
    type Output = QtRat;
    fn neg(self) -> QtRat {
        QtRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &QtRat {
    type Output = QtRat;
    fn mul(self, rhs: Self) -> QtRat {
        if self.is_zero() || rhs.is_zero() {
            return QtRat::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        // cross-reduce so the final pair is coprime by construction
        let g1 = qt_gcd(&self.num, &rhs.den);
        let g2 = qt_gcd(&rhs.num, &self.den);
        let na = div_exact_primitive(&self.num, &g1).expect("gcd divides");
        let db = div_exact_primitive(&rhs.den, &g1).expect("gcd divides");
        let nb = div_exact_primitive(&rhs.num, &g2).expect("gcd divides");
        let da = div_exact_primitive(&self.den, &g2).expect("gcd divides");
        QtRat::normalize_coprime(&na * &nb, &da * &db)
    }
}

impl Div for &QtRat {
    type Output = QtRat;
    fn div(self, rhs: Self) -> QtRat {
        self * &rhs.inverse().expect("division by zero")
    }
}

/// The four field operations behind one entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn qt_arith(a: &QtRat, b: &QtRat, op: QtOp) -> Result<QtRat> {
    match op {
        QtOp::Add => Ok(a + b),
        QtOp::Sub => Ok(a - b),
        QtOp::Mul => Ok(a * b),
        QtOp::Div => a.checked_div(b),
    }
}

/// Substitute q -> q^n, t -> t^n in a scalar.
pub fn power_twist(r: &QtRat, n: u32) -> QtRat {
    r.twist(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> QtRat {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_quotient_normalizes() {
        // (1-q^2)/(1-q) = 1+q
        let one = QtPoly::one();
        let q = QtPoly::q();
        let r = QtRat::new(&one - &q.pow(2), &one - &q).unwrap();
        assert_eq!(r, QtRat::from_poly(&one + &q));
        assert!(r.is_polynomial());
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let a = QtRat::m_const();
        let prod = &a * &a.inverse().unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn common_denominator_addition() {
        // 1/(1-q) + 1/(1-t) = (2-q-t)/((1-q)(1-t))
        let one = QtPoly::one();
        let a = QtRat::new(one.clone(), &one - &QtPoly::q()).unwrap();
        let b = QtRat::new(one.clone(), &one - &QtPoly::t()).unwrap();
        let sum = &a + &b;
        assert_eq!(sum, parse("(2 - q - t)/((1 - q)*(1 - t))"));
    }

    #[test]
    fn twist_examples() {
        // 1/M -> 1/((1-q^2)(1-t^2)) at n=2
        let inv_m = QtRat::m_const().inverse().unwrap();
        let tw = power_twist(&inv_m, 2);
        let one = QtPoly::one();
        let expected = QtRat::new(
            one.clone(),
            &(&one - &QtPoly::q().pow(2)) * &(&one - &QtPoly::t().pow(2)),
        )
        .unwrap();
        assert_eq!(tw, expected);
        // q+t at n=3 -> q^3+t^3
        let s = &QtRat::q() + &QtRat::t();
        assert_eq!(
            power_twist(&s, 3),
            QtRat::from_poly(&QtPoly::q().pow(3) + &QtPoly::t().pow(3))
        );
        // constants are fixed
        let five = QtRat::from_int(5);
        assert_eq!(power_twist(&five, 7), five);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = QtRat::q();
        assert!(matches!(
            qt_arith(&a, &QtRat::zero(), QtOp::Div),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let r = parse("(1 + q*t^2)/(1 - q)");
        let again = QtRat::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(r, again);
    }
}
