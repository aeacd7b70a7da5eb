use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::QtRat;

/// Polynomial in the series variables u, v with Q(q,t) coefficients,
/// truncated to exponents <= `order` in each variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UvPoly {
    terms: BTreeMap<(u16, u16), QtRat>,
    order: u16,
}

impl UvPoly {
    pub fn zero(order: u16) -> Self {
        UvPoly {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn constant(c: QtRat, order: u16) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        UvPoly { terms, order }
    }

    pub fn one(order: u16) -> Self {
        Self::constant(QtRat::one(), order)
    }

    pub fn monomial(u_exp: u16, v_exp: u16, c: QtRat, order: u16) -> Self {
        let mut out = Self::zero(order);
        out.add_term((u_exp, v_exp), &c);
        out
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&(0, 0)).map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the value is a pure scalar (no u, v dependence).
    pub fn as_constant(&self) -> Option<&QtRat> {
        if self.terms.is_empty() {
            None
        } else if self.terms.len() == 1 {
            self.terms.get(&(0, 0))
        } else {
            None
        }
    }

    pub fn coeff(&self, u_exp: u16, v_exp: u16) -> QtRat {
        self.terms
            .get(&(u_exp, v_exp))
            .cloned()
            .unwrap_or_else(QtRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u16, u16), &QtRat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: (u16, u16), c: &QtRat) {
        if c.is_zero() || key.0 > self.order || key.1 > self.order {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &QtRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        if c.is_one() {
            return self.clone();
        }
        UvPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            order: self.order,
        }
    }

    /// Shift all exponents by (du, dv), discarding anything beyond the order.
    pub fn shift(&self, du: u16, dv: u16) -> Self {
        let mut out = Self::zero(self.order);
        for (&(a, b), c) in self.terms.iter() {
            out.add_term((a + du, b + dv), c);
        }
        out
    }
}

impl Add for &UvPoly {
    type Output = UvPoly;
    fn add(self, rhs: Self) -> UvPoly {
        let mut out = self.clone();
        out.order = self.order.min(rhs.order);
        for (k, c) in rhs.terms.iter() {
            out.add_term(*k, c);
        }
        out.terms.retain(|k, _| k.0 <= out.order && k.1 <= out.order);
        out
    }
}

impl Sub for &UvPoly {
    type Output = UvPoly;
    fn sub(self, rhs: Self) -> UvPoly {
        self + &(-rhs)
    }
}

impl Neg for &UvPoly {
    type Output = UvPoly;
    fn neg(self) -> UvPoly {
        UvPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            order: self.order,
        }
    }
}

impl Mul for &UvPoly {
    type Output = UvPoly;
    fn mul(self, rhs: Self) -> UvPoly {
        let order = self.order.min(rhs.order);
        if self.is_zero() || rhs.is_zero() {
            return UvPoly::zero(order);
        }
        if let Some(c) = self.as_constant() {
            let mut out = rhs.scale(c);
            out.order = order;
            return out;
        }
        if let Some(c) = rhs.as_constant() {
            let mut out = self.scale(c);
            out.order = order;
            return out;
        }
        let mut out = UvPoly::zero(order);
        for (&(a1, b1), c1) in self.terms.iter() {
            for (&(a2, b2), c2) in rhs.terms.iter() {
                let key = (a1 + a2, b1 + b2);
                if key.0 > order || key.1 > order {
                    continue;
                }
                out.add_term(key, &(c1 * c2));
            }
        }
        out
    }
}

fn uv_monomial_string(u_exp: u16, v_exp: u16) -> String {
    let mut parts = Vec::new();
    match u_exp {
        0 => {}
        1 => parts.push("u".to_string()),
        e => parts.push(format!("u^{}", e)),
    }
    match v_exp {
        0 => {}
        1 => parts.push("v".to_string()),
        e => parts.push(format!("v^{}", e)),
    }
    parts.join("*")
}

impl fmt::Display for UvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(&(a, b), _)| (b, a));
        for (&(a, b), c) in sorted {
            let mono = uv_monomial_string(a, b);
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{}", mono)
            } else {
                format!("({})*{}", c, mono)
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_discards_high_orders() {
        let u = UvPoly::monomial(1, 0, QtRat::one(), 2);
        let u2 = &u * &u;
        assert_eq!(u2.coeff(2, 0), QtRat::one());
        let u3 = &u2 * &u;
        assert!(u3.is_zero());
    }

    #[test]
    fn display_forms() {
        let mut p = UvPoly::one(3);
        p.add_term((1, 1), &QtRat::from_int(-1));
        assert_eq!(p.to_string(), "1 - u*v");
        let q = UvPoly::monomial(2, 0, &QtRat::q() + &QtRat::t(), 3);
        assert_eq!(q.to_string(), "(q + t)*u^2");
    }
}
