use std::collections::{BTreeMap, BTreeSet};

use crate::qtcoeff::{QtRat, UvPoly};
use crate::symfunc::{Basis, Partition, SymFunc};

use super::graded::{DegreeWindow, GradedOperator, Mismatch};

/// Finitely supported element of End(V)[[u,v]] truncated at `order`:
/// a map from (u-exponent, v-exponent) to a graded operator. Windows are
/// tracked per coefficient; `window()` reports the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSeries {
    n: usize,
    order: u16,
    coeffs: BTreeMap<(u16, u16), GradedOperator>,
}

/// A located disagreement between two series: the coefficient cell, the
/// input basis vector, and the first differing output coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMismatch {
    pub u_exp: u16,
    pub v_exp: u16,
    pub source: Partition,
    pub target: Partition,
    pub lhs: UvPoly,
    pub rhs: UvPoly,
}

impl OperatorSeries {
    pub fn zero(n: usize, order: u16) -> Self {
        OperatorSeries {
            n,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, order: u16) -> Self {
        let mut s = Self::zero(n, order);
        s.coeffs.insert((0, 0), GradedOperator::identity(n, order));
        s
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn set_coeff(&mut self, u_exp: u16, v_exp: u16, op: GradedOperator) {
        if u_exp > self.order || v_exp > self.order {
            return;
        }
        if op.is_zero() && op.window() == DegreeWindow::full(self.n) {
            self.coeffs.remove(&(u_exp, v_exp));
        } else {
            self.coeffs.insert((u_exp, v_exp), op);
        }
    }

    pub fn coeff(&self, u_exp: u16, v_exp: u16) -> GradedOperator {
        self.coeffs
            .get(&(u_exp, v_exp))
            .cloned()
            .unwrap_or_else(|| GradedOperator::zero(self.n, self.order))
    }

    pub fn coeff_ref(&self, u_exp: u16, v_exp: u16) -> Option<&GradedOperator> {
        self.coeffs.get(&(u_exp, v_exp))
    }

    pub fn support(&self) -> impl Iterator<Item = &(u16, u16)> {
        self.coeffs.keys()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u16, u16), &GradedOperator)> {
        self.coeffs.iter()
    }

    /// Minimum window over all stored coefficients.
    pub fn window(&self) -> DegreeWindow {
        self.coeffs
            .values()
            .map(|op| op.window())
            .fold(DegreeWindow::full(self.n), DegreeWindow::min)
    }

    /// Series composition: convolve exponents, compose coefficient operators.
    pub fn compose(&self, rhs: &OperatorSeries) -> OperatorSeries {
        assert_eq!(self.n, rhs.n);
        let order = self.order.min(rhs.order);
        let mut cells: BTreeMap<(u16, u16), GradedOperator> = BTreeMap::new();
        for (&(i1, j1), a) in self.coeffs.iter() {
            for (&(i2, j2), b) in rhs.coeffs.iter() {
                let key = (i1 + i2, j1 + j2);
                if key.0 > order || key.1 > order {
                    continue;
                }
                let prod = a.compose(b);
                let entry = cells
                    .entry(key)
                    .or_insert_with(|| GradedOperator::zero(self.n, order));
                *entry = entry.add(&prod);
            }
        }
        let mut out = OperatorSeries::zero(self.n, order);
        for (k, v) in cells {
            out.set_coeff(k.0, k.1, v);
        }
        out
    }

    pub fn add(&self, rhs: &OperatorSeries) -> OperatorSeries {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        out.order = self.order.min(rhs.order);
        for (&(i, j), b) in rhs.coeffs.iter() {
            let sum = out.coeff(i, j).add(b);
            out.set_coeff(i, j, sum);
        }
        out
    }

    pub fn sub(&self, rhs: &OperatorSeries) -> OperatorSeries {
        self.add(&rhs.scale(&QtRat::from_int(-1)))
    }

    pub fn scale(&self, c: &QtRat) -> OperatorSeries {
        let mut out = self.clone();
        for op in out.coeffs.values_mut() {
            *op = op.scale(c);
        }
        out
    }

    /// Multiply by a scalar u,v-series (given by its coefficient map).
    pub fn scale_scalar_series(&self, scalars: &BTreeMap<(u16, u16), QtRat>) -> OperatorSeries {
        let mut out = OperatorSeries::zero(self.n, self.order);
        for (&(i1, j1), c) in scalars.iter() {
            if c.is_zero() {
                continue;
            }
            for (&(i2, j2), op) in self.coeffs.iter() {
                let key = (i1 + i2, j1 + j2);
                if key.0 > self.order || key.1 > self.order {
                    continue;
                }
                let scaled = op.scale(c);
                let sum = out.coeff(key.0, key.1).add(&scaled);
                out.set_coeff(key.0, key.1, sum);
            }
        }
        out
    }

    /// Re-index exponents through `f`, dropping cells beyond the order.
    /// Windows ride along unchanged.
    pub fn re_index(&self, f: impl Fn(u16, u16) -> (u16, u16)) -> OperatorSeries {
        let mut out = OperatorSeries::zero(self.n, self.order);
        for (&(i, j), op) in self.coeffs.iter() {
            let (ni, nj) = f(i, j);
            if ni > self.order || nj > self.order {
                continue;
            }
            debug_assert!(out.coeff_ref(ni, nj).is_none(), "re-index collision");
            out.set_coeff(ni, nj, op.clone());
        }
        out
    }

    /// Apply the whole series to F, folding u^i v^j into the coefficients.
    pub fn apply(&self, f: &SymFunc) -> SymFunc {
        let mut out = SymFunc::zero(Basis::PowerSum, self.n, self.order);
        for (&(i, j), op) in self.coeffs.iter() {
            let image = op.apply(f);
            out = out.add(&image.scale_uv(&UvPoly::monomial(i, j, QtRat::one(), self.order)));
        }
        out
    }

    /// Geometric-series inverse for a series with identity constant term,
    /// computed slot by slot in total-degree order.
    pub fn invert_geometric(&self) -> OperatorSeries {
        let c0 = self.coeff(0, 0);
        assert!(
            c0.mismatches(
                &GradedOperator::identity(self.n, self.order),
                self.n as i64,
                self.n as i64
            )
            .is_empty(),
            "geometric inversion needs an identity constant term"
        );
        let mut inv = OperatorSeries::zero(self.n, self.order);
        inv.set_coeff(0, 0, GradedOperator::identity(self.n, self.order));
        let mut slots: Vec<(u16, u16)> = Vec::new();
        for total in 1..=(2 * self.order) {
            for i in 0..=total.min(self.order) {
                let j = total - i;
                if j <= self.order {
                    slots.push((i, j));
                }
            }
        }
        for (i, j) in slots {
            // B_s = - sum_{0 < r <= s} A_r B_{s-r}
            let mut acc = GradedOperator::zero(self.n, self.order);
            let mut any = false;
            for (&(a1, a2), op) in self.coeffs.iter() {
                if (a1, a2) == (0, 0) || a1 > i || a2 > j {
                    continue;
                }
                let prev = inv.coeff(i - a1, j - a2);
                if prev.is_zero() && op.is_zero() {
                    continue;
                }
                acc = acc.add(&op.compose(&prev));
                any = true;
            }
            if any {
                inv.set_coeff(i, j, acc.neg());
            }
        }
        inv
    }

    /// Coefficientwise comparison on the intersected windows. Cells present
    /// on either side are compared (a missing cell is the zero operator).
    pub fn mismatches(&self, rhs: &OperatorSeries) -> Vec<SeriesMismatch> {
        let mut cells: BTreeSet<(u16, u16)> = self.coeffs.keys().copied().collect();
        cells.extend(rhs.coeffs.keys().copied());
        let mut out = Vec::new();
        for (i, j) in cells {
            if i > self.order.min(rhs.order) || j > self.order.min(rhs.order) {
                continue;
            }
            let a = self.coeff(i, j);
            let b = rhs.coeff(i, j);
            let w = a.window().min(b.window());
            for m in a.mismatches(&b, w.max_input_degree, self.n as i64) {
                out.push(SeriesMismatch {
                    u_exp: i,
                    v_exp: j,
                    source: m.source,
                    target: m.target,
                    lhs: m.lhs,
                    rhs: m.rhs,
                });
            }
        }
        out
    }
}

/// Promote a graded-operator mismatch list into series form at a fixed cell.
pub fn lift_mismatches(u_exp: u16, v_exp: u16, ms: Vec<Mismatch>) -> Vec<SeriesMismatch> {
    ms.into_iter()
        .map(|m| SeriesMismatch {
            u_exp,
            v_exp,
            source: m.source,
            target: m.target,
            lhs: m.lhs,
            rhs: m.rhs,
        })
        .collect()
}
