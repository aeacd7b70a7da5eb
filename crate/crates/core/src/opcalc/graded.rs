use std::collections::{BTreeMap, BTreeSet};

use num::BigRational;

use crate::linalg::UMat;
use crate::qtcoeff::{QtRat, UvPoly};
use crate::symfunc::{partitions_of, Basis, Partition, SymFunc};

/// Validity bookkeeping for operators on the truncated space: identity
/// assertions are trusted only for inputs of degree at most
/// `max_input_degree`. A negative value means the window is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeWindow {
    pub max_input_degree: i64,
}

impl DegreeWindow {
    pub fn full(n: usize) -> Self {
        DegreeWindow {
            max_input_degree: n as i64,
        }
    }

    pub fn empty() -> Self {
        DegreeWindow {
            max_input_degree: -1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.max_input_degree < 0
    }

    pub fn min(self, other: DegreeWindow) -> DegreeWindow {
        DegreeWindow {
            max_input_degree: self.max_input_degree.min(other.max_input_degree),
        }
    }

    pub fn shrink(self, by: i64) -> DegreeWindow {
        DegreeWindow {
            max_input_degree: self.max_input_degree - by,
        }
    }
}

/// Exact linear map on the truncated symmetric-function space, stored as
/// dense blocks per (source degree, target degree) in power-sum coordinates.
/// Columns with source degree within the window are exact truncations of the
/// true operator's images; anything beyond the window is never compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOperator {
    n: usize,
    order: u16,
    blocks: BTreeMap<(usize, usize), UMat>,
    window: DegreeWindow,
}

/// One located disagreement between two operators applied to a basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub source: Partition,
    pub target: Partition,
    pub lhs: UvPoly,
    pub rhs: UvPoly,
}

impl GradedOperator {
    pub fn zero(n: usize, order: u16) -> Self {
        GradedOperator {
            n,
            order,
            blocks: BTreeMap::new(),
            window: DegreeWindow::full(n),
        }
    }

    pub fn identity(n: usize, order: u16) -> Self {
        let mut op = Self::zero(n, order);
        for d in 0..=n {
            let dim = partitions_of(d).list.len();
            op.blocks.insert((d, d), UMat::identity(dim, order));
        }
        op
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn with_window(mut self, window: DegreeWindow) -> Self {
        self.window = window;
        self
    }

    pub fn shrink_window(mut self, by: i64) -> Self {
        self.window = self.window.shrink(by);
        self
    }

    pub fn block(&self, src: usize, tgt: usize) -> Option<&UMat> {
        self.blocks.get(&(src, tgt))
    }

    pub fn set_block(&mut self, src: usize, tgt: usize, m: UMat) {
        debug_assert_eq!(m.cols, partitions_of(src).list.len());
        debug_assert_eq!(m.rows, partitions_of(tgt).list.len());
        if m.is_zero() {
            self.blocks.remove(&(src, tgt));
        } else {
            self.blocks.insert((src, tgt), m);
        }
    }

    pub fn add_to_block(&mut self, src: usize, tgt: usize, m: &UMat) {
        let cur = match self.blocks.get(&(src, tgt)) {
            Some(b) => b.add(m),
            None => m.clone(),
        };
        self.set_block(src, tgt, cur);
    }

    /// Degree shifts (target minus source) present in the stored blocks.
    pub fn shift_profile(&self) -> BTreeSet<i64> {
        self.blocks
            .keys()
            .map(|&(s, t)| t as i64 - s as i64)
            .collect()
    }

    /// Largest positive degree shift; 0 for degree-preserving or lowering maps.
    pub fn max_raise(&self) -> i64 {
        self.shift_profile().into_iter().max().unwrap_or(0).max(0)
    }

    /// Largest degree drop; 0 for degree-preserving or raising maps.
    pub fn max_drop(&self) -> i64 {
        (-self.shift_profile().into_iter().min().unwrap_or(0)).max(0)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Composition self after rhs. The window shrinks so that intermediate
    /// results stay uncorrupted: inputs must stay within rhs's window and
    /// rhs's raised outputs within self's.
    pub fn compose(&self, rhs: &GradedOperator) -> GradedOperator {
        assert_eq!(self.n, rhs.n);
        let mut out = GradedOperator::zero(self.n, self.order.min(rhs.order));
        for (&(s, m), b) in rhs.blocks.iter() {
            for (&(m2, t), a) in self.blocks.iter() {
                if m2 != m {
                    continue;
                }
                let prod = a.mul(b);
                out.add_to_block(s, t, &prod);
            }
        }
        out.window = rhs
            .window
            .min(self.window.shrink(rhs.max_raise()));
        out
    }

    pub fn add(&self, rhs: &GradedOperator) -> GradedOperator {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (&(s, t), b) in rhs.blocks.iter() {
            out.add_to_block(s, t, b);
        }
        out.window = self.window.min(rhs.window);
        out
    }

    pub fn sub(&self, rhs: &GradedOperator) -> GradedOperator {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> GradedOperator {
        self.scale(&QtRat::from_int(-1))
    }

    pub fn scale(&self, c: &QtRat) -> GradedOperator {
        let mut out = self.clone();
        if c.is_zero() {
            out.blocks.clear();
            return out;
        }
        for b in out.blocks.values_mut() {
            *b = b.scale(c);
        }
        out
    }

    pub fn scale_uv(&self, c: &UvPoly) -> GradedOperator {
        let mut out = self.clone();
        if c.is_zero() {
            out.blocks.clear();
            return out;
        }
        for b in out.blocks.values_mut() {
            *b = b.scale_uv(c);
        }
        out
    }

    /// Apply to a symmetric function given in power-sum coordinates.
    pub fn apply(&self, f: &SymFunc) -> SymFunc {
        assert_eq!(f.basis(), Basis::PowerSum, "operators act in p-coordinates");
        let mut out = SymFunc::zero(Basis::PowerSum, self.n, self.order);
        for d in f.degrees() {
            let v = f.slice(d);
            for (&(s, t), b) in self.blocks.iter() {
                if s != d {
                    continue;
                }
                let table = partitions_of(t);
                for (i, target) in table.list.iter().enumerate() {
                    let mut acc = UvPoly::zero(self.order);
                    for (j, vj) in v.iter().enumerate() {
                        if vj.is_zero() || b[(i, j)].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&b[(i, j)] * vj);
                    }
                    out.add_coeff(target, &acc);
                }
            }
        }
        out
    }

    /// Image of the basis vector p_lambda as a symmetric function.
    pub fn apply_basis(&self, lambda: &Partition) -> SymFunc {
        let d = lambda.size();
        let col = partitions_of(d).index[lambda];
        let mut out = SymFunc::zero(Basis::PowerSum, self.n, self.order);
        for (&(s, t), b) in self.blocks.iter() {
            if s != d {
                continue;
            }
            let table = partitions_of(t);
            for (i, target) in table.list.iter().enumerate() {
                out.add_coeff(target, &b[(i, col)]);
            }
        }
        out
    }

    /// Keep only blocks with the given degree shift.
    pub fn crop_to_shift(&self, shift: i64) -> GradedOperator {
        let mut out = self.clone();
        out.blocks
            .retain(|&(s, t), _| t as i64 - s as i64 == shift);
        out
    }

    /// Drop blocks whose target degree exceeds `max_tgt`.
    pub fn crop_targets(&self, max_tgt: i64) -> GradedOperator {
        let mut out = self.clone();
        out.blocks.retain(|&(_, t), _| (t as i64) <= max_tgt);
        out
    }

    /// Adjoint with respect to the Hall or modified (star) pairing, both
    /// diagonal in power-sum coordinates. Requires a full-window operator;
    /// rows and columns swap roles, so partial validity would not transport.
    pub fn adjoint(&self, pairing: Pairing) -> GradedOperator {
        assert!(
            self.window == DegreeWindow::full(self.n),
            "adjoint needs a full-window operator"
        );
        let mut out = GradedOperator::zero(self.n, self.order);
        for (&(s, t), b) in self.blocks.iter() {
            let src_table = partitions_of(s);
            let tgt_table = partitions_of(t);
            let mut m = UMat::zero(src_table.list.len(), tgt_table.list.len(), self.order);
            for i in 0..src_table.list.len() {
                let wi = pairing.norm(&src_table.list[i]);
                let wi_inv = wi.inverse().expect("pairing norms are nonzero");
                for j in 0..tgt_table.list.len() {
                    let e = &b[(j, i)];
                    if e.is_zero() {
                        continue;
                    }
                    let wj = pairing.norm(&tgt_table.list[j]);
                    m[(i, j)] = e.scale(&(&wj * &wi_inv));
                }
            }
            out.set_block(t, s, m);
        }
        out
    }

    /// Compare columns against `rhs` for sources of degree <= `max_src` and
    /// targets of degree <= `max_tgt`; returns every located difference.
    pub fn mismatches(
        &self,
        rhs: &GradedOperator,
        max_src: i64,
        max_tgt: i64,
    ) -> Vec<Mismatch> {
        let mut out = Vec::new();
        if max_src < 0 {
            return out;
        }
        for s in 0..=(max_src.min(self.n as i64) as usize) {
            let src_table = partitions_of(s);
            for t in 0..=(max_tgt.min(self.n as i64).max(0) as usize) {
                if max_tgt < 0 {
                    continue;
                }
                let la = self.block(s, t);
                let lb = rhs.block(s, t);
                if la.is_none() && lb.is_none() {
                    continue;
                }
                let tgt_table = partitions_of(t);
                for j in 0..src_table.list.len() {
                    for i in 0..tgt_table.list.len() {
                        let ea = la
                            .map(|m| m[(i, j)].clone())
                            .unwrap_or_else(|| UvPoly::zero(self.order));
                        let eb = lb
                            .map(|m| m[(i, j)].clone())
                            .unwrap_or_else(|| UvPoly::zero(self.order));
                        if ea != eb {
                            out.push(Mismatch {
                                source: src_table.list[j].clone(),
                                target: tgt_table.list[i].clone(),
                                lhs: ea,
                                rhs: eb,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// True when every column within the window vanishes (up to `max_src`).
    pub fn is_zero_on(&self, max_src: i64) -> bool {
        self.mismatches(&GradedOperator::zero(self.n, self.order), max_src, self.n as i64)
            .is_empty()
    }
}

/// The two inner products used by the harness; both are diagonal on power
/// sums, with norms z_lambda and z_lambda prod_i (-(1-q^{l_i})(1-t^{l_i})).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Hall,
    Star,
}

impl Pairing {
    pub fn norm(&self, lambda: &Partition) -> QtRat {
        let z = QtRat::from_rational(BigRational::from_integer(lambda.z()));
        match self {
            Pairing::Hall => z,
            Pairing::Star => {
                let mut w = z;
                for &part in lambda.parts() {
                    let m_tw = crate::qtcoeff::power_twist(&QtRat::m_const(), part);
                    w = &w * &(-&m_tw);
                }
                w
            }
        }
    }
}
