//! Small dense exact matrices. Dimensions here are partition counts per
//! degree (at most p(10) = 42), so dense storage and cubic algorithms are
//! the right tool.

use crate::qtcoeff::{QtRat, UvPoly};

/// Dense matrix over Q(q,t), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<QtRat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![QtRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = QtRat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> QtRat) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[QtRat]) -> Vec<QtRat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = QtRat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = &acc + &(&self[(i, j)] * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                    let tmp = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let p = a[(col, col)].inverse().expect("pivot nonzero");
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p;
                inv[(col, j)] = &inv[(col, j)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = &a[(r, j)] - &(&factor * &a[(col, j)]);
                    inv[(r, j)] = &inv[(r, j)] - &(&factor * &inv[(col, j)]);
                }
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let tmp = self[(p, j)].clone();
                    self[(p, j)] = self[(row, j)].clone();
                    self[(row, j)] = tmp;
                }
            }
            let inv = self[(row, col)].inverse().expect("pivot nonzero");
            for j in 0..self.cols {
                self[(row, j)] = &self[(row, j)] * &inv;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for j in 0..self.cols {
                    self[(r, j)] = &self[(r, j)] - &(&factor * &self[(row, j)]);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Basis of the right null space.
    pub fn null_space(&self) -> Vec<Vec<QtRat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![QtRat::zero(); self.cols];
            v[free] = QtRat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[(r, free)];
            }
            basis.push(v);
        }
        basis
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = QtRat;
    fn index(&self, (i, j): (usize, usize)) -> &QtRat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QtRat {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense matrix over the truncated u,v polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UMat {
    pub rows: usize,
    pub cols: usize,
    pub order: u16,
    data: Vec<UvPoly>,
}

impl UMat {
    pub fn zero(rows: usize, cols: usize, order: u16) -> Self {
        UMat {
            rows,
            cols,
            order,
            data: vec![UvPoly::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u16) -> Self {
        let mut m = Self::zero(n, n, order);
        for i in 0..n {
            m[(i, i)] = UvPoly::one(order);
        }
        m
    }

    pub fn from_qmat(q: &QMat, order: u16) -> Self {
        let mut m = Self::zero(q.rows, q.cols, order);
        for i in 0..q.rows {
            for j in 0..q.cols {
                if !q[(i, j)].is_zero() {
                    m[(i, j)] = UvPoly::constant(q[(i, j)].clone(), order);
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, rhs: &UMat) -> UMat {
        assert_eq!(self.cols, rhs.rows);
        let order = self.order.min(rhs.order);
        let mut out = UMat::zero(self.rows, rhs.cols, order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &UMat) -> UMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = &out[(i, j)] + &rhs[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, c: &QtRat) -> UMat {
        let mut out = self.clone();
        for e in out.data.iter_mut() {
            *e = e.scale(c);
        }
        out
    }

    pub fn scale_uv(&self, c: &UvPoly) -> UMat {
        let mut out = self.clone();
        for e in out.data.iter_mut() {
            *e = &*e * c;
        }
        out
    }

    pub fn neg(&self) -> UMat {
        self.scale(&QtRat::from_int(-1))
    }

    pub fn transpose(&self) -> UMat {
        let mut out = UMat::zero(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for UMat {
    type Output = UvPoly;
    fn index(&self, (i, j): (usize, usize)) -> &UvPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for UMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut UvPoly {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = QMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => QtRat::one(),
            (0, 1) => QtRat::q(),
            _ => QtRat::t(),
        });
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = QMat::from_fn(2, 2, |_, _| QtRat::one());
        assert!(m.inverse().is_none());
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
    }
}
