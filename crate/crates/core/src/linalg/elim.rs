//! Gauss–Jordan elimination and what follows from it.

use num::{One, Zero};

use super::Matrix;
use crate::rational::Rational;

/// Reduced row-echelon form and the ordered pivot columns.
///
/// Pivot columns are chosen left to right; within a column the first row at
/// or below the current one with a nonzero entry is used.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..r.cols() {
        if lead == r.rows() {
            break;
        }
        let Some(src) = (lead..r.rows()).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        if src != lead {
            for j in 0..r.cols() {
                let tmp = r[(src, j)].clone();
                r[(src, j)] = r[(lead, j)].clone();
                r[(lead, j)] = tmp;
            }
        }
        pivot_on(&mut r, lead, col);
        pivots.push(col);
        lead += 1;
    }
    (r, pivots)
}

/// Scales row `row` so that `(row, col)` becomes 1, then clears `col` in
/// every other row.
pub(crate) fn pivot_on(m: &mut Matrix, row: usize, col: usize) {
    let p = m[(row, col)].clone();
    debug_assert!(!p.is_zero(), "pivot on a zero entry");
    if !p.is_one() {
        for v in m.row_mut(row) {
            *v /= &p;
        }
    }
    let pivot_row = m.row(row).to_vec();
    for i in 0..m.rows() {
        if i == row {
            continue;
        }
        let factor = m[(i, col)].clone();
        if factor.is_zero() {
            continue;
        }
        for (v, pv) in m.row_mut(i).iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// A basis of `{x : m·x = 0}`, one vector per free column, with the free
/// variable set to 1.
pub fn nullspace_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut x = vec![Rational::zero(); m.cols()];
            x[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r[(row, free)].clone();
            }
            x
        })
        .collect()
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero, so the returned solution is determined by
/// the left-to-right pivot order.
pub fn solve_linear(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let augmented = m.with_column(b).expect("checked length");
    let (r, pivots) = rref(&augmented);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// Incrementally maintained, fully reduced row basis.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn residual(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let factor = r[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.residual(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns `true` iff it was independent.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.residual(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[p].clone();
        for x in r.iter_mut() {
            *x /= &lead;
        }
        for row in self.rows.iter_mut() {
            let factor = row[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, b) in row.iter_mut().zip(&r) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}
