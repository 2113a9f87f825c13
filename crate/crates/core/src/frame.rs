//! Frame of a conical hull by pivoting, and extreme points of a convex hull.
//!
//! Points are the columns of a matrix. The tableau is first brought into
//! canonical form by Gauss–Jordan elimination, so every column is expressed
//! in the coordinates of the current basis columns. Then:
//!
//! * a nonbasic column with nonnegative coordinates is a conic combination of
//!   the basis and is deleted;
//! * a row in which the column under study is the only negative entry is a
//!   functional separating it from all other columns, so it is necessary;
//! * otherwise simplex steps are taken that raise the negative entry of the
//!   pilot row while keeping nonnegative coordinates nonnegative.
//!
//! Basic columns are decided last: a basic column whose row has no other
//! positive entry is necessary; otherwise it is pivoted out of the basis and
//! treated like a nonbasic column.
//!
//! Extreme points of a convex hull are the frame of the cone over the points
//! lifted by an extra coordinate equal to 1.
//!
//! All selections (constant column, pilot row, pivot column, pivot row) use
//! the lowest admissible index; pivot-row ties are broken by the lowest basic
//! column, which is Bland's anti-cycling rule and keeps degenerate inputs
//! terminating.

use num::{Signed, Zero};

use crate::linalg::{rref, simplex_feasible_nonneg, Matrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Undecided,
    Necessary,
    Deleted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMode {
    Conic,
    Convex,
}

/// Working state of the frame computation.
#[derive(Debug, Clone)]
pub struct Tableau {
    matrix: Matrix,
    labels: Vec<Label>,
    /// `basis[r]` is the column that is the `r`-th unit vector.
    basis: Vec<usize>,
    pilot_row: Option<usize>,
    constant_column: Option<usize>,
    pivots: usize,
}

impl Tableau {
    /// Canonical form of `points`; every column starts undecided.
    pub fn new(points: &Matrix) -> Self {
        let (reduced, basis) = rref(points);
        let rows: Vec<usize> = (0..basis.len()).collect();
        Tableau {
            matrix: reduced.select_rows(&rows),
            labels: vec![Label::Undecided; points.cols()],
            basis,
            pilot_row: None,
            constant_column: None,
            pivots: 0,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn pilot_row(&self) -> Option<usize> {
        self.pilot_row
    }

    pub fn constant_column(&self) -> Option<usize> {
        self.constant_column
    }

    /// Number of simplex steps taken so far.
    pub fn pivot_count(&self) -> usize {
        self.pivots
    }

    pub fn necessary(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&j| self.labels[j] == Label::Necessary)
            .collect()
    }

    fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[(i, j)]
    }

    fn live(&self, j: usize) -> bool {
        self.labels[j] != Label::Deleted
    }

    fn basis_row(&self, j: usize) -> Option<usize> {
        self.basis.iter().position(|&b| b == j)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        crate::linalg::pivot_in_place(&mut self.matrix, row, col);
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs until every column is labeled.
    pub fn run(&mut self) {
        let n = self.labels.len();
        loop {
            let nonbasic =
                (0..n).find(|&j| self.labels[j] == Label::Undecided && self.basis_row(j).is_none());
            if let Some(c) = nonbasic {
                self.settle_constant_column(c);
                continue;
            }
            let basic = (0..n).find(|&j| self.labels[j] == Label::Undecided);
            let Some(c) = basic else {
                break;
            };
            let r = self
                .basis_row(c)
                .expect("remaining undecided columns are basic");
            let other = (0..n).find(|&l| l != c && self.live(l) && self.entry(r, l).is_positive());
            match other {
                None => self.labels[c] = Label::Necessary,
                Some(l) => {
                    self.pivot(r, l);
                    self.settle_constant_column(c);
                }
            }
        }
        self.pilot_row = None;
        self.constant_column = None;
    }

    fn settle_constant_column(&mut self, c: usize) {
        let n = self.labels.len();
        self.constant_column = Some(c);
        'constant: loop {
            let pilot = (0..self.matrix.rows()).find(|&i| self.entry(i, c).is_negative());
            let Some(p) = pilot else {
                self.labels[c] = Label::Deleted;
                break;
            };
            self.pilot_row = Some(p);
            loop {
                let entering =
                    (0..n).find(|&l| l != c && self.live(l) && self.entry(p, l).is_negative());
                let Some(l) = entering else {
                    self.labels[c] = Label::Necessary;
                    break 'constant;
                };
                let r = self.pivot_row(c, l);
                self.pivot(r, l);
                if !self.entry(p, c).is_negative() {
                    continue 'constant;
                }
            }
        }
        self.pilot_row = None;
        self.constant_column = None;
    }

    /// A row `r` with `0 <= a_rc / a_rl <= min{a_ic / a_il : a_ic >= 0, a_il > 0}`.
    ///
    /// Admissible rows are those attaining the minimum among rows with
    /// `a_ic >= 0, a_il > 0`, and rows with `a_rc < 0, a_rl < 0` whose ratio
    /// does not exceed it (the pilot row is always one of the latter).
    fn pivot_row(&self, c: usize, l: usize) -> usize {
        let rows = self.matrix.rows();
        let bound = (0..rows)
            .filter(|&i| !self.entry(i, c).is_negative() && self.entry(i, l).is_positive())
            .map(|i| self.entry(i, c) / self.entry(i, l))
            .min();
        let admissible = (0..rows).filter_map(|i| {
            let (ac, al) = (self.entry(i, c), self.entry(i, l));
            let same_side = (!ac.is_negative() && al.is_positive())
                || (ac.is_negative() && al.is_negative());
            if !same_side {
                return None;
            }
            let ratio = ac / al;
            match &bound {
                Some(b) if ratio > *b => None,
                _ => Some((i, ratio)),
            }
        });
        // Among admissible rows prefer the smallest ratio, then the lowest basic column.
        admissible
            .min_by(|(i, ri), (j, rj)| ri.cmp(rj).then_with(|| self.basis[*i].cmp(&self.basis[*j])))
            .map(|(i, _)| i)
            .expect("the pilot row or a minimum-ratio row is always admissible")
    }
}

/// Indices of the columns forming the frame of the cone generated by the
/// columns of `points`, ascending.
pub fn conical_frame(points: &Matrix) -> Vec<usize> {
    let mut tableau = Tableau::new(points);
    tableau.run();
    tableau.necessary()
}

/// `points` with a row of ones appended.
pub fn lift(points: &Matrix) -> Matrix {
    points
        .with_row(&vec![rational::one(); points.cols()])
        .expect("row length matches")
}

/// Indices of the columns that are vertices of their convex hull, ascending.
pub fn convex_extreme_points(points: &Matrix) -> Vec<usize> {
    conical_frame(&lift(points))
}

/// Whether column `idx` is a nonnegative (conic) or convex combination of the
/// other columns, decided by exact LP feasibility.
pub fn membership_oracle(points: &Matrix, idx: usize, mode: HullMode) -> bool {
    assert!(idx < points.cols(), "column {idx} out of range");
    let others: Vec<usize> = (0..points.cols()).filter(|&j| j != idx).collect();
    let target = points.column(idx);
    if others.is_empty() {
        return mode == HullMode::Conic && target.iter().all(Zero::is_zero);
    }
    let rest = points.select_columns(&others);
    match mode {
        HullMode::Conic => simplex_feasible_nonneg(&rest, &target).is_some(),
        HullMode::Convex => {
            let mut lifted_target = target;
            lifted_target.push(rational::one());
            simplex_feasible_nonneg(&lift(&rest), &lifted_target).is_some()
        }
    }
}
