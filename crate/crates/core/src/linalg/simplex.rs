//! Exact two-phase primal simplex with Bland's rule.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::elim::pivot_on;
use super::Matrix;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

/// `maximize objective·x` subject to the constraints, with `x_j >= 0` for
/// every `j` in `nonneg` and the remaining variables free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    nonneg: BTreeSet<usize>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<Rational>,
        constraints: Vec<Constraint>,
        nonneg: BTreeSet<usize>,
    ) -> Result<Self> {
        let n = objective.len();
        if let Some((i, c)) = constraints
            .iter()
            .enumerate()
            .find(|(_, c)| c.coefficients.len() != n)
        {
            return Err(Error::Dimension(format!(
                "constraint {i} has {} coefficients, objective has {n}",
                c.coefficients.len()
            )));
        }
        if let Some(&j) = nonneg.iter().find(|&&j| j >= n) {
            return Err(Error::Dimension(format!(
                "nonnegative variable {j} out of range (n = {n})"
            )));
        }
        Ok(LpProblem {
            objective,
            constraints,
            nonneg,
        })
    }

    /// All variables nonnegative.
    pub fn nonneg(objective: Vec<Rational>, constraints: Vec<Constraint>) -> Result<Self> {
        let all = (0..objective.len()).collect();
        Self::new(objective, constraints, all)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// True iff `x` satisfies every constraint and sign restriction exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.nonneg.iter().all(|&j| !x[j].is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = rational::dot(&c.coefficients, x);
                match c.relation {
                    Relation::Eq => lhs == c.bound,
                    Relation::Le => lhs <= c.bound,
                    Relation::Ge => lhs >= c.bound,
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimum {
        value: Rational,
        point: Vec<Rational>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

/// Standard-form tableau: `rows x (cols + 1)`, last column is the RHS.
struct Tableau {
    t: Matrix,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.kinds.len()
    }

    fn value_of(&self, cost: &[Rational]) -> Rational {
        let rhs = self.rhs_col();
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, &b)| {
                acc + &cost[b] * &self.t[(i, rhs)]
            })
    }

    /// Maximizes `cost·x` over columns with `allowed[j]`. Bland's rule:
    /// lowest-index improving column enters; among min-ratio rows the one with
    /// the lowest-index basic variable leaves. Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let rhs = self.rhs_col();
        loop {
            let mut in_basis = vec![false; self.kinds.len()];
            for &b in &self.basis {
                in_basis[b] = true;
            }
            let entering = (0..self.kinds.len()).find(|&j| {
                if !allowed[j] || in_basis[j] {
                    return false;
                }
                let reduced = self
                    .basis
                    .iter()
                    .enumerate()
                    .fold(cost[j].clone(), |acc, (i, &b)| {
                        acc - &cost[b] * &self.t[(i, j)]
                    });
                reduced.is_positive()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.rows() {
                let a = &self.t[(i, j)];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[(i, rhs)] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            pivot_on(&mut self.t, r, j);
            self.basis[r] = j;
        }
    }
}

/// Exact optimum of `p`, or a verdict that it is infeasible or unbounded.
pub fn simplex_maximize(p: &LpProblem) -> LpOutcome {
    // Column layout: structural (free variables split into +/-), slacks, artificials.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(p.num_vars());
    let mut ncols = 0;
    for j in 0..p.num_vars() {
        if p.nonneg.contains(&j) {
            var_cols.push((ncols, None));
            ncols += 1;
        } else {
            var_cols.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let n_struct = ncols;

    let rows: Vec<(Vec<Rational>, Relation, Rational)> = p
        .constraints
        .iter()
        .map(|c| {
            let mut coeffs = vec![Rational::zero(); n_struct];
            for (j, a) in c.coefficients.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                coeffs[pos] = a.clone();
                if let Some(neg) = neg {
                    coeffs[neg] = -a.clone();
                }
            }
            if c.bound.is_negative() {
                let flipped = match c.relation {
                    Relation::Eq => Relation::Eq,
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                };
                (
                    coeffs.into_iter().map(|x| -x).collect(),
                    flipped,
                    -c.bound.clone(),
                )
            } else {
                (coeffs, c.relation, c.bound.clone())
            }
        })
        .collect();

    let mut kinds = vec![ColumnKind::Structural; n_struct];
    let slack_of: Vec<Option<usize>> = rows
        .iter()
        .map(|(_, rel, _)| match rel {
            Relation::Eq => None,
            _ => {
                kinds.push(ColumnKind::Slack);
                Some(kinds.len() - 1)
            }
        })
        .collect();
    let artificial_of: Vec<Option<usize>> = rows
        .iter()
        .map(|(_, rel, _)| match rel {
            Relation::Le => None,
            _ => {
                kinds.push(ColumnKind::Artificial);
                Some(kinds.len() - 1)
            }
        })
        .collect();

    let width = kinds.len();
    let mut t = Matrix::zeros(rows.len(), width + 1);
    let mut basis = Vec::with_capacity(rows.len());
    for (i, (coeffs, rel, bound)) in rows.iter().enumerate() {
        for (j, a) in coeffs.iter().enumerate() {
            t[(i, j)] = a.clone();
        }
        if let Some(s) = slack_of[i] {
            t[(i, s)] = if *rel == Relation::Le {
                rational::one()
            } else {
                -rational::one()
            };
        }
        if let Some(a) = artificial_of[i] {
            t[(i, a)] = rational::one();
        }
        t[(i, width)] = bound.clone();
        basis.push(match rel {
            Relation::Le => slack_of[i].unwrap(),
            _ => artificial_of[i].unwrap(),
        });
    }
    let mut tab = Tableau { t, basis, kinds };

    // Phase I: maximize -(sum of artificials).
    if tab.kinds.contains(&ColumnKind::Artificial) {
        let cost: Vec<Rational> = tab
            .kinds
            .iter()
            .map(|k| match k {
                ColumnKind::Artificial => -rational::one(),
                _ => Rational::zero(),
            })
            .collect();
        let allowed = vec![true; width];
        let bounded = tab.optimize(&cost, &allowed);
        debug_assert!(bounded, "phase I is bounded by construction");
        if tab.value_of(&cost).is_negative() {
            return LpOutcome::Infeasible;
        }
        drive_out_artificials(&mut tab);
    }

    // Phase II.
    let mut cost = vec![Rational::zero(); width];
    for (j, c) in p.objective.iter().enumerate() {
        let (pos, neg) = var_cols[j];
        cost[pos] = c.clone();
        if let Some(neg) = neg {
            cost[neg] = -c.clone();
        }
    }
    let allowed: Vec<bool> = tab
        .kinds
        .iter()
        .map(|k| *k != ColumnKind::Artificial)
        .collect();
    if !tab.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut column_values = vec![Rational::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        column_values[b] = tab.t[(i, width)].clone();
    }
    let point: Vec<Rational> = var_cols
        .iter()
        .map(|&(pos, neg)| match neg {
            None => column_values[pos].clone(),
            Some(neg) => &column_values[pos] - &column_values[neg],
        })
        .collect();
    let value = rational::dot(&p.objective, &point);
    LpOutcome::Optimum { value, point }
}

/// After a successful phase I every artificial still in the basis sits at
/// zero. Pivot it out on the lowest-index non-artificial column with a nonzero
/// entry; if the row has none it is redundant and is dropped.
fn drive_out_artificials(tab: &mut Tableau) {
    let width = tab.kinds.len();
    let mut i = 0;
    while i < tab.t.rows() {
        if tab.kinds[tab.basis[i]] != ColumnKind::Artificial {
            i += 1;
            continue;
        }
        let replacement = (0..width)
            .find(|&j| tab.kinds[j] != ColumnKind::Artificial && !tab.t[(i, j)].is_zero());
        match replacement {
            Some(j) => {
                pivot_on(&mut tab.t, i, j);
                tab.basis[i] = j;
                i += 1;
            }
            None => {
                let keep: Vec<usize> = (0..tab.t.rows()).filter(|&r| r != i).collect();
                tab.t = tab.t.select_rows(&keep);
                tab.basis.remove(i);
            }
        }
    }
}

/// Some `c >= 0` with `m·c = b`, found by phase I.
pub fn simplex_feasible_nonneg(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let constraints = (0..m.rows())
        .map(|i| Constraint {
            coefficients: m.row(i).to_vec(),
            relation: Relation::Eq,
            bound: b[i].clone(),
        })
        .collect();
    let lp = LpProblem::nonneg(vec![Rational::zero(); m.cols()], constraints)
        .expect("rows match column count");
    match simplex_maximize(&lp) {
        LpOutcome::Optimum { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}
