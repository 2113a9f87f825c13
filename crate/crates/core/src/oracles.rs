//! Independent equivalence and redundancy checks.
//!
//! These do not share code paths with the reducer beyond the automaton
//! semantics and the exact linear algebra, so they can certify its output.

use num::Zero;

use crate::automaton::{Automaton, StateVector, Theory, Word};
use crate::error::{Error, Result};
use crate::frame;
use crate::linalg::{simplex_feasible_nonneg, solve_linear, EchelonBasis};
use crate::rational::{self, Rational};
use crate::table::make_consistent;

/// Two state combinations, possibly in different automata over the same
/// alphabet.
#[derive(Debug, Clone)]
pub struct EquivQuery<'a> {
    left: (&'a Automaton, StateVector),
    right: (&'a Automaton, StateVector),
}

impl<'a> EquivQuery<'a> {
    pub fn new(
        left: &'a Automaton,
        left_vector: StateVector,
        right: &'a Automaton,
        right_vector: StateVector,
    ) -> Result<Self> {
        if left.alphabet() != right.alphabet() {
            return Err(Error::AlphabetMismatch {
                left: left.alphabet().letters().to_vec(),
                right: right.alphabet().letters().to_vec(),
            });
        }
        for (aut, v, side) in [
            (left, &left_vector, "left"),
            (right, &right_vector, "right"),
        ] {
            if v.len() != aut.num_states() {
                return Err(Error::Dimension(format!(
                    "{side} vector has {} entries for {} states",
                    v.len(),
                    aut.num_states()
                )));
            }
        }
        Ok(EquivQuery {
            left: (left, left_vector),
            right: (right, right_vector),
        })
    }

    /// Dirac vectors of the named states.
    pub fn states(left: &'a Automaton, p: &str, right: &'a Automaton, q: &str) -> Result<Self> {
        Self::new(left, left.dirac(p)?, right, right.dirac(q)?)
    }

    pub fn left(&self) -> (&'a Automaton, &StateVector) {
        (self.left.0, &self.left.1)
    }

    pub fn right(&self) -> (&'a Automaton, &StateVector) {
        (self.right.0, &self.right.1)
    }

    /// Number of states of the two automata together.
    pub fn total_states(&self) -> usize {
        self.left.0.num_states() + self.right.0.num_states()
    }

    /// obs(left, w) − obs(right, w).
    pub fn difference(&self, w: &Word) -> Rational {
        self.left.0.obs(&self.left.1, w) - self.right.0.obs(&self.right.1, w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equal,
    Counterexample(Word),
}

impl EquivVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivVerdict::Equal)
    }
}

/// Compares both sides on every word of length at most `max_len` and returns
/// the length-lexicographically least word on which they differ.
pub fn equiv_up_to(query: &EquivQuery<'_>, max_len: usize) -> EquivVerdict {
    let (la, lv) = query.left();
    let (ra, rv) = query.right();
    let letters = la.alphabet().len();
    let mut level = vec![(Word::empty(), lv.clone(), rv.clone())];
    for len in 0..=max_len {
        if len > 0 {
            let mut next = Vec::with_capacity(level.len() * letters);
            for (w, u, v) in &level {
                for a in 0..letters {
                    next.push((w.append(a), la.step_index(u, a), ra.step_index(v, a)));
                }
            }
            level = next;
        }
        for (w, u, v) in &level {
            if rational::dot(&u.0, la.out()) != rational::dot(&v.0, ra.out()) {
                return EquivVerdict::Counterexample(w.clone());
            }
        }
    }
    EquivVerdict::Equal
}

/// Decides equality of the two sides on all words.
///
/// Works on the direct sum of both automata with the vector (u, −v): the
/// difference series is f(w) = (u, −v)·D_w·(out_l, out_r). Words are explored
/// breadth-first in length-lexicographic order; a word whose forward vector
/// lies in the span of those already kept is not extended, since f and all
/// its extensions are then determined by earlier words. The kept vectors are
/// independent, so at most `n_left + n_right` words are kept and any
/// counterexample is shorter than that. The first word found with f ≠ 0 is
/// the least counterexample overall.
///
/// Only convex and linear theories are accepted.
pub fn equiv_exact(query: &EquivQuery<'_>) -> Result<EquivVerdict> {
    let (la, lv) = query.left();
    let (ra, rv) = query.right();
    for aut in [la, ra] {
        if aut.theory() == Theory::Conic {
            return Err(Error::UnsupportedTheory {
                operation: "exact equivalence",
                theory: aut.theory().name(),
            });
        }
    }
    let nl = la.num_states();
    let dim = query.total_states();
    let out: Vec<Rational> = la.out().iter().chain(ra.out()).cloned().collect();

    let mut start: Vec<Rational> = lv.0.clone();
    start.extend(rv.0.iter().map(|x| -x));
    let mut span = EchelonBasis::new(dim);
    let mut queue = std::collections::VecDeque::new();
    if span.insert(&start) {
        queue.push_back((Word::empty(), start));
    }
    while let Some((w, x)) = queue.pop_front() {
        if !rational::dot(&x, &out).is_zero() {
            debug_assert!(w.len() < dim);
            return Ok(EquivVerdict::Counterexample(w));
        }
        for a in 0..la.alphabet().len() {
            let left = la.delta(a).vec_mul(&x[..nl]);
            let right = ra.delta(a).vec_mul(&x[nl..]);
            let next: Vec<Rational> = left.into_iter().chain(right).collect();
            if span.insert(&next) {
                queue.push_back((w.append(a), next));
            }
        }
    }
    if span.rank() > dim {
        return Err(Error::Internal(format!(
            "forward space has dimension {} above the bound {dim}",
            span.rank()
        )));
    }
    Ok(EquivVerdict::Equal)
}

/// Decides whether `state` is redundant by testing its row on a consistent
/// table against the other rows. On success the combination is returned as a
/// vector over all states (zero at `state`), after being confirmed by an
/// equivalence check: exact for convex and linear automata, and for conic
/// automata over all words shorter than twice the state count, which is the
/// same forward-space bound evaluated exhaustively.
pub fn redundancy_bruteforce(aut: &Automaton, state: &str) -> Result<Option<StateVector>> {
    let q = aut.state_index(state)?;
    let n = aut.num_states();
    let table = make_consistent(aut);
    let m = table.matrix();
    let others: Vec<usize> = (0..n).filter(|&j| j != q).collect();
    // The empty combination exists for linear and conic theories only.
    if others.is_empty() && aut.theory() == Theory::Convex {
        return Ok(None);
    }
    let columns = m.select_rows(&others).transpose();
    let row = m.row(q).to_vec();
    let found = match aut.theory() {
        Theory::Convex => {
            let mut target = row;
            target.push(rational::one());
            simplex_feasible_nonneg(&frame::lift(&columns), &target)
        }
        Theory::Conic => simplex_feasible_nonneg(&columns, &row),
        Theory::Linear => solve_linear(&columns, &row),
    };
    let Some(coefficients) = found else {
        return Ok(None);
    };
    let mut witness = StateVector::zeros(n);
    for (&j, c) in others.iter().zip(coefficients) {
        witness.0[j] = c;
    }
    let query = EquivQuery::new(aut, aut.dirac(state)?, aut, witness.clone())?;
    let verdict = match aut.theory() {
        Theory::Conic => equiv_up_to(&query, 2 * n),
        _ => equiv_exact(&query)?,
    };
    match verdict {
        EquivVerdict::Equal => Ok(Some(witness)),
        EquivVerdict::Counterexample(w) => Err(Error::Internal(format!(
            "row witness for {state} differs from it on word {}",
            aut.render_word(&w)
        ))),
    }
}
