//! Observation tables: rows are states, columns are test words, entries are
//! exact weights. A table is *consistent* when any two state combinations
//! that agree on every column also agree on every one-letter extension of
//! every column; with the empty word among the columns, agreement on the
//! table then implies agreement on all words.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::automaton::{Automaton, StateVector, Theory, Word};
use crate::error::{Error, Result};
use crate::linalg::{
    nullspace_basis, rank, simplex_maximize, Constraint, LpOutcome, LpProblem, Matrix, Relation,
};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationTable<'a> {
    automaton: &'a Automaton,
    words: Vec<Word>,
    matrix: Matrix,
}

impl<'a> ObservationTable<'a> {
    /// `matrix[(i, j)] = obs(dirac(q_i), words[j])`.
    pub fn build(automaton: &'a Automaton, words: Vec<Word>) -> Result<Self> {
        let alphabet_len = automaton.alphabet().len();
        let mut seen = BTreeSet::new();
        for w in &words {
            if w.letters().iter().any(|&a| a >= alphabet_len) {
                return Err(Error::BadWord {
                    text: format!("{:?}", w.letters()),
                    reason: "letter index outside the alphabet".into(),
                });
            }
            if !seen.insert(w.clone()) {
                return Err(Error::DuplicateName {
                    location: "E".into(),
                    name: automaton.render_word(w),
                });
            }
        }
        let columns: Vec<Vec<Rational>> = words.iter().map(|w| automaton.column(w)).collect();
        let matrix = Matrix::from_columns(automaton.num_states(), &columns)?;
        Ok(ObservationTable {
            automaton,
            words,
            matrix,
        })
    }

    pub fn automaton(&self) -> &'a Automaton {
        self.automaton
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn row(&self, state: usize) -> &[Rational] {
        self.matrix.row(state)
    }

    /// Row of a state combination: `vᵀ·M`.
    pub fn extended_row(&self, v: &StateVector) -> Vec<Rational> {
        self.matrix.vec_mul(v.coefficients())
    }

    /// `D_a · M`, the table for the words `a·e`.
    pub fn shifted(&self, a: usize) -> Matrix {
        self.automaton.delta(a) * &self.matrix
    }

    /// Appends a column. Fails if the word is already present.
    pub fn extend(&self, w: Word) -> Result<ObservationTable<'a>> {
        let mut words = self.words.clone();
        words.push(w);
        Self::build(self.automaton, words)
    }

    /// Affine dimension of the row polytope for convex automata, rank of the
    /// row space otherwise.
    pub fn row_space_dimension(&self) -> usize {
        match self.automaton.theory() {
            Theory::Convex => {
                let ones = vec![rational::one(); self.matrix.rows()];
                let with_ones = self.matrix.with_column(&ones).expect("row count matches");
                rank(&with_ones) - 1
            }
            Theory::Linear | Theory::Conic => rank(&self.matrix),
        }
    }

    /// Tab-separated dump: a header with the column words, then one line per
    /// state.
    pub fn to_tsv(&self) -> String {
        let aut = self.automaton;
        let mut s = String::new();
        for w in &self.words {
            s.push('\t');
            s.push_str(&aut.render_word(w));
        }
        s.push('\n');
        for (i, name) in aut.states().iter().enumerate() {
            s.push_str(name);
            for v in self.row(i) {
                s.push('\t');
                s.push_str(&rational::format(v));
            }
            s.push('\n');
        }
        s
    }
}

/// Two state combinations that agree on the table but disagree on `a·e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyDefect {
    pub letter: usize,
    pub column: usize,
    pub witness: (StateVector, StateVector),
}

impl ConsistencyDefect {
    /// The word `a·e_i` that separates the witnesses.
    pub fn word(&self, table: &ObservationTable<'_>) -> Word {
        table.words()[self.column].prepend(self.letter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Consistent,
    Defect(ConsistencyDefect),
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::Consistent)
    }
}

/// Which decision procedure to use for consistency.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Engine {
    /// One linear program per column over pairs of distributions (convex only).
    Lp,
    /// Kernel of the transposed table, restricted to sum-zero vectors for
    /// convex automata.
    #[default]
    NullSpace,
}

/// Consistency of `table` for letter `a` by linear programming.
///
/// For every column `j`, maximizes `Σ (t_i − s_i)(D_a M)_{ij}` over
/// distributions `t, s` with `tᵀM = sᵀM`. The lowest column with a positive
/// optimum is reported together with the optimizing pair.
pub fn check_consistency_lp(table: &ObservationTable<'_>, a: usize) -> Result<ConsistencyVerdict> {
    let aut = table.automaton();
    if aut.theory() != Theory::Convex {
        return Err(Error::UnsupportedTheory {
            operation: "LP consistency check",
            theory: aut.theory().name(),
        });
    }
    let n = aut.num_states();
    let m = table.matrix();
    let shifted = table.shifted(a);

    let mut constraints = Vec::with_capacity(m.cols() + 2);
    for half in 0..2 {
        let mut coefficients = vec![Rational::zero(); 2 * n];
        for c in &mut coefficients[half * n..(half + 1) * n] {
            *c = rational::one();
        }
        constraints.push(Constraint {
            coefficients,
            relation: Relation::Eq,
            bound: rational::one(),
        });
    }
    for k in 0..m.cols() {
        let col = m.column(k);
        let coefficients = col.iter().cloned().chain(col.iter().map(|x| -x)).collect();
        constraints.push(Constraint {
            coefficients,
            relation: Relation::Eq,
            bound: Rational::zero(),
        });
    }

    for j in 0..m.cols() {
        let col = shifted.column(j);
        let objective = col.iter().cloned().chain(col.iter().map(|x| -x)).collect();
        let lp = LpProblem::nonneg(objective, constraints.clone())?;
        match simplex_maximize(&lp) {
            LpOutcome::Optimum { value, point } => {
                if value.is_positive() {
                    let t = StateVector(point[..n].to_vec());
                    let s = StateVector(point[n..].to_vec());
                    return Ok(ConsistencyVerdict::Defect(ConsistencyDefect {
                        letter: a,
                        column: j,
                        witness: (t, s),
                    }));
                }
            }
            other => {
                return Err(Error::Internal(format!(
                    "consistency LP for column {j} returned {other:?}; t = s is always feasible and the objective is bounded"
                )))
            }
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

/// Consistency of `table` for letter `a` via the kernel of `Mᵀ`.
///
/// The table is consistent iff `(D_a M)ᵀ d = 0` for every `d` with `Mᵀd = 0`
/// (and `Σd = 0` for convex automata). A violating `d` is split into its
/// positive and negative parts to produce the witness pair; for convex
/// automata both parts are rescaled to distributions.
pub fn check_consistency_nullspace(table: &ObservationTable<'_>, a: usize) -> ConsistencyVerdict {
    let aut = table.automaton();
    let n = aut.num_states();
    let mt = table.matrix().transpose();
    let kernel_of = match aut.theory() {
        Theory::Convex => mt
            .with_row(&vec![rational::one(); n])
            .expect("row length is n"),
        Theory::Linear | Theory::Conic => mt,
    };
    let shifted = table.shifted(a);

    let mut best: Option<(usize, Vec<Rational>, Rational)> = None;
    for d in nullspace_basis(&kernel_of) {
        let image = shifted.vec_mul(&d);
        if let Some(j) = image.iter().position(|x| !x.is_zero()) {
            if best.as_ref().map_or(true, |(bj, _, _)| j < *bj) {
                best = Some((j, d, image[j].clone()));
            }
        }
    }
    let Some((column, mut d, value)) = best else {
        return ConsistencyVerdict::Consistent;
    };
    if value.is_negative() {
        d.iter_mut().for_each(|x| *x = -x.clone());
    }
    let positive: Vec<Rational> = d
        .iter()
        .map(|x| {
            if x.is_positive() {
                x.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let negative: Vec<Rational> = d
        .iter()
        .map(|x| {
            if x.is_negative() {
                -x.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let (t, s) = match aut.theory() {
        Theory::Convex => {
            let mass = rational::sum(&positive);
            (
                positive.into_iter().map(|x| x / &mass).collect(),
                negative.into_iter().map(|x| x / &mass).collect(),
            )
        }
        Theory::Linear | Theory::Conic => (positive, negative),
    };
    ConsistencyVerdict::Defect(ConsistencyDefect {
        letter: a,
        column,
        witness: (StateVector(t), StateVector(s)),
    })
}

/// Checks every letter in alphabet order and returns the first defect.
pub fn check_consistency(
    table: &ObservationTable<'_>,
    engine: Engine,
) -> Result<ConsistencyVerdict> {
    for a in 0..table.automaton().alphabet().len() {
        let verdict = match engine {
            Engine::Lp => check_consistency_lp(table, a)?,
            Engine::NullSpace => check_consistency_nullspace(table, a),
        };
        if !verdict.is_consistent() {
            return Ok(verdict);
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

/// Outcome of growing a table to consistency.
#[derive(Debug, Clone)]
pub struct ConsistencyRun<'a> {
    pub table: ObservationTable<'a>,
    /// Defects repaired, in order; each added the column `defect.word(..)`.
    pub repairs: Vec<ConsistencyDefect>,
    /// Row-space dimension before the first repair and after each one.
    pub dimensions: Vec<usize>,
}

/// Grows `E` from `{ε}` until the table is consistent, adding `a·e_i` for the
/// first defect found (lowest letter, then lowest column).
pub fn make_consistent(aut: &Automaton) -> ObservationTable<'_> {
    make_consistent_with(aut, Engine::NullSpace)
        .expect("the null-space engine accepts every theory")
        .table
}

pub fn make_consistent_with(aut: &Automaton, engine: Engine) -> Result<ConsistencyRun<'_>> {
    let mut table = ObservationTable::build(aut, vec![Word::empty()])?;
    let mut repairs = Vec::new();
    let mut dimensions = vec![table.row_space_dimension()];
    loop {
        match check_consistency(&table, engine)? {
            ConsistencyVerdict::Consistent => break,
            ConsistencyVerdict::Defect(defect) => {
                let word = defect.word(&table);
                if table.words().contains(&word) {
                    return Err(Error::Internal(format!(
                        "defect column {} is already in the table",
                        aut.render_word(&word)
                    )));
                }
                table = table.extend(word)?;
                dimensions.push(table.row_space_dimension());
                repairs.push(defect);
            }
        }
    }
    Ok(ConsistencyRun {
        table,
        repairs,
        dimensions,
    })
}
