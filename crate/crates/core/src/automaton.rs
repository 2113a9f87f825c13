//! Automata with scalar outputs and per-letter transition matrices, and their
//! exact language semantics.

use std::collections::HashMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// How successor combinations are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    /// Probabilistic automata: stochastic rows, outputs in `[0,1]`.
    Convex,
    /// Weighted automata over the field of rationals.
    Linear,
    /// Weighted automata over the nonnegative rationals.
    Conic,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Convex => "convex",
            Theory::Linear => "linear",
            Theory::Conic => "conic",
        }
    }

    pub fn from_name(name: &str) -> Option<Theory> {
        match name {
            "convex" => Some(Theory::Convex),
            "linear" => Some(Theory::Linear),
            "conic" => Some(Theory::Conic),
            _ => None,
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Spelling of the empty word on the command line and in dumps.
pub const EPSILON: &str = "eps";

/// Ordered, duplicate-free list of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(letters: Vec<String>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::schema("alphabet", "alphabet must be nonempty"));
        }
        for (i, l) in letters.iter().enumerate() {
            let location = format!("alphabet[{i}]");
            if l.is_empty() || l.contains('.') || l.chars().any(char::is_whitespace) {
                return Err(Error::schema(
                    location,
                    format!("letter {l:?} must be nonempty without '.' or whitespace"),
                ));
            }
            if l == EPSILON {
                return Err(Error::schema(location, "the letter \"eps\" is reserved"));
            }
            if letters[..i].contains(l) {
                return Err(Error::DuplicateName {
                    location,
                    name: l.clone(),
                });
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    fn single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }
}

/// A word as a sequence of letter indices into an [`Alphabet`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a · self`.
    pub fn prepend(&self, a: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `self · a`.
    pub fn append(&self, a: usize) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    /// Parses `eps`, a concatenation of single-character letters, or
    /// `.`-separated letters.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word> {
        let bad = |reason: String| Error::BadWord {
            text: text.to_string(),
            reason,
        };
        if text == EPSILON || text.is_empty() {
            return Ok(Word::empty());
        }
        let tokens: Vec<String> = if text.contains('.') {
            text.split('.').map(str::to_string).collect()
        } else if alphabet.index_of(text).is_some() {
            vec![text.to_string()]
        } else if alphabet.single_char() {
            text.chars().map(String::from).collect()
        } else {
            return Err(bad(
                "multi-character alphabets need '.' between letters".into()
            ));
        };
        tokens
            .iter()
            .map(|t| {
                alphabet
                    .index_of(t)
                    .ok_or_else(|| bad(format!("unknown letter {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return EPSILON.to_string();
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|&a| alphabet.letters[a].as_str())
            .collect();
        if alphabet.single_char() {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// All words of length at most `max_len`, in length-lexicographic order.
    pub fn all_up_to(alphabet_len: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut level = vec![Word::empty()];
        for _ in 0..max_len {
            level = level
                .iter()
                .flat_map(|w| (0..alphabet_len).map(move |a| w.append(a)))
                .collect();
            out.extend(level.iter().cloned());
        }
        out
    }
}

/// Coefficients over the states of some automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector(pub Vec<Rational>);

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        StateVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `alpha·self + beta·other`.
    pub fn combine(&self, alpha: &Rational, other: &StateVector, beta: &Rational) -> StateVector {
        assert_eq!(self.len(), other.len(), "vector length");
        StateVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| alpha * x + beta * y)
                .collect(),
        )
    }

    /// Checks the sign and mass constraints that `theory` places on vectors.
    pub fn check(&self, theory: Theory) -> Result<()> {
        let illegal = |reason: String| Error::IllegalStateVector {
            theory: theory.name(),
            reason,
        };
        match theory {
            Theory::Linear => Ok(()),
            Theory::Conic | Theory::Convex => {
                if let Some(x) = self.0.iter().find(|x| x.is_negative()) {
                    return Err(illegal(format!("negative entry {x}")));
                }
                let total = rational::sum(&self.0);
                if theory == Theory::Convex && !total.is_one() {
                    return Err(illegal(format!("entries sum to {total}")));
                }
                Ok(())
            }
        }
    }
}

/// A finite automaton with scalar outputs, without initial state.
///
/// Constructed only through [`Automaton::new`], which enforces the invariants
/// of the theory; the fields are therefore read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    theory: Theory,
    alphabet: Alphabet,
    states: Vec<String>,
    out: Vec<Rational>,
    delta: Vec<Matrix>,
    substochastic: bool,
}

impl Automaton {
    /// `delta[a]` is the transition matrix of letter `a`: row `i` holds the
    /// successor coefficients of state `i`.
    ///
    /// `substochastic` relaxes convex row sums to `<= 1` and is rejected for
    /// the other theories.
    pub fn new(
        theory: Theory,
        alphabet: Vec<String>,
        states: Vec<String>,
        out: Vec<Rational>,
        delta: Vec<Matrix>,
        substochastic: bool,
    ) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet)?;
        for (i, s) in states.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::schema(format!("states[{i}]"), "empty state name"));
            }
            if states[..i].contains(s) {
                return Err(Error::DuplicateName {
                    location: format!("states[{i}]"),
                    name: s.clone(),
                });
            }
        }
        let n = states.len();
        if out.len() != n {
            return Err(Error::schema(
                "out",
                format!("{} outputs for {n} states", out.len()),
            ));
        }
        if delta.len() != alphabet.len() {
            return Err(Error::schema(
                "delta",
                format!("{} matrices for {} letters", delta.len(), alphabet.len()),
            ));
        }
        if substochastic && theory != Theory::Convex {
            return Err(Error::schema(
                "substochastic",
                "only convex automata may be substochastic",
            ));
        }
        for (a, d) in delta.iter().enumerate() {
            if d.rows() != n || d.cols() != n {
                return Err(Error::schema(
                    format!("delta.{}", alphabet.letters[a]),
                    format!("matrix is {}x{}, expected {n}x{n}", d.rows(), d.cols()),
                ));
            }
        }
        let aut = Automaton {
            theory,
            alphabet,
            states,
            out,
            delta,
            substochastic,
        };
        aut.validate()?;
        Ok(aut)
    }

    fn validate(&self) -> Result<()> {
        for (i, o) in self.out.iter().enumerate() {
            let location = format!("out.{}", self.states[i]);
            self.check_entry(&location, o)?;
        }
        for (a, d) in self.delta.iter().enumerate() {
            let letter = &self.alphabet.letters[a];
            for i in 0..self.states.len() {
                let state = &self.states[i];
                for (j, v) in d.row(i).iter().enumerate() {
                    let location = format!("delta.{letter}.{state}.{}", self.states[j]);
                    self.check_entry(&location, v)?;
                }
                if self.theory == Theory::Convex {
                    let total = rational::sum(d.row(i));
                    let ok = if self.substochastic {
                        total <= Rational::one()
                    } else {
                        total.is_one()
                    };
                    if !ok {
                        return Err(Error::NotStochastic {
                            location: format!("delta.{letter}.{state}"),
                            state: state.clone(),
                            letter: letter.clone(),
                            sum: rational::format(&total),
                            expected: if self.substochastic { "at most 1" } else { "1" },
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_entry(&self, location: &str, v: &Rational) -> Result<()> {
        match self.theory {
            Theory::Convex if !rational::in_unit_interval(v) => Err(Error::OutOfUnitInterval {
                location: location.to_string(),
                value: rational::format(v),
            }),
            Theory::Conic if v.is_negative() => Err(Error::NegativeWeight {
                location: location.to_string(),
                value: rational::format(v),
            }),
            _ => Ok(()),
        }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn out(&self) -> &[Rational] {
        &self.out
    }

    pub fn is_substochastic(&self) -> bool {
        self.substochastic
    }

    /// Transition matrix by letter index.
    pub fn delta(&self, a: usize) -> &Matrix {
        &self.delta[a]
    }

    pub fn deltas(&self) -> &[Matrix] {
        &self.delta
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState {
                location: "state".into(),
                name: name.to_string(),
            })
    }

    pub fn letter_index(&self, letter: &str) -> Result<usize> {
        self.alphabet
            .index_of(letter)
            .ok_or_else(|| Error::UnknownLetter {
                location: "letter".into(),
                name: letter.to_string(),
            })
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.alphabet)
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.alphabet)
    }

    /// The unit vector of state `q`.
    pub fn dirac(&self, q: &str) -> Result<StateVector> {
        Ok(StateVector::unit(self.num_states(), self.state_index(q)?))
    }

    pub fn transition_matrix(&self, letter: &str) -> Result<Matrix> {
        Ok(self.delta[self.letter_index(letter)?].clone())
    }

    pub fn step(&self, v: &StateVector, letter: &str) -> Result<StateVector> {
        Ok(self.step_index(v, self.letter_index(letter)?))
    }

    /// `vᵀ · D_a`.
    pub fn step_index(&self, v: &StateVector, a: usize) -> StateVector {
        StateVector(self.delta[a].vec_mul(&v.0))
    }

    /// The weight `v` assigns to `w`: step through the letters, then take the
    /// inner product with the output vector.
    pub fn obs(&self, v: &StateVector, w: &Word) -> Rational {
        let end = w
            .letters()
            .iter()
            .fold(v.clone(), |acc, &a| self.step_index(&acc, a));
        rational::dot(&end.0, &self.out)
    }

    /// `D_w · out`: entry `i` is `obs(dirac(q_i), w)`.
    pub fn column(&self, w: &Word) -> Vec<Rational> {
        w.letters()
            .iter()
            .rev()
            .fold(self.out.clone(), |acc, &a| self.delta[a].mul_vec(&acc))
    }

    /// Checks that `v` has the right length and is legal for this theory.
    pub fn check_vector(&self, v: &StateVector) -> Result<()> {
        if v.len() != self.num_states() {
            return Err(Error::Dimension(format!(
                "state vector of length {} for {} states",
                v.len(),
                self.num_states()
            )));
        }
        v.check(self.theory)
    }

    /// Builds a state vector from `(state, coefficient)` pairs.
    pub fn vector(&self, entries: &[(&str, Rational)]) -> Result<StateVector> {
        let mut v = StateVector::zeros(self.num_states());
        let mut seen = HashMap::new();
        for (name, c) in entries {
            let i = self.state_index(name)?;
            if seen.insert(i, ()).is_some() {
                return Err(Error::DuplicateName {
                    location: "vector".into(),
                    name: name.to_string(),
                });
            }
            v.0[i] = c.clone();
        }
        Ok(v)
    }
}
