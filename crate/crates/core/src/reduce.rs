//! Redundant-state elimination.
//!
//! Given a consistent observation table containing the empty word, two state
//! combinations have the same language iff they have the same table row. So
//! the base of the language space can be read off the rows:
//!
//! * convex: the states whose rows are vertices of the convex hull of all rows,
//! * conic: the states whose rows span the frame of the cone of all rows,
//! * linear: a maximal linearly independent set of rows, swept in state order.
//!
//! Every other state is rewritten as a combination of base states that has the
//! same row, and transitions into it are redirected through that combination.

use std::collections::HashSet;

use num::{Signed, Zero};
use serde_json::{Map, Value};

use crate::automaton::{Automaton, StateVector, Theory, Word};
use crate::error::{Error, Result};
use crate::format;
use crate::frame::{self, HullMode};
use crate::linalg::{simplex_feasible_nonneg, solve_linear, EchelonBasis, Matrix};
use crate::rational::{self, Rational};
use crate::table::{make_consistent, ObservationTable};

/// How each state of the original automaton is expressed over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteMap {
    base: Vec<usize>,
    expansions: Vec<Vec<Rational>>,
}

impl RewriteMap {
    /// `expansions[q]` holds one coefficient per base state.
    pub fn new(base: Vec<usize>, expansions: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(q) = expansions.iter().position(|e| e.len() != base.len()) {
            return Err(Error::Dimension(format!(
                "expansion of state {q} has {} coefficients for {} base states",
                expansions[q].len(),
                base.len()
            )));
        }
        Ok(RewriteMap { base, expansions })
    }

    /// Indices of the kept states, ascending.
    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn expansion(&self, q: usize) -> &[Rational] {
        &self.expansions[q]
    }

    /// The expansion of `q` as a vector over the reduced automaton's states.
    pub fn expansion_vector(&self, q: usize) -> StateVector {
        StateVector(self.expansions[q].clone())
    }

    pub fn is_base(&self, q: usize) -> bool {
        self.base.contains(&q)
    }

    pub fn num_original_states(&self) -> usize {
        self.expansions.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub original: Automaton,
    pub reduced: Automaton,
    pub rewrite: RewriteMap,
    /// Column words of the consistent table the base was read from.
    pub certificate: Vec<Word>,
}

/// Reduces `aut` by eliminating every redundant state.
pub fn reduce(aut: &Automaton) -> Result<ReductionResult> {
    let table = make_consistent(aut);
    let base = extract_base(&table);
    let rewrite = rewrite_map(&table, base)?;
    let reduced = assemble(aut, &rewrite)?;
    Ok(ReductionResult {
        original: aut.clone(),
        reduced,
        rewrite,
        certificate: table.words().to_vec(),
    })
}

/// Reduction of a weighted automaton over the rationals (linear) or the
/// nonnegative rationals (conic).
///
/// Both semirings are commutative and every basis of a free finitely generated
/// semimodule over them has the same size, so the base found from the table
/// rows has minimal cardinality. Row membership decides language membership
/// because the table is consistent and contains the empty word: linear
/// combinations of states that agree on the table agree on every one-letter
/// extension, hence on every word.
pub fn reduce_wa(aut: &Automaton) -> Result<ReductionResult> {
    if aut.theory() == Theory::Convex {
        return Err(Error::UnsupportedTheory {
            operation: "weighted-automaton reduction",
            theory: aut.theory().name(),
        });
    }
    reduce(aut)
}

/// Base states read off the rows of a consistent table, ascending.
///
/// States with identical rows (for conic: rows on the same ray) are
/// represented by the lowest-index one.
pub fn extract_base(table: &ObservationTable<'_>) -> Vec<usize> {
    let aut = table.automaton();
    let n = aut.num_states();
    let m = table.matrix();
    match aut.theory() {
        Theory::Linear => {
            let mut span = EchelonBasis::new(m.cols());
            (0..n).filter(|&q| span.insert(m.row(q))).collect()
        }
        Theory::Convex | Theory::Conic => {
            let mut seen: HashSet<Vec<Rational>> = HashSet::new();
            let mut keepers = Vec::new();
            for q in 0..n {
                let key = match aut.theory() {
                    Theory::Conic => match ray_key(m.row(q)) {
                        Some(k) => k,
                        None => continue,
                    },
                    _ => m.row(q).to_vec(),
                };
                if seen.insert(key) {
                    keepers.push(q);
                }
            }
            if keepers.is_empty() {
                return keepers;
            }
            let points = m.select_rows(&keepers).transpose();
            let picked = match aut.theory() {
                Theory::Convex => frame::convex_extreme_points(&points),
                _ => frame::conical_frame(&points),
            };
            picked.into_iter().map(|k| keepers[k]).collect()
        }
    }
}

/// Row scaled so that its first nonzero entry is 1; `None` for the zero row.
fn ray_key(row: &[Rational]) -> Option<Vec<Rational>> {
    let lead = row.iter().find(|x| !x.is_zero())?.abs();
    Some(row.iter().map(|x| x / &lead).collect())
}

/// Expresses every state's row over the base rows.
pub fn rewrite_map(table: &ObservationTable<'_>, base: Vec<usize>) -> Result<RewriteMap> {
    let aut = table.automaton();
    let m = table.matrix();
    let columns = m.select_rows(&base).transpose();
    let lifted = frame::lift(&columns);
    let mut expansions = Vec::with_capacity(aut.num_states());
    for q in 0..aut.num_states() {
        if let Some(k) = base.iter().position(|&b| b == q) {
            expansions.push(StateVector::unit(base.len(), k).0);
            continue;
        }
        let row = m.row(q).to_vec();
        let found = match aut.theory() {
            Theory::Convex => {
                let mut target = row;
                target.push(rational::one());
                simplex_feasible_nonneg(&lifted, &target)
            }
            Theory::Conic => simplex_feasible_nonneg(&columns, &row),
            Theory::Linear => solve_linear(&columns, &row),
        };
        let coefficients = found.ok_or_else(|| {
            Error::Internal(format!(
                "row of state {} on E = [{}] is not a {} combination of the base rows",
                aut.states()[q],
                render_words(aut, table.words()).join(", "),
                aut.theory()
            ))
        })?;
        expansions.push(coefficients);
    }
    RewriteMap::new(base, expansions)
}

/// Builds the automaton on the base states with transitions pushed through
/// the rewrite map.
pub fn assemble(aut: &Automaton, rewrite: &RewriteMap) -> Result<Automaton> {
    let base = rewrite.base();
    let k = base.len();
    let states = base.iter().map(|&q| aut.states()[q].clone()).collect();
    let out = base.iter().map(|&q| aut.out()[q].clone()).collect();
    let mut delta = Vec::with_capacity(aut.alphabet().len());
    for d in aut.deltas() {
        let mut reduced = Matrix::zeros(k, k);
        for (row, &p) in base.iter().enumerate() {
            for (q, weight) in d.row(p).iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                for (col, coeff) in rewrite.expansion(q).iter().enumerate() {
                    if !coeff.is_zero() {
                        reduced[(row, col)] += weight * coeff;
                    }
                }
            }
        }
        delta.push(reduced);
    }
    Automaton::new(
        aut.theory(),
        aut.alphabet().letters().to_vec(),
        states,
        out,
        delta,
        aut.is_substochastic(),
    )
    .map_err(|e| Error::Internal(format!("reduced automaton is invalid: {e}")))
}

fn render_words(aut: &Automaton, words: &[Word]) -> Vec<String> {
    words.iter().map(|w| aut.render_word(w)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    /// The rewrite map or reduced automaton is not shaped like a reduction.
    Malformed(String),
    /// The first (length-lexicographic) word on which a state and its
    /// expansion disagree.
    LanguageMismatch {
        state: String,
        word: String,
        original: Rational,
        reduced: Rational,
    },
    /// A reduced state is still a combination of the others.
    Redundant { state: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn summary(&self) -> String {
        match &self.failure {
            None => format!(
                "pass ({} words up to length {})",
                self.words_checked, self.max_len
            ),
            Some(VerifyFailure::Malformed(why)) => format!("fail: malformed reduction: {why}"),
            Some(VerifyFailure::LanguageMismatch {
                state,
                word,
                original,
                reduced,
            }) => format!(
                "fail: state {state} on word {word}: original {original}, rewritten {reduced}"
            ),
            Some(VerifyFailure::Redundant { state }) => {
                format!("fail: reduced state {state} is still redundant")
            }
        }
    }
}

/// Re-checks a reduction exactly: every original state agrees with its
/// expansion on all words up to `max_len`, and no reduced state is a
/// combination of the others.
pub fn verify(result: &ReductionResult, max_len: usize) -> VerifyReport {
    let mut report = VerifyReport {
        max_len,
        words_checked: 0,
        failure: None,
    };
    if let Err(why) = check_shape(result) {
        report.failure = Some(VerifyFailure::Malformed(why));
        return report;
    }
    let original = &result.original;
    let reduced = &result.reduced;
    let n = original.num_states();

    // Columns D_w·out for both automata, built by prepending letters so each
    // level comes out in lexicographic order.
    let mut level: Vec<(Word, Vec<Rational>, Vec<Rational>)> = vec![(
        Word::empty(),
        original.out().to_vec(),
        reduced.out().to_vec(),
    )];
    for len in 0..=max_len {
        if len > 0 {
            let mut next = Vec::with_capacity(level.len() * original.alphabet().len());
            for a in 0..original.alphabet().len() {
                for (w, col, rcol) in &level {
                    next.push((
                        w.prepend(a),
                        original.delta(a).mul_vec(col),
                        reduced.delta(a).mul_vec(rcol),
                    ));
                }
            }
            level = next;
        }
        for (w, col, rcol) in &level {
            report.words_checked += 1;
            for q in 0..n {
                let rewritten = rational::dot(result.rewrite.expansion(q), rcol);
                if rewritten != col[q] {
                    report.failure = Some(VerifyFailure::LanguageMismatch {
                        state: original.states()[q].clone(),
                        word: original.render_word(w),
                        original: col[q].clone(),
                        reduced: rewritten,
                    });
                    return report;
                }
            }
        }
    }

    if let Some(k) = first_redundant(reduced) {
        report.failure = Some(VerifyFailure::Redundant {
            state: reduced.states()[k].clone(),
        });
    }
    report
}

/// The lowest state whose row on a consistent table is a combination of the
/// other rows, if any.
pub fn first_redundant(aut: &Automaton) -> Option<usize> {
    let table = make_consistent(aut);
    let m = table.matrix();
    let points = m.transpose();
    (0..aut.num_states()).find(|&k| match aut.theory() {
        Theory::Convex => frame::membership_oracle(&points, k, HullMode::Convex),
        Theory::Conic => frame::membership_oracle(&points, k, HullMode::Conic),
        Theory::Linear => {
            let others: Vec<usize> = (0..aut.num_states()).filter(|&j| j != k).collect();
            solve_linear(&points.select_columns(&others), m.row(k)).is_some()
        }
    })
}

fn check_shape(result: &ReductionResult) -> std::result::Result<(), String> {
    let (original, reduced, rewrite) = (&result.original, &result.reduced, &result.rewrite);
    if original.theory() != reduced.theory() {
        return Err("theories differ".into());
    }
    if original.alphabet() != reduced.alphabet() {
        return Err("alphabets differ".into());
    }
    if rewrite.num_original_states() != original.num_states() {
        return Err("rewrite map does not cover every original state".into());
    }
    if reduced.num_states() > original.num_states() {
        return Err("reduced automaton is larger than the original".into());
    }
    if rewrite.base().len() != reduced.num_states()
        || rewrite
            .base()
            .iter()
            .zip(reduced.states())
            .any(|(&q, name)| original.states().get(q) != Some(name))
    {
        return Err("base states do not match the reduced automaton's states".into());
    }
    for (k, &q) in rewrite.base().iter().enumerate() {
        if rewrite.expansion_vector(q) != StateVector::unit(rewrite.base().len(), k) {
            return Err(format!(
                "base state {} does not expand to itself",
                original.states()[q]
            ));
        }
    }
    for q in 0..original.num_states() {
        if let Err(e) = rewrite.expansion_vector(q).check(original.theory()) {
            return Err(format!("expansion of {}: {e}", original.states()[q]));
        }
    }
    Ok(())
}

impl ReductionResult {
    /// Report document: base, rewrite of the eliminated states, certificate
    /// words, the reduced automaton, and the original automaton.
    pub fn to_json(&self) -> Value {
        let orig = &self.original;
        let base_names: Vec<&String> = self
            .rewrite
            .base()
            .iter()
            .map(|&q| &orig.states()[q])
            .collect();
        let mut rewrite = Map::new();
        for q in 0..orig.num_states() {
            if self.rewrite.is_base(q) {
                continue;
            }
            let coeffs: Map<String, Value> = self
                .rewrite
                .expansion(q)
                .iter()
                .zip(&base_names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, name)| ((*name).clone(), Value::String(rational::format(c))))
                .collect();
            rewrite.insert(orig.states()[q].clone(), Value::Object(coeffs));
        }
        let mut root = Map::new();
        root.insert(
            "base".into(),
            Value::Array(
                base_names
                    .iter()
                    .map(|s| Value::String((*s).clone()))
                    .collect(),
            ),
        );
        root.insert("rewrite".into(), Value::Object(rewrite));
        root.insert(
            "E".into(),
            Value::Array(
                render_words(orig, &self.certificate)
                    .into_iter()
                    .map(Value::String)
                    .collect(),
            ),
        );
        root.insert("reduced".into(), format::to_value(&self.reduced));
        root.insert("original".into(), format::to_value(orig));
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }

    /// Parses a report document. Shape errors (unknown states, a base state in
    /// the rewrite section) are rejected here; whether the numbers are right is
    /// left to [`verify`].
    pub fn from_json(text: &[u8]) -> Result<Self> {
        let value: Value = serde_json::from_slice(text).map_err(|e| {
            Error::schema(
                format!("line {} column {}", e.line(), e.column()),
                format!("invalid JSON: {e}"),
            )
        })?;
        let root = value
            .as_object()
            .ok_or_else(|| Error::schema("$", "expected a JSON object"))?;
        for key in ["base", "rewrite", "E", "reduced", "original"] {
            if !root.contains_key(key) {
                return Err(Error::schema(key, "missing key"));
            }
        }
        let original = format::from_value_at(&root["original"], "original")?;
        let reduced = format::from_value_at(&root["reduced"], "reduced")?;

        let index_of = |name: &str, location: &str| {
            original.state_index(name).map_err(|_| Error::UnknownState {
                location: location.to_string(),
                name: name.to_string(),
            })
        };
        let base_names = root["base"]
            .as_array()
            .ok_or_else(|| Error::schema("base", "expected an array"))?;
        let mut base = Vec::with_capacity(base_names.len());
        for (i, v) in base_names.iter().enumerate() {
            let name = v
                .as_str()
                .ok_or_else(|| Error::schema(format!("base[{i}]"), "expected a string"))?;
            base.push(index_of(name, &format!("base[{i}]"))?);
        }
        let k = base.len();
        let mut expansions: Vec<Option<Vec<Rational>>> = vec![None; original.num_states()];
        for (pos, &q) in base.iter().enumerate() {
            if expansions[q].is_some() {
                return Err(Error::DuplicateName {
                    location: "base".into(),
                    name: original.states()[q].clone(),
                });
            }
            expansions[q] = Some(StateVector::unit(k, pos).0);
        }
        let rewrite_obj = root["rewrite"]
            .as_object()
            .ok_or_else(|| Error::schema("rewrite", "expected a JSON object"))?;
        for (name, coeffs) in rewrite_obj {
            let q = index_of(name, "rewrite")?;
            if expansions[q].is_some() {
                return Err(Error::schema(
                    format!("rewrite.{name}"),
                    "state is already in the base or listed twice",
                ));
            }
            let obj = coeffs.as_object().ok_or_else(|| {
                Error::schema(format!("rewrite.{name}"), "expected a JSON object")
            })?;
            let mut e = vec![Rational::zero(); k];
            for (target, c) in obj {
                let location = format!("rewrite.{name}.{target}");
                let t = index_of(target, &location)?;
                let pos = base.iter().position(|&b| b == t).ok_or_else(|| {
                    Error::schema(location.clone(), "coefficient on a non-base state")
                })?;
                e[pos] = format::rational_at(c, &location)?;
            }
            expansions[q] = Some(e);
        }
        let expansions = expansions
            .into_iter()
            .enumerate()
            .map(|(q, e)| {
                e.ok_or_else(|| {
                    Error::schema(
                        "rewrite",
                        format!("no expansion for state {}", original.states()[q]),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let words = root["E"]
            .as_array()
            .ok_or_else(|| Error::schema("E", "expected an array"))?;
        let certificate = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let text = w
                    .as_str()
                    .ok_or_else(|| Error::schema(format!("E[{i}]"), "expected a string"))?;
                original.parse_word(text)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(ReductionResult {
            original,
            reduced,
            rewrite: RewriteMap::new(base, expansions)?,
            certificate,
        })
    }
}
