//! JSON document format for automata.
//!
//! ```json
//! {"theory": "convex", "alphabet": ["a"], "states": ["q1", "q2"],
//!  "out": {"q1": "1/2"}, "delta": {"a": {"q1": {"q2": "1"}, "q2": {"q2": "1"}}}}
//! ```
//!
//! Rationals are strings `<int>` or `<int>/<posint>`. Omitted outputs and
//! transition entries are zero. Convex automata may carry
//! `"substochastic": true`. Emission is canonical: keys in the order above,
//! states and letters in declaration order, zero entries omitted.

use num::Zero;
use serde_json::{Map, Value};

use crate::automaton::{Automaton, Theory};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

const KEYS: [&str; 6] = [
    "theory",
    "alphabet",
    "states",
    "substochastic",
    "out",
    "delta",
];

pub fn parse(text: &[u8]) -> Result<Automaton> {
    let value: Value = serde_json::from_slice(text).map_err(|e| {
        Error::schema(
            format!("line {} column {}", e.line(), e.column()),
            format!("invalid JSON: {e}"),
        )
    })?;
    from_value(&value)
}

pub fn emit(aut: &Automaton) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(aut)).expect("values serialize");
    s.push('\n');
    s
}

pub fn from_value(value: &Value) -> Result<Automaton> {
    from_value_at(value, "")
}

/// Like [`from_value`], prefixing every diagnostic location with `prefix`.
pub fn from_value_at(value: &Value, prefix: &str) -> Result<Automaton> {
    let loc = |path: &str| {
        if prefix.is_empty() {
            path.to_string()
        } else {
            format!("{prefix}.{path}")
        }
    };
    let root = value
        .as_object()
        .ok_or_else(|| Error::schema(loc("$"), "expected a JSON object"))?;
    if let Some(k) = root.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::schema(loc(k), "unknown key"));
    }

    let theory_name = root
        .get("theory")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::schema(loc("theory"), "missing or not a string"))?;
    let theory = Theory::from_name(theory_name).ok_or_else(|| {
        Error::schema(
            loc("theory"),
            format!("unknown theory {theory_name:?} (expected convex, linear or conic)"),
        )
    })?;
    let alphabet = string_list(root.get("alphabet"), &loc("alphabet"))?;
    let states = string_list(root.get("states"), &loc("states"))?;
    let substochastic = match root.get("substochastic") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(Error::schema(loc("substochastic"), "expected a boolean")),
    };
    let state_index = |name: &str, location: String| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState {
                location,
                name: name.to_string(),
            })
    };

    let n = states.len();
    let mut out = vec![Rational::zero(); n];
    if let Some(v) = root.get("out") {
        let obj = object(v, &loc("out"))?;
        for (name, r) in obj {
            let i = state_index(name, loc("out"))?;
            out[i] = rational_at(r, &loc(&format!("out.{name}")))?;
        }
    }

    let mut delta = vec![Matrix::zeros(n, n); alphabet.len()];
    if let Some(v) = root.get("delta") {
        let obj = object(v, &loc("delta"))?;
        for (letter, rows) in obj {
            let a =
                alphabet
                    .iter()
                    .position(|l| l == letter)
                    .ok_or_else(|| Error::UnknownLetter {
                        location: loc("delta"),
                        name: letter.clone(),
                    })?;
            let rows_path = format!("delta.{letter}");
            for (src, targets) in object(rows, &loc(&rows_path))? {
                let i = state_index(src, loc(&rows_path))?;
                let row_path = format!("{rows_path}.{src}");
                for (dst, r) in object(targets, &loc(&row_path))? {
                    let j = state_index(dst, loc(&row_path))?;
                    delta[a][(i, j)] = rational_at(r, &loc(&format!("{row_path}.{dst}")))?;
                }
            }
        }
    }

    Automaton::new(theory, alphabet, states, out, delta, substochastic).map_err(|e| {
        if prefix.is_empty() {
            e
        } else {
            relocate(e, prefix)
        }
    })
}

fn relocate(e: Error, prefix: &str) -> Error {
    let p = |l: String| format!("{prefix}.{l}");
    match e {
        Error::Schema { location, message } => Error::Schema {
            location: p(location),
            message,
        },
        Error::DuplicateName { location, name } => Error::DuplicateName {
            location: p(location),
            name,
        },
        Error::NotStochastic {
            location,
            state,
            letter,
            sum,
            expected,
        } => Error::NotStochastic {
            location: p(location),
            state,
            letter,
            sum,
            expected,
        },
        Error::OutOfUnitInterval { location, value } => Error::OutOfUnitInterval {
            location: p(location),
            value,
        },
        Error::NegativeWeight { location, value } => Error::NegativeWeight {
            location: p(location),
            value,
        },
        other => other,
    }
}

pub fn to_value(aut: &Automaton) -> Value {
    let states = aut.states();
    let mut root = Map::new();
    root.insert("theory".into(), Value::String(aut.theory().name().into()));
    root.insert(
        "alphabet".into(),
        Value::Array(
            aut.alphabet()
                .letters()
                .iter()
                .map(|l| Value::String(l.clone()))
                .collect(),
        ),
    );
    root.insert(
        "states".into(),
        Value::Array(states.iter().map(|s| Value::String(s.clone())).collect()),
    );
    if aut.is_substochastic() {
        root.insert("substochastic".into(), Value::Bool(true));
    }
    let out: Map<String, Value> = states
        .iter()
        .zip(aut.out())
        .map(|(s, r)| (s.clone(), Value::String(rational::format(r))))
        .collect();
    root.insert("out".into(), Value::Object(out));
    let mut delta = Map::new();
    for (a, letter) in aut.alphabet().letters().iter().enumerate() {
        let d = aut.delta(a);
        let mut rows = Map::new();
        for (i, src) in states.iter().enumerate() {
            let targets: Map<String, Value> = d
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.is_zero())
                .map(|(j, r)| (states[j].clone(), Value::String(rational::format(r))))
                .collect();
            if !targets.is_empty() {
                rows.insert(src.clone(), Value::Object(targets));
            }
        }
        delta.insert(letter.clone(), Value::Object(rows));
    }
    root.insert("delta".into(), Value::Object(delta));
    Value::Object(root)
}

fn string_list(v: Option<&Value>, location: &str) -> Result<Vec<String>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema(location, "missing or not an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::schema(format!("{location}[{i}]"), "expected a string"))
        })
        .collect()
}

fn object<'a>(v: &'a Value, location: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(location, "expected a JSON object"))
}

pub(crate) fn rational_at(v: &Value, location: &str) -> Result<Rational> {
    let text = v
        .as_str()
        .ok_or_else(|| Error::schema(location, "rationals must be JSON strings"))?;
    rational::parse(text).ok_or_else(|| Error::MalformedRational {
        location: location.to_string(),
        text: text.to_string(),
    })
}

/// Parses a points file: one point per line, coordinates as whitespace
/// separated rationals. Blank lines and lines starting with `#` are skipped.
/// Returns the points as the columns of a matrix.
pub fn parse_points(text: &str) -> Result<Matrix> {
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let location = format!("line {}", i + 1);
        let point = line
            .split_whitespace()
            .map(|t| {
                rational::parse(t).ok_or_else(|| Error::MalformedRational {
                    location: location.clone(),
                    text: t.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = points.first() {
            if first.len() != point.len() {
                return Err(Error::schema(
                    location,
                    format!(
                        "point has {} coordinates, expected {}",
                        point.len(),
                        first.len()
                    ),
                ));
            }
        }
        points.push(point);
    }
    if points.is_empty() {
        return Err(Error::schema("line 1", "no points given"));
    }
    Matrix::from_columns(points[0].len(), &points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const SMALL: &str = r#"{"theory":"convex","alphabet":["a"],"states":["q1","q2"],
        "out":{"q1":"1/3"},"delta":{"a":{"q1":{"q2":"1"},"q2":{"q1":"2/3","q2":"1/3"}}}}"#;

    #[test]
    fn round_trip_keeps_fractions() {
        let aut = parse(SMALL.as_bytes()).unwrap();
        assert_eq!(aut.out()[0], ratio(1, 3));
        let text = emit(&aut);
        assert!(text.contains("\"1/3\""));
        let again = parse(text.as_bytes()).unwrap();
        assert_eq!(again, aut);
        assert_eq!(emit(&again), text);
    }

    #[test]
    fn diagnostics_carry_locations() {
        let bad = SMALL.replace("\"2/3\"", "\"0.66\"");
        match parse(bad.as_bytes()).unwrap_err() {
            Error::MalformedRational { location, .. } => assert_eq!(location, "delta.a.q2.q1"),
            other => panic!("{other:?}"),
        }
        let bad = SMALL.replace("\"2/3\"", "\"1/2\"");
        match parse(bad.as_bytes()).unwrap_err() {
            Error::NotStochastic { location, sum, .. } => {
                assert_eq!(location, "delta.a.q2");
                assert_eq!(sum, "5/6");
            }
            other => panic!("{other:?}"),
        }
        let bad = SMALL.replace("{\"q2\":\"1\"}", "{\"q7\":\"1\"}");
        assert!(matches!(
            parse(bad.as_bytes()).unwrap_err(),
            Error::UnknownState { .. }
        ));
        let bad = SMALL.replace("\"delta\":{\"a\"", "\"delta\":{\"b\"");
        assert!(matches!(
            parse(bad.as_bytes()).unwrap_err(),
            Error::UnknownLetter { .. }
        ));
        assert!(parse(b"{\"theory\":").is_err());
        let bad = SMALL.replace("\"convex\"", "\"tropical\"");
        assert!(matches!(
            parse(bad.as_bytes()).unwrap_err(),
            Error::Schema { .. }
        ));
    }

    #[test]
    fn points_file() {
        let m = parse_points(include_str!("../fixtures/hull_points.txt")).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 6));
        assert_eq!(m.column(5), vec![rational::int(4), rational::int(3)]);
        assert!(matches!(
            parse_points("1 2\n3\n"),
            Err(Error::Schema { location, .. }) if location == "line 2"
        ));
        assert!(matches!(
            parse_points("1 0.5\n"),
            Err(Error::MalformedRational { .. })
        ));
    }
}
