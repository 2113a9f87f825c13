//! Exact rational scalars and their canonical text form.
//!
//! The text form is `<int>` or `<int>/<posint>`, always in lowest terms when
//! emitted. Decimal notation is neither produced nor accepted.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `<int>` or `<int>/<posint>`. Returns `None` on anything else,
/// including a zero denominator.
pub fn parse(text: &str) -> Option<Rational> {
    fn integer(s: &str) -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
    match text.split_once('/') {
        None => integer(text).map(Rational::from_integer),
        Some((n, d)) => {
            if d.starts_with('-') {
                return None;
            }
            let numer = integer(n)?;
            let denom = integer(d)?;
            if denom.is_zero() {
                return None;
            }
            Some(Rational::new(numer, denom))
        }
    }
}

/// Canonical text: `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, x| acc + x)
}
