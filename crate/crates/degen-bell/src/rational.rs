//! The universal scalar type: arbitrary-precision rationals.
//!
//! `Rat` is kept in lowest terms with a positive denominator by construction,
//! so structural equality is semantic equality. All textual I/O uses the
//! canonical `p/q` form (`p` alone when the denominator is 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

/// Shorthand constructor for small rationals. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    assert!(denom != 0, "zero denominator");
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses the canonical `p/q` form (or a bare integer `p`). Rejects zero
/// denominators and anything that is not a pair of decimal integers.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(Error::ParseRational(s.to_string()));
    }
    BigRational::from_str(trimmed).map_err(|_| Error::ParseRational(s.to_string()))
}

/// Canonical `p/q` rendering (`p` when the denominator is 1).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Nearest double, for display and the demonstration-mode evaluator only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else if r.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    })
}

/// `x^n` with the empty-product convention `x^0 = 1` (also for `x = 0`).
pub fn pow_rat(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::from_integer(BigInt::from(1));
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Serde adapter storing rationals as canonical `p/q` strings. JSON numbers
/// cannot hold bignums, so exact values never serialize as numbers.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}
