//! Exact rational scalars.
//!
//! Weight algebra (moments, window products, the quasinormal recurrence) runs
//! over arbitrary-precision rationals. Floating inputs are converted through
//! their shortest round-trip decimal form, so `0.6` becomes exactly `3/5`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type ExactRational = BigRational;

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, integers, and decimals with optional exponent.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(bad)?;
        let den = parse_decimal(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<ExactRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|ch| ch.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exponent - frac.len() as i32;
    let ten = int(10);
    for _ in 0..shift.unsigned_abs() {
        if shift > 0 {
            value *= &ten;
        } else {
            value /= &ten;
        }
    }
    Some(if negative { -value } else { value })
}

/// Exact rational equal to the shortest decimal that round-trips to `x`.
pub fn from_f64(x: f64) -> Result<ExactRational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x}")));
    }
    parse_rational(&format!("{x}"))
}

pub fn to_f64(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &ExactRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde wrapper: reads a JSON number or a `"p/q"` string; writes a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalLit(pub ExactRational);

impl Serialize for RationalLit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalLit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LitVisitor;
        impl Visitor<'_> for LitVisitor {
            type Value = RationalLit;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(RationalLit(int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(RationalLit(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                from_f64(v).map(RationalLit).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v).map(RationalLit).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(LitVisitor)
    }
}

/// Outcome of the exact semidefiniteness test.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPsd {
    pub is_psd: bool,
    /// Elimination step at which the test failed.
    pub failing_pivot: Option<usize>,
}

/// Exact PSD decision for a real symmetric rational matrix.
///
/// Symmetric elimination without pivoting: a negative pivot, or a zero pivot
/// with a nonzero remaining row, certifies indefiniteness; otherwise every
/// Schur complement is PSD.
pub fn is_psd_exact(matrix: &[Vec<ExactRational>]) -> ExactPsd {
    let n = matrix.len();
    let mut a: Vec<Vec<ExactRational>> = matrix.to_vec();
    for p in 0..n {
        let pivot = a[p][p].clone();
        if pivot.is_negative() {
            return ExactPsd {
                is_psd: false,
                failing_pivot: Some(p),
            };
        }
        if pivot.is_zero() {
            if (p + 1..n).any(|j| !a[p][j].is_zero()) {
                return ExactPsd {
                    is_psd: false,
                    failing_pivot: Some(p),
                };
            }
            continue;
        }
        for i in p + 1..n {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &pivot;
            for j in p + 1..n {
                let delta = &factor * &a[p][j];
                a[i][j] -= delta;
            }
        }
    }
    ExactPsd {
        is_psd: true,
        failing_pivot: None,
    }
}

/// `x^k` for a nonnegative exponent.
pub fn pow(x: &ExactRational, k: usize) -> ExactRational {
    let mut out = ExactRational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}
