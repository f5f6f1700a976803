//! Exact rationals and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Representative of `x mod 1` in `[-1/2, 1/2)`.
pub fn centered(x: &Rational) -> Rational {
    let half = q(1, 2);
    let shifted = frac(&(x + &half));
    shifted - half
}

pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Integer value of `x`, if it is one and fits in an `i64`.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Canonical `"p/q"` form: lowest terms, `q > 0`, and the denominator is always written.
pub fn format(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`. Non-reduced input is normalised.
pub fn parse(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            BigInt::from_str(n.trim()).map_err(|_| bad())?,
            BigInt::from_str(d.trim()).map_err(|_| bad())?,
        ),
        None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Serde adapter for a single rational.
pub mod serde_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_q_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(super::format)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(format(&int(0)), "0/1");
        assert_eq!(format(&q(-4, 6)), "-2/3");
        assert_eq!(format(&q(3, -9)), "-1/3");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse("2/3").unwrap(), q(2, 3));
        assert_eq!(parse(" -4/6 ").unwrap(), q(-2, 3));
        assert_eq!(parse("17").unwrap(), int(17));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("0.5").is_err());
    }

    #[test]
    fn frac_and_centered() {
        assert_eq!(frac(&q(-2, 3)), q(1, 3));
        assert_eq!(frac(&int(3)), int(0));
        assert_eq!(centered(&q(3, 4)), q(-1, 4));
        assert_eq!(centered(&q(1, 2)), q(-1, 2));
        assert_eq!(centered(&q(-1, 2)), q(-1, 2));
    }
}
