//! Exact rationals and the extended value set `Q ∪ {∞}` used by weight functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; the result is reduced with a positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// An exact rational or the symbol ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn one() -> Self {
        ExtRational::Finite(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExtRational::Finite(int(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Result<Rational> {
        match self {
            ExtRational::Finite(r) => Ok(r),
            ExtRational::Infinity => Err(Error::Undefined("value is infinite".into())),
        }
    }

    /// `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> ExtRational {
        match self {
            ExtRational::Finite(r) if r.is_zero() => ExtRational::Infinity,
            ExtRational::Finite(r) => ExtRational::Finite(r.recip()),
            ExtRational::Infinity => ExtRational::Finite(Rational::zero()),
        }
    }

    /// Product in `Q ∪ {∞}`; `0·∞` is undefined.
    pub fn mul(&self, other: &ExtRational) -> Result<ExtRational> {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => Ok(ExtRational::Finite(a * b)),
            (ExtRational::Infinity, x) | (x, ExtRational::Infinity) => {
                if x.is_zero() {
                    Err(Error::Undefined("0·∞".into()))
                } else {
                    Ok(ExtRational::Infinity)
                }
            }
        }
    }

    /// Weight times a function value, with the convention that the product
    /// is 0 wherever the function vanishes, even against ∞.
    pub fn weigh(&self, value: &Rational) -> Result<Rational> {
        if value.is_zero() {
            return Ok(Rational::zero());
        }
        match self {
            ExtRational::Finite(w) => Ok(w * value),
            ExtRational::Infinity => Err(Error::Undefined("∞ meets a nonzero value".into())),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(ExtRational::Infinity),
            other => parse_rational(other).map(ExtRational::Finite),
        }
    }
}
