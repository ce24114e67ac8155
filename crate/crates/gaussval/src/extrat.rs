//! Extended nonnegative rational values: the codomain of coefficient
//! valuations and of Newton polygons.
//!
//! A value is either a finite nonnegative rational or the distinguished
//! element `∞` (the valuation of zero). The order places `∞` above every
//! finite value and addition absorbs it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational or `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(BigRational),
    Infinity,
}

impl ExtRat {
    /// Wraps a finite value, rejecting negatives.
    pub fn finite(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::NegativeValue(format_rational(&value)));
        }
        Ok(ExtRat::Finite(value))
    }

    pub fn from_integer(n: u64) -> Self {
        ExtRat::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// Finite `n/d` with `d > 0`.
    pub fn from_ratio(n: u64, d: u64) -> Self {
        assert!(d > 0, "zero denominator");
        ExtRat::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        ExtRat::Finite(BigRational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(v) if v.is_zero())
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtRat::Finite(v) => Some(v),
            ExtRat::Infinity => None,
        }
    }

    /// Unwraps a finite value; panics on `∞`.
    pub fn expect_finite(&self) -> &BigRational {
        self.as_finite().expect("unexpected infinite value")
    }

    /// Divides a finite value by a positive integer; `∞` is fixed.
    pub fn div_int(&self, d: u32) -> Self {
        match self {
            ExtRat::Infinity => ExtRat::Infinity,
            ExtRat::Finite(v) => {
                ExtRat::Finite(v / BigRational::from_integer(BigInt::from(d)))
            }
        }
    }
}

impl Add<&ExtRat> for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Infinity, _) | (_, ExtRat::Infinity) => ExtRat::Infinity,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Infinity => write!(f, "inf"),
            ExtRat::Finite(v) => write!(f, "{}", format_rational(v)),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            return Ok(ExtRat::Infinity);
        }
        ExtRat::finite(parse_rational(s)?)
    }
}

/// Canonical `num/den` form in lowest terms, denominator always explicit.
pub fn format_rational(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `num/den` or a bare integer. Denominator must be positive.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |_| Error::Parse(format!("invalid rational: {s:?}"));
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(bad)?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(bad)?;
            let d = BigInt::from_str(den.trim()).map_err(bad)?;
            if !d.is_positive() {
                return Err(Error::Parse(format!(
                    "denominator must be positive: {s:?}"
                )));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Parses a rational and checks it is `≥ 0`.
pub fn parse_nonneg_rational(s: &str) -> Result<BigRational> {
    let v = parse_rational(s)?;
    if v.is_negative() {
        return Err(Error::NegativeValue(format_rational(&v)));
    }
    Ok(v)
}

/// `n/1` as a rational.
pub fn rat_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational, `d > 0`.
pub fn rat(n: i64, d: u64) -> BigRational {
    assert!(d > 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact `mantissa / 2^shift` in canonical form.
pub fn dyadic_rational(mantissa: BigInt, shift: u64) -> BigRational {
    BigRational::new(mantissa, BigInt::one() << usize::try_from(shift).unwrap())
}
