//! Rational interval arithmetic with directed rounding.
//!
//! Everything downstream that touches an irrational quantity (q-th roots,
//! powers `t^λ`, `e^{-i}`, `π`) goes through certified enclosures built
//! here: closed intervals with exact rational endpoints that are proved to
//! contain the target value. Exact rational inputs stay exact; rounding is
//! always outward.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::extrat::format_rational;

/// A closed interval `[lo, hi]` with rational endpoints, `lo ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    /// Multiplication by an exact rational of either sign.
    pub fn scale(&self, c: &BigRational) -> RatInterval {
        if c.is_negative() {
            RatInterval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            RatInterval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// Reciprocal of an interval bounded away from zero on the positive
    /// side.
    pub fn recip_positive(&self) -> Result<RatInterval> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidArgument(
                "reciprocal requires a strictly positive interval".into(),
            ));
        }
        Ok(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Rounds endpoints outward to the dyadic grid `2^-bits` (coarser
    /// grids via negative `bits`).
    pub fn round_outward(&self, bits: i64) -> RatInterval {
        RatInterval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    /// True when `hi < bound`, i.e. every contained value is `< bound`.
    pub fn certainly_lt(&self, bound: &BigRational) -> bool {
        self.hi < *bound
    }

    /// True when `lo > bound`.
    pub fn certainly_gt(&self, bound: &BigRational) -> bool {
        self.lo > *bound
    }
}

/// `floor(x · 2^bits) / 2^bits`; negative `bits` coarsen instead.
pub fn floor_dyadic(x: &BigRational, bits: i64) -> BigRational {
    if bits >= 0 {
        let shift = bits as usize;
        let scaled = (x.numer() << shift).div_floor(x.denom());
        BigRational::new(scaled, BigInt::one() << shift)
    } else {
        let shift = (-bits) as usize;
        let scaled = x.numer().div_floor(&(x.denom() << shift));
        BigRational::from_integer(scaled << shift)
    }
}

/// `ceil(x · 2^bits) / 2^bits`; negative `bits` coarsen instead.
pub fn ceil_dyadic(x: &BigRational, bits: i64) -> BigRational {
    if bits >= 0 {
        let shift = bits as usize;
        let scaled = (x.numer() << shift).div_ceil(x.denom());
        BigRational::new(scaled, BigInt::one() << shift)
    } else {
        let shift = (-bits) as usize;
        let scaled = x.numer().div_ceil(&(x.denom() << shift));
        BigRational::from_integer(scaled << shift)
    }
}

/// Integer `e` with `2^(e-1) ≤ x < 2^(e+1)` for positive `x`; a sizing
/// estimate, not an exact logarithm.
pub fn approx_log2(x: &BigRational) -> i64 {
    debug_assert!(x.is_positive());
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Rounds a positive value down, keeping about `sig` significant bits.
pub fn trim_down_sig(x: &BigRational, sig: u64) -> BigRational {
    floor_dyadic(x, sig as i64 - approx_log2(x))
}

/// Rounds a positive value up, keeping about `sig` significant bits.
pub fn trim_up_sig(x: &BigRational, sig: u64) -> BigRational {
    ceil_dyadic(x, sig as i64 - approx_log2(x))
}

/// Outcome of a root or power computation: exact when the input is a
/// perfect power, otherwise a certified enclosure of width `≤ 2^-bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootEnclosure {
    Exact(BigRational),
    Enclosure(RatInterval),
}

impl RootEnclosure {
    pub fn interval(&self) -> RatInterval {
        match self {
            RootEnclosure::Exact(v) => RatInterval::point(v.clone()),
            RootEnclosure::Enclosure(i) => i.clone(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            RootEnclosure::Exact(v) => Some(v),
            RootEnclosure::Enclosure(_) => None,
        }
    }
}

fn bigint_to_unsigned(n: &BigInt) -> BigUint {
    debug_assert!(!n.is_negative());
    n.magnitude().clone()
}

/// `q`-th root of a nonnegative rational: exact for perfect powers, else
/// an enclosure of width `≤ 2^-bits`.
pub fn nth_root(x: &BigRational, q: u32, bits: u64) -> Result<RootEnclosure> {
    if q == 0 {
        return Err(Error::InvalidArgument("zeroth root".into()));
    }
    if x.is_negative() {
        return Err(Error::InvalidArgument(
            "roots of negative values are not defined here".into(),
        ));
    }
    if x.is_zero() {
        return Ok(RootEnclosure::Exact(BigRational::zero()));
    }
    if q == 1 {
        return Ok(RootEnclosure::Exact(x.clone()));
    }
    let n = bigint_to_unsigned(x.numer());
    let d = bigint_to_unsigned(x.denom());
    let rn = n.nth_root(q);
    let rd = d.nth_root(q);
    if rn.pow(q) == n && rd.pow(q) == d {
        return Ok(RootEnclosure::Exact(BigRational::new(
            BigInt::from(rn),
            BigInt::from(rd),
        )));
    }
    // floor((n·2^(q·bits)/d)^(1/q)) / 2^bits brackets the root from below
    // with the next grid point + 1 bracketing from above.
    let shift = usize::try_from(q as u64 * bits).expect("shift fits usize");
    let scaled = (n << shift) / &d;
    let root = scaled.nth_root(q);
    let denom = BigInt::one() << usize::try_from(bits).unwrap();
    let lo = BigRational::new(BigInt::from(root.clone()), denom.clone());
    let hi = BigRational::new(BigInt::from(root + BigUint::one()), denom);
    Ok(RootEnclosure::Enclosure(RatInterval { lo, hi }))
}

/// `x^p` for exact rationals with `p ≥ 0`.
pub fn rational_pow(x: &BigRational, p: u32) -> BigRational {
    if p == 0 {
        return BigRational::one();
    }
    BigRational::new(x.numer().pow(p), x.denom().pow(p))
}

/// `x^(p/q)` for `x > 0` and a nonnegative exponent in lowest terms.
pub fn rational_pow_interval(
    x: &BigRational,
    expo: &BigRational,
    bits: u64,
) -> Result<RootEnclosure> {
    if !x.is_positive() {
        return Err(Error::InvalidArgument(
            "powers require a positive base".into(),
        ));
    }
    if expo.is_negative() {
        return Err(Error::InvalidArgument(
            "negative exponents: use reciprocal_power".into(),
        ));
    }
    let p = u32::try_from(expo.numer().magnitude().clone())
        .map_err(|_| Error::InvalidArgument("exponent numerator too large".into()))?;
    let q = u32::try_from(expo.denom().magnitude().clone())
        .map_err(|_| Error::InvalidArgument("exponent denominator too large".into()))?;
    nth_root(&rational_pow(x, p), q, bits)
}

/// `j^(-a)` for a positive integer `j` and positive rational `a`: exact
/// when `a` is an integer (or `j` a perfect power), else an enclosure of
/// width `≤ 2^-bits`.
pub fn reciprocal_power(j: u64, a: &BigRational, bits: u64) -> Result<RootEnclosure> {
    if j == 0 {
        return Err(Error::InvalidArgument("0^(-a) undefined".into()));
    }
    if !a.is_positive() {
        return Err(Error::InvalidArgument(
            "reciprocal power requires a > 0".into(),
        ));
    }
    let p = u32::try_from(a.numer().magnitude().clone())
        .map_err(|_| Error::InvalidArgument("exponent numerator too large".into()))?;
    let q = u32::try_from(a.denom().magnitude().clone())
        .map_err(|_| Error::InvalidArgument("exponent denominator too large".into()))?;
    let base = rational_pow(
        &BigRational::new(BigInt::one(), BigInt::from(j)),
        p,
    );
    nth_root(&base, q, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrat::rat;

    #[test]
    fn interval_arithmetic_basics() {
        let a = RatInterval::new(rat(1, 2), rat(3, 4)).unwrap();
        let b = RatInterval::new(rat(-1, 4), rat(1, 4)).unwrap();
        let s = a.add(&b);
        assert_eq!(s.lo(), &rat(1, 4));
        assert_eq!(s.hi(), &rat(1, 1));
        let m = a.mul(&b);
        assert_eq!(m.lo(), &rat(-3, 16));
        assert_eq!(m.hi(), &rat(3, 16));
        assert!(RatInterval::new(rat(1, 1), rat(0, 1)).is_err());
    }

    #[test]
    fn directed_dyadic_rounding() {
        let x = rat(1, 3);
        let lo = floor_dyadic(&x, 8);
        let hi = ceil_dyadic(&x, 8);
        assert!(lo < x && x < hi);
        assert_eq!(&hi - &lo, rat(1, 256));
        // coarse grid
        let y = rat(37, 1);
        assert_eq!(floor_dyadic(&y, -3), rat(32, 1));
        assert_eq!(ceil_dyadic(&y, -3), rat(40, 1));
        // exact dyadics are fixed points
        let z = rat(5, 8);
        assert_eq!(floor_dyadic(&z, 8), z);
        assert_eq!(ceil_dyadic(&z, 8), z);
    }

    #[test]
    fn roots_detect_perfect_powers() {
        match nth_root(&rat(9, 4), 2, 32).unwrap() {
            RootEnclosure::Exact(v) => assert_eq!(v, rat(3, 2)),
            _ => panic!("9/4 is a perfect square"),
        }
        match nth_root(&rat(27, 1), 3, 32).unwrap() {
            RootEnclosure::Exact(v) => assert_eq!(v, rat(3, 1)),
            _ => panic!("27 is a perfect cube"),
        }
    }

    #[test]
    fn root_enclosures_bracket_tightly() {
        let e = nth_root(&rat(2, 1), 2, 64).unwrap();
        let i = e.interval();
        // sqrt(2): check the enclosure squares around 2
        assert!(rational_pow(i.lo(), 2) < rat(2, 1));
        assert!(rational_pow(i.hi(), 2) > rat(2, 1));
        let ulp = BigRational::new(BigInt::one(), BigInt::one() << 64usize);
        assert!(i.width() <= ulp);
    }

    #[test]
    fn reciprocal_power_integer_exponent_is_exact() {
        match reciprocal_power(6, &rat(2, 1), 16).unwrap() {
            RootEnclosure::Exact(v) => assert_eq!(v, rat(1, 36)),
            _ => panic!("integer exponent must be exact"),
        }
    }

    #[test]
    fn reciprocal_power_enclosure_contains_true_value() {
        // 2^(-3/2) = 1/(2·sqrt 2) ≈ 0.35355
        let e = reciprocal_power(2, &rat(3, 2), 80).unwrap().interval();
        assert!(e.lo() < e.hi());
        // cross-check by squaring: (2^(-3/2))^2 = 1/8
        assert!(rational_pow(e.lo(), 2) < rat(1, 8));
        assert!(rational_pow(e.hi(), 2) > rat(1, 8));
    }

    #[test]
    fn significant_trimming_bounds_sideways() {
        let x = rat(355, 113);
        let d = trim_down_sig(&x, 20);
        let u = trim_up_sig(&x, 20);
        assert!(d <= x && x <= u);
        assert!(&u - &d < rat(1, 100_000));
    }
}
