//! Certified construction of the power-tail separating family.
//!
//! For an exponent `a > 1` let `F_a(i) = Σ_{j≥i} j^(-a)`. The family
//! member at `a` is a coefficient profile whose value at every index
//! `i ≥ 1` is a rational `q_i` within `e^(-i)` of `F_a(i)` (index 0 is
//! omitted: its valuation is `∞`). The profile's polygon then has nodes
//! at every built integer, slopes tracking `i^(-a)`, and its transform
//! separates the growth strata at the threshold `(a-1)/a`.
//!
//! The tolerance actually enforced per index is
//!
//! ```text
//! ε_i = min( lower-bound(e^(-i)),  (i^(-a) - (i+1)^(-a)) / 4 )
//! ```
//!
//! The first part only tightens the `e^(-i)` target (a rational proxy is
//! needed for exact comparisons anyway); the second, a quarter of the
//! consecutive-slope gap, forces strict convexity: with
//! `|q_j - F_a(j)| < ε_j` for `j ∈ {i, i+1, i+2}` and `ε` decreasing,
//!
//! ```text
//! s_i - s_{i+1} = (i^(-a) - (i+1)^(-a)) + (δ_i - 2δ_{i+1} + δ_{i+2})
//!               > gap_i - 4·ε_i ≥ 0 ,
//! ```
//!
//! so every built index is a genuine polygon node. Rounding alone to
//! `e^(-i)` would not guarantee that for small `i`.
//!
//! Everything is certified by exact rational comparisons against interval
//! enclosures; a build either proves its tolerances or reports the index
//! where the working precision fell short.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrat::{dyadic_rational, format_rational, rat_u64, ExtRat};
use crate::interval::{approx_log2, floor_dyadic, reciprocal_power, RatInterval};
use crate::polygon::{newton_polygon, ConvexProfile};
use crate::profile::{CoefficientProfile, Tail};
use crate::series::{exp_neg_bounds, tail_reference, tail_sum_enclosure};
use crate::strata::{ratio_sequence, Provenance, RatioSequence, StratumIndex, StratumVerdict, VerdictKind};

/// Build parameters: exponent, truncation, and guard precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaSpec {
    #[serde(serialize_with = "crate::fa::serialize_rational")]
    pub a: BigRational,
    pub n: u64,
    pub precision: u32,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    v: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

impl FaSpec {
    /// `a > 1`, `n ≥ 2`, and a guard precision between 32 and 4096 bits
    /// (the per-index working precision is `ε_i`-driven; `precision` only
    /// adds margin on top).
    pub fn new(a: BigRational, n: u64, precision: u32) -> Result<Self> {
        if a <= BigRational::one() {
            return Err(Error::InvalidArgument(format!(
                "family exponent must satisfy a > 1, got {}",
                format_rational(&a)
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument("truncation must be >= 2".into()));
        }
        if !(32..=4096).contains(&precision) {
            return Err(Error::InvalidArgument(
                "guard precision must lie in [32, 4096] bits".into(),
            ));
        }
        Ok(FaSpec { a, n, precision })
    }
}

/// Per-index certification record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaEntry {
    pub index: u64,
    /// Certified bound on `|q_i - F_a(i)|` (exact rational).
    pub error_bound: BigRational,
    /// The tolerance `ε_i` the bound was checked against.
    pub tolerance: BigRational,
    /// Certified rational lower bound on `e^(-i)`.
    pub exp_lower: BigRational,
}

/// A certified build: the profile plus everything needed to re-verify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaBuildReport {
    pub spec: FaSpec,
    /// Entries `(i, q_i)` for `1 ≤ i ≤ n`, truncated at `n`; index 0 is
    /// omitted (valuation `∞`).
    pub profile: CoefficientProfile,
    pub entries: Vec<FaEntry>,
    /// `s_i = q_i - q_{i+1}` for `1 ≤ i ≤ n-1`; strictly decreasing.
    pub slopes: Vec<BigRational>,
    /// Largest `h` such that the transform value at every breakpoint
    /// `s_i`, `i ≤ h`, is certified exact at this truncation.
    pub certified_transform_horizon: u64,
    /// Analytic certificate that `s_i·(i+1) → 0`: from the slope
    /// estimate, `s_i·(i+1) ≤ (i+1)(i^(-a) + 2e^(-i))`, which vanishes
    /// for every `a > 1`. Justifies applying the node identity at every
    /// certified breakpoint despite the truncation.
    pub slope_index_product_vanishes: bool,
    /// Analytic value of `v_0`: the built values certify
    /// `q_i < (a-1)^(-1)(i-1)^(1-a) + e^(-i) → 0`, and all are positive,
    /// so the infimum over the full family is exactly 0.
    pub value_at_zero: BigRational,
    /// The separating threshold `(a-1)/a`.
    pub threshold: BigRational,
}

impl FaBuildReport {
    /// `q_i` for a built index.
    pub fn value(&self, i: u64) -> Result<&BigRational> {
        if i == 0 || i > self.spec.n {
            return Err(Error::InvalidArgument(format!(
                "index {i} outside the built range 1..={}",
                self.spec.n
            )));
        }
        let (idx, v) = &self.profile.entries()[(i - 1) as usize];
        debug_assert_eq!(*idx, i);
        Ok(v.expect_finite())
    }

    /// `s_i` for `1 ≤ i ≤ n-1`.
    pub fn slope(&self, i: u64) -> Result<&BigRational> {
        if i == 0 || i >= self.spec.n {
            return Err(Error::InvalidArgument(format!(
                "slope index {i} outside 1..={}",
                self.spec.n - 1
            )));
        }
        Ok(&self.slopes[(i - 1) as usize])
    }

    /// The polygon of the built profile (nodes at every built index).
    pub fn polygon(&self) -> ConvexProfile {
        newton_polygon(&self.profile).expect("built profile is nonzero")
    }

    /// Certifies `|s_i - i^(-a)| < 2·e^(-i)` through the stored lower
    /// bound on `e^(-i)` (so a `true` answer implies the true estimate).
    pub fn check_slope_estimate(&self, i: u64) -> Result<bool> {
        let s = self.slope(i)?;
        let entry = &self.entries[(i - 1) as usize];
        let bits = tolerance_bits(&entry.tolerance) + 32;
        let power = reciprocal_power(i, &self.spec.a, bits)?.interval();
        let deviation = (s - power.lo()).abs().max((s - power.hi()).abs());
        Ok(deviation < BigRational::from_integer(2.into()) * &entry.exp_lower)
    }

    /// Certifies the two-sided value estimate
    /// `(a-1)^(-1) i^(1-a) - e^(-i) < q_i < (a-1)^(-1) (i-1)^(1-a) + e^(-i)`
    /// for `i ≥ 2`, using the sound side of each enclosure.
    pub fn check_value_sandwich(&self, i: u64) -> Result<bool> {
        if i < 2 {
            return Err(Error::InvalidArgument(
                "the value sandwich starts at i = 2".into(),
            ));
        }
        let q = self.value(i)?;
        let entry = &self.entries[(i - 1) as usize];
        let a = &self.spec.a;
        let scale = (a - BigRational::one()).recip();
        let bits = tolerance_bits(&entry.tolerance) + 32;
        // i^(1-a) = i · i^(-a); same for i-1
        let left = reciprocal_power(i, a, bits)?
            .interval()
            .scale(&(rat_u64(i) * &scale));
        let right = reciprocal_power(i - 1, a, bits)?
            .interval()
            .scale(&(rat_u64(i - 1) * &scale));
        let lower_ok = &(left.hi() - &entry.exp_lower) < q;
        let upper_ok = q < &(right.lo() + &entry.exp_lower);
        Ok(lower_ok && upper_ok)
    }

    /// Re-verifies the rounding certificate of index `i` from scratch at
    /// `extra_bits` beyond the build's working precision.
    pub fn recheck_rounding(&self, i: u64, extra_bits: u64) -> Result<bool> {
        let q = self.value(i)?;
        let entry = &self.entries[(i - 1) as usize];
        let bits = tolerance_bits(&entry.tolerance) + self.spec.precision as u64 + extra_bits;
        let target = dyadic_rational(BigInt::one(), bits);
        let enclosure = tail_sum_enclosure(&self.spec.a, i, &target)?;
        let err = (q - enclosure.lo()).max(enclosure.hi() - q);
        Ok(err < entry.tolerance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Bits needed to resolve a tolerance: `2^-(result)` is below it.
fn tolerance_bits(eps: &BigRational) -> u64 {
    (2 - approx_log2(eps)).max(4) as u64
}

/// The spec-level reference enclosure of `F_a(i)`: partial sums plus the
/// integral tail bracket, widened adaptively. Reaches only widths
/// polynomial in the summed terms; deeper requests report the achieved
/// width.
pub fn reference_fa(a: &BigRational, i: u64, precision_bits: u64) -> Result<RatInterval> {
    if *a <= BigRational::one() || i == 0 {
        return Err(Error::InvalidArgument(
            "reference enclosure requires a > 1 and i >= 1".into(),
        ));
    }
    tail_reference(a, i, precision_bits, 1 << 21)
}

/// Builds the family member for `spec`, certifying every tolerance.
///
/// Deterministic: `(a, n, precision)` fully determine the output.
pub fn build_fa(spec: &FaSpec) -> Result<FaBuildReport> {
    let n = spec.n;
    let a = &spec.a;
    let guard = spec.precision as u64;

    // certified e^(-i) bounds, i = 1..=n+1
    let exp = exp_neg_bounds(n + 1, 128);

    // tolerances ε_i = min(lower(e^(-i)), lower(gap_i)/4)
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut eps: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    for i in 1..=n + 1 {
        let bits = cap_bits(a, i);
        let cur = reciprocal_power(i, a, bits)?.interval();
        let next = reciprocal_power(i + 1, a, bits)?.interval();
        let cap = (cur.lo() - next.hi()) * &quarter;
        if !cap.is_positive() {
            return Err(Error::PrecisionInsufficient { index: i });
        }
        let proxy = &exp.lower[(i - 1) as usize];
        eps.push(cap.min(proxy.clone()));
    }

    // seed: Σ_{j≥n+1} j^(-a) to the tightest tolerance in play
    let seed_work = tolerance_bits(&eps[n as usize]) + guard;
    let seed_target = dyadic_rational(BigInt::one(), seed_work);
    let mut acc = tail_sum_enclosure(a, n + 1, &seed_target)?;

    // descend i = n..1, certifying each rounding
    let mut values: Vec<BigRational> = vec![BigRational::zero(); n as usize];
    let mut entries: Vec<FaEntry> = Vec::with_capacity(n as usize);
    for i in (1..=n).rev() {
        let eps_i = &eps[(i - 1) as usize];
        let work = tolerance_bits(eps_i) + guard;
        let term = reciprocal_power(i, a, work + 2)?.interval();
        acc = acc.add(&term).round_outward(work as i64);
        let grid = tolerance_bits(eps_i) + 24;
        let q = floor_dyadic(&acc.midpoint(), grid as i64);
        let err = (&q - acc.lo()).max(acc.hi() - &q);
        if err >= *eps_i {
            return Err(Error::PrecisionInsufficient { index: i });
        }
        entries.push(FaEntry {
            index: i,
            error_bound: err,
            tolerance: eps_i.clone(),
            exp_lower: exp.lower[(i - 1) as usize].clone(),
        });
        values[(i - 1) as usize] = q;
    }
    entries.reverse();

    // slopes, with the convexity the tolerances guarantee re-verified
    let mut slopes: Vec<BigRational> = Vec::with_capacity(n as usize - 1);
    for i in 1..n {
        let s = &values[(i - 1) as usize] - &values[i as usize];
        if !s.is_positive() {
            return Err(Error::PrecisionInsufficient { index: i });
        }
        slopes.push(s);
    }
    for (i, pair) in slopes.windows(2).enumerate() {
        if pair[0] <= pair[1] {
            return Err(Error::PrecisionInsufficient {
                index: i as u64 + 1,
            });
        }
    }

    // transform certificates: L(s_i) = i·s_i + q_i is exact iff
    // q_i ≤ (n+1-i)·s_i
    let mut horizon = 0u64;
    for i in 1..n {
        let lhs = &values[(i - 1) as usize];
        let rhs = rat_u64(n + 1 - i) * &slopes[(i - 1) as usize];
        if *lhs <= rhs {
            horizon = i;
        } else {
            break;
        }
    }

    let profile_entries: Vec<(u64, ExtRat)> = values
        .into_iter()
        .enumerate()
        .map(|(k, q)| (k as u64 + 1, ExtRat::Finite(q)))
        .collect();
    let profile = CoefficientProfile::new(profile_entries, Tail::Truncated(n))?;

    let threshold = (a - BigRational::one()) / a;
    Ok(FaBuildReport {
        spec: spec.clone(),
        profile,
        entries,
        slopes,
        certified_transform_horizon: horizon,
        slope_index_product_vanishes: true,
        value_at_zero: BigRational::zero(),
        threshold,
    })
}

/// Enclosure bits that resolve the consecutive-gap cap at index `i`.
fn cap_bits(a: &BigRational, i: u64) -> u64 {
    let a_ceil = (a.numer().div_ceil(a.denom()))
        .to_u64()
        .unwrap_or(8)
        .min(64);
    let width = 64 - (i + 1).leading_zeros() as u64;
    (a_ceil + 1) * (width + 1) + 24
}

/// The node identity `L(s_i) = i·s_i + q_i` checked exactly through the
/// polygon route against the raw build data; requires the transform value
/// at `s_i` to be certified exact at this truncation (`i` within the
/// certified horizon, i.e. `n ≳ a/(a-1)·i`; see
/// [`FaBuildReport::certified_transform_horizon`]).
pub fn identity_iii_check(
    report: &FaBuildReport,
    i: u64,
) -> Result<(BigRational, BigRational, bool)> {
    identity_iii_check_with(report, &report.polygon(), i)
}

/// Same as [`identity_iii_check`] with a precomputed polygon, for batch
/// verification.
pub fn identity_iii_check_with(
    report: &FaBuildReport,
    polygon: &ConvexProfile,
    i: u64,
) -> Result<(BigRational, BigRational, bool)> {
    let s = report.slope(i)?;
    let lhs = polygon.legendre_eval(s)?;
    if !lhs.exact {
        return Err(Error::IncreaseTruncation { index: i });
    }
    let rhs = rat_u64(i) * s + report.value(i)?;
    let holds = lhs.value == rhs;
    Ok((lhs.value, rhs, holds))
}

/// The threshold verdict plus empirical brackets.
#[derive(Debug, Clone)]
pub struct Prop4Report {
    pub a: BigRational,
    pub nu: BigRational,
    /// `(a-1)/a`, the exponent separating bounded from divergent ratios.
    pub threshold: BigRational,
    /// `a·ν + 1 - a`; its sign decides the verdict.
    pub exponent: BigRational,
    pub verdict: StratumVerdict,
    /// Bracket sequences from a fresh build, for cross-checking the
    /// analytic verdict against finite data.
    pub empirical: RatioSequence,
    /// Truncation used for the cross-check build.
    pub build_n: u64,
}

/// Classifies the family member at `a` against the stratum at `ν`.
///
/// The build certifies, at every index,
/// `|s_i - i^(-a)| < 2e^(-i)` and
/// `(a-1)^(-1) i^(1-a) - e^(-i) < q_i < (a-1)^(-1)(i-1)^(1-a) + e^(-i)`,
/// and the node identity gives `L(s_i) = i·s_i + q_i` at certified
/// breakpoints. Those estimates bracket the growth ratio both ways:
///
/// - lower route, sampling at `t = s_i`:
///   `L(s_i) ≥ (a/(a-1))·i^(1-a) - (2i+1)e^(-i)` and
///   `s_i^ν ≤ i^(-aν)·(1 + 2 i^a e^(-i))^ν`, so
///   `limsup L(t)/t^ν ≥ (a/(a-1))·limsup i^(aν+1-a)`;
/// - upper route, using `L(t) ≤ L(s_i)` and `t ≥ s_{i+1}` on each
///   breakpoint interval:
///   `L(s_i) ≤ i^(1-a) + (a-1)^(-1)(i-1)^(1-a) + (2i+1)e^(-i)` and
///   `s_{i+1}^ν ≥ (i+1)^(-aν)·(1 - 2(i+1)^a e^(-(i+1)))^ν`, so
///   `limsup L(t)/t^ν ≤ limsup (i^(1-a) + (a-1)^(-1)(i-1)^(1-a))·(i+1)^(aν)`.
///
/// Both routes reduce to the sign of `aν + 1 - a`: positive means the
/// lower bound diverges (member), negative means the upper bound decays
/// to 0 (non-member). At exactly 0 the upper bound stays finite with
/// value `a/(a-1)`; the verdict reports the boundary case without
/// assigning it.
pub fn prop4_verdict(a: &BigRational, nu: &BigRational, horizon: u64) -> Result<Prop4Report> {
    if *a <= BigRational::one() {
        return Err(Error::InvalidArgument("requires a > 1".into()));
    }
    if !nu.is_positive() || *nu >= BigRational::one() {
        return Err(Error::InvalidArgument(
            "stratum exponent must lie in (0, 1)".into(),
        ));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let one = BigRational::one();
    let threshold = (a - &one) / a;
    let exponent = a * nu + &one - a;

    // truncation covering certified transform values up to horizon+1:
    // the certificate needs n+1-i ≳ (a-1)^(-1)·i, padded multiplicatively
    let ratio = a / (a - &one);
    let sized = &ratio
        * rat_u64(horizon + 2)
        * BigRational::new(BigInt::from(17), BigInt::from(16));
    let build_n = sized
        .ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("horizon too large".into()))?
        + 16;
    let spec = FaSpec::new(a.clone(), build_n, 64)?;
    let report = build_fa(&spec)?;
    if report.certified_transform_horizon < horizon {
        return Err(Error::Inconclusive(format!(
            "build certified only {} of {} requested breakpoints",
            report.certified_transform_horizon, horizon
        )));
    }
    let polygon = report.polygon();
    let stratum = StratumIndex::new(nu.clone())?;
    let empirical = ratio_sequence(&polygon, &stratum, horizon)?;

    let kind = match exponent.cmp(&BigRational::zero()) {
        std::cmp::Ordering::Greater => VerdictKind::Member {
            criterion: format!(
                "exponent a*nu+1-a = {} > 0: the lower bracket grows like \
                 (a/(a-1))*i^(a*nu+1-a)",
                format_rational(&exponent)
            ),
        },
        std::cmp::Ordering::Less => VerdictKind::NonMember {
            criterion: format!(
                "exponent a*nu+1-a = {} < 0: the upper bracket decays like \
                 (a/(a-1))*i^(a*nu+1-a)",
                format_rational(&exponent)
            ),
        },
        std::cmp::Ordering::Equal => VerdictKind::Boundary {
            threshold: threshold.clone(),
        },
    };
    Ok(Prop4Report {
        a: a.clone(),
        nu: nu.clone(),
        threshold,
        exponent,
        verdict: StratumVerdict {
            kind,
            provenance: Provenance::Analytic,
        },
        empirical,
        build_n,
    })
}

// Report wire format (write-only: reports are build artifacts).
impl Serialize for FaBuildReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct EntryWire {
            index: u64,
            error_bound: String,
            tolerance: String,
            exp_lower: String,
        }
        #[derive(Serialize)]
        struct Wire<'a> {
            spec: &'a FaSpec,
            profile: &'a CoefficientProfile,
            entries: Vec<EntryWire>,
            slopes: Vec<String>,
            certified_transform_horizon: u64,
            slope_index_product_vanishes: bool,
            value_at_zero: String,
            threshold: String,
        }
        Wire {
            spec: &self.spec,
            profile: &self.profile,
            entries: self
                .entries
                .iter()
                .map(|e| EntryWire {
                    index: e.index,
                    error_bound: format_rational(&e.error_bound),
                    tolerance: format_rational(&e.tolerance),
                    exp_lower: format_rational(&e.exp_lower),
                })
                .collect(),
            slopes: self.slopes.iter().map(format_rational).collect(),
            certified_transform_horizon: self.certified_transform_horizon,
            slope_index_product_vanishes: self.slope_index_product_vanishes,
            value_at_zero: format_rational(&self.value_at_zero),
            threshold: format_rational(&self.threshold),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrat::rat;
    use crate::series::pi_interval;

    #[test]
    fn reference_encloses_basel_value() {
        let enc = reference_fa(&rat(2, 1), 1, 24).unwrap();
        let pi = pi_interval(64);
        let pisq6 = pi.mul(&pi).scale(&rat(1, 6));
        assert!(enc.intersects(&pisq6));
    }

    #[test]
    fn reference_telescopes() {
        let a = rat(3, 2);
        let f5 = reference_fa(&a, 5, 24).unwrap();
        let f6 = reference_fa(&a, 6, 24).unwrap();
        let term = reciprocal_power(5, &a, 64).unwrap().interval();
        assert!(f5.sub(&f6).intersects(&term));
    }

    #[test]
    fn reference_respects_integral_sandwich_at_large_index() {
        // enclosure of F_2(50) within [1/50 - d, 1/49 + d]
        let enc = reference_fa(&rat(2, 1), 50, 20).unwrap();
        let d = rat(1, 1 << 18);
        assert!(enc.lo() > &(rat(1, 50) - &d));
        assert!(enc.hi() < &(rat(1, 49) + &d));
    }

    fn build(a: (i64, u64), n: u64) -> FaBuildReport {
        build_fa(&FaSpec::new(rat(a.0, a.1), n, 64).unwrap()).unwrap()
    }

    #[test]
    fn small_build_certifies_all_indices() {
        let report = build((2, 1), 50);
        assert_eq!(report.entries.len(), 50);
        for e in &report.entries {
            assert!(e.error_bound < e.tolerance, "index {}", e.index);
        }
        for i in 1..50 {
            assert!(report.check_slope_estimate(i).unwrap(), "slope at {i}");
        }
        for i in 2..=50 {
            assert!(report.check_value_sandwich(i).unwrap(), "sandwich at {i}");
        }
    }

    #[test]
    fn polygon_has_nodes_at_every_built_index() {
        for a in [(2i64, 1u64), (3, 1), (3, 2)] {
            let report = build(a, 50);
            let polygon = report.polygon();
            let nodes: Vec<u64> = polygon.nodes().iter().map(|(x, _)| *x).collect();
            assert_eq!(nodes, (1..=50).collect::<Vec<_>>(), "a = {a:?}");
        }
    }

    #[test]
    fn first_values_track_the_tail_sums() {
        // F_2(1) = π²/6 ≈ 1.6449, F_2(2) ≈ 0.6449
        let report = build((2, 1), 30);
        let q1 = report.value(1).unwrap();
        assert!(q1 > &rat(16449, 10000) && q1 < &rat(16450, 10000));
        let q2 = report.value(2).unwrap();
        assert!(q2 > &rat(6449, 10000) && q2 < &rat(6450, 10000));
    }

    #[test]
    fn certified_horizon_matches_the_certificate_rule() {
        let report = build((2, 1), 50);
        let h = report.certified_transform_horizon;
        // for a = 2 the certificate q_i <= (n+1-i)·s_i holds up to ~n/2
        assert!(h >= 20 && h < 30, "h = {h}");
        let polygon = report.polygon();
        assert!(polygon
            .legendre_eval(report.slope(h).unwrap())
            .unwrap()
            .exact);
        assert!(!polygon
            .legendre_eval(report.slope(h + 1).unwrap())
            .unwrap()
            .exact);
    }

    #[test]
    fn node_identity_exact_at_certified_indices() {
        let report = build((2, 1), 50);
        let polygon = report.polygon();
        for i in 1..=report.certified_transform_horizon {
            let (lhs, rhs, holds) = identity_iii_check_with(&report, &polygon, i).unwrap();
            assert!(holds, "i = {i}: {lhs} vs {rhs}");
        }
        // degenerate first breakpoint: L(s_1) = s_1 + q_1
        let (lhs, _, _) = identity_iii_check(&report, 1).unwrap();
        assert_eq!(
            lhs,
            report.slope(1).unwrap() + report.value(1).unwrap()
        );
        // beyond the horizon the check refuses
        let beyond = report.certified_transform_horizon + 1;
        assert!(matches!(
            identity_iii_check(&report, beyond),
            Err(Error::IncreaseTruncation { .. })
        ));
    }

    #[test]
    fn node_identity_for_fractional_exponent() {
        let report = build((3, 2), 100);
        assert!(report.certified_transform_horizon >= 30);
        let polygon = report.polygon();
        let (_, _, holds) = identity_iii_check_with(&report, &polygon, 5).unwrap();
        assert!(holds);
        let (_, _, holds) = identity_iii_check_with(&report, &polygon, 30).unwrap();
        assert!(holds);
    }

    #[test]
    fn builds_are_deterministic() {
        let spec = FaSpec::new(rat(2, 1), 40, 64).unwrap();
        let r1 = build_fa(&spec).unwrap();
        let r2 = build_fa(&spec).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.to_json(), r2.to_json());
    }

    #[test]
    fn rounding_recheck_at_higher_precision() {
        let report = build((3, 2), 20);
        for i in [1u64, 7, 20] {
            assert!(report.recheck_rounding(i, 64).unwrap(), "i = {i}");
        }
    }

    #[test]
    fn threshold_verdicts() {
        // a = 2, ν = 3/4: exponent 1/2 > 0, member
        let r = prop4_verdict(&rat(2, 1), &rat(3, 4), 20).unwrap();
        assert_eq!(r.exponent, rat(1, 2));
        assert!(matches!(r.verdict.kind, VerdictKind::Member { .. }));
        assert_eq!(r.verdict.provenance, Provenance::Analytic);
        assert_eq!(r.empirical.points.len(), 20);

        // a = 2, ν = 1/4: exponent -1/2 < 0, non-member
        let r = prop4_verdict(&rat(2, 1), &rat(1, 4), 20).unwrap();
        assert_eq!(r.exponent, rat(-1, 2));
        assert!(matches!(r.verdict.kind, VerdictKind::NonMember { .. }));

        // a = 3/2, ν = 1/3: exponent 0, boundary
        let r = prop4_verdict(&rat(3, 2), &rat(1, 3), 10).unwrap();
        assert!(r.exponent.is_zero());
        match &r.verdict.kind {
            VerdictKind::Boundary { threshold } => assert_eq!(*threshold, rat(1, 3)),
            other => panic!("expected boundary, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FaSpec::new(rat(1, 1), 10, 64).is_err());
        assert!(FaSpec::new(rat(2, 1), 1, 64).is_err());
        assert!(FaSpec::new(rat(2, 1), 10, 8).is_err());
        assert!(FaSpec::new(rat(5, 4), 10, 64).is_ok());
    }
}
