//! Growth strata: grouping elements by how fast `L(t)/t^λ` diverges as
//! `t → 0⁺`.
//!
//! For `λ ∈ [0,1]` the stratum at `λ` collects the elements whose
//! transform satisfies `limsup_{t→0⁺} L(t)/t^λ = ∞`; the strata grow with
//! `λ`, from the elements with `v_0 > 0` at `λ = 0` to the elements with
//! all coefficient valuations positive at `λ = 1`.
//!
//! A limsup is not decidable from finite data. Verdicts therefore carry a
//! provenance: `Analytic` ones are exact decisions (complete finite data,
//! or the certified threshold bounds of the power-tail family), while
//! `Empirical` ones record bracketed evidence up to a horizon and never
//! claim membership.
//!
//! Ratio sampling happens at the polygon's breakpoints `t = s_i`, where
//! the transform is largest on `[s_{i+1}, s_i]`; reporting both
//! `L(s_i)/s_i^λ` (lower bracket) and `L(s_i)/s_{i+1}^λ` (upper bracket)
//! sandwiches the supremum of the ratio over that interval. The two
//! brackets are never collapsed.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrat::format_rational;
use crate::interval::{rational_pow, rational_pow_interval, trim_down_sig, trim_up_sig, RootEnclosure};
use crate::legendre::transform_breakpoint_values;
use crate::polygon::{ConvexProfile, PolygonTail};

/// Default enclosure precision for irrational ratio values.
const RATIO_BITS: u64 = 128;
/// Adaptive refinement cap for undecidable comparisons.
const RATIO_BITS_CAP: u64 = 256;
/// Significant bits kept in reported ratio bounds.
const RATIO_SIG: u64 = 192;

/// A stratum exponent `λ ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumIndex(BigRational);

impl StratumIndex {
    pub fn new(lambda: BigRational) -> Result<Self> {
        if lambda.is_negative() || lambda > BigRational::one() {
            return Err(Error::InvalidArgument(format!(
                "stratum exponent must lie in [0, 1], got {}",
                format_rational(&lambda)
            )));
        }
        Ok(StratumIndex(lambda))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    fn numer_u32(&self) -> Result<u32> {
        u32::try_from(self.0.numer().magnitude().clone())
            .map_err(|_| Error::InvalidArgument("stratum exponent numerator too large".into()))
    }

    fn denom_u32(&self) -> Result<u32> {
        u32::try_from(self.0.denom().magnitude().clone())
            .map_err(|_| Error::InvalidArgument("stratum exponent denominator too large".into()))
    }
}

/// A certified value for a ratio `L/t^λ`: exact when `t^λ` is rational,
/// otherwise a two-sided enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioBound {
    Exact(BigRational),
    Enclosure {
        lo: BigRational,
        hi: BigRational,
        bits: u64,
    },
}

impl RatioBound {
    /// Certified lower bound on the ratio.
    pub fn lower(&self) -> &BigRational {
        match self {
            RatioBound::Exact(v) => v,
            RatioBound::Enclosure { lo, .. } => lo,
        }
    }

    /// Certified upper bound on the ratio.
    pub fn upper(&self) -> &BigRational {
        match self {
            RatioBound::Exact(v) => v,
            RatioBound::Enclosure { hi, .. } => hi,
        }
    }
}

/// One sampled breakpoint with its bracket pair.
#[derive(Debug, Clone)]
pub struct RatioPoint {
    /// 1-based breakpoint index `i` (the polygon's i-th slope).
    pub index: u64,
    /// `t = s_i`.
    pub t: BigRational,
    /// `L(s_i)`, certified exact.
    pub l_value: BigRational,
    /// Lower bracket `L(s_i)/s_i^λ`.
    pub lower: RatioBound,
    /// Upper bracket `L(s_i)/s_{i+1}^λ`; absent at the final breakpoint
    /// (the next slope is 0 or unknown).
    pub upper: Option<RatioBound>,
}

/// The `(I)/(II)` sandwich data for one polygon and exponent.
#[derive(Debug, Clone)]
pub struct RatioSequence {
    pub lambda: StratumIndex,
    pub horizon: u64,
    pub points: Vec<RatioPoint>,
}

/// What a stratum check concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictKind {
    /// Certified membership in the stratum.
    Member { criterion: String },
    /// Certified non-membership.
    NonMember { criterion: String },
    /// Evidence of divergence up to a horizon: the certified lower bound
    /// on the largest sampled ratio.
    DivergenceWitnessed { horizon: u64, attained: BigRational },
    /// Ratios up to the horizon are certified below the supremum bound.
    BoundedUpTo { horizon: u64, supremum: BigRational },
    /// The threshold exponent of a power-tail family, which the analytic
    /// bounds do not assign to either side.
    Boundary { threshold: BigRational },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Exact decision: complete finite data or certified family bounds.
    Analytic,
    /// Finite-horizon evidence; never claims membership.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumVerdict {
    pub kind: VerdictKind,
    pub provenance: Provenance,
}

/// Computes the bracket pair at up to `horizon` breakpoints.
///
/// Requires `horizon` breakpoints with certified-exact transform values;
/// otherwise the data cannot support the sequence and the call reports
/// how far it got.
pub fn ratio_sequence(
    p: &ConvexProfile,
    lambda: &StratumIndex,
    horizon: u64,
) -> Result<RatioSequence> {
    let bvs = transform_breakpoint_values(p);
    let exact_prefix = bvs.iter().take_while(|bv| bv.exact).count() as u64;
    if exact_prefix < horizon {
        return Err(Error::Inconclusive(format!(
            "insufficient exact breakpoints: need {horizon}, have {exact_prefix}"
        )));
    }
    let mut points = Vec::with_capacity(horizon as usize);
    for j in 0..horizon as usize {
        let bv = &bvs[j];
        let lower = ratio_bound(&bv.value, &bv.t, lambda)?;
        let upper = match bvs.get(j + 1) {
            Some(next) => Some(ratio_bound(&bv.value, &next.t, lambda)?),
            None => None,
        };
        points.push(RatioPoint {
            index: bv.index,
            t: bv.t.clone(),
            l_value: bv.value.clone(),
            lower,
            upper,
        });
    }
    Ok(RatioSequence {
        lambda: lambda.clone(),
        horizon,
        points,
    })
}

/// `l / t^λ` as an exact value or certified enclosure.
fn ratio_bound(l: &BigRational, t: &BigRational, lambda: &StratumIndex) -> Result<RatioBound> {
    if lambda.0.is_zero() {
        return Ok(RatioBound::Exact(l.clone()));
    }
    if !t.is_positive() {
        return Err(Error::InvalidArgument(
            "ratio denominators require t > 0".into(),
        ));
    }
    match rational_pow_interval(t, &lambda.0, RATIO_BITS)? {
        RootEnclosure::Exact(denom) => Ok(RatioBound::Exact(l / denom)),
        RootEnclosure::Enclosure(i) => Ok(RatioBound::Enclosure {
            lo: trim_down_sig(&(l / i.hi()), RATIO_SIG),
            hi: trim_up_sig(&(l / i.lo()), RATIO_SIG),
            bits: RATIO_BITS,
        }),
    }
}

/// Exact comparison `a/t^λ ≤ b/u^λ` by cross-powering: with `λ = p/q`
/// and positive operands this is `a^q·u^p ≤ b^q·t^p`.
pub fn exact_ratio_le(
    a: &BigRational,
    t: &BigRational,
    b: &BigRational,
    u: &BigRational,
    lambda: &StratumIndex,
) -> Result<bool> {
    if !t.is_positive() || !u.is_positive() || a.is_negative() || b.is_negative() {
        return Err(Error::InvalidArgument(
            "exact ratio comparison requires positive denominators".into(),
        ));
    }
    let p = lambda.numer_u32()?;
    let q = lambda.denom_u32()?;
    let lhs = rational_pow(a, q) * rational_pow(u, p);
    let rhs = rational_pow(b, q) * rational_pow(t, p);
    Ok(lhs <= rhs)
}

/// Decides `ratio ≤ bound` for `ratio = l/t^λ` by adaptive interval
/// refinement, falling back to the exact cross-power comparison for small
/// exponent denominators; `None` only when the refinement cap is hit and
/// the exponent is too wild to cross-power.
pub fn decide_ratio_le(
    l: &BigRational,
    t: &BigRational,
    lambda: &StratumIndex,
    bound: &BigRational,
) -> Result<Option<bool>> {
    let mut bits = RATIO_BITS;
    loop {
        match rational_pow_interval(t, &lambda.0, bits)? {
            RootEnclosure::Exact(denom) => return Ok(Some(l / denom <= *bound)),
            RootEnclosure::Enclosure(i) => {
                if l / i.lo() <= *bound {
                    return Ok(Some(true));
                }
                if l / i.hi() > *bound {
                    return Ok(Some(false));
                }
            }
        }
        if bits >= RATIO_BITS_CAP {
            break;
        }
        bits = (bits * 2).min(RATIO_BITS_CAP);
    }
    if lambda.denom_u32()? <= 8 {
        // l/t^(p/q) <= bound  ⟺  l^q <= bound^q · t^p (all positive)
        let p = lambda.numer_u32()?;
        let q = lambda.denom_u32()?;
        return Ok(Some(
            rational_pow(l, q) <= rational_pow(bound, q) * rational_pow(t, p),
        ));
    }
    Ok(None)
}

/// Membership in the top stratum (`λ = 1`): the elements whose
/// coefficient valuations are all positive.
///
/// On complete data this is decided exactly: the element is outside iff
/// some hull node has valuation 0, i.e. iff the minimal node value is 0,
/// in which case `L(t)/t` is bounded (by the last node abscissa, its
/// exact supremum); otherwise `L(t)/t ≥ v_0/t` diverges. On truncated
/// data only bracketed evidence is returned.
pub fn membership_in_m(p: &ConvexProfile) -> Result<StratumVerdict> {
    match p.tail() {
        PolygonTail::Constant => {
            let v0 = p.min_value();
            if v0.is_zero() {
                Ok(StratumVerdict {
                    kind: VerdictKind::NonMember {
                        criterion: format!(
                            "a hull node has valuation 0; L(t)/t is bounded by its exact \
                             supremum {}",
                            p.last_node().0
                        ),
                    },
                    provenance: Provenance::Analytic,
                })
            } else {
                Ok(StratumVerdict {
                    kind: VerdictKind::Member {
                        criterion: format!(
                            "v_0 = {} > 0 forces L(t)/t >= v_0/t -> inf",
                            format_rational(v0)
                        ),
                    },
                    provenance: Provenance::Analytic,
                })
            }
        }
        PolygonTail::Truncated => empirical_divergence_evidence(p, &StratumIndex(BigRational::one())),
    }
}

/// Membership in the bottom stratum (`λ = 0`): the elements with
/// `v_0 > 0`. Exact on complete data; inconclusive under truncation,
/// where `v_0` is unknown.
pub fn membership_in_p(p: &ConvexProfile) -> Result<StratumVerdict> {
    match p.tail() {
        PolygonTail::Constant => {
            let v0 = p.min_value();
            if v0.is_positive() {
                Ok(StratumVerdict {
                    kind: VerdictKind::Member {
                        criterion: format!("v_0 = {} > 0", format_rational(v0)),
                    },
                    provenance: Provenance::Analytic,
                })
            } else {
                Ok(StratumVerdict {
                    kind: VerdictKind::NonMember {
                        criterion: "v_0 = 0".into(),
                    },
                    provenance: Provenance::Analytic,
                })
            }
        }
        PolygonTail::Truncated => Ok(StratumVerdict {
            kind: VerdictKind::Inconclusive {
                reason: "v_0 unknown at finite truncation".into(),
            },
            provenance: Provenance::Empirical,
        }),
    }
}

/// Bracketed divergence evidence for a truncated polygon at exponent `λ`.
///
/// Labels the evidence `DivergenceWitnessed` when the lower-bracket
/// ratios peak at the final certified breakpoint and have at least
/// doubled over the certified range — a growth heuristic, documented as
/// such; it never claims membership.
fn empirical_divergence_evidence(
    p: &ConvexProfile,
    lambda: &StratumIndex,
) -> Result<StratumVerdict> {
    let bvs = transform_breakpoint_values(p);
    let exact_prefix = bvs.iter().take_while(|bv| bv.exact).count() as u64;
    if exact_prefix == 0 {
        return Ok(StratumVerdict {
            kind: VerdictKind::Inconclusive {
                reason: "no certified breakpoints at this truncation".into(),
            },
            provenance: Provenance::Empirical,
        });
    }
    let seq = ratio_sequence(p, lambda, exact_prefix)?;
    let lowers: Vec<&BigRational> = seq.points.iter().map(|pt| pt.lower.lower()).collect();
    let max = (*lowers.iter().max().expect("nonempty")).clone();
    let first = lowers.first().expect("nonempty");
    let last = lowers.last().expect("nonempty");
    let growing = *last == &max && **last >= *first * BigRational::from_integer(2.into());
    if growing {
        Ok(StratumVerdict {
            kind: VerdictKind::DivergenceWitnessed {
                horizon: exact_prefix,
                attained: max,
            },
            provenance: Provenance::Empirical,
        })
    } else {
        // certified upper bound over the sampled range
        let sup = seq
            .points
            .iter()
            .map(|pt| pt.lower.upper())
            .max()
            .expect("nonempty")
            .clone();
        Ok(StratumVerdict {
            kind: VerdictKind::BoundedUpTo {
                horizon: exact_prefix,
                supremum: sup,
            },
            provenance: Provenance::Empirical,
        })
    }
}

/// Paired ratio sequences at two exponents with the pointwise dominance
/// check: for `t ≤ 1` and `μ > λ`, `L/t^μ ≥ L/t^λ`.
#[derive(Debug, Clone)]
pub struct ChainWitnessReport {
    pub lambda_sequence: RatioSequence,
    pub mu_sequence: RatioSequence,
    /// Points with `t ≤ 1` at which dominance was verified exactly.
    pub dominance_points_checked: u64,
    /// Points with `t > 1`, where dominance is not asserted.
    pub dominance_points_skipped: u64,
    pub dominance_holds: bool,
}

/// Emits the paired sequences at `λ < μ` and verifies the pointwise
/// implication backing the chain inclusion: at every sampled `t ≤ 1` the
/// ratio at `μ` dominates the ratio at `λ` (decided exactly via
/// `t^μ ≤ t^λ`).
pub fn stratum_chain_witness(
    p: &ConvexProfile,
    lambda: &StratumIndex,
    mu: &StratumIndex,
    horizon: u64,
) -> Result<ChainWitnessReport> {
    if lambda.0 >= mu.0 {
        return Err(Error::InvalidArgument(
            "chain witness requires lambda < mu".into(),
        ));
    }
    let lambda_sequence = ratio_sequence(p, lambda, horizon)?;
    let mu_sequence = ratio_sequence(p, mu, horizon)?;
    let one = BigRational::one();
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut holds = true;
    for pt in &lambda_sequence.points {
        if pt.t > one {
            skipped += 1;
            continue;
        }
        checked += 1;
        // dominance ⟺ t^(μ-λ) ≤ 1: exact via integer cross-exponents
        let p_l = lambda.numer_u32()? as u64;
        let q_l = lambda.denom_u32()? as u64;
        let p_m = mu.numer_u32()? as u64;
        let q_m = mu.denom_u32()? as u64;
        // t ≤ 1 and p_m·q_l ≥ p_l·q_m together give t^(p_m q_l) ≤ t^(p_l q_m)
        if p_m * q_l < p_l * q_m {
            holds = false;
        }
    }
    Ok(ChainWitnessReport {
        lambda_sequence,
        mu_sequence,
        dominance_points_checked: checked,
        dominance_points_skipped: skipped,
        dominance_holds: holds,
    })
}

/// One sampled point of the product additivity witness.
#[derive(Debug, Clone)]
pub struct ProductWitnessPoint {
    pub t: BigRational,
    pub left: BigRational,
    pub right: BigRational,
    pub product: BigRational,
    pub additive: bool,
}

#[derive(Debug, Clone)]
pub struct ProductWitnessReport {
    pub lambda: StratumIndex,
    pub points: Vec<ProductWitnessPoint>,
    pub all_additive: bool,
}

/// Product mode of the chain witness: combines two complete polygons by
/// the min-plus product and checks transform additivity exactly at the
/// product's breakpoints. Since both ratios share the denominator `t^λ`,
/// transform additivity is exactly ratio additivity.
pub fn product_ratio_witness(
    left: &ConvexProfile,
    right: &ConvexProfile,
    lambda: &StratumIndex,
    horizon: u64,
) -> Result<ProductWitnessReport> {
    let product = left.minkowski_product(right)?;
    let bvs = transform_breakpoint_values(&product);
    let mut points = Vec::new();
    for bv in bvs.iter().take(horizon as usize) {
        let l = left.legendre_eval(&bv.t)?.value;
        let r = right.legendre_eval(&bv.t)?.value;
        let additive = &l + &r == bv.value;
        points.push(ProductWitnessPoint {
            t: bv.t.clone(),
            left: l,
            right: r,
            product: bv.value.clone(),
            additive,
        });
    }
    let all_additive = points.iter().all(|pt| pt.additive);
    Ok(ProductWitnessReport {
        lambda: lambda.clone(),
        points,
        all_additive,
    })
}

// ---------------------------------------------------------------------
// serialization (report formats for the CLI)
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RatioBoundWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<u64>,
}

impl From<&RatioBound> for RatioBoundWire {
    fn from(b: &RatioBound) -> Self {
        match b {
            RatioBound::Exact(v) => RatioBoundWire {
                exact: Some(format_rational(v)),
                lo: None,
                hi: None,
                bits: None,
            },
            RatioBound::Enclosure { lo, hi, bits } => RatioBoundWire {
                exact: None,
                lo: Some(format_rational(lo)),
                hi: Some(format_rational(hi)),
                bits: Some(*bits),
            },
        }
    }
}

impl Serialize for RatioSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PointWire {
            index: u64,
            t: String,
            l: String,
            lower: RatioBoundWire,
            #[serde(skip_serializing_if = "Option::is_none")]
            upper: Option<RatioBoundWire>,
        }
        #[derive(Serialize)]
        struct Wire {
            lambda: String,
            horizon: u64,
            points: Vec<PointWire>,
        }
        Wire {
            lambda: format_rational(self.lambda.value()),
            horizon: self.horizon,
            points: self
                .points
                .iter()
                .map(|pt| PointWire {
                    index: pt.index,
                    t: format_rational(&pt.t),
                    l: format_rational(&pt.l_value),
                    lower: (&pt.lower).into(),
                    upper: pt.upper.as_ref().map(Into::into),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl RatioSequence {
    /// `i,t,lower_lo,lower_hi,upper_lo,upper_hi` rows (decimal).
    pub fn to_csv(&self) -> String {
        let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN).to_string();
        let mut out = String::from("i,t,lower_lo,lower_hi,upper_lo,upper_hi\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                pt.index,
                f(&pt.t),
                f(pt.lower.lower()),
                f(pt.lower.upper()),
                pt.upper.as_ref().map(|u| f(u.lower())).unwrap_or_default(),
                pt.upper.as_ref().map(|u| f(u.upper())).unwrap_or_default(),
            ));
        }
        out
    }
}

impl Serialize for StratumVerdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            verdict: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            criterion: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            horizon: Option<u64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            attained: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            supremum: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            threshold: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            reason: Option<String>,
            provenance: &'static str,
        }
        let mut wire = Wire {
            verdict: "",
            criterion: None,
            horizon: None,
            attained: None,
            supremum: None,
            threshold: None,
            reason: None,
            provenance: match self.provenance {
                Provenance::Analytic => "analytic",
                Provenance::Empirical => "empirical",
            },
        };
        match &self.kind {
            VerdictKind::Member { criterion } => {
                wire.verdict = "member";
                wire.criterion = Some(criterion.clone());
            }
            VerdictKind::NonMember { criterion } => {
                wire.verdict = "non-member";
                wire.criterion = Some(criterion.clone());
            }
            VerdictKind::DivergenceWitnessed { horizon, attained } => {
                wire.verdict = "divergence-witnessed";
                wire.horizon = Some(*horizon);
                wire.attained = Some(format_rational(attained));
            }
            VerdictKind::BoundedUpTo { horizon, supremum } => {
                wire.verdict = "bounded-up-to";
                wire.horizon = Some(*horizon);
                wire.supremum = Some(format_rational(supremum));
            }
            VerdictKind::Boundary { threshold } => {
                wire.verdict = "boundary";
                wire.threshold = Some(format_rational(threshold));
            }
            VerdictKind::Inconclusive { reason } => {
                wire.verdict = "inconclusive";
                wire.reason = Some(reason.clone());
            }
        }
        wire.serialize(serializer)
    }
}
