//! Seeded property suites and the independent oracles they check
//! against. The CLI `verify` subcommand runs these; the integration test
//! suites reuse the same machinery with pinned seeds.
//!
//! The oracles are deliberately naive reference implementations that
//! share no code path with the production routines they verify: the hull
//! oracle gift-wraps in `O(n²)`, the transform oracle takes a literal
//! infimum over an integer grid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::extrat::{rat_u64, ExtRat};
use crate::fa::{build_fa, identity_iii_check_with, reference_fa, FaSpec};
use crate::interval::rational_pow;
use crate::legendre::{corollary_identity_check, inverse_legendre, legendre_full};
use crate::polygon::{newton_polygon, ConvexProfile};
use crate::profile::{CoefficientProfile, Tail};
use crate::series::tail_sum_enclosure;
use crate::strata::{
    exact_ratio_le, membership_in_m, product_ratio_witness, ratio_sequence, StratumIndex,
    VerdictKind,
};

/// Gift-wrapping construction of the decreasing convex hull: walk from
/// the first point, always taking the steepest descending chord
/// (farthest point on ties), until no strictly lower point remains.
pub fn decreasing_hull_oracle(points: &[(u64, BigRational)]) -> Vec<(u64, BigRational)> {
    assert!(!points.is_empty(), "oracle needs at least one point");
    let mut hull = vec![points[0].clone()];
    let mut cur = 0usize;
    loop {
        let (cx, cy) = points[cur].clone();
        let mut best: Option<usize> = None;
        for (j, (jx, jy)) in points.iter().enumerate().skip(cur + 1) {
            if *jy >= cy {
                continue;
            }
            best = Some(match best {
                None => j,
                Some(b) => {
                    let (bx, by) = &points[b];
                    // steeper (or equally steep but farther) wins:
                    // (jy-cy)/(jx-cx) <= (by-cy)/(bx-cx), cross-multiplied
                    let lhs = (jy - &cy) * rat_u64(bx - cx);
                    let rhs = (by - &cy) * rat_u64(jx - cx);
                    if lhs <= rhs {
                        j
                    } else {
                        b
                    }
                }
            });
        }
        match best {
            None => break,
            Some(b) => {
                hull.push(points[b].clone());
                cur = b;
            }
        }
    }
    hull
}

/// Literal transform: infimum of `polygon(x) + t·x` over integer `x` in
/// `[0, last node + 10]`.
pub fn legendre_oracle(p: &ConvexProfile, t: &BigRational) -> BigRational {
    let mut best: Option<BigRational> = None;
    for x in 0..=p.last_node().0 + 10 {
        let fx = p.eval(&rat_u64(x)).expect("in range");
        if let ExtRat::Finite(y) = fx {
            let v = y + t * rat_u64(x);
            best = Some(match best {
                None => v,
                Some(b) if v < b => v,
                Some(b) => b,
            });
        }
    }
    best.expect("polygon has finite values")
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Ctx {
    checks: u64,
    failures: Vec<String>,
}

impl Ctx {
    fn new() -> Self {
        Ctx {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond && self.failures.len() < 32 {
            self.failures.push(msg());
        }
    }

    fn into_report(self, name: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hull,
    Legendre,
    Corollary1,
    Frobenius,
    Fa,
    Strata,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Hull,
        Suite::Legendre,
        Suite::Corollary1,
        Suite::Frobenius,
        Suite::Fa,
        Suite::Strata,
    ];

    pub fn parse(name: &str) -> Result<Vec<Suite>> {
        match name {
            "all" => Ok(Self::ALL.to_vec()),
            "hull" => Ok(vec![Suite::Hull]),
            "legendre" => Ok(vec![Suite::Legendre]),
            "corollary1" => Ok(vec![Suite::Corollary1]),
            "frobenius" => Ok(vec![Suite::Frobenius]),
            "fa" => Ok(vec![Suite::Fa]),
            "strata" => Ok(vec![Suite::Strata]),
            other => Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected hull|legendre|corollary1|frobenius|fa|strata|all"
            ))),
        }
    }

    pub fn run(self, seed: u64) -> SuiteReport {
        match self {
            Suite::Hull => hull_suite(seed),
            Suite::Legendre => legendre_suite(seed),
            Suite::Corollary1 => corollary1_suite(seed),
            Suite::Frobenius => frobenius_suite(seed),
            Suite::Fa => fa_suite(seed),
            Suite::Strata => strata_suite(seed),
        }
    }
}

// ---------------------------------------------------------------------
// random generators
// ---------------------------------------------------------------------

fn rng_for(seed: u64, salt: u64) -> StdRng {
    StdRng::seed_from_u64(seed ^ (salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn rand_value(rng: &mut StdRng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(0..=48i64)),
        BigInt::from(rng.gen_range(1..=12i64)),
    )
}

fn rand_positive(rng: &mut StdRng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(1..=64i64)),
        BigInt::from(rng.gen_range(1..=16i64)),
    )
}

/// Random finite profile with up to `max_entries` entries and an
/// occasional explicit `∞`.
pub fn rand_profile(rng: &mut StdRng, max_entries: usize) -> CoefficientProfile {
    let count = rng.gen_range(1..=max_entries);
    let mut indices: Vec<u64> = Vec::with_capacity(count);
    let mut next = 0u64;
    for _ in 0..count {
        next += rng.gen_range(0..3) as u64;
        indices.push(next);
        next += 1;
    }
    let entries: Vec<(u64, ExtRat)> = indices
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let v = if k > 0 && rng.gen_range(0..8) == 0 {
                ExtRat::Infinity
            } else {
                ExtRat::Finite(rand_value(rng))
            };
            (i, v)
        })
        .collect();
    CoefficientProfile::new(entries, Tail::Finite).expect("generator invariants")
}

/// Random polygon: the hull of a random profile.
pub fn rand_polygon(rng: &mut StdRng, max_entries: usize) -> ConvexProfile {
    newton_polygon(&rand_profile(rng, max_entries)).expect("nonzero by construction")
}

// ---------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------

fn hull_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 1);
    for round in 0..240 {
        let f = rand_profile(rng, 50);
        let p = newton_polygon(&f).expect("nonzero");
        let points: Vec<(u64, BigRational)> =
            f.finite_entries().map(|(i, v)| (i, v.clone())).collect();
        let oracle = decreasing_hull_oracle(&points);
        ctx.check(p.nodes() == &oracle[..], || {
            format!("round {round}: hull disagrees with the gift-wrapping oracle")
        });
        // idempotence: hull of the node list is the polygon itself
        let again = newton_polygon(&p.to_profile()).expect("nonzero");
        ctx.check(again == p, || format!("round {round}: hull not idempotent"));
    }
    // gauss-hull compatibility: the valuation equals the node infimum
    for round in 0..40 {
        let f = rand_profile(rng, 30);
        let p = newton_polygon(&f).expect("nonzero");
        for _ in 0..100 {
            let s = rand_positive(rng);
            let direct = f.gauss_valuation(&s).expect("nonzero").value;
            let via_hull = p.legendre_eval(&s).expect("s >= 0").value;
            ctx.check(direct == via_hull, || {
                format!("round {round}: v_s(f) != node infimum at s = {s}")
            });
        }
        // monotonicity of s -> v_s
        let mut s = BigRational::zero();
        let mut prev = f.gauss_valuation(&s).unwrap().value;
        for _ in 0..8 {
            s += rand_positive(rng);
            let cur = f.gauss_valuation(&s).unwrap().value;
            ctx.check(cur >= prev, || {
                format!("round {round}: v_s decreased at s = {s}")
            });
            prev = cur;
        }
    }
    // certificate soundness under extension of truncated profiles
    for round in 0..120 {
        let base = rand_profile(rng, 12);
        let n = base.entries().last().expect("nonempty").0;
        let truncated =
            CoefficientProfile::new(base.entries().to_vec(), Tail::Truncated(n)).unwrap();
        let mut extended_entries = base.entries().to_vec();
        let extra = rng.gen_range(1..=4);
        let mut idx = n;
        for _ in 0..extra {
            idx += rng.gen_range(1..=3) as u64;
            extended_entries.push((idx, ExtRat::Finite(rand_value(rng))));
        }
        let extended = CoefficientProfile::new(extended_entries, Tail::Finite).unwrap();
        for _ in 0..12 {
            let s = rand_positive(rng);
            let before = truncated.gauss_valuation(&s).unwrap();
            let after = extended.gauss_valuation(&s).unwrap();
            if before.exact {
                ctx.check(before.value == after.value, || {
                    format!("round {round}: exact value changed under extension at s = {s}")
                });
            } else {
                ctx.check(after.value <= before.value, || {
                    format!("round {round}: inexact bound increased under extension at s = {s}")
                });
            }
        }
    }
    ctx.into_report("hull")
}

fn legendre_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 2);
    for round in 0..60 {
        let p = rand_polygon(rng, 24);
        let t_full = legendre_full(&p);
        let mut samples: Vec<BigRational> = (0..40).map(|_| rand_positive(rng)).collect();
        samples.push(BigRational::zero());
        samples.sort();
        let mut prev: Option<BigRational> = None;
        for t in &samples {
            let direct = p.legendre_eval(t).expect("t >= 0").value;
            let oracle = legendre_oracle(&p, t);
            ctx.check(direct == oracle, || {
                format!("round {round}: transform != grid infimum at t = {t}")
            });
            let described = t_full.eval(t).expect("constant tail");
            ctx.check(described == direct, || {
                format!("round {round}: full description disagrees at t = {t}")
            });
            if let Some(prev) = &prev {
                ctx.check(direct >= *prev, || {
                    format!("round {round}: transform not monotone at t = {t}")
                });
            }
            prev = Some(direct);
        }
        // midpoint concavity on sampled pairs
        for _ in 0..20 {
            let t1 = rand_positive(rng);
            let t2 = rand_positive(rng);
            let mid = (&t1 + &t2) / rat_u64(2);
            let l1 = p.legendre_eval(&t1).unwrap().value;
            let l2 = p.legendre_eval(&t2).unwrap().value;
            let lm = p.legendre_eval(&mid).unwrap().value;
            ctx.check(lm * rat_u64(2) >= l1 + l2, || {
                format!("round {round}: midpoint concavity failed at ({t1}, {t2})")
            });
        }
        // involution
        let back = inverse_legendre(&t_full).expect("floor 0");
        ctx.check(back == p, || format!("round {round}: involution failed"));
    }
    // product duality and sum bound
    for round in 0..60 {
        let p = rand_polygon(rng, 16);
        let q = rand_polygon(rng, 16);
        let prod = p.minkowski_product(&q).expect("constant tails");
        let bound = p.sum_lower_bound(&q).expect("constant tails");
        for _ in 0..25 {
            let t = rand_positive(rng);
            let lp = p.legendre_eval(&t).unwrap().value;
            let lq = q.legendre_eval(&t).unwrap().value;
            let lprod = prod.legendre_eval(&t).unwrap().value;
            let lbound = bound.legendre_eval(&t).unwrap().value;
            ctx.check(lprod == &lp + &lq, || {
                format!("round {round}: product transform not additive at t = {t}")
            });
            ctx.check(lbound == lp.min(lq), || {
                format!("round {round}: min bound transform wrong at t = {t}")
            });
        }
    }
    ctx.into_report("legendre")
}

fn corollary1_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 3);
    for round in 0..200 {
        let p = rand_polygon(rng, 20);
        for i in 1..=p.nodes().len() {
            let (lhs, rhs, holds) = corollary_identity_check(&p, i).expect("constant tail");
            ctx.check(holds, || {
                format!("round {round}: node {i} identity failed: {lhs} vs {rhs}")
            });
        }
    }
    ctx.into_report("corollary1")
}

fn frobenius_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 4);
    for round in 0..100 {
        let f = rand_profile(rng, 25);
        for p in [2u32, 3, 5] {
            let pulled = f.frobenius_pullback(p).expect("p >= 2");
            let p_rat = rat_u64(p as u64);
            for _ in 0..50 {
                let t = rand_positive(rng);
                let lhs = pulled.gauss_valuation(&t).unwrap().value;
                let rhs = f.gauss_valuation(&(&p_rat * &t)).unwrap().value / &p_rat;
                ctx.check(lhs == rhs, || {
                    format!("round {round}: rescaling law failed at p = {p}, t = {t}")
                });
            }
            // polygon-level: the pulled-back hull is the value-scaled hull
            let scaled_nodes: Vec<(u64, BigRational)> = newton_polygon(&f)
                .unwrap()
                .nodes()
                .iter()
                .map(|(x, y)| (*x, y / &p_rat))
                .collect();
            let direct = newton_polygon(&pulled).unwrap();
            ctx.check(direct.nodes() == &scaled_nodes[..], || {
                format!("round {round}: pulled-back polygon mismatch at p = {p}")
            });
        }
    }
    ctx.into_report("frobenius")
}

fn fa_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 5);
    let cases = [
        (BigRational::new(2.into(), 1.into()), 60u64),
        (BigRational::new(3.into(), 2.into()), 60),
        (BigRational::new(3.into(), 1.into()), 48),
    ];
    for (a, n) in &cases {
        let spec = FaSpec::new(a.clone(), *n, 64).expect("valid spec");
        let report = match build_fa(&spec) {
            Ok(r) => r,
            Err(e) => {
                ctx.check(false, || format!("build failed for a = {a}: {e}"));
                continue;
            }
        };
        for e in &report.entries {
            ctx.check(e.error_bound < e.tolerance, || {
                format!("a = {a}: tolerance violated at index {}", e.index)
            });
        }
        for i in 1..*n {
            ctx.check(report.check_slope_estimate(i).unwrap_or(false), || {
                format!("a = {a}: slope estimate failed at {i}")
            });
        }
        for i in 2..=*n {
            ctx.check(report.check_value_sandwich(i).unwrap_or(false), || {
                format!("a = {a}: value sandwich failed at {i}")
            });
        }
        let polygon = report.polygon();
        let node_xs: Vec<u64> = polygon.nodes().iter().map(|(x, _)| *x).collect();
        ctx.check(node_xs == (1..=*n).collect::<Vec<_>>(), || {
            format!("a = {a}: polygon nodes are not all built indices")
        });
        for i in 1..=report.certified_transform_horizon {
            let ok = identity_iii_check_with(&report, &polygon, i)
                .map(|(_, _, holds)| holds)
                .unwrap_or(false);
            ctx.check(ok, || format!("a = {a}: node identity failed at {i}"));
        }
        // spot rounding rechecks at higher precision
        for _ in 0..4 {
            let i = rng.gen_range(1..=*n);
            ctx.check(report.recheck_rounding(i, 96).unwrap_or(false), || {
                format!("a = {a}: recheck failed at index {i}")
            });
        }
        // determinism
        let again = build_fa(&spec).expect("deterministic rebuild");
        ctx.check(again == report, || format!("a = {a}: rebuild differs"));
    }
    // the two enclosure engines agree where both reach
    for (a, i) in [
        (BigRational::new(2.into(), 1.into()), 5u64),
        (BigRational::new(3.into(), 2.into()), 7),
        (BigRational::new(3.into(), 1.into()), 3),
    ] {
        let reference = reference_fa(&a, i, 30).expect("shallow target");
        let target = BigRational::new(BigInt::one(), BigInt::one() << 60usize);
        let production = tail_sum_enclosure(&a, i, &target).expect("deep target");
        ctx.check(reference.intersects(&production), || {
            format!("engines disagree for a = {a}, i = {i}")
        });
        // telescoping of the reference enclosure
        let next = reference_fa(&a, i + 1, 30).expect("shallow target");
        let term = crate::interval::reciprocal_power(i, &a, 64)
            .expect("valid")
            .interval();
        ctx.check(reference.sub(&next).intersects(&term), || {
            format!("telescoping failed for a = {a}, i = {i}")
        });
    }
    // empirical/analytic agreement at a moderate horizon
    let spec = FaSpec::new(BigRational::new(2.into(), 1.into()), 450, 64).unwrap();
    let report = build_fa(&spec).expect("moderate build");
    let polygon = report.polygon();
    let horizon = report.certified_transform_horizon.min(200);
    let grow = ratio_sequence(&polygon, &StratumIndex::new(BigRational::new(3.into(), 4.into())).unwrap(), horizon)
        .expect("certified horizon");
    let ten = BigRational::from_integer(10.into());
    let crossed = grow.points.iter().any(|pt| pt.lower.lower() > &ten);
    ctx.check(crossed, || {
        "a = 2: lower bracket at 3/4 never exceeded 10".into()
    });
    let tail_rising = grow
        .points
        .windows(2)
        .skip(grow.points.len().saturating_sub(40))
        .all(|w| w[1].lower.lower() > w[0].lower.lower());
    ctx.check(tail_rising, || {
        "a = 2: lower bracket at 3/4 not eventually increasing".into()
    });
    let shrink = ratio_sequence(&polygon, &StratumIndex::new(BigRational::new(1.into(), 4.into())).unwrap(), horizon)
        .expect("certified horizon");
    let four = BigRational::from_integer(4.into());
    let bounded = shrink.points.iter().all(|pt| {
        pt.upper
            .as_ref()
            .map(|u| u.upper() <= &four)
            .unwrap_or(true)
    });
    ctx.check(bounded, || {
        "a = 2: upper bracket at 1/4 exceeded 4".into()
    });
    ctx.into_report("fa")
}

fn strata_suite(seed: u64) -> SuiteReport {
    let mut ctx = Ctx::new();
    let rng = &mut rng_for(seed, 6);
    let lambdas = [
        StratumIndex::new(BigRational::new(1.into(), 4.into())).unwrap(),
        StratumIndex::new(BigRational::new(1.into(), 2.into())).unwrap(),
        StratumIndex::new(BigRational::new(3.into(), 4.into())).unwrap(),
        StratumIndex::new(BigRational::one()).unwrap(),
    ];
    // bracket validity by dense sampling between breakpoints
    for round in 0..12 {
        let p = rand_polygon(rng, 16);
        let lambda = &lambdas[rng.gen_range(0..lambdas.len())];
        let breakpoints = p.nodes().len() - 1;
        if breakpoints == 0 {
            continue;
        }
        let seq = ratio_sequence(&p, lambda, breakpoints as u64).expect("constant tail");
        for pt in seq.points.iter().take(3) {
            if pt.upper.is_none() {
                continue;
            }
            let next_t = seq
                .points
                .iter()
                .find(|other| other.index == pt.index + 1)
                .map(|other| other.t.clone())
                .expect("upper bracket implies a next breakpoint");
            // dense sampling of [s_{i+1}, s_i], endpoints included
            let mut lower_attained = false;
            for k in 0..=50u64 {
                let t = &next_t + (&pt.t - &next_t) * rat_u64(k) / rat_u64(50);
                let l = p.legendre_eval(&t).unwrap().value;
                // ratio(t) <= upper bracket = L(s_i)/s_{i+1}^λ
                let ok = exact_ratio_le(&l, &t, &pt.l_value, &next_t, lambda).unwrap();
                ctx.check(ok, || {
                    format!("round {round}: upper bracket violated at t = {t}")
                });
                // lower bracket = L(s_i)/s_i^λ must be attained on the
                // interval (it is, at t = s_i)
                if exact_ratio_le(&pt.l_value, &pt.t, &l, &t, lambda).unwrap() {
                    lower_attained = true;
                }
            }
            ctx.check(lower_attained, || {
                format!("round {round}: lower bracket exceeds the interval supremum")
            });
        }
    }
    // monotone chain: for t <= 1 and λ < μ the ratio at μ dominates
    for round in 0..80 {
        let p = rand_polygon(rng, 16);
        let i = rng.gen_range(0..lambdas.len() - 1);
        let j = rng.gen_range(i + 1..lambdas.len());
        let (lam, mu) = (&lambdas[i], &lambdas[j]);
        for _ in 0..10 {
            let t = BigRational::new(
                BigInt::from(rng.gen_range(1..=16i64)),
                BigInt::from(rng.gen_range(16..=64i64)),
            );
            let l = p.legendre_eval(&t).unwrap().value;
            if l.is_zero() {
                continue;
            }
            // l/t^μ >= l/t^λ  ⟺  t^(p_μ q_λ) <= t^(p_λ q_μ)
            let (pl, ql) = (
                u32::try_from(lam.value().numer().magnitude().clone()).unwrap(),
                u32::try_from(lam.value().denom().magnitude().clone()).unwrap(),
            );
            let (pm, qm) = (
                u32::try_from(mu.value().numer().magnitude().clone()).unwrap(),
                u32::try_from(mu.value().denom().magnitude().clone()).unwrap(),
            );
            let dominates = rational_pow(&t, pm * ql) <= rational_pow(&t, pl * qm);
            ctx.check(dominates, || {
                format!("round {round}: chain dominance failed at t = {t}")
            });
        }
    }
    // top-stratum decision against the oracle hull criterion
    for round in 0..500 {
        let f = rand_profile(rng, 20);
        let points: Vec<(u64, BigRational)> =
            f.finite_entries().map(|(i, v)| (i, v.clone())).collect();
        let oracle_zero = decreasing_hull_oracle(&points)
            .iter()
            .any(|(_, y)| y.is_zero());
        let p = newton_polygon(&f).unwrap();
        let verdict = membership_in_m(&p).unwrap();
        let agrees = match verdict.kind {
            VerdictKind::NonMember { .. } => oracle_zero,
            VerdictKind::Member { .. } => !oracle_zero,
            _ => false,
        };
        ctx.check(agrees, || {
            format!("round {round}: top-stratum decision disagrees with the hull oracle")
        });
    }
    // ratio additivity under products
    for round in 0..100 {
        let p = rand_polygon(rng, 12);
        let q = rand_polygon(rng, 12);
        let lambda = &lambdas[rng.gen_range(0..lambdas.len())];
        let witness = product_ratio_witness(&p, &q, lambda, 32).expect("constant tails");
        ctx.check(witness.all_additive, || {
            format!("round {round}: product ratios not additive")
        });
    }
    ctx.into_report("strata")
}
