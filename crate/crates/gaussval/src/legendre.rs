//! Legendre transforms of Newton polygons.
//!
//! For a nonnegative decreasing convex PL function `F` the transform
//! `L(F)(t) = inf { F(x) + t·x : x ≥ 0 }` is increasing, concave,
//! piecewise linear with nonnegative integer slopes, and for a Newton
//! polygon it equals the Gauss-valuation function `t ↦ v_t(f)`.
//!
//! The full description mirrors the polygon's node data: if the polygon
//! has nodes `n_1 < … < n_m` with slope magnitude `s_i` on
//! `(n_i, n_{i+1})` (and `s_m = 0` for a constant tail), then the
//! transform has breakpoints at `t = s_i`, slope `n_{i+1}` on
//! `(s_{i+1}, s_i)`, slope `n_1` on `(s_1, ∞)`, and value `v_0(f)` at 0.
//! This correspondence is an involution, realized by [`legendre_full`]
//! and [`inverse_legendre`].

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrat::{format_rational, parse_nonneg_rational, rat_u64};
use crate::polygon::{ConvexProfile, PolygonTail};

/// An increasing concave PL function of `t ≥ 0` with integer slopes,
/// described by its breakpoints in descending `t` order.
///
/// `slopes` has one more entry than `breakpoints`: `slopes[0]` applies
/// above the first breakpoint, `slopes[j]` between breakpoints `j-1` and
/// `j`, and the last entry below the last breakpoint. `value_at_zero` is
/// present only when the description is certified all the way down to 0,
/// i.e. when `validity_floor` is 0; below the floor the function is
/// intentionally not represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcaveTransform {
    breakpoints: Vec<(BigRational, BigRational)>,
    slopes: Vec<u64>,
    value_at_zero: Option<BigRational>,
    validity_floor: BigRational,
    /// Value at the validity floor; equals `value_at_zero` when the floor
    /// is 0. Anchors evaluation below the lowest breakpoint.
    floor_value: BigRational,
}

/// A transform value at a polygon breakpoint, as produced by
/// [`transform_breakpoint_values`].
#[derive(Debug, Clone)]
pub struct BreakpointValue {
    /// 1-based breakpoint index (the polygon's i-th slope).
    pub index: u64,
    /// Breakpoint abscissa `t = s_i`.
    pub t: BigRational,
    /// `L(s_i)`, equal to `y_i + s_i·n_i`.
    pub value: BigRational,
    /// Exactness of the value under the polygon's truncation mode.
    pub exact: bool,
}

impl ConcaveTransform {
    pub fn breakpoints(&self) -> &[(BigRational, BigRational)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[u64] {
        &self.slopes
    }

    pub fn value_at_zero(&self) -> Option<&BigRational> {
        self.value_at_zero.as_ref()
    }

    pub fn validity_floor(&self) -> &BigRational {
        &self.validity_floor
    }

    /// Evaluates the transform at `t ≥ validity_floor`.
    pub fn eval(&self, t: &BigRational) -> Result<BigRational> {
        if t.is_negative() {
            return Err(Error::InvalidArgument(
                "transform evaluation requires t >= 0".into(),
            ));
        }
        if t < &self.validity_floor {
            return Err(Error::Underdetermined {
                floor: format_rational(&self.validity_floor),
            });
        }
        // anchor at the largest breakpoint <= t, else at the floor
        match self.breakpoints.iter().position(|(bt, _)| bt <= t) {
            Some(j) => {
                let (bt, bv) = &self.breakpoints[j];
                Ok(bv + rat_u64(self.slopes[j]) * (t - bt))
            }
            None => {
                let n_last = *self.slopes.last().expect("at least one slope");
                Ok(&self.floor_value + rat_u64(n_last) * (t - &self.validity_floor))
            }
        }
    }

    /// `t,L(t)` rows (decimal, for plotting): breakpoints plus one sample
    /// above the first breakpoint and one at the lower end.
    pub fn to_csv(&self) -> String {
        let mut samples: Vec<(BigRational, BigRational)> = Vec::new();
        if let Some((t1, _)) = self.breakpoints.first() {
            let above = t1 + BigRational::from_integer(1.into());
            samples.push((above.clone(), self.eval(&above).expect("above floor")));
        }
        for (t, v) in &self.breakpoints {
            samples.push((t.clone(), v.clone()));
        }
        samples.push((self.validity_floor.clone(), self.floor_value.clone()));
        let mut out = String::from("t,L\n");
        for (t, v) in samples {
            out.push_str(&format!(
                "{},{}\n",
                t.to_f64().unwrap_or(f64::NAN),
                v.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transform serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// The full transform of a polygon.
///
/// Breakpoints sit exactly at the polygon's slope magnitudes, in
/// descending order, with values computed at the corresponding nodes. For
/// a constant tail the description is certified down to `t = 0` and
/// `value_at_zero` is the minimal node value. For a truncated tail the
/// floor is the exact threshold below which unknown coefficients could
/// change the transform: the crossing of the known infimum with
/// `t·(x_last + 1)` (see [`ConvexProfile::legendre_eval`]).
pub fn legendre_full(p: &ConvexProfile) -> ConcaveTransform {
    let nodes = p.nodes();
    let m = nodes.len();
    let mut breakpoints = Vec::with_capacity(m.saturating_sub(1));
    let mut slopes = Vec::with_capacity(m);
    slopes.push(nodes[0].0);
    for j in 0..m - 1 {
        let s = p.segment_slope_magnitude(j);
        let (x, y) = &nodes[j];
        let value = y + &s * rat_u64(*x);
        breakpoints.push((s, value));
        slopes.push(nodes[j + 1].0);
    }
    match p.tail() {
        PolygonTail::Constant => ConcaveTransform {
            breakpoints,
            slopes,
            value_at_zero: Some(p.min_value().clone()),
            validity_floor: BigRational::zero(),
            floor_value: p.min_value().clone(),
        },
        PolygonTail::Truncated => {
            let floor = truncated_validity_floor(p, &breakpoints);
            let floor_value = p
                .legendre_eval(&floor)
                .expect("floor is nonnegative")
                .value;
            ConcaveTransform {
                breakpoints,
                slopes,
                value_at_zero: None,
                validity_floor: floor,
                floor_value,
            }
        }
    }
}

/// Smallest `t` at which the known transform of a truncated polygon is
/// certified: the crossing of `L_known(t)` with `t·(x_last + 1)`.
///
/// `h(t) = t·(x_last+1) - L_known(t)` is convex, negative for small
/// `t > 0` (the transform stays above any line through the origin with
/// slope exceeding its own slopes) and grows without bound, so the
/// crossing is unique and can be solved exactly on the region where it
/// occurs.
fn truncated_validity_floor(
    p: &ConvexProfile,
    breakpoints: &[(BigRational, BigRational)],
) -> BigRational {
    let nodes = p.nodes();
    let horizon = rat_u64(p.last_node().0 + 1);
    // scan regions downward in t; in each, L(t) = v + slope·(t - anchor)
    // with the anchor at the region's upper breakpoint. The terminal
    // region above the first breakpoint has slope nodes[0].0 and, lacking
    // an upper anchor, is handled from the first breakpoint as well.
    let mut last_certified: Option<BigRational> = None;
    for (j, (t, v)) in breakpoints.iter().enumerate() {
        if *v <= t * &horizon {
            // certified at this breakpoint; the crossing lies below, in
            // the region with slope nodes[j+1].0:
            //   v + slope·(t* - t) = t*·(x_last + 1)
            let slope = rat_u64(nodes[j + 1].0);
            let t_star = (v - &slope * t) / (&horizon - &slope);
            last_certified = Some(t_star.max(BigRational::zero()));
        } else {
            break;
        }
    }
    match last_certified {
        Some(f) => f,
        None => {
            // crossing lies above the first breakpoint (or there is none):
            // anchor at the first breakpoint or at the only node
            match breakpoints.first() {
                Some((t1, v1)) => {
                    let n1 = rat_u64(nodes[0].0);
                    (v1 - &n1 * t1) / (&horizon - &n1)
                }
                None => {
                    // single node (x, y): L(t) = y + t·x crosses t(x+1)
                    // at t = y
                    nodes[0].1.clone()
                }
            }
        }
    }
}

/// Recovers the unique polygon whose transform is `T`.
///
/// Requires a certified description down to 0. Each breakpoint `(s_i,
/// L(s_i))` yields the node `(n_i, L(s_i) - s_i·n_i)` where `n_i` is the
/// slope above the breakpoint; the value at zero supplies the last node.
pub fn inverse_legendre(t: &ConcaveTransform) -> Result<ConvexProfile> {
    if !t.validity_floor.is_zero() {
        return Err(Error::Underdetermined {
            floor: format_rational(&t.validity_floor),
        });
    }
    let v0 = t
        .value_at_zero
        .as_ref()
        .ok_or_else(|| Error::InvalidTransform("missing value at zero".into()))?;
    let mut nodes = Vec::with_capacity(t.slopes.len());
    for (j, (bt, bv)) in t.breakpoints.iter().enumerate() {
        let n = t.slopes[j];
        nodes.push((n, bv - bt * rat_u64(n)));
    }
    let n_last = *t.slopes.last().expect("at least one slope");
    nodes.push((n_last, v0.clone()));
    ConvexProfile::new(nodes, PolygonTail::Constant)
}

/// Transform values at all positive breakpoints of `p`, in one pass.
///
/// At `t = s_i` the infimum is attained at node `i` (and tied at node
/// `i+1`), so `L(s_i) = y_i + s_i·n_i` with no search. Exactness follows
/// the truncation certificate of [`ConvexProfile::legendre_eval`].
pub fn transform_breakpoint_values(p: &ConvexProfile) -> Vec<BreakpointValue> {
    let nodes = p.nodes();
    let horizon = rat_u64(p.last_node().0 + 1);
    let exact_always = p.tail() == PolygonTail::Constant;
    (0..nodes.len() - 1)
        .map(|j| {
            let s = p.segment_slope_magnitude(j);
            let (x, y) = &nodes[j];
            let value = y + &s * rat_u64(*x);
            let exact = exact_always || value <= &s * &horizon;
            BreakpointValue {
                index: (j + 1) as u64,
                t: s,
                value,
                exact,
            }
        })
        .collect()
}

/// The node identity `N(n_i) = -s_i·n_i + L(s_i)` at a 1-based node
/// index, evaluated exactly; returns `(lhs, rhs, holds)`.
///
/// Requires a constant tail: with finitely many nodes the summation-by-
/// parts identity behind it needs no limit hypothesis. For truncated
/// polygons the hypothesis (`s_i·n_{i+1} → 0`) cannot be verified from
/// finite data and the check refuses; a builder that certifies the
/// hypothesis analytically can check the identity through its own report
/// instead.
pub fn corollary_identity_check(
    p: &ConvexProfile,
    index: usize,
) -> Result<(BigRational, BigRational, bool)> {
    if p.tail() == PolygonTail::Truncated {
        return Err(Error::Inconclusive(
            "summation-by-parts hypothesis unverifiable at finite truncation".into(),
        ));
    }
    let nodes = p.nodes();
    if index == 0 || index > nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "node index {index} out of range 1..={}",
            nodes.len()
        )));
    }
    let j = index - 1;
    let (x, y) = &nodes[j];
    let s = if j + 1 < nodes.len() {
        p.segment_slope_magnitude(j)
    } else {
        BigRational::zero() // s_m = 0 convention at the maximal node
    };
    let lhs = y.clone();
    let transform_value = p.legendre_eval(&s)?.value;
    let rhs = transform_value - &s * rat_u64(*x);
    let holds = lhs == rhs;
    Ok((lhs, rhs, holds))
}

// Wire format mirrors the polygon format with breakpoints descending:
//   {"breakpoints": [["2/1","3/1"], ["1/2","3/2"]], "slopes": [0,1,3],
//    "value_at_zero": "0/1" | null, "validity_floor": "0/1",
//    "floor_value": "0/1"}
#[derive(Serialize, Deserialize)]
struct TransformWire {
    breakpoints: Vec<(String, String)>,
    slopes: Vec<u64>,
    value_at_zero: Option<String>,
    validity_floor: String,
    floor_value: String,
}

impl Serialize for ConcaveTransform {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = TransformWire {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(t, v)| (format_rational(t), format_rational(v)))
                .collect(),
            slopes: self.slopes.clone(),
            value_at_zero: self.value_at_zero.as_ref().map(format_rational),
            validity_floor: format_rational(&self.validity_floor),
            floor_value: format_rational(&self.floor_value),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConcaveTransform {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = TransformWire::deserialize(deserializer)?;
        if wire.slopes.len() != wire.breakpoints.len() + 1 {
            return Err(D::Error::custom(
                "slopes must have one more entry than breakpoints",
            ));
        }
        let mut breakpoints = Vec::with_capacity(wire.breakpoints.len());
        for (t, v) in wire.breakpoints {
            breakpoints.push((
                parse_nonneg_rational(&t).map_err(D::Error::custom)?,
                parse_nonneg_rational(&v).map_err(D::Error::custom)?,
            ));
        }
        for pair in breakpoints.windows(2) {
            if pair[0].0 <= pair[1].0 {
                return Err(D::Error::custom("breakpoints must strictly descend"));
            }
        }
        for pair in wire.slopes.windows(2) {
            if pair[0] >= pair[1] {
                return Err(D::Error::custom("slopes must strictly increase"));
            }
        }
        let value_at_zero = wire
            .value_at_zero
            .map(|s| parse_nonneg_rational(&s))
            .transpose()
            .map_err(D::Error::custom)?;
        let validity_floor =
            parse_nonneg_rational(&wire.validity_floor).map_err(D::Error::custom)?;
        if let Some(v0) = &value_at_zero {
            if !validity_floor.is_zero() {
                return Err(D::Error::custom(
                    "value_at_zero requires validity_floor 0",
                ));
            }
            let _ = v0;
        }
        let floor_value =
            parse_nonneg_rational(&wire.floor_value).map_err(D::Error::custom)?;
        Ok(ConcaveTransform {
            breakpoints,
            slopes: wire.slopes,
            value_at_zero,
            validity_floor,
            floor_value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrat::rat;

    fn example_polygon() -> ConvexProfile {
        ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap()
    }

    #[test]
    fn full_transform_of_example() {
        let t = legendre_full(&example_polygon());
        assert_eq!(
            t.breakpoints(),
            &[(rat(2, 1), rat(3, 1)), (rat(1, 2), rat(3, 2))]
        );
        assert_eq!(t.slopes(), &[0, 1, 3]);
        assert_eq!(t.value_at_zero(), Some(&rat(0, 1)));
        assert!(t.validity_floor().is_zero());
    }

    #[test]
    fn full_transform_agrees_with_pointwise_eval() {
        let p = example_polygon();
        let t = legendre_full(&p);
        for num in 0..=60i64 {
            let s = rat(num, 12);
            assert_eq!(
                t.eval(&s).unwrap(),
                p.legendre_eval(&s).unwrap().value,
                "t = {s}"
            );
        }
    }

    #[test]
    fn single_node_transforms() {
        // constant polygon: constant transform
        let c = ConvexProfile::new(vec![(0, rat(7, 2))], PolygonTail::Constant).unwrap();
        let t = legendre_full(&c);
        assert!(t.breakpoints().is_empty());
        assert_eq!(t.slopes(), &[0]);
        assert_eq!(t.eval(&rat(11, 3)).unwrap(), rat(7, 2));
        // pure power: the line k·t
        let pk = ConvexProfile::new(vec![(4, rat(0, 1))], PolygonTail::Constant).unwrap();
        let t = legendre_full(&pk);
        assert_eq!(t.eval(&rat(3, 5)).unwrap(), rat(12, 5));
    }

    #[test]
    fn involution_round_trip() {
        let p = example_polygon();
        assert_eq!(inverse_legendre(&legendre_full(&p)).unwrap(), p);
        let c = ConvexProfile::new(vec![(0, rat(7, 2))], PolygonTail::Constant).unwrap();
        assert_eq!(inverse_legendre(&legendre_full(&c)).unwrap(), c);
        let pk = ConvexProfile::new(vec![(4, rat(0, 1))], PolygonTail::Constant).unwrap();
        assert_eq!(inverse_legendre(&legendre_full(&pk)).unwrap(), pk);
    }

    #[test]
    fn truncated_transform_has_positive_floor_and_refuses_inversion() {
        let p = ConvexProfile::new(
            vec![(1, rat(2, 1)), (2, rat(1, 1))],
            PolygonTail::Truncated,
        )
        .unwrap();
        let t = legendre_full(&p);
        assert!(t.value_at_zero().is_none());
        assert!(t.validity_floor() > &rat(0, 1));
        assert!(matches!(
            inverse_legendre(&t),
            Err(Error::Underdetermined { .. })
        ));
        // the floor is exactly where the certificate starts holding
        let floor = t.validity_floor().clone();
        assert!(p.legendre_eval(&floor).unwrap().exact);
        assert!(!p.legendre_eval(&(&floor * rat(9, 10))).unwrap().exact);
        assert!(p.legendre_eval(&(&floor * rat(11, 10))).unwrap().exact);
    }

    #[test]
    fn frobenius_rescaling_of_breakpoints() {
        // transform of the (1/p)-scaled polygon is t -> (1/p) L(p t):
        // breakpoints and values divide by p, slopes unchanged
        let p = example_polygon();
        let scaled_nodes = p
            .nodes()
            .iter()
            .map(|(x, y)| (*x, y / rat(2, 1)))
            .collect();
        let scaled = ConvexProfile::new(scaled_nodes, PolygonTail::Constant).unwrap();
        let t = legendre_full(&p);
        let ts = legendre_full(&scaled);
        assert_eq!(ts.slopes(), t.slopes());
        let expected: Vec<_> = t
            .breakpoints()
            .iter()
            .map(|(bt, bv)| (bt / rat(2, 1), bv / rat(2, 1)))
            .collect();
        assert_eq!(ts.breakpoints(), &expected[..]);
    }

    #[test]
    fn node_identity_holds_at_every_node() {
        let p = example_polygon();
        for i in 1..=3 {
            let (lhs, rhs, holds) = corollary_identity_check(&p, i).unwrap();
            assert!(holds, "node {i}: {lhs} vs {rhs}");
        }
        // hand-checked middle node: lhs = 1, rhs = -1/2 + L(1/2) = 1
        let (lhs, rhs, _) = corollary_identity_check(&p, 2).unwrap();
        assert_eq!(lhs, rat(1, 1));
        assert_eq!(rhs, rat(1, 1));
    }

    #[test]
    fn node_identity_on_single_node_uses_zero_slope() {
        let c = ConvexProfile::new(vec![(2, rat(5, 1))], PolygonTail::Constant).unwrap();
        let (lhs, rhs, holds) = corollary_identity_check(&c, 1).unwrap();
        assert!(holds);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn node_identity_refuses_truncated_input() {
        // slopes s_i = 2^-i at nodes n_i = 2^i keep s_i·n_{i+1} = 2 away
        // from 0, the shape for which the limit hypothesis genuinely
        // fails; at finite truncation the checker must refuse outright.
        let p = ConvexProfile::new(
            vec![
                (1, rat(4, 1)),
                (2, rat(3, 1)),
                (4, rat(2, 1)),
                (8, rat(1, 1)),
            ],
            PolygonTail::Truncated,
        )
        .unwrap();
        assert!(matches!(
            corollary_identity_check(&p, 1),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn breakpoint_sweep_matches_eval() {
        for p in [
            example_polygon(),
            ConvexProfile::new(
                vec![(1, rat(3, 1)), (2, rat(2, 1)), (5, rat(1, 2))],
                PolygonTail::Truncated,
            )
            .unwrap(),
        ] {
            for bv in transform_breakpoint_values(&p) {
                let direct = p.legendre_eval(&bv.t).unwrap();
                assert_eq!(bv.value, direct.value);
                assert_eq!(bv.exact, direct.exact);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = legendre_full(&example_polygon());
        let back = ConcaveTransform::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
    }
}
