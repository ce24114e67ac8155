//! Newton polygons: decreasing convex hulls of coefficient-valuation data.
//!
//! The polygon of a profile is the boundary of the decreasing convex hull
//! of the points `(i, v(a_i))`, viewed as a function on `x ≥ 0`: it is `∞`
//! left of the first node, piecewise linear with strictly negative and
//! strictly increasing slopes between nodes, and beyond the last node
//! either constant (complete data) or unknown (truncated data).
//!
//! Nodes are exactly the points where the function fails to be
//! differentiable: the left boundary of the finite region plus every
//! strict slope change. Collinear interior points are not nodes and are
//! dropped during hull construction.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrat::{format_rational, parse_nonneg_rational, rat_u64, ExtRat};
use crate::profile::{CoefficientProfile, Tail, ValueWithCertificate};

/// Tail mode of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonTail {
    /// Constant at the last node's value beyond it (slope 0 convention).
    Constant,
    /// Unknown beyond the last node.
    Truncated,
}

/// A nonnegative convex piecewise-linear decreasing function given by its
/// node list; `∞` left of the first node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexProfile {
    nodes: Vec<(u64, BigRational)>,
    tail: PolygonTail,
}

/// Nodes with their right slopes: `(n_i, y_i, -s_i)` reported as the slope
/// magnitude `s_i`. The last node carries `Some(0)` under the constant-tail
/// convention and `None` when the region beyond it is unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSequence {
    pub items: Vec<SlopeItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeItem {
    pub node: u64,
    pub value: BigRational,
    pub right_slope_magnitude: Option<BigRational>,
}

impl ConvexProfile {
    /// Builds a polygon, checking all structural invariants.
    pub fn new(nodes: Vec<(u64, BigRational)>, tail: PolygonTail) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidPolygon("empty node list".into()));
        }
        for (_, y) in &nodes {
            if y.is_negative() {
                return Err(Error::InvalidPolygon(format!(
                    "negative node value {}",
                    format_rational(y)
                )));
            }
        }
        for pair in nodes.windows(2) {
            let (x0, y0) = &pair[0];
            let (x1, y1) = &pair[1];
            if x0 >= x1 {
                return Err(Error::InvalidPolygon(format!(
                    "node abscissas must strictly increase, got {x0} then {x1}"
                )));
            }
            if y0 <= y1 {
                return Err(Error::InvalidPolygon(
                    "node values must strictly decrease".into(),
                ));
            }
        }
        // convexity: slope magnitudes strictly decrease left to right
        for triple in nodes.windows(3) {
            let (x0, y0) = &triple[0];
            let (x1, y1) = &triple[1];
            let (x2, y2) = &triple[2];
            // (y0-y1)/(x1-x0) > (y1-y2)/(x2-x1), cross-multiplied
            let lhs = (y0 - y1) * rat_u64(x2 - x1);
            let rhs = (y1 - y2) * rat_u64(x1 - x0);
            if lhs <= rhs {
                return Err(Error::InvalidPolygon(format!(
                    "slope magnitudes must strictly decrease at node {x1}"
                )));
            }
        }
        Ok(ConvexProfile { nodes, tail })
    }

    pub fn nodes(&self) -> &[(u64, BigRational)] {
        &self.nodes
    }

    pub fn tail(&self) -> PolygonTail {
        self.tail
    }

    pub fn first_node(&self) -> &(u64, BigRational) {
        self.nodes.first().expect("polygon has at least one node")
    }

    pub fn last_node(&self) -> &(u64, BigRational) {
        self.nodes.last().expect("polygon has at least one node")
    }

    /// The minimum attained value (the last node's value).
    pub fn min_value(&self) -> &BigRational {
        &self.last_node().1
    }

    /// Slope magnitude of segment `j` (0-based, between nodes `j` and
    /// `j+1`).
    pub fn segment_slope_magnitude(&self, j: usize) -> BigRational {
        let (x0, y0) = &self.nodes[j];
        let (x1, y1) = &self.nodes[j + 1];
        (y0 - y1) / rat_u64(x1 - x0)
    }

    /// Nodes annotated with their right slopes, 1-based in reading order.
    pub fn slope_sequence(&self) -> SlopeSequence {
        let m = self.nodes.len();
        let items = self
            .nodes
            .iter()
            .enumerate()
            .map(|(j, (x, y))| {
                let right = if j + 1 < m {
                    Some(self.segment_slope_magnitude(j))
                } else {
                    match self.tail {
                        PolygonTail::Constant => Some(BigRational::zero()),
                        PolygonTail::Truncated => None,
                    }
                };
                SlopeItem {
                    node: *x,
                    value: y.clone(),
                    right_slope_magnitude: right,
                }
            })
            .collect();
        SlopeSequence { items }
    }

    /// Evaluates the polygon as a function of `x ≥ 0`.
    ///
    /// `∞` left of the first node, linear interpolation between nodes,
    /// constant beyond the last node for a constant tail; evaluating a
    /// truncated polygon beyond its last node is an error.
    pub fn eval(&self, x: &BigRational) -> Result<ExtRat> {
        if x.is_negative() {
            return Err(Error::InvalidArgument(
                "polygon evaluation requires x >= 0".into(),
            ));
        }
        let first_x = rat_u64(self.first_node().0);
        if *x < first_x {
            return Ok(ExtRat::Infinity);
        }
        let last_x = rat_u64(self.last_node().0);
        if *x > last_x {
            return match self.tail {
                PolygonTail::Constant => Ok(ExtRat::Finite(self.min_value().clone())),
                PolygonTail::Truncated => Err(Error::UnknownRegion {
                    x: format_rational(x),
                }),
            };
        }
        // segment containing x: last node with abscissa <= x
        let j = self
            .nodes
            .partition_point(|(nx, _)| rat_u64(*nx) <= *x)
            - 1;
        let (x0, y0) = &self.nodes[j];
        if rat_u64(*x0) == *x || j + 1 == self.nodes.len() {
            return Ok(ExtRat::Finite(y0.clone()));
        }
        let (x1, y1) = &self.nodes[j + 1];
        let slope = (y1 - y0) / rat_u64(x1 - x0);
        Ok(ExtRat::Finite(y0 + slope * (x - rat_u64(*x0))))
    }

    /// The Legendre transform value `inf over nodes of (y + t·x)`.
    ///
    /// For a decreasing convex function the infimum over `x ≥ 0` is
    /// attained on the node set, so this equals the transform of the full
    /// function. Exact for a constant tail. For a truncated tail the value
    /// is exact iff it is `≤ t·(x_last + 1)`: the data behind a truncated
    /// polygon is complete up to its last node, so any unknown point has
    /// abscissa `≥ x_last + 1` and value `≥ 0`, contributing at least
    /// `t·(x_last + 1)` to the infimum.
    pub fn legendre_eval(&self, t: &BigRational) -> Result<ValueWithCertificate> {
        if t.is_negative() {
            return Err(Error::InvalidArgument(
                "transform evaluation requires t >= 0".into(),
            ));
        }
        // minimizing node: first segment whose slope magnitude is <= t;
        // slope magnitudes strictly decrease, so binary search applies
        let steeper_than_t = |j: usize| {
            let (x0, y0) = &self.nodes[j];
            let (x1, y1) = &self.nodes[j + 1];
            (y0 - y1) > t * rat_u64(x1 - x0)
        };
        let (mut lo, mut hi) = (0usize, self.nodes.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if steeper_than_t(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let k = lo;
        let (x, y) = &self.nodes[k];
        let value = y + t * rat_u64(*x);
        let exact = match self.tail {
            PolygonTail::Constant => true,
            PolygonTail::Truncated => value <= t * rat_u64(self.last_node().0 + 1),
        };
        Ok(ValueWithCertificate { value, exact })
    }

    /// The polygon of a product of ring elements: node-wise it starts at
    /// the sum of the first nodes and its slope multiset is the union of
    /// the operands' slope multisets. Its Legendre transform is the
    /// pointwise sum of the operands' transforms.
    pub fn minkowski_product(&self, other: &ConvexProfile) -> Result<ConvexProfile> {
        if self.tail == PolygonTail::Truncated || other.tail == PolygonTail::Truncated {
            return Err(Error::Truncated {
                op: "minkowski product",
            });
        }
        let mut a = self.segments();
        let mut b = other.segments();
        let mut merged: Vec<(BigRational, u64)> = Vec::with_capacity(a.len() + b.len());
        a.reverse();
        b.reverse();
        // merge by slope magnitude, steepest first; equal slopes coalesce
        while !(a.is_empty() && b.is_empty()) {
            let take_a = match (a.last(), b.last()) {
                (Some((sa, _)), Some((sb, _))) => sa >= sb,
                (Some(_), None) => true,
                (None, _) => false,
            };
            let (s, dx) = if take_a { a.pop().unwrap() } else { b.pop().unwrap() };
            match merged.last_mut() {
                Some((prev, run)) if *prev == s => *run += dx,
                _ => merged.push((s, dx)),
            }
        }
        let mut x = self.first_node().0 + other.first_node().0;
        let mut y = &self.first_node().1 + &other.first_node().1;
        let mut nodes = vec![(x, y.clone())];
        for (s, dx) in merged {
            x += dx;
            y -= s * rat_u64(dx);
            nodes.push((x, y.clone()));
        }
        ConvexProfile::new(nodes, PolygonTail::Constant)
    }

    /// A certified lower bound for the polygon of a sum of ring elements:
    /// the convexification of the pointwise minimum of the operands. Its
    /// Legendre transform is the pointwise minimum of the transforms.
    pub fn sum_lower_bound(&self, other: &ConvexProfile) -> Result<ConvexProfile> {
        if self.tail == PolygonTail::Truncated || other.tail == PolygonTail::Truncated {
            return Err(Error::Truncated {
                op: "sum lower bound",
            });
        }
        let mut points: Vec<(u64, BigRational)> = self
            .nodes
            .iter()
            .chain(other.nodes.iter())
            .cloned()
            .collect();
        points.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        points.dedup_by(|next, prev| next.0 == prev.0); // keep min y per x
        let nodes = decreasing_hull(&points);
        ConvexProfile::new(nodes, PolygonTail::Constant)
    }

    /// Segments as `(slope magnitude, width)`, steepest first.
    fn segments(&self) -> Vec<(BigRational, u64)> {
        (0..self.nodes.len() - 1)
            .map(|j| {
                (
                    self.segment_slope_magnitude(j),
                    self.nodes[j + 1].0 - self.nodes[j].0,
                )
            })
            .collect()
    }

    /// Reads the node list back as a finite coefficient profile.
    pub fn to_profile(&self) -> CoefficientProfile {
        let entries = self
            .nodes
            .iter()
            .map(|(x, y)| (*x, ExtRat::Finite(y.clone())))
            .collect();
        CoefficientProfile::new(entries, Tail::Finite).expect("polygon nodes form a valid profile")
    }

    /// `x,y` rows (decimal, for plotting; the JSON format is the exact one).
    pub fn to_csv(&self) -> String {
        use num_traits::ToPrimitive;
        let mut out = String::from("x,y\n");
        for (x, y) in &self.nodes {
            out.push_str(&format!("{},{}\n", x, y.to_f64().unwrap_or(f64::NAN)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polygon serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// The Newton polygon of a nonzero profile: single-pass monotone-chain
/// construction of the decreasing convex hull of the finite entries.
///
/// A finite-tail profile yields a constant tail at its minimal listed
/// valuation. A truncated profile yields a truncated tail, except when the
/// hull reaches value 0: a nonnegative decreasing function that attains 0
/// stays 0, so the constant tail is certified even under truncation.
pub fn newton_polygon(f: &CoefficientProfile) -> Result<ConvexProfile> {
    if f.is_zero() {
        return Err(Error::ZeroElement);
    }
    let points: Vec<(u64, BigRational)> =
        f.finite_entries().map(|(i, v)| (i, v.clone())).collect();
    let nodes = decreasing_hull(&points);
    let tail = match f.tail() {
        Tail::Finite => PolygonTail::Constant,
        Tail::Truncated(_) => {
            if nodes.last().expect("nonempty hull").1.is_zero() {
                PolygonTail::Constant
            } else {
                PolygonTail::Truncated
            }
        }
    };
    ConvexProfile::new(nodes, tail)
}

/// Lower decreasing convex hull of points sorted by strictly increasing x.
///
/// Monotone chain with `cross <= 0` popping (collinear points dropped),
/// then truncation at the first point attaining the minimal value: the
/// rising right side of the lower hull is never part of a decreasing
/// polygon.
pub(crate) fn decreasing_hull(points: &[(u64, BigRational)]) -> Vec<(u64, BigRational)> {
    let mut hull: Vec<(u64, BigRational)> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 {
            let o = &hull[hull.len() - 2];
            let a = &hull[hull.len() - 1];
            // cross(o, a, p) = (a.x-o.x)(p.y-o.y) - (a.y-o.y)(p.x-o.x)
            let cross = rat_u64(a.0 - o.0) * (&p.1 - &o.1)
                - (&a.1 - &o.1) * rat_u64(p.0 - o.0);
            if cross <= BigRational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    let min_y = hull
        .iter()
        .map(|(_, y)| y)
        .min()
        .expect("hull of nonempty input is nonempty")
        .clone();
    let cut = hull
        .iter()
        .position(|(_, y)| *y == min_y)
        .expect("minimum present");
    hull.truncate(cut + 1);
    hull
}

// Wire format:
//   {"nodes": [[0, "3/1"], [1, "1/1"]], "tail": "constant" | "truncated"}
#[derive(Serialize, Deserialize)]
struct PolygonWire {
    nodes: Vec<(u64, String)>,
    tail: PolygonTailWire,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PolygonTailWire {
    Constant,
    Truncated,
}

impl Serialize for ConvexProfile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PolygonWire {
            nodes: self
                .nodes
                .iter()
                .map(|(x, y)| (*x, format_rational(y)))
                .collect(),
            tail: match self.tail {
                PolygonTail::Constant => PolygonTailWire::Constant,
                PolygonTail::Truncated => PolygonTailWire::Truncated,
            },
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConvexProfile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PolygonWire::deserialize(deserializer)?;
        let mut nodes = Vec::with_capacity(wire.nodes.len());
        for (x, s) in wire.nodes {
            let y = parse_nonneg_rational(&s).map_err(serde::de::Error::custom)?;
            nodes.push((x, y));
        }
        let tail = match wire.tail {
            PolygonTailWire::Constant => PolygonTail::Constant,
            PolygonTailWire::Truncated => PolygonTail::Truncated,
        };
        ConvexProfile::new(nodes, tail).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrat::rat;

    fn finite_profile(entries: &[(u64, (i64, u64))]) -> CoefficientProfile {
        let entries = entries
            .iter()
            .map(|(i, (n, d))| (*i, ExtRat::finite(rat(*n, *d)).unwrap()))
            .collect();
        CoefficientProfile::new(entries, Tail::Finite).unwrap()
    }

    fn nodes_of(p: &ConvexProfile) -> Vec<(u64, BigRational)> {
        p.nodes().to_vec()
    }

    #[test]
    fn hull_drops_interior_point() {
        let f = finite_profile(&[(0, (3, 1)), (1, (1, 1)), (2, (2, 1)), (3, (0, 1))]);
        let p = newton_polygon(&f).unwrap();
        assert_eq!(
            nodes_of(&p),
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))]
        );
        assert_eq!(p.tail(), PolygonTail::Constant);
    }

    #[test]
    fn single_point_and_convex_chain_pass_through() {
        let f = finite_profile(&[(0, (5, 2))]);
        let p = newton_polygon(&f).unwrap();
        assert_eq!(nodes_of(&p), vec![(0, rat(5, 2))]);

        let g = finite_profile(&[(0, (4, 1)), (1, (2, 1)), (2, (1, 1))]);
        let q = newton_polygon(&g).unwrap();
        assert_eq!(
            nodes_of(&q),
            vec![(0, rat(4, 1)), (1, rat(2, 1)), (2, rat(1, 1))]
        );
    }

    #[test]
    fn collinear_points_are_not_nodes() {
        let f = finite_profile(&[(0, (2, 1)), (1, (1, 1)), (2, (0, 1))]);
        let p = newton_polygon(&f).unwrap();
        assert_eq!(nodes_of(&p), vec![(0, rat(2, 1)), (2, rat(0, 1))]);
    }

    #[test]
    fn rising_points_after_minimum_are_dropped() {
        let f = finite_profile(&[(0, (1, 1)), (1, (0, 1)), (2, (5, 1))]);
        let p = newton_polygon(&f).unwrap();
        assert_eq!(nodes_of(&p), vec![(0, rat(1, 1)), (1, rat(0, 1))]);
        // flat bottom keeps its first point only
        let g = finite_profile(&[(0, (5, 1)), (1, (0, 1)), (3, (0, 1)), (4, (7, 1))]);
        let q = newton_polygon(&g).unwrap();
        assert_eq!(nodes_of(&q), vec![(0, rat(5, 1)), (1, rat(0, 1))]);
    }

    #[test]
    fn truncated_tail_propagates_unless_hull_reaches_zero() {
        let f = CoefficientProfile::new(
            vec![
                (0, ExtRat::finite(rat(2, 1)).unwrap()),
                (1, ExtRat::finite(rat(1, 1)).unwrap()),
            ],
            Tail::Truncated(1),
        )
        .unwrap();
        assert_eq!(newton_polygon(&f).unwrap().tail(), PolygonTail::Truncated);

        let g = CoefficientProfile::new(
            vec![
                (0, ExtRat::finite(rat(2, 1)).unwrap()),
                (1, ExtRat::zero()),
            ],
            Tail::Truncated(1),
        )
        .unwrap();
        assert_eq!(newton_polygon(&g).unwrap().tail(), PolygonTail::Constant);
    }

    #[test]
    fn eval_interpolates_and_handles_boundaries() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        assert_eq!(p.eval(&rat(2, 1)).unwrap(), ExtRat::from_ratio(1, 2));
        assert_eq!(p.eval(&rat(0, 1)).unwrap(), ExtRat::from_integer(3));
        assert_eq!(p.eval(&rat(10, 1)).unwrap(), ExtRat::zero());
        assert_eq!(p.eval(&rat(1, 2)).unwrap(), ExtRat::from_integer(2));

        let q = ConvexProfile::new(vec![(1, rat(5, 1))], PolygonTail::Constant).unwrap();
        assert_eq!(q.eval(&rat(1, 2)).unwrap(), ExtRat::Infinity);

        let r = ConvexProfile::new(
            vec![(0, rat(3, 1)), (2, rat(1, 1))],
            PolygonTail::Truncated,
        )
        .unwrap();
        assert!(matches!(
            r.eval(&rat(5, 2)),
            Err(Error::UnknownRegion { .. })
        ));
        assert_eq!(r.eval(&rat(1, 1)).unwrap(), ExtRat::from_integer(2));
    }

    #[test]
    fn legendre_eval_matches_hand_computation() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        for (t, expect) in [
            (rat(1, 1), rat(2, 1)),
            (rat(1, 4), rat(3, 4)),
            (rat(5, 1), rat(3, 1)),
            (rat(0, 1), rat(0, 1)),
        ] {
            let r = p.legendre_eval(&t).unwrap();
            assert_eq!(r.value, expect, "t = {t}");
            assert!(r.exact);
        }
    }

    #[test]
    fn legendre_certificate_under_truncation() {
        // single node (1, 1), truncated: L(t) = 1 + t, exact iff 1 + t <= 2t
        let p = ConvexProfile::new(vec![(1, rat(1, 1))], PolygonTail::Truncated).unwrap();
        assert!(!p.legendre_eval(&rat(1, 2)).unwrap().exact);
        assert!(p.legendre_eval(&rat(1, 1)).unwrap().exact);
        assert!(p.legendre_eval(&rat(3, 1)).unwrap().exact);
    }

    #[test]
    fn minkowski_shifts_and_merges() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        // unit with valuation c: shift up
        let unit = ConvexProfile::new(vec![(0, rat(5, 1))], PolygonTail::Constant).unwrap();
        let shifted = p.minkowski_product(&unit).unwrap();
        assert_eq!(
            nodes_of(&shifted),
            vec![(0, rat(8, 1)), (1, rat(6, 1)), (3, rat(5, 1))]
        );
        // power of the uniformizer: shift right
        let pi2 = ConvexProfile::new(vec![(2, rat(0, 1))], PolygonTail::Constant).unwrap();
        let shifted = p.minkowski_product(&pi2).unwrap();
        assert_eq!(
            nodes_of(&shifted),
            vec![(2, rat(3, 1)), (3, rat(1, 1)), (5, rat(0, 1))]
        );
    }

    #[test]
    fn minkowski_square_merges_equal_slopes() {
        // both factors have the single slope -1; the square has one
        // segment of width 2 and the midpoint is not a node
        let p = ConvexProfile::new(
            vec![(0, rat(1, 1)), (1, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        let sq = p.minkowski_product(&p).unwrap();
        assert_eq!(nodes_of(&sq), vec![(0, rat(2, 1)), (2, rat(0, 1))]);
        // transform additivity at sampled t
        for t in [rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)] {
            let lhs = sq.legendre_eval(&t).unwrap().value;
            let rhs = p.legendre_eval(&t).unwrap().value * rat(2, 1);
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn sum_lower_bound_examples() {
        let p = ConvexProfile::new(
            vec![(0, rat(2, 1)), (2, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        let q = ConvexProfile::new(vec![(1, rat(0, 1))], PolygonTail::Constant).unwrap();
        let b = p.sum_lower_bound(&q).unwrap();
        assert_eq!(nodes_of(&b), vec![(0, rat(2, 1)), (1, rat(0, 1))]);

        assert_eq!(p.sum_lower_bound(&p).unwrap(), p);

        let unit = ConvexProfile::new(vec![(0, rat(0, 1))], PolygonTail::Constant).unwrap();
        assert_eq!(p.sum_lower_bound(&unit).unwrap(), unit);
    }

    #[test]
    fn truncated_inputs_rejected_by_product_and_sum() {
        let p = ConvexProfile::new(vec![(0, rat(2, 1))], PolygonTail::Truncated).unwrap();
        let q = ConvexProfile::new(vec![(0, rat(2, 1))], PolygonTail::Constant).unwrap();
        assert!(matches!(
            p.minkowski_product(&q),
            Err(Error::Truncated { .. })
        ));
        assert!(matches!(
            q.sum_lower_bound(&p),
            Err(Error::Truncated { .. })
        ));
    }

    #[test]
    fn hull_idempotence_on_node_lists() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        let again = newton_polygon(&p.to_profile()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn slope_sequence_conventions() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        let seq = p.slope_sequence();
        let mags: Vec<_> = seq
            .items
            .iter()
            .map(|it| it.right_slope_magnitude.clone().unwrap())
            .collect();
        assert_eq!(mags, vec![rat(2, 1), rat(1, 2), rat(0, 1)]);

        let q = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1))],
            PolygonTail::Truncated,
        )
        .unwrap();
        assert_eq!(q.slope_sequence().items[1].right_slope_magnitude, None);
    }

    #[test]
    fn json_round_trip() {
        let p = ConvexProfile::new(
            vec![(0, rat(3, 1)), (1, rat(1, 1)), (3, rat(0, 1))],
            PolygonTail::Constant,
        )
        .unwrap();
        let json = p.to_json();
        assert!(json.contains("\"constant\""));
        assert_eq!(ConvexProfile::from_json(&json).unwrap(), p);
        // invalid polygons are rejected on the way in
        let bad = r#"{"nodes": [[0, "1/1"], [1, "2/1"]], "tail": "constant"}"#;
        assert!(ConvexProfile::from_json(bad).is_err());
    }
}
