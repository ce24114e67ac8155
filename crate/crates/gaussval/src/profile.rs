//! Coefficient-valuation profiles and the Gauss valuation family.
//!
//! A profile records the data `{(i, v(a_i))}` of an expansion
//! `f = Σ [a_i] π^i`: only the valuations of the coefficients, never the
//! coefficients themselves. The Gauss valuation at `s ≥ 0` is
//!
//! ```text
//! v_s(f) = inf_i { v(a_i) + i·s }
//! ```
//!
//! Profiles come in two tail modes. A `Finite` tail means every unlisted
//! index has valuation `∞` (a finite expansion), so evaluations are exact.
//! A `Truncated(n)` tail means indices `≤ n` are fully known (unlisted ones
//! are `∞`) while indices `> n` are unknown except that their valuations
//! are `≥ 0`. A truncated evaluation is therefore an upper bound for the
//! true infimum; it is certified exact whenever it is `≤ (n+1)·s`, since
//! every unseen term contributes at least `(n+1)·s`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrat::{format_rational, rat_u64, ExtRat};

/// Tail mode of a profile: finite support or truncation horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Every index not listed has valuation `∞`.
    Finite,
    /// Indices `≤ n` are fully known; indices `> n` are unknown with
    /// valuation `≥ 0`.
    Truncated(u64),
}

/// The valuation data of a nonzero `π`-expansion (or the empty profile for
/// the zero element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientProfile {
    entries: Vec<(u64, ExtRat)>,
    tail: Tail,
}

/// An evaluation result together with its exactness certificate.
///
/// When `exact` is false the value is an upper bound for the true
/// quantity: unknown tail coefficients can only lower an infimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueWithCertificate {
    pub value: BigRational,
    pub exact: bool,
}

impl CoefficientProfile {
    /// Builds a profile, checking the structural invariants: indices
    /// strictly increasing, all within a truncation horizon, and at least
    /// one finite valuation (the zero element must use [`Self::zero`]).
    pub fn new(entries: Vec<(u64, ExtRat)>, tail: Tail) -> Result<Self> {
        for pair in entries.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidProfile(format!(
                    "indices must be strictly increasing, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if let Tail::Truncated(n) = tail {
            if let Some((last, _)) = entries.last() {
                if *last > n {
                    return Err(Error::InvalidProfile(format!(
                        "index {last} exceeds the truncation horizon {n}"
                    )));
                }
            }
        }
        let has_finite = entries.iter().any(|(_, v)| !v.is_infinite());
        if !has_finite {
            if entries.is_empty() && tail == Tail::Finite {
                return Ok(Self::zero());
            }
            return Err(Error::InvalidProfile(
                "at least one finite valuation required; \
                 the zero element is the empty finite profile"
                    .into(),
            ));
        }
        Ok(CoefficientProfile { entries, tail })
    }

    /// The zero element: empty finite profile.
    pub fn zero() -> Self {
        CoefficientProfile {
            entries: Vec::new(),
            tail: Tail::Finite,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty() && self.tail == Tail::Finite
    }

    pub fn entries(&self) -> &[(u64, ExtRat)] {
        &self.entries
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Finite-valued entries `(index, valuation)`, skipping explicit `∞`s.
    pub fn finite_entries(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.entries
            .iter()
            .filter_map(|(i, v)| v.as_finite().map(|r| (*i, r)))
    }

    /// `v_s(f) = inf_i (v(a_i) + i·s)` over the listed entries.
    ///
    /// For a finite tail the result is exact. For a `Truncated(n)` tail it
    /// is exact iff it is `≤ (n+1)·s`: unlisted coefficients have
    /// valuation `≥ 0` and index `≥ n+1`, so they contribute at least
    /// `(n+1)·s`. In particular at `s = 0` this returns `inf_i v(a_i)`,
    /// exact only when the support is finite (or the infimum is already 0).
    pub fn gauss_valuation(&self, s: &BigRational) -> Result<ValueWithCertificate> {
        if s.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "gauss valuation requires s >= 0, got {}",
                format_rational(s)
            )));
        }
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut best: Option<BigRational> = None;
        for (i, v) in self.finite_entries() {
            let candidate = v + s * rat_u64(i);
            best = Some(match best {
                None => candidate,
                Some(b) if candidate < b => candidate,
                Some(b) => b,
            });
        }
        let value = best.expect("nonzero profile has a finite entry");
        let exact = match self.tail {
            Tail::Finite => true,
            Tail::Truncated(n) => value <= rat_u64(n + 1) * s,
        };
        Ok(ValueWithCertificate { value, exact })
    }

    /// `v_0(f) = inf_i v(a_i)`.
    pub fn value_at_zero(&self) -> Result<ValueWithCertificate> {
        self.gauss_valuation(&BigRational::zero())
    }

    /// Test utility: checks `v_t(f) ≥ v_s(f) ≥ 0` for `0 ≤ s ≤ t`.
    ///
    /// Errors when either evaluation is inexact at the current truncation,
    /// since an upper bound on one side cannot settle the comparison.
    pub fn monotonicity_check(&self, s: &BigRational, t: &BigRational) -> Result<bool> {
        if s.is_negative() || t < s {
            return Err(Error::InvalidArgument(
                "monotonicity check requires 0 <= s <= t".into(),
            ));
        }
        let at_s = self.gauss_valuation(s)?;
        let at_t = self.gauss_valuation(t)?;
        if !at_s.exact || !at_t.exact {
            return Err(Error::Inconclusive(
                "inconclusive at this truncation".into(),
            ));
        }
        Ok(at_t.value >= at_s.value && !at_s.value.is_negative())
    }

    /// The inverse-Frobenius action on valuation data: divides every
    /// coefficient valuation by `p`, keeping indices and tail. Satisfies
    /// `v_t(result) = (1/p)·v_{p·t}(f)` wherever both sides are exact.
    pub fn frobenius_pullback(&self, p: u32) -> Result<CoefficientProfile> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!(
                "residue characteristic must be >= 2, got {p}"
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| (*i, v.div_int(p)))
            .collect();
        Ok(CoefficientProfile {
            entries,
            tail: self.tail,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

// Wire format:
//   {"entries": [[0, "2/1"], [3, "inf"]], "tail": "finite" | {"truncated": 5}}
#[derive(Serialize, Deserialize)]
struct ProfileWire {
    entries: Vec<(u64, String)>,
    tail: TailWire,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TailWire {
    Finite,
    Truncated(u64),
}

impl Serialize for CoefficientProfile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = ProfileWire {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.to_string()))
                .collect(),
            tail: match self.tail {
                Tail::Finite => TailWire::Finite,
                Tail::Truncated(n) => TailWire::Truncated(n),
            },
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoefficientProfile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ProfileWire::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(wire.entries.len());
        for (i, s) in wire.entries {
            let v: ExtRat = s.parse().map_err(serde::de::Error::custom)?;
            entries.push((i, v));
        }
        let tail = match wire.tail {
            TailWire::Finite => Tail::Finite,
            TailWire::Truncated(n) => Tail::Truncated(n),
        };
        CoefficientProfile::new(entries, tail).map_err(serde::de::Error::custom)
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

    #[test]
    fn teichmueller_element_is_constant_in_s() {
        // f = [a] with v(a) = 2: v_s = 2 for every s
        let f = finite_profile(&[(0, (2, 1))]);
        let r = f.gauss_valuation(&rat(7, 1)).unwrap();
        assert_eq!(r.value, rat(2, 1));
        assert!(r.exact);
    }

    #[test]
    fn pure_power_scales_linearly() {
        // f = π³: v_s = 3s
        let f = finite_profile(&[(3, (0, 1))]);
        let r = f.gauss_valuation(&rat(1, 2)).unwrap();
        assert_eq!(r.value, rat(3, 2));
        assert!(r.exact);
    }

    #[test]
    fn two_term_infimum() {
        let f = finite_profile(&[(0, (1, 1)), (1, (0, 1))]);
        let a = f.gauss_valuation(&rat(1, 3)).unwrap();
        assert_eq!(a.value, rat(1, 3));
        assert!(a.exact);
        let b = f.gauss_valuation(&rat(2, 1)).unwrap();
        assert_eq!(b.value, rat(1, 1));
        assert!(b.exact);
    }

    #[test]
    fn truncated_certificate_rule() {
        // entries (0,1), (1,1/2) truncated at 1; s = 1/8:
        // inf = 5/8 but (n+1)s = 1/4 < 5/8, so the value is only a bound.
        let f = CoefficientProfile::new(
            vec![
                (0, ExtRat::finite(rat(1, 1)).unwrap()),
                (1, ExtRat::finite(rat(1, 2)).unwrap()),
            ],
            Tail::Truncated(1),
        )
        .unwrap();
        let r = f.gauss_valuation(&rat(1, 8)).unwrap();
        assert_eq!(r.value, rat(5, 8));
        assert!(!r.exact);
        // large s: certificate kicks in
        let r = f.gauss_valuation(&rat(2, 1)).unwrap();
        assert_eq!(r.value, rat(1, 1));
        assert!(r.exact);
    }

    #[test]
    fn value_at_zero_is_min_valuation() {
        let f = finite_profile(&[(0, (3, 1)), (2, (1, 2)), (5, (2, 1))]);
        let r = f.value_at_zero().unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert!(r.exact);
        // truncated: exact at s=0 only when the minimum is already 0
        let g = CoefficientProfile::new(
            vec![(0, ExtRat::finite(rat(1, 2)).unwrap())],
            Tail::Truncated(3),
        )
        .unwrap();
        assert!(!g.value_at_zero().unwrap().exact);
        let h = CoefficientProfile::new(
            vec![(2, ExtRat::zero())],
            Tail::Truncated(3),
        )
        .unwrap();
        let r = h.value_at_zero().unwrap();
        assert!(r.value.is_zero() && r.exact);
    }

    #[test]
    fn monotonicity_examples() {
        let f = finite_profile(&[(0, (1, 1)), (1, (0, 1))]);
        assert!(f.monotonicity_check(&rat(1, 3), &rat(2, 1)).unwrap());
        let g = finite_profile(&[(0, (2, 1))]);
        assert!(g.monotonicity_check(&rat(1, 5), &rat(9, 2)).unwrap());
        let h = finite_profile(&[(3, (0, 1))]);
        assert!(h.monotonicity_check(&rat(0, 1), &rat(1, 1)).unwrap());
    }

    #[test]
    fn monotonicity_inconclusive_under_truncation() {
        let f = CoefficientProfile::new(
            vec![(0, ExtRat::finite(rat(1, 1)).unwrap())],
            Tail::Truncated(0),
        )
        .unwrap();
        // v at small s is not certified, so the check must refuse
        assert!(matches!(
            f.monotonicity_check(&rat(1, 100), &rat(1, 2)),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn frobenius_pullback_divides_valuations() {
        let f = finite_profile(&[(0, (1, 1)), (1, (0, 1))]);
        let g = f.frobenius_pullback(2).unwrap();
        assert_eq!(
            g.entries(),
            &[
                (0, ExtRat::from_ratio(1, 2)),
                (1, ExtRat::zero()),
            ]
        );
        // functional equation at t = 1/4
        let t = rat(1, 4);
        let lhs = g.gauss_valuation(&t).unwrap().value;
        let rhs = f.gauss_valuation(&(rat(2, 1) * &t)).unwrap().value / rat(2, 1);
        assert_eq!(lhs, rat(1, 4));
        assert_eq!(lhs, rhs);

        // valuation-0 coefficients are fixed
        let h = finite_profile(&[(3, (0, 1))]);
        assert_eq!(h.frobenius_pullback(5).unwrap(), h);

        // scalar case: v = p·q maps to q
        let k = finite_profile(&[(0, (6, 1))]);
        assert_eq!(
            k.frobenius_pullback(3).unwrap().entries()[0].1,
            ExtRat::from_integer(2)
        );
        assert!(f.frobenius_pullback(1).is_err());
    }

    #[test]
    fn zero_element_rejected_where_required() {
        let z = CoefficientProfile::zero();
        assert!(matches!(
            z.gauss_valuation(&rat(1, 1)),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn explicit_infinity_entries_are_skipped() {
        let f = CoefficientProfile::new(
            vec![
                (0, ExtRat::Infinity),
                (2, ExtRat::finite(rat(1, 1)).unwrap()),
            ],
            Tail::Finite,
        )
        .unwrap();
        let r = f.gauss_valuation(&rat(1, 1)).unwrap();
        assert_eq!(r.value, rat(3, 1));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let v = ExtRat::zero();
        assert!(CoefficientProfile::new(
            vec![(1, v.clone()), (1, v.clone())],
            Tail::Finite
        )
        .is_err());
        assert!(CoefficientProfile::new(
            vec![(5, v.clone())],
            Tail::Truncated(3)
        )
        .is_err());
        assert!(CoefficientProfile::new(vec![(0, ExtRat::Infinity)], Tail::Finite).is_err());
        assert!(
            CoefficientProfile::new(vec![], Tail::Truncated(3)).is_err(),
            "all-unknown truncated profile is indeterminate"
        );
    }

    #[test]
    fn json_round_trip() {
        let f = CoefficientProfile::new(
            vec![
                (0, ExtRat::finite(rat(1, 1)).unwrap()),
                (1, ExtRat::Infinity),
                (4, ExtRat::finite(rat(1, 2)).unwrap()),
            ],
            Tail::Truncated(6),
        )
        .unwrap();
        let json = f.to_json();
        assert!(json.contains("\"truncated\": 6"));
        let back = CoefficientProfile::from_json(&json).unwrap();
        assert_eq!(f, back);

        let g = finite_profile(&[(3, (0, 1))]);
        let back = CoefficientProfile::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }
}
