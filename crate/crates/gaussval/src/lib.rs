//! Exact arithmetic for Gauss valuations on coefficient-valuation
//! profiles.
//!
//! The library works with the valuation data `{(i, v(a_i))}` of
//! `π`-expansions `f = Σ [a_i] π^i` over a rank-one valuation ring, never
//! with the ring elements themselves. On that data it implements, with
//! exact rational arithmetic throughout:
//!
//! - the Gauss valuation family `v_s(f) = inf_i (v(a_i) + i·s)` with
//!   truncation-exactness certificates ([`profile`]);
//! - Newton polygons (decreasing convex hulls), their min-plus product
//!   and sum bounds ([`polygon`]);
//! - Legendre transforms of polygons, the full piecewise-linear
//!   description, the involution back, and the node identity
//!   `N(n_i) = -s_i·n_i + L(s_i)` ([`legendre`]);
//! - growth strata: classification of elements by the divergence rate of
//!   `L(t)/t^λ` as `t → 0⁺` ([`strata`]);
//! - certified construction of power-tail profiles approximating
//!   `Σ_{j≥i} j^{-a}` within exponentially small tolerances, the slope
//!   and value estimates, and the threshold verdicts ([`fa`]);
//! - rigorous rational interval arithmetic, integer roots, and series
//!   enclosures backing the above ([`interval`], [`series`]).
//!
//! Everything is immutable and purely functional; all types are `Send`
//! and `Sync`, so evaluations can run concurrently without coordination.
//!
//! The `examples/` directory demonstrates one capability per file; the
//! `gaussval` binary exposes the same operations as subcommands.

pub mod error;
pub mod extrat;
pub mod fa;
pub mod interval;
pub mod legendre;
pub mod plot;
pub mod polygon;
pub mod profile;
pub mod series;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
pub use extrat::ExtRat;
pub use fa::{build_fa, prop4_verdict, reference_fa, FaBuildReport, FaSpec};
pub use legendre::{legendre_full, inverse_legendre, ConcaveTransform};
pub use polygon::{newton_polygon, ConvexProfile, PolygonTail};
pub use profile::{CoefficientProfile, Tail, ValueWithCertificate};
pub use strata::{StratumIndex, StratumVerdict};
