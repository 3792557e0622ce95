//! Weighted l1 model spaces with exact set-valued duality boxes, skew
//! prefix/suffix operators, distance floors, and nonconvexity witnesses.
//!
//! The crate models two spaces with one code path: the sequence space l1
//! (unit weights plus an explicit *tail class*, so finitely supported vectors
//! reproduce the infinite-dimensional duality map exactly) and the space of
//! step functions on `[0, 1]` (uniform weights `1/K`, no tail).  On top of
//! the spaces sit:
//!
//! * [`boxes`] — interval arithmetic and the exact box representation of the
//!   duality-map image `Jx` and of `Ax + lambda Jx`;
//! * [`operators`] — the Gossez and Fitzpatrick-Phelps operators, their
//!   negatives, and matrix operators for regression tests;
//! * [`bounds`] — the distance floor `m(lambda)`, its quadratic-root route,
//!   the certificate inequalities, and identity checks;
//! * [`explorer`] — derivative-free searches for near-closest range points
//!   and convex-combination nonconvexity witnesses;
//! * [`verify`] — named check suites for the CLI harness.
//!
//! All numeric code is generic over [`scalar::Real`]; the `*64` aliases fix
//! the default `f64` instantiation.

pub mod bounds;
pub mod boxes;
pub mod error;
pub mod explorer;
pub mod operators;
pub mod scalar;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations, the precision used by the CLI and the test suites.
pub type Space64 = space::SpaceSpec<f64>;
pub type Primal64 = space::PrimalVec<f64>;
pub type Dual64 = space::DualPoint<f64>;
pub type Interval64 = boxes::Interval<f64>;
pub type DualBox64 = boxes::DualBox<f64>;
pub type Operator64 = operators::OperatorSpec<f64>;
pub type Selection64 = operators::Selection<f64>;
pub type SearchConfig64 = explorer::SearchConfig<f64>;
pub type WitnessRecord64 = explorer::WitnessRecord<f64>;

/// `f32` instantiations.
pub type Space32 = space::SpaceSpec<f32>;
pub type Primal32 = space::PrimalVec<f32>;
pub type Dual32 = space::DualPoint<f32>;
