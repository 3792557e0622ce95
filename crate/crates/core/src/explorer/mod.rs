//! Derivative-free exploration of the perturbed ranges.
//!
//! The searches minimize the exact box distance from a target dual vector to
//! `Ax + lambda Jx` over model vectors `x` (a piecewise linear, nonconvex
//! objective), construct convex-combination witnesses whose combination gets
//! strictly closer to the target than the certified floor on single range
//! points, and verify the interval pattern behind the rugged-space property.

mod report;
mod rugged;
mod search;
mod witness;

pub use report::{convexity_gap_report, GapReport, GapRow};
pub use rugged::{ruggedness_check, RuggednessReport};
pub use search::{distance_minimize, SearchOutcome};
pub use witness::{build_midpoint_witness, combo_witness_search, scale_witness};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::Selection;
use crate::scalar::Real;
use crate::space::PrimalVec;

/// Knobs of the multi-start pattern searches.
#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig<R: Real> {
    pub head_dim: usize,
    pub lambda: R,
    pub restarts: usize,
    /// Poll iterations per restart. Zero evaluates the start points only.
    pub budget: usize,
    pub initial_step: R,
    pub shrink: R,
    pub seed: u64,
    /// Number of range points combined by the witness search.
    pub witness_order: usize,
}

impl<R: Real> SearchConfig<R> {
    pub fn new(head_dim: usize, lambda: R) -> Self {
        SearchConfig {
            head_dim,
            lambda,
            restarts: 8,
            budget: 60,
            initial_step: R::one(),
            shrink: R::of(0.5),
            seed: 0,
            witness_order: 2,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_order(mut self, k: usize) -> Self {
        self.witness_order = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.head_dim == 0 {
            return Err(Error::InvalidConfig("head_dim must be >= 1".into()));
        }
        if self.lambda <= R::zero() {
            return Err(Error::NonPositiveLambda(self.lambda.as_f64()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        if !(self.shrink > R::zero() && self.shrink < R::one()) {
            return Err(Error::InvalidConfig("shrink must lie in (0, 1)".into()));
        }
        if self.initial_step <= R::zero() {
            return Err(Error::InvalidConfig("initial_step must be > 0".into()));
        }
        if self.witness_order == 0 {
            return Err(Error::InvalidConfig("witness_order must be >= 1".into()));
        }
        Ok(())
    }
}

/// One range point of a witness: the vector, the duality-box selection, and
/// the combination weight.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessPoint<R: Real> {
    pub x: PrimalVec<R>,
    pub selection: Selection<R>,
    pub theta: R,
}

/// A certified nonconvexity witness: range points whose convex combination
/// beats the distance floor that every single range point respects.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord<R: Real> {
    pub lambda: R,
    pub points: Vec<WitnessPoint<R>>,
    /// `|| sum_j theta_j u_j - f* ||_inf` for the realized range points.
    pub combo_distance: R,
    /// `m(lambda) - model_slack`.
    pub floor: R,
    pub model_slack: R,
    /// `|| u_j - f* ||_inf` per point.
    pub single_distances: Vec<R>,
    pub certified: bool,
}

/// Deterministic per-start seed derivation.
pub(crate) fn derive_seed(master: u64, index: usize) -> u64 {
    splitmix64(master ^ splitmix64(index as u64 + 1))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
