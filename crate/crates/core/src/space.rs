//! Weighted l1 model spaces.
//!
//! A [`SpaceSpec`] is a weighted l1 space over `K` head coordinates, with an
//! optional *tail class*.  When the tail is present, a vector of the space is
//! understood as a finitely supported sequence in l1: every coordinate past
//! `K` is zero, and dual vectors carry one extra value shared by all of those
//! coordinates.  This makes the sup norm, the pairing and the duality map of
//! the infinite-dimensional space exactly computable on model points.
//!
//! Two presets are provided:
//! * [`SpaceSpec::l1`] — unit weights with a tail, modelling l1 itself;
//! * [`SpaceSpec::l1_grid`] — weights `1/K` without a tail, modelling the
//!   space of step functions on `[0,1]` with `K` equal cells.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Description of a weighted l1 model space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceSpec<R: Real> {
    head_dim: usize,
    weights: Vec<R>,
    has_tail: bool,
}

impl<R: Real> SpaceSpec<R> {
    /// l1 preset: unit weights, explicit tail class.
    pub fn l1(head_dim: usize) -> Self {
        SpaceSpec {
            head_dim,
            weights: vec![R::one(); head_dim],
            has_tail: true,
        }
    }

    /// L1 grid preset: `K` equal cells of width `1/K`, no tail.
    pub fn l1_grid(head_dim: usize) -> Self {
        let w = R::one() / R::of(head_dim as f64);
        SpaceSpec {
            head_dim,
            weights: vec![w; head_dim],
            has_tail: false,
        }
    }

    /// General weighted space. Weights must be nonempty and strictly positive.
    pub fn custom(weights: Vec<R>, has_tail: bool) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| *w <= R::zero()) {
            return Err(Error::InvalidWeights);
        }
        Ok(SpaceSpec {
            head_dim: weights.len(),
            weights,
            has_tail,
        })
    }

    pub fn head_dim(&self) -> usize {
        self.head_dim
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> R {
        self.weights[i]
    }

    pub fn has_tail(&self) -> bool {
        self.has_tail
    }

    /// True when all weights equal one (the l1 preset shape).
    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|w| *w == R::one())
    }

    /// Zero vector of the space.
    pub fn zero_vec(&self) -> PrimalVec<R> {
        PrimalVec {
            space: self.clone(),
            coeffs: vec![R::zero(); self.head_dim],
        }
    }

    /// `scale * e_i` for the canonical unit vector `e_i` (0-based index).
    pub fn unit_vec(&self, i: usize, scale: R) -> PrimalVec<R> {
        assert!(i < self.head_dim, "unit vector index out of range");
        let mut coeffs = vec![R::zero(); self.head_dim];
        coeffs[i] = scale;
        PrimalVec {
            space: self.clone(),
            coeffs,
        }
    }
}

/// Finitely supported primal vector: `K` head coefficients, zero beyond.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimalVec<R: Real> {
    space: SpaceSpec<R>,
    coeffs: Vec<R>,
}

impl<R: Real> PrimalVec<R> {
    pub fn new(space: &SpaceSpec<R>, coeffs: Vec<R>) -> Result<Self> {
        if coeffs.len() != space.head_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.head_dim(),
                got: coeffs.len(),
            });
        }
        Ok(PrimalVec {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn space(&self) -> &SpaceSpec<R> {
        &self.space
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Weighted l1 norm: `sum_i w_i |x_i|`.
    pub fn l1_norm(&self) -> R {
        self.coeffs
            .iter()
            .zip(self.space.weights())
            .map(|(x, w)| *w * x.abs())
            .sum()
    }

    /// Dual pairing `<x, y> = sum_i w_i x_i y_i`.
    ///
    /// The tail of `y` contributes nothing because `x` is finitely supported.
    pub fn pair(&self, y: &DualPoint<R>) -> Result<R> {
        if self.space != y.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(y.head.iter())
            .zip(self.space.weights())
            .map(|((x, y), w)| *w * *x * *y)
            .sum())
    }

    pub fn scale(&self, alpha: R) -> Self {
        PrimalVec {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| *c * alpha).collect(),
        }
    }

    /// Copy with one coefficient replaced.
    pub fn with_coeff(&self, i: usize, value: R) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[i] = value;
        PrimalVec {
            space: self.space.clone(),
            coeffs,
        }
    }
}

/// Bounded dual vector: `K` head values plus an optional tail value shared by
/// all coordinates past the head.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPoint<R: Real> {
    space: SpaceSpec<R>,
    head: Vec<R>,
    tail: Option<R>,
}

impl<R: Real> DualPoint<R> {
    pub fn new(space: &SpaceSpec<R>, head: Vec<R>, tail: Option<R>) -> Result<Self> {
        if head.len() != space.head_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.head_dim(),
                got: head.len(),
            });
        }
        if tail.is_some() != space.has_tail() {
            return Err(Error::TailMismatch);
        }
        Ok(DualPoint {
            space: space.clone(),
            head,
            tail,
        })
    }

    /// Constant dual vector (all head values and the tail, if any, equal `v`).
    pub fn constant(space: &SpaceSpec<R>, v: R) -> Self {
        DualPoint {
            space: space.clone(),
            head: vec![v; space.head_dim()],
            tail: space.has_tail().then_some(v),
        }
    }

    pub fn zero(space: &SpaceSpec<R>) -> Self {
        Self::constant(space, R::zero())
    }

    pub fn space(&self) -> &SpaceSpec<R> {
        &self.space
    }

    pub fn head(&self) -> &[R] {
        &self.head
    }

    pub fn tail(&self) -> Option<R> {
        self.tail
    }

    /// Sup norm over head values and the tail value, if present.
    pub fn sup_norm(&self) -> R {
        let head = self.head.iter().fold(R::zero(), |acc, v| acc.max(v.abs()));
        match self.tail {
            Some(t) => head.max(t.abs()),
            None => head,
        }
    }

    pub fn scale(&self, alpha: R) -> Self {
        DualPoint {
            space: self.space.clone(),
            head: self.head.iter().map(|v| *v * alpha).collect(),
            tail: self.tail.map(|t| t * alpha),
        }
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &DualPoint<R>, alpha: R) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(DualPoint {
            space: self.space.clone(),
            head: self
                .head
                .iter()
                .zip(other.head.iter())
                .map(|(a, b)| *a + alpha * *b)
                .collect(),
            tail: match (self.tail, other.tail) {
                (Some(a), Some(b)) => Some(a + alpha * b),
                (None, None) => None,
                _ => unreachable!("same space implies same tail presence"),
            },
        })
    }

    /// Sup distance `||self - other||_inf`.
    pub fn sup_dist(&self, other: &DualPoint<R>) -> Result<R> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut d = R::zero();
        for (a, b) in self.head.iter().zip(other.head.iter()) {
            d = d.max((*a - *b).abs());
        }
        if let (Some(a), Some(b)) = (self.tail, other.tail) {
            d = d.max((a - b).abs());
        }
        Ok(d)
    }
}

/// Duality-map membership test from the characterization
/// `y in Jx  <=>  <x,y> = ||x||^2 = ||y||^2`.
///
/// Both equalities are checked with the absolute tolerance `tol`; this is the
/// independent oracle against the box construction in [`crate::boxes`].
pub fn j_membership<R: Real>(x: &PrimalVec<R>, y: &DualPoint<R>, tol: R) -> Result<bool> {
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch);
    }
    let pair = x.pair(y)?;
    let n2 = {
        let n = x.l1_norm();
        n * n
    };
    let m2 = {
        let m = y.sup_norm();
        m * m
    };
    Ok((pair - n2).abs() <= tol && (m2 - n2).abs() <= tol)
}

/// Default absolute tolerance for [`j_membership`].
pub fn default_membership_tol<R: Real>() -> R {
    R::of(1e-10)
}
