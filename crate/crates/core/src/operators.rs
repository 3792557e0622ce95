//! Bounded linear monotone operators on the model spaces.
//!
//! Two named operators are provided together with their negatives:
//!
//! * the Gossez operator on the l1 preset,
//!   `(Gx)_n = -sum_{k<n} x_k + sum_{k>n} x_k`, whose tail value is `-sigma`
//!   with `sigma = sum_k x_k` — exact for finitely supported vectors because
//!   every coordinate past the support sees the full sum on the left;
//! * the Fitzpatrick-Phelps operator on the L1 grid preset,
//!   `(Fx)(t) = int_0^t x - int_t^1 x`, evaluated at cell midpoints where the
//!   two half-cell contributions cancel, so the discrete operator is a
//!   weighted prefix/suffix transform and exactly skew.
//!
//! A `Matrix` kind exists for regression tests; its monotonicity is sampled,
//! not proven.

use std::sync::Arc;

use serde::Serialize;

use crate::boxes::DualBox;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::{DualPoint, PrimalVec, SpaceSpec};

/// Which operator a spec applies.
#[derive(Debug, Clone)]
pub enum OperatorKind<R: Real> {
    Gossez,
    NegGossez,
    FpGrid,
    NegFpGrid,
    /// Row-major `K x K` matrix mapping head coefficients to head values
    /// (tail value zero when the space has a tail).
    Matrix(Arc<[R]>),
}

impl<R: Real> OperatorKind<R> {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Gossez => "gossez",
            OperatorKind::NegGossez => "neg-gossez",
            OperatorKind::FpGrid => "fp-grid",
            OperatorKind::NegFpGrid => "neg-fp-grid",
            OperatorKind::Matrix(_) => "matrix",
        }
    }
}

/// A bounded linear monotone operator with its declared norm bound and skew
/// flag.
#[derive(Debug, Clone)]
pub struct OperatorSpec<R: Real> {
    kind: OperatorKind<R>,
    space: SpaceSpec<R>,
    norm_bound: R,
    skew: bool,
}

impl<R: Real> OperatorSpec<R> {
    /// Gossez operator; requires the l1 preset (unit weights, tail class).
    pub fn gossez(space: &SpaceSpec<R>) -> Result<Self> {
        if !space.has_tail() || !space.has_unit_weights() {
            return Err(Error::WrongPreset { expected: "l1" });
        }
        Ok(OperatorSpec {
            kind: OperatorKind::Gossez,
            space: space.clone(),
            norm_bound: R::one(),
            skew: true,
        })
    }

    /// Fitzpatrick-Phelps operator on the grid; requires the L1 grid preset.
    pub fn fp_grid(space: &SpaceSpec<R>) -> Result<Self> {
        let w = R::one() / R::of(space.head_dim() as f64);
        let uniform = space.weights().iter().all(|wi| *wi == w);
        if space.has_tail() || !uniform {
            return Err(Error::WrongPreset {
                expected: "l1-grid",
            });
        }
        Ok(OperatorSpec {
            kind: OperatorKind::FpGrid,
            space: space.clone(),
            norm_bound: R::one(),
            skew: true,
        })
    }

    /// Matrix operator for regression tests.
    pub fn matrix(space: &SpaceSpec<R>, rows: Vec<R>, norm_bound: R, skew: bool) -> Result<Self> {
        let k = space.head_dim();
        if rows.len() != k * k {
            return Err(Error::BadMatrixShape { got: rows.len() });
        }
        Ok(OperatorSpec {
            kind: OperatorKind::Matrix(rows.into()),
            space: space.clone(),
            norm_bound,
            skew,
        })
    }

    /// Zero operator on any space.
    pub fn zero(space: &SpaceSpec<R>) -> Self {
        let k = space.head_dim();
        OperatorSpec {
            kind: OperatorKind::Matrix(vec![R::zero(); k * k].into()),
            space: space.clone(),
            norm_bound: R::zero(),
            skew: true,
        }
    }

    /// Operator with `apply` negated; norm bound and skew flag carry over.
    pub fn negate(&self) -> Self {
        let kind = match &self.kind {
            OperatorKind::Gossez => OperatorKind::NegGossez,
            OperatorKind::NegGossez => OperatorKind::Gossez,
            OperatorKind::FpGrid => OperatorKind::NegFpGrid,
            OperatorKind::NegFpGrid => OperatorKind::FpGrid,
            OperatorKind::Matrix(rows) => {
                OperatorKind::Matrix(rows.iter().map(|v| -*v).collect::<Vec<_>>().into())
            }
        };
        OperatorSpec {
            kind,
            space: self.space.clone(),
            norm_bound: self.norm_bound,
            skew: self.skew,
        }
    }

    pub fn kind(&self) -> &OperatorKind<R> {
        &self.kind
    }

    pub fn space(&self) -> &SpaceSpec<R> {
        &self.space
    }

    pub fn norm_bound(&self) -> R {
        self.norm_bound
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    /// Apply the operator to a model vector.
    pub fn apply(&self, x: &PrimalVec<R>) -> DualPoint<R> {
        assert_eq!(
            self.space,
            *x.space(),
            "operator applied to a vector of another space"
        );
        match &self.kind {
            OperatorKind::Gossez => self.prefix_suffix(x, false, R::one()),
            OperatorKind::NegGossez => self.prefix_suffix(x, false, -R::one()),
            OperatorKind::FpGrid => self.prefix_suffix(x, true, R::one()),
            OperatorKind::NegFpGrid => self.prefix_suffix(x, true, -R::one()),
            OperatorKind::Matrix(rows) => {
                let k = self.space.head_dim();
                let head = (0..k)
                    .map(|i| {
                        let row = &rows[i * k..(i + 1) * k];
                        row.iter().zip(x.coeffs()).map(|(m, c)| *m * *c).sum::<R>()
                    })
                    .collect();
                let tail = self.space.has_tail().then_some(R::zero());
                DualPoint::new(&self.space, head, tail).expect("matrix apply shape")
            }
        }
    }

    /// Shared kernel of the Gossez and Fitzpatrick-Phelps applications.
    ///
    /// `flip = false`: head_i = -prefix_{<i} + suffix_{>i} of `x_k` and the
    /// tail value is `-sigma` (Gossez orientation).
    /// `flip = true`: head_i = prefix_{<i} - suffix_{>i} of `w_k x_k`
    /// (integral orientation, no tail).
    fn prefix_suffix(&self, x: &PrimalVec<R>, flip: bool, sign: R) -> DualPoint<R> {
        let k = self.space.head_dim();
        let weights = self.space.weights();
        let mut head = Vec::with_capacity(k);
        let total: R = x.coeffs().iter().zip(weights).map(|(c, w)| *w * *c).sum();
        let mut prefix = R::zero();
        for i in 0..k {
            let wc = weights[i] * x.coeffs()[i];
            let suffix = total - prefix - wc;
            let v = if flip {
                prefix - suffix
            } else {
                suffix - prefix
            };
            head.push(sign * v);
            prefix += wc;
        }
        let tail = self.space.has_tail().then(|| sign * -total);
        DualPoint::new(&self.space, head, tail).expect("prefix/suffix shape")
    }

    /// Exact box representation of `Ax + lambda Jx`.
    pub fn range_box(&self, lambda: R, x: &PrimalVec<R>) -> Result<DualBox<R>> {
        if lambda <= R::zero() {
            return Err(Error::NonPositiveLambda(lambda.as_f64()));
        }
        x.duality_box().affine(&self.apply(x), lambda)
    }

    /// One member of `Ax + lambda Jx`, chosen by a selection of the duality
    /// box: `apply(x) + lambda ||x|| s` with `s_i` forced to `sign(x_i)`
    /// where `x_i != 0` and free in `[-1, 1]` elsewhere.
    pub fn range_point(
        &self,
        lambda: R,
        x: &PrimalVec<R>,
        selection: &Selection<R>,
    ) -> Result<DualPoint<R>> {
        if lambda <= R::zero() {
            return Err(Error::NonPositiveLambda(lambda.as_f64()));
        }
        selection.validate_for(x)?;
        let n = x.l1_norm();
        let jx = selection.dual_point(&self.space)?.scale(n);
        let point = self.apply(x).add_scaled(&jx, lambda)?;
        debug_assert!(self
            .range_box(lambda, x)?
            .contains_point(&point, R::of(1e-9))
            .unwrap_or(false));
        Ok(point)
    }

    /// Does the operator admit a wondrous-half-space certificate in the model
    /// (with the constant `-1` target)?  True for the Gossez and
    /// Fitzpatrick-Phelps kinds and the negative Fitzpatrick-Phelps; false
    /// for the negative Gossez, whose perturbed range is dense, and for
    /// matrix operators.
    pub fn whs_holds_in_model(&self) -> bool {
        matches!(
            self.kind,
            OperatorKind::Gossez | OperatorKind::FpGrid | OperatorKind::NegFpGrid
        )
    }

    /// Kinds accepted by the certificate sampler (the named operators and
    /// their negatives).
    pub fn whs_certifiable(&self) -> bool {
        !matches!(self.kind, OperatorKind::Matrix(_))
    }

    /// Correction added to the certificate inequality.  Zero for the tail
    /// models (the tail identity is exact); for the grid operators it is the
    /// first (resp. last) cell term `w |x_cell|` replacing the vanishing
    /// integral of the continuum argument.
    pub fn whs_slack(&self, x: &PrimalVec<R>) -> R {
        match self.kind {
            OperatorKind::FpGrid => self.space.weight(0) * x.coeffs()[0].abs(),
            OperatorKind::NegFpGrid => {
                let last = self.space.head_dim() - 1;
                self.space.weight(last) * x.coeffs()[last].abs()
            }
            _ => R::zero(),
        }
    }

    /// Correction subtracted from the distance floor `m(lambda)`.  Zero for
    /// the Gossez tail model, where the box distance equals the true
    /// infinite-dimensional distance.  For the grid operators the midpoint
    /// values of the prefix transform deviate from its in-cell extremes by at
    /// most `w max_i |x_i|`, and the floor transfers with that correction.
    pub fn floor_slack(&self, x: &PrimalVec<R>) -> Option<R> {
        match self.kind {
            OperatorKind::Gossez => Some(R::zero()),
            OperatorKind::FpGrid | OperatorKind::NegFpGrid => {
                let max_c = x.coeffs().iter().fold(R::zero(), |acc, c| acc.max(c.abs()));
                Some(self.space.weight(0) * max_c)
            }
            _ => None,
        }
    }
}

/// A selection of the duality box: per-coordinate values in `[-1, 1]` plus a
/// tail value when the space has a tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection<R: Real> {
    pub head: Vec<R>,
    pub tail: Option<R>,
}

impl<R: Real> Selection<R> {
    pub fn new(head: Vec<R>, tail: Option<R>) -> Self {
        Selection { head, tail }
    }

    /// Constant selection compatible with the space shape.
    pub fn constant(space: &SpaceSpec<R>, v: R) -> Self {
        Selection {
            head: vec![v; space.head_dim()],
            tail: space.has_tail().then_some(v),
        }
    }

    /// The admissibility check used by [`OperatorSpec::range_point`].
    pub fn validate_for(&self, x: &PrimalVec<R>) -> Result<()> {
        let space = x.space();
        if self.head.len() != space.head_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.head_dim(),
                got: self.head.len(),
            });
        }
        if self.tail.is_some() != space.has_tail() {
            return Err(Error::TailMismatch);
        }
        let slack = R::of(1e-9);
        for (i, (s, c)) in self.head.iter().zip(x.coeffs()).enumerate() {
            if *c != R::zero() {
                if *s != c.signum() {
                    return Err(Error::InvalidSelection(format!(
                        "coordinate {i} must equal sign(x_i)"
                    )));
                }
            } else if s.abs() > R::one() + slack {
                return Err(Error::InvalidSelection(format!(
                    "coordinate {i} leaves [-1, 1]"
                )));
            }
        }
        if let Some(t) = self.tail {
            if t.abs() > R::one() + slack {
                return Err(Error::InvalidSelection("tail leaves [-1, 1]".into()));
            }
        }
        Ok(())
    }

    fn dual_point(&self, space: &SpaceSpec<R>) -> Result<DualPoint<R>> {
        let clamp = |v: R| v.max(-R::one()).min(R::one());
        DualPoint::new(
            space,
            self.head.iter().map(|s| clamp(*s)).collect(),
            self.tail.map(clamp),
        )
    }
}
