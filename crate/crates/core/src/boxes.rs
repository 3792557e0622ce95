//! Closed intervals and axis-aligned dual boxes.
//!
//! A [`DualBox`] stores one closed interval per head coordinate plus an
//! optional tail interval, and represents a coordinate-wise product set of
//! dual vectors.  The image `Jx` of the set-valued duality map is exactly a
//! box of this kind: the coordinate interval is the singleton
//! `{||x|| sign(x_i)}` where `x_i != 0` and `[-||x||, ||x||]` where `x_i = 0`,
//! with the tail interval `[-||x||, ||x||]` when the space has a tail class.
//! Sums, differences and affine images of boxes are again boxes, so sets such
//! as `Ax + lambda Jx` stay exactly representable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::{DualPoint, PrimalVec, SpaceSpec};

/// Closed interval `[lo, hi]`. Singletons are stored as `[v, v]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<R: Real> {
    pub lo: R,
    pub hi: R,
}

impl<R: Real> Interval<R> {
    pub fn new(lo: R, hi: R) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn singleton(v: R) -> Self {
        Interval { lo: v, hi: v }
    }

    /// `[-|r|, |r|]`.
    pub fn symmetric(r: R) -> Self {
        let r = r.abs();
        Interval { lo: -r, hi: r }
    }

    /// Distance from `v` to the interval (zero when inside).
    pub fn dist(&self, v: R) -> R {
        (self.lo - v).max(v - self.hi).max(R::zero())
    }

    pub fn contains(&self, v: R, tol: R) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }

    /// Does this interval contain all of `[lo, hi]`?
    pub fn contains_interval(&self, lo: R, hi: R) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    /// Image under `t -> scale * t` (endpoints swap when `scale < 0`).
    pub fn scale(&self, scale: R) -> Self {
        let a = self.lo * scale;
        let b = self.hi * scale;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn shift(&self, d: R) -> Self {
        Interval {
            lo: self.lo + d,
            hi: self.hi + d,
        }
    }

    /// Minkowski sum.
    pub fn plus(&self, other: &Interval<R>) -> Self {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Minkowski difference `self - other` (set difference of images).
    pub fn minus(&self, other: &Interval<R>) -> Self {
        Interval {
            lo: self.lo - other.hi,
            hi: self.hi - other.lo,
        }
    }

    /// Point of the interval closest to `v`.
    pub fn clamp(&self, v: R) -> R {
        v.max(self.lo).min(self.hi)
    }
}

/// Per-coordinate closed intervals plus an optional tail interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualBox<R: Real> {
    space: SpaceSpec<R>,
    head: Vec<Interval<R>>,
    tail: Option<Interval<R>>,
}

impl<R: Real> DualBox<R> {
    pub fn new(
        space: &SpaceSpec<R>,
        head: Vec<Interval<R>>,
        tail: Option<Interval<R>>,
    ) -> Result<Self> {
        if head.len() != space.head_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.head_dim(),
                got: head.len(),
            });
        }
        if tail.is_some() != space.has_tail() {
            return Err(Error::TailMismatch);
        }
        Ok(DualBox {
            space: space.clone(),
            head,
            tail,
        })
    }

    /// Degenerate box containing only the zero dual vector.
    pub fn zeros(space: &SpaceSpec<R>) -> Self {
        DualBox {
            space: space.clone(),
            head: vec![Interval::singleton(R::zero()); space.head_dim()],
            tail: space.has_tail().then(|| Interval::singleton(R::zero())),
        }
    }

    pub fn space(&self) -> &SpaceSpec<R> {
        &self.space
    }

    pub fn head(&self) -> &[Interval<R>] {
        &self.head
    }

    pub fn tail(&self) -> Option<Interval<R>> {
        self.tail
    }

    /// `min { ||p - y||_inf : p in box }`, computed coordinatewise as the max
    /// of the per-coordinate distances (including the tail pair).
    pub fn distance_sup(&self, y: &DualPoint<R>) -> Result<R> {
        if self.space != *y.space() {
            if self.tail.is_some() != y.tail().is_some() {
                return Err(Error::TailMismatch);
            }
            return Err(Error::SpaceMismatch);
        }
        let mut d = R::zero();
        for (iv, v) in self.head.iter().zip(y.head().iter()) {
            d = d.max(iv.dist(*v));
        }
        if let (Some(iv), Some(t)) = (self.tail, y.tail()) {
            d = d.max(iv.dist(t));
        }
        Ok(d)
    }

    /// Membership of a dual point, coordinatewise within `tol`.
    pub fn contains_point(&self, y: &DualPoint<R>, tol: R) -> Result<bool> {
        if self.space != *y.space() {
            return Err(Error::SpaceMismatch);
        }
        for (iv, v) in self.head.iter().zip(y.head().iter()) {
            if !iv.contains(*v, tol) {
                return Ok(false);
            }
        }
        if let (Some(iv), Some(t)) = (self.tail, y.tail()) {
            if !iv.contains(t, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image under `p -> scale * p + shift`.
    pub fn affine(&self, shift: &DualPoint<R>, scale: R) -> Result<Self> {
        if self.space != *shift.space() {
            return Err(Error::SpaceMismatch);
        }
        let head = self
            .head
            .iter()
            .zip(shift.head().iter())
            .map(|(iv, s)| iv.scale(scale).shift(*s))
            .collect();
        let tail = match (self.tail, shift.tail()) {
            (Some(iv), Some(s)) => Some(iv.scale(scale).shift(s)),
            (None, None) => None,
            _ => unreachable!("same space implies same tail presence"),
        };
        Ok(DualBox {
            space: self.space.clone(),
            head,
            tail,
        })
    }

    /// Minkowski sum (`sign = +1`) or difference (`sign = -1`).
    pub fn minkowski(a: &DualBox<R>, b: &DualBox<R>, sign: i8) -> Result<Self> {
        if a.space != b.space {
            return Err(Error::SpaceMismatch);
        }
        let combine = |x: &Interval<R>, y: &Interval<R>| {
            if sign >= 0 {
                x.plus(y)
            } else {
                x.minus(y)
            }
        };
        let head = a
            .head
            .iter()
            .zip(b.head.iter())
            .map(|(x, y)| combine(x, y))
            .collect();
        let tail = match (a.tail, b.tail) {
            (Some(x), Some(y)) => Some(combine(&x, &y)),
            (None, None) => None,
            _ => unreachable!("same space implies same tail presence"),
        };
        Ok(DualBox {
            space: a.space.clone(),
            head,
            tail,
        })
    }

    /// Does every coordinate interval (and the tail, when present) contain
    /// `[lo, hi]`?
    pub fn contains_interval_everywhere(&self, lo: R, hi: R) -> bool {
        self.head.iter().all(|iv| iv.contains_interval(lo, hi))
            && self.tail.is_none_or(|iv| iv.contains_interval(lo, hi))
    }

    /// Convex combination `sum_j theta_j * box_j` of boxes over one space.
    /// Weights must be nonnegative.
    pub fn convex_combination(boxes: &[DualBox<R>], thetas: &[R]) -> Result<Self> {
        assert_eq!(boxes.len(), thetas.len());
        assert!(!boxes.is_empty());
        let space = boxes[0].space.clone();
        let mut head = vec![Interval::singleton(R::zero()); space.head_dim()];
        let mut tail = space.has_tail().then(|| Interval::singleton(R::zero()));
        for (b, theta) in boxes.iter().zip(thetas) {
            if b.space != space {
                return Err(Error::SpaceMismatch);
            }
            for (acc, iv) in head.iter_mut().zip(b.head.iter()) {
                *acc = acc.plus(&iv.scale(*theta));
            }
            if let (Some(acc), Some(iv)) = (tail.as_mut(), b.tail) {
                *acc = acc.plus(&iv.scale(*theta));
            }
        }
        Ok(DualBox { space, head, tail })
    }

    /// Dual point of the box closest to `y` in sup norm.
    pub fn nearest_point(&self, y: &DualPoint<R>) -> Result<DualPoint<R>> {
        if self.space != *y.space() {
            return Err(Error::SpaceMismatch);
        }
        let head = self
            .head
            .iter()
            .zip(y.head().iter())
            .map(|(iv, v)| iv.clamp(*v))
            .collect();
        let tail = match (self.tail, y.tail()) {
            (Some(iv), Some(t)) => Some(iv.clamp(t)),
            _ => None,
        };
        DualPoint::new(&self.space, head, tail)
    }
}

impl<R: Real> PrimalVec<R> {
    /// Exact box representation of the duality-map image `Jx`.
    pub fn duality_box(&self) -> DualBox<R> {
        let n = self.l1_norm();
        let head = self
            .coeffs()
            .iter()
            .map(|&c| {
                if c != R::zero() {
                    Interval::singleton(n * c.signum())
                } else {
                    Interval::symmetric(n)
                }
            })
            .collect();
        let tail = self.space().has_tail().then(|| Interval::symmetric(n));
        DualBox {
            space: self.space().clone(),
            head,
            tail,
        }
    }
}
