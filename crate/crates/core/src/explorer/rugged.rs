//! Rugged-space verification.
//!
//! A space is rugged when the span of `ran(J - J)` is the whole dual; the
//! argument is carried by the interval pattern of
//! `J e_1 - J e_1 + J e_2 - J e_2` for two disjointly supported unit vectors:
//! `{0}` per generator on its own support, `[-2, 2]` on the supports of the
//! pair, and `[-4, 4]` everywhere else, so `[-2, 2]` is contained in every
//! coordinate.

use serde::Serialize;

use crate::boxes::{DualBox, Interval};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::{PrimalVec, SpaceSpec};

/// Interval pattern of the rugged-space construction.
#[derive(Debug, Clone, Serialize)]
pub struct RuggednessReport<R: Real> {
    /// Cells per generator block (1 on the sequence preset).
    pub generator_support: usize,
    /// `(J e_1 - J e_1)` on the support of `e_1`: the singleton `{0}`.
    pub single_own: Interval<R>,
    /// `(J e_1 - J e_1)` away from the support: `[-2, 2]`.
    pub single_other: Interval<R>,
    /// The single-generator difference alone cannot contain `[-2, 2]`.
    pub single_passed: bool,
    /// Full sum on the generator supports: `[-2, 2]`.
    pub sum_on_supports: Interval<R>,
    /// Full sum elsewhere: `[-4, 4]`.
    pub sum_elsewhere: Interval<R>,
    /// `[-2, 2]` contained in every coordinate of the full sum.
    pub passed: bool,
}

/// Build the two disjoint unit-norm generators for the preset and check the
/// containment pattern.
///
/// On the l1 preset the generators are `e_1` and `e_2` (any `K >= 2`); on the
/// grid they are block functions of unit norm on the first and last third of
/// the cells (`K >= 3`).
pub fn ruggedness_check<R: Real>(space: &SpaceSpec<R>) -> Result<RuggednessReport<R>> {
    let k = space.head_dim();
    let (e1, e2, block) = if space.has_tail() {
        if k < 2 {
            return Err(Error::GridTooSmall { need: 2, got: k });
        }
        (space.unit_vec(0, R::one()), space.unit_vec(1, R::one()), 1)
    } else {
        if k < 3 {
            return Err(Error::GridTooSmall { need: 3, got: k });
        }
        let j = (k / 3).max(1);
        let c = R::of(k as f64) / R::of(j as f64);
        let mut a = vec![R::zero(); k];
        let mut b = vec![R::zero(); k];
        for i in 0..j {
            a[i] = c;
            b[k - 1 - i] = c;
        }
        (PrimalVec::new(space, a)?, PrimalVec::new(space, b)?, j)
    };
    debug_assert!((e1.l1_norm() - R::one()).abs() <= R::of(1e-12));
    debug_assert!((e2.l1_norm() - R::one()).abs() <= R::of(1e-12));

    let d1 = DualBox::minkowski(&e1.duality_box(), &e1.duality_box(), -1)?;
    let d2 = DualBox::minkowski(&e2.duality_box(), &e2.duality_box(), -1)?;
    let sum = DualBox::minkowski(&d1, &d2, 1)?;

    let two = R::of(2.0);
    let elsewhere = if let Some(t) = sum.tail() {
        t
    } else {
        // Middle cell of the grid; exists because 2 * block <= K fails only
        // when the blocks touch, in which case the support interval stands in.
        sum.head()[(k / 2).min(k - 1)]
    };

    // Non-dyadic weights leave ~1e-15 of roundoff on the generator norms, so
    // the containment is checked with a matching tolerance.
    let tol = R::of(1e-12);
    let contains = |b: &DualBox<R>| {
        b.head()
            .iter()
            .all(|iv| iv.lo <= -two + tol && two - tol <= iv.hi)
            && b.tail()
                .is_none_or(|iv| iv.lo <= -two + tol && two - tol <= iv.hi)
    };

    Ok(RuggednessReport {
        generator_support: block,
        single_own: d1.head()[0],
        single_other: d1.head()[k - 1],
        single_passed: contains(&d1),
        sum_on_supports: sum.head()[0],
        sum_elsewhere: elsewhere,
        passed: contains(&sum),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_pattern() {
        for k in 2..=5 {
            let space = SpaceSpec::<f64>::l1(k);
            let rep = ruggedness_check(&space).unwrap();
            assert!(rep.passed, "K={k}");
            assert!(!rep.single_passed);
            assert_eq!(rep.single_own, Interval::singleton(0.0));
            assert_eq!(rep.sum_on_supports, Interval::new(-2.0, 2.0));
            assert_eq!(rep.sum_elsewhere, Interval::new(-4.0, 4.0));
        }
    }

    #[test]
    fn grid_pattern_with_thirds() {
        let space = SpaceSpec::<f64>::l1_grid(3);
        let rep = ruggedness_check(&space).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.generator_support, 1);
        assert_eq!(rep.sum_on_supports, Interval::new(-2.0, 2.0));
        assert_eq!(rep.sum_elsewhere, Interval::new(-4.0, 4.0));

        let space = SpaceSpec::<f64>::l1_grid(129);
        let rep = ruggedness_check(&space).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.generator_support, 43);
    }

    #[test]
    fn too_small_grids_are_rejected() {
        assert!(matches!(
            ruggedness_check(&SpaceSpec::<f64>::l1(1)),
            Err(Error::GridTooSmall { need: 2, .. })
        ));
        assert!(matches!(
            ruggedness_check(&SpaceSpec::<f64>::l1_grid(2)),
            Err(Error::GridTooSmall { need: 3, .. })
        ));
    }
}
