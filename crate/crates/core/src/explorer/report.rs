//! Convexity gap report: the floor and threshold at one `lambda` next to the
//! best single range point and the best convex combinations found.

use serde::Serialize;

use crate::bounds::{eps_threshold, m_of_lambda};
use crate::error::Result;
use crate::operators::OperatorSpec;
use crate::scalar::Real;
use crate::space::DualPoint;

use super::search::distance_minimize;
use super::witness::{build_midpoint_witness, combo_witness_search};
use super::{SearchConfig, WitnessRecord};

/// One row of the gap table.
#[derive(Debug, Clone, Serialize)]
pub struct GapRow<R: Real> {
    pub lambda: R,
    pub m_lambda: R,
    pub threshold: R,
    /// Floor of the reported witness, `m(lambda) - model_slack`.
    pub floor: R,
    pub model_slack: R,
    pub best_single: R,
    /// Distance of the explicit two-point midpoint witness, when feasible.
    pub midpoint_distance: Option<R>,
    pub best_combo_2: R,
    pub best_combo_3: R,
    pub best_combo_4: R,
    pub certified: bool,
}

/// Gap report: the row plus the witnesses behind it.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport<R: Real> {
    pub row: GapRow<R>,
    /// Best witness per combination order (2, 3, 4).
    pub combo_witnesses: Vec<WitnessRecord<R>>,
    pub midpoint_witness: Option<WitnessRecord<R>>,
    pub floor_violations: usize,
}

/// Run the single-point search, the explicit midpoint witness when feasible,
/// and the combination search for orders 2..4.
pub fn convexity_gap_report<R: Real>(
    op: &OperatorSpec<R>,
    cfg: &SearchConfig<R>,
) -> Result<GapReport<R>> {
    cfg.validate()?;
    let lambda = cfg.lambda;
    let f_star = DualPoint::constant(op.space(), -R::one());

    let single = distance_minimize(op, &f_star, cfg)?;
    let midpoint_witness = build_midpoint_witness(op, lambda, None).ok();

    let mut combo_witnesses = Vec::with_capacity(3);
    for k in 2..=4 {
        combo_witnesses.push(combo_witness_search(
            op,
            &f_star,
            &cfg.clone().with_order(k),
        )?);
    }

    let certified_records = midpoint_witness
        .iter()
        .chain(combo_witnesses.iter())
        .filter(|w| w.certified);
    let best_certified = certified_records.min_by(|a, b| {
        a.combo_distance
            .partial_cmp(&b.combo_distance)
            .expect("distances are not NaN")
    });
    let (floor, model_slack, certified) = match best_certified {
        Some(w) => (w.floor, w.model_slack, true),
        None => (m_of_lambda(lambda)?, R::zero(), false),
    };

    let row = GapRow {
        lambda,
        m_lambda: m_of_lambda(lambda)?,
        threshold: eps_threshold(lambda, R::one(), R::one())?,
        floor,
        model_slack,
        best_single: single.best_distance,
        midpoint_distance: midpoint_witness.as_ref().map(|w| w.combo_distance),
        best_combo_2: combo_witnesses[0].combo_distance,
        best_combo_3: combo_witnesses[1].combo_distance,
        best_combo_4: combo_witnesses[2].combo_distance,
        certified,
    };
    Ok(GapReport {
        row,
        combo_witnesses,
        midpoint_witness,
        floor_violations: single.floor_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;

    #[test]
    fn gossez_lambda_four_is_certified() {
        let space = SpaceSpec::<f64>::l1(6);
        let g = OperatorSpec::gossez(&space).unwrap();
        let mut cfg = SearchConfig::new(6, 4.0).with_seed(1);
        cfg.restarts = 4;
        cfg.budget = 25;
        let rep = convexity_gap_report(&g, &cfg).unwrap();
        assert!(rep.row.certified);
        assert!(rep.row.best_single >= 0.0456676 - 1e-6);
        assert!(rep.row.best_combo_2 <= 1e-9);
        assert_eq!(rep.floor_violations, 0);
        assert_eq!(
            rep.midpoint_witness.as_ref().map(|w| w.certified),
            Some(true)
        );
    }

    #[test]
    fn small_lambda_report_is_soft() {
        let space = SpaceSpec::<f64>::l1(5);
        let g = OperatorSpec::gossez(&space).unwrap();
        let mut cfg = SearchConfig::new(5, 0.5).with_seed(2);
        cfg.restarts = 3;
        cfg.budget = 15;
        let rep = convexity_gap_report(&g, &cfg).unwrap();
        // No midpoint witness below 3/2, and no certification asserted.
        assert!(rep.midpoint_witness.is_none());
        assert!(rep.row.best_single >= rep.row.m_lambda - 1e-9);
        assert_eq!(rep.floor_violations, 0);
    }
}
