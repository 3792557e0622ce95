//! Named check suites driven by the CLI `verify` command.
//!
//! Each suite runs a batch of sampled or algebraic checks at `f64` precision
//! and reports one [`CheckResult`] per check, with the worst residual seen.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    gap_identity_check, log_grid, m_of_lambda, m_properties_scan, pairing_lower_bound,
    pointwise_floor_check, whs_certify_sample, whs_quadratic_roots,
};
use crate::error::{Error, Result};
use crate::explorer::ruggedness_check;
use crate::operators::OperatorSpec;
use crate::space::{j_membership, DualPoint, PrimalVec, SpaceSpec};

/// Outcome of a single named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, residual: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            residual,
            detail,
        }
    }
}

/// Suite selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Space,
    Skew,
    Operators,
    Bounds,
    Whs,
    Rugged,
    All,
}

impl Suite {
    pub const NAMES: &'static [&'static str] = &[
        "space",
        "skew",
        "operators",
        "bounds",
        "whs",
        "rugged",
        "all",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "space" => Ok(Suite::Space),
            "skew" => Ok(Suite::Skew),
            "operators" => Ok(Suite::Operators),
            "bounds" => Ok(Suite::Bounds),
            "whs" => Ok(Suite::Whs),
            "rugged" => Ok(Suite::Rugged),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidConfig(format!(
                "unknown suite {other:?}; expected one of {:?}",
                Suite::NAMES
            ))),
        }
    }
}

/// Parameters shared by the sampled suites.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyParams {
    pub seed: u64,
    pub head_dim: usize,
    pub samples: usize,
    pub lambdas: Vec<f64>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            seed: 0,
            head_dim: 50,
            samples: 2000,
            lambdas: vec![0.5, 1.0, 2.0, 4.0, 8.0],
        }
    }
}

/// Run one suite (or all of them) and collect per-check results.
pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match suite {
        Suite::Space => space_suite(params, &mut out)?,
        Suite::Skew => skew_suite(params, &mut out)?,
        Suite::Operators => operators_suite(params, &mut out)?,
        Suite::Bounds => bounds_suite(&mut out)?,
        Suite::Whs => whs_suite(params, &mut out)?,
        Suite::Rugged => rugged_suite(params, &mut out)?,
        Suite::All => {
            space_suite(params, &mut out)?;
            skew_suite(params, &mut out)?;
            operators_suite(params, &mut out)?;
            bounds_suite(&mut out)?;
            whs_suite(params, &mut out)?;
            rugged_suite(params, &mut out)?;
        }
    }
    Ok(out)
}

/// Random vector with coordinates either zero or bounded away from zero, so
/// membership margins cannot collapse below the check tolerances.
fn sample_vec(space: &SpaceSpec<f64>, rng: &mut ChaCha8Rng) -> PrimalVec<f64> {
    let coeffs = (0..space.head_dim())
        .map(|_| {
            if rng.gen_bool(0.4) {
                0.0
            } else {
                let mag = rng.gen_range(0.5..2.0);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            }
        })
        .collect();
    PrimalVec::new(space, coeffs).expect("matching dimension")
}

fn space_suite(params: &VerifyParams, out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut disagreements = 0usize;
    let mut checks = 0usize;
    let grid_factors = [-1.25, -1.0, -0.75, 0.0, 0.75, 1.0, 1.25];

    for _ in 0..200 {
        let k = rng.gen_range(1..=4);
        let space = SpaceSpec::<f64>::l1(k);
        let x = sample_vec(&space, &mut rng);
        let b = x.duality_box();
        let n = x.l1_norm();

        // Points sampled inside the box must pass the membership oracle.
        for _ in 0..20 {
            let head = b
                .head()
                .iter()
                .map(|iv| iv.lo + (iv.hi - iv.lo) * rng.gen_range(0.0..1.0))
                .collect();
            let tail = b
                .tail()
                .map(|iv| iv.lo + (iv.hi - iv.lo) * rng.gen_range(0.0..1.0));
            let y = DualPoint::new(&space, head, tail)?;
            checks += 1;
            if !j_membership(&x, &y, 1e-10)? {
                disagreements += 1;
            }
        }
        // Grid-sampled points: box membership must agree with the oracle.
        for _ in 0..40 {
            let head = (0..k)
                .map(|_| n * grid_factors[rng.gen_range(0..grid_factors.len())])
                .collect();
            let tail = Some(n * grid_factors[rng.gen_range(0..grid_factors.len())]);
            let y = DualPoint::new(&space, head, tail)?;
            checks += 1;
            let in_box = b.contains_point(&y, 1e-12)?;
            let oracle = j_membership(&x, &y, 1e-10)?;
            if in_box != oracle {
                disagreements += 1;
            }
        }
    }
    out.push(CheckResult::new(
        "duality_box_oracle_equivalence",
        disagreements == 0,
        disagreements as f64,
        format!("{checks} membership comparisons, {disagreements} disagreements"),
    ));

    // Homogeneity of the box under scaling.
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0xABCD);
    for _ in 0..200 {
        let space = SpaceSpec::<f64>::l1(rng.gen_range(1..=4));
        let x = sample_vec(&space, &mut rng);
        for alpha in [-2.0, -1.0, 0.5, 3.0] {
            let scaled = x.scale(alpha).duality_box();
            let base = x.duality_box();
            for (a, b) in scaled.head().iter().zip(base.head()) {
                let e = b.scale(alpha);
                worst = worst.max((a.lo - e.lo).abs()).max((a.hi - e.hi).abs());
            }
        }
    }
    out.push(CheckResult::new(
        "duality_box_homogeneity",
        worst <= 1e-12,
        worst,
        "box(alpha x) == alpha (.) box(x) over alpha in {-2,-1,0.5,3}".into(),
    ));
    Ok(())
}

fn skew_suite(params: &VerifyParams, out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut worst: f64 = 0.0;
    let space = SpaceSpec::<f64>::l1(64);
    let g = OperatorSpec::gossez(&space)?;
    for _ in 0..1000 {
        let x = sample_vec(&space, &mut rng);
        let n2 = x.l1_norm().powi(2).max(1e-300);
        worst = worst.max(x.pair(&g.apply(&x))?.abs() / n2);
    }
    out.push(CheckResult::new(
        "gossez_skew",
        worst <= 1e-12,
        worst,
        "1000 samples at K = 64, |<x, Gx>| / ||x||^2".into(),
    ));

    let mut worst: f64 = 0.0;
    for k in [8usize, 64, 512] {
        let grid = SpaceSpec::<f64>::l1_grid(k);
        let f = OperatorSpec::fp_grid(&grid)?;
        for _ in 0..300 {
            let x = sample_vec(&grid, &mut rng);
            let n2 = x.l1_norm().powi(2).max(1e-300);
            worst = worst.max(x.pair(&f.apply(&x))?.abs() / n2);
        }
    }
    out.push(CheckResult::new(
        "fp_grid_skew",
        worst <= 1e-12,
        worst,
        "K in {8, 64, 512}, |<x, Fx>| / ||x||^2".into(),
    ));
    Ok(())
}

fn operators_suite(params: &VerifyParams, out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let space = SpaceSpec::<f64>::l1(params.head_dim.max(2));
    let g = OperatorSpec::gossez(&space)?;

    let mut worst_norm: f64 = 0.0;
    let mut worst_lin: f64 = 0.0;
    for _ in 0..500 {
        let x = sample_vec(&space, &mut rng);
        let y = sample_vec(&space, &mut rng);
        let n = x.l1_norm();
        if n > 0.0 {
            worst_norm = worst_norm.max(g.apply(&x).sup_norm() / n - 1.0);
        }
        let (alpha, beta): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let combo: Vec<f64> = x
            .coeffs()
            .iter()
            .zip(y.coeffs())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let xc = PrimalVec::new(&space, combo)?;
        let lhs = g.apply(&xc);
        let rhs = g.apply(&x).scale(alpha).add_scaled(&g.apply(&y), beta)?;
        let scale = lhs.sup_norm().max(1.0);
        worst_lin = worst_lin.max(lhs.sup_dist(&rhs)? / scale);
    }
    out.push(CheckResult::new(
        "gossez_norm_bound",
        worst_norm <= 1e-12,
        worst_norm.max(0.0),
        "sup norm of Gx never exceeds ||x||_1".into(),
    ));
    out.push(CheckResult::new(
        "gossez_linearity",
        worst_lin <= 1e-12,
        worst_lin,
        "apply(alpha x + beta y) == alpha apply(x) + beta apply(y)".into(),
    ));

    // Discrete consistency of the grid transform with its continuum values.
    let mut prev = f64::INFINITY;
    let mut ok = true;
    let mut worst_rate: f64 = 0.0;
    for k in [8usize, 64, 512] {
        let grid = SpaceSpec::<f64>::l1_grid(k);
        let f = OperatorSpec::fp_grid(&grid)?;
        let ramp: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64).collect();
        let fx = f.apply(&PrimalVec::new(&grid, ramp)?);
        let mut err: f64 = 0.0;
        for (i, v) in fx.head().iter().enumerate() {
            let t = (i as f64 + 0.5) / k as f64;
            err = err.max((v - (t * t - 0.5)).abs());
        }
        ok = ok && err <= 0.5 / k as f64 && err < prev;
        worst_rate = worst_rate.max(err * k as f64);
        prev = err;
    }
    out.push(CheckResult::new(
        "fp_grid_consistency",
        ok,
        worst_rate,
        "midpoint transform of x(t) = t converges at rate O(1/K)".into(),
    ));
    Ok(())
}

fn bounds_suite(out: &mut Vec<CheckResult>) -> Result<()> {
    let grid = log_grid(0.01, 100.0, 200);
    let mut worst_root: f64 = 0.0;
    let mut worst_ident: f64 = 0.0;
    let mut order_ok = true;
    for &l in &grid {
        let m: f64 = m_of_lambda(l)?;
        let (small, _): (f64, f64) = whs_quadratic_roots(l)?;
        worst_root = worst_root.max((m - small).abs() / small.abs().max(1e-300));
        let rep = gap_identity_check(l)?;
        worst_ident = worst_ident.max(rep.max_residual());
        order_ok = order_ok && rep.tau_positive && m > 0.0 && m < 2.0 * l / (1.0 + 3.0 * l);
    }
    out.push(CheckResult::new(
        "m_equals_smaller_root",
        worst_root <= 1e-10,
        worst_root,
        "closed form vs quadratic root over 200-point log grid".into(),
    ));
    out.push(CheckResult::new(
        "gap_identities",
        worst_ident <= 1e-9 && order_ok,
        worst_ident,
        "threshold/floor identities, tau > 0, 0 < m < threshold".into(),
    ));

    let scan = m_properties_scan(&log_grid(0.001, 1000.0, 400))?;
    let argmax_err = (scan.argmax - (3.0 + 15f64.sqrt()) / 6.0).abs();
    let value_err = (scan.max_value - 0.06349).abs();
    out.push(CheckResult::new(
        "m_peak_location",
        argmax_err <= 1e-3
            && value_err <= 5e-5
            && scan.increasing_before
            && scan.decreasing_after
            && scan.left_end_value < 0.005
            && scan.right_end_value < 0.005,
        argmax_err.max(value_err),
        format!(
            "argmax {:.6}, max {:.6}, monotone on both sides, decays at ends",
            scan.argmax, scan.max_value
        ),
    ));
    Ok(())
}

fn whs_suite(params: &VerifyParams, out: &mut Vec<CheckResult>) -> Result<()> {
    let gossez_space = SpaceSpec::<f64>::l1(params.head_dim.max(2));
    let g = OperatorSpec::gossez(&gossez_space)?;
    let g_star = DualPoint::constant(&gossez_space, -1.0);
    let grid = SpaceSpec::<f64>::l1_grid(128);
    let f = OperatorSpec::fp_grid(&grid)?;
    let f_star = DualPoint::constant(&grid, -1.0);

    let mut cert_violations = 0usize;
    let mut floor_violations = 0usize;
    let mut lb_violations = 0usize;
    let mut total = 0usize;
    for &lambda in &params.lambdas {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ lambda.to_bits());
        for _ in 0..params.samples {
            let x = sample_vec(&gossez_space, &mut rng);
            let cert = whs_certify_sample(&g, lambda, &x, &g_star)?;
            if !cert.sharp_passed {
                cert_violations += 1;
            }
            let floor = pointwise_floor_check(&g, lambda, &x, &g_star)?;
            if !floor.passed {
                floor_violations += 1;
            }
            // Direct check of the pairing lower bound at the observed eps.
            if cert.eps <= 2.0 * lambda / (1.0 + 3.0 * lambda) {
                let lb = pairing_lower_bound(lambda, cert.eps, 1.0, 1.0)?;
                if cert.inner_product < lb - 1e-9 {
                    lb_violations += 1;
                }
            }

            let xg = sample_vec(&grid, &mut rng);
            let cert = whs_certify_sample(&f, lambda, &xg, &f_star)?;
            if !cert.sharp_passed {
                cert_violations += 1;
            }
            let floor = pointwise_floor_check(&f, lambda, &xg, &f_star)?;
            if !floor.passed {
                floor_violations += 1;
            }
            total += 2;
        }
    }
    out.push(CheckResult::new(
        "whs_certificates",
        cert_violations == 0,
        cert_violations as f64,
        format!("{total} sampled sharp certificates, {cert_violations} violations"),
    ));
    out.push(CheckResult::new(
        "pointwise_floor",
        floor_violations == 0,
        floor_violations as f64,
        format!("{total} floor checks, {floor_violations} violations"),
    ));
    out.push(CheckResult::new(
        "pairing_lower_bound",
        lb_violations == 0,
        lb_violations as f64,
        "observed <x, f*> never undercuts the bound at the observed eps".into(),
    ));
    Ok(())
}

fn rugged_suite(params: &VerifyParams, out: &mut Vec<CheckResult>) -> Result<()> {
    let rep = ruggedness_check(&SpaceSpec::<f64>::l1(params.head_dim.max(2)))?;
    out.push(CheckResult::new(
        "rugged_l1",
        rep.passed && !rep.single_passed,
        if rep.passed { 0.0 } else { 1.0 },
        "interval pattern {0}/[-2,2]/[-4,4] on the sequence preset".into(),
    ));
    let k = params.head_dim.max(3);
    let k = k + (3 - k % 3) % 3;
    let rep = ruggedness_check(&SpaceSpec::<f64>::l1_grid(k))?;
    out.push(CheckResult::new(
        "rugged_l1_grid",
        rep.passed,
        if rep.passed { 0.0 } else { 1.0 },
        format!("interval pattern on the {k}-cell grid"),
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert!(Suite::from_str(name).is_ok());
        }
        assert!(Suite::from_str("nope").is_err());
    }

    #[test]
    fn all_suites_pass_with_small_samples() {
        let params = VerifyParams {
            seed: 7,
            head_dim: 12,
            samples: 50,
            lambdas: vec![0.5, 2.0],
        };
        let results = run_suite(Suite::All, &params).unwrap();
        assert!(results.len() >= 10);
        for r in &results {
            assert!(
                r.passed,
                "{}: {} (residual {})",
                r.name, r.detail, r.residual
            );
        }
    }
}
