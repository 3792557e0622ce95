//! Scalar bound formulas and inequality certificates.
//!
//! The central quantity is the distance floor
//!
//! ```text
//! m(lambda) = (3 l^2 + 9 l + 4 - (l + 1) sqrt(9 l^2 + 36 l + 16)) / (4 l + 2)
//! ```
//!
//! which is the smaller root of `(2l+1) xi^2 - (3l^2+9l+4) xi + l = 0`.  For
//! an operator with norm bound one that admits a wondrous-half-space
//! certificate against a unit target `f*`, no point of `Ax + lambda Jx` comes
//! closer to `f*` than `m(lambda)`; this module evaluates the formula, its
//! quadratic-root route, the threshold `2 lambda / (1 + 3 lambda)`, and the
//! algebraic identities tying them together, and certifies the inequalities
//! pointwise on model vectors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::OperatorSpec;
use crate::scalar::Real;
use crate::space::{DualPoint, PrimalVec};

fn check_lambda<R: Real>(lambda: R) -> Result<()> {
    if lambda <= R::zero() {
        return Err(Error::NonPositiveLambda(lambda.as_f64()));
    }
    Ok(())
}

/// `sqrt(9 l^2 + 36 l + 16)`, shared by several formulas.
fn disc_sqrt<R: Real>(lambda: R) -> R {
    let (nine, thirty_six, sixteen) = (R::of(9.0), R::of(36.0), R::of(16.0));
    (nine * lambda * lambda + thirty_six * lambda + sixteen).sqrt()
}

/// `3 l^2 + 9 l + 4`, the middle coefficient of the quadratic.
fn mid_coeff<R: Real>(lambda: R) -> R {
    R::of(3.0) * lambda * lambda + R::of(9.0) * lambda + R::of(4.0)
}

/// The distance floor `m(lambda)`, evaluated from its closed form.
pub fn m_of_lambda<R: Real>(lambda: R) -> Result<R> {
    check_lambda(lambda)?;
    let num = mid_coeff(lambda) - (lambda + R::one()) * disc_sqrt(lambda);
    Ok(num / (R::of(4.0) * lambda + R::of(2.0)))
}

/// Both roots of `(2l+1) xi^2 - (3l^2+9l+4) xi + l = 0`, ascending.
///
/// The discriminant is taken in its factored form
/// `(l+1)^2 (9l^2 + 36l + 16)` and the smaller root is computed as
/// `2 l / (B + D)`, so neither root suffers cancellation for large `lambda`.
pub fn whs_quadratic_roots<R: Real>(lambda: R) -> Result<(R, R)> {
    check_lambda(lambda)?;
    let b = mid_coeff(lambda);
    let d = (lambda + R::one()) * disc_sqrt(lambda);
    let a = R::of(2.0) * lambda + R::one();
    let small = R::of(2.0) * lambda / (b + d);
    let large = (b + d) / (R::of(2.0) * a);
    Ok((small, large))
}

/// Near-solvability threshold `2 lambda ||f*|| / (||A|| + 3 lambda)`.
pub fn eps_threshold<R: Real>(lambda: R, norm_a: R, norm_f: R) -> Result<R> {
    check_lambda(lambda)?;
    Ok(R::of(2.0) * lambda * norm_f / (norm_a + R::of(3.0) * lambda))
}

/// Lower bound `lambda l^2 - eps l` with `l = (||f*|| - eps)/(||A|| + lambda)`
/// on the pairing `<x, f*>`, valid when `eps` is below [`eps_threshold`].
pub fn pairing_lower_bound<R: Real>(lambda: R, eps: R, norm_a: R, norm_f: R) -> Result<R> {
    check_lambda(lambda)?;
    let threshold = eps_threshold(lambda, norm_a, norm_f)?;
    if eps < R::zero() || eps > threshold {
        return Err(Error::AboveThreshold {
            eps: eps.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    let l = (norm_f - eps) / (norm_a + lambda);
    Ok(lambda * l * l - eps * l)
}

/// Outcome of the norm/pairing relations satisfied by any
/// `r* in Ax + lambda Jx`.
#[derive(Debug, Clone, Serialize)]
pub struct RangeRelationsReport<R: Real> {
    pub norm_r: R,
    pub norm_x: R,
    /// `||r*|| / (||A|| + lambda)`.
    pub lower: R,
    /// `||r*|| / lambda`.
    pub upper: R,
    pub pairing: R,
    pub lambda_norm_sq: R,
    /// `|lambda ||x||^2 - <x, r*>|` when the operator is skew.
    pub skew_residual: Option<R>,
    pub passed: bool,
}

/// Check `||r*||/(||A||+lambda) <= ||x|| <= ||r*||/lambda` and
/// `lambda ||x||^2 <= <x, r*>`, with equality of the last pair when the
/// operator is skew.  `r*` must lie in the range box of `x`.
pub fn range_relations_check<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    x: &PrimalVec<R>,
    r_star: &DualPoint<R>,
) -> Result<RangeRelationsReport<R>> {
    let range = op.range_box(lambda, x)?;
    let gap = range.distance_sup(r_star)?;
    let scale = R::one().max(r_star.sup_norm());
    if gap > R::of(1e-10) * scale {
        return Err(Error::NotInRangeBox {
            distance: gap.as_f64(),
        });
    }
    let norm_r = r_star.sup_norm();
    let norm_x = x.l1_norm();
    let lower = norm_r / (op.norm_bound() + lambda);
    let upper = norm_r / lambda;
    let pairing = x.pair(r_star)?;
    let lambda_norm_sq = lambda * norm_x * norm_x;
    let tol = R::of(1e-10) * R::one().max(norm_r).max(lambda_norm_sq.abs());
    let mut passed =
        lower <= norm_x + tol && norm_x <= upper + tol && lambda_norm_sq <= pairing + tol;
    let skew_residual = op.is_skew().then(|| (lambda_norm_sq - pairing).abs());
    if let Some(res) = skew_residual {
        passed = passed && res <= tol;
    }
    Ok(RangeRelationsReport {
        norm_r,
        norm_x,
        lower,
        upper,
        pairing,
        lambda_norm_sq,
        skew_residual,
        passed,
    })
}

/// Residuals of the closed-form identities behind the threshold/floor gap.
#[derive(Debug, Clone, Serialize)]
pub struct GapIdentityReport<R: Real> {
    pub tau: R,
    /// `threshold - m - (1+l)/(2(1+2l)(1+3l)) * tau`, relative.
    pub residual_threshold_gap: R,
    /// `(3l+1)^2 (9l^2+36l+16) - (9l^2+13l+4)^2 - (144l^3+128l^2+28l)`, relative.
    pub residual_tau_square: R,
    /// `(3l^2+9l+4)^2 - 4(2l+1)l - (l+1)^2 (9l^2+36l+16)`, relative.
    pub residual_discriminant: R,
    pub tau_positive: bool,
}

impl<R: Real> GapIdentityReport<R> {
    pub fn max_residual(&self) -> R {
        self.residual_threshold_gap
            .abs()
            .max(self.residual_tau_square.abs())
            .max(self.residual_discriminant.abs())
    }
}

fn rel<R: Real>(diff: R, scale: R) -> R {
    diff / R::one().max(scale.abs())
}

/// Verify the three identities linking the threshold, the floor and the
/// quadratic, and that `tau > 0`.
pub fn gap_identity_check<R: Real>(lambda: R) -> Result<GapIdentityReport<R>> {
    check_lambda(lambda)?;
    let one = R::one();
    let l = lambda;
    let d = disc_sqrt(l);

    let tau = (R::of(3.0) * l + one) * d - (R::of(9.0) * l * l + R::of(13.0) * l + R::of(4.0));

    let threshold = eps_threshold(l, one, one)?;
    let m = m_of_lambda(l)?;
    let coef = (one + l) / (R::of(2.0) * (one + R::of(2.0) * l) * (one + R::of(3.0) * l));
    let residual_threshold_gap = rel(threshold - m - coef * tau, threshold);

    let lhs2 = {
        let t = R::of(3.0) * l + one;
        t * t * (R::of(9.0) * l * l + R::of(36.0) * l + R::of(16.0))
    };
    let mid = R::of(9.0) * l * l + R::of(13.0) * l + R::of(4.0);
    let cubic = R::of(144.0) * l * l * l + R::of(128.0) * l * l + R::of(28.0) * l;
    let residual_tau_square = rel(lhs2 - mid * mid - cubic, lhs2);

    let b = mid_coeff(l);
    let lhs3 = b * b - R::of(4.0) * (R::of(2.0) * l + one) * l;
    let rhs3 = {
        let p = l + one;
        p * p * (R::of(9.0) * l * l + R::of(36.0) * l + R::of(16.0))
    };
    let residual_discriminant = rel(lhs3 - rhs3, lhs3);

    Ok(GapIdentityReport {
        tau,
        residual_threshold_gap,
        residual_tau_square,
        residual_discriminant,
        tau_positive: tau > R::zero(),
    })
}

/// Shape of `m` over a grid: location and value of the maximum, monotonicity
/// on either side, decay at the ends.
#[derive(Debug, Clone, Serialize)]
pub struct MScanReport<R: Real> {
    pub argmax: R,
    pub max_value: R,
    pub increasing_before: bool,
    pub decreasing_after: bool,
    pub left_end_value: R,
    pub right_end_value: R,
}

/// Scan `m` over a sorted positive grid; the grid maximum is refined by
/// golden-section search in its bracketing interval.
pub fn m_properties_scan<R: Real>(grid: &[R]) -> Result<MScanReport<R>> {
    if grid.len() < 3 {
        return Err(Error::InvalidConfig("grid needs at least 3 points".into()));
    }
    let values: Vec<R> = grid
        .iter()
        .map(|&l| m_of_lambda(l))
        .collect::<Result<_>>()?;
    let mut peak = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[peak] {
            peak = i;
        }
    }
    let lo = grid[peak.saturating_sub(1)];
    let hi = grid[(peak + 1).min(grid.len() - 1)];
    let (argmax, max_value) = golden_max(lo, hi)?;

    let increasing_before = values.windows(2).take(peak).all(|w| w[0] < w[1]);
    let decreasing_after = values.windows(2).skip(peak).all(|w| w[0] > w[1]);

    Ok(MScanReport {
        argmax,
        max_value,
        increasing_before,
        decreasing_after,
        left_end_value: values[0],
        right_end_value: values[values.len() - 1],
    })
}

fn golden_max<R: Real>(mut lo: R, mut hi: R) -> Result<(R, R)> {
    let phi = R::of(0.618_033_988_749_894_9);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = m_of_lambda(c)?;
    let mut fd = m_of_lambda(d)?;
    for _ in 0..200 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = m_of_lambda(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = m_of_lambda(d)?;
        }
        if (hi - lo).abs() <= R::of(1e-12) {
            break;
        }
    }
    let mid = (lo + hi) / R::of(2.0);
    Ok((mid, m_of_lambda(mid)?))
}

/// A wondrous-half-space certificate for one sample vector.
#[derive(Debug, Clone, Serialize)]
pub struct WhsCertificate<R: Real> {
    pub x: PrimalVec<R>,
    /// Exact sup distance from `f*` to `Ax + lambda Jx`.
    pub eps: R,
    /// `<x, f*>`.
    pub inner_product: R,
    /// `sigma = -<x, f*>`, the coordinate sum seen by the tail.
    pub sigma: R,
    /// Model correction term (zero for the tail models).
    pub slack: R,
    /// `<x, f*> <= 3 eps + slack` within tolerance.
    pub passed: bool,
    /// The sharper model inequality `<x, f*> <= 2 eps + slack`.
    pub sharp_passed: bool,
}

/// Evaluate the certificate inequality for one sample.
///
/// `eps` is the exact box distance from `f*` to `Ax + lambda Jx`; the slack
/// is the model correction of [`OperatorSpec::whs_slack`].
pub fn whs_certify_sample<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    x: &PrimalVec<R>,
    f_star: &DualPoint<R>,
) -> Result<WhsCertificate<R>> {
    if !op.whs_certifiable() {
        return Err(Error::UnsupportedOperator);
    }
    let norm_f = f_star.sup_norm();
    if (norm_f - R::one()).abs() > R::of(1e-9) {
        return Err(Error::TargetNotUnit(norm_f.as_f64()));
    }
    let eps = op.range_box(lambda, x)?.distance_sup(f_star)?;
    let inner_product = x.pair(f_star)?;
    let slack = op.whs_slack(x);
    let tol = R::of(1e-10);
    Ok(WhsCertificate {
        x: x.clone(),
        eps,
        inner_product,
        sigma: -inner_product,
        slack,
        passed: inner_product <= R::of(3.0) * eps + slack + tol,
        sharp_passed: inner_product <= R::of(2.0) * eps + slack + tol,
    })
}

/// Outcome of the pointwise distance-floor check.
#[derive(Debug, Clone, Serialize)]
pub struct FloorCheck<R: Real> {
    pub distance: R,
    /// `m(lambda) - model_slack`.
    pub floor: R,
    pub model_slack: R,
    pub passed: bool,
}

/// Assert `dist(f*, Ax + lambda Jx) >= m(lambda) - model_slack - 1e-9` for an
/// operator whose certificate holds in the model.
pub fn pointwise_floor_check<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    x: &PrimalVec<R>,
    f_star: &DualPoint<R>,
) -> Result<FloorCheck<R>> {
    if !op.whs_holds_in_model() {
        return Err(Error::UnsupportedOperator);
    }
    let model_slack = op.floor_slack(x).expect("whs operator has a floor slack");
    let distance = op.range_box(lambda, x)?.distance_sup(f_star)?;
    let floor = m_of_lambda(lambda)? - model_slack;
    Ok(FloorCheck {
        distance,
        floor,
        model_slack,
        passed: distance >= floor - R::of(1e-9),
    })
}

/// Scaled floor of the homogeneity corollary: the distance from
/// `alpha f*` to `A(alpha x) + lambda J(alpha x)` is at least
/// `|alpha| (m(lambda) - model_slack(x))`.
pub fn scaled_floor_check<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    x: &PrimalVec<R>,
    f_star: &DualPoint<R>,
    alpha: R,
) -> Result<FloorCheck<R>> {
    if !op.whs_holds_in_model() {
        return Err(Error::UnsupportedOperator);
    }
    let scaled_x = x.scale(alpha);
    let target = f_star.scale(alpha);
    let distance = op.range_box(lambda, &scaled_x)?.distance_sup(&target)?;
    let base_slack = op.floor_slack(x).expect("whs operator has a floor slack");
    let floor = alpha.abs() * (m_of_lambda(lambda)? - base_slack);
    Ok(FloorCheck {
        distance,
        floor,
        model_slack: alpha.abs() * base_slack,
        passed: distance >= floor - R::of(1e-9),
    })
}

/// One row of the bound table: the floor, the root pair, the threshold and
/// the identity residuals at one `lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport<R: Real> {
    pub lambda: R,
    pub m_value: R,
    pub roots: (R, R),
    pub threshold: R,
    pub tau: R,
    pub identity_residuals: BTreeMap<String, f64>,
}

pub fn bounds_report<R: Real>(lambda: R) -> Result<BoundsReport<R>> {
    let m_value = m_of_lambda(lambda)?;
    let roots = whs_quadratic_roots(lambda)?;
    let threshold = eps_threshold(lambda, R::one(), R::one())?;
    let ident = gap_identity_check(lambda)?;
    let mut identity_residuals = BTreeMap::new();
    identity_residuals.insert(
        "threshold_gap".into(),
        ident.residual_threshold_gap.as_f64(),
    );
    identity_residuals.insert("tau_square".into(), ident.residual_tau_square.as_f64());
    identity_residuals.insert("discriminant".into(), ident.residual_discriminant.as_f64());
    Ok(BoundsReport {
        lambda,
        m_value,
        roots,
        threshold,
        tau: ident.tau,
        identity_residuals,
    })
}

/// Logarithmic grid of `n` points over `[lo, hi]`.
pub fn log_grid<R: Real>(lo: R, hi: R, n: usize) -> Vec<R> {
    assert!(n >= 2 && lo > R::zero() && hi > lo);
    let (ll, lh) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            let t = R::of(i as f64) / R::of((n - 1) as f64);
            (ll + (lh - ll) * t).exp()
        })
        .collect()
}
