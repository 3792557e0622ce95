//! Nonconvexity witnesses.
//!
//! A witness is a set of range points `u_j in A x_j + lambda J x_j` together
//! with convex weights `theta_j` whose combination lands strictly closer to
//! the target `f*` than the certified floor on single range points.  For the
//! tail-model Gossez operator an explicit two-point witness exists whenever
//! `lambda >= 3/2`: with `x = -t e_1` and `x' = -t e_2` the selections below
//! make the midpoint hit `f*` exactly.  The grid operator admits the block
//! analogue, with the two generators supported on the first and last `J`
//! cells.  For other parameters a seeded alternating search looks for
//! combinations; it may return an uncertified record.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::m_of_lambda;
use crate::boxes::DualBox;
use crate::error::{Error, Result};
use crate::operators::{OperatorKind, OperatorSpec, Selection};
use crate::scalar::Real;
use crate::space::{DualPoint, PrimalVec};

use super::search::{distance_minimize, random_sparse};
use super::{derive_seed, SearchConfig, WitnessPoint, WitnessRecord};

/// Feasibility window `[lo, hi]` for the midpoint parameter `t`.
fn midpoint_window<R: Real>(op: &OperatorSpec<R>, lambda: R) -> Result<(R, R, usize)> {
    let one = R::one();
    let two = R::of(2.0);
    match op.kind() {
        OperatorKind::Gossez => {
            if op.space().head_dim() < 2 {
                return Err(Error::GridTooSmall {
                    need: 2,
                    got: op.space().head_dim(),
                });
            }
            let hi = two;
            if lambda <= one {
                return Err(Error::EmptyWitnessWindow {
                    lambda: lambda.as_f64(),
                    lo: f64::INFINITY,
                    hi: hi.as_f64(),
                });
            }
            let lo = (one / (lambda - one)).max(two / (one + two * lambda));
            if lo > hi {
                return Err(Error::EmptyWitnessWindow {
                    lambda: lambda.as_f64(),
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
            Ok((lo, hi, 1))
        }
        OperatorKind::FpGrid => {
            let k = op.space().head_dim();
            if k < 2 {
                return Err(Error::GridTooSmall { need: 2, got: k });
            }
            // Generators on the first and last J cells, thirds by default.
            let j = ((k as f64 / 3.0).round() as usize).clamp(1, k / 2);
            let q = one / R::of(j as f64);
            let denom = two * lambda - two + q;
            let hi = two / (two - q);
            if denom <= R::zero() {
                return Err(Error::EmptyWitnessWindow {
                    lambda: lambda.as_f64(),
                    lo: f64::INFINITY,
                    hi: hi.as_f64(),
                });
            }
            let lo = (two / denom).max(two / (two * lambda + q));
            if lo > hi {
                return Err(Error::EmptyWitnessWindow {
                    lambda: lambda.as_f64(),
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
            Ok((lo, hi, j))
        }
        _ => Err(Error::UnsupportedOperator),
    }
}

/// Explicit two-point witness whose midpoint hits `f*` exactly.
///
/// `t` defaults to `clamp(1, window)`, which keeps the numbers integral when
/// possible; a `t` outside the feasibility window is rejected.
pub fn build_midpoint_witness<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    t: Option<R>,
) -> Result<WitnessRecord<R>> {
    let (lo, hi, block) = midpoint_window(op, lambda)?;
    let t = t.unwrap_or_else(|| R::one().max(lo).min(hi));
    let slop = R::of(1e-12);
    if t < lo - slop || t > hi + slop {
        return Err(Error::EmptyWitnessWindow {
            lambda: lambda.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }

    let space = op.space();
    let k = space.head_dim();
    let one = R::one();
    let two = R::of(2.0);
    let lt = lambda * t;
    let clamp1 = |v: R| v.max(-one).min(one);

    let (x, x_prime, sel_u, sel_v) = match op.kind() {
        OperatorKind::Gossez => {
            let x = space.unit_vec(0, -t);
            let x_prime = space.unit_vec(1, -t);
            let free = clamp1(-(one + t) / lt);
            let mut su = vec![free; k];
            su[0] = -one;
            su[1] = clamp1((lt - t - two) / lt);
            let mut sv = vec![free; k];
            sv[0] = clamp1((lt + t - two) / lt);
            sv[1] = -one;
            (
                x,
                x_prime,
                Selection::new(su, Some(free)),
                Selection::new(sv, Some(free)),
            )
        }
        OperatorKind::FpGrid => {
            let j = block;
            let jr = R::of(j as f64);
            let c = R::of(k as f64) / jr;
            let mut cx = vec![R::zero(); k];
            let mut cx_prime = vec![R::zero(); k];
            for i in 0..j {
                cx[i] = -t * c;
                cx_prime[k - 1 - i] = -t * c;
            }
            let x = PrimalVec::new(space, cx)?;
            let x_prime = PrimalVec::new(space, cx_prime)?;

            let middle = clamp1(-one / lt);
            let mut su = vec![middle; k];
            let mut sv = vec![middle; k];
            for i in 0..j {
                su[i] = -one;
                // a_i = (2J - 2i - 1) / J on the leading block.
                let a = (two * jr - two * R::of(i as f64) - one) / jr;
                sv[i] = clamp1((lt - two - t * a) / lt);
            }
            for i in (k - j)..k {
                sv[i] = -one;
                // b_i = (2J + 2i + 1 - 2K) / J on the trailing block.
                let b = (two * jr + two * R::of(i as f64) + one - two * R::of(k as f64)) / jr;
                su[i] = clamp1((lt - two + t * b) / lt);
            }
            (
                x,
                x_prime,
                Selection::new(su, None),
                Selection::new(sv, None),
            )
        }
        _ => unreachable!("window construction filtered the kind"),
    };

    let u = op.range_point(lambda, &x, &sel_u)?;
    let v = op.range_point(lambda, &x_prime, &sel_v)?;
    let f_star = DualPoint::constant(space, -one);
    let half = R::of(0.5);
    let midpoint = u.scale(half).add_scaled(&v, half)?;
    let combo_distance = midpoint.sup_dist(&f_star)?;
    let single_distances = vec![u.sup_dist(&f_star)?, v.sup_dist(&f_star)?];

    let slack = op
        .floor_slack(&x)
        .expect("midpoint witness operators carry a floor")
        .max(op.floor_slack(&x_prime).expect("floor slack"));
    let floor = m_of_lambda(lambda)? - slack;
    let tol = R::of(1e-9);
    let certified = combo_distance < floor && single_distances.iter().all(|d| *d >= floor - tol);

    Ok(WitnessRecord {
        lambda,
        points: vec![
            WitnessPoint {
                x,
                selection: sel_u,
                theta: half,
            },
            WitnessPoint {
                x: x_prime,
                selection: sel_v,
                theta: half,
            },
        ],
        combo_distance,
        floor,
        model_slack: slack,
        single_distances,
        certified,
    })
}

/// Rescale a witness for the target `alpha f*` using the homogeneity of the
/// operator and the duality map.
pub fn scale_witness<R: Real>(
    op: &OperatorSpec<R>,
    record: &WitnessRecord<R>,
    alpha: R,
) -> Result<WitnessRecord<R>> {
    if alpha == R::zero() {
        return Err(Error::InvalidConfig("alpha must be nonzero".into()));
    }
    let space = op.space();
    let f_star = DualPoint::constant(space, -R::one()).scale(alpha);
    let flip = if alpha < R::zero() {
        -R::one()
    } else {
        R::one()
    };
    let mut points = Vec::with_capacity(record.points.len());
    let mut singles = Vec::with_capacity(record.points.len());
    let mut combo: Option<DualPoint<R>> = None;
    for p in &record.points {
        let x = p.x.scale(alpha);
        let selection = Selection::new(
            p.selection.head.iter().map(|s| *s * flip).collect(),
            p.selection.tail.map(|s| s * flip),
        );
        let u = op.range_point(record.lambda, &x, &selection)?;
        singles.push(u.sup_dist(&f_star)?);
        combo = Some(match combo {
            None => u.scale(p.theta),
            Some(acc) => acc.add_scaled(&u, p.theta)?,
        });
        points.push(WitnessPoint {
            x,
            selection,
            theta: p.theta,
        });
    }
    let combo_distance = combo
        .expect("witness has at least one point")
        .sup_dist(&f_star)?;
    let floor = alpha.abs() * record.floor;
    let model_slack = alpha.abs() * record.model_slack;
    let tol = R::of(1e-9);
    let certified = combo_distance < floor && singles.iter().all(|d| *d >= floor - tol);
    Ok(WitnessRecord {
        lambda: record.lambda,
        points,
        combo_distance,
        floor,
        model_slack,
        single_distances: singles,
        certified,
    })
}

struct ComboState<R: Real> {
    coords: Vec<Vec<R>>,
    raw_weights: Vec<R>,
}

impl<R: Real> ComboState<R> {
    fn thetas(&self) -> Vec<R> {
        normalize(&self.raw_weights)
    }
}

fn normalize<R: Real>(raw: &[R]) -> Vec<R> {
    let total: R = raw.iter().fold(R::zero(), |a, b| a + b.max(R::zero()));
    if total <= R::zero() {
        return vec![R::one() / R::of(raw.len() as f64); raw.len()];
    }
    raw.iter().map(|p| p.max(R::zero()) / total).collect()
}

struct ComboObjective<'a, R: Real> {
    op: &'a OperatorSpec<R>,
    f_star: &'a DualPoint<R>,
    lambda: R,
    floor: Option<R>,
}

impl<'a, R: Real> ComboObjective<'a, R> {
    /// Best achievable combination distance for fixed supports and weights:
    /// the inner minimization over selections is solved exactly by interval
    /// arithmetic on the theta-weighted Minkowski sum of the range boxes.
    fn eval(&self, state: &ComboState<R>, violations: &mut usize) -> R {
        let thetas = state.thetas();
        let boxes: Vec<DualBox<R>> = state
            .coords
            .iter()
            .map(|c| {
                let x = PrimalVec::new(self.op.space(), c.clone()).expect("dims");
                let b = self.op.range_box(self.lambda, &x).expect("lambda checked");
                if let Some(m) = self.floor {
                    let slack = self.op.floor_slack(&x).expect("floor operator");
                    let d = b.distance_sup(self.f_star).expect("same space");
                    if d < m - slack - R::of(1e-9) {
                        *violations += 1;
                    }
                }
                b
            })
            .collect();
        let combo = DualBox::convex_combination(&boxes, &thetas).expect("same space");
        combo.distance_sup(self.f_star).expect("same space")
    }
}

/// Search for a convex combination of `k` range points approaching `f*`.
///
/// `k = 1` degenerates to [`distance_minimize`]; the record then cannot be
/// certified, because a single range point respects the floor.
pub fn combo_witness_search<R: Real>(
    op: &OperatorSpec<R>,
    f_star: &DualPoint<R>,
    cfg: &SearchConfig<R>,
) -> Result<WitnessRecord<R>> {
    cfg.validate()?;
    if cfg.head_dim != op.space().head_dim() {
        return Err(Error::InvalidConfig(format!(
            "config head_dim {} does not match operator space {}",
            cfg.head_dim,
            op.space().head_dim()
        )));
    }
    let k = cfg.witness_order;
    if k == 1 {
        let out = distance_minimize(op, f_star, cfg)?;
        return single_point_record(op, cfg.lambda, &out.best, f_star);
    }

    let floor = op
        .whs_holds_in_model()
        .then(|| m_of_lambda(cfg.lambda))
        .transpose()?;
    let objective = ComboObjective {
        op,
        f_star,
        lambda: cfg.lambda,
        floor,
    };

    let results: Vec<(R, ComboState<R>, usize)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|s| {
            let mut violations = 0usize;
            let mut state = seed_state(op, cfg, s);
            let mut f_current = objective.eval(&state, &mut violations);
            let mut step = cfg.initial_step;
            let mut weight_step = R::of(0.25);
            let dim = op.space().head_dim();

            for _ in 0..cfg.budget {
                let mut best_move: Option<(Move<R>, R)> = None;
                for j in 0..k {
                    for i in 0..dim {
                        for sign in [R::one(), -R::one()] {
                            let old = state.coords[j][i];
                            state.coords[j][i] = old + sign * step;
                            let f = objective.eval(&state, &mut violations);
                            state.coords[j][i] = old;
                            if f < f_current && best_move.as_ref().is_none_or(|(_, bf)| f < *bf) {
                                best_move = Some((Move::Coord(j, i, old + sign * step), f));
                            }
                        }
                    }
                    for sign in [R::one(), -R::one()] {
                        let old = state.raw_weights[j];
                        let cand = (old + sign * weight_step).max(R::zero());
                        state.raw_weights[j] = cand;
                        let f = objective.eval(&state, &mut violations);
                        state.raw_weights[j] = old;
                        if f < f_current && best_move.as_ref().is_none_or(|(_, bf)| f < *bf) {
                            best_move = Some((Move::Weight(j, cand), f));
                        }
                    }
                }
                match best_move {
                    Some((mv, f)) => {
                        match mv {
                            Move::Coord(j, i, value) => state.coords[j][i] = value,
                            Move::Weight(j, value) => state.raw_weights[j] = value,
                        }
                        f_current = f;
                    }
                    None => {
                        step *= cfg.shrink;
                        weight_step *= cfg.shrink;
                    }
                }
                if step < R::of(1e-12) {
                    break;
                }
            }
            (f_current, state, violations)
        })
        .collect();

    let mut winner = 0;
    for (i, (f, _, _)) in results.iter().enumerate() {
        if *f < results[winner].0 {
            winner = i;
        }
    }
    let (_, state, _) = &results[winner];
    realize_record(op, cfg.lambda, state, f_star)
}

enum Move<R: Real> {
    Coord(usize, usize, R),
    Weight(usize, R),
}

fn seed_state<R: Real>(op: &OperatorSpec<R>, cfg: &SearchConfig<R>, start: usize) -> ComboState<R> {
    let k = cfg.witness_order;
    let dim = op.space().head_dim();
    let uniform = vec![R::one(); k];
    match start {
        0 => {
            if let Ok(w) = build_midpoint_witness(op, cfg.lambda, None) {
                let mut coords = vec![vec![R::zero(); dim]; k];
                coords[0] = w.points[0].x.coeffs().to_vec();
                coords[1 % k] = w.points[1].x.coeffs().to_vec();
                return ComboState {
                    coords,
                    raw_weights: uniform,
                };
            }
            seed_unit_directions(op, k, -R::one())
        }
        1 => seed_unit_directions(op, k, -R::one()),
        2 => seed_unit_directions(op, k, R::one()),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, start));
            let coords = (0..k)
                .map(|_| random_sparse(op.space(), &mut rng).coeffs().to_vec())
                .collect();
            ComboState {
                coords,
                raw_weights: uniform,
            }
        }
    }
}

fn seed_unit_directions<R: Real>(op: &OperatorSpec<R>, k: usize, sign: R) -> ComboState<R> {
    let dim = op.space().head_dim();
    let coords = (0..k)
        .map(|j| {
            let mut c = vec![R::zero(); dim];
            c[j % dim] = sign;
            c
        })
        .collect();
    ComboState {
        coords,
        raw_weights: vec![R::one(); k],
    }
}

fn single_point_record<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    x: &PrimalVec<R>,
    f_star: &DualPoint<R>,
) -> Result<WitnessRecord<R>> {
    let state = ComboState {
        coords: vec![x.coeffs().to_vec()],
        raw_weights: vec![R::one()],
    };
    realize_record(op, lambda, &state, f_star)
}

/// Turn a search state into a full record: reconstruct per-point selections
/// whose weighted sum realizes the nearest point of the combination box, and
/// recompute the distance from the realized range points.
fn realize_record<R: Real>(
    op: &OperatorSpec<R>,
    lambda: R,
    state: &ComboState<R>,
    f_star: &DualPoint<R>,
) -> Result<WitnessRecord<R>> {
    let space = op.space();
    let thetas = state.thetas();
    let xs: Vec<PrimalVec<R>> = state
        .coords
        .iter()
        .map(|c| PrimalVec::new(space, c.clone()))
        .collect::<Result<_>>()?;
    let boxes: Vec<DualBox<R>> = xs
        .iter()
        .map(|x| op.range_box(lambda, x))
        .collect::<Result<_>>()?;

    let combo_box = DualBox::convex_combination(&boxes, &thetas)?;
    let target = combo_box.nearest_point(f_star)?;

    // Waterfill each coordinate: start every point at its lower endpoint and
    // raise them in order until the weighted sum matches the target.
    let k = xs.len();
    let dim = space.head_dim();
    let mut picks: Vec<Vec<R>> = (0..k)
        .map(|j| boxes[j].head().iter().map(|iv| iv.lo).collect())
        .collect();
    let mut tail_picks: Vec<R> = (0..k)
        .map(|j| boxes[j].tail().map_or(R::zero(), |iv| iv.lo))
        .collect();
    for i in 0..dim {
        let base: R = (0..k).map(|j| thetas[j] * picks[j][i]).sum();
        let mut deficit = target.head()[i] - base;
        for j in 0..k {
            if deficit <= R::zero() {
                break;
            }
            if thetas[j] <= R::zero() {
                continue;
            }
            let iv = boxes[j].head()[i];
            let capacity = thetas[j] * (iv.hi - iv.lo);
            let take = deficit.min(capacity);
            picks[j][i] = (picks[j][i] + take / thetas[j]).min(iv.hi);
            deficit -= take;
        }
    }
    if space.has_tail() {
        let base: R = (0..k).map(|j| thetas[j] * tail_picks[j]).sum();
        let mut deficit = target.tail().expect("tail present") - base;
        for j in 0..k {
            if deficit <= R::zero() {
                break;
            }
            if thetas[j] <= R::zero() {
                continue;
            }
            let iv = boxes[j].tail().expect("tail present");
            let capacity = thetas[j] * (iv.hi - iv.lo);
            let take = deficit.min(capacity);
            tail_picks[j] = (tail_picks[j] + take / thetas[j]).min(iv.hi);
            deficit -= take;
        }
    }

    // Selections from the picked dual values; forced coordinates stay at the
    // exact sign so the admissibility check is exact.
    let mut points = Vec::with_capacity(k);
    let mut singles = Vec::with_capacity(k);
    let mut combo: Option<DualPoint<R>> = None;
    let mut max_slack = R::zero();
    for j in 0..k {
        let x = &xs[j];
        let n = x.l1_norm();
        let apply = op.apply(x);
        let head: Vec<R> = (0..dim)
            .map(|i| {
                let c = x.coeffs()[i];
                if c != R::zero() {
                    c.signum()
                } else if n > R::zero() {
                    ((picks[j][i] - apply.head()[i]) / (lambda * n))
                        .max(-R::one())
                        .min(R::one())
                } else {
                    R::zero()
                }
            })
            .collect();
        let tail = space.has_tail().then(|| {
            if n > R::zero() {
                ((tail_picks[j] - apply.tail().expect("tail")) / (lambda * n))
                    .max(-R::one())
                    .min(R::one())
            } else {
                R::zero()
            }
        });
        let selection = Selection::new(head, tail);
        let u = op.range_point(lambda, x, &selection)?;
        singles.push(u.sup_dist(f_star)?);
        combo = Some(match combo {
            None => u.scale(thetas[j]),
            Some(acc) => acc.add_scaled(&u, thetas[j])?,
        });
        if let Some(s) = op.floor_slack(x) {
            max_slack = max_slack.max(s);
        }
        points.push(WitnessPoint {
            x: x.clone(),
            selection,
            theta: thetas[j],
        });
    }
    let combo_distance = combo.expect("at least one point").sup_dist(f_star)?;

    let floor = if op.whs_holds_in_model() {
        m_of_lambda(lambda)? - max_slack
    } else {
        R::zero()
    };
    let tol = R::of(1e-9);
    let certified = op.whs_holds_in_model()
        && combo_distance < floor
        && singles.iter().all(|d| *d >= floor - tol);

    Ok(WitnessRecord {
        lambda,
        points,
        combo_distance,
        floor,
        model_slack: max_slack,
        single_distances: singles,
        certified,
    })
}
