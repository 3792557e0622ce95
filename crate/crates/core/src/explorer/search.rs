//! Multi-start compass search for the closest range point to a target.
//!
//! The objective `x -> dist_inf(f*, Ax + lambda Jx)` is evaluated exactly via
//! the box representation, so values are cheap and noiseless; gradients do
//! not exist (the l1 norm inside the duality box makes the objective
//! piecewise linear), which is why a compass pattern with geometric step
//! decay is used.  Restarts draw from `{+-e_i * t}` and random sparse
//! vectors; per-start seeds derive from the master seed, and the merge is
//! lexicographic in (best value, start index), so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::m_of_lambda;
use crate::error::{Error, Result};
use crate::operators::OperatorSpec;
use crate::scalar::Real;
use crate::space::{DualPoint, PrimalVec, SpaceSpec};

use super::{derive_seed, SearchConfig};

/// Result of a distance-minimization run.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome<R: Real> {
    pub best: PrimalVec<R>,
    pub best_distance: R,
    /// Best-so-far value after each poll iteration, merged across restarts;
    /// monotone nonincreasing.
    pub trace: Vec<R>,
    pub evaluations: usize,
    /// Evaluated points whose box distance fell below the certified floor.
    /// Always zero for operators whose certificate holds in the model.
    pub floor_violations: usize,
}

pub(super) struct Objective<'a, R: Real> {
    op: &'a OperatorSpec<R>,
    f_star: &'a DualPoint<R>,
    lambda: R,
    /// `m(lambda)` when the floor applies to this operator.
    floor: Option<R>,
}

impl<'a, R: Real> Objective<'a, R> {
    pub(super) fn new(
        op: &'a OperatorSpec<R>,
        f_star: &'a DualPoint<R>,
        lambda: R,
    ) -> Result<Self> {
        if lambda <= R::zero() {
            return Err(Error::NonPositiveLambda(lambda.as_f64()));
        }
        if op.space() != f_star.space() {
            return Err(Error::SpaceMismatch);
        }
        let floor = if op.whs_holds_in_model() {
            Some(m_of_lambda(lambda)?)
        } else {
            None
        };
        Ok(Objective {
            op,
            f_star,
            lambda,
            floor,
        })
    }

    pub(super) fn eval(&self, x: &PrimalVec<R>, violations: &mut usize) -> R {
        let b = self.op.range_box(self.lambda, x).expect("lambda checked");
        let d = b.distance_sup(self.f_star).expect("same space");
        if let Some(m) = self.floor {
            let slack = self.op.floor_slack(x).expect("floor operator");
            if d < m - slack - R::of(1e-9) {
                *violations += 1;
            }
        }
        d
    }
}

struct StartRun<R: Real> {
    best: PrimalVec<R>,
    best_distance: R,
    trace: Vec<R>,
    evaluations: usize,
    floor_violations: usize,
}

fn run_start<R: Real>(
    op: &OperatorSpec<R>,
    f_star: &DualPoint<R>,
    cfg: &SearchConfig<R>,
    x0: PrimalVec<R>,
) -> Result<StartRun<R>> {
    let obj = Objective::new(op, f_star, cfg.lambda)?;
    let k = op.space().head_dim();
    let mut violations = 0usize;
    let mut evaluations = 0usize;

    let mut current = x0;
    let mut f_current = obj.eval(&current, &mut violations);
    evaluations += 1;
    let mut best = current.clone();
    let mut best_distance = f_current;
    let mut trace = vec![best_distance];
    let mut step = cfg.initial_step;

    for _ in 0..cfg.budget {
        let mut improved: Option<(usize, R, R)> = None;
        for i in 0..k {
            for sign in [R::one(), -R::one()] {
                let cand = current.with_coeff(i, current.coeffs()[i] + sign * step);
                let f = obj.eval(&cand, &mut violations);
                evaluations += 1;
                if f < f_current && improved.is_none_or(|(_, _, bf)| f < bf) {
                    improved = Some((i, cand.coeffs()[i], f));
                }
            }
        }
        match improved {
            Some((i, value, f)) => {
                current = current.with_coeff(i, value);
                f_current = f;
                if f_current < best_distance {
                    best_distance = f_current;
                    best = current.clone();
                }
            }
            None => step *= cfg.shrink,
        }
        trace.push(best_distance);
        if step < R::of(1e-12) {
            break;
        }
    }

    Ok(StartRun {
        best,
        best_distance,
        trace,
        evaluations,
        floor_violations: violations,
    })
}

/// Deterministic start library: `+-e_i * t` for `t in {1, 0.5, 2}`, then
/// random sparse vectors drawn from the per-start stream.
pub(super) fn start_vector<R: Real>(
    space: &SpaceSpec<R>,
    master_seed: u64,
    index: usize,
) -> PrimalVec<R> {
    let k = space.head_dim();
    let scales = [1.0, 0.5, 2.0];
    let library = 2 * k * scales.len();
    if index < library {
        let t = scales[index / (2 * k)];
        let rem = index % (2 * k);
        let i = rem / 2;
        let sign = if rem.is_multiple_of(2) { -1.0 } else { 1.0 };
        return space.unit_vec(i, R::of(sign * t));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, index));
    random_sparse(space, &mut rng)
}

pub(super) fn random_sparse<R: Real>(space: &SpaceSpec<R>, rng: &mut ChaCha8Rng) -> PrimalVec<R> {
    let k = space.head_dim();
    let support = 1 + rng.gen_range(0..k.min(8));
    let mut indices: Vec<usize> = (0..k).collect();
    for pos in 0..support {
        let swap = rng.gen_range(pos..k);
        indices.swap(pos, swap);
    }
    let mut coeffs = vec![R::zero(); k];
    for &i in &indices[..support] {
        coeffs[i] = R::of(rng.gen_range(-2.0..2.0));
    }
    PrimalVec::new(space, coeffs).expect("matching dimension")
}

/// Multi-start compass search for the smallest box distance from `f*` to
/// `Ax + lambda Jx`.  Every evaluated point is also checked against the
/// pointwise distance floor when the operator supports it.
pub fn distance_minimize<R: Real>(
    op: &OperatorSpec<R>,
    f_star: &DualPoint<R>,
    cfg: &SearchConfig<R>,
) -> Result<SearchOutcome<R>> {
    cfg.validate()?;
    if cfg.head_dim != op.space().head_dim() {
        return Err(Error::InvalidConfig(format!(
            "config head_dim {} does not match operator space {}",
            cfg.head_dim,
            op.space().head_dim()
        )));
    }
    let runs: Vec<StartRun<R>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|s| run_start(op, f_star, cfg, start_vector(op.space(), cfg.seed, s)))
        .collect::<Result<_>>()?;

    // Lexicographic merge: best value first, then lowest start index.
    let mut winner = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.best_distance < runs[winner].best_distance {
            winner = i;
        }
    }
    let mut trace = Vec::new();
    let mut running = R::infinity();
    for run in &runs {
        for &v in &run.trace {
            running = running.min(v);
            trace.push(running);
        }
    }
    Ok(SearchOutcome {
        best: runs[winner].best.clone(),
        best_distance: runs[winner].best_distance,
        trace,
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        floor_violations: runs.iter().map(|r| r.floor_violations).sum(),
    })
}
