//! The four subcommands.

use serde::Serialize;

use rugged_core::bounds::bounds_report;
use rugged_core::explorer::{convexity_gap_report, ruggedness_check, SearchConfig};
use rugged_core::operators::OperatorSpec;
use rugged_core::verify::{run_suite, Suite, VerifyParams};
use rugged_core::{Operator64, Space64, WitnessRecord64};

use crate::config::EffectiveConfig;
use crate::output::{fmt_float, RunDir};
use crate::AppError;

fn usage(e: impl std::fmt::Display) -> AppError {
    AppError::Usage(e.to_string())
}

/// `bounds-table`: one row of floor/root/threshold values per lambda.
pub fn bounds_table(cfg: &EffectiveConfig) -> Result<bool, AppError> {
    let run = RunDir::create(&cfg.out, "bounds-table")?;
    run.write_json("config.json", cfg)?;

    let header = [
        "lambda",
        "m_lambda",
        "smaller_root",
        "larger_root",
        "threshold",
        "tau",
        "identity_residual_max",
    ];
    let mut rows = Vec::with_capacity(cfg.lambdas.len());
    for &lambda in &cfg.lambdas {
        let rep = bounds_report(lambda).map_err(usage)?;
        let residual_max = rep
            .identity_residuals
            .values()
            .fold(0.0f64, |acc, r| acc.max(r.abs()));
        rows.push(vec![
            fmt_float(rep.lambda),
            fmt_float(rep.m_value),
            fmt_float(rep.roots.0),
            fmt_float(rep.roots.1),
            fmt_float(rep.threshold),
            fmt_float(rep.tau),
            fmt_float(residual_max),
        ]);
    }
    let path = run.write_csv("results.csv", &header, &rows)?;
    run.write_json(
        "summary.json",
        &serde_json::json!({ "rows": rows.len(), "csv": path }),
    )?;
    println!("bounds-table: {} rows -> {}", rows.len(), path.display());
    Ok(true)
}

/// `verify`: run a named suite, emit per-check residuals, fail on any check.
pub fn verify(cfg: &EffectiveConfig) -> Result<bool, AppError> {
    let suite: Suite = cfg
        .suite
        .as_deref()
        .unwrap_or("all")
        .parse()
        .map_err(usage)?;
    let params = VerifyParams {
        seed: cfg.seed,
        head_dim: cfg.head_dim,
        samples: cfg.samples.unwrap_or(2000),
        lambdas: cfg.lambdas.clone(),
    };
    let run = RunDir::create(&cfg.out, "verify")?;
    run.write_json("config.json", cfg)?;

    let results = run_suite(suite, &params).map_err(|e| AppError::Run(e.to_string()))?;
    let all_passed = results.iter().all(|r| r.passed);

    let header = ["check", "passed", "residual", "detail"];
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.passed.to_string(),
                fmt_float(r.residual),
                r.detail.clone(),
            ]
        })
        .collect();
    run.write_csv("results.csv", &header, &rows)?;
    run.write_json(
        "summary.json",
        &serde_json::json!({
            "suite": cfg.suite.as_deref().unwrap_or("all"),
            "passed": all_passed,
            "checks": results,
        }),
    )?;

    for r in &results {
        println!(
            "{} {:<34} residual {:>12.3e}  {}",
            if r.passed { "ok  " } else { "FAIL" },
            r.name,
            r.residual,
            r.detail
        );
    }
    Ok(all_passed)
}

fn build_operator(op: &str, head_dim: usize) -> Result<Operator64, AppError> {
    match op {
        "gossez" => OperatorSpec::gossez(&Space64::l1(head_dim)).map_err(usage),
        "neg-gossez" => Ok(OperatorSpec::gossez(&Space64::l1(head_dim))
            .map_err(usage)?
            .negate()),
        "fp-grid" => OperatorSpec::fp_grid(&Space64::l1_grid(head_dim)).map_err(usage),
        "neg-fp-grid" => Ok(OperatorSpec::fp_grid(&Space64::l1_grid(head_dim))
            .map_err(usage)?
            .negate()),
        other => Err(AppError::Usage(format!(
            "unknown operator {other:?}; expected gossez, neg-gossez, fp-grid or neg-fp-grid"
        ))),
    }
}

#[derive(Serialize)]
struct WitnessEntry {
    lambda: f64,
    midpoint: Option<WitnessRecord64>,
    combos: Vec<WitnessRecord64>,
}

/// `explore`: gap table rows plus serialized witnesses, deterministic in the
/// master seed.
pub fn explore(cfg: &EffectiveConfig) -> Result<bool, AppError> {
    let op_name = cfg.op.as_deref().unwrap_or("gossez");
    let op = build_operator(op_name, cfg.head_dim)?;
    let run = RunDir::create(&cfg.out, "explore")?;
    run.write_json("config.json", cfg)?;

    let header = [
        "op",
        "lambda",
        "m_lambda",
        "threshold",
        "floor",
        "model_slack",
        "best_single",
        "midpoint_distance",
        "best_combo_2",
        "best_combo_3",
        "best_combo_4",
        "certified",
    ];
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    let mut all_floor_safe = true;
    for &lambda in &cfg.lambdas {
        let mut search = SearchConfig::new(cfg.head_dim, lambda).with_seed(cfg.seed);
        if let Some(r) = cfg.restarts {
            search.restarts = r;
        }
        if let Some(b) = cfg.budget {
            search.budget = b;
        }
        if let Some(s) = cfg.initial_step {
            search.initial_step = s;
        }
        if let Some(s) = cfg.shrink {
            search.shrink = s;
        }
        let report = convexity_gap_report(&op, &search).map_err(usage)?;
        all_floor_safe = all_floor_safe && report.floor_violations == 0;
        let row = &report.row;
        rows.push(vec![
            op_name.to_string(),
            fmt_float(row.lambda),
            fmt_float(row.m_lambda),
            fmt_float(row.threshold),
            fmt_float(row.floor),
            fmt_float(row.model_slack),
            fmt_float(row.best_single),
            row.midpoint_distance.map(fmt_float).unwrap_or_default(),
            fmt_float(row.best_combo_2),
            fmt_float(row.best_combo_3),
            fmt_float(row.best_combo_4),
            row.certified.to_string(),
        ]);
        witnesses.push(WitnessEntry {
            lambda,
            midpoint: report.midpoint_witness,
            combos: report.combo_witnesses,
        });
    }
    let path = run.write_csv("results.csv", &header, &rows)?;
    run.write_json("witnesses.json", &witnesses)?;
    run.write_json(
        "summary.json",
        &serde_json::json!({
            "op": op_name,
            "lambdas": cfg.lambdas,
            "seed": cfg.seed,
            "floor_safe": all_floor_safe,
            "certified": rows.iter().map(|r| r[11].clone()).collect::<Vec<_>>(),
        }),
    )?;
    println!("explore: {} rows -> {}", rows.len(), path.display());
    Ok(all_floor_safe)
}

/// `rugged-check`: interval pattern of the two-generator construction.
pub fn rugged_check(cfg: &EffectiveConfig) -> Result<bool, AppError> {
    let preset = cfg.preset.as_deref().unwrap_or("l1");
    let space = match preset {
        "l1" => Space64::l1(cfg.head_dim),
        "l1-grid" => Space64::l1_grid(cfg.head_dim),
        other => {
            return Err(AppError::Usage(format!(
                "unknown preset {other:?}; expected l1 or l1-grid"
            )))
        }
    };
    let rep = ruggedness_check(&space).map_err(usage)?;
    let run = RunDir::create(&cfg.out, "rugged-check")?;
    run.write_json("config.json", cfg)?;

    let header = [
        "preset",
        "head_dim",
        "generator_support",
        "single_own_lo",
        "single_own_hi",
        "sum_on_supports_lo",
        "sum_on_supports_hi",
        "sum_elsewhere_lo",
        "sum_elsewhere_hi",
        "passed",
    ];
    let rows = vec![vec![
        preset.to_string(),
        cfg.head_dim.to_string(),
        rep.generator_support.to_string(),
        fmt_float(rep.single_own.lo),
        fmt_float(rep.single_own.hi),
        fmt_float(rep.sum_on_supports.lo),
        fmt_float(rep.sum_on_supports.hi),
        fmt_float(rep.sum_elsewhere.lo),
        fmt_float(rep.sum_elsewhere.hi),
        rep.passed.to_string(),
    ]];
    run.write_csv("results.csv", &header, &rows)?;
    run.write_json("summary.json", &rep)?;
    println!(
        "rugged-check: preset {preset}, K = {}, passed = {}",
        cfg.head_dim, rep.passed
    );
    Ok(rep.passed)
}

/// Default lambda grid shared by the commands.
pub fn default_lambdas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0, 8.0]
}
