//! Experiment configuration: one JSON document, flags override file values.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::AppError;

/// File-level configuration. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub lambdas: Option<Vec<f64>>,
    pub head_dim: Option<usize>,
    pub op: Option<String>,
    pub restarts: Option<usize>,
    pub budget: Option<usize>,
    pub initial_step: Option<f64>,
    pub shrink: Option<f64>,
    pub suite: Option<String>,
    pub preset: Option<String>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, AppError> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| {
                    AppError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| AppError::Usage(format!("invalid config {}: {e}", p.display())))
            }
        }
    }
}

/// Precedence: command-line flag, then config file, then default.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Effective settings echoed into the run directory.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub command: String,
    pub seed: u64,
    pub lambdas: Vec<f64>,
    pub head_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrink: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub out: PathBuf,
}
