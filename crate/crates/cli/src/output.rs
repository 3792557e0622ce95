//! Run-directory layout and CSV formatting.
//!
//! Each command invocation writes one subdirectory under the output root
//! containing the effective config echo (`config.json`), the table
//! (`results.csv`) and a JSON summary (`summary.json`).  CSV output is
//! RFC-4180-style: comma separated, header row, decimal points, floats with
//! 17 significant digits, no locale formatting.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::AppError;

pub struct RunDir {
    pub dir: PathBuf,
}

impl RunDir {
    pub fn create(out_root: &Path, command: &str) -> Result<Self, AppError> {
        let dir = out_root.join(command);
        fs::create_dir_all(&dir)
            .map_err(|e| AppError::Run(format!("cannot create {}: {e}", dir.display())))?;
        Ok(RunDir { dir })
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), AppError> {
        let path = self.dir.join(name);
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| AppError::Run(format!("serialize {name}: {e}")))?;
        fs::write(&path, text + "\n")
            .map_err(|e| AppError::Run(format!("write {}: {e}", path.display())))
    }

    pub fn write_csv(
        &self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf, AppError> {
        let mut text = String::new();
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            let escaped: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
            text.push_str(&escaped.join(","));
            text.push('\n');
        }
        let path = self.dir.join(name);
        fs::write(&path, text)
            .map_err(|e| AppError::Run(format!("write {}: {e}", path.display())))?;
        Ok(path)
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        let v = 0.063_249_747_919_219_84;
        let s = fmt_float(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
