//! Flat `key=value` solver configuration files.
//!
//! Recognized keys: `restarts`, `max_iters`, `grad_tol`, `step_init`, `seed`, `mixed`.
//! Blank lines and lines starting with `#` are ignored. Unknown keys are errors.

use std::path::Path;

use cohgen_core::SolverConfig;

use crate::error::{CliError, Result};

/// Parses config text on top of `base`.
pub fn parse_config(text: &str, base: SolverConfig) -> std::result::Result<SolverConfig, String> {
    let mut cfg = base;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got {line:?}", n + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", n + 1);
        match key {
            "restarts" => cfg.restarts = value.parse().map_err(|e| bad(&e))?,
            "max_iters" => cfg.max_iters = value.parse().map_err(|e| bad(&e))?,
            "grad_tol" => cfg.grad_tol = value.parse().map_err(|e| bad(&e))?,
            "step_init" => cfg.step_init = value.parse().map_err(|e| bad(&e))?,
            "seed" => cfg.seed = value.parse().map_err(|e| bad(&e))?,
            "mixed" => cfg.mixed = value.parse().map_err(|e| bad(&e))?,
            _ => return Err(format!("line {}: unknown key {key:?}", n + 1)),
        }
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SolverConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, SolverConfig::default()).map_err(|e| CliError::parse(path, e))
}

/// Command-line overrides; `None` leaves the file or default value in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub mixed: bool,
}

/// Default config, then the file, then flags.
pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<SolverConfig> {
    let mut cfg = match file {
        Some(path) => load_config(path)?,
        None => SolverConfig::default(),
    };
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(restarts) = overrides.restarts {
        cfg.restarts = restarts;
    }
    if overrides.mixed {
        cfg.mixed = true;
    }
    cfg.validate()?;
    Ok(cfg)
}
