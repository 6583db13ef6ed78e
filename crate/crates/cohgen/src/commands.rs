//! One function per subcommand. Each writes its machine-readable output to the requested
//! files and returns the human summary for stdout together with the exit code.

use std::path::Path;

use cohgen_core::{
    capacity_qubit, max_surprisal_variance, optimal_hamiltonian, optimal_state, surprisal_variance,
    trajectory, CapacityResult, Error, ProbabilityVector, SolverConfig,
};
use serde::Serialize;

use crate::error::{exit, CliError, Result};
use crate::grid::TimeGrid;
use crate::json::{self, format_f64, MatrixJson};
use crate::solve::capacity_parallel;
use crate::verify::{run_suite, Level, LogBase, VerifyReport};

/// Summary line(s) for stdout and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    pub code: u8,
}

#[derive(Debug, Serialize)]
pub struct NumericReport {
    pub value: f64,
    pub method: &'static str,
    pub converged: bool,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub grad_norm: f64,
    pub min_diag: f64,
    pub argmax_state: MatrixJson,
}

impl From<&CapacityResult> for NumericReport {
    fn from(r: &CapacityResult) -> Self {
        NumericReport {
            value: r.value,
            method: r.method.as_str(),
            converged: r.converged,
            restarts_used: r.restarts_used,
            best_restart: r.best_restart,
            grad_norm: r.grad_norm,
            min_diag: r.min_diag,
            argmax_state: (&r.argmax_state).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyticReport {
    pub value: f64,
    pub method: &'static str,
    pub argmax_state: MatrixJson,
}

#[derive(Debug, Serialize)]
pub struct CapacityReport {
    pub dim: usize,
    pub seed: u64,
    pub restarts: usize,
    pub mixed: bool,
    /// Analytic value for qubits, numeric otherwise.
    pub value: f64,
    pub method: &'static str,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticReport>,
    pub numeric: NumericReport,
    /// `|numeric - analytic|` for qubits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

pub fn capacity(
    hamiltonian: &Path,
    dim: Option<usize>,
    cfg: &SolverConfig,
    out: Option<&Path>,
) -> Result<Outcome> {
    let h = json::read_hamiltonian(hamiltonian)?;
    if let Some(d) = dim {
        if d != h.dim() {
            return Err(CliError::parse(
                hamiltonian,
                Error::DimensionMismatch(h.dim(), d),
            ));
        }
    }
    if h.dim() < 2 {
        return Err(CliError::parse(
            hamiltonian,
            Error::InvalidDimension(h.dim()),
        ));
    }
    let numeric = match capacity_parallel(&h, cfg) {
        Ok(r) => r,
        Err(Error::NoConvergence(r)) => *r,
        Err(e) => return Err(e.into()),
    };
    let analytic = if h.dim() == 2 {
        Some(capacity_qubit(&h)?)
    } else {
        None
    };
    let (value, method) = match &analytic {
        Some(a) => (a.value, a.method.as_str()),
        None => (numeric.value, numeric.method.as_str()),
    };
    let report = CapacityReport {
        dim: h.dim(),
        seed: cfg.seed,
        restarts: cfg.restarts,
        mixed: cfg.mixed,
        value,
        method,
        converged: numeric.converged,
        gap: analytic.as_ref().map(|a| (numeric.value - a.value).abs()),
        analytic: analytic.as_ref().map(|a| AnalyticReport {
            value: a.value,
            method: a.method.as_str(),
            argmax_state: (&a.argmax_state).into(),
        }),
        numeric: (&numeric).into(),
    };
    if let Some(path) = out {
        json::write_file(path, &report)?;
    }

    let mut summary = format!(
        "capacity (d={}): {} bits per unit time [{}]",
        report.dim,
        format_f64(value),
        method
    );
    if let Some(gap) = report.gap {
        summary.push_str(&format!(
            "\nnumeric {} [{}], gap {gap:.3e}",
            format_f64(numeric.value),
            numeric.method.as_str()
        ));
    }
    let code = if numeric.converged {
        exit::SUCCESS
    } else {
        summary.push_str(&format!(
            "\nwarning: no restart reached grad_tol {:e} (best gradient norm {:.3e})",
            cfg.grad_tol, numeric.grad_norm
        ));
        exit::NO_CONVERGENCE
    };
    Ok(Outcome { summary, code })
}

#[derive(Debug, Serialize)]
pub struct OptimalReport {
    pub dim: usize,
    pub gamma: f64,
    pub f_max: f64,
    pub capacity_bound: f64,
    pub state: MatrixJson,
    pub hamiltonian: MatrixJson,
}

pub fn optimal(
    dim: usize,
    out: Option<&Path>,
    state_out: Option<&Path>,
    hamiltonian_out: Option<&Path>,
) -> Result<Outcome> {
    if dim < 2 {
        return Err(CliError::Usage(format!(
            "--dim must be at least 2, got {dim}"
        )));
    }
    let opt = max_surprisal_variance(dim)?;
    let state = optimal_state(dim, opt.gamma)?.density();
    let h = optimal_hamiltonian(dim)?;
    let report = OptimalReport {
        dim,
        gamma: opt.gamma,
        f_max: opt.f_max,
        capacity_bound: opt.capacity_bound,
        state: (&state).into(),
        hamiltonian: (&h).into(),
    };
    if let Some(path) = out {
        json::write_file(path, &report)?;
    }
    if let Some(path) = state_out {
        json::write_file(path, &report.state)?;
    }
    if let Some(path) = hamiltonian_out {
        json::write_file(path, &report.hamiltonian)?;
    }
    Ok(Outcome {
        summary: format!(
            "optimal (d={dim}): gamma = {}, f_max = {}, capacity bound = {}",
            format_f64(opt.gamma),
            format_f64(opt.f_max),
            format_f64(opt.capacity_bound)
        ),
        code: exit::SUCCESS,
    })
}

pub fn evolve(
    state: &Path,
    hamiltonian: &Path,
    grid: &TimeGrid,
    out: Option<&Path>,
) -> Result<Outcome> {
    let rho = json::read_state(state)?;
    let h = json::read_hamiltonian(hamiltonian)?;
    if rho.dim() != h.dim() {
        return Err(CliError::parse(
            hamiltonian,
            Error::DimensionMismatch(rho.dim(), h.dim()),
        ));
    }
    let traj = trajectory(&rho, &h, &grid.times())?;
    if let Some(path) = out {
        json::write_text(path, &json::trajectory_csv(&traj))?;
    }
    let (t, c) = traj.max_coherence();
    Ok(Outcome {
        summary: format!(
            "evolve (d={}, {} samples): C_r(t=0) = {}, max C_r = {} at t = {}",
            rho.dim(),
            traj.len(),
            format_f64(traj.coherence[0]),
            format_f64(c),
            format_f64(t)
        ),
        code: exit::SUCCESS,
    })
}

#[derive(Debug, Serialize)]
pub struct ScanSummary {
    pub dim: usize,
    pub resolution: usize,
    pub gamma: f64,
    pub f_max: f64,
    pub capacity_bound: f64,
    pub grid_best_gamma: f64,
    pub grid_best_f: f64,
    /// Other grid local maxima within the grid's own step-to-step variation of `f_max`.
    pub degenerate_gammas: Vec<f64>,
}

fn family_point(dim: usize, gamma: f64) -> Result<ProbabilityVector> {
    let tail = (1.0 - gamma) / (dim - 1) as f64;
    let mut p = vec![tail; dim];
    p[0] = gamma;
    Ok(ProbabilityVector::new(p)?)
}

pub fn scan_gamma(
    dim: usize,
    resolution: usize,
    out: Option<&Path>,
    summary_out: Option<&Path>,
) -> Result<Outcome> {
    if dim < 2 {
        return Err(CliError::Usage(format!(
            "--dim must be at least 2, got {dim}"
        )));
    }
    if resolution < 2 {
        return Err(CliError::Usage(format!(
            "--resolution must be at least 2, got {resolution}"
        )));
    }
    let opt = max_surprisal_variance(dim)?;
    let mut rows = Vec::with_capacity(resolution + 1);
    for k in 0..=resolution {
        let gamma = k as f64 / resolution as f64;
        let f = surprisal_variance(&family_point(dim, gamma)?);
        rows.push((gamma, f));
    }
    let mut csv = String::from("gamma,f,sqrt2f\n");
    for &(g, f) in &rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            format_f64(g),
            format_f64(f),
            format_f64((2.0 * f).sqrt())
        ));
    }
    let best = rows
        .iter()
        .fold(rows[0], |b, &r| if r.1 > b.1 { r } else { b });
    let step_variation = rows
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max);
    let near_gamma = 1.5 / resolution as f64;
    let degenerate_gammas = (1..resolution)
        .filter(|&k| rows[k].1 >= rows[k - 1].1 && rows[k].1 >= rows[k + 1].1)
        .map(|k| rows[k])
        .filter(|&(g, f)| (g - opt.gamma).abs() > near_gamma && opt.f_max - f <= step_variation)
        .map(|(g, _)| g)
        .collect();
    let summary = ScanSummary {
        dim,
        resolution,
        gamma: opt.gamma,
        f_max: opt.f_max,
        capacity_bound: opt.capacity_bound,
        grid_best_gamma: best.0,
        grid_best_f: best.1,
        degenerate_gammas,
    };
    if let Some(path) = out {
        json::write_text(path, &csv)?;
    }
    if let Some(path) = summary_out {
        json::write_file(path, &summary)?;
    }
    let mut text = format!(
        "scan-gamma (d={dim}, {} rows): gamma* = {}, f_max = {}, capacity bound = {}",
        rows.len(),
        format_f64(opt.gamma),
        format_f64(opt.f_max),
        format_f64(opt.capacity_bound)
    );
    if !summary.degenerate_gammas.is_empty() {
        text.push_str(&format!(
            "\nother maxima on the grid near gamma = {:?}",
            summary.degenerate_gammas
        ));
    }
    Ok(Outcome {
        summary: text,
        code: exit::SUCCESS,
    })
}

pub fn verify(level: Level, seed: u64, base: LogBase, out: Option<&Path>) -> Result<Outcome> {
    let report: VerifyReport = run_suite(level, seed, base);
    if let Some(path) = out {
        json::write_file(path, &report)?;
    }
    let mut summary = String::new();
    for c in &report.checks {
        summary.push_str(&format!(
            "[{}] {}: residual {:.3e} (tol {:.0e}, n={})\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance,
            c.samples
        ));
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    summary.push_str(&format!(
        "verify {}: {} checks, {failed} failed",
        report.level,
        report.checks.len()
    ));
    Ok(Outcome {
        summary,
        code: if report.passed {
            exit::SUCCESS
        } else {
            exit::VERIFICATION_FAILED
        },
    })
}
