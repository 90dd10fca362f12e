use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::cases::{build_case, CaseName, CaseOptions};
use super::norms::convergence_norms;
use super::output::vtk_string;
use crate::solver::{Solver, SolverConfig, StepRecord};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VtkOutput {
    EveryStep,
    FinalStep,
    Off,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub refinements: Vec<usize>,
    pub solver: SolverConfig,
    pub law_overrides: Vec<(String, f64)>,
    pub case: CaseOptions,
    pub vtk: VtkOutput,
    /// Progress lines on stderr.
    pub verbose: bool,
}

impl RunOptions {
    /// Defaults for `case`: its refinement ladder and load step count.
    pub fn for_case(case: CaseName) -> Self {
        Self {
            refinements: case.default_refinements(),
            solver: SolverConfig {
                steps: case.default_steps(),
                ..SolverConfig::default()
            },
            law_overrides: Vec::new(),
            case: CaseOptions::default(),
            vtk: VtkOutput::EveryStep,
            verbose: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementResult {
    pub refinement: usize,
    pub dofs: usize,
    pub elements: usize,
    pub theta_norm: f64,
    pub p_norm: f64,
    pub probes: BTreeMap<String, f64>,
    pub history: Vec<StepRecord>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub case: CaseName,
    pub rows: Vec<RefinementResult>,
}

fn rel_change(prev: f64, next: f64) -> f64 {
    (next - prev) / next.abs().max(f64::MIN_POSITIVE)
}

impl ConvergenceReport {
    /// One row per refinement with absolute values, differences to the
    /// previous refinement and relative changes (empty on the first row).
    pub fn to_csv(&self) -> String {
        let probes: Vec<String> = self
            .rows
            .first()
            .map(|r| r.probes.keys().cloned().collect())
            .unwrap_or_default();
        let mut out = String::from(
            "refinement,dofs,elements,theta_norm,p_norm,theta_norm_diff,p_norm_diff,theta_norm_rel_change,p_norm_rel_change",
        );
        for p in &probes {
            let _ = write!(out, ",{p},{p}_rel_change");
        }
        out.push('\n');
        let mut prev: Option<&RefinementResult> = None;
        for row in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{:.12e},{:.12e}",
                row.refinement, row.dofs, row.elements, row.theta_norm, row.p_norm
            );
            match prev {
                Some(p) => {
                    let _ = write!(
                        out,
                        ",{:.6e},{:.6e},{:.6e},{:.6e}",
                        row.theta_norm - p.theta_norm,
                        row.p_norm - p.p_norm,
                        rel_change(p.theta_norm, row.theta_norm),
                        rel_change(p.p_norm, row.p_norm)
                    );
                }
                None => out.push_str(",,,,"),
            }
            for name in &probes {
                let value = row.probes.get(name).copied().unwrap_or(f64::NAN);
                let _ = write!(out, ",{value:.12e},");
                if let Some(before) = prev.and_then(|p| p.probes.get(name)) {
                    let _ = write!(out, "{:.6e}", rel_change(*before, value));
                }
            }
            out.push('\n');
            prev = Some(row);
        }
        out
    }

    /// Relative change of `probe` between the last two refinements.
    pub fn final_probe_change(&self, probe: &str) -> Option<f64> {
        let n = self.rows.len();
        if n < 2 {
            return None;
        }
        let a = self.rows[n - 2].probes.get(probe)?;
        let b = self.rows[n - 1].probes.get(probe)?;
        Some(rel_change(*a, *b).abs())
    }
}

pub fn history_path(out: &Path, case: CaseName, n: usize) -> PathBuf {
    out.join(format!("{case}_r{n}_history.json"))
}

pub fn convergence_path(out: &Path, case: CaseName) -> PathBuf {
    out.join(format!("{case}_convergence.csv"))
}

pub fn vtk_path(out: &Path, case: CaseName, n: usize, step: usize) -> PathBuf {
    out.join(format!("{case}_r{n}_step{step}.vtk"))
}

/// Solves one refinement level. Output files go to `out` when given.
pub fn run_refinement(case: CaseName, n: usize, options: &RunOptions, out: Option<&Path>) -> Result<RefinementResult> {
    solve_refinement(case, n, options, out).map_err(|e| Error::Refinement {
        case: case.to_string(),
        refinement: n,
        source: Box::new(e),
    })
}

fn solve_refinement(case: CaseName, n: usize, options: &RunOptions, out: Option<&Path>) -> Result<RefinementResult> {
    let started = Instant::now();
    let mut bench = build_case(case, n, &options.case)?;
    for (key, value) in &options.law_overrides {
        bench.problem.law = bench.problem.law.with_param(key, *value)?;
    }
    let mut solver = Solver::new(bench.problem, options.solver.clone())?;
    if options.verbose {
        eprintln!(
            "{case} r{n}: {} elements, {} unknowns, {} steps",
            solver.mesh().num_tets(),
            solver.num_dofs(),
            options.solver.steps
        );
    }
    let total_steps = options.solver.steps;
    let (state, history) = solver.run_load_schedule(|solver, state, record| {
        if options.verbose {
            eprintln!(
                "  step {:>3}  λ = {:.4}  iterations {:>2}  min J {:.4}  residual {:.3e}",
                record.step,
                record.load_factor,
                record.iterations,
                record.min_j,
                record.residual_history.last().copied().unwrap_or(0.0)
            );
        }
        let write = match options.vtk {
            VtkOutput::EveryStep => true,
            VtkOutput::FinalStep => record.load_factor >= 1.0 - 1e-12,
            VtkOutput::Off => false,
        };
        if let (Some(dir), true) = (out, write) {
            let mesh = solver.mesh();
            let u: Vec<Vector3<f64>> = (0..mesh.num_vertices()).map(|v| solver.displacement(state, v)).collect();
            let cell_j = solver.discretization().element_min_jacobians(&state.x);
            let title = format!("hwforms {case} r{n} step {} of {total_steps}+ load factor {}", record.step, record.load_factor);
            std::fs::write(vtk_path(dir, case, n, record.step), vtk_string(mesh, &u, &cell_j, &title))?;
        }
        Ok(())
    })?;
    let (theta_norm, p_norm) = convergence_norms(solver.discretization(), &state.x);
    let result = RefinementResult {
        refinement: n,
        dofs: solver.num_dofs(),
        elements: solver.mesh().num_tets(),
        theta_norm,
        p_norm,
        probes: solver.probes(&state),
        history,
        seconds: started.elapsed().as_secs_f64(),
    };
    if let Some(dir) = out {
        std::fs::write(
            history_path(dir, case, n),
            serde_json::to_string_pretty(&result.history)?,
        )?;
    }
    Ok(result)
}

/// Runs every requested refinement and writes the convergence table.
pub fn run_case(case: CaseName, options: &RunOptions, out: Option<&Path>) -> Result<ConvergenceReport> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
    }
    let mut refinements = options.refinements.clone();
    refinements.sort_unstable();
    refinements.dedup();
    let mut report = ConvergenceReport {
        case,
        rows: Vec::new(),
    };
    for n in refinements {
        report.rows.push(run_refinement(case, n, options, out)?);
        if let Some(dir) = out {
            std::fs::write(convergence_path(dir, case), report.to_csv())?;
        }
    }
    Ok(report)
}
