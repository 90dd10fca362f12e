//! Newton iteration with linear load stepping.
//!
//! Each iteration assembles the tangent and residual at the current state,
//! eliminates prescribed displacement increments and solves the saddle-point
//! system with a sparse LU. Increments that would invert an element (J ≤ 0)
//! or blow up the residual are halved.

mod problem;

pub use problem::{Dirichlet, Prescribed, Probe, Problem};

use std::collections::BTreeMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::assembly::{Discretization, GlobalSystem, LinearSolver};
use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub steps: usize,
    /// Convergence when the residual norm drops below `rel_tol` times the
    /// larger of the applied load norm and the largest residual norm seen in
    /// the current load step...
    pub rel_tol: f64,
    /// ...or below this absolute floor.
    pub abs_tol: f64,
    /// Also converged once a full Newton increment is this small relative to
    /// the unknowns: the residual is then at its round-off floor.
    pub step_tol: f64,
    pub max_iters: usize,
    pub max_halvings: usize,
    /// Retry a failed step once with the remaining schedule split in half.
    pub refine_on_failure: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            steps: 10,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            step_tol: 1e-12,
            max_iters: 25,
            max_halvings: 8,
            refine_on_failure: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || !(self.step_tol >= 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Global unknown vector `[θ, t, u]` and the load factor it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    pub x: Vec<f64>,
    pub load_factor: f64,
}

/// Per-increment record written to the history file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub load_factor: f64,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    #[serde(rename = "min_J")]
    pub min_j: f64,
    pub probe_displacements: BTreeMap<String, f64>,
}

/// Outcome of one Newton solve at a fixed load factor.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub halvings: usize,
}

/// Estimated order `p` in `r_{k+1} ≈ C r_kᵖ` from the last three residual
/// norms that lie above the round-off floor.
pub fn convergence_order(residuals: &[f64]) -> Option<f64> {
    let top = residuals.iter().copied().fold(0.0f64, f64::max);
    let usable: Vec<f64> = residuals
        .iter()
        .copied()
        .filter(|&r| r > 1e-13 * top && r > 0.0)
        .collect();
    if usable.len() < 3 {
        return None;
    }
    let n = usable.len();
    let (r0, r1, r2) = (usable[n - 3], usable[n - 2], usable[n - 1]);
    if !(r1 < r0 && r2 < r1) {
        return None;
    }
    Some((r2 / r1).ln() / (r1 / r0).ln())
}

pub struct Solver {
    problem: Problem,
    disc: Discretization,
    reference_load: Vec<f64>,
    constraints: Vec<(usize, Prescribed)>,
    linear: LinearSolver,
    config: SolverConfig,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("dofs", &self.disc.dofmap.len())
            .field("elements", &self.disc.bases.len())
            .field("config", &self.config)
            .finish()
    }
}

impl Solver {
    pub fn new(problem: Problem, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let disc = Discretization::new(&problem.mesh, &problem.rule)?;
        let reference_load = problem.load_vector(&disc.dofmap)?;
        let constraints = problem.constraints(&disc.dofmap)?;
        Ok(Self {
            problem,
            disc,
            reference_load,
            constraints,
            linear: LinearSolver::new(),
            config,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        &self.problem.mesh
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn num_dofs(&self) -> usize {
        self.disc.dofmap.len()
    }

    /// Identity state: `u = 0`, `t = 0`, and θ interpolating `dX` exactly.
    pub fn init_state(&self) -> SolutionState {
        let dofmap = &self.disc.dofmap;
        let mut x = vec![0.0; dofmap.len()];
        let verts = self.problem.mesh.vertices();
        for (e, &[a, b]) in self.problem.mesh.edges().iter().enumerate() {
            let d = verts[b] - verts[a];
            for k in 0..3 {
                x[dofmap.theta(k, e, 0)] = d[k];
                x[dofmap.theta(k, e, 1)] = -d[k];
            }
        }
        SolutionState { x, load_factor: 0.0 }
    }

    pub fn displacement(&self, state: &SolutionState, vertex: usize) -> Vector3<f64> {
        let d = &self.disc.dofmap;
        Vector3::from_fn(|c, _| state.x[d.displacement(c, vertex)])
    }

    pub fn min_jacobian(&self, state: &SolutionState) -> f64 {
        self.disc.min_jacobian(&state.x)
    }

    pub fn load_at(&self, load_factor: f64) -> Vec<f64> {
        self.reference_load.iter().map(|f| load_factor * f).collect()
    }

    pub fn probes(&self, state: &SolutionState) -> BTreeMap<String, f64> {
        self.problem
            .probes
            .iter()
            .map(|p| {
                let sum: f64 = p.vertices.iter().map(|&v| self.displacement(state, v)[p.component]).sum();
                (p.name.clone(), sum / p.vertices.len().max(1) as f64)
            })
            .collect()
    }

    fn assemble(&self, x: &[f64], load_factor: f64, tangent: bool) -> Result<GlobalSystem> {
        let load = self.load_at(load_factor);
        self.disc.assemble(&self.problem.law, x, &load, tangent)
    }

    /// Residual norm over free rows plus the distance of the prescribed
    /// displacements from their targets.
    fn residual_norm(&self, sys: &GlobalSystem, gaps: &[(usize, f64)]) -> f64 {
        let mut fixed = vec![false; sys.residual.len()];
        for &(d, _) in gaps {
            fixed[d] = true;
        }
        let free: f64 = sys
            .residual
            .iter()
            .zip(&fixed)
            .filter(|(_, &f)| !f)
            .map(|(r, _)| r * r)
            .sum();
        let gap: f64 = gaps.iter().map(|(_, g)| g * g).sum();
        (free + gap).sqrt()
    }

    fn gaps(&self, x: &[f64], load_factor: f64) -> Vec<(usize, f64)> {
        self.constraints
            .iter()
            .map(|(d, p)| (*d, p.value(load_factor) - x[*d]))
            .collect()
    }

    /// Newton iteration at a fixed load factor, starting from `state`.
    pub fn newton(&mut self, state: &mut SolutionState, load_factor: f64) -> Result<NewtonReport> {
        state.load_factor = load_factor;
        let mut sys = self.assemble(&state.x, load_factor, true)?;
        let mut history = Vec::new();
        let mut reference = load_factor.abs() * self.reference_load.iter().map(|f| f * f).sum::<f64>().sqrt();
        let mut halvings = 0;
        for iter in 0..=self.config.max_iters {
            let gaps = self.gaps(&state.x, load_factor);
            let norm = self.residual_norm(&sys, &gaps);
            if !norm.is_finite() {
                return Err(Error::StepFailure {
                    load_factor,
                    reason: "non-finite residual".into(),
                });
            }
            history.push(norm);
            reference = reference.max(norm);
            let tol = (self.config.rel_tol * reference).max(self.config.abs_tol);
            if norm <= tol {
                return Ok(NewtonReport {
                    iterations: iter,
                    residual_history: history,
                    halvings,
                });
            }
            if iter == self.config.max_iters {
                break;
            }
            let gap_pending = gaps.iter().any(|(_, g)| *g != 0.0);
            sys.apply_dirichlet(&self.disc.pattern, &gaps);
            let rhs: Vec<f64> = sys.residual.iter().map(|r| -r).collect();
            let dx = self.linear.solve(&self.disc.pattern, &sys.values, &rhs)?;
            let step = dx.iter().fold(0.0f64, |m, d| m.max(d.abs()));
            let size = state.x.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if !gap_pending && step <= self.config.step_tol * size {
                for (x, d) in state.x.iter_mut().zip(&dx) {
                    *x += d;
                }
                return Ok(NewtonReport {
                    iterations: iter + 1,
                    residual_history: history,
                    halvings,
                });
            }

            let mut alpha = 1.0;
            let mut accepted = None;
            for h in 0..=self.config.max_halvings {
                let trial: Vec<f64> = state.x.iter().zip(&dx).map(|(x, d)| x + alpha * d).collect();
                if self.disc.min_jacobian(&trial) > 0.0 {
                    match self.assemble(&trial, load_factor, true) {
                        Ok(next) => {
                            let next_norm = self.residual_norm(&next, &self.gaps(&trial, load_factor));
                            if next_norm.is_finite() && (gap_pending || next_norm <= 10.0 * norm) {
                                halvings += h;
                                accepted = Some((trial, next));
                                break;
                            }
                        }
                        Err(Error::Inadmissible { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((trial, next)) => {
                    state.x = trial;
                    sys = next;
                }
                None => {
                    return Err(Error::StepFailure {
                        load_factor,
                        reason: format!(
                            "no admissible increment after {} halvings (iteration {})",
                            self.config.max_halvings,
                            iter + 1
                        ),
                    })
                }
            }
        }
        Err(Error::StepFailure {
            load_factor,
            reason: format!(
                "no convergence in {} iterations (residual {:e})",
                self.config.max_iters,
                history.last().copied().unwrap_or(f64::NAN)
            ),
        })
    }

    /// Ramps the load factor linearly to one. `observer` is called after each
    /// accepted increment.
    pub fn run_load_schedule(
        &mut self,
        mut observer: impl FnMut(&Solver, &SolutionState, &StepRecord) -> Result<()>,
    ) -> Result<(SolutionState, Vec<StepRecord>)> {
        let mut state = self.init_state();
        let mut records = Vec::new();
        let mut increment = 1.0 / self.config.steps as f64;
        let mut refined = false;
        let mut lf = 0.0;
        while lf < 1.0 - 1e-12 {
            let target = (lf + increment).min(1.0);
            let mut trial = state.clone();
            match self.newton(&mut trial, target) {
                Ok(report) => {
                    state = trial;
                    lf = target;
                    let record = StepRecord {
                        step: records.len() + 1,
                        load_factor: lf,
                        iterations: report.iterations,
                        residual_history: report.residual_history,
                        min_j: self.min_jacobian(&state),
                        probe_displacements: self.probes(&state),
                    };
                    observer(self, &state, &record)?;
                    records.push(record);
                }
                Err(Error::StepFailure { .. } | Error::SingularTangent(_) | Error::Inadmissible { .. })
                    if self.config.refine_on_failure && !refined =>
                {
                    refined = true;
                    increment *= 0.5;
                }
                Err(e) => return Err(e),
            }
        }
        Ok((state, records))
    }
}
