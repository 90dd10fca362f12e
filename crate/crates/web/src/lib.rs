//! Browser bindings: an incremental Cook's membrane solve, material response
//! curves and samples of the edge basis forms.

use hwforms::bench::{build_case, CaseName, CaseOptions};
use hwforms::forms::{eval_basis, QuadratureRule, PHI_COLS, PSI_COLS};
use hwforms::materials::MaterialLaw;
use hwforms::mesh::SimplicialMesh;
use hwforms::solver::{SolutionState, Solver, SolverConfig};
use hwforms::Vector3;
use wasm_bindgen::prelude::*;

fn js(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Cook's membrane solved one load increment at a time.
#[wasm_bindgen]
pub struct CookDemo {
    solver: Solver,
    state: SolutionState,
    steps: usize,
    taken: usize,
    residuals: Vec<f64>,
}

#[wasm_bindgen]
impl CookDemo {
    /// `n` cells per side of the profile, `steps` load increments and the
    /// shear traction at full load.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, steps: usize, traction: f64) -> Result<CookDemo, JsError> {
        if !(1..=12).contains(&n) {
            return Err(JsError::new("n must be between 1 and 12"));
        }
        let mut case = build_case(CaseName::Cook, n, &CaseOptions::default()).map_err(js)?;
        for (_, t) in &mut case.problem.tractions {
            *t = Vector3::new(0.0, 0.0, traction);
        }
        let config = SolverConfig {
            steps: steps.max(1),
            ..SolverConfig::default()
        };
        let solver = Solver::new(case.problem, config).map_err(js)?;
        let state = solver.init_state();
        Ok(Self {
            solver,
            state,
            steps: steps.max(1),
            taken: 0,
            residuals: Vec::new(),
        })
    }

    /// Advances one increment. Returns `false` once the full load is reached.
    pub fn step(&mut self) -> Result<bool, JsError> {
        if self.taken >= self.steps {
            return Ok(false);
        }
        let lf = (self.taken + 1) as f64 / self.steps as f64;
        let mut trial = self.state.clone();
        let report = self.solver.newton(&mut trial, lf).map_err(js)?;
        self.state = trial;
        self.taken += 1;
        self.residuals = report.residual_history;
        Ok(self.taken < self.steps)
    }

    pub fn load_factor(&self) -> f64 {
        self.state.load_factor
    }

    /// Deformed vertex coordinates, `[x0, y0, z0, x1, ...]`.
    pub fn positions(&self) -> Vec<f64> {
        let mesh = self.solver.mesh();
        (0..mesh.num_vertices())
            .flat_map(|v| {
                let p = mesh.vertices()[v] + self.solver.displacement(&self.state, v);
                [p.x, p.y, p.z]
            })
            .collect()
    }

    /// Vertex pairs of all mesh edges.
    pub fn edges(&self) -> Vec<u32> {
        self.solver
            .mesh()
            .edges()
            .iter()
            .flat_map(|e| [e[0] as u32, e[1] as u32])
            .collect()
    }

    pub fn tip_displacement(&self) -> f64 {
        self.solver.probes(&self.state).get("tip_uz").copied().unwrap_or(f64::NAN)
    }

    pub fn min_jacobian(&self) -> f64 {
        self.solver.min_jacobian(&self.state)
    }

    /// Newton residual norms of the last increment.
    pub fn residuals(&self) -> Vec<f64> {
        self.residuals.clone()
    }

    pub fn unknowns(&self) -> usize {
        self.solver.num_dofs()
    }
}

fn benchmark_law(name: &str) -> Result<MaterialLaw, JsError> {
    Ok(match name {
        "mooney_rivlin" => MaterialLaw::mooney_rivlin(126.0, 252.0, 81661.0),
        "neo_hookean_log" => MaterialLaw::NeoHookeanLog {
            mu: 80.194,
            kappa: 400889.806,
        },
        "quadratic_mooney_rivlin" => MaterialLaw::quadratic_mooney_rivlin(24.0, 84.0),
        "neo_hookean_j2" => MaterialLaw::NeoHookeanJ2 { mu: 0.4, lambda: 1.6 },
        other => return Err(JsError::new(&format!("unknown material `{other}`"))),
    })
}

/// Homogeneous response of a benchmark material as `[x, W, S, ...]` triples.
///
/// `mode = "shear"`: `F = I + γ e₁⊗e₂`, `x = γ`, `S = ∂W/∂γ`.
/// `mode = "confined"`: `F = diag(λ, 1, 1)`, `x = λ`, `S = ∂W/∂λ`.
#[wasm_bindgen]
pub fn material_curve(law: &str, mode: &str, max: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    let law = benchmark_law(law)?;
    let samples = samples.clamp(2, 2000);
    let mut out = Vec::with_capacity(3 * samples);
    for k in 0..samples {
        let s = k as f64 / (samples - 1) as f64;
        let (x, i1, i2, j, di1, di2, dj) = match mode {
            "shear" => {
                let g = max * s;
                (g, 3.0 + g * g, 3.0 + g * g, 1.0, 2.0 * g, 2.0 * g, 0.0)
            }
            "confined" => {
                let l = 1.0 + (max - 1.0) * s;
                (l, l * l + 2.0, 2.0 * l * l + 1.0, l, 2.0 * l, 4.0 * l, 1.0)
            }
            other => return Err(JsError::new(&format!("unknown mode `{other}`"))),
        };
        let d = law.derivatives(i1, i2, j).map_err(js)?;
        out.extend([x, d.w, d.w1 * di1 + d.w2 * di2 + d.wj * dj]);
    }
    Ok(out)
}

/// Samples one basis 1-form of the reference tetrahedron on its face `z = 0`
/// as `[x, y, vx, vy, ...]`. `family` is `"whitney"` (index 0..6) or `"p1"`
/// (index 0..12); only edges of that face have a non-zero tangential part.
#[wasm_bindgen]
pub fn basis_field(family: &str, index: usize, grid: usize) -> Result<Vec<f64>, JsError> {
    let limit = match family {
        "whitney" => PSI_COLS,
        "p1" => PHI_COLS,
        other => return Err(JsError::new(&format!("unknown family `{other}`"))),
    };
    if index >= limit {
        return Err(JsError::new(&format!("{family} basis index must be below {limit}")));
    }
    let grid = grid.clamp(2, 40);
    let mesh = SimplicialMesh::new(
        vec![Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()],
        vec![[0, 1, 2, 3]],
    )
    .map_err(js)?;
    let mut points = Vec::new();
    for i in 0..=grid {
        for j in 0..=grid - i {
            let (x, y) = (i as f64 / grid as f64, j as f64 / grid as f64);
            points.push([1.0 - x - y, x, y, 0.0]);
        }
    }
    let weights = vec![1.0 / points.len() as f64; points.len()];
    let rule = QuadratureRule::from_points(points, weights, 0);
    let geom = mesh.element_geometry(0).map_err(js)?;
    let signs = mesh.edge_of_tet(0).map(|r| r.sign);
    let basis = eval_basis(&geom, &signs, &rule);
    Ok(basis
        .points
        .iter()
        .flat_map(|p| {
            let v = if family == "whitney" {
                p.psi.column(index).into_owned()
            } else {
                p.phi.column(index).into_owned()
            };
            [p.bary[1], p.bary[2], v.x, v.y]
        })
        .collect())
}
