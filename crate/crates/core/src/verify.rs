//! Finite-difference oracle suites behind `hwforms verify`.
//!
//! Every check compares an analytic derivative against central differences of
//! the quantity it differentiates, on random states near the identity.

use nalgebra::{SVector, Vector3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::assembly::{element_functional, element_residue, element_tangent, Discretization, ElementState};
use crate::bench::box_mesh;
use crate::forms::{edge_endpoints, eval_basis, ElementBasisEval, QuadratureRule};
use crate::materials::MaterialLaw;
use crate::mesh::SimplicialMesh;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, worst: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: worst.is_finite() && worst < tol,
            detail: format!("worst relative error {worst:.2e} (tolerance {tol:.0e})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Random element states per material law.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 20, seed: 2024 }
    }
}

/// The four benchmark materials with their benchmark parameters.
pub fn benchmark_laws() -> Vec<MaterialLaw> {
    vec![
        MaterialLaw::mooney_rivlin(126.0, 252.0, 81661.0),
        MaterialLaw::NeoHookeanLog {
            mu: 80.194,
            kappa: 400889.806,
        },
        MaterialLaw::quadratic_mooney_rivlin(24.0, 84.0),
        MaterialLaw::NeoHookeanJ2 { mu: 0.4, lambda: 1.6 },
    ]
}

pub fn run_all() -> Vec<CheckResult> {
    run_with(&VerifyOptions::default())
}

pub fn run_with(options: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = StdRng::seed_from_u64(options.seed);
    let mut out = Vec::new();
    for law in benchmark_laws() {
        out.push(check_law_derivatives(&law, &mut rng, options.samples));
        out.push(check_residue(&law, &mut rng, options.samples));
        out.push(check_tangent(&law, &mut rng, options.samples));
        out.push(check_global_tangent(&law, &mut rng));
    }
    out.push(check_stress_free());
    out
}

fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / na.max(nb).max(floor)
}

/// A jittered unit tetrahedron.
pub fn random_tet(rng: &mut StdRng) -> SimplicialMesh {
    loop {
        let base = [Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()];
        let verts = base
            .iter()
            .map(|p| p + Vector3::from_fn(|_, _| rng.random_range(-0.2..0.2)))
            .collect();
        if let Ok(mesh) = SimplicialMesh::new(verts, vec![[0, 1, 2, 3]]) {
            if mesh.volume() > 0.05 {
                return mesh;
            }
        }
    }
}

fn single_basis(mesh: &SimplicialMesh) -> ElementBasisEval {
    let geom = mesh.element_geometry(0).expect("valid tet");
    let signs = mesh.edge_of_tet(0).map(|r| r.sign);
    eval_basis(&geom, &signs, &QuadratureRule::default())
}

/// Identity deformation plus a random perturbation of size `size` in θ and u,
/// and O(1) random tractions.
pub fn random_state(mesh: &SimplicialMesh, rng: &mut StdRng, size: f64) -> ElementState {
    let p = mesh.tet_vertices(0);
    let signs = mesh.edge_of_tet(0).map(|r| r.sign);
    let theta = std::array::from_fn(|k| {
        let mut th = SVector::<f64, 12>::zeros();
        for e in 0..6 {
            let (a, b) = edge_endpoints(e, signs[e]);
            let delta = (p[b] - p[a])[k];
            th[2 * e] = delta + size * rng.random_range(-1.0..1.0);
            th[2 * e + 1] = -delta + size * rng.random_range(-1.0..1.0);
        }
        th
    });
    ElementState {
        theta,
        t: std::array::from_fn(|_| SVector::from_fn(|_, _| rng.random_range(-1.0..1.0))),
        u: std::array::from_fn(|_| SVector::from_fn(|_, _| size * rng.random_range(-1.0..1.0))),
    }
}

fn check_law_derivatives(law: &MaterialLaw, rng: &mut StdRng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let i1 = 3.0 + rng.random_range(-0.2..0.2);
        let i2 = 3.0 + rng.random_range(-0.2..0.2);
        let j = 1.0 + rng.random_range(-0.1..0.1);
        let Ok(d) = law.derivatives(i1, i2, j) else {
            return CheckResult::new(format!("{} energy derivatives", law.name()), f64::NAN, 1e-6);
        };
        let h = 1e-5;
        let at = |a: f64, b: f64, c: f64| law.derivatives(a, b, c).expect("admissible");
        let fd = [
            (at(i1 + h, i2, j).w - at(i1 - h, i2, j).w) / (2.0 * h),
            (at(i1, i2 + h, j).w - at(i1, i2 - h, j).w) / (2.0 * h),
            (at(i1, i2, j + h).w - at(i1, i2, j - h).w) / (2.0 * h),
            (at(i1 + h, i2, j).w1 - at(i1 - h, i2, j).w1) / (2.0 * h),
            (at(i1, i2 + h, j).w2 - at(i1, i2 - h, j).w2) / (2.0 * h),
            (at(i1, i2, j + h).wj - at(i1, i2, j - h).wj) / (2.0 * h),
        ];
        let analytic = [d.w1, d.w2, d.wj, d.w11, d.w22, d.wjj];
        let scale = analytic.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (a, f) in analytic.iter().zip(&fd) {
            worst = worst.max((a - f).abs() / scale);
        }
    }
    CheckResult::new(format!("{} energy derivatives", law.name()), worst, 1e-6)
}

fn check_residue(law: &MaterialLaw, rng: &mut StdRng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mesh = random_tet(rng);
        let basis = single_basis(&mesh);
        let state = random_state(&mesh, rng, 0.05);
        let Ok(r) = element_residue(&basis, law, &state) else {
            return CheckResult::new(format!("{} element residue", law.name()), f64::NAN, 1e-6);
        };
        let x = state.to_vector();
        let h = 1e-6;
        let fd: Vec<f64> = (0..x.len())
            .map(|i| {
                let (mut xp, mut xm) = (x, x);
                xp[i] += h;
                xm[i] -= h;
                let fp = element_functional(&basis, law, &ElementState::from_vector(&xp)).unwrap_or(f64::NAN);
                let fm = element_functional(&basis, law, &ElementState::from_vector(&xm)).unwrap_or(f64::NAN);
                (fp - fm) / (2.0 * h)
            })
            .collect();
        worst = worst.max(rel_err(r.as_slice(), &fd, 1e-8));
    }
    CheckResult::new(format!("{} element residue", law.name()), worst, 1e-6)
}

fn check_tangent(law: &MaterialLaw, rng: &mut StdRng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mesh = random_tet(rng);
        let basis = single_basis(&mesh);
        let state = random_state(&mesh, rng, 0.05);
        let Ok(k) = element_tangent(&basis, law, &state) else {
            return CheckResult::new(format!("{} element tangent", law.name()), f64::NAN, 1e-5);
        };
        let x = state.to_vector();
        let h = 1e-6;
        let mut fd = Vec::with_capacity(k.len());
        for j in 0..x.len() {
            let (mut xp, mut xm) = (x, x);
            xp[j] += h;
            xm[j] -= h;
            match (
                element_residue(&basis, law, &ElementState::from_vector(&xp)),
                element_residue(&basis, law, &ElementState::from_vector(&xm)),
            ) {
                (Ok(rp), Ok(rm)) => fd.extend(((rp - rm) / (2.0 * h)).iter().copied()),
                _ => return CheckResult::new(format!("{} element tangent", law.name()), f64::NAN, 1e-5),
            }
        }
        worst = worst.max(rel_err(k.as_slice(), &fd, 1e-8));
    }
    CheckResult::new(format!("{} element tangent", law.name()), worst, 1e-5)
}

/// Directional derivative of the assembled residual against the assembled
/// tangent on a 2×2×2 box.
fn check_global_tangent(law: &MaterialLaw, rng: &mut StdRng) -> CheckResult {
    let name = format!("{} assembled tangent", law.name());
    let Ok(mesh) = box_mesh([2, 2, 2], Vector3::zeros(), Vector3::repeat(1.0)) else {
        return CheckResult::new(name, f64::NAN, 1e-5);
    };
    let Ok(disc) = Discretization::new(&mesh, &QuadratureRule::default()) else {
        return CheckResult::new(name, f64::NAN, 1e-5);
    };
    let n = disc.dofmap.len();
    let mut x = vec![0.0; n];
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        let d = mesh.vertices()[b] - mesh.vertices()[a];
        for k in 0..3 {
            x[disc.dofmap.theta(k, e, 0)] = d[k] + 0.02 * rng.random_range(-1.0..1.0);
            x[disc.dofmap.theta(k, e, 1)] = -d[k] + 0.02 * rng.random_range(-1.0..1.0);
        }
    }
    for i in disc.dofmap.traction_range() {
        x[i] = rng.random_range(-1.0..1.0);
    }
    for i in disc.dofmap.displacement_range() {
        x[i] = 0.02 * rng.random_range(-1.0..1.0);
    }
    let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let zero = vec![0.0; n];
    let h = 1e-6;
    let shifted = |s: f64| -> Option<Vec<f64>> {
        let y: Vec<f64> = x.iter().zip(&dir).map(|(x, d)| x + s * d).collect();
        disc.assemble(law, &y, &zero, false).ok().map(|sys| sys.residual)
    };
    let (Some(rp), Some(rm), Ok(sys)) = (shifted(h), shifted(-h), disc.assemble(law, &x, &zero, true)) else {
        return CheckResult::new(name, f64::NAN, 1e-5);
    };
    let fd: Vec<f64> = rp.iter().zip(&rm).map(|(p, m)| (p - m) / (2.0 * h)).collect();
    let kd = disc.pattern.mul_vec(&sys.values, &dir);
    CheckResult::new(name, rel_err(&kd, &fd, 1e-8), 1e-5)
}

/// Residue on the reference tetrahedron at the identity state with zero
/// tractions.
fn check_stress_free() -> CheckResult {
    let name = "Mooney-Rivlin stress-free reference";
    let law = MaterialLaw::mooney_rivlin(126.0, 252.0, 81661.0);
    let mut rng = StdRng::seed_from_u64(1);
    let reference = vec![Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()];
    let mesh = SimplicialMesh::new(reference, vec![[0, 1, 2, 3]]).expect("reference tet");
    let basis = single_basis(&mesh);
    let mut state = random_state(&mesh, &mut rng, 0.0);
    state.t = [SVector::zeros(); 3];
    match element_residue(&basis, &law, &state) {
        Ok(r) => CheckResult {
            name: name.into(),
            passed: r.norm() < 1e-12,
            detail: format!("residue norm {:.2e}", r.norm()),
        },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            detail: e.to_string(),
        },
    }
}
