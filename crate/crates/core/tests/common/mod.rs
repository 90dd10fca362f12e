#![allow(dead_code)]

use hwforms::assembly::ElementState;
use hwforms::forms::{edge_endpoints, eval_basis, ElementBasisEval, QuadratureRule};
use hwforms::mesh::SimplicialMesh;
use hwforms::Vector3;
use nalgebra::SVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub mod baseline;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A positively oriented tetrahedron with random, well shaped vertices.
pub fn random_tet(rng: &mut StdRng) -> SimplicialMesh {
    loop {
        let base = [Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()];
        let verts: Vec<Vector3<f64>> = base
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

pub fn basis_of(mesh: &SimplicialMesh, tet: usize, rule: &QuadratureRule) -> ElementBasisEval {
    let geom = mesh.element_geometry(tet).unwrap();
    let signs = mesh.edge_of_tet(tet).map(|r| r.sign);
    eval_basis(&geom, &signs, rule)
}

/// θ DoFs interpolating `dφ` for the affine map `φ(X) = F X + c`; rows of `F`
/// are the deformation forms.
pub fn affine_theta(mesh: &SimplicialMesh, tet: usize, f: &nalgebra::Matrix3<f64>) -> [SVector<f64, 12>; 3] {
    let p = mesh.tet_vertices(tet);
    let signs = mesh.edge_of_tet(tet).map(|r| r.sign);
    std::array::from_fn(|k| {
        let mut th = SVector::<f64, 12>::zeros();
        for e in 0..6 {
            let (a, b) = edge_endpoints(e, signs[e]);
            let delta = f.row(k).transpose().dot(&(p[b] - p[a]));
            th[2 * e] = delta;
            th[2 * e + 1] = -delta;
        }
        th
    })
}

pub fn identity_state(mesh: &SimplicialMesh, tet: usize) -> ElementState {
    ElementState {
        theta: affine_theta(mesh, tet, &nalgebra::Matrix3::identity()),
        t: [SVector::zeros(); 3],
        u: [SVector::zeros(); 3],
    }
}

/// Random state near the identity with `J` safely positive.
pub fn random_state(mesh: &SimplicialMesh, tet: usize, rng: &mut StdRng, size: f64) -> ElementState {
    let mut s = identity_state(mesh, tet);
    for th in &mut s.theta {
        for v in th.iter_mut() {
            *v += size * rng.random_range(-1.0..1.0);
        }
    }
    for t in &mut s.t {
        for v in t.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
    }
    for u in &mut s.u {
        for v in u.iter_mut() {
            *v = size * rng.random_range(-1.0..1.0);
        }
    }
    s
}

/// Relative difference `‖a − b‖ / max(‖a‖, ‖b‖, floor)`.
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / na.max(nb).max(floor)
}
