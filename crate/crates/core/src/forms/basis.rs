use nalgebra::{Matrix3x4, SMatrix, Vector3, Vector4};

use super::QuadratureRule;
use crate::mesh::{AffineElementMap, LOCAL_EDGES};

pub const PHI_COLS: usize = 12;
pub const PSI_COLS: usize = 6;

/// Basis values at one quadrature point.
#[derive(Debug, Clone)]
pub struct PointBasis {
    pub bary: [f64; 4],
    /// Quadrature weight times element volume.
    pub weight: f64,
    pub n: Vector4<f64>,
    /// Columns `2e`, `2e+1`: `λᵃdλᵇ` and `λᵇdλᵃ` for local edge `e` traversed
    /// `a -> b` in its global direction.
    pub phi: SMatrix<f64, 3, PHI_COLS>,
    /// Column `e`: Whitney form `λᵃdλᵇ − λᵇdλᵃ` of the same oriented edge.
    pub psi: SMatrix<f64, 3, PSI_COLS>,
}

#[derive(Debug, Clone)]
pub struct ElementBasisEval {
    pub volume: f64,
    /// Column `i` is `dλⁱ`; constant on the element.
    pub dn: Matrix3x4<f64>,
    pub points: Vec<PointBasis>,
}

/// Local endpoints of edge `e` in the direction of its global edge.
#[inline]
pub fn edge_endpoints(e: usize, sign: i8) -> (usize, usize) {
    let [i, j] = LOCAL_EDGES[e];
    if sign >= 0 {
        (i, j)
    } else {
        (j, i)
    }
}

fn point_basis(geom: &AffineElementMap, signs: &[i8; 6], bary: [f64; 4], weight: f64) -> PointBasis {
    let g = &geom.grad_lambda;
    let mut phi = SMatrix::<f64, 3, PHI_COLS>::zeros();
    let mut psi = SMatrix::<f64, 3, PSI_COLS>::zeros();
    for e in 0..6 {
        let (a, b) = edge_endpoints(e, signs[e]);
        let ab = bary[a] * g.column(b);
        let ba = bary[b] * g.column(a);
        phi.set_column(2 * e, &ab);
        phi.set_column(2 * e + 1, &ba);
        psi.set_column(e, &(ab - ba));
    }
    PointBasis {
        bary,
        weight,
        n: Vector4::from(bary),
        phi,
        psi,
    }
}

pub fn eval_basis(geom: &AffineElementMap, signs: &[i8; 6], rule: &QuadratureRule) -> ElementBasisEval {
    let points = rule
        .iter()
        .map(|(bary, w)| point_basis(geom, signs, *bary, w * geom.volume))
        .collect();
    ElementBasisEval {
        volume: geom.volume,
        dn: geom.grad_lambda,
        points,
    }
}

/// Edge DoFs reproducing a constant 1-form on the edge running `from -> to`:
/// the `P1Λ¹` pair is `[Δ, −Δ]` and the Whitney coefficient is `Δ`, with
/// `Δ = form · (to − from)`.
pub fn constant_form_edge_dofs(form: &Vector3<f64>, from: &Vector3<f64>, to: &Vector3<f64>) -> [f64; 2] {
    let delta = form.dot(&(to - from));
    [delta, -delta]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::SimplicialMesh;

    fn reference() -> SimplicialMesh {
        SimplicialMesh::new(
            vec![Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()],
            vec![[0, 1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn partition_of_unity_and_pairing() {
        let mesh = reference();
        let geom = mesh.element_geometry(0).unwrap();
        let basis = eval_basis(&geom, &[1; 6], &QuadratureRule::keast11());
        for p in &basis.points {
            assert!((p.n.sum() - 1.0).abs() < 1e-14);
            for e in 0..6 {
                let diff = p.phi.column(2 * e) - p.phi.column(2 * e + 1);
                assert_eq!(diff, p.psi.column(e));
            }
        }
        let w: f64 = basis.points.iter().map(|p| p.weight).sum();
        assert!((w - geom.volume).abs() < 1e-15);
    }

    #[test]
    fn constant_form_is_reproduced() {
        let mesh = SimplicialMesh::new(
            vec![
                Vector3::new(0.1, 0.0, 0.2),
                Vector3::new(1.3, 0.2, 0.0),
                Vector3::new(0.2, 0.9, 0.1),
                Vector3::new(0.3, 0.4, 1.1),
            ],
            vec![[0, 1, 2, 3]],
        )
        .unwrap();
        let geom = mesh.element_geometry(0).unwrap();
        let signs = [1, -1, 1, -1, 1, 1];
        let basis = eval_basis(&geom, &signs, &QuadratureRule::four_point());
        let p = mesh.tet_vertices(0);
        let form = Vector3::new(0.4, -1.1, 2.0);
        let mut theta = [0.0; 12];
        let mut whitney = [0.0; 6];
        for e in 0..6 {
            let (a, b) = edge_endpoints(e, signs[e]);
            let d = constant_form_edge_dofs(&form, &p[a], &p[b]);
            theta[2 * e] = d[0];
            theta[2 * e + 1] = d[1];
            whitney[e] = d[0];
        }
        for q in &basis.points {
            let v = q.phi * SMatrix::<f64, 12, 1>::from_column_slice(&theta);
            let w = q.psi * SMatrix::<f64, 6, 1>::from_column_slice(&whitney);
            assert!((v - form).norm() < 1e-13);
            assert!((w - form).norm() < 1e-13);
        }
    }
}
