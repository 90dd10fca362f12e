use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::forms::{PointBasis, PHI_COLS};

/// `E(z)` with `E(z) v = v × z`, i.e. minus the cross-product matrix.
#[inline]
pub fn levi_civita_matrix(z: &Vector3<f64>) -> Matrix3<f64> {
    -crate::forms::cross_matrix(z)
}

/// Invariants and their derivatives with respect to an `N`-dimensional
/// parametrisation of each deformation form. `N = 3` is the pointwise
/// coefficient vector, `N = 12` the element DoFs.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantState<const N: usize> {
    pub i1: f64,
    pub i2: f64,
    pub j: f64,
    pub d_i1: [SVector<f64, N>; 3],
    pub d_i2: [SVector<f64, N>; 3],
    pub d_j: [SVector<f64, N>; 3],
    pub dd_i1: [[SMatrix<f64, N, N>; 3]; 3],
    pub dd_i2: [[SMatrix<f64, N, N>; 3]; 3],
    pub dd_j: [[SMatrix<f64, N, N>; 3]; 3],
}

pub fn pointwise_invariants(theta: &[Vector3<f64>; 3]) -> InvariantState<3> {
    let area: [Vector3<f64>; 3] = std::array::from_fn(|i| theta[(i + 1) % 3].cross(&theta[(i + 2) % 3]));
    let i1 = theta.iter().map(|t| t.norm_squared()).sum();
    let i2 = area.iter().map(|a| a.norm_squared()).sum();
    let j = theta[0].dot(&area[0]);

    let d_i1 = theta.map(|t| 2.0 * t);
    let d_j = area;
    let d_i2 = std::array::from_fn(|k| {
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        2.0 * (area[k1].cross(&theta[k2]) + theta[k1].cross(&area[k2]))
    });

    let zero = Matrix3::zeros();
    let mut dd_i1 = [[zero; 3]; 3];
    let mut dd_j = [[zero; 3]; 3];
    let mut dd_i2 = [[zero; 3]; 3];
    for k in 0..3 {
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        dd_i1[k][k] = 2.0 * Matrix3::identity();
        dd_j[k][k1] = levi_civita_matrix(&theta[k2]);
        dd_j[k][k2] = -levi_civita_matrix(&theta[k1]);
    }
    for i in 0..3 {
        let (i1_, i2_) = ((i + 1) % 3, (i + 2) % 3);
        // ∂Aⁱ/∂θⁱ⁺¹ and ∂Aⁱ/∂θⁱ⁺²
        let jac = [(i1_, levi_civita_matrix(&theta[i2_])), (i2_, -levi_civita_matrix(&theta[i1_]))];
        for (a, ja) in &jac {
            for (b, jb) in &jac {
                dd_i2[*a][*b] += 2.0 * ja.transpose() * jb;
            }
        }
        let e = levi_civita_matrix(&area[i]);
        dd_i2[i1_][i2_] += 2.0 * e;
        dd_i2[i2_][i1_] += 2.0 * e.transpose();
    }

    InvariantState {
        i1,
        i2,
        j,
        d_i1,
        d_i2,
        d_j,
        dd_i1,
        dd_i2,
        dd_j,
    }
}

impl InvariantState<3> {
    /// Pulls pointwise derivatives back to the element DoFs through `θ = Φ θ̄`.
    pub fn lift(&self, phi: &SMatrix<f64, 3, PHI_COLS>) -> InvariantState<PHI_COLS> {
        let pt = phi.transpose();
        let grad = |g: &[Vector3<f64>; 3]| g.map(|v| pt * v);
        let hess = |h: &[[Matrix3<f64>; 3]; 3]| h.map(|row| row.map(|m| pt * m * phi));
        InvariantState {
            i1: self.i1,
            i2: self.i2,
            j: self.j,
            d_i1: grad(&self.d_i1),
            d_i2: grad(&self.d_i2),
            d_j: grad(&self.d_j),
            dd_i1: hess(&self.dd_i1),
            dd_i2: hess(&self.dd_i2),
            dd_j: hess(&self.dd_j),
        }
    }
}

/// Invariants at one quadrature point as functions of the element `θ` DoFs.
pub fn invariants(point: &PointBasis, theta: &[SVector<f64, PHI_COLS>; 3]) -> InvariantState<PHI_COLS> {
    let fields = theta.each_ref().map(|t| point.phi * t);
    pointwise_invariants(&fields).lift(&point.phi)
}
