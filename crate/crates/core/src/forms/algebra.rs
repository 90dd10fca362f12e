use nalgebra::{Matrix3, SMatrix, Vector3};

use super::PHI_COLS;

/// `a ∧ b` for 1-forms, returned as a Hodge-identified 2-form.
#[inline]
pub fn wedge11(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    a.cross(b)
}

/// `a ∧ β` for a 1-form and a 2-form; the 3-form coefficient.
#[inline]
pub fn wedge12(a: &Vector3<f64>, beta: &Vector3<f64>) -> f64 {
    a.dot(beta)
}

/// `⋆(a ∧ b ∧ c)`.
#[inline]
pub fn hodge3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}

/// Matrix of `v ↦ z × v`.
#[inline]
pub fn cross_matrix(z: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -z.z, z.y, z.z, 0.0, -z.x, -z.y, z.x, 0.0)
}

/// Pairwise wedges of the twelve `P1Λ¹` basis forms at one point.
#[derive(Debug, Clone)]
pub struct WedgeMatrix {
    entries: Vec<Vector3<f64>>,
}

impl WedgeMatrix {
    pub fn get(&self, i: usize, j: usize) -> Vector3<f64> {
        self.entries[i * PHI_COLS + j]
    }

    /// `aᵗ W b`, i.e. the wedge of the two fields with DoF vectors `a` and `b`.
    pub fn contract(&self, a: &[f64], b: &[f64]) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        for i in 0..PHI_COLS {
            for j in 0..PHI_COLS {
                out += a[i] * b[j] * self.get(i, j);
            }
        }
        out
    }
}

pub fn wedge_matrix(phi: &SMatrix<f64, 3, PHI_COLS>) -> WedgeMatrix {
    let mut entries = Vec::with_capacity(PHI_COLS * PHI_COLS);
    for i in 0..PHI_COLS {
        for j in 0..PHI_COLS {
            entries.push(wedge11(&phi.column(i).into_owned(), &phi.column(j).into_owned()));
        }
    }
    WedgeMatrix { entries }
}
