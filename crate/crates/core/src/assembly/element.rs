//! Element residue and tangent of the discrete Hu-Washizu functional.
//!
//! At a quadrature point, with `θₖ = Φθ̄ₖ`, `Tᵢ = Ψt̄ᵢ` (so `Tᵢⱼ = tⁱ(eⱼ)`),
//! `gⱼ = eⱼ + dN ūⱼ` (the coefficients of `dφʲ`), `Aᵢ = θᵢ₊₁ × θᵢ₊₂`,
//! `J = θ₀·A₀` and `Gᵢ = Σⱼ Tᵢⱼ gⱼ`, the integrand is
//!
//! ```text
//! L = W(θ) − Σᵢⱼ Tᵢⱼ ⋆(Aᵢ ∧ (θⱼ − gⱼ)) = W − J tr T + Σᵢ Aᵢ·Gᵢ
//! ```

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::forms::{hodge3, wedge11, wedge12, ElementBasisEval, PointBasis, PHI_COLS, PSI_COLS};
use crate::materials::{energy_and_derivatives, levi_civita_matrix, pointwise_invariants, MaterialLaw};
use crate::mesh::{ELEMENT_DOFS, LOCAL_T, LOCAL_THETA, LOCAL_U};
use crate::Result;

pub type ElementVector = SVector<f64, ELEMENT_DOFS>;
pub type ElementMatrix = SMatrix<f64, ELEMENT_DOFS, ELEMENT_DOFS>;

#[inline]
fn theta_at(k: usize) -> usize {
    LOCAL_THETA + PHI_COLS * k
}

#[inline]
fn t_at(i: usize) -> usize {
    LOCAL_T + PSI_COLS * i
}

#[inline]
fn u_at(j: usize) -> usize {
    LOCAL_U + 4 * j
}

/// Local unknowns of one tetrahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementState {
    pub theta: [SVector<f64, PHI_COLS>; 3],
    pub t: [SVector<f64, PSI_COLS>; 3],
    pub u: [SVector<f64, 4>; 3],
}

impl ElementState {
    pub fn from_vector(x: &ElementVector) -> Self {
        Self {
            theta: std::array::from_fn(|k| x.fixed_rows::<PHI_COLS>(theta_at(k)).into_owned()),
            t: std::array::from_fn(|i| x.fixed_rows::<PSI_COLS>(t_at(i)).into_owned()),
            u: std::array::from_fn(|j| x.fixed_rows::<4>(u_at(j)).into_owned()),
        }
    }

    pub fn to_vector(&self) -> ElementVector {
        let mut x = ElementVector::zeros();
        for k in 0..3 {
            x.fixed_rows_mut::<PHI_COLS>(theta_at(k)).copy_from(&self.theta[k]);
            x.fixed_rows_mut::<PSI_COLS>(t_at(k)).copy_from(&self.t[k]);
            x.fixed_rows_mut::<4>(u_at(k)).copy_from(&self.u[k]);
        }
        x
    }
}

/// Field values at one quadrature point.
struct PointFields {
    theta: [Vector3<f64>; 3],
    /// Row `i` of the traction matrix: `Tᵢ`.
    t: [Vector3<f64>; 3],
    g: [Vector3<f64>; 3],
}

impl PointFields {
    fn new(basis: &ElementBasisEval, p: &PointBasis, s: &ElementState) -> Self {
        Self {
            theta: s.theta.each_ref().map(|th| p.phi * th),
            t: s.t.each_ref().map(|t| p.psi * t),
            g: std::array::from_fn(|j| Vector3::ith(j, 1.0) + basis.dn * s.u[j]),
        }
    }

    fn area(&self) -> [Vector3<f64>; 3] {
        std::array::from_fn(|i| wedge11(&self.theta[(i + 1) % 3], &self.theta[(i + 2) % 3]))
    }

    fn trace_t(&self) -> f64 {
        self.t[0][0] + self.t[1][1] + self.t[2][2]
    }

    /// `Gᵢ = Σⱼ Tᵢⱼ gⱼ`.
    fn g_weighted(&self) -> [Vector3<f64>; 3] {
        std::array::from_fn(|i| (0..3).map(|j| self.t[i][j] * self.g[j]).sum())
    }
}

/// Element contribution to the discrete functional, evaluated term by term
/// from wedge and Hodge products (no external load).
pub fn element_functional(basis: &ElementBasisEval, law: &MaterialLaw, state: &ElementState) -> Result<f64> {
    let mut total = 0.0;
    for p in &basis.points {
        let f = PointFields::new(basis, p, state);
        let inv = pointwise_invariants(&f.theta);
        let w = law.derivatives(inv.i1, inv.i2, inv.j)?.w;
        let area = f.area();
        debug_assert!((hodge3(&f.theta[0], &f.theta[1], &f.theta[2]) - inv.j).abs() <= 1e-12 * (1.0 + inv.j.abs()));
        let mut coupling = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                coupling += f.t[i][j] * wedge12(&(f.theta[j] - f.g[j]), &area[i]);
            }
        }
        total += p.weight * (w - coupling);
    }
    Ok(total)
}

pub fn element_residue(basis: &ElementBasisEval, law: &MaterialLaw, state: &ElementState) -> Result<ElementVector> {
    let mut r = ElementVector::zeros();
    for p in &basis.points {
        let f = PointFields::new(basis, p, state);
        let inv = pointwise_invariants(&f.theta);
        let energy = energy_and_derivatives(law, &inv)?;
        let area = f.area();
        let tr = f.trace_t();
        let gw = f.g_weighted();
        let w = p.weight;
        for k in 0..3 {
            let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
            let rt = energy.d[k] - tr * area[k] + gw[k1].cross(&f.theta[k2]) + f.theta[k1].cross(&gw[k2]);
            let mut seg = r.fixed_rows_mut::<PHI_COLS>(theta_at(k));
            seg += w * p.phi.transpose() * rt;
        }
        for i in 0..3 {
            let c = Vector3::from_fn(|j, _| area[i].dot(&f.g[j]) - if i == j { inv.j } else { 0.0 });
            let mut seg = r.fixed_rows_mut::<PSI_COLS>(t_at(i));
            seg += w * p.psi.transpose() * c;
        }
        for j in 0..3 {
            let s: Vector3<f64> = (0..3).map(|i| f.t[i][j] * area[i]).sum();
            let mut seg = r.fixed_rows_mut::<4>(u_at(j));
            seg += w * basis.dn.transpose() * s;
        }
    }
    Ok(r)
}

pub fn element_tangent(basis: &ElementBasisEval, law: &MaterialLaw, state: &ElementState) -> Result<ElementMatrix> {
    let mut k_mat = ElementMatrix::zeros();
    let dn = &basis.dn;
    for p in &basis.points {
        let f = PointFields::new(basis, p, state);
        let inv = pointwise_invariants(&f.theta);
        let energy = energy_and_derivatives(law, &inv)?;
        let area = f.area();
        let tr = f.trace_t();
        let gw = f.g_weighted();
        let w = p.weight;
        let phi_t = p.phi.transpose();
        let e_theta = f.theta.map(|v| levi_civita_matrix(&v));

        // θ-θ
        for k in 0..3 {
            let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
            let mut coupling = [Matrix3::zeros(); 3];
            coupling[k1] = -tr * e_theta[k2] + levi_civita_matrix(&gw[k2]);
            coupling[k2] = tr * e_theta[k1] - levi_civita_matrix(&gw[k1]);
            for l in k..3 {
                let block = w * phi_t * (energy.dd[k][l] + coupling[l]) * p.phi;
                let mut view = k_mat.fixed_view_mut::<PHI_COLS, PHI_COLS>(theta_at(k), theta_at(l));
                view += block;
            }
        }

        // θ-t
        for k in 0..3 {
            for i in 0..3 {
                let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
                let m = Matrix3::from_fn(|row, j| {
                    let mut col = if i == j { -area[k] } else { Vector3::zeros() };
                    if k == i1 {
                        col += f.theta[i2].cross(&f.g[j]);
                    } else if k == i2 {
                        col += f.g[j].cross(&f.theta[i1]);
                    }
                    col[row]
                });
                let block = w * phi_t * m * p.psi;
                let mut view = k_mat.fixed_view_mut::<PHI_COLS, PSI_COLS>(theta_at(k), t_at(i));
                view += block;
            }
        }

        // θ-u
        for k in 0..3 {
            let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
            for j in 0..3 {
                let q = f.t[k1][j] * e_theta[k2] - f.t[k2][j] * e_theta[k1];
                let block = w * phi_t * q * dn;
                let mut view = k_mat.fixed_view_mut::<PHI_COLS, 4>(theta_at(k), u_at(j));
                view += block;
            }
        }

        // t-u
        for i in 0..3 {
            for j in 0..3 {
                let mut pm = Matrix3::zeros();
                pm.set_row(j, &area[i].transpose());
                let block = w * p.psi.transpose() * pm * dn;
                let mut view = k_mat.fixed_view_mut::<PSI_COLS, 4>(t_at(i), u_at(j));
                view += block;
            }
        }
    }

    // mirror the upper block triangle
    for a in 0..ELEMENT_DOFS {
        for b in 0..ELEMENT_DOFS {
            if block_index(a) > block_index(b) {
                k_mat[(a, b)] = k_mat[(b, a)];
            }
        }
    }
    Ok(k_mat)
}

#[inline]
fn block_index(dof: usize) -> usize {
    if dof < LOCAL_T {
        dof / PHI_COLS
    } else if dof < LOCAL_U {
        3 + (dof - LOCAL_T) / PSI_COLS
    } else {
        6 + (dof - LOCAL_U) / 4
    }
}

/// Smallest `J` over the quadrature points of the element.
pub fn element_min_jacobian(basis: &ElementBasisEval, state: &ElementState) -> f64 {
    basis
        .points
        .iter()
        .map(|p| {
            let th = state.theta.each_ref().map(|t| p.phi * t);
            hodge3(&th[0], &th[1], &th[2])
        })
        .fold(f64::INFINITY, f64::min)
}
