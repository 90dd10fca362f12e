use nalgebra::Matrix3;

use crate::assembly::Discretization;

/// `(∫ Σᵢ ‖θⁱ‖² dV, ∫ ‖P‖² dV)` with `P = Σᵢ tⁱ ⊗ ⋆(θⁱ⁺¹ ∧ θⁱ⁺²)` and the
/// Frobenius norm.
pub fn convergence_norms(disc: &Discretization, x: &[f64]) -> (f64, f64) {
    let mut theta_norm = 0.0;
    let mut p_norm = 0.0;
    for (e, basis) in disc.bases.iter().enumerate() {
        let state = disc.element_state(e, x);
        for p in &basis.points {
            let theta = state.theta.each_ref().map(|c| p.phi * c);
            let t = state.t.each_ref().map(|c| p.psi * c);
            let mut piola = Matrix3::zeros();
            for i in 0..3 {
                let area = theta[(i + 1) % 3].cross(&theta[(i + 2) % 3]);
                piola += t[i] * area.transpose();
            }
            theta_norm += p.weight * theta.iter().map(|v| v.norm_squared()).sum::<f64>();
            p_norm += p.weight * piola.norm_squared();
        }
    }
    (theta_norm, p_norm)
}
