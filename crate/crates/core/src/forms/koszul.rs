//! The Koszul operator on polynomial forms, used to check the structure of the
//! Whitney space. The solver never needs it.
//!
//! `κ` contracts a form with the position field `X − o`. For an affine map
//! `L(x) = b + Ax` the pull-back identity `L*(κ_o ω) = κ_{o'} (L*ω)` holds with
//! the transported base point `o' = L⁻¹(o)`.

use nalgebra::Vector3;

use crate::mesh::AffineElementMap;

/// `κω` at `x` for a 1-form field `ω`; a 0-form.
pub fn koszul_one_form(omega: impl Fn(&Vector3<f64>) -> Vector3<f64>, x: &Vector3<f64>, base: &Vector3<f64>) -> f64 {
    omega(x).dot(&(x - base))
}

/// `κα` at `x` for a 2-form value `α` (Hodge-identified); a 1-form.
pub fn koszul_two_form(alpha: &Vector3<f64>, x: &Vector3<f64>, base: &Vector3<f64>) -> Vector3<f64> {
    alpha.cross(&(x - base))
}

fn apply(map: &AffineElementMap, x: &Vector3<f64>) -> Vector3<f64> {
    map.origin + map.jacobian * x
}

/// `(L*ω)(x) = Aᵀ ω(L(x))`.
pub fn pullback_one_form(
    omega: impl Fn(&Vector3<f64>) -> Vector3<f64>,
    map: &AffineElementMap,
    x: &Vector3<f64>,
) -> Vector3<f64> {
    map.jacobian.transpose() * omega(&apply(map, x))
}

/// Compares `L*(κω)` with `κ(L*ω)` at the given points; the base point of the
/// left-hand side is the origin.
pub fn koszul_pullback_check(
    omega: impl Fn(&Vector3<f64>) -> Vector3<f64> + Copy,
    map: &AffineElementMap,
    points: &[Vector3<f64>],
    tol: f64,
) -> bool {
    let Some(inv) = map.jacobian.try_inverse() else {
        return false;
    };
    let base = Vector3::zeros();
    let moved = inv * (base - map.origin);
    points.iter().all(|x| {
        let lhs = koszul_one_form(omega, &apply(map, x), &base);
        let rhs = koszul_one_form(|y| pullback_one_form(omega, map, y), x, &moved);
        (lhs - rhs).abs() <= tol * (1.0 + lhs.abs())
    })
}
