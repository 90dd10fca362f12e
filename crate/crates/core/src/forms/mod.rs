//! Polynomial differential forms on a tetrahedron.
//!
//! A 1-form `a₁dX¹ + a₂dX² + a₃dX³` is stored as the vector `(a₁, a₂, a₃)`.
//! A 2-form is stored through the Euclidean Hodge identification, so
//! `dX²∧dX³ ≙ e₁`, `dX³∧dX¹ ≙ e₂`, `dX¹∧dX² ≙ e₃`, and a 3-form by its
//! coefficient on `dX¹∧dX²∧dX³`.

mod algebra;
mod basis;
pub mod koszul;
mod quadrature;

pub use algebra::{cross_matrix, hodge3, wedge11, wedge12, wedge_matrix, WedgeMatrix};
pub use basis::{
    constant_form_edge_dofs, edge_endpoints, eval_basis, ElementBasisEval, PointBasis, PHI_COLS,
    PSI_COLS,
};
pub use quadrature::{QuadratureRule, TriangleRule};

/// Dimensions of the three finite element spaces on one tetrahedron:
/// scalar Lagrange, Whitney edge forms, full linear 1-forms.
pub const DIM_P1_LAMBDA0: usize = 4;
pub const DIM_P1_MINUS_LAMBDA1: usize = 6;
pub const DIM_P1_LAMBDA1: usize = 12;
