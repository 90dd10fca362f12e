//! Mixed finite elements for three-dimensional hyperelasticity.
//!
//! The unknowns of the discrete Hu-Washizu functional are the displacement
//! components (Lagrange 0-forms), three deformation 1-forms taken from the full
//! linear edge space `P1Λ¹` and three traction 1-forms taken from the Whitney
//! space `P1⁻Λ¹`. Forms are stored as coefficient vectors in the fixed
//! Cartesian coframe, so wedges of 1-forms become cross products and the Hodge
//! star of a 3-form becomes a triple product.
//!
//! Module map:
//!
//! * [`mesh`] - tetrahedral complex, oriented edges, boundary faces, DoF map
//! * [`forms`] - basis evaluation, exterior algebra on coefficients, quadrature
//! * [`materials`] - discrete invariants and stored-energy laws
//! * [`assembly`] - element residue/tangent, loads, sparse global system
//! * [`solver`] - Newton iteration with load stepping
//! * [`bench`] - structured meshers and the four benchmark drivers

pub mod assembly;
pub mod bench;
mod error;
pub mod forms;
pub mod materials;
pub mod mesh;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};

pub use nalgebra::{Matrix3, Vector3};
