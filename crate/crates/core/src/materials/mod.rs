//! Discrete invariants of the deformation forms and the stored-energy laws.
//!
//! With `θ¹, θ², θ³` the deformation 1-forms, the area forms are
//! `Aⁱ = θⁱ⁺¹ ∧ θⁱ⁺²` (indices cyclic) and the invariants are
//! `I1 = Σ|θⁱ|²`, `I2 = Σ|Aⁱ|²`, `J = ⋆(θ¹∧θ²∧θ³)`.

mod invariants;
mod laws;

pub use invariants::{invariants, levi_civita_matrix, pointwise_invariants, InvariantState};
pub use laws::{energy_and_derivatives, Energy, LawDerivatives, MaterialLaw};
