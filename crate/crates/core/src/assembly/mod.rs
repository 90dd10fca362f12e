//! Element kernels, loads and the global sparse system.

mod element;
mod loads;
mod system;

pub use element::{
    element_functional, element_min_jacobian, element_residue, element_tangent, ElementMatrix,
    ElementState, ElementVector,
};
pub use loads::{add_face_traction, add_point_loads, external_load};
pub use system::{GlobalSystem, LinearSolver, SparsePattern};

use crate::forms::{eval_basis, ElementBasisEval, QuadratureRule};
use crate::materials::MaterialLaw;
use crate::mesh::{DofMap, SimplicialMesh};
use crate::Result;

/// Basis evaluations of every element, computed once per mesh.
pub fn element_bases(mesh: &SimplicialMesh, rule: &QuadratureRule) -> Result<Vec<ElementBasisEval>> {
    (0..mesh.num_tets())
        .map(|t| {
            let geom = mesh.element_geometry(t)?;
            let signs = mesh.edge_of_tet(t).map(|r| r.sign);
            Ok(eval_basis(&geom, &signs, rule))
        })
        .collect()
}

/// Discretisation data shared by every assembly on one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub dofmap: DofMap,
    pub pattern: SparsePattern,
    pub bases: Vec<ElementBasisEval>,
}

impl Discretization {
    pub fn new(mesh: &SimplicialMesh, rule: &QuadratureRule) -> Result<Self> {
        let dofmap = DofMap::new(mesh);
        let pattern = SparsePattern::new(&dofmap);
        let bases = element_bases(mesh, rule)?;
        Ok(Self {
            dofmap,
            pattern,
            bases,
        })
    }

    pub fn element_state(&self, e: usize, global: &[f64]) -> ElementState {
        ElementState::from_vector(&self.dofmap.gather(e, global))
    }

    /// Discrete functional including the dead-load potential `−fᵀu`.
    pub fn functional(&self, law: &MaterialLaw, global: &[f64], load: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (e, basis) in self.bases.iter().enumerate() {
            total += element_functional(basis, law, &self.element_state(e, global))?;
        }
        Ok(total - load.iter().zip(global).map(|(f, x)| f * x).sum::<f64>())
    }

    /// Smallest quadrature-point `J` over the mesh.
    pub fn min_jacobian(&self, global: &[f64]) -> f64 {
        self.element_min_jacobians(global)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest `J` over the quadrature points of each element.
    pub fn element_min_jacobians(&self, global: &[f64]) -> Vec<f64> {
        self.bases
            .iter()
            .enumerate()
            .map(|(e, b)| element_min_jacobian(b, &self.element_state(e, global)))
            .collect()
    }

    /// Residual `R = Σ rₑ − f` and, if requested, the tangent. Element
    /// contributions are summed in ascending element order whether or not
    /// they are computed in parallel.
    pub fn assemble(&self, law: &MaterialLaw, global: &[f64], load: &[f64], tangent: bool) -> Result<GlobalSystem> {
        let mut system = GlobalSystem::zeros(&self.pattern);
        const CHUNK: usize = 256;
        let n = self.bases.len();
        let mut start = 0;
        while start < n {
            let end = (start + CHUNK).min(n);
            let kernel = |e: usize| -> Result<(ElementVector, Option<Box<ElementMatrix>>)> {
                let state = self.element_state(e, global);
                let r = element_residue(&self.bases[e], law, &state)?;
                let k = if tangent {
                    Some(Box::new(element_tangent(&self.bases[e], law, &state)?))
                } else {
                    None
                };
                Ok((r, k))
            };
            #[cfg(feature = "parallel")]
            let results: Vec<_> = {
                use rayon::prelude::*;
                (start..end).into_par_iter().map(kernel).collect()
            };
            #[cfg(not(feature = "parallel"))]
            let results: Vec<_> = (start..end).map(kernel).collect();
            for (offset, result) in results.into_iter().enumerate() {
                let (r, k) = result?;
                system.scatter(&self.pattern, &self.dofmap, start + offset, &r, k.as_deref());
            }
            start = end;
        }
        for (r, f) in system.residual.iter_mut().zip(load) {
            *r -= f;
        }
        Ok(system)
    }
}
