use nalgebra::SVector;

use super::SimplicialMesh;

/// Number of element unknowns: 3 x 12 deformation, 3 x 6 traction, 3 x 4
/// displacement.
pub const ELEMENT_DOFS: usize = 66;
pub const LOCAL_THETA: usize = 0;
pub const LOCAL_T: usize = 36;
pub const LOCAL_U: usize = 54;

/// What a global unknown is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DofEntity {
    /// Deformation 1-form `component`, edge, slot 0 (`λ^a dλ^b`) or 1 (`λ^b dλ^a`)
    /// where `a -> b` is the stored edge direction.
    Theta { component: usize, edge: usize, slot: usize },
    Traction { component: usize, edge: usize },
    Displacement { component: usize, vertex: usize },
}

/// Global numbering, field-major: all `θ¹` edge pairs, then `θ²`, `θ³`, then the
/// three traction fields (one unknown per edge), then the three displacement
/// components (one per vertex).
#[derive(Debug, Clone)]
pub struct DofMap {
    n_edges: usize,
    n_vertices: usize,
    elements: Vec<[usize; ELEMENT_DOFS]>,
}

impl DofMap {
    pub fn new(mesh: &SimplicialMesh) -> Self {
        let n_edges = mesh.num_edges();
        let n_vertices = mesh.num_vertices();
        let mut map = Self {
            n_edges,
            n_vertices,
            elements: Vec::with_capacity(mesh.num_tets()),
        };
        for t in 0..mesh.num_tets() {
            let refs = mesh.edge_of_tet(t);
            let tet = mesh.tets()[t];
            let mut dofs = [0usize; ELEMENT_DOFS];
            for c in 0..3 {
                for (e, r) in refs.iter().enumerate() {
                    dofs[LOCAL_THETA + 12 * c + 2 * e] = map.theta(c, r.edge, 0);
                    dofs[LOCAL_THETA + 12 * c + 2 * e + 1] = map.theta(c, r.edge, 1);
                    dofs[LOCAL_T + 6 * c + e] = map.traction(c, r.edge);
                }
                for (a, &v) in tet.iter().enumerate() {
                    dofs[LOCAL_U + 4 * c + a] = map.displacement(c, v);
                }
            }
            map.elements.push(dofs);
        }
        map
    }

    pub fn len(&self) -> usize {
        9 * self.n_edges + 3 * self.n_vertices
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_edges(&self) -> usize {
        self.n_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn theta(&self, component: usize, edge: usize, slot: usize) -> usize {
        2 * self.n_edges * component + 2 * edge + slot
    }

    pub fn traction(&self, component: usize, edge: usize) -> usize {
        6 * self.n_edges + self.n_edges * component + edge
    }

    pub fn displacement(&self, component: usize, vertex: usize) -> usize {
        9 * self.n_edges + self.n_vertices * component + vertex
    }

    pub fn theta_range(&self) -> std::ops::Range<usize> {
        0..6 * self.n_edges
    }

    pub fn traction_range(&self) -> std::ops::Range<usize> {
        6 * self.n_edges..9 * self.n_edges
    }

    pub fn displacement_range(&self) -> std::ops::Range<usize> {
        9 * self.n_edges..self.len()
    }

    /// Global indices of the 66 element unknowns in the order
    /// `[θ¹, θ², θ³, t¹, t², t³, u¹, u², u³]`.
    pub fn element(&self, tet: usize) -> &[usize; ELEMENT_DOFS] {
        &self.elements[tet]
    }

    pub fn gather(&self, tet: usize, global: &[f64]) -> SVector<f64, ELEMENT_DOFS> {
        SVector::from_fn(|i, _| global[self.elements[tet][i]])
    }

    pub fn entity(&self, dof: usize) -> DofEntity {
        let e = self.n_edges;
        if dof < 6 * e {
            DofEntity::Theta {
                component: dof / (2 * e),
                edge: (dof % (2 * e)) / 2,
                slot: dof % 2,
            }
        } else if dof < 9 * e {
            let d = dof - 6 * e;
            DofEntity::Traction {
                component: d / e,
                edge: d % e,
            }
        } else {
            let d = dof - 9 * e;
            DofEntity::Displacement {
                component: d / self.n_vertices,
                vertex: d % self.n_vertices,
            }
        }
    }
}
