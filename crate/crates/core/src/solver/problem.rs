use nalgebra::{Rotation3, Unit, Vector3};

use crate::assembly::{add_face_traction, add_point_loads};
use crate::forms::QuadratureRule;
use crate::materials::MaterialLaw;
use crate::mesh::{DofMap, SimplicialMesh};
use crate::{Error, Result};

/// Prescribed value of one displacement component as a function of the load
/// factor `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prescribed {
    Constant(f64),
    /// `λ · value`
    Ramp(f64),
    /// Component of the displacement that rotates `position` by `λ · angle`
    /// about the axis through `origin` along `axis`.
    Rotation {
        origin: Vector3<f64>,
        axis: Vector3<f64>,
        angle: f64,
        position: Vector3<f64>,
        component: usize,
    },
}

impl Prescribed {
    pub fn value(&self, load_factor: f64) -> f64 {
        match *self {
            Self::Constant(v) => v,
            Self::Ramp(v) => load_factor * v,
            Self::Rotation {
                origin,
                axis,
                angle,
                position,
                component,
            } => {
                let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), load_factor * angle);
                let moved = origin + rot * (position - origin);
                moved[component] - position[component]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dirichlet {
    pub vertex: usize,
    pub component: usize,
    pub value: Prescribed,
}

/// Displacement component averaged over a vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub name: String,
    pub vertices: Vec<usize>,
    pub component: usize,
}

/// Boundary value problem at unit load factor.
#[derive(Debug, Clone)]
pub struct Problem {
    pub mesh: SimplicialMesh,
    pub law: MaterialLaw,
    pub rule: QuadratureRule,
    pub dirichlet: Vec<Dirichlet>,
    /// Dead tractions (force per reference area) on boundary face sets.
    pub tractions: Vec<(Vec<[usize; 3]>, Vector3<f64>)>,
    pub point_loads: Vec<(usize, Vector3<f64>)>,
    pub probes: Vec<Probe>,
}

impl Problem {
    pub fn new(mesh: SimplicialMesh, law: MaterialLaw) -> Self {
        Self {
            mesh,
            law,
            rule: QuadratureRule::default(),
            dirichlet: Vec::new(),
            tractions: Vec::new(),
            point_loads: Vec::new(),
            probes: Vec::new(),
        }
    }

    /// Prescribes `value` for every listed component of every listed vertex.
    pub fn fix(&mut self, vertices: &[usize], components: &[usize], value: Prescribed) {
        for &vertex in vertices {
            for &component in components {
                self.dirichlet.push(Dirichlet {
                    vertex,
                    component,
                    value,
                });
            }
        }
    }

    pub fn load_vector(&self, dofmap: &DofMap) -> Result<Vec<f64>> {
        let mut f = vec![0.0; dofmap.len()];
        for (faces, traction) in &self.tractions {
            add_face_traction(&self.mesh, faces, traction, dofmap, &mut f)?;
        }
        add_point_loads(&self.point_loads, dofmap, &mut f);
        Ok(f)
    }

    /// Constrained DoFs, sorted, with later entries overriding earlier ones.
    pub fn constraints(&self, dofmap: &DofMap) -> Result<Vec<(usize, Prescribed)>> {
        let mut map = std::collections::BTreeMap::new();
        for d in &self.dirichlet {
            if d.vertex >= self.mesh.num_vertices() || d.component > 2 {
                return Err(Error::Config(format!(
                    "boundary condition on vertex {} component {} is out of range",
                    d.vertex, d.component
                )));
            }
            map.insert(dofmap.displacement(d.component, d.vertex), d.value);
        }
        Ok(map.into_iter().collect())
    }
}
