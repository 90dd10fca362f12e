use nalgebra::Vector3;

use crate::forms::TriangleRule;
use crate::mesh::{DofMap, SimplicialMesh};
use crate::{Error, Result};

/// Consistent nodal forces of a dead traction (force per reference area) on
/// a set of boundary faces. Only displacement entries are non-zero.
pub fn external_load(
    mesh: &SimplicialMesh,
    faces: &[[usize; 3]],
    traction: &Vector3<f64>,
    dofmap: &DofMap,
) -> Result<Vec<f64>> {
    let mut f = vec![0.0; dofmap.len()];
    add_face_traction(mesh, faces, traction, dofmap, &mut f)?;
    Ok(f)
}

pub fn add_face_traction(
    mesh: &SimplicialMesh,
    faces: &[[usize; 3]],
    traction: &Vector3<f64>,
    dofmap: &DofMap,
    f: &mut [f64],
) -> Result<()> {
    let rule = TriangleRule::degree2();
    for face in faces {
        if !mesh.is_boundary_face(face) {
            return Err(Error::Mesh(format!(
                "loaded face {:?} is not on the boundary",
                face.map(|v| v + 1)
            )));
        }
        let area = mesh.face_area_vector(face).norm();
        for (bary, w) in rule.iter() {
            for (a, &v) in face.iter().enumerate() {
                for c in 0..3 {
                    f[dofmap.displacement(c, v)] += w * area * bary[a] * traction[c];
                }
            }
        }
    }
    Ok(())
}

/// Concentrated forces applied directly to vertices.
pub fn add_point_loads(loads: &[(usize, Vector3<f64>)], dofmap: &DofMap, f: &mut [f64]) {
    for (v, force) in loads {
        for c in 0..3 {
            f[dofmap.displacement(c, *v)] += force[c];
        }
    }
}
