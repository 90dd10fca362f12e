//! Structured tetrahedral meshes: hexahedral grids split into six tetrahedra
//! that share the main diagonal of every cell, so neighbouring cells match.

use nalgebra::Vector3;

use crate::mesh::SimplicialMesh;
use crate::Result;

const KUHN_PATHS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Meshes the active cells of an `nx × ny × nz` cell grid. `position` maps
/// grid node indices to coordinates; unused nodes are dropped.
pub fn structured_mesh(
    cells: [usize; 3],
    position: impl Fn(usize, usize, usize) -> Vector3<f64>,
    active: impl Fn(usize, usize, usize) -> bool,
) -> Result<SimplicialMesh> {
    let [nx, ny, nz] = cells;
    let node = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;
    let mut index = vec![usize::MAX; (nx + 1) * (ny + 1) * (nz + 1)];
    let mut vertices = Vec::new();
    let mut tets = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if !active(i, j, k) {
                    continue;
                }
                let mut id = |c: [usize; 3]| {
                    let (a, b, d) = (i + c[0], j + c[1], k + c[2]);
                    let n = node(a, b, d);
                    if index[n] == usize::MAX {
                        index[n] = vertices.len();
                        vertices.push(position(a, b, d));
                    }
                    index[n]
                };
                for path in KUHN_PATHS {
                    let mut corner = [0usize; 3];
                    let mut tet = [id(corner), 0, 0, 0];
                    for (s, &axis) in path.iter().enumerate() {
                        corner[axis] = 1;
                        tet[s + 1] = id(corner);
                    }
                    tets.push(tet);
                }
            }
        }
    }
    for tet in &mut tets {
        let p = tet.map(|v| vertices[v]);
        if (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))) < 0.0 {
            tet.swap(2, 3);
        }
    }
    SimplicialMesh::new(vertices, tets)
}

/// Axis-aligned box `[lo, hi]` with `cells` subdivisions.
pub fn box_mesh(cells: [usize; 3], lo: Vector3<f64>, hi: Vector3<f64>) -> Result<SimplicialMesh> {
    let [nx, ny, nz] = cells;
    structured_mesh(
        cells,
        |i, j, k| {
            Vector3::new(
                lo.x + (hi.x - lo.x) * i as f64 / nx as f64,
                lo.y + (hi.y - lo.y) * j as f64 / ny as f64,
                lo.z + (hi.z - lo.z) * k as f64 / nz as f64,
            )
        },
        |_, _, _| true,
    )
}
