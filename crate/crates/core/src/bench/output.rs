use std::fmt::Write as _;

use nalgebra::Vector3;

use crate::mesh::SimplicialMesh;

/// Legacy ASCII VTK unstructured grid of the deformed configuration.
/// Points are displaced by `displacement`; the displacement itself and the
/// per-element minimum Jacobian are attached as point and cell data.
pub fn vtk_string(mesh: &SimplicialMesh, displacement: &[Vector3<f64>], cell_min_j: &[f64], title: &str) -> String {
    let nv = mesh.num_vertices();
    let nt = mesh.num_tets();
    let mut out = String::with_capacity(64 * (nv + nt));
    let _ = writeln!(out, "# vtk DataFile Version 3.0");
    let _ = writeln!(out, "{}", title.replace('\n', " "));
    let _ = writeln!(out, "ASCII");
    let _ = writeln!(out, "DATASET UNSTRUCTURED_GRID");
    let _ = writeln!(out, "POINTS {nv} double");
    for (p, u) in mesh.vertices().iter().zip(displacement) {
        let q = p + u;
        let _ = writeln!(out, "{:.12e} {:.12e} {:.12e}", q.x, q.y, q.z);
    }
    let _ = writeln!(out, "CELLS {nt} {}", 5 * nt);
    for t in mesh.tets() {
        let _ = writeln!(out, "4 {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    let _ = writeln!(out, "CELL_TYPES {nt}");
    for _ in 0..nt {
        let _ = writeln!(out, "10");
    }
    let _ = writeln!(out, "POINT_DATA {nv}");
    let _ = writeln!(out, "VECTORS displacement double");
    for u in displacement {
        let _ = writeln!(out, "{:.12e} {:.12e} {:.12e}", u.x, u.y, u.z);
    }
    let _ = writeln!(out, "CELL_DATA {nt}");
    let _ = writeln!(out, "SCALARS min_J double 1");
    let _ = writeln!(out, "LOOKUP_TABLE default");
    for j in cell_min_j {
        let _ = writeln!(out, "{j:.12e}");
    }
    out
}
