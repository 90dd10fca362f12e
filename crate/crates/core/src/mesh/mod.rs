//! Simplicial approximation of the reference body.
//!
//! Edges are stored with a direction; by default the direction is ascending in
//! global vertex index. Every tetrahedron records, for each of its six local
//! edges, which global edge it is and whether the local direction agrees with
//! the stored one.

mod dofs;
mod io;

use std::collections::{BTreeMap, HashMap};

use nalgebra::{Matrix3, Matrix3x4, Vector3};

use crate::{Error, Result};

pub use dofs::{DofEntity, DofMap, ELEMENT_DOFS, LOCAL_T, LOCAL_THETA, LOCAL_U};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};

/// Local edges of the reference tetrahedron, 0-based (vertex 1 of the usual
/// numbering is index 0).
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Local faces, listed as the vertex opposite to each face.
pub const LOCAL_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Orientation of a local edge relative to its stored global edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRef {
    pub edge: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFace {
    /// Vertex ids, ordered so the right-hand normal points out of the body.
    pub vertices: [usize; 3],
    pub tet: usize,
}

/// Named vertex or face set used to address boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum Marker {
    Vertices(Vec<usize>),
    Faces(Vec<[usize; 3]>),
}

#[derive(Debug, Clone)]
pub struct SimplicialMesh {
    vertices: Vec<Vector3<f64>>,
    tets: Vec<[usize; 4]>,
    edges: Vec<[usize; 2]>,
    edge_of_tet: Vec<[EdgeRef; 6]>,
    boundary_faces: Vec<BoundaryFace>,
    interior_faces: usize,
    markers: BTreeMap<String, Marker>,
}

/// Affine map from the reference tetrahedron onto a mesh element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElementMap {
    pub origin: Vector3<f64>,
    /// Columns are the edge vectors leaving the first vertex.
    pub jacobian: Matrix3<f64>,
    pub volume: f64,
    /// Column `i` is the physical gradient of barycentric coordinate `i`.
    pub grad_lambda: Matrix3x4<f64>,
}

impl AffineElementMap {
    pub fn from_vertices(p: &[Vector3<f64>; 4]) -> Option<Self> {
        let jacobian = Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
        let det = jacobian.determinant();
        let volume = det / 6.0;
        if !(volume > 0.0) {
            return None;
        }
        let inv = jacobian.try_inverse()?;
        let mut grad_lambda = Matrix3x4::zeros();
        for i in 0..3 {
            let g = inv.row(i).transpose();
            grad_lambda.set_column(i + 1, &g);
        }
        let g0 = -(grad_lambda.column(1) + grad_lambda.column(2) + grad_lambda.column(3));
        grad_lambda.set_column(0, &g0);
        Some(Self {
            origin: p[0],
            jacobian,
            volume,
            grad_lambda,
        })
    }

    /// Physical point at barycentric coordinates `bary`.
    pub fn point(&self, bary: &[f64; 4]) -> Vector3<f64> {
        self.origin + self.jacobian * Vector3::new(bary[1], bary[2], bary[3])
    }
}

fn signed_volume(p: &[Vector3<f64>; 4]) -> f64 {
    (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))) / 6.0
}

impl SimplicialMesh {
    /// Builds the complex from 0-based vertex and tetrahedron lists and derives
    /// edges, faces and orientation data.
    pub fn new(vertices: Vec<Vector3<f64>>, tets: Vec<[usize; 4]>) -> Result<Self> {
        let nv = vertices.len();
        for (t, tet) in tets.iter().enumerate() {
            for &v in tet {
                if v >= nv {
                    return Err(Error::Mesh(format!(
                        "element {t} references vertex {} but the mesh has {nv} vertices",
                        v + 1
                    )));
                }
            }
            let p = tet.map(|v| vertices[v]);
            let volume = signed_volume(&p);
            if !(volume > 0.0) {
                return Err(Error::DegenerateElement { element: t, volume });
            }
        }

        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edge_keys: Vec<[usize; 2]> = Vec::new();
        for tet in &tets {
            for [a, b] in LOCAL_EDGES {
                let (va, vb) = (tet[a], tet[b]);
                let key = if va < vb { [va, vb] } else { [vb, va] };
                if !edge_index.contains_key(&key) {
                    edge_index.insert(key, 0);
                    edge_keys.push(key);
                }
            }
        }
        edge_keys.sort_unstable();
        for (id, key) in edge_keys.iter().enumerate() {
            edge_index.insert(*key, id);
        }

        let edge_of_tet = tets
            .iter()
            .map(|tet| {
                LOCAL_EDGES.map(|[a, b]| {
                    let (va, vb) = (tet[a], tet[b]);
                    let key = if va < vb { [va, vb] } else { [vb, va] };
                    EdgeRef {
                        edge: edge_index[&key],
                        sign: if va < vb { 1 } else { -1 },
                    }
                })
            })
            .collect();

        let mut faces: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
        for (t, tet) in tets.iter().enumerate() {
            for (k, local) in LOCAL_FACES.iter().enumerate() {
                let mut key = local.map(|i| tet[i]);
                key.sort_unstable();
                faces.entry(key).or_default().push((t, k));
            }
        }
        let mut boundary_faces = Vec::new();
        let mut interior_faces = 0;
        for (key, owners) in &faces {
            match owners.len() {
                1 => {
                    let (t, k) = owners[0];
                    let tet = tets[t];
                    let [a, b, c] = LOCAL_FACES[k].map(|i| tet[i]);
                    let opposite = vertices[tet[k]];
                    let n = (vertices[b] - vertices[a]).cross(&(vertices[c] - vertices[a]));
                    let vertices_out = if n.dot(&(vertices[a] - opposite)) > 0.0 {
                        [a, b, c]
                    } else {
                        [a, c, b]
                    };
                    boundary_faces.push(BoundaryFace {
                        vertices: vertices_out,
                        tet: t,
                    });
                }
                2 => interior_faces += 1,
                n => {
                    return Err(Error::Mesh(format!(
                        "face {:?} is shared by {n} elements",
                        key.map(|v| v + 1)
                    )))
                }
            }
        }
        boundary_faces.sort_by_key(|f| {
            let mut k = f.vertices;
            k.sort_unstable();
            k
        });

        Ok(Self {
            vertices,
            tets,
            edges: edge_keys,
            edge_of_tet,
            boundary_faces,
            interior_faces,
            markers: BTreeMap::new(),
        })
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_of_tet(&self, tet: usize) -> &[EdgeRef; 6] {
        &self.edge_of_tet[tet]
    }

    pub fn boundary_faces(&self) -> &[BoundaryFace] {
        &self.boundary_faces
    }

    pub fn interior_face_count(&self) -> usize {
        self.interior_faces
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn tet_vertices(&self, tet: usize) -> [Vector3<f64>; 4] {
        self.tets[tet].map(|v| self.vertices[v])
    }

    pub fn element_geometry(&self, tet: usize) -> Result<AffineElementMap> {
        let p = self.tet_vertices(tet);
        AffineElementMap::from_vertices(&p).ok_or(Error::DegenerateElement {
            element: tet,
            volume: signed_volume(&p),
        })
    }

    pub fn volume(&self) -> f64 {
        (0..self.tets.len())
            .map(|t| signed_volume(&self.tet_vertices(t)))
            .sum()
    }

    /// Area-weighted outward normal of a boundary face (length = area).
    pub fn face_area_vector(&self, face: &[usize; 3]) -> Vector3<f64> {
        let [a, b, c] = face.map(|v| self.vertices[v]);
        0.5 * (b - a).cross(&(c - a))
    }

    pub fn is_boundary_face(&self, face: &[usize; 3]) -> bool {
        let mut key = *face;
        key.sort_unstable();
        self.boundary_faces
            .binary_search_by_key(&key, |f| {
                let mut k = f.vertices;
                k.sort_unstable();
                k
            })
            .is_ok()
    }

    /// Boundary faces (outward oriented) whose vertices all satisfy `pred`.
    pub fn boundary_faces_where(&self, pred: impl Fn(&Vector3<f64>) -> bool) -> Vec<[usize; 3]> {
        self.boundary_faces
            .iter()
            .filter(|f| f.vertices.iter().all(|&v| pred(&self.vertices[v])))
            .map(|f| f.vertices)
            .collect()
    }

    pub fn vertices_where(&self, pred: impl Fn(&Vector3<f64>) -> bool) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| pred(&self.vertices[v]))
            .collect()
    }

    pub fn markers(&self) -> &BTreeMap<String, Marker> {
        &self.markers
    }

    pub fn marker(&self, name: &str) -> Option<&Marker> {
        self.markers.get(name)
    }

    pub fn set_marker(&mut self, name: impl Into<String>, marker: Marker) {
        self.markers.insert(name.into(), marker);
    }

    /// Reverses the stored direction of one edge and flips the sign entry of
    /// every element that contains it. The ascending-index convention no longer
    /// holds afterwards; solutions expressed as fields must not change.
    pub fn reverse_edge(&mut self, edge: usize) {
        self.edges[edge].swap(0, 1);
        for refs in &mut self.edge_of_tet {
            for r in refs.iter_mut().filter(|r| r.edge == edge) {
                r.sign = -r.sign;
            }
        }
    }

    /// Applies `f` to every vertex position (rigid motions, scaling).
    pub fn map_vertices(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Result<Self> {
        let vertices = self.vertices.iter().map(f).collect();
        let mut mesh = Self::new(vertices, self.tets.clone())?;
        mesh.markers = self.markers.clone();
        Ok(mesh)
    }
}
