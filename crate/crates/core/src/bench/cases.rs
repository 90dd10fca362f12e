//! The four benchmark boundary value problems.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::mesher::structured_mesh;
use crate::materials::MaterialLaw;
use crate::mesh::{Marker, SimplicialMesh};
use crate::solver::{Prescribed, Probe, Problem};
use crate::{Error, Result};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    Cook,
    Cube,
    Torsion,
    Splitring,
}

impl CaseName {
    pub const ALL: [CaseName; 4] = [Self::Cook, Self::Cube, Self::Torsion, Self::Splitring];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Cook => "cook",
            Self::Cube => "cube",
            Self::Torsion => "torsion",
            Self::Splitring => "splitring",
        }
    }

    /// Number of load increments used when none is requested.
    pub fn default_steps(&self) -> usize {
        match self {
            Self::Cook => 10,
            Self::Cube => 20,
            Self::Torsion => 40,
            Self::Splitring => 12,
        }
    }

    /// Refinement levels used when none is requested.
    pub fn default_refinements(&self) -> Vec<usize> {
        match self {
            Self::Cook => vec![4, 8, 16],
            Self::Cube => vec![2, 4, 6],
            Self::Torsion => vec![2, 3],
            Self::Splitring => vec![1, 2],
        }
    }

    /// Main probe reported in convergence tables.
    pub fn primary_probe(&self) -> &'static str {
        match self {
            Self::Cook => "tip_uz",
            Self::Cube => "A_uz",
            Self::Torsion => "mid_corner_uz",
            Self::Splitring => "tip_uy",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// Geometry knobs that the benchmark descriptions leave open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseOptions {
    /// Cook: node spacing along the beam follows `ξ = (i/n)^grading`, so values
    /// above one refine towards the clamped root.
    pub cook_grading: f64,
    /// Split ring: mean radius, flange width, section height, flange and web
    /// thickness.
    pub ring_radius: f64,
    pub ring_flange_width: f64,
    pub ring_height: f64,
    pub ring_flange_thickness: f64,
    pub ring_web_thickness: f64,
}

impl Default for CaseOptions {
    fn default() -> Self {
        Self {
            cook_grading: 1.0,
            ring_radius: 200.0,
            ring_flange_width: 60.0,
            ring_height: 60.0,
            ring_flange_thickness: 15.0,
            ring_web_thickness: 15.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub name: CaseName,
    pub refinement: usize,
    pub problem: Problem,
}

pub fn build_case(name: CaseName, n: usize, options: &CaseOptions) -> Result<BenchmarkCase> {
    if n == 0 {
        return Err(Error::Config("refinement level must be at least 1".into()));
    }
    let problem = match name {
        CaseName::Cook => cook(n, options.cook_grading)?,
        CaseName::Cube => cube(n)?,
        CaseName::Torsion => torsion(n)?,
        CaseName::Splitring => split_ring(n, options)?,
    };
    Ok(BenchmarkCase {
        name,
        refinement: n,
        problem,
    })
}

fn vertex_marker(mesh: &mut SimplicialMesh, name: &str, vertices: &[usize]) {
    mesh.set_marker(name, Marker::Vertices(vertices.to_vec()));
}

fn face_marker(mesh: &mut SimplicialMesh, name: &str, faces: &[[usize; 3]]) {
    mesh.set_marker(name, Marker::Faces(faces.to_vec()));
}

/// Tapered cantilever: the profile (0,0)-(48,44)-(48,60)-(0,44) in the x-z
/// plane, one unit thick in y, clamped at x = 0 and sheared along +z on the
/// face x = 48.
fn cook(n: usize, grading: f64) -> Result<Problem> {
    if !(grading > 0.0) {
        return Err(Error::Config("cook grading must be positive".into()));
    }
    let mut mesh = structured_mesh(
        [n, 1, n],
        |i, j, k| {
            let xi = (i as f64 / n as f64).powf(grading);
            let eta = k as f64 / n as f64;
            let bottom = 44.0 * xi;
            let top = 44.0 + 16.0 * xi;
            Vector3::new(48.0 * xi, j as f64, bottom + (top - bottom) * eta)
        },
        |_, _, _| true,
    )?;
    let root = mesh.vertices_where(|p| p.x.abs() < EPS);
    let back = mesh.vertices_where(|p| p.y.abs() < EPS);
    let load = mesh.boundary_faces_where(|p| (p.x - 48.0).abs() < EPS);
    let tip_face = mesh.vertices_where(|p| (p.x - 48.0).abs() < EPS);
    let closest = tip_face
        .iter()
        .map(|&v| (mesh.vertices()[v].z - 52.0).abs())
        .fold(f64::INFINITY, f64::min);
    let tip: Vec<usize> = tip_face
        .into_iter()
        .filter(|&v| (mesh.vertices()[v].z - 52.0).abs() < closest + EPS)
        .collect();
    vertex_marker(&mut mesh, "root", &root);
    vertex_marker(&mut mesh, "symmetry_y", &back);
    face_marker(&mut mesh, "load", &load);
    vertex_marker(&mut mesh, "tip", &tip);

    let mut problem = Problem::new(mesh, MaterialLaw::mooney_rivlin(126.0, 252.0, 81661.0));
    problem.fix(&root, &[0, 1, 2], Prescribed::Constant(0.0));
    problem.fix(&back, &[1], Prescribed::Constant(0.0));
    problem.tractions.push((load, Vector3::new(0.0, 0.0, 100.0)));
    problem.probes.push(Probe {
        name: "tip_uz".into(),
        vertices: tip.clone(),
        component: 2,
    });
    problem.probes.push(Probe {
        name: "tip_ux".into(),
        vertices: tip,
        component: 0,
    });
    Ok(problem)
}

/// Quarter of a cube of side 2 compressed on the central square of its top
/// face. `n` cells per side (rounded up to even so the loaded square is
/// resolved).
fn cube(n: usize) -> Result<Problem> {
    let n = n + n % 2;
    let mut mesh = structured_mesh(
        [n, n, n],
        |i, j, k| Vector3::new(i as f64, j as f64, k as f64) / n as f64,
        |_, _, _| true,
    )?;
    let bottom = mesh.vertices_where(|p| p.z.abs() < EPS);
    let sym_x = mesh.vertices_where(|p| p.x.abs() < EPS);
    let sym_y = mesh.vertices_where(|p| p.y.abs() < EPS);
    let in_load = |p: &Vector3<f64>| (p.z - 1.0).abs() < EPS && p.x < 0.5 + EPS && p.y < 0.5 + EPS;
    let loaded = mesh.vertices_where(in_load);
    let load = mesh.boundary_faces_where(in_load);
    let a = mesh.vertices_where(|p| (p - Vector3::new(0.0, 0.0, 1.0)).norm() < EPS);
    vertex_marker(&mut mesh, "bottom", &bottom);
    vertex_marker(&mut mesh, "symmetry_x", &sym_x);
    vertex_marker(&mut mesh, "symmetry_y", &sym_y);
    face_marker(&mut mesh, "load", &load);
    vertex_marker(&mut mesh, "A", &a);

    let mut problem = Problem::new(
        mesh,
        MaterialLaw::NeoHookeanLog {
            mu: 80.194,
            kappa: 400889.806,
        },
    );
    problem.fix(&bottom, &[2], Prescribed::Constant(0.0));
    problem.fix(&sym_x, &[0], Prescribed::Constant(0.0));
    problem.fix(&sym_y, &[1], Prescribed::Constant(0.0));
    problem.fix(&loaded, &[0, 1], Prescribed::Constant(0.0));
    problem.tractions.push((load, Vector3::new(0.0, 0.0, -320.0)));
    problem.probes.push(Probe {
        name: "A_uz".into(),
        vertices: a,
        component: 2,
    });
    Ok(problem)
}

/// Square shaft `[-0.5, 0.5]² × [0, 10]`, clamped at z = 0 and twisted by 2π
/// at z = 10 with the end section kept in its plane.
fn torsion(n: usize) -> Result<Problem> {
    let mut mesh = structured_mesh(
        [n, n, 10 * n],
        |i, j, k| {
            Vector3::new(
                i as f64 / n as f64 - 0.5,
                j as f64 / n as f64 - 0.5,
                k as f64 / n as f64,
            )
        },
        |_, _, _| true,
    )?;
    let clamped = mesh.vertices_where(|p| p.z.abs() < EPS);
    let twisted = mesh.vertices_where(|p| (p.z - 10.0).abs() < EPS);
    let corner = mesh.vertices_where(|p| (p - Vector3::new(0.5, 0.5, 5.0)).norm() < EPS);
    vertex_marker(&mut mesh, "clamped", &clamped);
    vertex_marker(&mut mesh, "twisted", &twisted);
    vertex_marker(&mut mesh, "mid_corner", &corner);

    let positions: Vec<Vector3<f64>> = twisted.iter().map(|&v| mesh.vertices()[v]).collect();
    let mut problem = Problem::new(mesh, MaterialLaw::quadratic_mooney_rivlin(24.0, 84.0));
    problem.fix(&clamped, &[0, 1, 2], Prescribed::Constant(0.0));
    for (&v, &position) in twisted.iter().zip(&positions) {
        for component in 0..2 {
            problem.fix(
                &[v],
                &[component],
                Prescribed::Rotation {
                    origin: Vector3::zeros(),
                    axis: Vector3::z(),
                    angle: 2.0 * std::f64::consts::PI,
                    position,
                    component,
                },
            );
        }
        problem.fix(&[v], &[2], Prescribed::Constant(0.0));
    }
    for (name, component) in [("mid_corner_ux", 0), ("mid_corner_uy", 1), ("mid_corner_uz", 2)] {
        problem.probes.push(Probe {
            name: name.into(),
            vertices: corner.clone(),
            component,
        });
    }
    Ok(problem)
}

/// I-section ring revolved through 359° about the y axis, clamped at 0° and
/// sheared along y by a total force of 12 spread over the vertices of the
/// 359° section.
fn split_ring(n: usize, o: &CaseOptions) -> Result<Problem> {
    let (r, b, h, tf, tw) = (
        o.ring_radius,
        o.ring_flange_width,
        o.ring_height,
        o.ring_flange_thickness,
        o.ring_web_thickness,
    );
    if !(tw < b && 2.0 * tf < h && b < 2.0 * r && tf > 0.0 && tw > 0.0) {
        return Err(Error::Config("split ring section dimensions are inconsistent".into()));
    }
    let r_lines = [r - b / 2.0, r - tw / 2.0, r + tw / 2.0, r + b / 2.0];
    let y_lines = [-h / 2.0, -h / 2.0 + tf, h / 2.0 - tf, h / 2.0];
    let sweep = 359.0f64.to_radians();
    let segments = 16 * n;
    let coord = |lines: &[f64; 4], i: usize| {
        let cell = (i / n).min(2);
        let frac = (i - cell * n) as f64 / n as f64;
        lines[cell] + (lines[cell + 1] - lines[cell]) * frac
    };
    let mut mesh = structured_mesh(
        [3 * n, 3 * n, segments],
        |i, j, k| {
            let radius = coord(&r_lines, i);
            let phi = sweep * k as f64 / segments as f64;
            Vector3::new(radius * phi.cos(), coord(&y_lines, j), radius * phi.sin())
        },
        |i, j, _| j / n != 1 || i / n == 1,
    )?;
    let on_plane = |phi: f64| {
        let normal = Vector3::new(-phi.sin(), 0.0, phi.cos());
        move |p: &Vector3<f64>| p.dot(&normal).abs() < 1e-7 && p.x * phi.cos() + p.z * phi.sin() > 0.0
    };
    let clamped = mesh.vertices_where(on_plane(0.0));
    let tip = mesh.vertices_where(on_plane(sweep));
    vertex_marker(&mut mesh, "clamped", &clamped);
    vertex_marker(&mut mesh, "tip", &tip);

    let mut problem = Problem::new(mesh, MaterialLaw::NeoHookeanJ2 { mu: 0.4, lambda: 1.6 });
    problem.fix(&clamped, &[0, 1, 2], Prescribed::Constant(0.0));
    let share = Vector3::new(0.0, 12.0, 0.0) / tip.len() as f64;
    problem.point_loads = tip.iter().map(|&v| (v, share)).collect();
    for (name, component) in [("tip_ux", 0), ("tip_uy", 1), ("tip_uz", 2)] {
        problem.probes.push(Probe {
            name: name.into(),
            vertices: tip.clone(),
            component,
        });
    }
    Ok(problem)
}
