//! Pure-displacement P1 solver used as a locking reference. Constant
//! deformation gradient per tetrahedron, dense Newton with a finite-difference
//! element tangent.

use hwforms::materials::MaterialLaw;
use hwforms::mesh::DofMap;
use hwforms::solver::Problem;
use hwforms::{Matrix3, Vector3};
use nalgebra::{DMatrix, DVector, Matrix3x4, SVector};

fn piola(law: &MaterialLaw, f: &Matrix3<f64>) -> Matrix3<f64> {
    let c = f.transpose() * f;
    let i1 = c.trace();
    let i2 = 0.5 * (i1 * i1 - (c * c).trace());
    let j = f.determinant();
    let d = law.derivatives(i1, i2, j).expect("admissible baseline state");
    let cof = f.try_inverse().expect("invertible F").transpose() * j;
    f * (2.0 * d.w1) + (f * i1 - f * c) * (2.0 * d.w2) + cof * d.wj
}

struct Element {
    vertices: [usize; 4],
    volume: f64,
    grad: Matrix3x4<f64>,
}

fn element_residual(law: &MaterialLaw, el: &Element, u: &SVector<f64, 12>) -> SVector<f64, 12> {
    // u is stored component-major: u[4c + a].
    let mut f = Matrix3::identity();
    for c in 0..3 {
        for a in 0..4 {
            for k in 0..3 {
                f[(c, k)] += u[4 * c + a] * el.grad[(k, a)];
            }
        }
    }
    let p = piola(law, &f);
    SVector::from_fn(|i, _| {
        let (c, a) = (i / 4, i % 4);
        el.volume * (0..3).map(|k| p[(c, k)] * el.grad[(k, a)]).sum::<f64>()
    })
}

/// Solves `problem` with P1 displacements in `steps` load increments and
/// returns the vertex displacements.
pub fn p1_displacement_solve(problem: &Problem, steps: usize) -> Vec<Vector3<f64>> {
    let mesh = &problem.mesh;
    let nv = mesh.num_vertices();
    let n = 3 * nv;
    let elements: Vec<Element> = (0..mesh.num_tets())
        .map(|t| {
            let geom = mesh.element_geometry(t).unwrap();
            let p = mesh.tet_vertices(t);
            let m = Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
            let minv_t = m.try_inverse().unwrap().transpose();
            let g1 = minv_t.column(0).into_owned();
            let g2 = minv_t.column(1).into_owned();
            let g3 = minv_t.column(2).into_owned();
            Element {
                vertices: mesh.tets()[t],
                volume: geom.volume,
                grad: Matrix3x4::from_columns(&[-(g1 + g2 + g3), g1, g2, g3]),
            }
        })
        .collect();

    let dofmap = DofMap::new(mesh);
    let mixed_load = problem.load_vector(&dofmap).unwrap();
    let load: Vec<f64> = (0..n)
        .map(|i| mixed_load[dofmap.displacement(i / nv, i % nv)])
        .collect();
    let fixed: Vec<(usize, hwforms::solver::Prescribed)> = problem
        .dirichlet
        .iter()
        .map(|d| (d.component * nv + d.vertex, d.value))
        .collect();

    let mut x = DVector::<f64>::zeros(n);
    for step in 1..=steps {
        let lf = step as f64 / steps as f64;
        for (d, v) in &fixed {
            x[*d] = v.value(lf);
        }
        for _ in 0..30 {
            let mut k = DMatrix::<f64>::zeros(n, n);
            let mut r = DVector::<f64>::from_iterator(n, load.iter().map(|f| -lf * f));
            for el in &elements {
                let idx: Vec<usize> = (0..12).map(|i| (i / 4) * nv + el.vertices[i % 4]).collect();
                let ue = SVector::<f64, 12>::from_fn(|i, _| x[idx[i]]);
                let re = element_residual(&problem.law, el, &ue);
                let h = 1e-7;
                for j in 0..12 {
                    let mut up = ue;
                    let mut um = ue;
                    up[j] += h;
                    um[j] -= h;
                    let col = (element_residual(&problem.law, el, &up) - element_residual(&problem.law, el, &um)) / (2.0 * h);
                    for i in 0..12 {
                        k[(idx[i], idx[j])] += col[i];
                    }
                }
                for i in 0..12 {
                    r[idx[i]] += re[i];
                }
            }
            for (d, _) in &fixed {
                k.row_mut(*d).fill(0.0);
                k.column_mut(*d).fill(0.0);
                k[(*d, *d)] = 1.0;
                r[*d] = 0.0;
            }
            let norm = r.norm();
            if norm < 1e-9 * (1.0 + lf * load.iter().map(|f| f * f).sum::<f64>().sqrt()) {
                break;
            }
            let dx = k.lu().solve(&(-r)).expect("nonsingular baseline tangent");
            x += dx;
        }
    }
    (0..nv).map(|v| Vector3::new(x[v], x[nv + v], x[2 * nv + v])).collect()
}
