mod common;

use hwforms::forms::koszul::{koszul_pullback_check, koszul_two_form};
use hwforms::forms::{
    constant_form_edge_dofs, eval_basis, hodge3, wedge11, wedge_matrix, QuadratureRule, DIM_P1_LAMBDA0,
    DIM_P1_LAMBDA1, DIM_P1_MINUS_LAMBDA1, PHI_COLS, PSI_COLS,
};
use hwforms::mesh::{AffineElementMap, SimplicialMesh, LOCAL_EDGES};
use hwforms::{Matrix3, Vector3};
use proptest::prelude::*;
use rand::Rng;

fn reference() -> SimplicialMesh {
    SimplicialMesh::new(
        vec![Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()],
        vec![[0, 1, 2, 3]],
    )
    .unwrap()
}

/// Three-point Gauss-Legendre nodes and weights on [0, 1].
fn gauss3() -> [(f64, f64); 3] {
    let s = (0.6f64).sqrt();
    [
        (0.5 * (1.0 - s), 5.0 / 18.0),
        (0.5, 8.0 / 18.0),
        (0.5 * (1.0 + s), 5.0 / 18.0),
    ]
}

#[test]
fn whitney_edge_integrals_are_kronecker() {
    let mut rng = common::rng(7);
    for mesh in [reference(), common::random_tet(&mut rng)] {
        let geom = mesh.element_geometry(0).unwrap();
        let signs = mesh.edge_of_tet(0).map(|r| r.sign);
        let p = mesh.tet_vertices(0);
        for (e, &[i, j]) in LOCAL_EDGES.iter().enumerate() {
            // integrate every Whitney column along edge e with a line rule
            let mut points = Vec::new();
            for (s, _) in gauss3() {
                let mut b = [0.0; 4];
                b[i] = 1.0 - s;
                b[j] = s;
                points.push(b);
            }
            let rule = QuadratureRule::from_points(points, vec![0.0; 3], 5);
            let basis = eval_basis(&geom, &signs, &rule);
            let tangent = p[j] - p[i];
            for col in 0..PSI_COLS {
                let integral: f64 = basis
                    .points
                    .iter()
                    .zip(gauss3())
                    .map(|(pt, (_, w))| w * pt.psi.column(col).dot(&tangent))
                    .sum();
                let expected = if col == e { signs[e] as f64 } else { 0.0 };
                assert!((integral - expected).abs() < 1e-13, "edge {e} col {col}: {integral}");
            }
        }
    }
}

#[test]
fn basis_counts_match_space_dimensions() {
    assert_eq!(PHI_COLS, DIM_P1_LAMBDA1);
    assert_eq!(PSI_COLS, DIM_P1_MINUS_LAMBDA1);
    let mesh = reference();
    let basis = eval_basis(&mesh.element_geometry(0).unwrap(), &[1; 6], &QuadratureRule::one_point());
    assert_eq!(basis.points[0].n.len(), DIM_P1_LAMBDA0);
    assert_eq!((DIM_P1_LAMBDA0, DIM_P1_MINUS_LAMBDA1, DIM_P1_LAMBDA1), (4, 6, 12));
}

#[test]
fn whitney_columns_lie_in_the_full_space() {
    let mut rng = common::rng(11);
    let mesh = common::random_tet(&mut rng);
    let signs = [1, -1, 1, -1, -1, 1];
    let basis = eval_basis(&mesh.element_geometry(0).unwrap(), &signs, &QuadratureRule::keast11());
    for pt in &basis.points {
        for e in 0..6 {
            let diff = pt.phi.column(2 * e) - pt.phi.column(2 * e + 1);
            assert!((pt.psi.column(e) - diff).norm() < 1e-15);
        }
    }
}

#[test]
fn wedge_of_coframe() {
    assert_eq!(wedge11(&Vector3::x(), &Vector3::y()), Vector3::z());
    let a = Vector3::new(0.3, -1.2, 2.0);
    assert_eq!(wedge11(&a, &a), Vector3::zeros());
}

/// Collects `(aᵢdXⁱ) ∧ (bⱼdXʲ)` term by term on the basis
/// `dX²∧dX³, dX³∧dX¹, dX¹∧dX²`.
fn wedge_by_expansion(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            // dXⁱ∧dXʲ = ±(basis 2-form indexed by the missing k)
            let k = 3 - i - j;
            let sign = if (j + 3 - i) % 3 == 1 { 1.0 } else { -1.0 };
            out[k] += sign * a[i] * b[j];
        }
    }
    out
}

#[test]
fn wedge_matches_expansion() {
    let mut rng = common::rng(3);
    for _ in 0..20 {
        let a = Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let b = Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0));
        assert!((wedge11(&a, &b) - wedge_by_expansion(&a, &b)).norm() < 1e-14);
    }
}

#[test]
fn hodge_of_three_forms() {
    let (x, y, z) = (Vector3::x(), Vector3::y(), Vector3::z());
    assert_eq!(hodge3(&x, &y, &z), 1.0);
    assert_eq!(hodge3(&x, &x, &z), 0.0);
    assert_eq!(hodge3(&y, &z, &z), 0.0);
    assert_eq!(hodge3(&(2.0 * x), &(3.0 * y), &z), 6.0);
    let mut rng = common::rng(5);
    for _ in 0..10 {
        let m = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let v = hodge3(&m.row(0).transpose(), &m.row(1).transpose(), &m.row(2).transpose());
        assert!((v - m.determinant()).abs() < 1e-14);
    }
}

#[test]
fn wedge_matrix_is_skew_and_contracts() {
    let mut rng = common::rng(9);
    let mesh = common::random_tet(&mut rng);
    let basis = eval_basis(&mesh.element_geometry(0).unwrap(), &[1; 6], &QuadratureRule::four_point());
    let pt = &basis.points[2];
    let w = wedge_matrix(&pt.phi);
    for i in 0..PHI_COLS {
        for j in 0..PHI_COLS {
            assert!((w.get(i, j) + w.get(j, i)).norm() < 1e-15);
        }
    }
    let a: Vec<f64> = (0..PHI_COLS).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..PHI_COLS).map(|_| rng.random_range(-1.0..1.0)).collect();
    let fa = pt.phi * nalgebra::SVector::<f64, 12>::from_column_slice(&a);
    let fb = pt.phi * nalgebra::SVector::<f64, 12>::from_column_slice(&b);
    assert!((w.contract(&a, &b) - wedge11(&fa, &fb)).norm() < 1e-13);
}

#[test]
fn coframe_area_forms() {
    // θ = dX gives A¹ = dX²∧dX³ and so on
    let mesh = reference();
    let basis = eval_basis(&mesh.element_geometry(0).unwrap(), &[1; 6], &QuadratureRule::keast11());
    let p = mesh.tet_vertices(0);
    let frame = [Vector3::x(), Vector3::y(), Vector3::z()];
    let dofs: Vec<nalgebra::SVector<f64, 12>> = frame
        .iter()
        .map(|f| {
            let mut th = nalgebra::SVector::<f64, 12>::zeros();
            for (e, &[i, j]) in LOCAL_EDGES.iter().enumerate() {
                let [a, b] = constant_form_edge_dofs(f, &p[i], &p[j]);
                th[2 * e] = a;
                th[2 * e + 1] = b;
            }
            th
        })
        .collect();
    for pt in &basis.points {
        let theta: Vec<Vector3<f64>> = dofs.iter().map(|d| pt.phi * d).collect();
        for i in 0..3 {
            let area = wedge11(&theta[(i + 1) % 3], &theta[(i + 2) % 3]);
            assert!((area - frame[i]).norm() < 1e-14);
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[test]
fn default_rule_integrates_degree_four() {
    let rule = QuadratureRule::default();
    assert_eq!(rule.degree(), 4);
    // ∫_T λ^α dV / |T| = 3! Πα! / (|α| + 3)!
    for a0 in 0..=4u32 {
        for a1 in 0..=4 - a0 {
            for a2 in 0..=4 - a0 - a1 {
                for a3 in 0..=4 - a0 - a1 - a2 {
                    let alpha = [a0, a1, a2, a3];
                    let exact = 6.0 * alpha.iter().map(|&k| factorial(k)).product::<f64>()
                        / factorial(alpha.iter().sum::<u32>() + 3);
                    let approx: f64 = rule
                        .iter()
                        .map(|(b, w)| w * (0..4).map(|i| b[i].powi(alpha[i] as i32)).product::<f64>())
                        .sum();
                    assert!((approx - exact).abs() <= 1e-14 * exact, "{alpha:?}: {approx} vs {exact}");
                }
            }
        }
    }
}

#[test]
fn koszul_of_area_form() {
    // κ(dX¹∧dX²) at (1,2,3) = X¹dX² − X²dX¹
    let v = koszul_two_form(&Vector3::z(), &Vector3::new(1.0, 2.0, 3.0), &Vector3::zeros());
    assert_eq!(v, Vector3::new(-2.0, 1.0, 0.0));
}

#[test]
fn koszul_commutes_with_affine_pullback() {
    let mut rng = common::rng(13);
    let identity = AffineElementMap::from_vertices(&[Vector3::zeros(), Vector3::x(), Vector3::y(), Vector3::z()]).unwrap();
    let points: Vec<Vector3<f64>> = (0..10)
        .map(|_| Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)))
        .collect();
    assert!(koszul_pullback_check(|_| Vector3::x(), &identity, &points, 1e-13));
    for _ in 0..5 {
        let tet = common::random_tet(&mut rng);
        let offset = Vector3::from_fn(|_, _| rng.random_range(-3.0..3.0));
        let moved = tet.map_vertices(|p| p + offset).unwrap();
        let map = moved.element_geometry(0).unwrap();
        let omega = |x: &Vector3<f64>| Vector3::new(x.y, 0.0, 0.0);
        assert!(koszul_pullback_check(omega, &map, &points, 1e-12));
    }
}

proptest! {
    #[test]
    fn wedge_is_bilinear_and_alternating(
        a in prop::array::uniform3(-5.0f64..5.0),
        b in prop::array::uniform3(-5.0f64..5.0),
        c in prop::array::uniform3(-5.0f64..5.0),
        s in -3.0f64..3.0,
    ) {
        let (a, b, c) = (Vector3::from(a), Vector3::from(b), Vector3::from(c));
        prop_assert!((wedge11(&a, &b) + wedge11(&b, &a)).norm() < 1e-12);
        let lhs = wedge11(&(a + s * c), &b);
        let rhs = wedge11(&a, &b) + s * wedge11(&c, &b);
        prop_assert!((lhs - rhs).norm() < 1e-10);
        prop_assert!((hodge3(&a, &b, &c) - hodge3(&b, &c, &a)).abs() < 1e-10);
        prop_assert!((hodge3(&a, &b, &c) + hodge3(&b, &a, &c)).abs() < 1e-10);
    }

    #[test]
    fn p1_pairs_reproduce_constant_forms(
        form in prop::array::uniform3(-2.0f64..2.0),
        bary in prop::array::uniform4(0.01f64..1.0),
        seed in 0u64..1000,
    ) {
        let mut rng = common::rng(seed);
        let mesh = common::random_tet(&mut rng);
        let form = Vector3::from(form);
        let total: f64 = bary.iter().sum();
        let bary = bary.map(|b| b / total);
        let rule = QuadratureRule::from_points(vec![bary], vec![1.0], 0);
        let basis = eval_basis(&mesh.element_geometry(0).unwrap(), &[1; 6], &rule);
        let p = mesh.tet_vertices(0);
        let mut dofs = nalgebra::SVector::<f64, 12>::zeros();
        for (e, &[i, j]) in LOCAL_EDGES.iter().enumerate() {
            let [x, y] = constant_form_edge_dofs(&form, &p[i], &p[j]);
            dofs[2 * e] = x;
            dofs[2 * e + 1] = y;
        }
        prop_assert!((basis.points[0].phi * dofs - form).norm() < 1e-12);
    }
}
