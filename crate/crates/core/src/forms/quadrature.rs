//! Symmetric quadrature on the tetrahedron and the triangle, in barycentric
//! coordinates with weights normalised to sum to one (integrate as
//! `Σ w f(λ) · measure`).

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<[f64; 4]>,
    weights: Vec<f64>,
    degree: usize,
}

impl QuadratureRule {
    pub fn from_points(points: Vec<[f64; 4]>, weights: Vec<f64>, degree: usize) -> Self {
        assert_eq!(points.len(), weights.len());
        Self {
            points,
            weights,
            degree,
        }
    }

    pub fn one_point() -> Self {
        Self::from_points(vec![[0.25; 4]], vec![1.0], 1)
    }

    pub fn four_point() -> Self {
        let a = 0.585_410_196_624_968_5;
        let b = 0.138_196_601_125_010_5;
        let points = (0..4)
            .map(|k| {
                let mut p = [b; 4];
                p[k] = a;
                p
            })
            .collect();
        Self::from_points(points, vec![0.25; 4], 2)
    }

    /// Keast's 11-point rule, exact for degree 4. The centroid weight is
    /// negative.
    pub fn keast11() -> Self {
        let mut points = vec![[0.25; 4]];
        let mut weights = vec![-74.0 / 5625.0 * 6.0];
        for k in 0..4 {
            let mut p = [1.0 / 14.0; 4];
            p[k] = 11.0 / 14.0;
            points.push(p);
            weights.push(343.0 / 45000.0 * 6.0);
        }
        let s = (5.0f64 / 14.0).sqrt();
        let c = 0.25 * (1.0 + s);
        let d = 0.25 * (1.0 - s);
        for [i, j] in crate::mesh::LOCAL_EDGES {
            let mut p = [d; 4];
            p[i] = c;
            p[j] = c;
            points.push(p);
            weights.push(56.0 / 2250.0 * 6.0);
        }
        Self::from_points(points, weights, 4)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[[f64; 4]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64; 4], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::keast11()
    }
}

/// Three-point degree-2 rule on a triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl TriangleRule {
    pub fn degree2() -> Self {
        let points = (0..3)
            .map(|k| {
                let mut p = [1.0 / 6.0; 3];
                p[k] = 2.0 / 3.0;
                p
            })
            .collect();
        Self {
            points,
            weights: vec![1.0 / 3.0; 3],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64; 3], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }
}
