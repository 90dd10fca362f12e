//! Global sparse system in compressed-column form with a fixed pattern.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::MatMut;

use crate::mesh::{DofMap, ELEMENT_DOFS};
use crate::{Error, Result};

use super::element::{ElementMatrix, ElementVector};

/// Column-compressed sparsity of the assembled tangent, with the value slot of
/// every element matrix entry precomputed.
#[derive(Debug, Clone)]
pub struct SparsePattern {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    /// `slots[e * 66² + b * 66 + a]` is the value index of local entry `(a, b)`.
    slots: Vec<u32>,
}

impl SparsePattern {
    pub fn new(dofmap: &DofMap) -> Self {
        let n = dofmap.len();
        let n_el = dofmap.num_elements();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(c);
        }
        for e in 0..n_el {
            let dofs = dofmap.element(e);
            for &b in dofs {
                cols[b].extend_from_slice(dofs);
            }
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for col in &mut cols {
            col.sort_unstable();
            col.dedup();
            row_idx.extend_from_slice(col);
            col_ptr.push(row_idx.len());
        }
        let mut pattern = Self {
            n,
            col_ptr,
            row_idx,
            slots: Vec::with_capacity(n_el * ELEMENT_DOFS * ELEMENT_DOFS),
        };
        for e in 0..n_el {
            let dofs = *dofmap.element(e);
            for &b in &dofs {
                for &a in &dofs {
                    let slot = pattern.position(a, b).expect("entry is in the pattern");
                    pattern.slots.push(slot as u32);
                }
            }
        }
        pattern
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn position(&self, row: usize, col: usize) -> Option<usize> {
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        self.row_idx[range.clone()]
            .binary_search(&row)
            .ok()
            .map(|k| range.start + k)
    }

    fn element_slots(&self, e: usize) -> &[u32] {
        let m = ELEMENT_DOFS * ELEMENT_DOFS;
        &self.slots[e * m..(e + 1) * m]
    }

    /// `y = K x`.
    pub fn mul_vec(&self, values: &[f64], x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for c in 0..self.n {
            let xc = x[c];
            if xc == 0.0 {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[k]] += values[k] * xc;
            }
        }
        y
    }

    /// Dense copy, for tests on small meshes.
    pub fn to_dense(&self, values: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for c in 0..self.n {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                m[(self.row_idx[k], c)] = values[k];
            }
        }
        m
    }

    /// Largest `|K_ij − K_ji|` relative to the largest entry.
    pub fn asymmetry(&self, values: &[f64]) -> f64 {
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for c in 0..self.n {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                let r = self.row_idx[k];
                let other = self.position(c, r).map_or(0.0, |p| values[p]);
                worst = worst.max((values[k] - other).abs());
            }
        }
        worst / scale
    }
}


/// Assembled tangent values (on a [`SparsePattern`]) and residual.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub values: Vec<f64>,
    pub residual: Vec<f64>,
}

impl GlobalSystem {
    pub fn zeros(pattern: &SparsePattern) -> Self {
        Self {
            values: vec![0.0; pattern.nnz()],
            residual: vec![0.0; pattern.dim()],
        }
    }

    pub fn scatter(&mut self, pattern: &SparsePattern, dofmap: &DofMap, e: usize, r: &ElementVector, k: Option<&ElementMatrix>) {
        let dofs = dofmap.element(e);
        for (a, &g) in dofs.iter().enumerate() {
            self.residual[g] += r[a];
        }
        if let Some(k) = k {
            let slots = pattern.element_slots(e);
            for (idx, &slot) in slots.iter().enumerate() {
                // slots are stored column-major, as is the element matrix
                self.values[slot as usize] += k.as_slice()[idx];
            }
        }
    }

    /// Symmetric elimination of prescribed increments: for each `(dof, δ)`
    /// the solution of `K X = −R` will satisfy `X_dof = δ`, the coupling
    /// `K_{i,dof} δ` moves to the free residual entries, and row and column
    /// of `dof` become a unit vector.
    pub fn apply_dirichlet(&mut self, pattern: &SparsePattern, constraints: &[(usize, f64)]) {
        let mut fixed = vec![false; pattern.dim()];
        for &(d, _) in constraints {
            fixed[d] = true;
        }
        for &(d, delta) in constraints {
            for k in pattern.col_ptr[d]..pattern.col_ptr[d + 1] {
                let row = pattern.row_idx[k];
                if !fixed[row] {
                    self.residual[row] += self.values[k] * delta;
                }
                self.values[k] = if row == d { 1.0 } else { 0.0 };
            }
            self.residual[d] = -delta;
        }
        for c in 0..pattern.dim() {
            if fixed[c] {
                continue;
            }
            for k in pattern.col_ptr[c]..pattern.col_ptr[c + 1] {
                if fixed[pattern.row_idx[k]] {
                    self.values[k] = 0.0;
                }
            }
        }
    }
}

/// Sparse direct solver for the symmetric indefinite tangent: LU with partial
/// pivoting and a COLAMD ordering, analysed once per sparsity pattern. The
/// zero traction-traction and displacement-displacement diagonal blocks rule
/// out pivoting that is restricted to supernodes. The matrix is symmetrically
/// equilibrated before factorization because the deformation block is orders
/// of magnitude stiffer than the coupling blocks.
#[derive(Default)]
pub struct LinearSolver {
    symbolic: Option<SymbolicLu<usize>>,
}

impl std::fmt::Debug for LinearSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearSolver")
            .field("analysed", &self.symbolic.is_some())
            .finish()
    }
}

/// Largest accepted `‖K x − b‖ / ‖b‖`.
const SOLVE_TOL: f64 = 1e-6;

fn residual(pattern: &SparsePattern, values: &[f64], x: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let kx = pattern.mul_vec(values, x);
    let r: Vec<f64> = b.iter().zip(&kx).map(|(b, k)| b - k).collect();
    let err = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    (r, err / scale)
}

impl LinearSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves `K x = b` with one step of iterative refinement.
    pub fn solve(&mut self, pattern: &SparsePattern, values: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        let n = pattern.dim();
        let symbolic = SymbolicSparseColMatRef::new_checked(n, n, &pattern.col_ptr, None, &pattern.row_idx);
        if self.symbolic.is_none() {
            let analysis = SymbolicLu::try_new(symbolic)
                .map_err(|e| Error::SingularTangent(format!("symbolic analysis failed: {e:?}")))?;
            self.symbolic = Some(analysis);
        }
        let analysis = self.symbolic.clone().expect("analysis present");
        // symmetric equilibration: S K S with S = diag(1/sqrt(max |K_ij| in column j))
        let mut scale = vec![0.0f64; n];
        for c in 0..n {
            for k in pattern.col_ptr[c]..pattern.col_ptr[c + 1] {
                scale[c] = scale[c].max(values[k].abs());
            }
        }
        for s in &mut scale {
            *s = if *s > 0.0 { 1.0 / s.sqrt() } else { 1.0 };
        }
        let mut scaled = values.to_vec();
        for c in 0..n {
            for k in pattern.col_ptr[c]..pattern.col_ptr[c + 1] {
                scaled[k] *= scale[c] * scale[pattern.row_idx[k]];
            }
        }
        let mat = SparseColMatRef::new(symbolic, &scaled);
        let lu = Lu::try_new_with_symbolic(analysis, mat)
            .map_err(|e| Error::SingularTangent(format!("factorization failed: {e:?}")))?;
        let solve = |rhs: &[f64]| {
            let mut x: Vec<f64> = rhs.iter().zip(&scale).map(|(r, s)| r * s).collect();
            lu.solve_in_place(MatMut::from_column_major_slice_mut(&mut x, n, 1));
            for (x, s) in x.iter_mut().zip(&scale) {
                *x *= s;
            }
            x
        };

        let mut x = solve(b);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularTangent("non-finite solution".into()));
        }
        let (r, mut err) = residual(pattern, values, &x, b);
        if err > 1e3 * f64::EPSILON {
            let dx = solve(&r);
            let refined: Vec<f64> = x.iter().zip(&dx).map(|(x, d)| x + d).collect();
            let (_, refined_err) = residual(pattern, values, &refined, b);
            if refined_err < err {
                x = refined;
                err = refined_err;
            }
        }
        if err > SOLVE_TOL {
            return Err(Error::SingularTangent(format!(
                "linear solve relative residual {err:e} exceeds {SOLVE_TOL:e}"
            )));
        }
        Ok(x)
    }
}
