use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::InvariantState;
use crate::{Error, Result};

/// Isotropic stored-energy functions of `(I1, I2, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MaterialLaw {
    /// `a(I1−3) + b(I2−3) + c/2 (J−1)² − d ln J`.
    MooneyRivlin { a: f64, b: f64, c: f64, d: f64 },
    /// `μ/2 (I1−3) − μ/2 ln J + κ/8 ln²J`.
    NeoHookeanLog { mu: f64, kappa: f64 },
    /// `α/2 I1² + β/2 I2² − ν ln J`.
    QuadraticMooneyRivlin { alpha: f64, beta: f64, nu_log: f64 },
    /// `μ/2 (I1−3) − μ ln J + λ/4 (J² − 1 − 2 ln J)`.
    NeoHookeanJ2 { mu: f64, lambda: f64 },
}

/// Partial derivatives of `W` with respect to `(I1, I2, J)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LawDerivatives {
    pub w: f64,
    pub w1: f64,
    pub w2: f64,
    pub wj: f64,
    pub w11: f64,
    pub w22: f64,
    pub wjj: f64,
}

impl MaterialLaw {
    /// Mooney-Rivlin with `d = 2a + 4b`, which makes the identity stress free.
    pub fn mooney_rivlin(a: f64, b: f64, c: f64) -> Self {
        Self::MooneyRivlin {
            a,
            b,
            c,
            d: 2.0 * a + 4.0 * b,
        }
    }

    /// Quadratic Mooney-Rivlin with `ν = 6α + 12β` (stress free at identity).
    pub fn quadratic_mooney_rivlin(alpha: f64, beta: f64) -> Self {
        Self::QuadraticMooneyRivlin {
            alpha,
            beta,
            nu_log: 6.0 * alpha + 12.0 * beta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::MooneyRivlin { .. } => "mooney_rivlin",
            Self::NeoHookeanLog { .. } => "neo_hookean_log",
            Self::QuadraticMooneyRivlin { .. } => "quadratic_mooney_rivlin",
            Self::NeoHookeanJ2 { .. } => "neo_hookean_j2",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::MooneyRivlin { a, b, c, d } => vec![("a", a), ("b", b), ("c", c), ("d", d)],
            Self::NeoHookeanLog { mu, kappa } => vec![("mu", mu), ("kappa", kappa)],
            Self::QuadraticMooneyRivlin { alpha, beta, nu_log } => {
                vec![("alpha", alpha), ("beta", beta), ("nu_log", nu_log)]
            }
            Self::NeoHookeanJ2 { mu, lambda } => vec![("mu", mu), ("lambda", lambda)],
        }
    }

    /// Replaces one parameter by name.
    pub fn with_param(mut self, key: &str, value: f64) -> Result<Self> {
        let slot = match (&mut self, key) {
            (Self::MooneyRivlin { a, .. }, "a") => a,
            (Self::MooneyRivlin { b, .. }, "b") => b,
            (Self::MooneyRivlin { c, .. }, "c") => c,
            (Self::MooneyRivlin { d, .. }, "d") => d,
            (Self::NeoHookeanLog { mu, .. }, "mu") => mu,
            (Self::NeoHookeanLog { kappa, .. }, "kappa") => kappa,
            (Self::QuadraticMooneyRivlin { alpha, .. }, "alpha") => alpha,
            (Self::QuadraticMooneyRivlin { beta, .. }, "beta") => beta,
            (Self::QuadraticMooneyRivlin { nu_log, .. }, "nu_log") => nu_log,
            (Self::NeoHookeanJ2 { mu, .. }, "mu") => mu,
            (Self::NeoHookeanJ2 { lambda, .. }, "lambda") => lambda,
            _ => {
                let known: Vec<_> = self.params().into_iter().map(|(k, _)| k).collect();
                return Err(Error::Config(format!(
                    "law {} has no parameter `{key}` (expected one of {})",
                    self.name(),
                    known.join(", ")
                )));
            }
        };
        if !value.is_finite() {
            return Err(Error::Config(format!("parameter `{key}` must be finite")));
        }
        *slot = value;
        Ok(self)
    }

    pub fn derivatives(&self, i1: f64, i2: f64, j: f64) -> Result<LawDerivatives> {
        if !(j > 0.0) {
            return Err(Error::Inadmissible { jacobian: j });
        }
        let ln = j.ln();
        let jj = j * j;
        Ok(match *self {
            Self::MooneyRivlin { a, b, c, d } => LawDerivatives {
                w: a * (i1 - 3.0) + b * (i2 - 3.0) + 0.5 * c * (j - 1.0).powi(2) - d * ln,
                w1: a,
                w2: b,
                wj: c * (j - 1.0) - d / j,
                wjj: c + d / jj,
                ..Default::default()
            },
            Self::NeoHookeanLog { mu, kappa } => LawDerivatives {
                w: 0.5 * mu * (i1 - 3.0) - 0.5 * mu * ln + 0.125 * kappa * ln * ln,
                w1: 0.5 * mu,
                wj: -0.5 * mu / j + 0.25 * kappa * ln / j,
                wjj: 0.5 * mu / jj + 0.25 * kappa * (1.0 - ln) / jj,
                ..Default::default()
            },
            Self::QuadraticMooneyRivlin { alpha, beta, nu_log } => LawDerivatives {
                w: 0.5 * alpha * i1 * i1 + 0.5 * beta * i2 * i2 - nu_log * ln,
                w1: alpha * i1,
                w2: beta * i2,
                wj: -nu_log / j,
                w11: alpha,
                w22: beta,
                wjj: nu_log / jj,
            },
            Self::NeoHookeanJ2 { mu, lambda } => LawDerivatives {
                w: 0.5 * mu * (i1 - 3.0) - mu * ln + 0.25 * lambda * (jj - 1.0 - 2.0 * ln),
                w1: 0.5 * mu,
                wj: -mu / j + 0.5 * lambda * (j - 1.0 / j),
                wjj: mu / jj + 0.5 * lambda * (1.0 + 1.0 / jj),
                ..Default::default()
            },
        })
    }
}

/// Stored energy with gradient and Hessian blocks in the parametrisation of
/// the invariant state.
#[derive(Debug, Clone, PartialEq)]
pub struct Energy<const N: usize> {
    pub w: f64,
    pub d: [SVector<f64, N>; 3],
    pub dd: [[SMatrix<f64, N, N>; 3]; 3],
}

pub fn energy_and_derivatives<const N: usize>(law: &MaterialLaw, inv: &InvariantState<N>) -> Result<Energy<N>> {
    let s = law.derivatives(inv.i1, inv.i2, inv.j)?;
    let d = std::array::from_fn(|k| s.w1 * inv.d_i1[k] + s.w2 * inv.d_i2[k] + s.wj * inv.d_j[k]);
    let dd = std::array::from_fn(|k| {
        std::array::from_fn(|l| {
            s.w1 * inv.dd_i1[k][l]
                + s.w2 * inv.dd_i2[k][l]
                + s.wj * inv.dd_j[k][l]
                + s.w11 * inv.d_i1[k] * inv.d_i1[l].transpose()
                + s.w22 * inv.d_i2[k] * inv.d_i2[l].transpose()
                + s.wjj * inv.d_j[k] * inv.d_j[l].transpose()
        })
    });
    Ok(Energy { w: s.w, d, dd })
}
