//! The flat model `ℂ^{n−1}` with weight `Φ₀ = Σ λ_j|w_j|²`.
//!
//! Conventions: `dv = 2^{n−1} dx` (Lebesgue measure times `2^{n−1}`) and
//! `{dw̄_j}` orthonormal. With these, the Szegő density at the origin is
//! `|2λ₁⋯2λ_{n−1}|/(2π)^{n−1}` on `X(q)` and zero elsewhere.

mod bruteforce;
mod scaling;

pub use bruteforce::{density_bruteforce, BruteforceSpec};
pub use scaling::{operator_residual, weight_gap, OperatorResidual, TestForm};

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::quadrature::ScaledHermite;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    pub lambdas: Vec<f64>,
    pub q: usize,
}

impl ModelParams {
    pub fn new(lambdas: Vec<f64>, q: usize) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidParams("need at least one eigenvalue".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| l.is_nan() || l.abs() < 1e-9 || !l.is_finite()) {
            return Err(Error::InvalidParams(format!("degenerate eigenvalue {l}")));
        }
        if q > lambdas.len() {
            return Err(Error::InvalidParams(format!("q = {q} exceeds n − 1 = {}", lambdas.len())));
        }
        Ok(Self { lambdas, q })
    }

    pub fn signature(&self) -> usize {
        self.lambdas.iter().filter(|&&l| l < 0.0).count()
    }

    /// `n` of the CR manifold, i.e. one more than the model dimension.
    pub fn n(&self) -> usize {
        self.lambdas.len() + 1
    }

    /// Indices of the negative eigenvalues, which index the form component.
    pub fn negative_directions(&self) -> Vec<usize> {
        (0..self.lambdas.len()).filter(|&j| self.lambdas[j] < 0.0).collect()
    }
}

/// Extremal `(0,q)`-form at `w`.
///
/// Only the component along `dw̄^J`, `J` the negative directions, is
/// nonzero. The returned pair is `(J, coefficient)`; `J` uses the original
/// coordinate order, so no permutation needs to be undone by callers.
pub fn extremal_form_eval(params: &ModelParams, w: &[Complex64]) -> Result<(Vec<usize>, Complex64)> {
    if params.signature() != params.q {
        return Err(Error::SignatureMismatch { signature: params.signature(), q: params.q });
    }
    let amp2 = params.lambdas.iter().map(|l| (2.0 * l).abs()).product::<f64>()
        / (2.0 * PI).powi(params.lambdas.len() as i32)
        / (2.0 * PI);
    let exponent: f64 =
        params.lambdas.iter().zip(w).filter(|(l, _)| **l < 0.0).map(|(l, c)| 2.0 * l * c.norm_sqr()).sum();
    Ok((params.negative_directions(), Complex64::new(amp2.sqrt() * exponent.exp(), 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalChecks {
    pub norm_value: f64,
    pub center_value: f64,
    /// Relative change between the two quadrature levels.
    pub refinement_change: f64,
}

/// `(∫|u|² e^{−2Φ₀} dv, |u(0)|²)` for the extremal form, by tensor
/// Gauss–Hermite quadrature with `nodes` points per real axis.
pub fn extremal_checks(params: &ModelParams, nodes: usize) -> Result<ExtremalChecks> {
    let (_, c0) = extremal_form_eval(params, &vec![Complex64::new(0.0, 0.0); params.lambdas.len()])?;
    let norm_value = extremal_norm(params, nodes)?;
    let coarse = extremal_norm(params, (nodes / 2).max(2))?;
    let change = ((norm_value - coarse) / norm_value).abs();
    if change > 1e-6 {
        return Err(Error::QuadratureNonconvergence(change));
    }
    Ok(ExtremalChecks { norm_value, center_value: c0.norm_sqr(), refinement_change: change })
}

fn extremal_norm(params: &ModelParams, nodes: usize) -> Result<f64> {
    let d = params.lambdas.len();
    if d > 2 {
        return Err(Error::Unsupported(format!("tensor quadrature supports n − 1 ≤ 2, got {d}")));
    }
    // each real axis carries the Gaussian exp(−2|λ_j| x²)
    let rules: Vec<ScaledHermite> = params.lambdas.iter().map(|l| ScaledHermite::new(nodes, 2.0 * l.abs())).collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; 2 * d];
    let len = nodes.max(2);
    loop {
        let mut w = Vec::with_capacity(d);
        let mut weight = 2f64.powi(d as i32);
        for j in 0..d {
            let r = &rules[j];
            let (ix, iy) = (idx[2 * j], idx[2 * j + 1]);
            w.push(Complex64::new(r.nodes[ix], r.nodes[iy]));
            weight *= r.raw_weight(ix, 2.0 * params.lambdas[j].abs()) * r.raw_weight(iy, 2.0 * params.lambdas[j].abs());
        }
        let (_, u) = extremal_form_eval(params, &w)?;
        let phi0: f64 = params.lambdas.iter().zip(&w).map(|(l, c)| l * c.norm_sqr()).sum();
        total += weight * u.norm_sqr() * (-2.0 * phi0).exp();
        // odometer over the tensor grid
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < len {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Closed-form Szegő density at the origin.
pub fn model_density(params: &ModelParams) -> f64 {
    if params.signature() != params.q {
        return 0.0;
    }
    params.lambdas.iter().map(|l| (2.0 * l).abs()).product::<f64>() / (2.0 * PI).powi(params.lambdas.len() as i32)
}
