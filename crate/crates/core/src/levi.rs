//! Levi form, spectrum and signature strata.
//!
//! The form is assembled from the exterior derivative of the ambient
//! extension of `ω₀`: since `ω₀` annihilates `U` and `V̄`,
//! `2i·ℒ(U, V̄) = ⟨[U, V̄], ω₀⟩ = −dω₀(U, V̄)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::manifold::{ContactFrame, CrModel, Point};
use crate::numeric::fd::jacobian;

/// Default tolerance below which an eigenvalue counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-9;
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct LeviSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub det: f64,
    pub signature: usize,
    pub degenerate: bool,
}

impl LeviSpectrum {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, tol: f64) -> Self {
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        LeviSpectrum {
            det: eigenvalues.iter().product(),
            signature: eigenvalues.iter().filter(|&&l| l < 0.0).count(),
            degenerate: eigenvalues.iter().any(|l| l.abs() < tol),
            eigenvalues,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    Signature(usize),
    Degenerate,
}

/// Matrix `ℒ(U_a, Ū_b)` in the frame's orthonormal basis.
pub fn levi_matrix(model: &CrModel, point: &Point) -> Result<DMatrix<Complex64>> {
    let frame = model.frame(point)?;
    Ok(levi_matrix_in_frame(model, &frame))
}

pub fn levi_matrix_in_frame(model: &CrModel, frame: &ContactFrame) -> DMatrix<Complex64> {
    let field = |x: &[f64]| crate::manifold::omega0_field_at(model, &frame.point, x);
    let jac = jacobian(&field, &frame.coords, FD_STEP);
    let dim = frame.coords.len();
    // dω(a, b) = Σ (∂_i ω_k − ∂_k ω_i) a_i b_k with jac[k][i] = ∂_i ω_k
    let d_omega = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for k in 0..dim {
                acc += (jac[k][i] - jac[i][k]) * a[i] * b[k];
            }
        }
        acc
    };
    let r = frame.basis.len();
    DMatrix::from_fn(r, r, |a, b| {
        let vbar: Vec<Complex64> = frame.basis[b].iter().map(|c| c.conj()).collect();
        Complex64::new(0.0, 0.5) * d_omega(&frame.basis[a], &vbar)
    })
}

pub fn levi_spectrum(model: &CrModel, point: &Point) -> Result<LeviSpectrum> {
    let m = levi_matrix(model, point)?;
    Ok(spectrum_of(&m))
}

pub(crate) fn spectrum_of(m: &DMatrix<Complex64>) -> LeviSpectrum {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    LeviSpectrum::from_eigenvalues(eig.eigenvalues.iter().cloned().collect(), DEGENERACY_TOL)
}

pub fn classify(spec: &LeviSpectrum, tol: f64) -> Stratum {
    if spec.eigenvalues.iter().any(|l| l.abs() < tol) {
        Stratum::Degenerate
    } else {
        Stratum::Signature(spec.signature)
    }
}

pub fn morse_integrand(spec: &LeviSpectrum) -> f64 {
    spec.det.abs()
}
