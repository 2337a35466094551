use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Affine chart of the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Coordinate `z`, centred at `[1 : 0]`.
    North,
    /// Coordinate `w = 1/z`, centred at `[0 : 1]`.
    South,
}

/// Unit circle bundle of `O(d)` over the projective line with metric weight
/// `φ(z) = (d/2)·log(1+|z|²) + c·ψ(z)`, `ψ = (1−|z|²)/(1+|z|²)`.
///
/// Because `ψ(1/w) = −ψ(w)`, the weight on the south chart is
/// `(d/2)·log(1+|w|²) − c·ψ(w)`, and the base metric is the Fubini–Study
/// metric `(1+|z|²)⁻²` on both charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleBundleModel {
    pub d: i64,
    pub c: f64,
}

impl CircleBundleModel {
    pub fn new(d: i64, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParams(format!("perturbation amplitude {c} is not finite")));
        }
        Ok(Self { d, c })
    }

    fn signed_c(&self, chart: Chart) -> f64 {
        match chart {
            Chart::North => self.c,
            Chart::South => -self.c,
        }
    }

    pub fn psi(z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        (1.0 - r2) / (1.0 + r2)
    }

    pub fn phi(&self, chart: Chart, z: Complex64) -> f64 {
        0.5 * self.d as f64 * z.norm_sqr().ln_1p() + self.signed_c(chart) * Self::psi(z)
    }

    /// Holomorphic derivative `∂φ/∂z`.
    pub fn phi_z(&self, chart: Chart, z: Complex64) -> Complex64 {
        let s = 1.0 + z.norm_sqr();
        z.conj() * (0.5 * self.d as f64 / s - 2.0 * self.signed_c(chart) / (s * s))
    }

    /// Closed-form `∂∂̄φ`.
    pub fn phi_zzbar(&self, chart: Chart, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        let s = 1.0 + r2;
        0.5 * self.d as f64 / (s * s) + 2.0 * self.signed_c(chart) * (r2 - 1.0) / (s * s * s)
    }

    /// Fubini–Study coefficient `g = |∂/∂z|²`.
    pub fn metric(z: Complex64) -> f64 {
        let s = 1.0 + z.norm_sqr();
        1.0 / (s * s)
    }

    /// Closed-form Levi eigenvalue `φ_{zz̄}/g = d/2 − 2cψ`.
    pub fn levi_eigenvalue(&self, chart: Chart, z: Complex64) -> f64 {
        0.5 * self.d as f64 - 2.0 * self.signed_c(chart) * Self::psi(z)
    }

    /// `ω₀ = −dθ + φ_y dx − φ_x dy` in chart coordinates `(x, y, θ)`.
    pub fn omega0_real(&self, chart: Chart, x: &[f64]) -> Vec<f64> {
        let g = self.phi_z(chart, Complex64::new(x[0], x[1]));
        let phi_x = 2.0 * g.re;
        let phi_y = -2.0 * g.im;
        vec![phi_y, -phi_x, -1.0]
    }

    /// Transition to the other chart. The fibre coordinate is unchanged
    /// because the chart frames are related by the unimodular factor
    /// `(z/|z|)^d`, which we absorb into the angle.
    pub fn change_chart(&self, chart: Chart, z: Complex64, theta: f64) -> (Chart, Complex64, f64) {
        let other = match chart {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        };
        // z_S = 1/z_N and θ_S = θ_N + d·arg z_N, which is symmetric in the charts
        (other, z.inv(), (theta + self.d as f64 * z.arg()).rem_euclid(TAU))
    }

    /// Uniform point on the base sphere, uniform fibre angle. The measure
    /// `dv_X` has total mass `4π²` and is a constant multiple of this law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Chart, Complex64, f64, f64) {
        let (ux, uy, uz) = loop {
            let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 0.0 {
                break (v[0] / n, v[1] / n, v[2] / n);
            }
        };
        let theta = rng.gen::<f64>() * TAU;
        if uz >= 0.0 {
            (Chart::North, Complex64::new(ux, uy) / (1.0 + uz), theta, self.volume())
        } else {
            (Chart::South, Complex64::new(ux, -uy) / (1.0 - uz), theta, self.volume())
        }
    }

    pub fn volume(&self) -> f64 {
        4.0 * PI * PI
    }
}
