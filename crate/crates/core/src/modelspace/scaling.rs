//! Blow-up checks: the scaled chart weight `2m·φ(z/√m)` tends to `2Φ₀`,
//! and the scaled Kohn Laplacian tends to the model operator.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::manifold::BrtChart;

fn check_radius(chart: &BrtChart, m: f64) -> Result<f64> {
    if m < 3.0 {
        return Err(Error::InvalidParams(format!("scaling checks need m >= 3, got {m}")));
    }
    let r = m.ln();
    let needed = r / m.sqrt();
    if needed > chart.epsilon {
        return Err(Error::ChartRadiusExceeded { needed, available: chart.epsilon });
    }
    Ok(r)
}

/// Polar grid on the polydisc of radius `r`: `n` radii times `n` angles per
/// coordinate.
fn polydisc_grid(dim: usize, r: f64, n: usize) -> Vec<Vec<Complex64>> {
    let disc: Vec<Complex64> = (0..n)
        .flat_map(|i| {
            let rad = r * i as f64 / (n - 1) as f64;
            (0..n).map(move |k| Complex64::from_polar(rad, TAU * k as f64 / n as f64))
        })
        .collect();
    let mut pts: Vec<Vec<Complex64>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                disc.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(*c);
                    q
                })
            })
            .collect();
    }
    pts
}

/// `sup_{D_{log m}} |2m·φ(z/√m) − 2Φ₀(z)|`, on a 41-point polar grid per
/// real direction, refined until the sup changes by less than 1%.
pub fn weight_gap(chart: &BrtChart, m: f64) -> Result<f64> {
    let r = check_radius(chart, m)?;
    let s = m.sqrt();
    let gap_on = |n: usize| {
        polydisc_grid(chart.dim(), r, n)
            .iter()
            .map(|z| {
                let scaled: Vec<Complex64> = z.iter().map(|c| c / s).collect();
                let phi0: f64 = chart.lambdas.iter().zip(z).map(|(l, c)| l * c.norm_sqr()).sum();
                (2.0 * m * chart.phi(&scaled) - 2.0 * phi0).abs()
            })
            .fold(0.0f64, f64::max)
    };
    let mut n = 41;
    let mut sup = gap_on(n);
    for _ in 0..3 {
        if chart.dim() > 1 {
            break;
        }
        n = 2 * n - 1;
        let finer = gap_on(n);
        let change = (finer - sup).abs();
        sup = finer;
        if change <= 0.01 * sup.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(sup)
}

/// Gaussian test function `exp(−|z−c|²/(2σ²))`, treated as supported in the
/// disc of radius `|c| + 6σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestForm {
    pub center: (f64, f64),
    pub sigma: f64,
}

impl Default for TestForm {
    fn default() -> Self {
        Self { center: (0.0, 0.0), sigma: 0.5 }
    }
}

impl TestForm {
    pub fn support_radius(&self) -> f64 {
        self.center.0.hypot(self.center.1) + 6.0 * self.sigma
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let d = z - Complex64::new(self.center.0, self.center.1);
        Complex64::new((-d.norm_sqr() / (2.0 * self.sigma * self.sigma)).exp(), 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorResidual {
    pub m: f64,
    pub q: usize,
    pub residual: f64,
    /// `|residual(h) − residual(h/2)|`.
    pub fd_error: f64,
    pub inconclusive: bool,
}

const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];

fn d_x<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64, h: f64, dir: Complex64) -> Complex64 {
    STENCIL.iter().map(|&(o, c)| c * f(z + dir * (o * h))).sum::<Complex64>() / h
}

fn d_z<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64, h: f64) -> Complex64 {
    0.5 * (d_x(f, z, h, Complex64::new(1.0, 0.0)) - Complex64::i() * d_x(f, z, h, Complex64::i()))
}

fn d_zbar<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64, h: f64) -> Complex64 {
    0.5 * (d_x(f, z, h, Complex64::new(1.0, 0.0)) + Complex64::i() * d_x(f, z, h, Complex64::i()))
}

/// Sup-norm of `(□_{(m)} − □_{2Φ₀})f` for a Gaussian test function, both
/// operators discretized by nested five-point differences. Supported for
/// one-dimensional charts (`n = 2`), degrees `q ∈ {0, 1}`.
pub fn operator_residual(chart: &BrtChart, m: f64, q: usize, test: &TestForm) -> Result<OperatorResidual> {
    if chart.dim() != 1 {
        return Err(Error::Unsupported("operator residual is implemented for n = 2".into()));
    }
    if q > 1 {
        return Err(Error::InvalidParams(format!("q = {q} must be 0 or 1")));
    }
    let r = check_radius(chart, m)?;
    if test.support_radius() > r {
        return Err(Error::TestFormSupport { support: test.support_radius(), radius: r });
    }
    let s = m.sqrt();
    let lam = chart.lambdas[0];
    let psi = |z: Complex64| Complex64::new(2.0 * m * chart.phi(&[z / s]), 0.0);
    let g = |z: Complex64| chart.density(&[z / s]);
    let f = |z: Complex64| test.eval(z);

    let grid = polydisc_grid(1, test.support_radius(), 41);
    let eval = |h: f64| -> f64 {
        grid.iter()
            .map(|p| {
                let z = p[0];
                let diff = match q {
                    0 => {
                        let fzb = d_zbar(&f, z, h);
                        let fzzb = d_z(&|w| d_zbar(&f, w, h), z, h);
                        let scaled = -(fzzb - d_z(&psi, z, h) * fzb) / g(z);
                        let model = -(fzzb - 2.0 * lam * z.conj() * fzb);
                        scaled - model
                    }
                    _ => {
                        let star_m = |w: Complex64| -(d_z(&f, w, h) - d_z(&psi, w, h) * f(w)) / g(w);
                        let star_0 = |w: Complex64| -(d_z(&f, w, h) - 2.0 * lam * w.conj() * f(w));
                        d_zbar(&star_m, z, h) - d_zbar(&star_0, z, h)
                    }
                };
                diff.norm()
            })
            .fold(0.0, f64::max)
    };
    let h = 1e-2 * test.sigma;
    let coarse = eval(h);
    let fine = eval(0.5 * h);
    let fd_error = (coarse - fine).abs();
    Ok(OperatorResidual { m, q, residual: fine, fd_error, inconclusive: fd_error > 0.1 * fine })
}
