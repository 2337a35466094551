//! Szegő kernel functions `Π⁰_m(x)` for the model manifolds.
//!
//! Three routes are used. On the round sphere with unit weights the
//! monomials are orthogonal with closed-form norms. On circle bundles the
//! CR functions are `z^a e^{−mφ} e^{imθ}`, again orthogonal, with norms
//! given by a one-dimensional integral. On other weighted hypersurfaces an
//! orthonormal basis is produced by the Arnoldi process in [`arnoldi`].

pub mod arnoldi;
pub mod quadrature;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::manifold::{Chart, CircleBundleModel, CrModel, DefiningFunction, HypersurfaceModel, Point};
use crate::numeric::quadrature::{periodic_nodes, Legendre};
use crate::numeric::{ln_factorial, log_sum_exp};
use quadrature::OrbitQuadrature;

/// Resolution of the orbit-reduced rule used on hypersurfaces without
/// closed-form norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SzegoConfig {
    pub n_s: usize,
    pub n_gamma: usize,
    /// Also evaluate on a coarser rule and report the difference as the
    /// error bar.
    pub error_estimate: bool,
}

impl Default for SzegoConfig {
    fn default() -> Self {
        Self { n_s: 96, n_gamma: 64, error_estimate: true }
    }
}

impl SzegoConfig {
    fn coarse(&self) -> Self {
        Self { n_s: self.n_s * 3 / 4, n_gamma: self.n_gamma * 3 / 4, error_estimate: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormTable {
    pub m: i64,
    /// Exponent vectors (hypersurfaces) or the single exponent `a` of `z^a`
    /// (bundles).
    pub monomials: Vec<Vec<u32>>,
    pub norms_sq: Vec<f64>,
    /// Whether distinct monomials are orthogonal for this model.
    pub orthogonal: bool,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SzegoProfile {
    pub model: String,
    pub m_list: Vec<i64>,
    pub probes: Vec<String>,
    /// `values[i][j] = m_i^{−(n−1)} Π⁰_{m_i}(probe_j)`.
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<Vec<f64>>,
}

fn hypersurface_closed_form(h: &HypersurfaceModel) -> bool {
    h.defining_function() == DefiningFunction::Round && h.weights().iter().all(|&w| w == 1)
}

/// Multi-indices of total degree `m` in `n` variables.
fn multi_indices(n: usize, m: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![m]];
    }
    (0..=m)
        .rev()
        .flat_map(|a| {
            multi_indices(n - 1, m - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// `ln ‖z^α‖²` on the round unit sphere: `2πⁿ α!/(n−1+|α|)!`.
fn ln_round_norm(alpha: &[u32]) -> f64 {
    let n = alpha.len() as u64;
    let total: u64 = alpha.iter().map(|&a| a as u64).sum();
    (2.0 * PI.powi(n as i32)).ln() + alpha.iter().map(|&a| ln_factorial(a as u64)).sum::<f64>()
        - ln_factorial(n - 1 + total)
}

/// `ln ‖z^a e^{−mφ}‖²` on a circle bundle:
/// `4π² ∫₀¹ τ^a (1−τ)^{k−a} e^{−2mc(1−2τ)} dτ` with `k = dm`.
pub fn ln_bundle_norm(b: &CircleBundleModel, m: i64, a: u64) -> f64 {
    let k = (b.d * m) as u64;
    let base = (4.0 * PI * PI).ln();
    if b.c == 0.0 {
        return base + ln_factorial(a) + ln_factorial(k - a) - ln_factorial(k + 1);
    }
    let panels = 64;
    let rule = Legendre::on_interval(16, 0.0, 1.0 / panels as f64);
    let mut terms = Vec::with_capacity(panels * 16);
    let mc = 2.0 * m as f64 * b.c;
    for p in 0..panels {
        let off = p as f64 / panels as f64;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = off + x;
            let v = a as f64 * t.ln() + (k - a) as f64 * (1.0 - t).ln() - mc * (1.0 - 2.0 * t);
            terms.push(w.ln() + v);
        }
    }
    base + log_sum_exp(&terms)
}

pub fn cr_basis_norms(model: &CrModel, m: i64, cfg: &SzegoConfig) -> Result<NormTable> {
    match model {
        CrModel::Hypersurface(h) if hypersurface_closed_form(h) => {
            let mons = if m < 0 { Vec::new() } else { multi_indices(h.n(), m as u32) };
            let norms_sq = mons.iter().map(|a| ln_round_norm(a).exp()).collect();
            Ok(NormTable { m, monomials: mons, norms_sq, orthogonal: true, method: "beta" })
        }
        CrModel::Hypersurface(h) => {
            let quad = OrbitQuadrature::new(h, cfg.n_s, cfg.n_gamma)?;
            let mons = arnoldi::monomials(h.weights(), m);
            let norms_sq =
                mons.iter().map(|&(a, b)| quad.integrate(|z| (z[0].powu(a) * z[1].powu(b)).norm_sqr())).collect();
            Ok(NormTable {
                m,
                monomials: mons.iter().map(|&(a, b)| vec![a, b]).collect(),
                norms_sq,
                orthogonal: h.defining_function() == DefiningFunction::Round,
                method: "quadrature",
            })
        }
        CrModel::Bundle(b) => {
            let k = b.d * m;
            let mons: Vec<Vec<u32>> = if k < 0 { Vec::new() } else { (0..=k as u32).map(|a| vec![a]).collect() };
            let norms_sq = mons.iter().map(|a| ln_bundle_norm(b, m, a[0] as u64).exp()).collect();
            Ok(NormTable {
                m,
                monomials: mons,
                norms_sq,
                orthogonal: true,
                method: if b.c == 0.0 { "beta" } else { "quadrature" },
            })
        }
    }
}

/// `L²` Gram matrix of the degree-`m` monomials on an `n = 2` hypersurface.
pub fn monomial_gram(h: &HypersurfaceModel, m: i64, cfg: &SzegoConfig) -> Result<DMatrix<Complex64>> {
    let quad = OrbitQuadrature::new(h, cfg.n_s, cfg.n_gamma)?;
    let mons = arnoldi::monomials(h.weights(), m);
    let vals: Vec<Vec<Complex64>> =
        quad.points.iter().map(|z| mons.iter().map(|&(a, b)| z[0].powu(a) * z[1].powu(b)).collect()).collect();
    let d = mons.len();
    Ok(DMatrix::from_fn(d, d, |i, j| vals.iter().zip(&quad.weights).map(|(v, w)| v[i] * v[j].conj() * *w).sum()))
}

/// `Π⁰_m(x)` at each probe (unscaled).
pub fn kernel_values(model: &CrModel, m: i64, probes: &[Point], cfg: &SzegoConfig) -> Result<Vec<f64>> {
    Ok(basis_values(model, m, probes, cfg)?.into_iter().map(|v| v.iter().map(|c| c.norm_sqr()).sum()).collect())
}

/// Values at each probe of an orthonormal basis of `H⁰_{b,m}`; the phase
/// factor `e^{imθ}` of bundle functions is included.
pub fn basis_values(model: &CrModel, m: i64, probes: &[Point], cfg: &SzegoConfig) -> Result<Vec<Vec<Complex64>>> {
    for p in probes {
        model.check_on_manifold(p)?;
    }
    match model {
        CrModel::Hypersurface(h) if hypersurface_closed_form(h) => {
            let table = cr_basis_norms(model, m, cfg)?;
            Ok(probes
                .iter()
                .map(|p| {
                    let z = p.ambient().expect("hypersurface point");
                    table
                        .monomials
                        .iter()
                        .map(|alpha| {
                            let ln_n = ln_round_norm(alpha);
                            let mut v = Complex64::new((-0.5 * ln_n).exp(), 0.0);
                            for (c, &a) in z.iter().zip(alpha) {
                                v *= c.powu(a);
                            }
                            v
                        })
                        .collect()
                })
                .collect())
        }
        CrModel::Hypersurface(h) => {
            let quad = OrbitQuadrature::new(h, cfg.n_s, cfg.n_gamma)?;
            let zs: Vec<Vec<Complex64>> = probes.iter().map(|p| p.ambient().unwrap().to_vec()).collect();
            Ok(arnoldi::orthonormal_values(h, &quad, m, &zs))
        }
        CrModel::Bundle(b) => {
            let k = b.d * m;
            if k < 0 {
                return Ok(vec![Vec::new(); probes.len()]);
            }
            let ln_norms: Vec<f64> = (0..=k as u64).map(|a| ln_bundle_norm(b, m, a)).collect();
            Ok(probes
                .iter()
                .map(|p| {
                    let Point::Bundle { chart, z, theta } = p else { unreachable!() };
                    let phase = Complex64::from_polar(1.0, m as f64 * theta);
                    let lr = z.norm().ln();
                    let arg = z.arg();
                    let weight = -(m as f64) * b.phi(*chart, *z);
                    ln_norms
                        .iter()
                        .enumerate()
                        .map(|(a, ln_n)| {
                            // exponent of the chart coordinate
                            let e = match chart {
                                Chart::North => a as f64,
                                Chart::South => (k as usize - a) as f64,
                            };
                            let modulus = if e == 0.0 { 0.0 } else { e * lr };
                            let ang = e * arg;
                            Complex64::from_polar((modulus + weight - 0.5 * ln_n).exp(), ang) * phase
                        })
                        .collect()
                })
                .collect())
        }
    }
}

fn scale(model: &CrModel, m: i64) -> f64 {
    (m as f64).powi(model.n() as i32 - 1)
}

pub fn szego_profile(model: &CrModel, m_list: &[i64], probes: &[Point], cfg: &SzegoConfig) -> Result<SzegoProfile> {
    if m_list.iter().any(|&m| m <= 0) {
        return Err(Error::InvalidParams("profile needs positive Fourier indices".into()));
    }
    let uses_quadrature = matches!(model, CrModel::Hypersurface(h) if !hypersurface_closed_form(h));
    let mut values = Vec::with_capacity(m_list.len());
    let mut errors = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let s = scale(model, m);
        let v: Vec<f64> = kernel_values(model, m, probes, cfg)?.iter().map(|x| x / s).collect();
        let e = if uses_quadrature && cfg.error_estimate {
            let coarse = kernel_values(model, m, probes, &cfg.coarse())?;
            v.iter().zip(coarse).map(|(a, b)| (a - b / s).abs()).collect()
        } else {
            vec![0.0; v.len()]
        };
        values.push(v);
        errors.push(e);
    }
    Ok(SzegoProfile {
        model: model.to_string(),
        m_list: m_list.to_vec(),
        probes: (0..probes.len()).map(|i| format!("p{i}")).collect(),
        values,
        errors,
    })
}

/// Fourier component `Q_m u(x) = (1/2π)∫ u(e^{iθ}∘x) e^{−imθ} dθ` by the
/// periodic trapezoidal rule with `2(|m|+8)` nodes.
pub fn fourier_project<'a, F>(model: &'a CrModel, u: F, m: i64) -> impl Fn(&Point) -> Complex64 + 'a
where
    F: Fn(&Point) -> Complex64 + 'a,
{
    let n = 2 * (m.unsigned_abs() as usize + 8);
    move |x: &Point| {
        let sum: Complex64 =
            periodic_nodes(n).map(|th| u(&model.act(x, th)) * Complex64::from_polar(1.0, -(m as f64) * th)).sum();
        sum / n as f64
    }
}
