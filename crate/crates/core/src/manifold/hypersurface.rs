use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric::{gcd_all, root::first_sign_change, sphere_volume};

/// Defining function family for a weighted hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefiningFunction {
    /// `|z|² − 1`.
    Round,
    /// `|z₁|² + |z₁² + z₂|² + |z₂|² − 1`, weights `(1, 2)`.
    Ellipsoid,
}

/// Compact hypersurface `{ρ = 0} ⊂ ℂⁿ` with the weighted circle action
/// `e^{iθ}∘z = (e^{iw₁θ}z₁, …, e^{iwₙθ}zₙ)`.
///
/// The T-rigid metric is the ambient flat metric on the horizontal bundle,
/// optionally rescaled by `1 + a|z₁|²`, with `T` declared unit and orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceModel {
    weights: Vec<u32>,
    rho: DefiningFunction,
    horizontal_rescale: f64,
}

impl HypersurfaceModel {
    pub fn new(weights: Vec<u32>, rho: DefiningFunction) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidModel("empty weight vector".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidModel(format!("weight 0 in {weights:?}: the action would not be transversal")));
        }
        let g = gcd_all(&weights);
        if g != 1 {
            return Err(Error::NonEffectiveAction { weights, gcd: g });
        }
        if rho == DefiningFunction::Ellipsoid && weights != [1, 2] {
            return Err(Error::InvalidModel("the ellipsoid is only defined for n = 2 with weights (1, 2)".into()));
        }
        Ok(Self { weights, rho, horizontal_rescale: 0.0 })
    }

    /// Same manifold with the horizontal metric multiplied by `1 + a|z₁|²`.
    pub fn with_horizontal_rescale(mut self, a: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParams(format!("rescale amplitude {a} must be >= 0")));
        }
        self.horizontal_rescale = a;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn defining_function(&self) -> DefiningFunction {
        self.rho
    }

    pub fn horizontal_rescale(&self) -> f64 {
        self.horizontal_rescale
    }

    pub fn rho(&self, z: &[Complex64]) -> f64 {
        match self.rho {
            DefiningFunction::Round => z.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0,
            DefiningFunction::Ellipsoid => {
                let u = z[0] * z[0] + z[1];
                z[0].norm_sqr() + u.norm_sqr() + z[1].norm_sqr() - 1.0
            }
        }
    }

    /// Holomorphic derivatives `∂ρ/∂z_j`.
    pub fn d_rho(&self, z: &[Complex64]) -> Vec<Complex64> {
        match self.rho {
            DefiningFunction::Round => z.iter().map(|c| c.conj()).collect(),
            DefiningFunction::Ellipsoid => {
                let ub = (z[0] * z[0] + z[1]).conj();
                vec![z[0].conj() + 2.0 * z[0] * ub, ub + z[1].conj()]
            }
        }
    }

    /// Complex Hessian `∂²ρ/∂z_j∂z̄_k`, used as an independent check of the
    /// finite-difference Levi form.
    pub fn complex_hessian(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = self.n();
        let one = Complex64::new(1.0, 0.0);
        match self.rho {
            DefiningFunction::Round => {
                (0..n).map(|j| (0..n).map(|k| if j == k { one } else { Complex64::new(0.0, 0.0) }).collect()).collect()
            }
            DefiningFunction::Ellipsoid => {
                vec![vec![one + 4.0 * z[0].norm_sqr(), 2.0 * z[0]], vec![2.0 * z[0].conj(), 2.0 * one]]
            }
        }
    }

    pub fn act(&self, z: &[Complex64], theta: f64) -> Vec<Complex64> {
        z.iter().zip(&self.weights).map(|(c, &w)| c * Complex64::from_polar(1.0, w as f64 * theta)).collect()
    }

    /// Generator `T = d/dθ e^{iθ}∘z` as a complex vector.
    pub fn generator(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.iter().zip(&self.weights).map(|(c, &w)| Complex64::new(0.0, w as f64) * c).collect()
    }

    /// `A = Σ w_j z_j ∂ρ/∂z_j`, real and positive on X; `ω₀ = θ₀/(2A)`.
    pub fn action_pairing(&self, z: &[Complex64]) -> f64 {
        let g = self.d_rho(z);
        z.iter().zip(&g).zip(&self.weights).map(|((c, d), &w)| (w as f64 * c * d).re).sum()
    }

    /// Horizontal metric factor `s(z)`.
    pub fn metric_scale(&self, z: &[Complex64]) -> f64 {
        1.0 + self.horizontal_rescale * z[0].norm_sqr()
    }

    /// Ambient extension of `ω₀` as a real covector on `ℝ^{2n}` with
    /// coordinates `(x₁, y₁, x₂, y₂, …)`.
    pub fn omega0_real(&self, x: &[f64]) -> Vec<f64> {
        let z = to_complex(x);
        let g = self.d_rho(&z);
        let a = self.action_pairing(&z);
        // θ₀ = i(∂ρ − ∂̄ρ) = −2 Im(Σ g_j dz_j)
        let mut out = Vec::with_capacity(x.len());
        for gj in g {
            out.push(-gj.im / a);
            out.push(-gj.re / a);
        }
        out
    }

    /// Real gradient of ρ.
    pub fn grad_rho_real(&self, z: &[Complex64]) -> Vec<f64> {
        self.d_rho(z).iter().flat_map(|g| [2.0 * g.re, -2.0 * g.im]).collect()
    }

    /// Smallest positive `t` with `ρ(t·u) = 0`.
    pub fn radial_root(&self, u: &[Complex64]) -> Result<f64> {
        let f = |t: f64| {
            let z: Vec<Complex64> = u.iter().map(|c| c * t).collect();
            self.rho(&z)
        };
        first_sign_change(f, 0.0, 16.0, 0.05)
    }

    /// Draw `u` uniformly on the unit sphere and push it to X radially.
    /// Returns `None` when the radial root cannot be bracketed.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Vec<Complex64>, f64)> {
        let n = self.n();
        let raw: Vec<f64> = (0..2 * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        let u: Vec<Complex64> = raw.chunks(2).map(|p| Complex64::new(p[0] / norm, p[1] / norm)).collect();
        let t = self.radial_root(&u).ok()?;
        let weight = sphere_volume(n) * self.radial_jacobian(&u, t);
        Some((u.iter().map(|c| c * t).collect(), weight))
    }

    /// Density of `dv_X` against the round measure of the unit sphere under
    /// the radial map `u ↦ t(u)·u`, measured in the T-rigid metric.
    pub fn radial_jacobian(&self, u: &[Complex64], t: f64) -> f64 {
        let ur = to_real(u);
        let z: Vec<Complex64> = u.iter().map(|c| c * t).collect();
        let x = to_real(&z);
        let grad = self.grad_rho_real(&z);
        let gu = dot(&grad, &ur);
        let om = self.omega0_real(&x);
        let tvec = to_real(&self.generator(&z));
        let s = self.metric_scale(&z);

        let pushed: Vec<Vec<f64>> = sphere_tangent_frame(&ur)
            .into_iter()
            .map(|e| {
                let dt = -t * dot(&grad, &e) / gu;
                e.iter().zip(&ur).map(|(a, b)| t * a + dt * b).collect()
            })
            .collect();
        let parts: Vec<(f64, Vec<f64>)> = pushed
            .iter()
            .map(|v| {
                let tau = -dot(&om, v);
                let h: Vec<f64> = v.iter().zip(&tvec).map(|(a, b)| a - tau * b).collect();
                (tau, h)
            })
            .collect();
        let d = parts.len();
        let gram = nalgebra::DMatrix::from_fn(d, d, |i, j| s * dot(&parts[i].1, &parts[j].1) + parts[i].0 * parts[j].0);
        gram.determinant().max(0.0).sqrt()
    }

    /// Exact stabilizer order: gcd of the weights on the nonvanishing
    /// coordinates.
    pub fn orbit_period(&self, z: &[Complex64]) -> Result<u32> {
        let live: Vec<u32> = z.iter().zip(&self.weights).filter(|(c, _)| c.norm() > 1e-9).map(|(_, &w)| w).collect();
        if live.is_empty() {
            return Err(Error::PointOffManifold("all coordinates vanish".into()));
        }
        Ok(gcd_all(&live))
    }

    /// Points on the coordinate axes, one per coordinate: `t·e_j` with
    /// `ρ(t e_j) = 0`.
    pub fn axis_points(&self) -> Vec<Vec<Complex64>> {
        (0..self.n())
            .filter_map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); self.n()];
                e[j] = Complex64::new(1.0, 0.0);
                let t = self.radial_root(&e).ok()?;
                e[j] = Complex64::new(t, 0.0);
                Some(e)
            })
            .collect()
    }

    /// Representatives of the exceptional orbits (period > 1).
    pub fn exceptional_points(&self) -> Vec<Vec<Complex64>> {
        self.axis_points().into_iter().filter(|p| self.orbit_period(p).map(|k| k > 1).unwrap_or(false)).collect()
    }
}

pub(crate) fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub(crate) fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the tangent space `u^⊥` of the unit sphere.
fn sphere_tangent_frame(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let mut basis: Vec<Vec<f64>> = vec![u.to_vec()];
    // Start from the coordinate vectors least aligned with u for stability.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()));
    for k in order {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-6 {
            v.iter_mut().for_each(|x| *x /= nv);
            basis.push(v);
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}
