use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::manifold::HypersurfaceModel;
use crate::numeric::quadrature::{periodic_nodes, Legendre};

/// Orbit-reduced product rule for circle-invariant integrands on a
/// three-dimensional hypersurface.
///
/// The unit sphere is parametrized as `(cos s·e^{iα}, sin s·e^{iβ})` and
/// pushed radially onto X. For an integrand invariant under the action, the
/// angle of the unit-weight coordinate can be rotated to zero, leaving a
/// Gauss–Legendre rule in `s` and a trapezoidal rule in the remaining angle.
#[derive(Debug, Clone)]
pub struct OrbitQuadrature {
    pub points: Vec<Vec<Complex64>>,
    pub weights: Vec<f64>,
}

impl OrbitQuadrature {
    pub fn new(model: &HypersurfaceModel, n_s: usize, n_gamma: usize) -> Result<Self> {
        if model.n() != 2 {
            return Err(Error::Unsupported(format!("orbit-reduced quadrature needs n = 2, got n = {}", model.n())));
        }
        let slot = model
            .weights()
            .iter()
            .position(|&w| w == 1)
            .ok_or_else(|| Error::Unsupported("orbit-reduced quadrature needs a coordinate of weight 1".into()))?;
        let rule = Legendre::on_interval(n_s, 0.0, FRAC_PI_2);
        let gammas: Vec<f64> = periodic_nodes(n_gamma).collect();
        let dg = TAU / n_gamma as f64;
        let mut points = Vec::with_capacity(n_s * n_gamma);
        let mut weights = Vec::with_capacity(n_s * n_gamma);
        for (&s, &ws) in rule.nodes.iter().zip(&rule.weights) {
            let (sn, cs) = s.sin_cos();
            for &g in &gammas {
                let mut u = vec![Complex64::new(0.0, 0.0); 2];
                u[slot] = Complex64::new(cs, 0.0);
                u[1 - slot] = Complex64::from_polar(sn, g);
                let t = model.radial_root(&u)?;
                let jac = model.radial_jacobian(&u, t);
                points.push(u.iter().map(|c| c * t).collect());
                weights.push(TAU * ws * dg * sn * cs * jac);
            }
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: Fn(&[Complex64]) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}
