use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{Chart, CircleBundleModel, CrModel, DefiningFunction, HypersurfaceModel, Point};
use crate::error::{Error, Result};
use crate::numeric::fd::{second_wirtinger, wirtinger};
use crate::numeric::root::first_sign_change;

type ChartFn = Arc<dyn Fn(&[Complex64]) -> f64 + Send + Sync>;

const FD_STEP: f64 = 1e-3;

/// Canonical coordinates `(z, θ)` around an anchor in which `T = ∂/∂θ` and
/// `T^{1,0}` is spanned by `∂/∂z_j + i(∂φ/∂z_j)∂/∂θ`, normalized so that
/// `φ(0) = 0`, `dφ(0) = 0` and the complex Hessian of `φ` at 0 is
/// `diag(λ)` in a frame orthonormal at the anchor.
#[derive(Clone)]
pub struct BrtChart {
    pub anchor: Option<Point>,
    pub epsilon: f64,
    pub delta: f64,
    pub lambdas: Vec<f64>,
    phi: ChartFn,
    density: ChartFn,
}

impl fmt::Debug for BrtChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BrtChart")
            .field("anchor", &self.anchor)
            .field("epsilon", &self.epsilon)
            .field("delta", &self.delta)
            .field("lambdas", &self.lambdas)
            .finish_non_exhaustive()
    }
}

impl BrtChart {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn phi(&self, z: &[Complex64]) -> f64 {
        (self.phi)(z)
    }

    /// Volume density `λ(z)`: `dv_X = λ(z)·2^{n−1}dx dθ`, with `λ(0) = 1`.
    pub fn density(&self, z: &[Complex64]) -> f64 {
        (self.density)(z)
    }

    /// Model chart `φ = Σ λ_j|z_j|²` with unit density.
    pub fn quadratic(lambdas: Vec<f64>) -> Self {
        let l = lambdas.clone();
        BrtChart {
            anchor: None,
            epsilon: f64::INFINITY,
            delta: PI,
            lambdas,
            phi: Arc::new(move |z| z.iter().zip(&l).map(|(c, lam)| lam * c.norm_sqr()).sum()),
            density: Arc::new(|_| 1.0),
        }
    }

    pub fn at(model: &CrModel, anchor: &Point) -> Result<Self> {
        model.check_on_manifold(anchor)?;
        match (model, anchor) {
            (CrModel::Bundle(b), Point::Bundle { chart, z, .. }) => {
                if z.norm() > 1e-12 {
                    return Err(Error::UndesignatedAnchor(format!(
                        "bundle charts are centred over the poles; got z = {z}"
                    )));
                }
                Ok(Self::bundle_pole(*b, *chart, anchor.clone()))
            }
            (CrModel::Hypersurface(h), Point::Ambient(z)) => Self::axis_chart(h, z, anchor),
            _ => Err(Error::PointOffManifold("point kind does not match model".into())),
        }
    }

    fn bundle_pole(b: CircleBundleModel, chart: Chart, anchor: Point) -> Self {
        let origin = Complex64::new(0.0, 0.0);
        let phi0 = b.phi(chart, origin);
        BrtChart {
            anchor: Some(anchor),
            epsilon: f64::INFINITY,
            delta: PI,
            lambdas: vec![b.levi_eigenvalue(chart, origin)],
            phi: Arc::new(move |z| b.phi(chart, z[0]) - phi0),
            density: Arc::new(|z| CircleBundleModel::metric(z[0])),
        }
    }

    /// Chart built on the weighted slice through an axis point.
    ///
    /// For an anchor `a·e_j`, the slice is `σ(ζ) = t(ζ)^w ∘ p(ζ)` with
    /// `p_j = 1` and `p_i = ζ_i` otherwise, and `t(ζ) > 0` fixed by `ρ = 0`.
    /// Writing points as `e^{i(θ+iφ)}∘p(ζ)` gives the raw weight
    /// `φ = −log t`; a linear change of `ζ` and removal of pluriharmonic
    /// terms then bring it to normal form.
    fn axis_chart(h: &HypersurfaceModel, z: &[Complex64], anchor: &Point) -> Result<Self> {
        let n = h.n();
        let live: Vec<usize> = (0..n).filter(|&k| z[k].norm() > 1e-9).collect();
        let j = match live.as_slice() {
            [j] => *j,
            _ if h.defining_function() == DefiningFunction::Round && h.weights().iter().all(|&w| w == 1) => {
                // unitary rotations are CR automorphisms commuting with the action
                0
            }
            _ => return Err(Error::UndesignatedAnchor("hypersurface charts are available at axis points only".into())),
        };
        let others: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let model = h.clone();
        let w: Vec<f64> = h.weights().iter().map(|&w| w as f64).collect();

        let slice = {
            let model = model.clone();
            let w = w.clone();
            let others = others.clone();
            move |zeta: &[Complex64]| -> (f64, Vec<Complex64>) {
                let p = |t: f64| -> Vec<Complex64> {
                    let mut v = vec![Complex64::new(0.0, 0.0); n];
                    v[j] = Complex64::new(t.powf(w[j]), 0.0);
                    for (a, &k) in others.iter().enumerate() {
                        v[k] = zeta[a] * t.powf(w[k]);
                    }
                    v
                };
                let t = first_sign_change(|t| model.rho(&p(t)), 0.0, 16.0, 0.05)
                    .expect("weighted rays leave the star-shaped models");
                (t, p(t))
            }
        };
        let slice = Arc::new(slice);
        let phi_raw = {
            let slice = slice.clone();
            move |zeta: &[Complex64]| -slice(zeta).0.ln()
        };
        let phi_raw = Arc::new(phi_raw);

        // Hermitian metric of the frame Z_a = ∂_{ζ_a} + i φ_a ∂_θ at ζ.
        let frame_metric = {
            let phi_raw = phi_raw.clone();
            let slice = slice.clone();
            let model = model.clone();
            let others = others.clone();
            let w = w.clone();
            move |zeta: &[Complex64]| -> DMatrix<Complex64> {
                let d = others.len();
                let (t, sigma) = slice(zeta);
                let f = |x: &[Complex64]| Complex64::new(phi_raw(x), 0.0);
                let dphi: Vec<Complex64> = (0..d).map(|a| wirtinger(&f, zeta, a, FD_STEP).0).collect();
                let s = model.metric_scale(&sigma);
                let comp = |a: usize, k: usize| -> Complex64 {
                    let base = match others.iter().position(|&o| o == k) {
                        Some(b) if b == a => Complex64::new(t.powf(w[k]), 0.0),
                        _ => Complex64::new(0.0, 0.0),
                    };
                    base - 2.0 * w[k] * dphi[a] * sigma[k]
                };
                DMatrix::from_fn(d, d, |a, b| {
                    let sum: Complex64 = (0..n).map(|k| comp(a, k) * comp(b, k).conj()).sum();
                    0.5 * s * sum
                })
            }
        };

        let d = n - 1;
        let origin = vec![Complex64::new(0.0, 0.0); d];
        let hmat = frame_metric(&origin);
        let (_, herm) = second_wirtinger(&|x: &[Complex64]| phi_raw(x), &origin, FD_STEP);
        let hess = DMatrix::from_fn(d, d, |a, b| herm[a][b]);

        // B* h B = I and B* H B = diag(λ); the coordinate change is ζ = B̄ z.
        let eig_h = hmat.clone().symmetric_eigen();
        let inv_sqrt = &eig_h.eigenvectors
            * DMatrix::from_diagonal(&eig_h.eigenvalues.map(|v| Complex64::new(1.0 / v.sqrt(), 0.0)))
            * eig_h.eigenvectors.adjoint();
        let reduced = inv_sqrt.adjoint() * &hess * &inv_sqrt;
        let reduced = (&reduced + reduced.adjoint()).scale(0.5);
        let eig = reduced.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let v = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
        let lambdas: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let a_mat = (&inv_sqrt * v).map(|c| c.conj());

        let to_zeta = {
            let a_mat = a_mat.clone();
            move |z: &[Complex64]| -> Vec<Complex64> {
                (0..d).map(|r| (0..d).map(|c| a_mat[(r, c)] * z[c]).sum()).collect()
            }
        };
        let to_zeta = Arc::new(to_zeta);
        let phi_lin = {
            let phi_raw = phi_raw.clone();
            let to_zeta = to_zeta.clone();
            move |z: &[Complex64]| phi_raw(&to_zeta(z))
        };
        let phi0 = phi_lin(&origin);
        let fc = |x: &[Complex64]| Complex64::new(phi_lin(x), 0.0);
        let b: Vec<Complex64> = (0..d).map(|k| wirtinger(&fc, &origin, k, FD_STEP).0).collect();
        let (hol, _) = second_wirtinger(&phi_lin, &origin, FD_STEP);
        let phi = move |z: &[Complex64]| {
            let lin: Complex64 = b.iter().zip(z).map(|(x, y)| x * y).sum();
            let mut quad = Complex64::new(0.0, 0.0);
            for k in 0..d {
                for l in 0..d {
                    quad += hol[k][l] * z[k] * z[l];
                }
            }
            phi_lin(z) - phi0 - 2.0 * lin.re - quad.re
        };

        let density = {
            let to_zeta = to_zeta.clone();
            move |z: &[Complex64]| {
                let hz = frame_metric(&to_zeta(z));
                let m = a_mat.transpose() * hz * a_mat.map(|c| c.conj());
                m.determinant().re
            }
        };

        Ok(BrtChart {
            anchor: Some(anchor.clone()),
            epsilon: f64::INFINITY,
            delta: PI / w[j],
            lambdas,
            phi: Arc::new(phi),
            density: Arc::new(density),
        })
    }
}
