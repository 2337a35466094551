use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hypersurface::to_real;
use super::{CircleBundleModel, CrModel, Point};
use crate::error::{Error, Result};

/// Contact data at a point, expressed in the real coordinates of the
/// ambient space (hypersurfaces) or of the bundle chart `(x, y, θ)`.
#[derive(Debug, Clone)]
pub struct ContactFrame {
    pub point: Point,
    /// Real coordinates of the point.
    pub coords: Vec<f64>,
    /// Action generator.
    pub t: Vec<f64>,
    /// Orthonormal basis of `T^{1,0}_x X` as complexified real vectors.
    pub basis: Vec<Vec<Complex64>>,
    /// `ω₀` at the point, with `⟨ω₀, T⟩ = −1`.
    pub omega0: Vec<f64>,
}

impl ContactFrame {
    pub fn at(model: &CrModel, p: &Point) -> Result<Self> {
        model.check_on_manifold(p)?;
        let frame = match (model, p) {
            (CrModel::Hypersurface(h), Point::Ambient(z)) => {
                let n = h.n();
                let g = h.d_rho(z);
                let scale = (2.0 / h.metric_scale(z)).sqrt();
                // T^{1,0}X = {U : Σ ρ_j U_j = 0}, the Hermitian complement of ḡ
                let normal: Vec<Complex64> = g.iter().map(|c| c.conj()).collect();
                let basis = hermitian_complement(&normal, n)
                    .into_iter()
                    .map(|u| {
                        u.iter()
                            .flat_map(|c| {
                                let c = c * scale;
                                [0.5 * c, Complex64::new(0.0, -0.5) * c]
                            })
                            .collect()
                    })
                    .collect();
                let coords = to_real(z);
                ContactFrame {
                    point: p.clone(),
                    t: to_real(&h.generator(z)),
                    omega0: h.omega0_real(&coords),
                    coords,
                    basis,
                }
            }
            (CrModel::Bundle(b), Point::Bundle { chart, z, theta }) => {
                let coords = vec![z.re, z.im, *theta];
                let pz = b.phi_z(*chart, *z);
                let norm = CircleBundleModel::metric(*z).sqrt();
                let zvec =
                    vec![Complex64::new(0.5, 0.0) / norm, Complex64::new(0.0, -0.5) / norm, Complex64::i() * pz / norm];
                ContactFrame {
                    point: p.clone(),
                    t: vec![0.0, 0.0, 1.0],
                    omega0: b.omega0_real(*chart, &coords),
                    coords,
                    basis: vec![zvec],
                }
            }
            _ => return Err(Error::PointOffManifold("point kind does not match model".into())),
        };
        let sigma = frame.transversality();
        if sigma < 1e-8 {
            return Err(Error::DegenerateFrame(sigma));
        }
        Ok(frame)
    }

    /// Smallest singular value of `[T, Re U₁, Im U₁, …]`.
    pub fn transversality(&self) -> f64 {
        let mut cols: Vec<Vec<f64>> = vec![self.t.clone()];
        for u in &self.basis {
            cols.push(u.iter().map(|c| c.re).collect());
            cols.push(u.iter().map(|c| c.im).collect());
        }
        let m = DMatrix::from_fn(self.t.len(), cols.len(), |i, j| cols[j][i]);
        m.singular_values().min()
    }

    /// Pairing of `ω₀` with a complexified vector.
    pub fn omega0_on(&self, v: &[Complex64]) -> Complex64 {
        v.iter().zip(&self.omega0).map(|(a, b)| a * b).sum()
    }

    pub fn omega0_on_t(&self) -> f64 {
        self.t.iter().zip(&self.omega0).map(|(a, b)| a * b).sum()
    }
}

/// Ambient extension of `ω₀` around a point, in the frame's coordinates.
pub(crate) fn omega0_field(model: &CrModel, p: &Point, x: &[f64]) -> Vec<f64> {
    match (model, p) {
        (CrModel::Hypersurface(h), _) => h.omega0_real(x),
        (CrModel::Bundle(b), Point::Bundle { chart, .. }) => b.omega0_real(*chart, x),
        (CrModel::Bundle(_), Point::Ambient(_)) => unreachable!("checked by ContactFrame::at"),
    }
}

/// Orthonormal basis (standard Hermitian product) of the complement of `v`.
fn hermitian_complement(v: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<Complex64>> = vec![v.iter().map(|c| c / vn).collect()];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()));
    for k in order {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let c: Complex64 = e.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let en = e.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if en > 1e-6 {
            basis.push(e.iter().map(|c| c / en).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}
