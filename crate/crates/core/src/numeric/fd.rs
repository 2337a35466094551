//! Central finite differences on five-point stencils (fourth-order accurate).

use num_complex::Complex64;

const C1: [f64; 4] = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0];
const OFFS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

/// d/dt f(x + t e) at t = 0.
pub fn directional<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], dir: usize, h: f64) -> f64 {
    let mut y = x.to_vec();
    let mut acc = 0.0;
    for (c, o) in C1.iter().zip(OFFS) {
        y[dir] = x[dir] + o * h;
        acc += c * f(&y);
    }
    acc / h
}

/// Real gradient of a scalar function.
pub fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len()).map(|k| directional(f, x, k, h)).collect()
}

/// Jacobian `J[i][k] = ∂ f_i / ∂ x_k` of a vector field.
pub fn jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: &F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let dim_out = f(x).len();
    let mut jac = vec![vec![0.0; x.len()]; dim_out];
    let mut y = x.to_vec();
    for k in 0..x.len() {
        let mut acc = vec![0.0; dim_out];
        for (c, o) in C1.iter().zip(OFFS) {
            y[k] = x[k] + o * h;
            for (a, v) in acc.iter_mut().zip(f(&y)) {
                *a += c * v;
            }
        }
        y[k] = x[k];
        for i in 0..dim_out {
            jac[i][k] = acc[i] / h;
        }
    }
    jac
}

/// Wirtinger derivatives `(∂_{z_k} f, ∂_{z̄_k} f)` of a real or complex
/// valued function of complex variables.
pub fn wirtinger<F: Fn(&[Complex64]) -> Complex64>(f: &F, z: &[Complex64], k: usize, h: f64) -> (Complex64, Complex64) {
    let mut w = z.to_vec();
    let mut dx = Complex64::new(0.0, 0.0);
    let mut dy = Complex64::new(0.0, 0.0);
    for (c, o) in C1.iter().zip(OFFS) {
        w[k] = z[k] + Complex64::new(o * h, 0.0);
        dx += c * f(&w);
        w[k] = z[k] + Complex64::new(0.0, o * h);
        dy += c * f(&w);
    }
    dx /= h;
    dy /= h;
    let i = Complex64::i();
    (0.5 * (dx - i * dy), 0.5 * (dx + i * dy))
}

/// Mixed second Wirtinger derivatives of a real function at `z`:
/// returns `(hol, herm)` with `hol[k][l] = ∂_k ∂_l f` and
/// `herm[k][l] = ∂_k ∂̄_l f`.
pub fn second_wirtinger<F: Fn(&[Complex64]) -> f64>(
    f: &F,
    z: &[Complex64],
    h: f64,
) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n = z.len();
    let fc = |w: &[Complex64]| Complex64::new(f(w), 0.0);
    let first_z = |w: &[Complex64], l: usize| wirtinger(&fc, w, l, h);
    let mut hol = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut herm = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for l in 0..n {
        let dz_l = |w: &[Complex64]| first_z(w, l).0;
        let dzb_l = |w: &[Complex64]| first_z(w, l).1;
        for k in 0..n {
            hol[k][l] = wirtinger(&dz_l, z, k, h).0;
            herm[k][l] = wirtinger(&dzb_l, z, k, h).0;
        }
    }
    (hol, herm)
}
