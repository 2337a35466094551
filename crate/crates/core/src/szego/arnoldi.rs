//! Orthonormal bases of `H⁰_{b,m}` on weighted hypersurfaces with `n = 2`.
//!
//! Monomials of equal weighted degree need not be orthogonal when the metric
//! is only circle-invariant, and their Gram matrix becomes numerically
//! singular long before `m = 100`. Instead the basis is grown as a Krylov
//! sequence: starting from one extreme monomial, multiplication by
//! `r = z₁^{w₂}/z₂^{w₁}` steps through all monomials of degree `m`, and
//! Arnoldi with repeated Gram–Schmidt keeps the iterates orthonormal in the
//! discrete `L²` product. Values at a probe follow from the same recurrence.

use num_complex::Complex64;

use super::quadrature::OrbitQuadrature;
use crate::manifold::HypersurfaceModel;

/// Exponents `(a, b)` with `a·w₁ + b·w₂ = m`, ordered by decreasing `b`.
pub fn monomials(weights: &[u32], m: i64) -> Vec<(u32, u32)> {
    if m < 0 {
        return Vec::new();
    }
    let (w1, w2) = (weights[0] as i64, weights[1] as i64);
    (0..=m / w2)
        .rev()
        .filter_map(|b| {
            let rest = m - b * w2;
            (rest % w1 == 0).then(|| ((rest / w1) as u32, b as u32))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Seed with maximal `b`, multiply by `z₁^{w₂}/z₂^{w₁}`.
    Forward,
    /// Seed with maximal `a`, multiply by `z₂^{w₁}/z₁^{w₂}`.
    Reverse,
}

fn monomial(z: &[Complex64], (a, b): (u32, u32)) -> Complex64 {
    z[0].powu(a) * z[1].powu(b)
}

/// Values at each probe of an orthonormal basis of degree-`m` CR functions.
pub fn orthonormal_values(
    model: &HypersurfaceModel,
    quad: &OrbitQuadrature,
    m: i64,
    probes: &[Vec<Complex64>],
) -> Vec<Vec<Complex64>> {
    let mons = monomials(model.weights(), m);
    if mons.is_empty() {
        return vec![Vec::new(); probes.len()];
    }
    let (w1, w2) = (model.weights()[0], model.weights()[1]);
    let pick = |z: &[Complex64]| {
        if z[1].powu(w1).norm() >= z[0].powu(w2).norm() {
            Direction::Forward
        } else {
            Direction::Reverse
        }
    };
    let mut out = vec![Vec::new(); probes.len()];
    for dir in [Direction::Forward, Direction::Reverse] {
        let idx: Vec<usize> = (0..probes.len()).filter(|&i| pick(&probes[i]) == dir).collect();
        if idx.is_empty() {
            continue;
        }
        let sub: Vec<Vec<Complex64>> = idx.iter().map(|&i| probes[i].clone()).collect();
        let vals = run(quad, &mons, (w1, w2), dir, &sub);
        for (k, &i) in idx.iter().enumerate() {
            out[i] = vals[k].clone();
        }
    }
    out
}

fn run(
    quad: &OrbitQuadrature,
    mons: &[(u32, u32)],
    (w1, w2): (u32, u32),
    dir: Direction,
    probes: &[Vec<Complex64>],
) -> Vec<Vec<Complex64>> {
    let mult = |z: &[Complex64]| match dir {
        Direction::Forward => z[0].powu(w2) / z[1].powu(w1),
        Direction::Reverse => z[1].powu(w1) / z[0].powu(w2),
    };
    let seed = match dir {
        Direction::Forward => mons[0],
        Direction::Reverse => *mons.last().unwrap(),
    };
    let sqrt_w: Vec<f64> = quad.weights.iter().map(|w| w.sqrt()).collect();
    let r_nodes: Vec<Complex64> = quad.points.iter().map(|z| mult(z)).collect();
    let r_probe: Vec<Complex64> = probes.iter().map(|z| mult(z)).collect();

    let dim = mons.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let mut vals: Vec<Vec<Complex64>> = vec![Vec::with_capacity(dim); probes.len()];

    let v0: Vec<Complex64> = quad.points.iter().zip(&sqrt_w).map(|(z, s)| monomial(z, seed) * s).collect();
    let n0 = norm(&v0);
    basis.push(v0.iter().map(|c| c / n0).collect());
    for (p, z) in vals.iter_mut().zip(probes) {
        p.push(monomial(z, seed) / n0);
    }
    for k in 0..dim - 1 {
        let mut v: Vec<Complex64> = basis[k].iter().zip(&r_nodes).map(|(q, r)| q * r).collect();
        let mut h = vec![Complex64::new(0.0, 0.0); k + 1];
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c: Complex64 = v.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                h[i] += c;
            }
        }
        let hn = norm(&v);
        basis.push(v.iter().map(|c| c / hn).collect());
        for (p, r) in vals.iter_mut().zip(&r_probe) {
            let proj: Complex64 = h.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
            let next = (r * p[k] - proj) / hn;
            p.push(next);
        }
    }
    vals
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_weighted_monomials() {
        assert_eq!(monomials(&[1, 2], 5), vec![(1, 2), (3, 1), (5, 0)]);
        assert_eq!(monomials(&[1, 1], 2).len(), 3);
        assert!(monomials(&[1, 2], -1).is_empty());
    }
}
