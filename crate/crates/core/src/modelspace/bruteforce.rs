//! Brute-force Szegő density of the model operator by a Rayleigh–Ritz
//! computation on polynomial-times-Gaussian forms.
//!
//! Ansatz elements are `w^α w̄^β G dw̄^J` with `G = exp(Σ c_j|w_j|²)`,
//! `c_j = 2λ_j` on negative directions and `0` otherwise, so every weighted
//! integral factors into one-dimensional moments
//! `μ_j(p, q) = ∫ w^p w̄^q e^{−2|λ_j||w|²} 2dx dy`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::HashMap;

use super::ModelParams;
use crate::error::{Error, Result};
use crate::numeric::quadrature::ScaledHermite;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteforceSpec {
    pub max_degree: usize,
    pub nodes: usize,
    pub null_threshold: f64,
    pub max_condition: f64,
}

impl Default for BruteforceSpec {
    fn default() -> Self {
        Self { max_degree: 8, nodes: 64, null_threshold: 1e-6, max_condition: 1e12 }
    }
}

#[derive(Debug, Clone)]
struct Term {
    coef: f64,
    alpha: Vec<u32>,
    beta: Vec<u32>,
}

type Form = HashMap<Vec<usize>, Vec<Term>>;

#[derive(Debug, Clone)]
struct Element {
    j: Vec<usize>,
    alpha: Vec<u32>,
    beta: Vec<u32>,
}

/// Table of `μ_j(p, q)` for `p, q ≤ max`, by tensor Gauss–Hermite.
struct Moments {
    table: Vec<Vec<Vec<f64>>>,
}

impl Moments {
    fn new(lambdas: &[f64], max: usize, nodes: usize) -> Self {
        let table = lambdas
            .iter()
            .map(|l| {
                let a = 2.0 * l.abs();
                let r = ScaledHermite::new(nodes, a);
                let mut t = vec![vec![0.0; max + 1]; max + 1];
                for (x, wx) in r.nodes.iter().zip(&r.weights) {
                    for (y, wy) in r.nodes.iter().zip(&r.weights) {
                        let w = num_complex::Complex64::new(*x, *y);
                        let pw: Vec<_> = (0..=max).map(|p| w.powu(p as u32)).collect();
                        let pc: Vec<_> = pw.iter().map(|c| c.conj()).collect();
                        for p in 0..=max {
                            for q in 0..=max {
                                t[p][q] += 2.0 * wx * wy * (pw[p] * pc[q]).re;
                            }
                        }
                    }
                }
                t
            })
            .collect();
        Self { table }
    }

    fn get(&self, j: usize, p: u32, q: u32) -> f64 {
        self.table[j][p as usize][q as usize]
    }
}

fn inner(m: &Moments, a: &[Term], b: &[Term]) -> f64 {
    let mut s = 0.0;
    for t in a {
        for u in b {
            let mut v = t.coef * u.coef;
            for j in 0..t.alpha.len() {
                v *= m.get(j, t.alpha[j] + u.beta[j], t.beta[j] + u.alpha[j]);
                if v == 0.0 {
                    break;
                }
            }
            s += v;
        }
    }
    s
}

fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    if n < q {
        return Vec::new();
    }
    let mut out = subsets(n - 1, q);
    for mut s in subsets(n - 1, q - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn exponents(d: usize, max: usize) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in exponents(d - 1, max - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn dbar(e: &Element, c: &[f64]) -> Form {
    let mut form = Form::new();
    for k in (0..e.alpha.len()).filter(|k| !e.j.contains(k)) {
        let sign = if e.j.iter().filter(|&&j| j < k).count() % 2 == 0 { 1.0 } else { -1.0 };
        let mut key = e.j.clone();
        key.push(k);
        key.sort_unstable();
        let terms = form.entry(key).or_default();
        if e.beta[k] > 0 {
            let mut beta = e.beta.clone();
            beta[k] -= 1;
            terms.push(Term { coef: sign * e.beta[k] as f64, alpha: e.alpha.clone(), beta });
        }
        if c[k] != 0.0 {
            let mut alpha = e.alpha.clone();
            alpha[k] += 1;
            terms.push(Term { coef: sign * c[k], alpha, beta: e.beta.clone() });
        }
    }
    form
}

fn dbar_star(e: &Element, c: &[f64], lambdas: &[f64]) -> Form {
    let mut form = Form::new();
    for (pos, &j) in e.j.iter().enumerate() {
        let sign = if pos % 2 == 0 { -1.0 } else { 1.0 };
        let key: Vec<usize> = e.j.iter().cloned().filter(|&x| x != j).collect();
        let terms = form.entry(key).or_default();
        if e.alpha[j] > 0 {
            let mut alpha = e.alpha.clone();
            alpha[j] -= 1;
            terms.push(Term { coef: sign * e.alpha[j] as f64, alpha, beta: e.beta.clone() });
        }
        let k = c[j] - 2.0 * lambdas[j];
        if k != 0.0 {
            let mut beta = e.beta.clone();
            beta[j] += 1;
            terms.push(Term { coef: sign * k, alpha: e.alpha.clone(), beta });
        }
    }
    form
}

fn form_inner(m: &Moments, a: &Form, b: &Form) -> f64 {
    a.iter().map(|(k, ta)| b.get(k).map_or(0.0, |tb| inner(m, ta, tb))).sum()
}

/// Sum of `|u_J(0)|²` over an orthonormal basis of the near-null space of
/// `‖∂̄u‖² + ‖∂̄*u‖²` on the ansatz space.
pub fn density_bruteforce(params: &ModelParams, spec: &BruteforceSpec) -> Result<f64> {
    if spec.max_degree > 12 {
        return Err(Error::InvalidParams(format!("max_degree {} exceeds 12", spec.max_degree)));
    }
    let d = params.lambdas.len();
    let lambdas = &params.lambdas;
    let c: Vec<f64> = lambdas.iter().map(|&l| if l < 0.0 { 2.0 * l } else { 0.0 }).collect();

    let mut elements = Vec::new();
    for j in subsets(d, params.q) {
        for ab in exponents(2 * d, spec.max_degree) {
            elements.push(Element { j: j.clone(), alpha: ab[..d].to_vec(), beta: ab[d..].to_vec() });
        }
    }
    let moments = Moments::new(lambdas, 2 * spec.max_degree + 2, spec.nodes);
    let plain: Vec<Form> = elements
        .iter()
        .map(|e| {
            let mut f = Form::new();
            f.insert(e.j.clone(), vec![Term { coef: 1.0, alpha: e.alpha.clone(), beta: e.beta.clone() }]);
            f
        })
        .collect();
    let d1: Vec<Form> = elements.iter().map(|e| dbar(e, &c)).collect();
    let d2: Vec<Form> = elements.iter().map(|e| dbar_star(e, &c, lambdas)).collect();

    let n = elements.len();
    let mut gram = DMatrix::<f64>::zeros(n, n);
    let mut quad = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let g = form_inner(&moments, &plain[a], &plain[b]);
            let q = form_inner(&moments, &d1[a], &d1[b]) + form_inner(&moments, &d2[a], &d2[b]);
            gram[(a, b)] = g;
            gram[(b, a)] = g;
            quad[(a, b)] = q;
            quad[(b, a)] = q;
        }
    }

    // canonical orthogonalization of the diagonally scaled Gram matrix
    let scale: Vec<f64> = (0..n).map(|i| 1.0 / gram[(i, i)].sqrt()).collect();
    let sd = DMatrix::from_fn(n, n, |i, j| gram[(i, j)] * scale[i] * scale[j]);
    let eig = sd.symmetric_eigen();
    let (lo, hi) = eig.eigenvalues.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if cond > spec.max_condition {
        return Err(Error::IllConditioned(cond));
    }
    let x = DMatrix::from_fn(n, n, |i, k| scale[i] * eig.eigenvectors[(i, k)] / eig.eigenvalues[k].sqrt());
    let reduced = x.transpose() * &quad * &x;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let red = reduced.symmetric_eigen();

    let origin: Vec<usize> =
        (0..n).filter(|&i| elements[i].alpha.iter().chain(&elements[i].beta).all(|&e| e == 0)).collect();
    let mut density = 0.0;
    for k in 0..n {
        if red.eigenvalues[k] < spec.null_threshold {
            let y: DVector<f64> = red.eigenvectors.column(k).into_owned();
            let coeffs = &x * y;
            density += origin.iter().map(|&i| coeffs[i] * coeffs[i]).sum::<f64>();
        }
    }
    Ok(density)
}
