//! Fixed quadrature rules.
//!
//! Node/weight generation is delegated to `gauss-quad`; this module adapts the
//! rules to the intervals and Gaussian scalings used across the crate.

use gauss_quad::{GaussHermite, GaussLegendre};

/// Gauss-Legendre rule mapped to `[a, b]`.
#[derive(Debug, Clone)]
pub struct Legendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Legendre {
    pub fn on_interval(n: usize, a: f64, b: f64) -> Self {
        let rule = GaussLegendre::new(n.max(2)).expect("legendre degree >= 2");
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut pairs: Vec<(f64, f64)> =
            rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect();
        pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
        Self { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Hermite rule for the weight `exp(-a x^2)` on the real line.
///
/// Nodes are `t / sqrt(a)` for the standard rule nodes `t`, and the weights
/// absorb the Gaussian, so `integrate(f)` approximates
/// `∫ f(x) exp(-a x²) dx`.
#[derive(Debug, Clone)]
pub struct ScaledHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ScaledHermite {
    pub fn new(n: usize, a: f64) -> Self {
        assert!(a > 0.0, "Gaussian rate must be positive");
        let rule = GaussHermite::new(n.max(2)).expect("hermite degree >= 2");
        let s = a.sqrt();
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().iter().map(|&(t, w)| (t / s, w / s)).collect();
        pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
        Self { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
    }

    /// Weight with the Gaussian factor divided out, so that summing
    /// `raw_weight * g(x)` approximates `∫ g(x) dx` for Gaussian-decaying `g`.
    pub fn raw_weight(&self, i: usize, a: f64) -> f64 {
        let x = self.nodes[i];
        self.weights[i] * (a * x * x).exp()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Periodic trapezoidal nodes on `[0, 2π)`.
pub fn periodic_nodes(n: usize) -> impl Iterator<Item = f64> {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(move |k| k as f64 * h)
}
