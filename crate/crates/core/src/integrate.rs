//! Monte Carlo estimates of `∫_{X(q)} |det ℒ| dv_X` and signed sums.
//!
//! Samples are drawn from a fixed number of ChaCha substreams derived from
//! one seed. Each substream is reduced independently and the partial
//! accumulators are merged in substream order, so the result depends only
//! on `(seed, substreams)` and not on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levi::{classify, levi_matrix_in_frame, morse_integrand, spectrum_of, Stratum, DEGENERACY_TOL};
use crate::manifold::CrModel;
use crate::numeric::stats::MomentAccumulator;

pub const DEFAULT_SUBSTREAMS: u64 = 64;
/// Rejection fraction above which an estimate is flagged inconclusive.
pub const MAX_REJECTION_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub rejected: u64,
    pub inconclusive: bool,
}

/// Per-stratum sample moments from one shared stream.
#[derive(Debug, Clone)]
pub struct StrataSamples {
    pub acc: MomentAccumulator,
    pub seed: u64,
    pub rejected: u64,
    pub degenerate: u64,
}

impl StrataSamples {
    pub fn n_strata(&self) -> usize {
        self.acc.dim()
    }

    pub fn inconclusive(&self) -> bool {
        let total = self.acc.count + self.rejected;
        total == 0 || self.rejected as f64 > MAX_REJECTION_RATE * total as f64
    }

    /// Estimate of `Σ_q s_q ∫_{X(q)} |det ℒ| dv_X`.
    pub fn combination(&self, s: &[f64]) -> McEstimate {
        let (value, stderr) = self.acc.combination(s);
        McEstimate {
            value,
            stderr,
            n_samples: self.acc.count,
            seed: self.seed,
            rejected: self.rejected,
            inconclusive: self.inconclusive(),
        }
    }

    pub fn stratum(&self, q: usize) -> McEstimate {
        let mut s = vec![0.0; self.n_strata()];
        s[q] = 1.0;
        self.combination(&s)
    }

    /// Alternating partial sums `Σ_{j≤q} (−1)^{q−j} ∫_{X(j)}` for `q ≤ q_max`.
    pub fn signed_sums(&self, q_max: usize) -> Vec<McEstimate> {
        (0..=q_max)
            .map(|q| {
                let s: Vec<f64> = (0..self.n_strata())
                    .map(|j| {
                        if j <= q {
                            if (q - j) % 2 == 0 {
                                1.0
                            } else {
                                -1.0
                            }
                        } else {
                            0.0
                        }
                    })
                    .collect();
                self.combination(&s)
            })
            .collect()
    }
}

/// Integrand vector `(1_{X(q)}|det ℒ|·weight)_q` over one shared stream.
pub fn sample_strata(model: &CrModel, n: u64, seed: u64, substreams: u64) -> Result<StrataSamples> {
    sample_with(model, n, seed, substreams, |_| 1.0)
}

/// As [`sample_strata`] with an extra weight `f(point)` multiplying every
/// stratum; `f ≡ 1` gives the Morse integrals, and the volume is obtained
/// through [`volume`].
pub fn sample_with<F>(model: &CrModel, n: u64, seed: u64, substreams: u64, f: F) -> Result<StrataSamples>
where
    F: Fn(&crate::manifold::Point) -> f64 + Sync,
{
    if substreams == 0 {
        return Err(Error::InvalidParams("substream count must be positive".into()));
    }
    let strata = model.n();
    let parts: Vec<Result<(MomentAccumulator, u64, u64)>> = (0..substreams)
        .into_par_iter()
        .map(|k| {
            let count = n / substreams + u64::from(k < n % substreams);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut acc = MomentAccumulator::new(strata);
            let mut rejected = 0;
            let mut degenerate = 0;
            let mut row = vec![0.0; strata];
            for _ in 0..count {
                let (p, w, rej) = model.sample_point(&mut rng);
                rejected += rej;
                let frame = model.frame(&p)?;
                let spec = spectrum_of(&levi_matrix_in_frame(model, &frame));
                row.iter_mut().for_each(|v| *v = 0.0);
                match classify(&spec, DEGENERACY_TOL) {
                    Stratum::Signature(q) => row[q] = w * morse_integrand(&spec) * f(&p),
                    Stratum::Degenerate => degenerate += 1,
                }
                acc.push(&row);
            }
            Ok((acc, rejected, degenerate))
        })
        .collect();
    let mut total = StrataSamples { acc: MomentAccumulator::new(strata), seed, rejected: 0, degenerate: 0 };
    for part in parts {
        let (acc, rej, deg) = part?;
        total.acc.merge(&acc);
        total.rejected += rej;
        total.degenerate += deg;
    }
    Ok(total)
}

pub fn integrate_stratum(model: &CrModel, q: usize, n: u64, seed: u64) -> Result<McEstimate> {
    if q >= model.n() {
        return Err(Error::InvalidParams(format!("q = {q} exceeds n − 1 = {}", model.n() - 1)));
    }
    Ok(sample_strata(model, n, seed, DEFAULT_SUBSTREAMS)?.stratum(q))
}

pub fn signed_sums(model: &CrModel, q_max: usize, n: u64, seed: u64) -> Result<Vec<McEstimate>> {
    if q_max >= model.n() {
        return Err(Error::InvalidParams(format!("q_max = {q_max} exceeds n − 1 = {}", model.n() - 1)));
    }
    Ok(sample_strata(model, n, seed, DEFAULT_SUBSTREAMS)?.signed_sums(q_max))
}

/// Monte Carlo volume of X.
pub fn volume(model: &CrModel, n: u64, seed: u64) -> McEstimate {
    let substreams = DEFAULT_SUBSTREAMS;
    let parts: Vec<(MomentAccumulator, u64)> = (0..substreams)
        .into_par_iter()
        .map(|k| {
            let count = n / substreams + u64::from(k < n % substreams);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut acc = MomentAccumulator::new(1);
            let mut rejected = 0;
            for _ in 0..count {
                let (_, w, rej) = model.sample_point(&mut rng);
                rejected += rej;
                acc.push(&[w]);
            }
            (acc, rejected)
        })
        .collect();
    let mut total = StrataSamples { acc: MomentAccumulator::new(1), seed, rejected: 0, degenerate: 0 };
    for (acc, rej) in parts {
        total.acc.merge(&acc);
        total.rejected += rej;
    }
    total.stratum(0)
}
