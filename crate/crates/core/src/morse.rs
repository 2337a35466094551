//! Verdicts for the Morse inequalities, asymptotic Riemann–Roch and the
//! Grauert–Riemenschneider type criteria.
//!
//! Leading coefficients of dimension sequences are obtained by regression
//! over the upper half of the `m` range; each comparison with a curvature
//! integral carries a budget of three Monte Carlo standard errors plus the
//! regression standard error plus a relative floor of `1e-9` (exact
//! comparisons such as `0 ≤ 0` would otherwise depend on rounding).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::f64::consts::PI;

use crate::cohomology::{dims_table, CohomologyTable};
use crate::error::{Error, Result};
use crate::integrate::{sample_strata, McEstimate, StrataSamples, DEFAULT_SUBSTREAMS};
use crate::manifold::CrModel;

pub const NUMERICAL_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub c: f64,
    /// Standard error of the leading coefficient.
    pub residual: f64,
    pub points_used: usize,
}

/// Least-squares fit `dim ≈ c·|m|^{n−1} + lower order` over the half of the
/// data with the largest `|m|`.
pub fn fit_leading(points: &[(i64, f64)], n: usize) -> Result<Fit> {
    if points.len() < 8 {
        return Err(Error::Fit(format!("need at least 8 points, got {}", points.len())));
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|(m, _)| m.unsigned_abs());
    let top = &pts[pts.len() / 2..];
    let p = n; // columns x^{n−1}, …, x^0
    let xmax = top.iter().map(|(m, _)| m.unsigned_abs()).max().unwrap_or(1).max(1) as f64;
    let design =
        DMatrix::from_fn(top.len(), p, |i, j| (top[i].0.unsigned_abs() as f64 / xmax).powi((p - 1 - j) as i32));
    let y = DVector::from_iterator(top.len(), top.iter().map(|(_, d)| *d));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * smax {
        return Err(Error::Fit("rank-deficient design".into()));
    }
    let beta = svd.solve(&y, 1e-14).map_err(|e| Error::Fit(e.to_string()))?;
    let resid = &y - &design * &beta;
    let dof = top.len().saturating_sub(p);
    let rss = resid.norm_squared();
    let cov_scale = if dof > 0 { rss / dof as f64 } else { 0.0 };
    let gram_inv =
        (design.transpose() * &design).try_inverse().ok_or_else(|| Error::Fit("singular normal equations".into()))?;
    let unscale = xmax.powi(p as i32 - 1);
    Ok(Fit {
        c: beta[0] / unscale,
        residual: (cov_scale * gram_inv[(0, 0)]).max(0.0).sqrt() / unscale,
        points_used: top.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub relation: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub budget: f64,
    /// Margin by which the relation holds; negative when it fails.
    pub slack: f64,
    pub status: Status,
    pub m_range: (i64, i64),
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub label: String,
    pub fit: Fit,
    pub m_range: (i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MorseConfig {
    pub m_min: i64,
    pub m_max: i64,
    pub samples: u64,
    pub seed: u64,
    pub substreams: u64,
}

impl MorseConfig {
    pub fn new(m_max: i64, samples: u64, seed: u64) -> Self {
        Self { m_min: 1, m_max, samples, seed, substreams: DEFAULT_SUBSTREAMS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseReport {
    pub model: String,
    #[serde(serialize_with = "crate::report::pairs_as_map")]
    pub descriptor: Vec<(String, String)>,
    pub config: MorseConfig,
    pub checks: Vec<Check>,
    /// `∫_{X(q)} |det ℒ| dv_X` for `q = 0..n−1`.
    pub integrals: Vec<McEstimate>,
    pub fits: Vec<FitRecord>,
    pub dims: CohomologyTable,
}

impl MorseReport {
    /// 1 if any check fails, else 2 if any is inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn fit(&self, label: &str) -> Option<&Fit> {
        self.fits.iter().find(|f| f.label == label).map(|f| &f.fit)
    }
}

struct Ctx<'a> {
    samples: &'a StrataSamples,
    norm: f64,
    n_samples: u64,
    inconclusive: bool,
}

impl Ctx<'_> {
    /// Normalized curvature combination `(1/2πⁿ) Σ s_q ∫_{X(q)}` and its
    /// standard error.
    fn integral(&self, s: &[f64]) -> (f64, f64) {
        let e = self.samples.combination(s);
        (e.value / self.norm, e.stderr / self.norm)
    }

    fn unit(&self, q: usize) -> Vec<f64> {
        let mut s = vec![0.0; self.samples.n_strata()];
        s[q] = 1.0;
        s
    }

    #[allow(clippy::too_many_arguments)]
    fn compare(
        &self,
        name: String,
        anchor: &'static str,
        relation: &'static str,
        lhs: f64,
        rhs: f64,
        sigma: f64,
        fit_res: f64,
        m_range: (i64, i64),
    ) -> Check {
        let budget = 3.0 * sigma + fit_res + NUMERICAL_FLOOR * rhs.abs().max(1.0);
        let slack = match relation {
            "<=" => rhs + budget - lhs,
            ">=" => lhs - (rhs - budget),
            _ => budget - (lhs - rhs).abs(),
        };
        let status = if self.inconclusive {
            Status::Inconclusive
        } else if slack >= 0.0 {
            Status::Pass
        } else {
            Status::Fail
        };
        Check { name, anchor, relation, lhs, rhs, budget, slack, status, m_range, samples: self.n_samples }
    }
}

const WEAK: &str = "weak Morse inequalities";
const STRONG: &str = "strong Morse inequalities";
const RR: &str = "asymptotic Riemann-Roch";
const GR: &str = "Grauert-Riemenschneider criterion";
const LEQ1: &str = "CR functions from the integral over X(<=1)";
const NEG: &str = "Morse inequalities for m -> -infinity";

fn series(table: &CohomologyTable, q: usize, lo: i64, hi: i64) -> Vec<(i64, f64)> {
    table.series(q).into_iter().filter(|(m, _)| *m >= lo && *m <= hi).map(|(m, d)| (m, d as f64)).collect()
}

fn alternating(table: &CohomologyTable, q: usize, lo: i64, hi: i64) -> Vec<(i64, f64)> {
    (lo..=hi)
        .filter_map(|m| {
            let mut acc = 0.0;
            for j in 0..=q {
                let sign = if (q - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                acc += sign * table.get(j, m)? as f64;
            }
            Some((m, acc))
        })
        .collect()
}

pub fn build_report(model: &CrModel, cfg: &MorseConfig) -> Result<MorseReport> {
    if cfg.m_min < 0 || cfg.m_max - cfg.m_min + 1 < 8 {
        return Err(Error::InvalidParams(format!(
            "need 0 <= m_min and at least 8 values in m_min..=m_max, got {}..={}",
            cfg.m_min, cfg.m_max
        )));
    }
    let n = model.n();
    let samples = sample_strata(model, cfg.samples, cfg.seed, cfg.substreams)?;
    let ctx = Ctx {
        samples: &samples,
        norm: 2.0 * PI.powi(n as i32),
        n_samples: cfg.samples,
        inconclusive: samples.inconclusive(),
    };
    let (lo, hi) = (cfg.m_min, cfg.m_max);
    let pos = (lo, hi);
    let neg = (-hi, -lo);
    let max_q = match model {
        CrModel::Hypersurface(_) => 0,
        CrModel::Bundle(_) => 1,
    };
    let dims = dims_table(model, -hi..=hi, 0..=max_q);
    let integrals: Vec<McEstimate> = (0..n).map(|q| samples.stratum(q)).collect();
    let mut fits = Vec::new();
    let mut checks = Vec::new();

    // positive m: weak and strong inequalities for every computable q
    let mut c_pos = Vec::new();
    for q in 0..=max_q {
        let fit = fit_leading(&series(&dims, q, lo, hi), n)?;
        fits.push(FitRecord { label: format!("h{q}"), fit, m_range: pos });
        c_pos.push(fit);
        let (b, s) = ctx.integral(&ctx.unit(q));
        checks.push(ctx.compare(format!("weak({q})"), WEAK, "<=", fit.c, b, s, fit.residual, pos));

        let alt = fit_leading(&alternating(&dims, q, lo, hi), n)?;
        fits.push(FitRecord { label: format!("alt{q}"), fit: alt, m_range: pos });
        let signs: Vec<f64> = (0..n)
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
        let (b, s) = ctx.integral(&signs);
        checks.push(ctx.compare(format!("strong({q})"), STRONG, "<=", alt.c, b, s, alt.residual, pos));
    }

    // negative m: H^q against X(n−1−q)
    for q in 0..=max_q {
        let fit = fit_leading(&series(&dims, q, -hi, -lo), n)?;
        fits.push(FitRecord { label: format!("h{q}_neg"), fit, m_range: neg });
        let (b, s) = ctx.integral(&ctx.unit(n - 1 - q));
        checks.push(ctx.compare(format!("negative-m({q})"), NEG, "<=", fit.c, b, s, fit.residual, neg));
    }

    let pseudoconvex = (1..n).all(|q| samples.stratum(q).value == 0.0);
    if let CrModel::Bundle(_) = model {
        let chi: Vec<(i64, f64)> =
            (lo..=hi).map(|m| (m, dims.get(0, m).unwrap_or(0) as f64 - dims.get(1, m).unwrap_or(0) as f64)).collect();
        let fit = fit_leading(&chi, n)?;
        fits.push(FitRecord { label: "euler".into(), fit, m_range: pos });
        let (b, s) = ctx.integral(&[1.0, -1.0]);
        checks.push(ctx.compare("riemann-roch".into(), RR, "==", fit.c, b, s, fit.residual, pos));
        checks.push(ctx.compare("x-le-1".into(), LEQ1, ">=", c_pos[0].c, b, s, c_pos[0].residual, pos));
    }

    if pseudoconvex {
        // c₀ > 0 beyond its error, and computable higher-q coefficients vanish
        let c0 = c_pos[0];
        let floor = c0.residual + NUMERICAL_FLOOR;
        let mut status = if c0.c > floor { Status::Pass } else { Status::Fail };
        for (q, f) in c_pos.iter().enumerate().skip(1) {
            let sigma = samples.stratum(q).stderr / ctx.norm;
            if f.c.abs() > 2.0 * f.residual + 3.0 * sigma + NUMERICAL_FLOOR {
                status = Status::Fail;
            }
        }
        checks.push(Check {
            name: "grauert-riemenschneider".into(),
            anchor: GR,
            relation: ">",
            lhs: c0.c,
            rhs: 0.0,
            budget: floor,
            slack: c0.c - floor,
            status,
            m_range: pos,
            samples: cfg.samples,
        });
    }

    Ok(MorseReport {
        model: model.to_string(),
        descriptor: model.descriptor(),
        config: *cfg,
        checks,
        integrals,
        fits,
        dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_examples() {
        let lin: Vec<(i64, f64)> = (0..=40).map(|m| (m, m as f64 + 1.0)).collect();
        let f = fit_leading(&lin, 2).unwrap();
        assert!((f.c - 1.0).abs() < 1e-12 && f.residual < 1e-10);
        let half: Vec<(i64, f64)> = (50..=500).map(|m| (m, (m / 2 + 1) as f64)).collect();
        assert!((fit_leading(&half, 2).unwrap().c - 0.5).abs() < 0.01);
        let flat: Vec<(i64, f64)> = (0..20).map(|m| (m, 3.0)).collect();
        assert!(fit_leading(&flat, 2).unwrap().c.abs() < 1e-12);
        assert!(fit_leading(&lin[..5], 2).is_err());
    }
}
