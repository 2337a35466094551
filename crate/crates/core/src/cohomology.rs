//! Exact dimensions of the Fourier components `H^q_{b,m}`.
//!
//! On weighted hypersurfaces CR functions of degree `m` are spanned by the
//! weighted-homogeneous monomials, so `dim H⁰_{b,m}` is a lattice count.
//! On circle bundles `H^q_{b,m} ≅ H^q(P¹, O(dm))`.

use serde::Serialize;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::Result;
use crate::manifold::CrModel;
use crate::szego::{monomial_gram, SzegoConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lattice,
    Monomial,
    Duality,
    GramRank,
    Unsupported,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Lattice => "lattice",
            Method::Monomial => "monomial",
            Method::Duality => "duality",
            Method::GramRank => "gram_rank",
            Method::Unsupported => "unsupported",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Entry {
    /// `None` when the combination is not computable for the model.
    pub dim: Option<u64>,
    pub method: Method,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohomologyTable {
    pub entries: BTreeMap<(usize, i64), Entry>,
}

/// One `(q, m, dim, method)` row, the serialized form of a table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Row {
    pub q: usize,
    pub m: i64,
    pub dim: Option<u64>,
    pub method: Method,
}

impl Serialize for CohomologyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows())
    }
}

impl CohomologyTable {
    pub fn get(&self, q: usize, m: i64) -> Option<u64> {
        self.entries.get(&(q, m)).and_then(|e| e.dim)
    }

    /// `(m, dim)` pairs for fixed `q`, skipping unsupported entries.
    pub fn series(&self, q: usize) -> Vec<(i64, u64)> {
        self.entries.iter().filter(|((qq, _), _)| *qq == q).filter_map(|((_, m), e)| e.dim.map(|d| (*m, d))).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Row> + '_ {
        self.entries.iter().map(|(&(q, m), e)| Row { q, m, dim: e.dim, method: e.method })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `#{a ∈ ℕⁿ : Σ a_j w_j = m}` by dynamic programming over the weights.
pub fn h0_weighted(w: &[u32], m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let m = m as usize;
    let mut ways = vec![0u64; m + 1];
    ways[0] = 1;
    for &wj in w {
        let wj = wj as usize;
        for k in wj..=m {
            ways[k] += ways[k - wj];
        }
    }
    ways[m]
}

/// `dim H^q(P¹, O(dm))`.
pub fn bundle_dim(d: i64, m: i64, q: usize) -> u64 {
    let k = d * m;
    match q {
        0 => (k + 1).max(0) as u64,
        1 => (-k - 1).max(0) as u64,
        _ => 0,
    }
}

/// Numerical rank of the monomial Gram matrix, singular values below
/// `1e-8·max` counted as zero.
pub fn gram_rank(model: &CrModel, m: i64, cfg: &SzegoConfig) -> Result<u64> {
    let CrModel::Hypersurface(h) = model else {
        return Err(crate::Error::Unsupported("Gram rank needs a hypersurface model".into()));
    };
    let g = monomial_gram(h, m, cfg)?;
    if g.nrows() == 0 {
        return Ok(0);
    }
    // diagonal scaling removes the spread of monomial magnitudes
    let d: Vec<f64> = (0..g.nrows()).map(|i| g[(i, i)].re.sqrt()).collect();
    let scaled = nalgebra::DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)] / (d[i] * d[j]));
    let sv = scaled.singular_values();
    let max = sv.max();
    Ok(sv.iter().filter(|&&s| s > 1e-8 * max).count() as u64)
}

pub fn dims_table(model: &CrModel, m_range: RangeInclusive<i64>, q_range: RangeInclusive<usize>) -> CohomologyTable {
    let mut table = CohomologyTable::default();
    for q in q_range {
        for m in m_range.clone() {
            let entry = match model {
                CrModel::Hypersurface(h) if q == 0 => {
                    Entry { dim: Some(h0_weighted(h.weights(), m)), method: Method::Lattice }
                }
                CrModel::Hypersurface(_) => Entry { dim: None, method: Method::Unsupported },
                CrModel::Bundle(b) if q <= 1 => {
                    let method = if q == 0 { Method::Monomial } else { Method::Duality };
                    Entry { dim: Some(bundle_dim(b.d, m, q)), method }
                }
                CrModel::Bundle(_) => Entry { dim: Some(0), method: Method::Duality },
            };
            table.entries.insert((q, m), entry);
        }
    }
    table
}
