//! Model CR manifolds with a transversal circle action.
//!
//! Two families are provided: hypersurfaces in `ℂⁿ` with a weighted diagonal
//! action (the round sphere and the ellipsoid
//! `|z₁|² + |z₁²+z₂|² + |z₂|² = 1`), and unit circle bundles over the
//! projective line. [`CrModel`] is the common contract used downstream.

mod bundle;
mod chart;
mod frame;
mod hypersurface;

pub use bundle::{Chart, CircleBundleModel};
pub use chart::BrtChart;
pub(crate) use frame::omega0_field as omega0_field_at;
pub use frame::ContactFrame;
pub use hypersurface::{DefiningFunction, HypersurfaceModel};

use num_complex::Complex64;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A point of a model manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// Ambient coordinates of a point on a hypersurface.
    Ambient(Vec<Complex64>),
    /// Base chart coordinate plus fibre angle on a circle bundle.
    Bundle { chart: Chart, z: Complex64, theta: f64 },
}

impl Point {
    pub fn ambient(&self) -> Option<&[Complex64]> {
        match self {
            Point::Ambient(z) => Some(z),
            Point::Bundle { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CrModel {
    Hypersurface(HypersurfaceModel),
    Bundle(CircleBundleModel),
}

/// Weighted sphere constructor.
pub fn make_weighted_sphere(w: Vec<u32>, rho: DefiningFunction) -> Result<CrModel> {
    HypersurfaceModel::new(w, rho).map(CrModel::Hypersurface)
}

pub fn make_circle_bundle(d: i64, c: f64) -> Result<CrModel> {
    CircleBundleModel::new(d, c).map(CrModel::Bundle)
}

impl CrModel {
    /// CR dimension parameter: `dim_ℝ X = 2n − 1`.
    pub fn n(&self) -> usize {
        match self {
            CrModel::Hypersurface(h) => h.n(),
            CrModel::Bundle(_) => 2,
        }
    }

    /// Draw a point with an importance weight for `dv_X`, resampling on
    /// root-finding failures. Returns the point, its weight and the number
    /// of rejected draws.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> (Point, f64, u64) {
        match self {
            CrModel::Hypersurface(h) => {
                let mut rejected = 0;
                loop {
                    if let Some((z, w)) = h.sample(rng) {
                        return (Point::Ambient(z), w, rejected);
                    }
                    rejected += 1;
                }
            }
            CrModel::Bundle(b) => {
                let (chart, z, theta, w) = b.sample(rng);
                (Point::Bundle { chart, z, theta }, w, 0)
            }
        }
    }

    /// Action of `e^{iθ}`.
    pub fn act(&self, p: &Point, theta: f64) -> Point {
        match (self, p) {
            (CrModel::Hypersurface(h), Point::Ambient(z)) => Point::Ambient(h.act(z, theta)),
            (_, Point::Bundle { chart, z, theta: t }) => {
                Point::Bundle { chart: *chart, z: *z, theta: (t + theta).rem_euclid(std::f64::consts::TAU) }
            }
            (CrModel::Bundle(_), Point::Ambient(_)) => p.clone(),
        }
    }

    /// Residual of the defining constraint at `p`; the bundle constraint
    /// (finite chart coordinate) is satisfied identically.
    pub fn constraint_residual(&self, p: &Point) -> f64 {
        match (self, p) {
            (CrModel::Hypersurface(h), Point::Ambient(z)) => h.rho(z),
            (CrModel::Bundle(_), Point::Bundle { z, .. }) if z.is_finite() => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn check_on_manifold(&self, p: &Point) -> Result<()> {
        let r = self.constraint_residual(p);
        if r.abs() > 1e-12 {
            return Err(Error::PointOffManifold(format!("constraint residual {r:e}")));
        }
        Ok(())
    }

    pub fn orbit_period(&self, p: &Point) -> Result<u32> {
        match (self, p) {
            (CrModel::Hypersurface(h), Point::Ambient(z)) => h.orbit_period(z),
            (CrModel::Bundle(_), Point::Bundle { .. }) => Ok(1),
            _ => Err(Error::PointOffManifold("point kind does not match model".into())),
        }
    }

    pub fn frame(&self, p: &Point) -> Result<ContactFrame> {
        ContactFrame::at(self, p)
    }

    pub fn brt_chart(&self, anchor: &Point) -> Result<BrtChart> {
        BrtChart::at(self, anchor)
    }

    /// Designated probe points: a generic regular point first, followed by
    /// one representative of every exceptional orbit.
    pub fn default_probes(&self) -> Vec<Point> {
        match self {
            CrModel::Hypersurface(h) => {
                let dir: Vec<Complex64> =
                    (0..h.n()).map(|j| Complex64::from_polar(1.0 + 0.37 * j as f64, 0.61 + 1.3 * j as f64)).collect();
                let nrm = dir.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let u: Vec<Complex64> = dir.iter().map(|c| c / nrm).collect();
                let t = h.radial_root(&u).expect("models are star-shaped");
                let mut out = vec![Point::Ambient(u.iter().map(|c| c * t).collect())];
                out.extend(h.exceptional_points().into_iter().map(Point::Ambient));
                out
            }
            CrModel::Bundle(_) => {
                vec![Point::Bundle { chart: Chart::North, z: Complex64::new(0.43, -0.29), theta: 0.0 }]
            }
        }
    }

    /// Key-value description: kind, weights, degree, perturbation amplitude.
    pub fn descriptor(&self) -> Vec<(String, String)> {
        match self {
            CrModel::Hypersurface(h) => {
                let kind = match h.defining_function() {
                    DefiningFunction::Round => "round",
                    DefiningFunction::Ellipsoid => "ellipsoid",
                };
                let w: Vec<String> = h.weights().iter().map(|w| w.to_string()).collect();
                let mut v = vec![("kind".into(), kind.into()), ("weights".into(), w.join(","))];
                if h.horizontal_rescale() != 0.0 {
                    v.push(("rescale".into(), format!("{}", h.horizontal_rescale())));
                }
                v
            }
            CrModel::Bundle(b) => vec![
                ("kind".into(), "bundle".into()),
                ("degree".into(), b.d.to_string()),
                ("amplitude".into(), format!("{}", b.c)),
            ],
        }
    }

    /// Largest `|det ℒ|` over X in closed form where available.
    pub fn levi_det_sup(&self) -> Option<f64> {
        match self {
            CrModel::Hypersurface(h)
                if h.defining_function() == DefiningFunction::Round && h.weights().iter().all(|&w| w == 1) =>
            {
                Some(1.0)
            }
            CrModel::Bundle(b) => Some(0.5 * (b.d as f64).abs() + 2.0 * b.c.abs()),
            _ => None,
        }
    }
}

impl fmt::Display for CrModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrModel::Hypersurface(h) => {
                let base = match h.defining_function() {
                    DefiningFunction::Round => "round",
                    DefiningFunction::Ellipsoid => "ellipsoid",
                };
                write!(f, "{base}")?;
                if h.defining_function() == DefiningFunction::Round && h.weights().iter().any(|&w| w != 1) || h.n() != 2
                {
                    let w: Vec<String> = h.weights().iter().map(|w| w.to_string()).collect();
                    write!(f, ":w={}", w.join(","))?;
                }
                Ok(())
            }
            CrModel::Bundle(b) => write!(f, "bundle:d={},c={}", b.d, b.c),
        }
    }
}

/// Parses `round`, `round:w=1,2`, `ellipsoid`, `bundle:d=1,c=3`.
impl FromStr for CrModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(String, String)> = Vec::new();
        let mut last_key: Option<String> = None;
        for tok in rest.split(',').filter(|t| !t.is_empty()) {
            if let Some((k, v)) = tok.split_once('=') {
                params.push((k.trim().to_string(), v.trim().to_string()));
                last_key = Some(k.trim().to_string());
            } else if let Some(k) = &last_key {
                // continuation of a list value such as w=1,2
                let entry = params.iter_mut().rev().find(|(key, _)| key == k).unwrap();
                entry.1.push(',');
                entry.1.push_str(tok.trim());
            } else {
                return Err(Error::InvalidModel(format!("malformed parameter '{tok}' in '{s}'")));
            }
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let unknown = |allowed: &[&str]| {
            params
                .iter()
                .find(|(k, _)| !allowed.contains(&k.as_str()))
                .map(|(k, _)| Error::InvalidModel(format!("unknown parameter '{k}' for model '{kind}'")))
        };
        match kind {
            "round" | "ellipsoid" => {
                if let Some(e) = unknown(&["w"]) {
                    return Err(e);
                }
                let w = match get("w") {
                    Some(v) => v
                        .split(',')
                        .map(|t| t.parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::InvalidModel(format!("bad weights '{v}': {e}")))?,
                    None if kind == "round" => vec![1, 1],
                    None => vec![1, 2],
                };
                let rho = if kind == "round" { DefiningFunction::Round } else { DefiningFunction::Ellipsoid };
                make_weighted_sphere(w, rho)
            }
            "bundle" => {
                if let Some(e) = unknown(&["d", "c"]) {
                    return Err(e);
                }
                let d = get("d")
                    .unwrap_or("1")
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidModel(format!("bad degree: {e}")))?;
                let c = get("c")
                    .unwrap_or("0")
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidModel(format!("bad amplitude: {e}")))?;
                make_circle_bundle(d, c)
            }
            other => Err(Error::InvalidModel(format!("unknown model kind '{other}'"))),
        }
    }
}
