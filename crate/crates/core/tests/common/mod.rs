//! Invariant checks shared by the module suites and the acceptance target.
//!
//! Every check takes a seed that drives a proptest runner (or the Monte
//! Carlo stream) and returns `Err` with a description on violation, so the
//! same property can run under several seeds.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use crmorse::cohomology::{bundle_dim, gram_rank, h0_weighted};
use crmorse::integrate::{integrate_stratum, sample_strata, volume};
use crmorse::levi::{classify, levi_matrix, levi_spectrum, DEGENERACY_TOL};
use crmorse::manifold::{make_circle_bundle, Chart, CrModel, HypersurfaceModel, Point};
use crmorse::modelspace::{
    density_bruteforce, extremal_checks, model_density, weight_gap, BruteforceSpec, ModelParams,
};
use crmorse::morse::{build_report, MorseConfig, Status};
use crmorse::numeric::quadrature::Legendre;
use crmorse::szego::arnoldi::monomials;
use crmorse::szego::{basis_values, fourier_project, kernel_values, monomial_gram, szego_profile, SzegoConfig};

pub const SEEDS: [u64; 2] = [0x0005_eed1, 0x0b5e_55ed];

pub type Outcome = Result<(), String>;

pub fn model(s: &str) -> CrModel {
    s.parse().expect("built-in model string")
}

/// Models covering both families, weighted actions and `n = 3`.
pub fn zoo() -> Vec<CrModel> {
    ["round", "round:w=1,2", "ellipsoid", "round:w=1,2,3", "bundle:d=1,c=0", "bundle:d=1,c=3"]
        .iter()
        .map(|s| model(s))
        .collect()
}

pub fn hypersurfaces() -> Vec<CrModel> {
    zoo().into_iter().filter(|m| matches!(m, CrModel::Hypersurface(_))).collect()
}

pub fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn check<S>(seed: u64, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    runner(seed, cases).run(&strategy, test).map_err(|e| e.to_string())
}

pub fn point(m: &CrModel, seed: u64) -> Point {
    m.sample_point(&mut ChaCha8Rng::seed_from_u64(seed)).0
}

fn distance(a: &Point, b: &Point) -> f64 {
    match (a, b) {
        (Point::Ambient(x), Point::Ambient(y)) => x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max),
        (Point::Bundle { z: z1, theta: t1, .. }, Point::Bundle { z: z2, theta: t2, .. }) => {
            let d = (t1 - t2).rem_euclid(TAU);
            (z1 - z2).norm().max(d.min(TAU - d))
        }
        _ => f64::INFINITY,
    }
}

// ---- manifold ----------------------------------------------------------

pub fn action_invariance(seed: u64) -> Outcome {
    let models = zoo();
    check(seed, 1000, (0..models.len(), any::<u64>(), 0.0..TAU), |(i, s, theta)| {
        let m = &models[i];
        let moved = m.act(&point(m, s), theta);
        let r = m.constraint_residual(&moved);
        prop_assert!(r.abs() <= 1e-10, "{m}: residual {r:e} after theta = {theta}");
        Ok(())
    })
}

pub fn transversality(seed: u64) -> Outcome {
    let models = zoo();
    check(seed, 300, (0..models.len(), any::<u64>()), |(i, s)| {
        let m = &models[i];
        let frame = m.frame(&point(m, s)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let sigma = frame.transversality();
        prop_assert!(sigma > 1e-8, "{m}: smallest singular value {sigma:e}");
        prop_assert!((frame.omega0_on_t() + 1.0).abs() < 1e-10);
        Ok(())
    })
}

pub fn stabilizer_exactness(seed: u64) -> Outcome {
    let models = hypersurfaces();
    check(seed, 200, (0..models.len(), any::<u64>(), 0.0..TAU, any::<bool>()), |(i, s, rot, exceptional)| {
        let m = &models[i];
        let CrModel::Hypersurface(h) = m else { unreachable!() };
        let base = match h.exceptional_points().first() {
            Some(e) if exceptional => m.act(&Point::Ambient(e.clone()), rot),
            _ => point(m, s),
        };
        let k = m.orbit_period(&base).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let full = distance(&m.act(&base, TAU / k as f64), &base);
        let half = distance(&m.act(&base, PI / k as f64), &base);
        prop_assert!(full <= 1e-12, "{m}: period {k} but displacement {full:e}");
        prop_assert!(half > 1e-6, "{m}: fixed by a rotation of pi/{k}");
        Ok(())
    })
}

/// `Vol(X)` by product quadrature in Hopf coordinates of the unit sphere,
/// `u = (cos η e^{iξ₁}, sin η e^{iξ₂})`, `dσ = sin η cos η dη dξ₁ dξ₂`.
pub fn volume_by_quadrature(h: &HypersurfaceModel) -> f64 {
    let eta = Legendre::on_interval(48, 0.0, PI / 2.0);
    let n_xi = 24;
    let mut total = 0.0;
    for (e, we) in eta.nodes.iter().zip(&eta.weights) {
        for i in 0..n_xi {
            for j in 0..n_xi {
                let (x1, x2) = (TAU * i as f64 / n_xi as f64, TAU * j as f64 / n_xi as f64);
                let u = [Complex64::from_polar(e.cos(), x1), Complex64::from_polar(e.sin(), x2)];
                let t = h.radial_root(&u).expect("star-shaped");
                total += we * e.sin() * e.cos() * h.radial_jacobian(&u, t);
            }
        }
    }
    total * (TAU / n_xi as f64).powi(2)
}

pub fn sampler_unbiased(seed: u64) -> Outcome {
    for s in ["round", "round:w=1,2", "ellipsoid"] {
        let m = model(s);
        let CrModel::Hypersurface(h) = &m else { unreachable!() };
        let exact = volume_by_quadrature(h);
        let mc = volume(&m, 40_000, seed);
        let tol = 3.0 * mc.stderr + 1e-9 * exact;
        if (mc.value - exact).abs() > tol {
            return Err(format!("{s}: MC volume {} ± {} vs quadrature {exact}", mc.value, mc.stderr));
        }
    }
    Ok(())
}

// ---- levi --------------------------------------------------------------

pub fn levi_hermitian(seed: u64) -> Outcome {
    let models = zoo();
    check(seed, 300, (0..models.len(), any::<u64>()), |(i, s)| {
        let m = &models[i];
        let l = levi_matrix(m, &point(m, s)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let asym = (&l - l.adjoint()).norm();
        prop_assert!(asym <= 1e-10, "{m}: |M - M*| = {asym:e}");
        Ok(())
    })
}

pub fn round_sphere_positive(seed: u64) -> Outcome {
    let m = model("round");
    check(seed, 1000, any::<u64>(), |s| {
        let spec = levi_spectrum(&m, &point(&m, s)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(spec.eigenvalues.iter().all(|&l| l > 0.0), "{:?}", spec.eigenvalues);
        Ok(())
    })
}

fn rescaled(base: &str, a: f64) -> CrModel {
    let CrModel::Hypersurface(h) = model(base) else { unreachable!() };
    CrModel::Hypersurface(h.with_horizontal_rescale(a).expect("positive rescale"))
}

pub fn metric_invariance(seed: u64) -> Outcome {
    for base in ["round:w=1,2", "ellipsoid"] {
        let (m1, m2) = (model(base), rescaled(base, 0.7));
        let a = integrate_stratum(&m1, 0, 40_000, seed).map_err(|e| e.to_string())?;
        let b = integrate_stratum(&m2, 0, 40_000, seed).map_err(|e| e.to_string())?;
        let sigma = a.stderr.hypot(b.stderr);
        if (a.value - b.value).abs() > 3.0 * sigma + 1e-9 * a.value.abs() {
            return Err(format!("{base}: {} ± {} vs rescaled {} ± {}", a.value, a.stderr, b.value, b.stderr));
        }
    }
    Ok(())
}

pub fn signature_metric_independent(seed: u64) -> Outcome {
    let pairs: Vec<(CrModel, CrModel)> =
        ["round:w=1,2", "ellipsoid", "round:w=1,2,3"].iter().map(|b| (model(b), rescaled(b, 1.3))).collect();
    check(seed, 200, (0..pairs.len(), any::<u64>()), |(i, s)| {
        let (m1, m2) = &pairs[i];
        let p = point(m1, s);
        let c1 = classify(&levi_spectrum(m1, &p).unwrap(), DEGENERACY_TOL);
        let c2 = classify(&levi_spectrum(m2, &p).unwrap(), DEGENERACY_TOL);
        prop_assert_eq!(c1, c2);
        Ok(())
    })
}

// ---- integrate ---------------------------------------------------------

pub fn seed_determinism(seed: u64) -> Outcome {
    let m = model("bundle:d=1,c=3");
    let a = integrate_stratum(&m, 1, 20_000, seed).map_err(|e| e.to_string())?;
    let b = integrate_stratum(&m, 1, 20_000, seed).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| integrate_stratum(&m, 1, 20_000, seed)).map_err(|e| e.to_string())?;
    if a != b || a != c {
        return Err(format!("{a:?} / {b:?} / {c:?}"));
    }
    Ok(())
}

pub fn sample_size_consistency(seed: u64) -> Outcome {
    for s in ["bundle:d=1,c=3", "ellipsoid"] {
        let m = model(s);
        let a = integrate_stratum(&m, 0, 10_000, seed).map_err(|e| e.to_string())?;
        let b = integrate_stratum(&m, 0, 40_000, seed ^ 0x9e37).map_err(|e| e.to_string())?;
        if (a.value - b.value).abs() > 3.0 * a.stderr.hypot(b.stderr) + 1e-9 * a.value.abs() {
            return Err(format!("{s}: N {} ± {} vs 4N {} ± {}", a.value, a.stderr, b.value, b.stderr));
        }
    }
    Ok(())
}

/// `(1/2π²)(∫_{X(0)} − ∫_{X(1)}) = d` on circle bundles; returns the
/// normalized estimate and its standard error.
pub fn signed_sum(d: i64, c: f64, n: u64, seed: u64) -> (f64, f64) {
    let m = make_circle_bundle(d, c).unwrap();
    let e = sample_strata(&m, n, seed, 64).unwrap().combination(&[1.0, -1.0]);
    let norm = 2.0 * PI * PI;
    (e.value / norm, e.stderr / norm)
}

pub fn demailly_cross_check(seed: u64) -> Outcome {
    for c in [0.0, 1.0, 3.0] {
        let (v, s) = signed_sum(1, c, 200_000, seed);
        if (v - 1.0).abs() > 3.0 * s + 1e-9 {
            return Err(format!("c = {c}: {v} ± {s}"));
        }
    }
    Ok(())
}

// ---- cohomology --------------------------------------------------------

pub fn generating_function(seed: u64) -> Outcome {
    check(seed, 64, prop::collection::vec(1u32..=6, 1..=4), |w| {
        const ORDER: usize = 50;
        let mut series = vec![0u64; ORDER + 1];
        series[0] = 1;
        for &wj in &w {
            // multiply by 1/(1 − t^w) = Σ_k t^{kw}
            let geometric: Vec<u64> = (0..=ORDER).map(|i| u64::from(i % wj as usize == 0)).collect();
            series = (0..=ORDER).map(|k| (0..=k).map(|i| series[i] * geometric[k - i]).sum()).collect();
        }
        for (m, &coef) in series.iter().enumerate() {
            prop_assert_eq!(h0_weighted(&w, m as i64), coef, "w = {:?}, m = {}", w, m);
        }
        Ok(())
    })
}

pub fn gram_rank_matches_lattice(_seed: u64) -> Outcome {
    let m = model("ellipsoid");
    for k in 0..=20 {
        let rank = gram_rank(&m, k, &SzegoConfig::default()).map_err(|e| e.to_string())?;
        let count = h0_weighted(&[1, 2], k);
        if rank != count {
            return Err(format!("m = {k}: rank {rank} vs lattice {count}"));
        }
    }
    Ok(())
}

pub fn euler_characteristic(seed: u64) -> Outcome {
    check(seed, 500, (-6i64..=6, -200i64..=200), |(d, m)| {
        let chi = bundle_dim(d, m, 0) as i64 - bundle_dim(d, m, 1) as i64;
        prop_assert_eq!(chi, d * m + 1);
        Ok(())
    })
}

// ---- modelspace --------------------------------------------------------

fn eigenvalue() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.2f64, 0.2..5.0f64]
}

pub fn extremal_normalization(seed: u64) -> Outcome {
    check(seed, 10, prop::collection::vec(eigenvalue(), 1..=2), |lambdas| {
        let q = lambdas.iter().filter(|&&l| l < 0.0).count();
        let params = ModelParams::new(lambdas.clone(), q).unwrap();
        let c = extremal_checks(&params, 16).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let target = 1.0 / TAU;
        prop_assert!(((c.norm_value - target) / target).abs() <= 1e-6, "{lambdas:?}: {}", c.norm_value);
        let center = lambdas.iter().map(|l| l.abs()).product::<f64>() / (2.0 * PI.powi(lambdas.len() as i32 + 1));
        prop_assert!((c.center_value - center).abs() <= 1e-12 * center, "{lambdas:?}: {}", c.center_value);
        Ok(())
    })
}

pub fn density_oracle(seed: u64) -> Outcome {
    let spec = BruteforceSpec::default();
    let draws = (prop::collection::vec(eigenvalue(), 1..=2), 0usize..=2).prop_map(|(l, q)| {
        let q = q.min(l.len());
        (l, q)
    });
    check(seed, 5, draws, |(lambdas, q)| {
        let params = ModelParams::new(lambdas.clone(), q).unwrap();
        let brute = density_bruteforce(&params, &spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let exact = model_density(&params);
        let err = (brute - exact).abs() / exact.max(0.01);
        prop_assert!(err <= 0.01, "{lambdas:?}, q = {q}: brute {brute} vs {exact}");
        Ok(())
    })
}

pub fn density_indicator(seed: u64) -> Outcome {
    let spec = BruteforceSpec::default();
    check(seed, 4, (prop::collection::vec(eigenvalue(), 1..=2), 0usize..2), |(lambdas, extra)| {
        let sig = lambdas.iter().filter(|&&l| l < 0.0).count();
        let d = lambdas.len();
        // sig + 1, …, sig + d modulo d + 1 never returns sig
        let q = (sig + 1 + extra % d) % (d + 1);
        let params = ModelParams::new(lambdas.clone(), q).unwrap();
        let brute = density_bruteforce(&params, &spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(brute < 1e-3, "{lambdas:?}, q = {q}: {brute}");
        Ok(())
    })
}

pub fn fs_chart() -> crmorse::manifold::BrtChart {
    let m = model("bundle:d=1,c=0");
    m.brt_chart(&Point::Bundle { chart: Chart::North, z: Complex64::new(0.0, 0.0), theta: 0.0 }).unwrap()
}

pub fn weight_gap_decreasing(_seed: u64) -> Outcome {
    let chart = fs_chart();
    let gaps: Vec<f64> = [1e2, 1e3, 1e4, 1e5, 1e6].iter().map(|&m| weight_gap(&chart, m).unwrap()).collect();
    if gaps.windows(2).all(|w| w[1] < w[0]) {
        Ok(())
    } else {
        Err(format!("gaps {gaps:?}"))
    }
}

// ---- szego -------------------------------------------------------------

/// `max_x |det ℒ_x|`: closed form when known, else the maximum over a
/// fixed sample.
pub fn levi_det_max(m: &CrModel) -> f64 {
    m.levi_det_sup().unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xde7);
        (0..20_000).map(|_| levi_spectrum(m, &m.sample_point(&mut rng).0).unwrap().det.abs()).fold(0.0, f64::max)
    })
}

pub fn uniform_bound(_seed: u64) -> Outcome {
    let ms: Vec<i64> = (1..=10).chain([50, 100, 200, 300, 400, 500]).collect();
    let cfg = SzegoConfig { error_estimate: false, ..SzegoConfig::default() };
    for s in ["round", "round:w=1,2", "ellipsoid", "bundle:d=1,c=0"] {
        let m = model(s);
        let bound = 2.0 * levi_det_max(&m) / (2.0 * PI.powi(m.n() as i32));
        let prof = szego_profile(&m, &ms, &m.default_probes(), &cfg).map_err(|e| e.to_string())?;
        for (row, k) in prof.values.iter().zip(&ms) {
            for v in row {
                if *v > bound * (1.0 + 1e-12) {
                    return Err(format!("{s}, m = {k}: {v} > {bound}"));
                }
            }
        }
    }
    Ok(())
}

fn unit_vector(raw: &[(f64, f64)]) -> Vec<Complex64> {
    let v: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    v.iter().map(|c| c / n).collect()
}

pub fn extremal_inequality(seed: u64) -> Outcome {
    let models = ["round", "ellipsoid", "round:w=1,2", "bundle:d=1,c=3"].map(model);
    let cfg = SzegoConfig::default();
    let cases = (0..models.len(), 1i64..=30).prop_flat_map(|(i, m)| {
        (Just(i), Just(m), prop::collection::vec(prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 31), 100))
    });
    check(seed, 6, cases, |(i, m, coeffs)| {
        let model = &models[i];
        let probes = model.default_probes();
        let basis = basis_values(model, m, &probes, &cfg).unwrap();
        let kernel = kernel_values(model, m, &probes, &cfg).unwrap();
        for raw in &coeffs {
            for (vals, pi) in basis.iter().zip(&kernel) {
                let c = unit_vector(&raw[..vals.len()]);
                let u: Complex64 = c.iter().zip(vals).map(|(a, f)| a * f).sum();
                prop_assert!(u.norm_sqr() <= pi * (1.0 + 1e-12) + 1e-300, "{model}, m = {m}");
            }
        }
        Ok(())
    })
}

/// Random unitary from the QR factorization of a complex Gaussian-like
/// matrix.
fn random_unitary(raw: &[(f64, f64)], d: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(d, d, |i, j| {
        let (x, y) = raw[i * d + j];
        Complex64::new(x, y) + if i == j { Complex64::new(0.5, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    a.qr().q()
}

pub fn basis_independence(seed: u64) -> Outcome {
    let models = ["round", "ellipsoid", "round:w=1,2"].map(model);
    let cfg = SzegoConfig::default();
    let cases = (0..models.len(), 1i64..=10, prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 121));
    check(seed, 12, cases, |(i, m, raw)| {
        let model = &models[i];
        let CrModel::Hypersurface(h) = model else { unreachable!() };
        let probes = model.default_probes();
        let mons = monomials(h.weights(), m);
        let d = mons.len();
        let r = random_unitary(&raw, d);
        let gram = monomial_gram(h, m, &cfg).unwrap();
        // rotated family g = R f: Gram R G R*, values R v
        let g_rot = &r * gram * r.adjoint();
        let chol = g_rot.cholesky().ok_or_else(|| TestCaseError::fail("rotated Gram not positive"))?;
        let kernel = kernel_values(model, m, &probes, &cfg).unwrap();
        for (p, k) in probes.iter().zip(&kernel) {
            let z = p.ambient().unwrap();
            let v = nalgebra::DVector::from_iterator(d, mons.iter().map(|&(a, b)| z[0].powu(a) * z[1].powu(b)));
            let w = &r * v;
            let y = chol.solve(&w);
            let pi = w.dotc(&y).re;
            prop_assert!((pi - k).abs() <= 1e-8 * k.abs(), "{model}, m = {m}: {pi} vs {k}");
        }
        Ok(())
    })
}

pub fn round_sphere_limit(seed: u64) -> Outcome {
    let m = model("round");
    let ms: Vec<i64> = (1..=2000).collect();
    let probes: Vec<Point> = (0..5).map(|k| point(&m, seed.wrapping_add(k))).collect();
    let prof = szego_profile(&m, &ms, &probes, &SzegoConfig::default()).map_err(|e| e.to_string())?;
    let target = 1.0 / (2.0 * PI * PI);
    for (row, k) in prof.values.iter().zip(&ms) {
        for v in row {
            if (v - target).abs() > 2.0 / *k as f64 {
                return Err(format!("m = {k}: {v}"));
            }
        }
    }
    Ok(())
}

pub fn fourier_orthogonality(seed: u64) -> Outcome {
    let models = hypersurfaces();
    let cases = (0..models.len(), any::<u64>(), prop::collection::vec(0u32..=2, 3), -6i64..=20);
    check(seed, 100, cases, |(i, s, alpha, target)| {
        let m = &models[i];
        let CrModel::Hypersurface(h) = m else { unreachable!() };
        let n = h.n();
        let alpha = &alpha[..n];
        let degree: i64 = alpha.iter().zip(h.weights()).map(|(&a, &w)| (a * w) as i64).sum();
        let mono =
            |p: &Point| -> Complex64 { p.ambient().unwrap().iter().zip(alpha).map(|(c, &a)| c.powu(a)).product() };
        let x = point(m, s);
        let own = fourier_project(m, mono, degree)(&x);
        prop_assert!((own - mono(&x)).norm() <= 1e-12, "{m}: Q_m u != u");
        if target != degree {
            let other = fourier_project(m, mono, target)(&x);
            prop_assert!(other.norm() <= 1e-12, "{m}: Q_{target} of degree {degree} = {other}");
        }
        Ok(())
    })
}

// ---- morse -------------------------------------------------------------

pub fn monotone_budget(seed: u64) -> Outcome {
    let m = model("bundle:d=1,c=3");
    let small = build_report(&m, &MorseConfig::new(60, 20_000, seed)).map_err(|e| e.to_string())?;
    let large = build_report(&m, &MorseConfig::new(60, 80_000, seed)).map_err(|e| e.to_string())?;
    for (a, b) in small.integrals.iter().zip(&large.integrals) {
        if b.stderr > a.stderr {
            return Err(format!("stderr grew from {} to {}", a.stderr, b.stderr));
        }
    }
    Ok(())
}

pub fn verdict_stability(seed: u64) -> Outcome {
    for s in ["bundle:d=1,c=3", "ellipsoid"] {
        let m = model(s);
        let a = build_report(&m, &MorseConfig::new(100, 50_000, seed)).map_err(|e| e.to_string())?;
        let b = build_report(&m, &MorseConfig::new(100, 50_000, seed.wrapping_add(1))).map_err(|e| e.to_string())?;
        for (x, y) in a.checks.iter().zip(&b.checks) {
            let decided = x.status != Status::Inconclusive && y.status != Status::Inconclusive;
            if decided && x.status != y.status {
                return Err(format!("{s}: {} is {:?} vs {:?}", x.name, x.status, y.status));
            }
        }
    }
    Ok(())
}

pub fn negative_m_duality(seed: u64) -> Outcome {
    let mixed =
        build_report(&model("bundle:d=1,c=3"), &MorseConfig::new(100, 50_000, seed)).map_err(|e| e.to_string())?;
    for q in 0..2 {
        let neg = mixed.check(&format!("negative-m({q})")).unwrap();
        let pos = mixed.check(&format!("weak({})", 1 - q)).unwrap();
        if neg.rhs != pos.rhs {
            return Err(format!("negative-m({q}) bound {} differs from weak({}) bound {}", neg.rhs, 1 - q, pos.rhs));
        }
    }
    let flat =
        build_report(&model("bundle:d=1,c=0"), &MorseConfig::new(100, 50_000, seed)).map_err(|e| e.to_string())?;
    let c = flat.check("negative-m(1)").unwrap();
    let sigma = flat.integrals[0].stderr / (2.0 * PI * PI);
    if (c.lhs - c.rhs).abs() > 3.0 * sigma + c.budget {
        return Err(format!("fitted {} vs bound {}", c.lhs, c.rhs));
    }
    Ok(())
}

pub type Invariant = (&'static str, fn(u64) -> Outcome);

/// Every module-level invariant, in module order.
pub const ALL: [Invariant; 27] = [
    ("action invariance", action_invariance),
    ("transversality", transversality),
    ("stabilizer exactness", stabilizer_exactness),
    ("sampler unbiasedness", sampler_unbiased),
    ("levi hermitian symmetry", levi_hermitian),
    ("round sphere sign convention", round_sphere_positive),
    ("metric invariance", metric_invariance),
    ("signature metric independence", signature_metric_independent),
    ("seed determinism", seed_determinism),
    ("N vs 4N consistency", sample_size_consistency),
    ("demailly cross-check", demailly_cross_check),
    ("generating function identity", generating_function),
    ("gram rank vs lattice", gram_rank_matches_lattice),
    ("euler characteristic", euler_characteristic),
    ("extremal normalization", extremal_normalization),
    ("density oracle", density_oracle),
    ("density indicator", density_indicator),
    ("weight gap decreasing", weight_gap_decreasing),
    ("uniform szego bound", uniform_bound),
    ("extremal inequality", extremal_inequality),
    ("basis independence", basis_independence),
    ("round sphere limit", round_sphere_limit),
    ("fourier orthogonality", fourier_orthogonality),
    ("monotone budget", monotone_budget),
    ("verdict stability", verdict_stability),
    ("negative-m duality", negative_m_duality),
    ("cli byte stability", cli_byte_stability),
];

// ---- cli ---------------------------------------------------------------

pub fn run_cli(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("crmorse").chain(args.iter().copied());
    let code = crmorse::cli::run(argv, &mut out, &mut err);
    (code, out, err)
}

pub fn cli_byte_stability(seed: u64) -> Outcome {
    let seed = seed.to_string();
    let args = ["--workers", "2", "integrate", "--model", "bundle:d=1,c=3", "--samples", "2e4", "--seed", &seed];
    let (c1, a, _) = run_cli(&args);
    let (c2, b, _) = run_cli(&args);
    if c1 != 0 || c2 != 0 || a != b {
        return Err("integrate output differs between identical runs".into());
    }
    Ok(())
}

pub fn run_all(seed: u64) -> Vec<(&'static str, Outcome)> {
    ALL.iter().map(|(name, f)| (*name, f(seed))).collect()
}
