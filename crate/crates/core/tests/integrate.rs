mod common;

use std::f64::consts::PI;

use common::model;
use crmorse::integrate::{integrate_stratum, sample_strata, signed_sums, volume, McEstimate};

const N: u64 = 200_000;

fn within(est: &McEstimate, exact: f64) -> bool {
    (est.value - exact).abs() <= 3.0 * est.stderr + 1e-9 * exact.abs().max(1.0)
}

#[test]
fn round_sphere_integral_is_its_volume() {
    let m = model("round");
    let i0 = integrate_stratum(&m, 0, N, 3).unwrap();
    assert!(within(&i0, 2.0 * PI * PI), "{i0:?}");
    assert_eq!(integrate_stratum(&m, 1, N, 3).unwrap().value, 0.0);
    let v = volume(&m, N, 3);
    assert!(within(&v, 2.0 * PI * PI), "{v:?}");
}

#[test]
fn flat_fibration_over_fubini_study() {
    // |det ℒ| ≡ 1/2 and the measure has mass 4π²
    let m = model("bundle:d=1,c=0");
    let i0 = integrate_stratum(&m, 0, N, 5).unwrap();
    assert!(within(&i0, 2.0 * PI * PI), "{i0:?}");
    assert!(i0.stderr < 1e-9);
}

#[test]
fn pseudoconvex_integrals_match_lattice_growth() {
    // dim H⁰_{b,m} ~ m²/(2·w₁w₂), hence ∫ |det ℒ| = 2π² / (w₁w₂)
    for s in ["round:w=1,2", "ellipsoid"] {
        let m = model(s);
        let i0 = integrate_stratum(&m, 0, N, 9).unwrap();
        assert!(within(&i0, PI * PI), "{s}: {i0:?}");
    }
}

#[test]
fn signed_sum_is_chern_number() {
    // Σ (−1)^q ∫_{X(q)} |det ℒ| = 2π² · deg L for every potential
    for c in [0.5, 1.0, 3.0] {
        let sums = signed_sums(&model(&format!("bundle:d=1,c={c}")), 1, N, 1).unwrap();
        assert!(within(&sums[1], -2.0 * PI * PI), "c = {c}: {:?}", sums[1]);
    }
}

#[test]
fn strata_share_one_stream() {
    let m = model("bundle:d=1,c=3");
    let s = sample_strata(&m, 50_000, 17, 8).unwrap();
    assert_eq!(s.n_strata(), 2);
    let total = s.combination(&[1.0, 1.0]);
    let parts = s.stratum(0).value + s.stratum(1).value;
    assert!((total.value - parts).abs() <= 1e-12 * total.value);
    assert!(!s.inconclusive());
    assert!(sample_strata(&m, 10, 1, 0).is_err());
}

#[test]
fn integrals_do_not_depend_on_workers() {
    let m = model("ellipsoid");
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| integrate_stratum(&m, 0, 20_000, 2).unwrap())
    };
    assert_eq!(run(1), run(4));
}
