mod common;

use approx::assert_relative_eq;
use num_complex::Complex64;
use std::f64::consts::PI;

use common::model;
use crmorse::levi::levi_spectrum;
use crmorse::manifold::{make_weighted_sphere, BrtChart, Chart, CircleBundleModel, CrModel, DefiningFunction, Point};
use crmorse::numeric::fd::second_wirtinger;
use crmorse::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn non_effective_actions_are_rejected() {
    let err = make_weighted_sphere(vec![2, 4], DefiningFunction::Round).unwrap_err();
    assert!(matches!(err, Error::NonEffectiveAction { gcd: 2, .. }), "{err}");
    assert!("round:w=0,1".parse::<CrModel>().is_err());
}

#[test]
fn model_strings_round_trip() {
    for s in ["round", "round:w=1,2", "ellipsoid", "round:w=1,2,3", "bundle:d=1,c=3", "bundle:d=2,c=0.5"] {
        let m = model(s);
        assert_eq!(m, m.to_string().parse::<CrModel>().unwrap(), "{s}");
    }
    assert_eq!(model("bundle:d=1"), model("bundle:d=1,c=0"));
    assert!("bundle:d=1,x=2".parse::<CrModel>().is_err());
}

#[test]
fn ellipsoid_exceptional_orbit() {
    let m = model("ellipsoid");
    let CrModel::Hypersurface(h) = &m else { unreachable!() };
    let ex = h.exceptional_points();
    assert_eq!(ex.len(), 1);
    assert!(ex[0][0].norm() < 1e-12);
    assert_relative_eq!(ex[0][1].norm(), 0.5f64.sqrt(), epsilon = 1e-12);
    assert_eq!(m.orbit_period(&Point::Ambient(ex[0].clone())).unwrap(), 2);
    let regular = common::point(&m, 11);
    assert_eq!(m.orbit_period(&regular).unwrap(), 1);
}

#[test]
fn off_manifold_points_are_rejected() {
    let m = model("round");
    let p = Point::Ambient(vec![c(0.5, 0.0), c(0.5, 0.0)]);
    assert!(matches!(m.frame(&p), Err(Error::PointOffManifold(_))));
}

#[test]
fn round_sphere_volume() {
    let round = model("round");
    let CrModel::Hypersurface(h) = &round else { unreachable!() };
    assert_relative_eq!(common::volume_by_quadrature(h), 2.0 * PI * PI, max_relative = 1e-10);
}

#[test]
fn bundle_chart_transition() {
    let b = CircleBundleModel::new(1, 3.0).unwrap();
    let z = c(0.7, -1.2);
    let (chart, w, theta) = b.change_chart(Chart::North, z, 0.4);
    assert_eq!(chart, Chart::South);
    assert_relative_eq!((w - z.inv()).norm(), 0.0, epsilon = 1e-15);
    assert_relative_eq!(theta, (0.4 + z.arg()).rem_euclid(2.0 * PI), epsilon = 1e-15);
    let (back, z2, t2) = b.change_chart(chart, w, theta);
    assert_eq!(back, Chart::North);
    assert_relative_eq!((z2 - z).norm(), 0.0, epsilon = 1e-14);
    assert_relative_eq!(t2, 0.4, epsilon = 1e-14);
    // the weights differ by the log of the transition function
    assert_relative_eq!(b.phi(Chart::South, w), b.phi(Chart::North, z) - z.norm().ln(), epsilon = 1e-14);
}

fn chart_matches_levi(m: &CrModel, anchor: &Point) {
    let chart = m.brt_chart(anchor).unwrap();
    let spec = levi_spectrum(m, anchor).unwrap();
    for (a, b) in chart.lambdas.iter().zip(&spec.eigenvalues) {
        assert_relative_eq!(*a, *b, max_relative = 1e-5);
    }
    let origin = vec![c(0.0, 0.0); chart.dim()];
    assert!(chart.phi(&origin).abs() < 1e-12);
    assert_relative_eq!(chart.density(&origin), 1.0, max_relative = 1e-6);
    // normal form: ∂∂̄φ(0) is diagonal with the chart eigenvalues
    let (hol, herm) = second_wirtinger(&|z: &[Complex64]| chart.phi(z), &origin, 1e-3);
    for a in 0..chart.dim() {
        for b in 0..chart.dim() {
            let expect = if a == b { chart.lambdas[a] } else { 0.0 };
            assert!((herm[a][b] - expect).norm() < 1e-5, "{m}: herm[{a}][{b}] = {}", herm[a][b]);
            assert!(hol[a][b].norm() < 1e-5, "{m}: hol[{a}][{b}] = {}", hol[a][b]);
        }
    }
}

#[test]
fn charts_at_designated_anchors() {
    for s in ["round", "round:w=1,2", "ellipsoid", "round:w=1,2,3"] {
        let m = model(s);
        let CrModel::Hypersurface(h) = &m else { unreachable!() };
        for a in h.axis_points() {
            chart_matches_levi(&m, &Point::Ambient(a));
        }
    }
    for s in ["bundle:d=1,c=0", "bundle:d=1,c=3"] {
        let m = model(s);
        for chart in [Chart::North, Chart::South] {
            chart_matches_levi(&m, &Point::Bundle { chart, z: c(0.0, 0.0), theta: 0.0 });
        }
    }
}

#[test]
fn round_chart_is_explicit() {
    let m = model("round");
    let chart = m.brt_chart(&Point::Ambient(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
    assert_relative_eq!(chart.lambdas[0], 1.0, max_relative = 1e-6);
    for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.9, -1.1)] {
        let expect = 0.5 * (1.0 + 2.0 * z.norm_sqr()).ln();
        assert_relative_eq!(chart.phi(&[z]), expect, max_relative = 1e-6);
    }
    assert_eq!(chart.delta, PI);
}

#[test]
fn ellipsoid_exceptional_chart() {
    let m = model("ellipsoid");
    let anchor = Point::Ambient(vec![c(0.0, 0.0), c(0.5f64.sqrt(), 0.0)]);
    let chart = m.brt_chart(&anchor).unwrap();
    assert_relative_eq!(chart.lambdas[0], 0.5, max_relative = 1e-6);
    assert_relative_eq!(chart.delta, PI / 2.0);
}

#[test]
fn undesignated_anchors_are_rejected() {
    let m = model("ellipsoid");
    let p = common::point(&m, 5);
    assert!(matches!(m.brt_chart(&p), Err(Error::UndesignatedAnchor(_))));
    let b = model("bundle:d=1,c=3");
    let q = Point::Bundle { chart: Chart::North, z: c(0.3, 0.1), theta: 0.0 };
    assert!(matches!(b.brt_chart(&q), Err(Error::UndesignatedAnchor(_))));
}

#[test]
fn quadratic_chart_is_exact() {
    let chart = BrtChart::quadratic(vec![-1.0, 2.0]);
    let z = [c(0.3, 0.4), c(-0.2, 0.1)];
    assert_relative_eq!(chart.phi(&z), -0.25 + 2.0 * 0.05, epsilon = 1e-15);
    assert_eq!(chart.density(&z), 1.0);
}
