use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use proptest::prelude::*;

use evolute_kit::curve::{
    arc_length, catalog, curve_from_curvature, reparametrize_by_arclength, ArcCurve, CurveSpec, SamplingOptions,
};
use evolute_kit::geom::{diameter, hausdorff};
use evolute_kit::quadrature::{simpson, Tolerance};
use evolute_kit::{Error, Vec2};

fn arc(spec: &CurveSpec) -> ArcCurve {
    reparametrize_by_arclength(spec, SamplingOptions::default()).unwrap()
}

#[test]
fn circle_circumference() {
    let c = catalog::circle(1.0).unwrap();
    assert!((arc_length(&c, 0.0, 2.0 * PI).unwrap() - 2.0 * PI).abs() <= 1e-9);
}

#[test]
fn limacon_length_matches_speed_integral() {
    let spec = catalog::limacon_default().unwrap();
    let (a, b) = spec.interval();
    let oracle = simpson(|u: f64| (5.0 + 4.0 * u.cos()).sqrt(), a, b, Tolerance::absolute(1e-12)).unwrap();
    let l = arc_length(&spec, a, b).unwrap();
    assert!((l - oracle).abs() <= 1e-9 * (1.0 + (b - a)), "{l} vs {oracle}");
}

#[test]
fn curvature_oracles() {
    let ac = arc(&catalog::circle(2.0).unwrap());
    assert!(ac.kappa().iter().all(|k| (k - 0.5).abs() <= 1e-6));
    assert!(ac.radii().iter().all(|r| (r.unwrap() - 2.0).abs() <= 1e-6));

    let spec = catalog::ellipse(2.0, 1.0).unwrap();
    let s0 = arc_length(&spec, spec.interval().0, 0.0).unwrap();
    let f = arc(&spec).eval_frame(s0).unwrap();
    assert!(f.point.distance(Vec2::new(2.0, 0.0)) < 1e-9);
    assert!((f.kappa - 2.0).abs() <= 1e-5);

    let spec = catalog::logarithmic_spiral(1.0).unwrap();
    let s0 = arc_length(&spec, spec.interval().0, 0.0).unwrap();
    let k = arc(&spec).eval_frame(s0).unwrap().kappa;
    assert!((k - 1.0 / 2f64.sqrt()).abs() <= 1e-5);

    let spec = catalog::parabola().unwrap();
    let s0 = arc_length(&spec, -1.0, 0.0).unwrap();
    let ac = arc(&spec);
    let f = ac.eval_frame(s0).unwrap();
    assert!((f.kappa - 2.0).abs() <= 1e-6);
    assert!(f.normal.distance(Vec2::new(0.0, 1.0)) < 1e-9);
    // Interior nodes against kappa = 2 / (1 + 4 t^2)^{3/2}.
    let t = ac.params().unwrap();
    for (i, &t) in t.iter().enumerate().step_by(17) {
        assert!((ac.kappa()[i] - 2.0 / (1.0 + 4.0 * t * t).powf(1.5)).abs() <= 1e-6);
    }
}

#[test]
fn frame_at_circle_start() {
    let ac = arc(&catalog::circle(1.0).unwrap());
    let f = ac.eval_frame(0.0).unwrap();
    assert!(f.point.distance(Vec2::new(1.0, 0.0)) < 1e-12);
    assert!(f.tangent.distance(Vec2::new(0.0, 1.0)) < 1e-12);
    assert!(f.normal.distance(Vec2::new(-1.0, 0.0)) < 1e-12);
    assert!((f.kappa - 1.0).abs() < 1e-9);
    assert!(matches!(ac.eval_frame(10.0), Err(Error::OutOfRange { .. })));
}

#[test]
fn limacon_point_at_zero() {
    let spec = catalog::limacon_default().unwrap();
    let s0 = arc_length(&spec, spec.interval().0, 0.0).unwrap();
    let p = arc(&spec).eval_frame(s0).unwrap().point;
    assert!(p.distance(Vec2::new(3.0, 0.0)) < 1e-9);
}

#[test]
fn intrinsic_examples() {
    let ac = curve_from_curvature(|_| 0.5, (0.0, 4.0 * PI), Vec2::new(2.0, 0.0), FRAC_PI_2, SamplingOptions::default())
        .unwrap();
    let worst = ac.points().iter().map(|p| (p.norm() - 2.0).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-6);

    let ac = curve_from_curvature(
        |s| 1.0 / (1.0 + s * s * s),
        (-0.5, 0.5),
        Vec2::ZERO,
        0.0,
        SamplingOptions::default(),
    )
    .unwrap();
    for (i, &s) in ac.s().iter().enumerate() {
        assert!((ac.node_radius(i).unwrap() - (1.0 + s * s * s)).abs() <= 1e-5);
    }

    assert!(matches!(
        curve_from_curvature(|s| 1.0 / s, (-0.5, 0.5), Vec2::ZERO, 0.0, SamplingOptions::default()),
        Err(Error::NonFiniteCurvature { .. })
    ));
}

fn catalog_curves() -> Vec<CurveSpec> {
    vec![
        catalog::circle(1.5).unwrap(),
        catalog::ellipse(2.0, 1.0).unwrap(),
        catalog::parabola().unwrap(),
        catalog::logarithmic_spiral(1.0).unwrap(),
        catalog::cycloid().unwrap(),
        catalog::limacon_default().unwrap(),
        catalog::figure_eight().unwrap(),
        catalog::radius_profile(3, 1.0, 1.0).unwrap(),
    ]
}

#[test]
fn arc_curve_invariants() {
    for spec in catalog_curves() {
        let ac = arc(&spec);
        let name = spec.kind().to_string();
        let n = ac.len();
        for i in 1..n - 1 {
            let s = ac.s()[i];
            assert!((ac.position_jet(s).unwrap().d1.norm() - 1.0).abs() <= 1e-6, "{name}: speed at {s}");
            assert!((ac.phi()[i + 1] - ac.phi()[i]).abs() < PI, "{name}: lift");
            let f = ac.node_frame(i);
            assert!(f.normal.distance(Vec2::new(-f.phi.sin(), f.phi.cos())) < 1e-14);
            if let Some(r) = ac.radii()[i] {
                assert!((r * ac.kappa()[i] - 1.0).abs() < 1e-12);
            }
            // Turning over two cells against Simpson's rule on the stored curvature.
            let k = ac.kappa();
            let dphi = ac.phi()[i + 1] - ac.phi()[i - 1];
            let simpson = (ac.s()[i + 1] - ac.s()[i - 1]) * (k[i - 1] + 4.0 * k[i] + k[i + 1]) / 6.0;
            assert!((dphi - simpson).abs() <= 1e-3 * dphi.abs() + 1e-9, "{name}: turning at {s}: {dphi} vs {simpson}");
        }
    }
}

#[test]
fn intrinsic_round_trip() {
    for spec in [catalog::ellipse(2.0, 1.0).unwrap(), catalog::logarithmic_spiral(1.0).unwrap()] {
        let x = Arc::new(arc(&spec));
        let f0 = x.node_frame(0);
        let xk = Arc::clone(&x);
        let y = curve_from_curvature(move |s| xk.kappa_at(s).unwrap(), x.s_range(), f0.point, f0.phi, x.options())
            .unwrap();
        let d = hausdorff(y.points(), x.points());
        assert!(d <= 1e-5 * diameter(x.points()), "{}: {d}", spec.kind());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arc_length_is_antisymmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 0.2f64..1.5) {
        let spec = catalog::logarithmic_spiral(k).unwrap();
        let (lo, hi) = spec.interval();
        let (a, b) = (a.clamp(lo, hi), b.clamp(lo, hi));
        let ab = arc_length(&spec, a, b).unwrap();
        let ba = arc_length(&spec, b, a).unwrap();
        prop_assert!((ab + ba).abs() <= 1e-12 * (1.0 + ab.abs()));
        prop_assert!(ab * (b - a) >= 0.0);
    }

    #[test]
    fn ellipse_curvature_matches_closed_form(a in 0.5f64..3.0, b in 0.5f64..3.0, frac in 0.05f64..0.95) {
        let spec = catalog::ellipse(a, b).unwrap();
        let (t0, t1) = spec.interval();
        let t = t0 + frac * (t1 - t0);
        let ac = reparametrize_by_arclength(&spec, SamplingOptions::default()).unwrap();
        let s = arc_length(&spec, t0, t).unwrap();
        let exact = a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5);
        let k = ac.kappa_at(s).unwrap();
        prop_assert!((k - exact).abs() <= 1e-5 * (1.0 + exact), "{} vs {}", k, exact);
    }

    #[test]
    fn lift_steps_stay_below_pi(r in 0.05f64..5.0, density in 16.0f64..256.0) {
        let ac = reparametrize_by_arclength(&catalog::circle(r).unwrap(), SamplingOptions::with_density(density)).unwrap();
        prop_assert!(ac.phi().windows(2).all(|w| (w[1] - w[0]).abs() < PI));
        prop_assert!((ac.length() - 2.0 * PI * r).abs() <= 1e-8 * (1.0 + r));
    }
}
