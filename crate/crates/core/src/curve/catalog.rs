//! Named analytic curves and curvature profiles.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use super::{CurveKind, CurveSpec, IntrinsicCurve};
use crate::error::{Error, Result};
use crate::geom::Vec2;

fn kind(name: &str, params: &[(&str, f64)]) -> CurveKind {
    CurveKind::Catalog {
        name: name.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

/// Circle of radius `r` centered at the origin, t in (0, 2pi).
pub fn circle(r: f64) -> Result<CurveSpec> {
    let r = positive("r", r)?;
    CurveSpec::parametric(
        kind("circle", &[("r", r)]),
        (0.0, 2.0 * PI),
        move |t| Vec2::from_angle(t) * r,
        move |t| Vec2::from_angle(t).perp() * r,
        move |t| -Vec2::from_angle(t) * r,
        move |t| -Vec2::from_angle(t).perp() * r,
    )
}

/// Ellipse (a cos t, b sin t); the default interval (-pi/4, 7pi/4) keeps all
/// four vertices interior.
pub fn ellipse(a: f64, b: f64) -> Result<CurveSpec> {
    let (a, b) = (positive("a", a)?, positive("b", b)?);
    CurveSpec::parametric(
        kind("ellipse", &[("a", a), ("b", b)]),
        (-FRAC_PI_4, 2.0 * PI - FRAC_PI_4),
        move |t| Vec2::new(a * t.cos(), b * t.sin()),
        move |t| Vec2::new(-a * t.sin(), b * t.cos()),
        move |t| Vec2::new(-a * t.cos(), -b * t.sin()),
        move |t| Vec2::new(a * t.sin(), -b * t.cos()),
    )
}

/// Parabola (t, t^2), t in (-1, 1).
pub fn parabola() -> Result<CurveSpec> {
    CurveSpec::parametric(
        kind("parabola", &[]),
        (-1.0, 1.0),
        |t| Vec2::new(t, t * t),
        |t| Vec2::new(1.0, 2.0 * t),
        |_| Vec2::new(0.0, 2.0),
        |_| Vec2::ZERO,
    )
}

/// Logarithmic spiral e^{k theta} (cos theta, sin theta), theta in (-pi/2, pi).
pub fn logarithmic_spiral(k: f64) -> Result<CurveSpec> {
    if !(k.is_finite() && k != 0.0) {
        return Err(Error::InvalidArgument(format!("spiral growth k must be nonzero, got {k}")));
    }
    // d/dtheta acts as multiplication by (k + J), J the quarter turn.
    let rot = move |a: f64, b: f64, t: f64| {
        let u = Vec2::from_angle(t);
        (u * a + u.perp() * b) * (k * t).exp()
    };
    CurveSpec::parametric(
        kind("logarithmic_spiral", &[("k", k)]),
        (-PI / 2.0, PI),
        move |t| rot(1.0, 0.0, t),
        move |t| rot(k, 1.0, t),
        move |t| rot(k * k - 1.0, 2.0 * k, t),
        move |t| rot(k * k * k - 3.0 * k, 3.0 * k * k - 1.0, t),
    )
}

/// Cycloid (t - sin t, 1 - cos t) away from its cusps, t in (0.2, 2pi - 0.2).
pub fn cycloid() -> Result<CurveSpec> {
    CurveSpec::parametric(
        kind("cycloid", &[]),
        (0.2, 2.0 * PI - 0.2),
        |t| Vec2::new(t - t.sin(), 1.0 - t.cos()),
        |t| Vec2::new(1.0 - t.cos(), t.sin()),
        |t| Vec2::new(t.sin(), t.cos()),
        |t| Vec2::new(t.cos(), -t.sin()),
    )
}

/// Limaçon r(theta) = 1 + 2 cos theta over (theta0, theta1).
pub fn limacon(theta0: f64, theta1: f64) -> Result<CurveSpec> {
    CurveSpec::parametric(
        kind("limacon", &[("t0", theta0), ("t1", theta1)]),
        (theta0, theta1),
        |t| Vec2::new(t.cos() + 1.0 + (2.0 * t).cos(), t.sin() + (2.0 * t).sin()),
        |t| Vec2::new(-t.sin() - 2.0 * (2.0 * t).sin(), t.cos() + 2.0 * (2.0 * t).cos()),
        |t| Vec2::new(-t.cos() - 4.0 * (2.0 * t).cos(), -t.sin() - 4.0 * (2.0 * t).sin()),
        |t| Vec2::new(t.sin() + 8.0 * (2.0 * t).sin(), -t.cos() - 8.0 * (2.0 * t).cos()),
    )
}

/// The limaçon arc over (-3pi/4, 3pi/4), which has a double point at the origin.
pub fn limacon_default() -> Result<CurveSpec> {
    limacon(-3.0 * FRAC_PI_4, 3.0 * FRAC_PI_4)
}

/// Lemniscate-like figure eight (sin 2t, sin t), t in (-1.2, 4.3); crosses
/// itself once at the origin (t = 0 and t = pi).
pub fn figure_eight() -> Result<CurveSpec> {
    CurveSpec::parametric(
        kind("figure_eight", &[]),
        (-1.2, 4.3),
        |t| Vec2::new((2.0 * t).sin(), t.sin()),
        |t| Vec2::new(2.0 * (2.0 * t).cos(), t.cos()),
        |t| Vec2::new(-4.0 * (2.0 * t).sin(), -t.sin()),
        |t| Vec2::new(-8.0 * (2.0 * t).cos(), -t.cos()),
    )
}

/// Default arclength interval of the curvature profiles.
pub const PROFILE_INTERVAL: (f64, f64) = (-0.5, 0.5);

/// Curve with radius of curvature R(s) = r0 + c s^m, integrated from its curvature.
pub fn radius_profile(m: u32, c: f64, r0: f64) -> Result<CurveSpec> {
    if m == 0 {
        return Err(Error::InvalidArgument("profile order m must be at least 1".into()));
    }
    if !(c.is_finite() && r0.is_finite()) {
        return Err(Error::InvalidArgument("profile coefficients must be finite".into()));
    }
    let (sa, sb) = PROFILE_INTERVAL;
    let extreme = [sa, 0.0, sb].map(|s| r0 + c * s.powi(m as i32));
    // R must keep one sign: check the end points and, for even m, the vertex.
    if extreme.iter().any(|&r| r == 0.0) || extreme.iter().any(|&r| r.signum() != r0.signum()) {
        return Err(Error::InvalidArgument(format!(
            "radius profile r0 + c s^{m} vanishes on {PROFILE_INTERVAL:?}"
        )));
    }
    let mi = m as i32;
    let mf = f64::from(m);
    let radius = move |s: f64| r0 + c * s.powi(mi);
    let d1 = move |s: f64| c * mf * s.powi(mi - 1);
    let d2 = move |s: f64| if m >= 2 { c * mf * (mf - 1.0) * s.powi(mi - 2) } else { 0.0 };
    let curve = profile_curve(radius, d1, d2);
    CurveSpec::intrinsic(kind("radius_profile", &[("m", mf), ("c", c), ("R0", r0)]), PROFILE_INTERVAL, curve)
}

/// Curve with R(s) = r0 + sign(s) exp(-1/s^2): R' vanishes to infinite order at 0.
pub fn flat_profile(r0: f64) -> Result<CurveSpec> {
    let r0 = positive("R0", r0)?;
    // Below this |s| every term underflows to zero anyway.
    const CUTOFF: f64 = 0.03;
    let radius = move |s: f64| {
        if s.abs() < CUTOFF {
            r0
        } else {
            r0 + s.signum() * (-1.0 / (s * s)).exp()
        }
    };
    let d1 = move |s: f64| {
        if s.abs() < CUTOFF {
            0.0
        } else {
            2.0 / s.abs().powi(3) * (-1.0 / (s * s)).exp()
        }
    };
    let d2 = move |s: f64| {
        if s.abs() < CUTOFF {
            0.0
        } else {
            s.signum() * (4.0 / s.powi(6) - 6.0 / s.powi(4)) * (-1.0 / (s * s)).exp()
        }
    };
    let curve = profile_curve(radius, d1, d2);
    CurveSpec::intrinsic(kind("flat_profile", &[("R0", r0)]), PROFILE_INTERVAL, curve)
}

/// Curvature data for a prescribed radius function and its first two derivatives.
fn profile_curve(
    radius: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
    d1: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
    d2: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
) -> IntrinsicCurve {
    IntrinsicCurve {
        kappa: Arc::new(move |s| 1.0 / radius(s)),
        kappa_prime: Some(Arc::new(move |s| {
            let r = radius(s);
            -d1(s) / (r * r)
        })),
        kappa_second: Some(Arc::new(move |s| {
            let r = radius(s);
            let r1 = d1(s);
            -d2(s) / (r * r) + 2.0 * r1 * r1 / (r * r * r)
        })),
        start: Vec2::ZERO,
        start_angle: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_catalog_curves_validate() {
        circle(1.0).unwrap();
        ellipse(2.0, 1.0).unwrap();
        parabola().unwrap();
        logarithmic_spiral(1.0).unwrap();
        cycloid().unwrap();
        limacon_default().unwrap();
        figure_eight().unwrap();
        radius_profile(3, 1.0, 1.0).unwrap();
        flat_profile(1.0).unwrap();
    }

    #[test]
    fn bad_parameters() {
        assert!(circle(0.0).is_err());
        assert!(ellipse(-1.0, 1.0).is_err());
        assert!(logarithmic_spiral(0.0).is_err());
        assert!(radius_profile(0, 1.0, 1.0).is_err());
        // 1 - 8 s^3 vanishes at s = 0.5.
        assert!(radius_profile(3, 8.0, 1.0).is_err());
    }

    #[test]
    fn limacon_at_zero() {
        let p = limacon_default().unwrap().position(0.0).unwrap();
        assert!((p.x - 3.0).abs() < 1e-15 && p.y.abs() < 1e-15);
    }

    #[test]
    fn kind_display() {
        assert_eq!(ellipse(2.0, 1.0).unwrap().kind().to_string(), "ellipse:a=2,b=1");
    }
}
