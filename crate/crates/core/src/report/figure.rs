//! The limaçon and its involute: the example curve whose evolute has a double point.

use std::f64::consts::PI;

use crate::checks::{default_separation, double_points, Crossing};
use crate::curve::{catalog, reparametrize_by_arclength, SamplingOptions};
use crate::error::{Error, Result};
use crate::evolute::{involute_points, InvoluteParams};
use crate::geom::Vec2;
use crate::quadrature::{simpson, Tolerance};
use crate::report::emit::{FigureSpec, Marker, Polyline, Style};

/// Largest accepted distance between the two involute constructions.
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Figure1 {
    pub spec: FigureSpec,
    /// Involute constant for arclength measured from the start of the arc.
    pub c: f64,
    pub max_deviation: f64,
    pub double_point: Crossing,
}

fn speed(u: f64) -> f64 {
    (5.0 + 4.0 * u.cos()).sqrt()
}

/// The closed-form involute, with I(theta) = int_{-pi}^{theta} sqrt(5 + 4 cos u) du.
fn explicit_involute(theta: f64, integral: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    let r = 1.0 + 2.0 * c;
    let w = integral / speed(theta);
    Vec2::new(c * r + s * (1.0 + 4.0 * c) * w, s * r + (-4.0 * c * c - c + 2.0) * w)
}

fn integral(a: f64, b: f64) -> Result<f64> {
    simpson(speed, a, b, Tolerance::absolute(1e-13)).ok_or(Error::Quadrature { a, b })
}

/// Builds the figure and checks that the explicit and generic involutes agree
/// and that the limaçon has its single double point at the origin.
pub fn figure1() -> Result<Figure1> {
    let spec = catalog::limacon_default()?;
    let (theta0, _) = spec.interval();
    let ac = reparametrize_by_arclength(&spec, SamplingOptions::default())?;
    let thetas = ac.params().ok_or_else(|| Error::InvalidCurve("limaçon lost its parameter".into()))?;

    let i0 = integral(-PI, theta0)?;
    let mut explicit = Vec::with_capacity(thetas.len());
    let mut acc = i0;
    let mut prev = theta0;
    for &t in thetas {
        acc += integral(prev, t)?;
        prev = t;
        explicit.push(explicit_involute(t, acc));
    }

    let c = -i0;
    let generic = involute_points(&ac, InvoluteParams::new(c))?;
    let max_deviation = explicit.iter().zip(&generic).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max);
    if !(max_deviation <= AGREEMENT_TOL) {
        return Err(Error::InvalidCurve(format!(
            "explicit and generic involutes differ by {max_deviation:e} (> {AGREEMENT_TOL:e})"
        )));
    }

    let report = double_points(&ac, default_separation(&ac))?;
    let [double_point] = <[Crossing; 1]>::try_from(report.crossings).map_err(|c| {
        Error::InvalidCurve(format!("expected one double point on the limaçon, found {}", c.len()))
    })?;
    if !(double_point.point.norm() <= AGREEMENT_TOL) {
        return Err(Error::InvalidCurve(format!("double point at {:?}, expected the origin", double_point.point)));
    }

    let spec = FigureSpec {
        curves: vec![
            Polyline { label: "limacon".into(), points: ac.points().to_vec(), style: Style::solid("#1f4e9c", 2.0) },
            Polyline { label: "involute-explicit".into(), points: explicit, style: Style::solid("#b23a2b", 2.0) },
            Polyline { label: "involute-generic".into(), points: generic, style: Style::dashed("#222222", 1.0) },
        ],
        markers: vec![Marker { label: "double-point".into(), at: double_point.point, color: "#000000".into() }],
    };
    Ok(Figure1 { spec, c, max_deviation, double_point })
}
