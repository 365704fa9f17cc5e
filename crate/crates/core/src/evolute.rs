//! Evolutes, involutes, and the evolute's intrinsic quantities.
//!
//! The evolute of an arclength curve is the locus of its centers of curvature,
//! `e(s) = p(s) + R(s) n(s)`. Its tangent is `R'(s) n(s)`, so wherever R is
//! strictly monotone the evolute is regular, its arclength is the variation of
//! R, and its curvature is `-kappa^3 / kappa'`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::curve::{node_count, ArcCurve, Nodes};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::quadrature::{simpson, Tolerance};

/// Zeros of R' are localized to this width.
pub const ZERO_TOLERANCE: f64 = 1e-10;
/// Minimum |kappa'| for the evolute curvature to be defined.
pub const MIN_KAPPA_PRIME: f64 = 1e-9;
/// Minimum involute speed |(c - s~) kappa| accepted.
pub const MIN_INVOLUTE_SPEED: f64 = 1e-9;

/// The evolute of a parent curve, sampled on the parent's node grid.
#[derive(Debug, Clone)]
pub struct EvoluteCurve<'a> {
    parent: &'a ArcCurve,
    points: Vec<Vec2>,
    radius: Vec<f64>,
    radius_prime: Vec<f64>,
    s_tilde: Vec<f64>,
    singular_set: Vec<f64>,
}

/// Builds the evolute `p + R n` node-wise and locates the zeros of R'.
pub fn evolute(ac: &ArcCurve) -> Result<EvoluteCurve<'_>> {
    ac.require_nonzero_curvature()?;
    let n = ac.len();
    let radius: Vec<f64> = (0..n).map(|i| 1.0 / ac.kappa()[i]).collect();
    let radius_prime = ac.radius_prime_nodes()?;
    let points = (0..n).map(|i| ac.points()[i] + ac.normal(i) * radius[i]).collect();
    let singular_set = radius_prime_sign_changes(ac, &radius_prime)?;

    // s~ = sigma R(s_0) + accumulated variation of R, where sigma is the
    // initial direction of R. On a monotone curve this is exactly sigma R(s).
    let sigma = radius_prime.iter().find(|v| **v != 0.0).map_or(1.0, |v| v.signum());
    let mut s_tilde = Vec::with_capacity(n);
    s_tilde.push(sigma * radius[0]);
    let mut zeros = singular_set.iter().peekable();
    for i in 1..n {
        let (lo, hi) = (ac.s()[i - 1], ac.s()[i]);
        let mut prev_r = radius[i - 1];
        let mut step = 0.0;
        while let Some(&&z) = zeros.peek() {
            if z > hi {
                break;
            }
            zeros.next();
            if z >= lo {
                let rz = ac.radius_at(z)?;
                step += (rz - prev_r).abs();
                prev_r = rz;
            }
        }
        step += (radius[i] - prev_r).abs();
        s_tilde.push(s_tilde[i - 1] + step);
    }

    Ok(EvoluteCurve { parent: ac, points, radius, radius_prime, s_tilde, singular_set })
}

/// Sign changes of R' on the node grid, each refined by bisection on the
/// interpolated R' to a bracket of width [`ZERO_TOLERANCE`].
pub(crate) fn radius_prime_sign_changes(ac: &ArcCurve, radius_prime: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &v) in radius_prime.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if let Some(j) = last {
            if radius_prime[j].signum() != v.signum() {
                out.push(bisect_zero(|s| ac.radius_prime_at(s), ac.s()[j], ac.s()[i])?);
            }
        }
        last = Some(i);
    }
    Ok(out)
}

/// Bisection for a sign change of `f` inside `[a, b]`.
pub(crate) fn bisect_zero(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    while b - a > ZERO_TOLERANCE {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

impl<'a> EvoluteCurve<'a> {
    pub fn parent(&self) -> &'a ArcCurve {
        self.parent
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// Signed radius of curvature of the parent at each node.
    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    /// dR/ds at each node.
    pub fn radius_prime(&self) -> &[f64] {
        &self.radius_prime
    }

    /// Evolute arclength at each node.
    pub fn s_tilde(&self) -> &[f64] {
        &self.s_tilde
    }

    /// Parent arclengths where R' changes sign (cusps of the evolute).
    pub fn singular_set(&self) -> &[f64] {
        &self.singular_set
    }

    /// Unit tangent of the evolute: +n where R increases, -n where it
    /// decreases, `None` where R' vanishes.
    pub fn tangent(&self, i: usize) -> Option<Vec2> {
        let rp = self.radius_prime[i];
        (rp != 0.0).then(|| self.parent.normal(i) * rp.signum())
    }

    /// Evolute point at an arbitrary parent arclength, from the parent interpolant.
    pub fn point_at(&self, s: f64) -> Result<Vec2> {
        self.parent.eval_frame(s)?.center(self.parent.kappa_min())
    }

    /// Chord direction through the neighbours of interior node `i`.
    pub fn polyline_tangent(&self, i: usize) -> Option<Vec2> {
        if i == 0 || i + 1 >= self.len() {
            return None;
        }
        let d = self.points[i + 1] - self.points[i - 1];
        (d.norm() > 0.0).then(|| d.normalized())
    }

    /// Menger curvature of the evolute polyline at interior node `i`, signed
    /// with respect to increasing evolute arclength.
    pub fn polyline_curvature(&self, i: usize) -> Option<f64> {
        if i == 0 || i + 1 >= self.len() || self.radius_prime[i] == 0.0 {
            return None;
        }
        let (a, b, c) = (self.points[i - 1], self.points[i], self.points[i + 1]);
        let (ab, bc, ca) = (b - a, c - b, a - c);
        let denom = ab.norm() * bc.norm() * ca.norm();
        if denom == 0.0 {
            return None;
        }
        Some(2.0 * ab.cross(bc) / denom * self.radius_prime[i].signum())
    }

    /// Polyline length of the evolute between nodes `i` and `j`.
    pub fn polyline_length(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        self.points[i..=j].windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// The evolute as an arclength curve with s~ = sigma R, sigma the sign of R'.
    ///
    /// Only defined when R is strictly monotone on the whole parent.
    pub fn to_arc_curve(&self) -> Result<ArcCurve> {
        if let Some(&s) = self.singular_set.first() {
            return Err(Error::SingularEvolute { s });
        }
        let sigma = self.radius_prime[0].signum();
        if let Some(i) = self.radius_prime.iter().position(|v| v.signum() != sigma || *v == 0.0) {
            return Err(Error::SingularEvolute { s: self.parent.s()[i] });
        }
        let n = self.len();
        let ac = self.parent;
        let mut nodes = Nodes {
            s: self.radius.iter().map(|r| sigma * r).collect(),
            points: self.points.clone(),
            phi: ac.phi().iter().map(|p| p + sigma * FRAC_PI_2).collect(),
            kappa: (0..n).map(|i| sigma * ac.kappa()[i] / self.radius_prime[i]).collect(),
            kappa_prime: None,
            kappa_second: None,
            params: Some((ac.s().to_vec(), self.radius_prime.iter().map(|v| 1.0 / v.abs()).collect())),
        };
        if nodes.s.windows(2).any(|w| !(w[1] > w[0])) {
            // Monotone at the nodes but flat below float resolution.
            let i = nodes.s.windows(2).position(|w| !(w[1] > w[0])).unwrap_or(0);
            return Err(Error::SingularEvolute { s: ac.s()[i] });
        }
        nodes.kappa_prime = None;
        ArcCurve::from_nodes(nodes, ac.options())
    }
}

/// Traversal direction of the string-unwinding parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Forward,
    Backward,
}

/// Parameters of the involute `p(u) + (c - u) T(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvoluteParams {
    /// String-length constant; must lie outside the curve's arclength interval.
    pub c: f64,
    pub orientation: Orientation,
}

impl InvoluteParams {
    pub fn new(c: f64) -> Self {
        Self { c, orientation: Orientation::Forward }
    }
}

fn check_involute(ac: &ArcCurve, c: f64) -> Result<()> {
    let (lo, hi) = ac.s_range();
    if !c.is_finite() || (c >= lo && c <= hi) {
        return Err(Error::InvoluteConstantInside { c, lo, hi });
    }
    let mut prev: Option<f64> = None;
    for i in 0..ac.len() {
        let s = ac.s()[i];
        let w = (c - s) * ac.kappa()[i];
        if !(w.abs() >= MIN_INVOLUTE_SPEED) {
            return Err(Error::SingularInvolute { s_tilde: s, speed: w.abs() });
        }
        if let Some(p) = prev {
            if p.signum() != w.signum() {
                // The parent has an inflection between these nodes.
                let z = bisect_zero(|u| ac.kappa_at(u), ac.s()[i - 1], s)?;
                return Err(Error::SingularInvolute { s_tilde: z, speed: 0.0 });
            }
        }
        prev = Some(w);
    }
    Ok(())
}

fn oriented(ac: &ArcCurve, params: InvoluteParams) -> std::borrow::Cow<'_, ArcCurve> {
    match params.orientation {
        Orientation::Forward => std::borrow::Cow::Borrowed(ac),
        Orientation::Backward => std::borrow::Cow::Owned(ac.reversed()),
    }
}

/// Involute points evaluated at the nodes of `ac` (no resampling).
pub fn involute_points(ac: &ArcCurve, params: InvoluteParams) -> Result<Vec<Vec2>> {
    let ac = oriented(ac, params);
    check_involute(&ac, params.c)?;
    Ok((0..ac.len()).map(|i| ac.points()[i] + ac.tangent(i) * (params.c - ac.s()[i])).collect())
}

/// The involute `u -> p(u) + (c - u) T(u)`, resampled by its own arclength.
///
/// Its radius of curvature is `c - u` up to sign, so the result always has
/// strictly monotone curvature.
pub fn involute(ac: &ArcCurve, params: InvoluteParams) -> Result<ArcCurve> {
    let ac = oriented(ac, params);
    let ac = ac.as_ref();
    let c = params.c;
    check_involute(ac, c)?;

    let speed = |u: f64| -> f64 {
        let k = ac.kappa_at(u).unwrap_or(f64::NAN);
        ((c - u) * k).abs()
    };
    let s = ac.s();
    let mut cumulative = vec![0.0; s.len()];
    for i in 1..s.len() {
        let piece =
            simpson(speed, s[i - 1], s[i], Tolerance::absolute(1e-13)).ok_or(Error::Quadrature { a: s[i - 1], b: s[i] })?;
        cumulative[i] = cumulative[i - 1] + piece;
    }
    let total = cumulative[s.len() - 1];
    let n = node_count(ac.options().density, total);
    let h = total / n as f64;

    let mut us = Vec::with_capacity(n + 1);
    us.push(s[0]);
    for j in 1..n {
        let target = h * j as f64;
        let k = cumulative.partition_point(|&v| v <= target).saturating_sub(1).min(s.len() - 2);
        us.push(invert(&speed, s[k], s[k + 1], target - cumulative[k])?);
    }
    us.push(s[s.len() - 1]);

    let mut nodes = Nodes::default();
    let mut dt = Vec::with_capacity(n + 1);
    let mut kp = Vec::with_capacity(n + 1);
    for (j, &u) in us.iter().enumerate() {
        let f = ac.eval_frame(u)?;
        let w = (c - u) * f.kappa;
        let sw = w.signum();
        nodes.s.push(if j == n { total } else { h * j as f64 });
        nodes.points.push(ac.point_at(u)? + f.tangent * (c - u));
        nodes.phi.push(f.phi + sw * FRAC_PI_2);
        nodes.kappa.push(f.kappa.signum() / (c - u).abs());
        kp.push(f.kappa.signum() * (c - u).signum() / ((c - u) * (c - u) * w.abs()));
        dt.push(1.0 / w.abs());
    }
    nodes.kappa_prime = Some(kp);
    nodes.params = Some((us, dt));
    ArcCurve::from_nodes(nodes, ac.options())
}

fn invert(speed: &dyn Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> Result<f64> {
    let piece = |t: f64| simpson(speed, lo, t, Tolerance::absolute(1e-15)).ok_or(Error::Quadrature { a: lo, b: t });
    let full = piece(hi)?;
    let (mut a, mut b) = (lo, hi);
    let mut t = lo + (hi - lo) * (target / full).clamp(0.0, 1.0);
    for _ in 0..100 {
        let g = piece(t)? - target;
        if g.abs() <= 1e-14 * (1.0 + target.abs()) {
            break;
        }
        if g > 0.0 {
            b = t;
        } else {
            a = t;
        }
        let newton = t - g / speed(t);
        t = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if b - a <= f64::EPSILON * (1.0 + t.abs()) {
            break;
        }
    }
    Ok(t)
}

/// Signed curvature of the evolute at parent arclength `s`: `-kappa^3 / kappa'`,
/// taken with respect to increasing evolute arclength.
pub fn evolute_curvature(ac: &ArcCurve, s: f64) -> Result<f64> {
    let f = ac.eval_frame(s)?;
    f.radius(ac.kappa_min())?;
    if !(f.kappa_prime.abs() >= MIN_KAPPA_PRIME) {
        return Err(Error::VanishingKappaPrime { s });
    }
    Ok(-f.kappa.powi(3) / f.kappa_prime)
}

/// Norm of the difference between the two sides of
/// `e(s2) - e(s1) = int_{s1}^{s2} (R(s) - R(s2)) / R(s) T(s) ds + (R(s2) - R(s1)) n(s1)`.
pub fn verify_increvol_identity(ac: &ArcCurve, s1: f64, s2: f64) -> Result<f64> {
    if !(s1 < s2) {
        return Err(Error::InvalidArgument(format!("need s1 < s2, got {s1} >= {s2}")));
    }
    ac.require_nonzero_curvature_on(s1, s2)?;
    let kmin = ac.kappa_min();
    let f1 = ac.eval_frame(s1)?;
    let f2 = ac.eval_frame(s2)?;
    let (r1, r2) = (f1.radius(kmin)?, f2.radius(kmin)?);
    let lhs = f2.center(kmin)? - f1.center(kmin)?;

    let integrand = |s: f64| -> Vec2 {
        match ac.eval_frame(s) {
            Ok(f) => f.tangent * (1.0 - r2 * f.kappa),
            Err(_) => Vec2::new(f64::NAN, f64::NAN),
        }
    };
    let integral =
        simpson(integrand, s1, s2, Tolerance::absolute(1e-10)).ok_or(Error::Quadrature { a: s1, b: s2 })?;
    let rhs = integral + f1.normal * (r2 - r1);
    Ok((lhs - rhs).norm())
}
