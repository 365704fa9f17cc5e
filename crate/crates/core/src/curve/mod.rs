//! Curve representation, arclength reparametrization and curvature.
//!
//! Every downstream module consumes [`ArcCurve`]; [`CurveSpec`] is only the
//! input form (analytic, sampled, or prescribed by its curvature).

mod arc;
pub mod catalog;

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

pub use arc::{ArcCurve, Frame, Nodes, SamplingOptions, DEFAULT_KAPPA_MIN, MAX_LIFT_STEP};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::interp::CubicSpline;
use crate::quadrature::{simpson, Tolerance};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type PointFn = Arc<dyn Fn(f64) -> Vec2 + Send + Sync>;

/// Minimum speed accepted by [`reparametrize_by_arclength`].
pub const MIN_REGULAR_SPEED: f64 = 1e-9;
/// Minimum speed accepted by [`arc_length`].
pub const MIN_PROBED_SPEED: f64 = 1e-12;

const PROBE_PANELS: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    Catalog { name: String, params: Vec<(String, f64)> },
    Sampled,
    Custom(String),
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Catalog { name, params } => {
                write!(f, "{name}")?;
                for (i, (k, v)) in params.iter().enumerate() {
                    write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
                }
                Ok(())
            }
            CurveKind::Sampled => f.write_str("sampled"),
            CurveKind::Custom(name) => f.write_str(name),
        }
    }
}

/// A curve given by its curvature as a function of arclength.
#[derive(Clone)]
pub struct IntrinsicCurve {
    pub kappa: ScalarFn,
    pub kappa_prime: Option<ScalarFn>,
    pub kappa_second: Option<ScalarFn>,
    pub start: Vec2,
    pub start_angle: f64,
}

#[derive(Clone)]
pub enum Evaluator {
    Parametric {
        position: PointFn,
        /// First, second and third derivatives with respect to the parameter.
        derivatives: Option<[PointFn; 3]>,
    },
    /// The parameter is arclength.
    Intrinsic(IntrinsicCurve),
}

/// A plane curve over the parameter interval `[a, b]`.
#[derive(Clone)]
pub struct CurveSpec {
    kind: CurveKind,
    interval: (f64, f64),
    evaluator: Evaluator,
    sample_density: usize,
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveSpec")
            .field("kind", &self.kind)
            .field("interval", &self.interval)
            .field("sample_density", &self.sample_density)
            .finish_non_exhaustive()
    }
}

impl CurveSpec {
    /// Validates and builds a curve spec.
    ///
    /// Analytic first derivatives are cross-checked against central differences
    /// of the position at 16 interior probes.
    pub fn new(kind: CurveKind, interval: (f64, f64), evaluator: Evaluator, sample_density: usize) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidCurve(format!("bad parameter interval ({a}, {b})")));
        }
        if sample_density == 0 {
            return Err(Error::InvalidCurve("sample density must be positive".into()));
        }
        if let Evaluator::Parametric { position, derivatives } = &evaluator {
            let len = b - a;
            let step = 1e-5 * len;
            for k in 1..=16 {
                let t = a + len * k as f64 / 17.0;
                let p = position(t);
                if !p.is_finite() {
                    return Err(Error::InvalidCurve(format!("position not finite at t = {t}")));
                }
                if let Some([d1, _, _]) = derivatives {
                    let fd = (position(t + step) - position(t - step)) / (2.0 * step);
                    let d = d1(t);
                    let rel = (fd - d).norm() / d.norm().max(1e-300);
                    if !(rel <= 1e-6) {
                        return Err(Error::InvalidCurve(format!(
                            "derivative evaluator disagrees with finite differences at t = {t} (relative error {rel:e})"
                        )));
                    }
                }
            }
        }
        Ok(Self { kind, interval, evaluator, sample_density })
    }

    /// Parametric curve with analytic derivatives of order 1..3.
    pub fn parametric(
        kind: CurveKind,
        interval: (f64, f64),
        position: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        d1: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        d2: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        d3: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            kind,
            interval,
            Evaluator::Parametric {
                position: Arc::new(position),
                derivatives: Some([Arc::new(d1), Arc::new(d2), Arc::new(d3)]),
            },
            SamplingOptions::DEFAULT_DENSITY as usize,
        )
    }

    /// Parametric curve known only through its position.
    pub fn position_only(
        kind: CurveKind,
        interval: (f64, f64),
        position: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            kind,
            interval,
            Evaluator::Parametric { position: Arc::new(position), derivatives: None },
            SamplingOptions::DEFAULT_DENSITY as usize,
        )
    }

    /// Curve through sampled points; interpolated by not-a-knot cubic splines in `t`.
    pub fn sampled(t: Vec<f64>, points: Vec<Vec2>) -> Result<Self> {
        if t.len() < 8 {
            return Err(Error::InvalidCurve(format!("sampled curve needs at least 8 points, got {}", t.len())));
        }
        if t.len() != points.len() {
            return Err(Error::InvalidCurve("parameter and point counts differ".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve("sample parameters must be strictly increasing".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        let interval = (t[0], t[t.len() - 1]);
        let sx = CubicSpline::new(t.clone(), points.iter().map(|p| p.x).collect());
        let sy = CubicSpline::new(t, points.iter().map(|p| p.y).collect());
        let (Some(sx), Some(sy)) = (sx, sy) else {
            return Err(Error::InvalidCurve("cannot fit sample spline".into()));
        };
        let spline = Arc::new((sx, sy));
        let jet = move |k: usize| -> PointFn {
            let sp = Arc::clone(&spline);
            Arc::new(move |t| {
                let (jx, jy) = (sp.0.jet(t), sp.1.jet(t));
                match k {
                    0 => Vec2::new(jx.value, jy.value),
                    1 => Vec2::new(jx.d1, jy.d1),
                    2 => Vec2::new(jx.d2, jy.d2),
                    _ => Vec2::new(jx.d3, jy.d3),
                }
            })
        };
        Self::new(
            CurveKind::Sampled,
            interval,
            Evaluator::Parametric { position: jet(0), derivatives: Some([jet(1), jet(2), jet(3)]) },
            SamplingOptions::DEFAULT_DENSITY as usize,
        )
    }

    /// Curve prescribed by its curvature over the arclength interval.
    pub fn intrinsic(kind: CurveKind, interval: (f64, f64), curve: IntrinsicCurve) -> Result<Self> {
        Self::new(kind, interval, Evaluator::Intrinsic(curve), SamplingOptions::DEFAULT_DENSITY as usize)
    }

    pub fn with_interval(mut self, interval: (f64, f64)) -> Result<Self> {
        let kind = std::mem::replace(&mut self.kind, CurveKind::Sampled);
        Self::new(kind, interval, self.evaluator, self.sample_density)
    }

    pub fn with_sample_density(mut self, density: usize) -> Self {
        self.sample_density = density.max(1);
        self
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn sample_density(&self) -> usize {
        self.sample_density
    }

    /// Position at parameter `t`; `None` for intrinsic curves.
    pub fn position(&self, t: f64) -> Option<Vec2> {
        match &self.evaluator {
            Evaluator::Parametric { position, .. } => Some(position(t)),
            Evaluator::Intrinsic(_) => None,
        }
    }

    /// Resolves a position-only curve into one with spline derivatives.
    fn with_derivatives(&self) -> Result<(PointFn, [PointFn; 3])> {
        match &self.evaluator {
            Evaluator::Parametric { position, derivatives: Some(d) } => Ok((Arc::clone(position), d.clone())),
            Evaluator::Parametric { position, derivatives: None } => {
                let (a, b) = self.interval;
                let n = ((b - a) * self.sample_density as f64 * 8.0).ceil().max(64.0) as usize;
                let t: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
                let pts = t.iter().map(|&t| position(t)).collect();
                match Self::sampled(t, pts)?.evaluator {
                    Evaluator::Parametric { position, derivatives: Some(d) } => Ok((position, d)),
                    _ => unreachable!("sampled curves always carry derivatives"),
                }
            }
            Evaluator::Intrinsic(_) => Err(Error::InvalidArgument("intrinsic curve has no parametrization".into())),
        }
    }
}

/// Arclength from `t0` to `t`: the integral of |gamma'(u)|, antisymmetric in its bounds.
pub fn arc_length(curve: &CurveSpec, t0: f64, t: f64) -> Result<f64> {
    let (a, b) = curve.interval;
    for v in [t0, t] {
        if !(v >= a && v <= b) {
            return Err(Error::OutOfRange { s: v, lo: a, hi: b });
        }
    }
    if let Evaluator::Intrinsic(_) = curve.evaluator {
        return Ok(t - t0);
    }
    let (_, [d1, _, _]) = curve.with_derivatives()?;
    let failure: Cell<Option<Error>> = Cell::new(None);
    let speed = |u: f64| {
        let v = d1(u).norm();
        if !v.is_finite() {
            failure.set(Some(Error::NonFiniteDerivative { t: u }));
            f64::NAN
        } else if v < MIN_PROBED_SPEED {
            failure.set(Some(Error::DegenerateCurve { t: u, speed: v }));
            f64::NAN
        } else {
            v
        }
    };
    let tol = Tolerance::absolute(1e-9 * (1.0 + (t - t0).abs()));
    match simpson(speed, t0, t, tol) {
        Some(v) => Ok(v),
        None => Err(failure.take().unwrap_or(Error::Quadrature { a: t0, b: t })),
    }
}

/// Resamples a curve at uniform arclength spacing and builds its [`ArcCurve`].
///
/// The node count is `ceil(density * length)`; tangent angles are lifted by
/// accumulating wrapped differences, curvature and its arclength derivative
/// come from the analytic (or spline) derivatives.
pub fn reparametrize_by_arclength(curve: &CurveSpec, opts: SamplingOptions) -> Result<ArcCurve> {
    if let Evaluator::Intrinsic(ic) = &curve.evaluator {
        return integrate_intrinsic(ic, curve.interval, opts);
    }
    let (position, [d1, d2, d3]) = curve.with_derivatives()?;
    let (a, b) = curve.interval;

    let speed = |t: f64| -> Result<f64> {
        let v = d1(t).norm();
        if !v.is_finite() {
            return Err(Error::NonFiniteDerivative { t });
        }
        if v < MIN_REGULAR_SPEED {
            return Err(Error::DegenerateCurve { t, speed: v });
        }
        Ok(v)
    };
    let speed_raw = |t: f64| d1(t).norm();

    // Cumulative length on a uniform probe grid in t.
    let probes: Vec<f64> = (0..=PROBE_PANELS)
        .map(|k| if k == PROBE_PANELS { b } else { a + (b - a) * k as f64 / PROBE_PANELS as f64 })
        .collect();
    for &t in &probes {
        speed(t)?;
    }
    let mut cumulative = vec![0.0; probes.len()];
    for k in 0..PROBE_PANELS {
        let piece = simpson(speed_raw, probes[k], probes[k + 1], Tolerance::absolute(1e-14))
            .ok_or(Error::Quadrature { a: probes[k], b: probes[k + 1] })?;
        cumulative[k + 1] = cumulative[k] + piece;
    }
    let total = cumulative[PROBE_PANELS];
    let n = node_count(opts.density, total);
    let h = total / n as f64;

    let mut ts = Vec::with_capacity(n + 1);
    ts.push(a);
    for i in 1..n {
        let target = h * i as f64;
        let k = cumulative.partition_point(|&c| c <= target).saturating_sub(1).min(PROBE_PANELS - 1);
        ts.push(invert_length(&speed_raw, probes[k], probes[k + 1], target - cumulative[k])?);
    }
    ts.push(b);

    let mut s = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    let mut raw_angle = Vec::with_capacity(n + 1);
    let mut kappa = Vec::with_capacity(n + 1);
    let mut kappa_prime = Vec::with_capacity(n + 1);
    let mut dt_ds = Vec::with_capacity(n + 1);
    for (i, &t) in ts.iter().enumerate() {
        let (g1, g2, g3) = (d1(t), d2(t), d3(t));
        let v = speed(t)?;
        let v2 = v * v;
        let c = g1.cross(g2);
        let k = c / (v2 * v);
        let dk_dt = g1.cross(g3) / (v2 * v) - 3.0 * c * g1.dot(g2) / (v2 * v2 * v);
        if !(k.is_finite() && dk_dt.is_finite()) {
            return Err(Error::NonFiniteCurvature { s: h * i as f64 });
        }
        s.push(if i == n { total } else { h * i as f64 });
        points.push(position(t));
        raw_angle.push(g1.angle());
        kappa.push(k);
        kappa_prime.push(dk_dt / v);
        dt_ds.push(1.0 / v);
    }
    let phi = ArcCurve::lift_angles(&raw_angle)?;
    ArcCurve::from_nodes(
        Nodes {
            s,
            points,
            phi,
            kappa,
            kappa_prime: Some(kappa_prime),
            kappa_second: None,
            params: Some((ts, dt_ds)),
        },
        opts,
    )
}

pub(crate) fn node_count(density: f64, length: f64) -> usize {
    ((density * length).ceil() as usize).max(8)
}

/// Finds t in [lo, hi] with the length from `lo` to t equal to `target`.
fn invert_length(speed: &dyn Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> Result<f64> {
    let piece = |t: f64| simpson(speed, lo, t, Tolerance::absolute(1e-15)).ok_or(Error::Quadrature { a: lo, b: t });
    let full = piece(hi)?;
    let (mut a, mut b) = (lo, hi);
    let mut t = lo + (hi - lo) * (target / full).clamp(0.0, 1.0);
    for _ in 0..100 {
        let g = piece(t)? - target;
        if g.abs() <= 1e-14 * (1.0 + target.abs()) {
            return Ok(t);
        }
        if g > 0.0 {
            b = t;
        } else {
            a = t;
        }
        let newton = t - g / speed(t);
        t = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if b - a <= f64::EPSILON * (1.0 + t.abs()) {
            return Ok(t);
        }
    }
    Ok(t)
}

/// Integrates phi' = kappa, gamma' = (cos phi, sin phi) with classical RK4.
///
/// The internal step never exceeds 1e-3 of the interval length; nodes are laid
/// out at `density` per unit length.
pub fn curve_from_curvature(
    kappa: impl Fn(f64) -> f64 + Send + Sync + 'static,
    interval: (f64, f64),
    initial_point: Vec2,
    initial_angle: f64,
    opts: SamplingOptions,
) -> Result<ArcCurve> {
    let ic = IntrinsicCurve {
        kappa: Arc::new(kappa),
        kappa_prime: None,
        kappa_second: None,
        start: initial_point,
        start_angle: initial_angle,
    };
    integrate_intrinsic(&ic, interval, opts)
}

pub(crate) fn integrate_intrinsic(ic: &IntrinsicCurve, interval: (f64, f64), opts: SamplingOptions) -> Result<ArcCurve> {
    let (sa, sb) = interval;
    if !(sa < sb) {
        return Err(Error::InvalidArgument(format!("bad arclength interval ({sa}, {sb})")));
    }
    let len = sb - sa;
    let n = node_count(opts.density, len);
    let node_h = len / n as f64;
    let substeps = (node_h / (1e-3 * len)).ceil().max(1.0) as usize;
    let step = node_h / substeps as f64;

    let kappa = |s: f64| -> Result<f64> {
        let k = (ic.kappa)(s);
        if k.is_finite() {
            Ok(k)
        } else {
            Err(Error::NonFiniteCurvature { s })
        }
    };
    let rhs = |s: f64, phi: f64| -> Result<(Vec2, f64)> { Ok((Vec2::from_angle(phi), kappa(s)?)) };

    let mut s_nodes = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    let mut phis = Vec::with_capacity(n + 1);
    let (mut p, mut phi) = (ic.start, ic.start_angle);
    s_nodes.push(sa);
    points.push(p);
    phis.push(phi);
    for i in 0..n {
        let s0 = sa + node_h * i as f64;
        for j in 0..substeps {
            let s = s0 + step * j as f64;
            let (p1, f1) = rhs(s, phi)?;
            let (p2, f2) = rhs(s + 0.5 * step, phi + 0.5 * step * f1)?;
            let (p3, f3) = rhs(s + 0.5 * step, phi + 0.5 * step * f2)?;
            let (p4, f4) = rhs(s + step, phi + step * f3)?;
            p += (p1 + p2 * 2.0 + p3 * 2.0 + p4) * (step / 6.0);
            phi += (f1 + 2.0 * f2 + 2.0 * f3 + f4) * (step / 6.0);
        }
        s_nodes.push(if i + 1 == n { sb } else { sa + node_h * (i + 1) as f64 });
        points.push(p);
        phis.push(phi);
    }
    let kappas = s_nodes.iter().map(|&s| kappa(s)).collect::<Result<Vec<_>>>()?;
    let eval_opt = |f: &Option<ScalarFn>| -> Result<Option<Vec<f64>>> {
        f.as_ref()
            .map(|f| {
                s_nodes
                    .iter()
                    .map(|&s| {
                        let v = f(s);
                        if v.is_finite() {
                            Ok(v)
                        } else {
                            Err(Error::NonFiniteCurvature { s })
                        }
                    })
                    .collect()
            })
            .transpose()
    };
    let kappa_prime = eval_opt(&ic.kappa_prime)?;
    let kappa_second = eval_opt(&ic.kappa_second)?;
    ArcCurve::from_nodes(
        Nodes {
            s: s_nodes,
            points,
            phi: phis,
            kappa: kappas,
            kappa_prime,
            kappa_second,
            params: None,
        },
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn straight_segment_length() {
        let seg = CurveSpec::parametric(
            CurveKind::Custom("segment".into()),
            (0.0, 1.0),
            |t| Vec2::new(t, 0.0),
            |_| Vec2::new(1.0, 0.0),
            |_| Vec2::ZERO,
            |_| Vec2::ZERO,
        )
        .unwrap();
        assert!((arc_length(&seg, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(arc_length(&seg, 0.2, 0.7).unwrap(), -arc_length(&seg, 0.7, 0.2).unwrap());
    }

    #[test]
    fn degenerate_speed_rejected() {
        let stall = CurveSpec::parametric(
            CurveKind::Custom("stall".into()),
            (-1.0, 1.0),
            |t| Vec2::new(t * t * t, t * t * t),
            |t| Vec2::new(3.0 * t * t, 3.0 * t * t),
            |t| Vec2::new(6.0 * t, 6.0 * t),
            |_| Vec2::new(6.0, 6.0),
        )
        .unwrap();
        assert!(matches!(
            reparametrize_by_arclength(&stall, SamplingOptions::default()),
            Err(Error::DegenerateCurve { .. })
        ));
        assert!(matches!(arc_length(&stall, -1.0, 1.0), Err(Error::DegenerateCurve { .. })));
    }

    #[test]
    fn non_finite_derivative_rejected() {
        let c = CurveSpec::new(
            CurveKind::Custom("blowup".into()),
            (0.0, 1.0),
            Evaluator::Parametric {
                position: Arc::new(|t| Vec2::new(t, 0.0)),
                derivatives: None,
            },
            16,
        )
        .unwrap();
        // Position-only curves go through a spline and stay finite.
        assert!(arc_length(&c, 0.0, 1.0).is_ok());
        let bad = CurveSpec {
            kind: CurveKind::Custom("bad".into()),
            interval: (0.0, 1.0),
            evaluator: Evaluator::Parametric {
                position: Arc::new(|t| Vec2::new(t, 0.0)),
                derivatives: Some([
                    Arc::new(|t| if t > 0.5 { Vec2::new(f64::INFINITY, 0.0) } else { Vec2::new(1.0, 0.0) }),
                    Arc::new(|_| Vec2::ZERO),
                    Arc::new(|_| Vec2::ZERO),
                ]),
            },
            sample_density: 16,
        };
        assert!(matches!(arc_length(&bad, 0.0, 1.0), Err(Error::NonFiniteDerivative { .. })));
    }

    #[test]
    fn wrong_derivative_rejected() {
        let r = CurveSpec::parametric(
            CurveKind::Custom("liar".into()),
            (0.0, 1.0),
            |t| Vec2::new(t, t * t),
            |_| Vec2::new(1.0, 0.0),
            |_| Vec2::ZERO,
            |_| Vec2::ZERO,
        );
        assert!(matches!(r, Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn sampled_needs_eight_increasing_points() {
        let t: Vec<f64> = (0..7).map(f64::from).collect();
        let p = t.iter().map(|&t| Vec2::new(t, 0.0)).collect();
        assert!(CurveSpec::sampled(t, p).is_err());
        let t = vec![0.0, 1.0, 2.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let p = t.iter().map(|&t| Vec2::new(t, 0.0)).collect();
        assert!(CurveSpec::sampled(t, p).is_err());
    }

    #[test]
    fn sampled_circle_curvature() {
        let t: Vec<f64> = (0..=400).map(|i| 2.0 * PI * i as f64 / 400.0).collect();
        let p = t.iter().map(|&t| Vec2::from_angle(t) * 3.0).collect();
        let spec = CurveSpec::sampled(t, p).unwrap();
        let ac = reparametrize_by_arclength(&spec, SamplingOptions::default()).unwrap();
        assert!((ac.length() - 6.0 * PI).abs() < 1e-6);
        for k in &ac.kappa()[5..ac.len() - 5] {
            assert!((k - 1.0 / 3.0).abs() < 5e-5, "{k}");
        }
    }

    #[test]
    fn curvature_ode_circle() {
        let ac = curve_from_curvature(|_| 0.5, (0.0, 4.0 * PI), Vec2::new(2.0, 0.0), FRAC_PI_2, SamplingOptions::default())
            .unwrap();
        let worst = ac.points().iter().map(|p| (p.norm() - 2.0).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn curvature_ode_rejects_non_finite() {
        let r = curve_from_curvature(|s| 1.0 / s, (-1.0, 1.0), Vec2::ZERO, 0.0, SamplingOptions::default());
        assert!(matches!(r, Err(Error::NonFiniteCurvature { .. })));
    }
}
