use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{wrap_angle, Vec2};
use crate::interp::{cubic_hermite, quintic, segment_index, septic, CubicSpline, Jet};

/// Gate below which curvature is treated as zero and no radius is formed.
pub const DEFAULT_KAPPA_MIN: f64 = 1e-8;

/// Largest admissible turn between neighbouring node tangents.
pub const MAX_LIFT_STEP: f64 = std::f64::consts::PI - 0.1;

/// Node density and curvature gate used when building arclength curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingOptions {
    /// Nodes per unit arclength.
    pub density: f64,
    pub kappa_min: f64,
}

impl SamplingOptions {
    pub const DEFAULT_DENSITY: f64 = 128.0;
    pub const ANALYSIS_DENSITY: f64 = 512.0;

    pub fn with_density(density: f64) -> Self {
        Self { density, kappa_min: DEFAULT_KAPPA_MIN }
    }

    /// Density used for vanishing-order and exponent fits.
    pub fn analysis() -> Self {
        Self::with_density(Self::ANALYSIS_DENSITY)
    }
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self::with_density(Self::DEFAULT_DENSITY)
    }
}

/// Raw node data for [`ArcCurve::from_nodes`].
///
/// Missing curvature derivatives are recovered from cubic splines through the
/// node values.
#[derive(Debug, Clone, Default)]
pub struct Nodes {
    pub s: Vec<f64>,
    pub points: Vec<Vec2>,
    /// Lifted tangent angle.
    pub phi: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_prime: Option<Vec<f64>>,
    pub kappa_second: Option<Vec<f64>>,
    /// Source parameter `t` at each node and `dt/ds`.
    pub params: Option<(Vec<f64>, Vec<f64>)>,
}

/// Local differential data at one arclength value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub s: f64,
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub phi: f64,
    pub kappa: f64,
    /// d kappa / ds
    pub kappa_prime: f64,
}

impl Frame {
    pub fn radius(&self, kappa_min: f64) -> Result<f64> {
        if self.kappa.abs() < kappa_min || !self.kappa.is_finite() {
            return Err(Error::ZeroCurvature { s: self.s, kappa: self.kappa });
        }
        Ok(1.0 / self.kappa)
    }

    /// dR/ds = -kappa' / kappa^2.
    pub fn radius_prime(&self, kappa_min: f64) -> Result<f64> {
        let r = self.radius(kappa_min)?;
        Ok(-self.kappa_prime * r * r)
    }

    /// Center of curvature, i.e. the evolute point.
    pub fn center(&self, kappa_min: f64) -> Result<Vec2> {
        Ok(self.point + self.normal * self.radius(kappa_min)?)
    }
}

/// A curve parametrized by arclength, stored as aligned node sequences plus a
/// C^3 piecewise septic interpolant.
#[derive(Debug, Clone)]
pub struct ArcCurve {
    s: Vec<f64>,
    points: Vec<Vec2>,
    phi: Vec<f64>,
    kappa: Vec<f64>,
    kappa_prime: Vec<f64>,
    kappa_second: Vec<f64>,
    params: Option<(Vec<f64>, Vec<f64>)>,
    opts: SamplingOptions,
}

impl ArcCurve {
    pub fn from_nodes(nodes: Nodes, opts: SamplingOptions) -> Result<Self> {
        let n = nodes.s.len();
        if n < 4 {
            return Err(Error::InvalidCurve(format!("need at least 4 nodes, got {n}")));
        }
        if nodes.points.len() != n || nodes.phi.len() != n || nodes.kappa.len() != n {
            return Err(Error::InvalidCurve("node sequences have different lengths".into()));
        }
        if let Some(i) = nodes.s.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve(format!("arclength not increasing at node {i}")));
        }
        for (i, w) in nodes.phi.windows(2).enumerate() {
            let step = w[1] - w[0];
            if !(step.abs() < MAX_LIFT_STEP) {
                return Err(Error::LiftFailure { index: i, step });
            }
        }
        for i in 0..n {
            if !nodes.points[i].is_finite() {
                return Err(Error::InvalidCurve(format!("non-finite point at node {i}")));
            }
            if !nodes.kappa[i].is_finite() {
                return Err(Error::NonFiniteCurvature { s: nodes.s[i] });
            }
        }
        let kappa_prime = match nodes.kappa_prime {
            Some(v) => v,
            None => spline_slopes(&nodes.s, &nodes.kappa)?,
        };
        let kappa_second = match nodes.kappa_second {
            Some(v) => v,
            None => spline_slopes(&nodes.s, &kappa_prime)?,
        };
        if kappa_prime.len() != n || kappa_second.len() != n {
            return Err(Error::InvalidCurve("curvature derivative length mismatch".into()));
        }
        if let Some((t, dt)) = &nodes.params {
            if t.len() != n || dt.len() != n {
                return Err(Error::InvalidCurve("parameter track length mismatch".into()));
            }
        }
        Ok(Self {
            s: nodes.s,
            points: nodes.points,
            phi: nodes.phi,
            kappa: nodes.kappa,
            kappa_prime,
            kappa_second,
            params: nodes.params,
            opts,
        })
    }

    /// Lifts raw tangent angles (each in (-pi, pi]) into a continuous sequence.
    pub fn lift_angles(raw: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(raw.len());
        let Some(&first) = raw.first() else {
            return Ok(out);
        };
        out.push(first);
        for i in 1..raw.len() {
            let step = wrap_angle(raw[i] - raw[i - 1]);
            if step.abs() >= MAX_LIFT_STEP {
                return Err(Error::LiftFailure { index: i - 1, step });
            }
            out.push(out[i - 1] + step);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn kappa_prime(&self) -> &[f64] {
        &self.kappa_prime
    }

    pub fn kappa_second(&self) -> &[f64] {
        &self.kappa_second
    }

    /// Source parameter values at the nodes, when the curve came from a parametrization.
    pub fn params(&self) -> Option<&[f64]> {
        self.params.as_ref().map(|(t, _)| t.as_slice())
    }

    pub fn options(&self) -> SamplingOptions {
        self.opts
    }

    pub fn kappa_min(&self) -> f64 {
        self.opts.kappa_min
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.s[0], self.s[self.s.len() - 1])
    }

    pub fn length(&self) -> f64 {
        let (a, b) = self.s_range();
        b - a
    }

    /// Mean node spacing.
    pub fn spacing(&self) -> f64 {
        self.length() / (self.len() - 1) as f64
    }

    /// Unit tangent at node `i`.
    pub fn tangent(&self, i: usize) -> Vec2 {
        Vec2::from_angle(self.phi[i])
    }

    /// Unit normal at node `i`: the tangent rotated by +pi/2.
    pub fn normal(&self, i: usize) -> Vec2 {
        self.tangent(i).perp()
    }

    /// Signed radius of curvature at each node, `None` where |kappa| < kappa_min.
    pub fn radii(&self) -> Vec<Option<f64>> {
        self.kappa
            .iter()
            .map(|&k| (k.abs() >= self.opts.kappa_min).then(|| 1.0 / k))
            .collect()
    }

    pub fn node_radius(&self, i: usize) -> Result<f64> {
        self.node_frame(i).radius(self.opts.kappa_min)
    }

    pub fn node_frame(&self, i: usize) -> Frame {
        let tangent = self.tangent(i);
        Frame {
            s: self.s[i],
            point: self.points[i],
            tangent,
            normal: tangent.perp(),
            phi: self.phi[i],
            kappa: self.kappa[i],
            kappa_prime: self.kappa_prime[i],
        }
    }

    /// Fails with `ZeroCurvature` at the first node where |kappa| < kappa_min.
    pub fn require_nonzero_curvature(&self) -> Result<()> {
        self.require_nonzero_curvature_on(self.s[0], self.s[self.len() - 1])
    }

    pub fn require_nonzero_curvature_on(&self, lo: f64, hi: f64) -> Result<()> {
        for i in 0..self.len() {
            if self.s[i] < lo || self.s[i] > hi {
                continue;
            }
            let k = self.kappa[i];
            if !(k.abs() >= self.opts.kappa_min) {
                return Err(Error::ZeroCurvature { s: self.s[i], kappa: k });
            }
        }
        Ok(())
    }

    fn locate(&self, s: f64) -> Result<(usize, f64, f64)> {
        let (lo, hi) = self.s_range();
        let slack = 1e-9 * (1.0 + self.length());
        if !(s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutOfRange { s, lo, hi });
        }
        let i = segment_index(&self.s, s);
        let h = self.s[i + 1] - self.s[i];
        Ok((i, (s - self.s[i]) / h, h))
    }

    /// phi and its derivatives (kappa, kappa', kappa'') from the interpolant.
    pub fn phi_jet(&self, s: f64) -> Result<Jet<f64>> {
        let (i, u, h) = self.locate(s)?;
        let f = |j: usize| [self.phi[j], self.kappa[j], self.kappa_prime[j], self.kappa_second[j]];
        Ok(septic(f(i), f(i + 1), h, u))
    }

    /// kappa, kappa' and kappa'' interpolated from the node curvature data.
    ///
    /// Interpolating kappa directly keeps its relative error near rounding;
    /// differentiating the phi interpolant would amplify rounding in phi by 1/h.
    pub fn kappa_jet(&self, s: f64) -> Result<Jet<f64>> {
        let (i, u, h) = self.locate(s)?;
        let f = |j: usize| [self.kappa[j], self.kappa_prime[j], self.kappa_second[j]];
        Ok(quintic(f(i), f(i + 1), h, u))
    }

    /// Position and its first three arclength derivatives from the interpolant.
    pub fn position_jet(&self, s: f64) -> Result<Jet<Vec2>> {
        let (i, u, h) = self.locate(s)?;
        let f = |j: usize| {
            let t = self.tangent(j);
            let n = t.perp();
            let k = self.kappa[j];
            [self.points[j], t, n * k, n * self.kappa_prime[j] - t * (k * k)]
        };
        Ok(septic(f(i), f(i + 1), h, u))
    }

    pub fn point_at(&self, s: f64) -> Result<Vec2> {
        Ok(self.position_jet(s)?.value)
    }

    /// Point, unit tangent, unit normal and curvature at `s`.
    pub fn eval_frame(&self, s: f64) -> Result<Frame> {
        let phi = self.phi_jet(s)?;
        let kappa = self.kappa_jet(s)?;
        let point = self.point_at(s)?;
        let tangent = Vec2::from_angle(phi.value);
        Ok(Frame {
            s,
            point,
            tangent,
            normal: tangent.perp(),
            phi: phi.value,
            kappa: kappa.value,
            kappa_prime: kappa.d1,
        })
    }

    pub fn kappa_at(&self, s: f64) -> Result<f64> {
        Ok(self.kappa_jet(s)?.value)
    }

    pub fn radius_at(&self, s: f64) -> Result<f64> {
        self.eval_frame(s)?.radius(self.opts.kappa_min)
    }

    /// dR/ds at `s`.
    pub fn radius_prime_at(&self, s: f64) -> Result<f64> {
        let j = self.kappa_jet(s)?;
        if !(j.value.abs() >= self.opts.kappa_min) {
            return Err(Error::ZeroCurvature { s, kappa: j.value });
        }
        Ok(-j.d1 / (j.value * j.value))
    }

    /// dR/ds at every node.
    pub fn radius_prime_nodes(&self) -> Result<Vec<f64>> {
        (0..self.len())
            .map(|i| {
                let k = self.kappa[i];
                if !(k.abs() >= self.opts.kappa_min) {
                    return Err(Error::ZeroCurvature { s: self.s[i], kappa: k });
                }
                Ok(-self.kappa_prime[i] / (k * k))
            })
            .collect()
    }

    /// The same curve with its arclength shifted so that it starts at `s0`.
    pub fn with_start(mut self, s0: f64) -> ArcCurve {
        let shift = s0 - self.s[0];
        self.s.iter_mut().for_each(|s| *s += shift);
        self
    }

    /// The same curve traversed backwards over the same arclength interval.
    ///
    /// Signed curvature flips; its arclength derivative does not.
    pub fn reversed(&self) -> ArcCurve {
        let (lo, hi) = self.s_range();
        let rev = |v: &[f64], k: f64| v.iter().rev().map(|x| x * k).collect::<Vec<_>>();
        ArcCurve {
            s: self.s.iter().rev().map(|&s| lo + (hi - s)).collect(),
            points: self.points.iter().rev().copied().collect(),
            phi: self.phi.iter().rev().map(|p| p + std::f64::consts::PI).collect(),
            kappa: rev(&self.kappa, -1.0),
            kappa_prime: rev(&self.kappa_prime, 1.0),
            kappa_second: rev(&self.kappa_second, -1.0),
            params: self.params.as_ref().map(|(t, dt)| (rev(t, 1.0), rev(dt, -1.0))),
            opts: self.opts,
        }
    }

    /// Source parameter at arclength `s`, interpolated with dt/ds.
    pub fn param_at(&self, s: f64) -> Option<f64> {
        let (t, dt) = self.params.as_ref()?;
        let (i, u, h) = self.locate(s).ok()?;
        Some(cubic_hermite([t[i], dt[i]], [t[i + 1], dt[i + 1]], h, u).value)
    }
}

fn spline_slopes(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    CubicSpline::new(xs.to_vec(), ys.to_vec())
        .map(|sp| sp.knot_slopes())
        .ok_or_else(|| Error::InvalidCurve("cannot fit curvature spline".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_nodes(r: f64, n: usize) -> Nodes {
        let len = 2.0;
        let s: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
        let phi: Vec<f64> = s.iter().map(|&s| s / r + std::f64::consts::FRAC_PI_2).collect();
        let points = s.iter().map(|&s| Vec2::from_angle(s / r) * r).collect();
        Nodes { kappa: vec![1.0 / r; n], s, phi, points, ..Default::default() }
    }

    #[test]
    fn interpolated_frame_on_circle() {
        let ac = ArcCurve::from_nodes(circle_nodes(2.0, 65), SamplingOptions::default()).unwrap();
        let f = ac.eval_frame(0.777).unwrap();
        let expected = Vec2::from_angle(0.777 / 2.0) * 2.0;
        assert!(f.point.distance(expected) < 1e-9);
        assert!((f.kappa - 0.5).abs() < 1e-12);
        assert!(f.center(1e-8).unwrap().norm() < 1e-9);
        assert!((ac.position_jet(1.3).unwrap().d1.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_range() {
        let ac = ArcCurve::from_nodes(circle_nodes(1.0, 16), SamplingOptions::default()).unwrap();
        assert!(matches!(ac.eval_frame(2.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn zero_curvature_gate() {
        let mut nodes = circle_nodes(1.0, 16);
        nodes.kappa[3] = 1e-9;
        let ac = ArcCurve::from_nodes(nodes, SamplingOptions::default()).unwrap();
        assert!(matches!(ac.node_radius(3), Err(Error::ZeroCurvature { .. })));
        assert!(ac.radii()[3].is_none());
        assert!(ac.require_nonzero_curvature().is_err());
    }

    #[test]
    fn lift_removes_wraps_and_rejects_jumps() {
        let raw = [3.0, -3.1, -2.9];
        let lifted = ArcCurve::lift_angles(&raw).unwrap();
        assert!((lifted[1] - (2.0 * std::f64::consts::PI - 3.1)).abs() < 1e-12);
        assert!(matches!(
            ArcCurve::lift_angles(&[0.0, 3.1]),
            Err(Error::LiftFailure { .. })
        ));
    }

    #[test]
    fn rejects_non_monotone_s() {
        let mut nodes = circle_nodes(1.0, 16);
        nodes.s[5] = nodes.s[4];
        assert!(ArcCurve::from_nodes(nodes, SamplingOptions::default()).is_err());
    }
}
