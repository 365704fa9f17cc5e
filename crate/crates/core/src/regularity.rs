//! Vanishing orders, Hölder exponents and cusp classification at the critical
//! points of the radius of curvature.
//!
//! Every exponent here is measured by log-log least squares over a geometric
//! grid of scales. The upper envelope of `|f(s1 ± h) - f(s1)|` over each scale
//! bin gives the lower order `m-`, the lower envelope gives `m+`.

use serde::{Deserialize, Serialize};

use crate::curve::ArcCurve;
use crate::error::{Error, Result};
use crate::evolute::{radius_prime_sign_changes, EvoluteCurve};
use crate::geom::Vec2;
use crate::quadrature::{simpson, Tolerance};

/// Differences below this are treated as zero.
pub const FLAT_FLOOR: f64 = 1e-14;
/// Slopes above this are reported as [`Order::InfinityCap`].
pub const ORDER_CAP: f64 = 50.0;
/// Fits with a lower coefficient of determination are unreliable.
pub const MIN_R2: f64 = 0.99;
/// Largest distance from an integer accepted when rounding an order.
pub const ROUNDING_THRESHOLD: f64 = 0.15;
/// |R'| below this counts as stationary.
pub const STATIONARY_THRESHOLD: f64 = 1e-10;
/// Samples per scale bin on each side of `s1`.
const BIN_SAMPLES: usize = 4;
/// Frame coordinates below these are dominated by rounding.
const X_FLOOR: f64 = 1e-12;
const Y_FLOOR: f64 = 1e-13;

/// A vanishing order: finite, or larger than [`ORDER_CAP`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Finite(f64),
    InfinityCap,
}

impl Order {
    fn from_slope(slope: f64) -> Order {
        if slope > ORDER_CAP {
            Order::InfinityCap
        } else {
            Order::Finite(slope)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Order::Finite(v) => v,
            Order::InfinityCap => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::InfinityCap)
    }
}

/// Geometric grid of offsets `h` between `h_min` and `h_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleWindow {
    pub h_min: f64,
    pub h_max: f64,
    pub scales: usize,
}

impl ScaleWindow {
    pub const DEFAULT_SCALES: usize = 48;
    pub const MIN_SCALES: usize = 40;

    pub fn new(h_min: f64, h_max: f64) -> Self {
        Self { h_min, h_max, scales: Self::DEFAULT_SCALES }
    }

    /// `[1e-4, 1e-1]` times the arclength range, shrunk to stay inside the curve.
    pub fn for_curve(ac: &ArcCurve, s1: f64) -> Result<Self> {
        let (lo, hi) = ac.s_range();
        let l = ac.length();
        let room = (s1 - lo).min(hi - s1);
        let w = Self::new(1e-4 * l, (1e-1 * l).min(room));
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        if !(self.h_min > 0.0 && self.h_max / self.h_min >= 100.0 * (1.0 - 1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "scale window ({}, {}) must be positive and span two decades",
                self.h_min, self.h_max
            )));
        }
        if self.scales < Self::MIN_SCALES {
            return Err(Error::InvalidArgument(format!("need at least {} scales", Self::MIN_SCALES)));
        }
        Ok(())
    }

    /// Bin edges `h_0 = h_min < ... < h_{n-1} = h_max`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.scales;
        let ratio = self.h_max / self.h_min;
        (0..n).map(|k| self.h_min * ratio.powf(k as f64 / (n - 1) as f64)).collect()
    }

    /// Sample offsets grouped by bin, [`BIN_SAMPLES`] per bin.
    fn bins(&self) -> Vec<Vec<f64>> {
        let g = self.grid();
        g.windows(2)
            .map(|w| {
                let r = w[1] / w[0];
                (0..BIN_SAMPLES).map(|j| w[0] * r.powf(j as f64 / BIN_SAMPLES as f64)).collect()
            })
            .collect()
    }
}

/// Output of one log-log exponent measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityEstimate {
    pub s1: f64,
    pub m_minus: Order,
    pub m_plus: Order,
    /// min(m-, 1), clamped to [0, 1].
    pub holder_alpha: f64,
    pub fit_r2: f64,
    pub scale_window: (f64, f64),
}

impl RegularityEstimate {
    pub fn is_reliable(&self) -> bool {
        self.fit_r2 >= MIN_R2
    }

    fn flat(s1: f64, window: (f64, f64)) -> Self {
        Self {
            s1,
            m_minus: Order::InfinityCap,
            m_plus: Order::InfinityCap,
            holder_alpha: 0.0,
            fit_r2: 1.0,
            scale_window: window,
        }
    }
}

/// Least-squares line through `(x, y)`: slope, intercept and r^2.
pub fn linear_fit(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Some((slope, intercept, r2))
}

/// Fits upper and lower envelopes of binned `(scale, difference)` samples.
///
/// Returns `None` when every difference is below [`FLAT_FLOOR`].
fn envelope_fit(bins: &[Vec<(f64, f64)>]) -> Option<(f64, f64, f64)> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for bin in bins {
        let kept: Vec<&(f64, f64)> =
            bin.iter().filter(|(x, d)| *x > 0.0 && x.is_finite() && *d >= FLAT_FLOOR && d.is_finite()).collect();
        if kept.len() < bin.len() || kept.is_empty() {
            // A bin touching the floor only contributes to the upper envelope.
            if let Some(max) = kept.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
                upper.push((max.0.ln(), max.1.ln()));
            }
            continue;
        }
        let max = kept.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        let min = kept.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        upper.push((max.0.ln(), max.1.ln()));
        lower.push((min.0.ln(), min.1.ln()));
    }
    let (m_minus, _, r_up) = linear_fit(&upper)?;
    let (m_plus, r_low) = match linear_fit(&lower) {
        Some((m, _, r)) => (m, r),
        // Lower envelope lost in the floor: m+ is at least as large as anything measured.
        None => (f64::INFINITY, 1.0),
    };
    Some((m_minus, m_plus.max(m_minus), r_up.min(r_low)))
}

fn estimate_from_bins(s1: f64, window: &ScaleWindow, bins: &[Vec<(f64, f64)>]) -> RegularityEstimate {
    let sw = (window.h_min, window.h_max);
    match envelope_fit(bins) {
        None => RegularityEstimate::flat(s1, sw),
        Some((m_minus, m_plus, r2)) => {
            let m_minus = Order::from_slope(m_minus);
            RegularityEstimate {
                s1,
                m_minus,
                m_plus: Order::from_slope(m_plus),
                holder_alpha: if m_minus.is_infinite() { 1.0 } else { m_minus.value().clamp(0.0, 1.0) },
                fit_r2: r2,
                scale_window: sw,
            }
        }
    }
}

/// Measures the vanishing order of `f - f(s1)` at `s1` over both sides.
///
/// A function that stays within [`FLAT_FLOOR`] of `f(s1)` over the whole
/// window is reported as [`Order::InfinityCap`] with `fit_r2 = 1`.
pub fn vanishing_order(f: impl Fn(f64) -> Result<f64>, s1: f64, window: ScaleWindow) -> Result<RegularityEstimate> {
    window.validate()?;
    let f0 = f(s1)?;
    let mut bins = Vec::new();
    for offsets in window.bins() {
        let mut bin = Vec::with_capacity(2 * offsets.len());
        for h in offsets {
            for side in [-1.0, 1.0] {
                bin.push((h, (f(s1 + side * h)? - f0).abs()));
            }
        }
        bins.push(bin);
    }
    Ok(estimate_from_bins(s1, &window, &bins))
}

/// Hölder exponent of the evolute's unit tangent at `s1`, measured against
/// evolute arclength `int |R'|`.
///
/// The tangent is taken as `sigma * n` with one fixed sign, so this is only
/// meaningful where R does not change direction at `s1`.
pub fn tangent_holder_exponent(ac: &ArcCurve, s1: f64, window: ScaleWindow) -> Result<RegularityEstimate> {
    window.validate()?;
    let n1 = ac.eval_frame(s1)?.normal;
    let rp_abs = |s: f64| ac.radius_prime_at(s).map(f64::abs).unwrap_or(f64::NAN);
    let mut bins = Vec::new();
    for offsets in window.bins() {
        let mut bin = Vec::with_capacity(2 * offsets.len());
        for h in offsets {
            for side in [-1.0, 1.0] {
                let s = s1 + side * h;
                // Relative tolerance: the flat profile needs arclengths far below 1e-100.
                let len = simpson(rp_abs, s1.min(s), s1.max(s), Tolerance::relative(1e-8))
                    .ok_or(Error::Quadrature { a: s1, b: s })?;
                let d = ac.eval_frame(s)?.normal.distance(n1);
                if len > 0.0 {
                    bin.push((len, d));
                }
            }
        }
        if !bin.is_empty() {
            bins.push(bin);
        }
    }
    if bins.is_empty() {
        return Ok(RegularityEstimate::flat(s1, (window.h_min, window.h_max)));
    }
    let mut est = estimate_from_bins(s1, &window, &bins);
    // Here the exponent itself is the Hölder exponent.
    est.holder_alpha = est.m_minus.value().clamp(0.0, 1.0);
    Ok(est)
}

/// Critical points of R: strict sign changes of R' and stationary runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    /// Zeros of R' with a sign change, localized to 1e-10.
    pub sign_changes: Vec<f64>,
    /// Node runs with |R'| below the stationary threshold and no sign change
    /// across them: suspected plateaus or non-strict extrema.
    pub stationary: Vec<(f64, f64)>,
}

impl CriticalPoints {
    pub fn is_empty(&self) -> bool {
        self.sign_changes.is_empty() && self.stationary.is_empty()
    }
}

/// All critical points of R on the node grid.
#[allow(non_snake_case)]
pub fn critical_points_of_R(ac: &ArcCurve) -> Result<CriticalPoints> {
    ac.require_nonzero_curvature()?;
    let rp = ac.radius_prime_nodes()?;
    // Values inside the stationary band carry no reliable sign.
    let signed: Vec<f64> = rp.iter().map(|&v| if v.abs() < STATIONARY_THRESHOLD { 0.0 } else { v }).collect();
    let sign_changes = radius_prime_sign_changes(ac, &signed)?;

    let s = ac.s();
    let mut stationary = Vec::new();
    let mut i = 0;
    while i < rp.len() {
        if signed[i] != 0.0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < rp.len() && signed[i] == 0.0 {
            i += 1;
        }
        let before = signed[..start].iter().rev().find(|v| **v != 0.0);
        let after = signed[i..].iter().find(|v| **v != 0.0);
        let crosses = matches!((before, after), (Some(a), Some(b)) if a.signum() != b.signum());
        if !crosses {
            stationary.push((s[start], s[i - 1]));
        }
    }
    Ok(CriticalPoints { sign_changes, stationary })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    RegularPoint,
    #[serde(rename = "c1_1overm_point")]
    C1OneOverMPoint,
    Cusp,
}

/// Orthonormal frame at an evolute point: x along the (possibly flipped)
/// normal, y along minus the parent tangent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFrame {
    pub origin: Vec2,
    pub x_axis: Vec2,
    pub y_axis: Vec2,
    /// True when the normal was reversed so a cusp opens toward +x.
    pub flipped: bool,
}

impl LocalFrame {
    pub fn coords(&self, p: Vec2) -> (f64, f64) {
        let d = p - self.origin;
        (d.dot(self.x_axis), d.dot(self.y_axis))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Before,
    After,
}

/// Evolute samples on one side of `s1`, as `(x, y)` pairs in increasing offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub side: Side,
    pub samples: Vec<(f64, f64)>,
}

impl Branch {
    fn median_y(&self) -> f64 {
        let mut ys: Vec<f64> = self.samples.iter().map(|p| p.1).collect();
        ys.sort_by(f64::total_cmp);
        ys.get(ys.len() / 2).copied().unwrap_or(0.0)
    }

    /// Exponent e in |y| ~ |x|^e, ignoring samples in the rounding floor.
    pub fn exponent(&self) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|(x, y)| x.abs() >= X_FLOOR && y.abs() >= Y_FLOOR)
            .map(|(x, y)| (x.abs().ln(), y.abs().ln()))
            .collect();
        linear_fit(&pts).map(|(e, _, r2)| (e, r2))
    }
}

/// The evolute near `s1` in the local frame, split at `s1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalFrameGraph {
    pub frame: LocalFrame,
    pub branches: [Branch; 2],
}

/// Expresses the evolute near `s1` as graphs over the normal direction.
///
/// The normal is flipped when both sides land at negative x, i.e. when R has a
/// local maximum. If R is monotone on the window, x must be strictly monotone
/// along the samples; otherwise the sampling is at fault.
pub fn local_frame_graph(ev: &EvoluteCurve<'_>, s1: f64, window: ScaleWindow) -> Result<LocalFrameGraph> {
    window.validate()?;
    let ac = ev.parent();
    let f1 = ac.eval_frame(s1)?;
    let origin = ev.point_at(s1)?;
    let offsets = window.grid();
    let mut raw = [Vec::new(), Vec::new()];
    for (k, side) in [-1.0, 1.0].into_iter().enumerate() {
        for &h in &offsets {
            let d = ev.point_at(s1 + side * h)? - origin;
            raw[k].push((d.dot(f1.normal), -d.dot(f1.tangent)));
        }
    }
    let far = |b: &Vec<(f64, f64)>| b.last().map_or(0.0, |p| p.0);
    let flipped = far(&raw[0]) < 0.0 && far(&raw[1]) < 0.0;
    if flipped {
        for b in raw.iter_mut() {
            b.iter_mut().for_each(|p| p.0 = -p.0);
        }
    }
    let frame = LocalFrame {
        origin,
        x_axis: if flipped { -f1.normal } else { f1.normal },
        y_axis: -f1.tangent,
        flipped,
    };

    let lo = s1 - window.h_max;
    let hi = s1 + window.h_max;
    let monotone = !ev.singular_set().iter().any(|&z| z >= lo && z <= hi);
    if monotone {
        // Along increasing s: the before-branch reversed, then the after-branch.
        let xs: Vec<f64> = raw[0].iter().rev().chain(raw[1].iter()).map(|p| p.0).filter(|x| x.abs() >= X_FLOOR).collect();
        let inc = xs.windows(2).all(|w| w[1] > w[0]);
        let dec = xs.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(Error::NonInjectiveProjection { s: s1 });
        }
    }
    let [before, after] = raw;
    Ok(LocalFrameGraph {
        frame,
        branches: [Branch { side: Side::Before, samples: before }, Branch { side: Side::After, samples: after }],
    })
}

/// Classification of one point of the parent by the local behaviour of R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    pub s1: f64,
    pub order_m: u32,
    pub order_estimate: RegularityEstimate,
    pub parity: Parity,
    pub classification: Classification,
    /// Measured Hölder exponent of the evolute tangent (odd m >= 3).
    pub holder_alpha: Option<f64>,
    /// Graph exponents (e1, e2) of the two branches; expected 1 + 1/m.
    pub branch_exponents: Option<(f64, f64)>,
    pub frame: Option<LocalFrame>,
    /// For a cusp, `(x, g1(x))` and `(x, g2(x))` with the lower branch
    /// written as `y = -g2(x)`; otherwise the raw branches.
    pub graph_samples: Vec<Vec<(f64, f64)>>,
    /// Cusp only: both g1 and g2 are non-negative up to 1e-9.
    pub branches_nonnegative: Option<bool>,
}

/// Largest |R'(s1)| still compatible with a critical point.
const CRITICAL_RP: f64 = 1e-6;

/// Classifies `s1` by the vanishing order m of `R - R(s1)`: m = 1 is a regular
/// evolute point, odd m >= 3 a C^{1,1/m} point, even m a cusp.
pub fn classify_cusp(ac: &ArcCurve, s1: f64) -> Result<CuspReport> {
    let window = ScaleWindow::for_curve(ac, s1)?;
    let est = vanishing_order(|s| ac.radius_at(s), s1, window)?;
    if est.m_minus.is_infinite() {
        return Err(Error::InfiniteOrder { s: s1 });
    }
    let m_est = est.m_minus.value();
    let m_round = m_est.round();
    let ambiguous = !est.is_reliable()
        || (m_est - m_round).abs() > ROUNDING_THRESHOLD
        || est.m_plus.is_infinite()
        || (est.m_plus.value() - m_est).abs() > ROUNDING_THRESHOLD
        || m_round < 1.0;
    if ambiguous {
        return Err(Error::AmbiguousOrder { s: s1, estimate: m_est, fit_r2: est.fit_r2 });
    }
    let m = m_round as u32;
    let parity = if m % 2 == 0 { Parity::Even } else { Parity::Odd };
    let mut report = CuspReport {
        s1,
        order_m: m,
        order_estimate: est,
        parity,
        classification: Classification::RegularPoint,
        holder_alpha: None,
        branch_exponents: None,
        frame: None,
        graph_samples: Vec::new(),
        branches_nonnegative: None,
    };
    if m == 1 {
        return Ok(report);
    }
    let rp = ac.radius_prime_at(s1)?;
    if rp.abs() > CRITICAL_RP {
        return Err(Error::NotACriticalPoint {
            s: s1,
            reason: format!("vanishing order {m} but R'(s1) = {rp:e}"),
        });
    }

    let ev = crate::evolute::evolute(ac)?;
    let graph = local_frame_graph(&ev, s1, window)?;
    report.frame = Some(graph.frame);
    let exps = |a: &Branch, b: &Branch| match (a.exponent(), b.exponent()) {
        (Some((e1, _)), Some((e2, _))) => Some((e1, e2)),
        _ => None,
    };
    if parity == Parity::Odd {
        report.classification = Classification::C1OneOverMPoint;
        report.holder_alpha = Some(tangent_holder_exponent(ac, s1, window)?.holder_alpha);
        report.branch_exponents = exps(&graph.branches[0], &graph.branches[1]);
        report.graph_samples = graph.branches.iter().map(|b| b.samples.clone()).collect();
    } else {
        report.classification = Classification::Cusp;
        let [a, b] = graph.branches;
        let (upper, lower) = if a.median_y() >= b.median_y() { (a, b) } else { (b, a) };
        let g1 = upper.samples.clone();
        let g2: Vec<(f64, f64)> = lower.samples.iter().map(|&(x, y)| (x, -y)).collect();
        report.branches_nonnegative = Some(g1.iter().chain(g2.iter()).all(|p| p.1 >= -1e-9));
        report.branch_exponents = exps(&upper, &lower);
        report.graph_samples = vec![g1, g2];
    }
    Ok(report)
}
