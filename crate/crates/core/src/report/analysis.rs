//! The JSON analysis report.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::checks::{
    default_separation, double_points, simplicity_under_monotone_curvature, tait_kneser_check, IntersectionReport,
    NestingReport, SimplicityVerdict, EXCLUSION_SPACINGS, NESTING_SLACK, SEPARATION_SPACINGS,
};
use crate::curve::{reparametrize_by_arclength, ArcCurve, CurveSpec, SamplingOptions};
use crate::error::Result;
use crate::evolute::verify_increvol_identity;
use crate::regularity::{
    classify_cusp, critical_points_of_R, tangent_holder_exponent, vanishing_order, CriticalPoints, CuspReport,
    RegularityEstimate, ScaleWindow, MIN_R2, ROUNDING_THRESHOLD,
};

pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable holding the sampling seed.
pub const SEED_ENV: &str = "EVOLUTE_KIT_SEED";
pub const INCREVOL_PAIRS: usize = 8;
pub const NESTING_PAIRS: usize = 200;
/// Relative spread of R below which the radius counts as constant.
pub const CONSTANT_RADIUS_TOL: f64 = 1e-9;
pub const CONSTANT_RADIUS_MESSAGE: &str = "constant radius of curvature: evolute degenerates to a point";
const INCREVOL_TOL: f64 = 1e-6;

/// Seed from [`SEED_ENV`], 0 when unset.
pub fn seed_from_env() -> std::result::Result<u64, String> {
    match std::env::var(SEED_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
    }
}

/// Result of one check; failures are recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Failed(String),
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Failed(e.to_string()),
        }
    }
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub nodes: usize,
    pub length: f64,
    pub s_range: (f64, f64),
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub check: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    /// R' changes sign.
    SignChange,
    /// R' vanishes at isolated nodes without changing sign.
    Stationary,
    /// R' vanishes over an interval.
    Plateau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointAnalysis {
    pub s1: f64,
    pub kind: PointKind,
    pub radius_order: Outcome<RegularityEstimate>,
    pub classification: Outcome<CuspReport>,
    /// Only where R does not change direction.
    pub tangent_holder: Option<Outcome<RegularityEstimate>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrevolCheck {
    pub s1: f64,
    pub s2: f64,
    pub residual: Outcome<f64>,
    /// 1e-6 (1 + |R(s2) - R(s1)|).
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: Tool,
    pub curve: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, f64>,
    pub summary: CurveSummary,
    pub constant_radius: bool,
    pub skipped: Vec<Skipped>,
    pub critical_points: Option<Outcome<CriticalPoints>>,
    pub points: Vec<PointAnalysis>,
    pub nesting: Vec<Outcome<NestingReport>>,
    pub double_points: Outcome<IntersectionReport>,
    pub increvol: Vec<IncrevolCheck>,
    pub simplicity: Option<Outcome<SimplicityVerdict>>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub sampling: SamplingOptions,
    pub seed: u64,
    pub nesting_pairs: usize,
    pub increvol_pairs: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            sampling: SamplingOptions::analysis(),
            seed: 0,
            nesting_pairs: NESTING_PAIRS,
            increvol_pairs: INCREVOL_PAIRS,
        }
    }
}

/// True when R is constant to [`CONSTANT_RADIUS_TOL`] relative spread.
pub fn has_constant_radius(ac: &ArcCurve) -> bool {
    let k = ac.kappa();
    let (lo, hi) = k.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    lo.signum() == hi.signum() && (hi - lo).abs() <= CONSTANT_RADIUS_TOL * lo.abs().min(hi.abs())
}

/// Runs every check on one curve. Only an invalid curve is an error.
pub fn analyze(curve: &str, spec: &CurveSpec, opts: AnalysisOptions) -> Result<AnalysisReport> {
    let ac = reparametrize_by_arclength(spec, opts.sampling)?;
    let h = ac.spacing();
    let mut parameters = BTreeMap::new();
    for (k, v) in [
        ("sample_density", opts.sampling.density),
        ("kappa_min", opts.sampling.kappa_min),
        ("scale_window_min_factor", 1e-4),
        ("scale_window_max_factor", 1e-1),
        ("scales", ScaleWindow::DEFAULT_SCALES as f64),
        ("order_rounding_threshold", ROUNDING_THRESHOLD),
        ("min_fit_r2", MIN_R2),
        ("nesting_slack", NESTING_SLACK),
        ("nesting_pairs", opts.nesting_pairs as f64),
        ("separation_spacings", SEPARATION_SPACINGS),
        ("exclusion_spacings", EXCLUSION_SPACINGS),
        ("increvol_pairs", opts.increvol_pairs as f64),
        ("increvol_tolerance_factor", INCREVOL_TOL),
        ("constant_radius_tolerance", CONSTANT_RADIUS_TOL),
    ] {
        parameters.insert(k.to_string(), v);
    }

    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool: Tool { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
        curve: curve.to_string(),
        seed: opts.seed,
        parameters,
        summary: CurveSummary { nodes: ac.len(), length: ac.length(), s_range: ac.s_range(), spacing: h },
        constant_radius: false,
        skipped: Vec::new(),
        critical_points: None,
        points: Vec::new(),
        nesting: Vec::new(),
        double_points: double_points(&ac, default_separation(&ac)).into(),
        increvol: Vec::new(),
        simplicity: None,
    };

    if let Err(e) = ac.require_nonzero_curvature() {
        for check in ["critical_points", "nesting", "increvol", "simplicity"] {
            report.skipped.push(Skipped { check: check.into(), reason: e.to_string() });
        }
        return Ok(report);
    }
    if has_constant_radius(&ac) {
        report.constant_radius = true;
        for check in ["critical_points", "nesting", "increvol", "simplicity"] {
            report.skipped.push(Skipped { check: check.into(), reason: CONSTANT_RADIUS_MESSAGE.into() });
        }
        return Ok(report);
    }

    let cp: Outcome<CriticalPoints> = critical_points_of_R(&ac).into();
    if let Outcome::Ok(cp) = &cp {
        for &s1 in &cp.sign_changes {
            report.points.push(analyze_point(&ac, s1, PointKind::SignChange));
        }
        for &(a, b) in &cp.stationary {
            let kind = if b - a <= 2.0 * h { PointKind::Stationary } else { PointKind::Plateau };
            report.points.push(analyze_point(&ac, 0.5 * (a + b), kind));
        }
        report.nesting = monotone_segments(&ac, &cp.sign_changes)
            .into_iter()
            .enumerate()
            .map(|(k, seg)| tait_kneser_check(&ac, seg, opts.nesting_pairs, opts.seed.wrapping_add(k as u64)).into())
            .collect();
    }
    report.critical_points = Some(cp);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (lo, hi) = ac.s_range();
    for _ in 0..opts.increvol_pairs {
        let (a, b): (f64, f64) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let (s1, s2) = (a.min(b), a.max(b));
        let residual: Outcome<f64> = verify_increvol_identity(&ac, s1, s2).into();
        let tolerance = match (ac.radius_at(s1), ac.radius_at(s2)) {
            (Ok(r1), Ok(r2)) => Some(INCREVOL_TOL * (1.0 + (r2 - r1).abs())),
            _ => None,
        };
        let pass = matches!((residual.ok(), tolerance), (Some(r), Some(t)) if *r <= t);
        report.increvol.push(IncrevolCheck { s1, s2, residual, tolerance, pass });
    }
    report.simplicity = Some(simplicity_under_monotone_curvature(&ac, opts.nesting_pairs, opts.seed).into());
    Ok(report)
}

fn analyze_point(ac: &ArcCurve, s1: f64, kind: PointKind) -> PointAnalysis {
    let window = ScaleWindow::for_curve(ac, s1);
    let radius_order = window.clone().and_then(|w| vanishing_order(|s| ac.radius_at(s), s1, w)).into();
    let tangent_holder =
        (kind != PointKind::SignChange).then(|| window.and_then(|w| tangent_holder_exponent(ac, s1, w)).into());
    PointAnalysis { s1, kind, radius_order, classification: classify_cusp(ac, s1).into(), tangent_holder }
}

/// Arclength pieces between sign changes of R', trimmed by the exclusion
/// radius at each interior cut. Pieces shorter than twice that are dropped.
fn monotone_segments(ac: &ArcCurve, cuts: &[f64]) -> Vec<(f64, f64)> {
    let (lo, hi) = ac.s_range();
    let pad = EXCLUSION_SPACINGS * ac.spacing();
    let mut edges = vec![(lo, 0.0)];
    edges.extend(cuts.iter().map(|&c| (c, pad)));
    edges.push((hi, 0.0));
    edges
        .windows(2)
        .map(|w| (w[0].0 + w[0].1, w[1].0 - w[1].1))
        .filter(|(a, b)| b - a > 2.0 * pad)
        .collect()
}
