//! Subcommand bodies. Each returns the text for stdout or a [`CliError`]
//! carrying the process exit code.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checks::{
    default_separation, double_points, simplicity_under_monotone_curvature, IntersectionReport, SimplicityVerdict,
};
use crate::curve::{reparametrize_by_arclength, ArcCurve, SamplingOptions};
use crate::error::Error;
use crate::evolute::{evolute, involute, InvoluteParams, Orientation};
use crate::geom::Vec2;
use crate::report::analysis::{self, has_constant_radius, AnalysisOptions, Outcome, CONSTANT_RADIUS_MESSAGE};
use crate::report::descriptor::{build_curve, Descriptor};
use crate::report::emit::{write_csv, FigureSpec, Marker, Polyline, Style};
use crate::report::figure::figure1;

pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GATE: i32 = 3;
pub const EXIT_FIGURE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_IO, format!("{}: {e}", path.display()))
    }
}

pub type CliResult = std::result::Result<String, CliError>;

/// Exit code for a library error raised while building or gating a curve.
fn gate(e: Error) -> CliError {
    let name = match &e {
        Error::Parse(_) | Error::InvalidArgument(_) => return CliError::new(EXIT_PARSE, e.to_string()),
        Error::ZeroCurvature { .. } => "curvature gate",
        Error::DegenerateCurve { .. } => "regularity gate",
        Error::NonFiniteDerivative { .. } => "finiteness gate",
        Error::SingularInvolute { .. } => "involute regularity gate",
        Error::InvoluteConstantInside { .. } => "involute constant gate",
        _ => "curve gate",
    };
    CliError::new(EXIT_GATE, format!("{name}: {e}"))
}

fn load(descriptor: &str, opts: SamplingOptions) -> std::result::Result<(Descriptor, ArcCurve), CliError> {
    let desc: Descriptor = descriptor.parse().map_err(gate)?;
    let spec = build_curve(&desc).map_err(gate)?;
    let ac = reparametrize_by_arclength(&spec, opts).map_err(gate)?;
    Ok((desc, ac))
}

fn create_dir(dir: &Path) -> std::result::Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_points(path: &Path, header: &str, s: &[f64], pts: &[Vec2]) -> std::result::Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv(BufWriter::new(f), header, s.iter().copied().zip(pts.iter().copied())).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> std::result::Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes `parent.csv`, `evolute.csv` and `evolute.svg` into `out_dir`.
pub fn cmd_evolute(descriptor: &str, out_dir: &Path, opts: SamplingOptions) -> CliResult {
    let (desc, ac) = load(descriptor, opts)?;
    ac.require_nonzero_curvature().map_err(gate)?;
    if has_constant_radius(&ac) {
        return Err(CliError::new(EXIT_GATE, CONSTANT_RADIUS_MESSAGE));
    }
    let ev = evolute(&ac).map_err(gate)?;
    create_dir(out_dir)?;
    write_points(&out_dir.join("parent.csv"), "s", ac.s(), ac.points())?;
    write_points(&out_dir.join("evolute.csv"), "s", ac.s(), ev.points())?;

    let mut markers = Vec::new();
    for &z in ev.singular_set() {
        let at = ev.point_at(z).map_err(gate)?;
        markers.push(Marker { label: "cusp".into(), at, color: "#c0392b".into() });
    }
    let fig = FigureSpec {
        curves: vec![
            Polyline { label: "parent".into(), points: ac.points().to_vec(), style: Style::solid("#1f4e9c", 2.0) },
            Polyline { label: "evolute".into(), points: ev.points().to_vec(), style: Style::solid("#b23a2b", 1.5) },
        ],
        markers,
    };
    write_text(&out_dir.join("evolute.svg"), &fig.to_svg())?;
    Ok(format!(
        "curve: {desc}\nnodes: {}\ncusps: {}\nwrote parent.csv, evolute.csv, evolute.svg to {}\n",
        ac.len(),
        ev.singular_set().len(),
        out_dir.display()
    ))
}

/// Writes `involute.csv` and `involute.svg` into `out_dir`.
///
/// `start` moves the arclength origin of the parent, which shifts the
/// meaning of `c` accordingly.
pub fn cmd_involute(
    descriptor: &str,
    c: f64,
    start: Option<f64>,
    orientation: Orientation,
    out_dir: &Path,
    opts: SamplingOptions,
) -> CliResult {
    let (desc, mut ac) = load(descriptor, opts)?;
    if let Some(s0) = start {
        ac = ac.with_start(s0);
    }
    let inv = involute(&ac, InvoluteParams { c, orientation }).map_err(gate)?;
    create_dir(out_dir)?;
    write_points(&out_dir.join("involute.csv"), "s", inv.s(), inv.points())?;
    let fig = FigureSpec {
        curves: vec![
            Polyline { label: "parent".into(), points: ac.points().to_vec(), style: Style::solid("#1f4e9c", 2.0) },
            Polyline { label: "involute".into(), points: inv.points().to_vec(), style: Style::solid("#b23a2b", 1.5) },
        ],
        markers: Vec::new(),
    };
    write_text(&out_dir.join("involute.svg"), &fig.to_svg())?;
    let (lo, hi) = ac.s_range();
    let min_speed =
        ac.s().iter().zip(ac.kappa()).map(|(&s, &k)| ((c - s) * k).abs()).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "curve: {desc}\nc: {c} (parent arclength [{lo}, {hi}])\ngate c outside interval: pass\n\
         gate min |(c - s) kappa| = {min_speed:e}: pass\nnodes: {}\nlength: {}\n\
         wrote involute.csv, involute.svg to {}\n",
        inv.len(),
        inv.length(),
        out_dir.display()
    ))
}

/// Full analysis report as JSON, written to `out` or returned for stdout.
pub fn cmd_analyze(descriptor: &str, out: Option<&Path>, opts: AnalysisOptions) -> CliResult {
    let desc: Descriptor = descriptor.parse().map_err(gate)?;
    let spec = build_curve(&desc).map_err(gate)?;
    let report = analysis::analyze(&desc.to_string(), &spec, opts).map_err(gate)?;
    emit_json(out, report.to_json())
}

fn emit_json(out: Option<&Path>, json: String) -> CliResult {
    match out {
        Some(path) => {
            write_text(path, &json)?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(json),
    }
}

/// Draws the limaçon with its involute. Any failed internal check exits 4.
pub fn cmd_figure1(out: &Path) -> CliResult {
    let fig = figure1().map_err(|e| CliError::new(EXIT_FIGURE, format!("figure gate: {e}")))?;
    write_text(out, &fig.spec.to_svg())?;
    Ok(format!(
        "involute constant c = {}\nexplicit vs generic involute: max deviation {:e}\n\
         double point at ({:e}, {:e}), parameters ({}, {})\nwrote {}\n",
        fig.c,
        fig.max_deviation,
        fig.double_point.point.x,
        fig.double_point.point.y,
        fig.double_point.t.map_or(f64::NAN, |t| t.0),
        fig.double_point.t.map_or(f64::NAN, |t| t.1),
        out.display()
    ))
}

/// Geometry checks on one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecksReport {
    pub schema_version: u32,
    pub curve: String,
    pub seed: u64,
    pub double_points: Outcome<IntersectionReport>,
    pub simplicity: Outcome<SimplicityVerdict>,
}

pub fn cmd_checks(descriptor: &str, out: Option<&Path>, opts: AnalysisOptions) -> CliResult {
    let (desc, ac) = load(descriptor, opts.sampling)?;
    let report = ChecksReport {
        schema_version: analysis::SCHEMA_VERSION,
        curve: desc.to_string(),
        seed: opts.seed,
        double_points: double_points(&ac, default_separation(&ac)).into(),
        simplicity: simplicity_under_monotone_curvature(&ac, opts.nesting_pairs, opts.seed).into(),
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    emit_json(out, json)
}
