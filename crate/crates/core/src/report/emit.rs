//! CSV and SVG writers.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;

/// Writes `header` (`s` or `t`) and x, y columns.
pub fn write_csv<W: Write>(out: W, header: &str, rows: impl IntoIterator<Item = (f64, Vec2)>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([header, "x", "y"])?;
    for (s, p) in rows {
        w.write_record([fmt_num(s), fmt_num(p.x), fmt_num(p.y)])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip representation.
fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub stroke: String,
    pub width: f64,
    pub dashed: bool,
}

impl Style {
    pub fn solid(stroke: &str, width: f64) -> Self {
        Self { stroke: stroke.into(), width, dashed: false }
    }

    pub fn dashed(stroke: &str, width: f64) -> Self {
        Self { stroke: stroke.into(), width, dashed: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub label: String,
    pub points: Vec<Vec2>,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub label: String,
    pub at: Vec2,
    pub color: String,
}

/// What to draw, in model coordinates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub curves: Vec<Polyline>,
    pub markers: Vec<Marker>,
}

pub const VIEWPORT: f64 = 1000.0;
const MARGIN: f64 = 0.02;
const MARKER_RADIUS: f64 = 5.0;

impl FigureSpec {
    fn bounds(&self) -> Option<(Vec2, Vec2)> {
        let mut pts = self.curves.iter().flat_map(|c| c.points.iter()).chain(self.markers.iter().map(|m| &m.at));
        let first = *pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| {
            (Vec2::new(lo.x.min(p.x), lo.y.min(p.y)), Vec2::new(hi.x.max(p.x), hi.y.max(p.y)))
        }))
    }

    /// Model-to-viewport map: equal aspect, centered, 2% margins, y up.
    fn transform(&self) -> impl Fn(Vec2) -> (f64, f64) {
        let (lo, hi) = self.bounds().unwrap_or((Vec2::ZERO, Vec2::new(1.0, 1.0)));
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-300);
        let inner = VIEWPORT * (1.0 - 2.0 * MARGIN);
        let scale = inner / span;
        let mid = (lo + hi) * 0.5;
        move |p: Vec2| (VIEWPORT / 2.0 + (p.x - mid.x) * scale, VIEWPORT / 2.0 - (p.y - mid.y) * scale)
    }

    /// SVG 1.1 document with fixed three-decimal coordinates.
    pub fn to_svg(&self) -> String {
        let map = self.transform();
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{v}" height="{v}" viewBox="0 0 {v} {v}">"#,
            v = VIEWPORT
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{v}" height="{v}" fill="white"/>"#, v = VIEWPORT);
        for c in &self.curves {
            let pts: Vec<String> = c
                .points
                .iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let dash = if c.style.dashed { r#" stroke-dasharray="8,6""# } else { "" };
            let _ = writeln!(
                out,
                r#"<polyline id="{}" fill="none" stroke="{}" stroke-width="{:.3}"{dash} points="{}"/>"#,
                c.label,
                c.style.stroke,
                c.style.width,
                pts.join(" ")
            );
        }
        for m in &self.markers {
            let (x, y) = map(m.at);
            let _ = writeln!(
                out,
                r#"<circle class="{}" cx="{x:.3}" cy="{y:.3}" r="{MARKER_RADIUS:.3}" fill="none" stroke="{}" stroke-width="2.000"/>"#,
                m.label, m.color
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, "s", [(0.0, Vec2::new(1.0, -0.5)), (0.1, Vec2::new(2.0, 3.0))]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "s,x,y\n0.0,1.0,-0.5\n0.1,2.0,3.0\n");
    }

    #[test]
    fn viewport_contains_points_with_margin() {
        let fig = FigureSpec {
            curves: vec![Polyline {
                label: "c".into(),
                points: vec![Vec2::new(-3.0, 0.0), Vec2::new(5.0, 2.0)],
                style: Style::solid("black", 1.0),
            }],
            markers: vec![],
        };
        let map = fig.transform();
        let (x0, _) = map(Vec2::new(-3.0, 0.0));
        let (x1, _) = map(Vec2::new(5.0, 2.0));
        assert!((x0 - 20.0).abs() < 1e-9 && (x1 - 980.0).abs() < 1e-9);
        assert!(fig.to_svg().contains("points=\"20.000,"));
    }
}
