//! Osculating circles, disk nesting, and self-intersections.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::ArcCurve;
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::regularity::critical_points_of_R;

/// Additive slack for closed-disk inclusion.
pub const NESTING_SLACK: f64 = 1e-9;
/// Default minimum arclength separation of a double point, in node spacings.
pub const SEPARATION_SPACINGS: f64 = 10.0;
/// Radius, in node spacings, excluded around singular points.
pub const EXCLUSION_SPACINGS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OsculatingCircle {
    pub center: Vec2,
    pub radius: f64,
    pub s: f64,
}

pub fn osculating_circle(ac: &ArcCurve, s: f64) -> Result<OsculatingCircle> {
    let f = ac.eval_frame(s)?;
    let r = f.radius(ac.kappa_min())?;
    Ok(OsculatingCircle { center: f.point + f.normal * r, radius: r.abs(), s })
}

/// Slack of the inclusion of the smaller disk in the larger one; negative
/// when neither contains the other.
pub fn nesting_margin(a: &OsculatingCircle, b: &OsculatingCircle) -> f64 {
    a.radius.max(b.radius) - a.radius.min(b.radius) - a.center.distance(b.center)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingReport {
    pub range: (f64, f64),
    pub pairs: usize,
    pub seed: u64,
    pub worst_margin: f64,
    /// Every sampled pair satisfied inclusion up to [`NESTING_SLACK`].
    pub nested: bool,
    /// Sampled triples, sorted by arclength, were nested in sequence.
    pub chain_ordered: bool,
}

/// Samples `n_pairs` random pairs of osculating disks on `range` and checks
/// that one always contains the other.
///
/// Requires R to have no sign change of R' inside the range; a constant
/// radius is accepted (all disks coincide).
pub fn tait_kneser_check(ac: &ArcCurve, range: (f64, f64), n_pairs: usize, seed: u64) -> Result<NestingReport> {
    let (lo, hi) = range;
    let (a, b) = ac.s_range();
    if !(lo < hi && lo >= a && hi <= b) {
        return Err(Error::InvalidArgument(format!("range ({lo}, {hi}) not inside ({a}, {b})")));
    }
    ac.require_nonzero_curvature_on(lo, hi)?;
    let cp = critical_points_of_R(ac)?;
    if let Some(&at) = cp.sign_changes.iter().find(|&&z| z > lo && z < hi) {
        return Err(Error::NonMonotonePrecondition { lo, hi, at });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..n_pairs {
        let ca = osculating_circle(ac, rng.gen_range(lo..=hi))?;
        let cb = osculating_circle(ac, rng.gen_range(lo..=hi))?;
        worst = worst.min(nesting_margin(&ca, &cb));
    }
    let mut chain_ordered = true;
    for _ in 0..n_pairs / 4 {
        let mut s: [f64; 3] = [(); 3].map(|_| rng.gen_range(lo..=hi));
        s.sort_by(f64::total_cmp);
        let c = [osculating_circle(ac, s[0])?, osculating_circle(ac, s[1])?, osculating_circle(ac, s[2])?];
        let ordered = nesting_margin(&c[0], &c[1]) >= -NESTING_SLACK
            && nesting_margin(&c[1], &c[2]) >= -NESTING_SLACK
            && nesting_margin(&c[0], &c[2]) >= -NESTING_SLACK;
        // Radii along a monotone arc must be monotone too.
        let monotone_r = (c[0].radius - c[1].radius) * (c[1].radius - c[2].radius) >= -NESTING_SLACK;
        chain_ordered &= ordered && monotone_r;
    }
    if n_pairs == 0 {
        worst = 0.0;
    }
    Ok(NestingReport {
        range,
        pairs: n_pairs,
        seed,
        worst_margin: worst,
        nested: worst >= -NESTING_SLACK,
        chain_ordered,
    })
}

/// One self-intersection of the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Arclengths of the two passes, `s.0 < s.1`.
    pub s: (f64, f64),
    /// Source parameters of the two passes, when known.
    pub t: Option<(f64, f64)>,
    /// Intersection of the two polyline segments.
    pub polyline_point: Vec2,
    /// Intersection of the smooth interpolant.
    pub point: Vec2,
    /// |p(s.0) - p(s.1)| after refinement.
    pub residual: f64,
    /// Distance from `polyline_point` to the farther of the two segments.
    pub segment_distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub separation: f64,
    pub crossings: Vec<Crossing>,
}

impl IntersectionReport {
    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Drops crossings with either pass within `radius` of a point in `around`.
    pub fn excluding(mut self, around: &[f64], radius: f64) -> Self {
        self.crossings.retain(|c| !around.iter().any(|&z| (c.s.0 - z).abs() <= radius || (c.s.1 - z).abs() <= radius));
        self
    }
}

/// Default separation for [`double_points`]: ten node spacings.
pub fn default_separation(ac: &ArcCurve) -> f64 {
    SEPARATION_SPACINGS * ac.spacing()
}

const PARAM_SLACK: f64 = 1e-9;

fn segment_intersection(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let w = q1 - q0;
    let denom = r.cross(w);
    if denom == 0.0 {
        return None;
    }
    let d = q0 - p0;
    let t = d.cross(w) / denom;
    let u = d.cross(r) / denom;
    // Slightly widened so a crossing exactly at a shared node is not lost to rounding.
    let inside = |v: f64| (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&v);
    (inside(t) && inside(u)).then_some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sq();
    let t = if l2 == 0.0 { 0.0 } else { ((p - a).dot(ab) / l2).clamp(0.0, 1.0) };
    p.distance(a + ab * t)
}

/// Newton iteration on p(sa) = p(sb) starting from the polyline crossing.
fn refine(ac: &ArcCurve, mut sa: f64, mut sb: f64) -> Result<(f64, f64, f64)> {
    let (lo, hi) = ac.s_range();
    let mut best = (sa, sb, ac.point_at(sa)?.distance(ac.point_at(sb)?));
    for _ in 0..50 {
        let ja = ac.position_jet(sa)?;
        let jb = ac.position_jet(sb)?;
        let f = ja.value - jb.value;
        let res = f.norm();
        if res < best.2 {
            best = (sa, sb, res);
        }
        if res <= 1e-14 {
            break;
        }
        // Solve [Ta, -Tb] (da, db) = -f.
        let det = ja.d1.cross(-jb.d1);
        if det.abs() < 1e-12 {
            break;
        }
        let da = (-f).cross(-jb.d1) / det;
        let db = ja.d1.cross(-f) / det;
        sa = (sa + da).clamp(lo, hi);
        sb = (sb + db).clamp(lo, hi);
    }
    Ok(best)
}

/// Self-intersections of the curve between passes more than `separation`
/// apart in arclength.
///
/// Candidate segment pairs come from a uniform grid hash over segment
/// bounding boxes. Each polyline crossing is refined on the smooth curve. A
/// contact between the very first and very last node (a closed curve) is not
/// a double point.
pub fn double_points(ac: &ArcCurve, separation: f64) -> Result<IntersectionReport> {
    let pts = ac.points();
    let s = ac.s();
    let n = pts.len();
    if n < 4 {
        return Err(Error::InvalidArgument("double point search needs at least 4 nodes".into()));
    }
    if !(separation > 2.0 * ac.spacing()) {
        return Err(Error::InvalidArgument(format!(
            "separation {separation} must exceed two node spacings ({})",
            2.0 * ac.spacing()
        )));
    }
    let segs = n - 1;
    let mean_len = pts.windows(2).map(|w| w[0].distance(w[1])).sum::<f64>() / segs as f64;
    let cell = 2.0 * mean_len.max(f64::MIN_POSITIVE);
    let key = |v: f64| (v / cell).floor() as i64;

    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..segs {
        let (a, b) = (pts[i], pts[i + 1]);
        for cx in key(a.x.min(b.x))..=key(a.x.max(b.x)) {
            for cy in key(a.y.min(b.y))..=key(a.y.max(b.y)) {
                grid.entry((cx, cy)).or_default().push(i);
            }
        }
    }
    let mut candidates = BTreeSet::new();
    for members in grid.values() {
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if s[j] - s[i + 1] > separation - 2.0 * ac.spacing() {
                    candidates.insert((i, j));
                }
            }
        }
    }

    let mut crossings: Vec<Crossing> = Vec::new();
    for (i, j) in candidates {
        let Some((t, u)) = segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]) else {
            continue;
        };
        if (i == 0 && t <= PARAM_SLACK) && (j == segs - 1 && u >= 1.0 - PARAM_SLACK) {
            continue;
        }
        let sa0 = s[i] + t * (s[i + 1] - s[i]);
        let sb0 = s[j] + u * (s[j + 1] - s[j]);
        if sb0 - sa0 <= separation {
            continue;
        }
        let polyline_point = pts[i] + (pts[i + 1] - pts[i]) * t;
        let segment_distance = point_segment_distance(polyline_point, pts[i], pts[i + 1])
            .max(point_segment_distance(polyline_point, pts[j], pts[j + 1]));
        let (sa, sb, residual) = refine(ac, sa0, sb0)?;
        let point = (ac.point_at(sa)? + ac.point_at(sb)?) * 0.5;
        let h2 = 2.0 * ac.spacing();
        // The same crossing seen from neighbouring segments, or the same point
        // reached a third time (a closed curve through its own double point).
        let dup = crossings
            .iter()
            .any(|c| ((c.s.0 - sa).abs() <= h2 && (c.s.1 - sb).abs() <= h2) || c.point.distance(point) <= 1e-7);
        if dup {
            continue;
        }
        crossings.push(Crossing {
            s: (sa, sb),
            t: ac.param_at(sa).zip(ac.param_at(sb)),
            polyline_point,
            point,
            residual,
            segment_distance,
        });
    }
    crossings.sort_by(|a, b| a.s.0.total_cmp(&b.s.0).then(a.s.1.total_cmp(&b.s.1)));
    Ok(IntersectionReport { separation, crossings })
}

/// Outcome of the monotone-curvature simplicity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicityVerdict {
    /// False when R is not strictly monotone, so no conclusion is drawn.
    pub applicable: bool,
    pub reason: Option<String>,
    /// No double points and nested osculating disks.
    pub simple: Option<bool>,
    pub nesting: Option<NestingReport>,
    pub intersections: Option<IntersectionReport>,
}

/// With strictly monotone curvature a curve has nested osculating disks and
/// no double points. Checks both on the full curve.
pub fn simplicity_under_monotone_curvature(ac: &ArcCurve, n_pairs: usize, seed: u64) -> Result<SimplicityVerdict> {
    let cp = critical_points_of_R(ac)?;
    if !cp.is_empty() {
        return Ok(SimplicityVerdict {
            applicable: false,
            reason: Some(format!(
                "radius of curvature is not strictly monotone ({} sign changes, {} stationary runs)",
                cp.sign_changes.len(),
                cp.stationary.len()
            )),
            simple: None,
            nesting: None,
            intersections: None,
        });
    }
    let nesting = tait_kneser_check(ac, ac.s_range(), n_pairs, seed)?;
    let intersections = double_points(ac, default_separation(ac))?;
    Ok(SimplicityVerdict {
        applicable: true,
        reason: None,
        simple: Some(nesting.nested && intersections.is_empty()),
        nesting: Some(nesting),
        intersections: Some(intersections),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_segments() {
        let (t, u) =
            segment_intersection(Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, -1.0), Vec2::new(0.0, 3.0))
                .unwrap();
        assert_eq!((t, u), (0.5, 0.25));
        assert!(segment_intersection(Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)).is_none());
    }

    #[test]
    fn margin_of_concentric_disks() {
        let a = OsculatingCircle { center: Vec2::ZERO, radius: 2.0, s: 0.0 };
        let b = OsculatingCircle { center: Vec2::new(0.5, 0.0), radius: 1.0, s: 1.0 };
        assert!((nesting_margin(&a, &b) - 0.5).abs() < 1e-15);
    }
}
