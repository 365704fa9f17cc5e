//! Acceptance criteria, one PASS/FAIL line each. Run with `cargo test --test acceptance`.
//! Set UPDATE_GOLDEN=1 to rewrite the stored figure.

use std::f64::consts::PI;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evolute_kit::checks::{default_separation, double_points, tait_kneser_check, NESTING_SLACK};
use evolute_kit::curve::{catalog, reparametrize_by_arclength, ArcCurve, CurveSpec, SamplingOptions};
use evolute_kit::evolute::{
    evolute, evolute_curvature, involute, involute_points, verify_increvol_identity, InvoluteParams,
};
use evolute_kit::geom::{diameter, hausdorff};
use evolute_kit::quadrature::{simpson, Tolerance};
use evolute_kit::regularity::{classify_cusp, critical_points_of_R, tangent_holder_exponent, vanishing_order, Classification, ScaleWindow};
use evolute_kit::report::figure::figure1;
use evolute_kit::Vec2;

type Check = Result<String, String>;

fn arc(spec: &CurveSpec) -> ArcCurve {
    reparametrize_by_arclength(spec, SamplingOptions::default()).unwrap()
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ellipse() -> ArcCurve {
    arc(&catalog::ellipse(2.0, 1.0).unwrap())
}

fn spiral() -> ArcCurve {
    arc(&catalog::logarithmic_spiral(1.0).unwrap())
}

/// Ellipse arcs between consecutive vertices, as parent arclength intervals.
fn ellipse_quarters(ac: &ArcCurve) -> Vec<(f64, f64)> {
    let z = critical_points_of_R(ac).unwrap().sign_changes;
    z.windows(2).map(|w| (w[0], w[1])).collect()
}

fn limacon_involute() -> (ArcCurve, f64) {
    let spec = catalog::limacon_default().unwrap();
    let ac = arc(&spec);
    let c = -simpson(|u: f64| (5.0 + 4.0 * u.cos()).sqrt(), -PI, spec.interval().0, Tolerance::absolute(1e-13))
        .unwrap();
    (involute(&ac, InvoluteParams::new(c)).unwrap(), c)
}

fn c1_circle() -> Check {
    let start = Instant::now();
    let ac = arc(&catalog::circle(2.0).unwrap());
    let ev = evolute(&ac).unwrap();
    let worst = ev.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-6 && elapsed < 1.0, format!("max |e| = {worst:.2e}, {elapsed:.3} s"))
}

fn c2_closed_forms() -> Check {
    let (a, b) = (2.0, 1.0);
    let ac = ellipse();
    let ev = evolute(&ac).unwrap();
    let e_err = ev
        .points()
        .iter()
        .zip(ac.params().unwrap())
        .map(|(p, &t)| p.distance(Vec2::new((a * a - b * b) / a * t.cos().powi(3), (b * b - a * a) / b * t.sin().powi(3))))
        .fold(0.0, f64::max);
    let ac = arc(&catalog::parabola().unwrap());
    let ev = evolute(&ac).unwrap();
    let p_err = ev
        .points()
        .iter()
        .zip(ac.params().unwrap())
        .map(|(p, &t)| p.distance(Vec2::new(-4.0 * t.powi(3), 0.5 + 3.0 * t * t)))
        .fold(0.0, f64::max);
    ensure(e_err <= 1e-5 && p_err <= 1e-5, format!("ellipse {e_err:.2e}, parabola {p_err:.2e}"))
}

fn c3_tangent_transfer() -> Check {
    let ac = spiral();
    let ev = evolute(&ac).unwrap();
    let mut worst: f64 = 0.0;
    let p = ev.points();
    for i in 2..ac.len() - 2 {
        // Five-point central difference of the evolute samples.
        let t = (p[i - 2] - p[i + 2] + (p[i + 1] - p[i - 1]) * 8.0).normalized();
        let n = ac.normal(i);
        worst = worst.max(t.cross(n).abs().asin());
    }
    ensure(worst <= 1e-4, format!("max angle {worst:.2e} rad"))
}

fn c4_arclength_transfer() -> Check {
    let mut worst: f64 = 0.0;
    let ac = spiral();
    let ev = evolute(&ac).unwrap();
    let n = ac.len();
    let len = ev.polyline_length(0, n - 1);
    let dr = (ev.radius()[n - 1] - ev.radius()[0]).abs();
    worst = worst.max((len - dr).abs() / dr);

    let ac = ellipse();
    let ev = evolute(&ac).unwrap();
    let quarters = ellipse_quarters(&ac);
    for &(z0, z1) in &quarters {
        let i0 = ac.s().partition_point(|&s| s <= z0);
        let i1 = ac.s().partition_point(|&s| s < z1) - 1;
        let (e0, e1) = (ev.point_at(z0).unwrap(), ev.point_at(z1).unwrap());
        let len = e0.distance(ev.points()[i0]) + ev.polyline_length(i0, i1) + ev.points()[i1].distance(e1);
        let dr = (ac.radius_at(z1).unwrap() - ac.radius_at(z0).unwrap()).abs();
        worst = worst.max((len - dr).abs() / dr);
    }
    ensure(worst <= 1e-4 && quarters.len() >= 3, format!("max rel err {worst:.2e} over spiral and {} quarter arcs", quarters.len()))
}

fn c5_curvature_transfer() -> Check {
    let ac = spiral();
    let ev = evolute(&ac).unwrap();
    let n = ac.len();
    let mut worst: f64 = 0.0;
    for k in 0..64 {
        let i = 4 + k * (n - 9) / 63;
        let direct = ev.polyline_curvature(i).unwrap();
        let formula = evolute_curvature(&ac, ac.s()[i]).unwrap();
        worst = worst.max(((direct - formula) / formula).abs());
    }
    ensure(worst <= 1e-3, format!("max rel err {worst:.2e} at 64 probes"))
}

fn c6_increvol() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    let e = ellipse();
    let (z0, z1) = ellipse_quarters(&e)[0];
    let l = arc(&catalog::limacon_default().unwrap());
    let s = spiral();
    let cases: [(&ArcCurve, (f64, f64)); 3] = [(&s, s.s_range()), (&e, (z0, z1)), (&l, l.s_range())];
    for (ac, (lo, hi)) in cases {
        for _ in 0..8 {
            let a = rng.gen_range(lo..hi);
            let b = rng.gen_range(lo..hi);
            let (s1, s2) = (a.min(b), a.max(b));
            if s2 - s1 < 1e-9 {
                continue;
            }
            let dr = (ac.radius_at(s2).unwrap() - ac.radius_at(s1).unwrap()).abs();
            let r = verify_increvol_identity(ac, s1, s2).unwrap();
            worst = worst.max(r / (1.0 + dr));
        }
    }
    ensure(worst <= 1e-6, format!("max residual / (1 + |dR|) = {worst:.2e}"))
}

fn c7_roundtrip() -> Check {
    let ac = spiral();
    let ev = evolute(&ac).unwrap();
    let evc = ev.to_arc_curve().unwrap();
    let back = involute(&evc, InvoluteParams::new(0.0)).unwrap();
    let rel = hausdorff(back.points(), ac.points()) / diameter(ac.points());
    let delta = 0.25;
    let par = involute_points(&evc, InvoluteParams::new(delta)).unwrap();
    let off = par.iter().zip(ac.points()).map(|(p, q)| (p.distance(*q) - delta).abs()).fold(0.0, f64::max);
    ensure(rel <= 1e-4 && off <= 1e-6, format!("hausdorff / diameter {rel:.2e}, offset err {off:.2e}"))
}

fn profile(m: u32) -> ArcCurve {
    reparametrize_by_arclength(&catalog::radius_profile(m, 1.0, 1.0).unwrap(), SamplingOptions::analysis()).unwrap()
}

fn c8_exponent_laws() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 1..=5u32 {
        let r = classify_cusp(&profile(m), 0.0).unwrap();
        ok &= r.order_m == m;
        let expected = match m {
            1 => Classification::RegularPoint,
            2 | 4 => Classification::Cusp,
            _ => Classification::C1OneOverMPoint,
        };
        ok &= r.classification == expected;
        match m {
            3 => {
                let alpha = r.holder_alpha.unwrap();
                let (e1, e2) = r.branch_exponents.unwrap();
                ok &= (alpha - 1.0 / 3.0).abs() <= 0.05 && (e1 - 4.0 / 3.0).abs() <= 0.05 && (e2 - 4.0 / 3.0).abs() <= 0.05;
                notes.push(format!("m=3 alpha {alpha:.4} graph {e1:.4}/{e2:.4}"));
            }
            2 | 4 => {
                let target = 1.0 + 1.0 / m as f64;
                let (e1, e2) = r.branch_exponents.unwrap();
                ok &= (e1 - target).abs() <= 0.05 && (e2 - target).abs() <= 0.05;
                notes.push(format!("m={m} branches {e1:.4}/{e2:.4}"));
            }
            _ => {}
        }
    }
    ensure(ok, format!("orders 1..5 recovered; {}", notes.join("; ")))
}

fn c9_flat() -> Check {
    let ac = reparametrize_by_arclength(&catalog::flat_profile(1.0).unwrap(), SamplingOptions::analysis()).unwrap();
    let w = ScaleWindow::for_curve(&ac, 0.0).unwrap();
    let order = vanishing_order(|s| ac.radius_at(s), 0.0, w).unwrap();
    let alpha = tangent_holder_exponent(&ac, 0.0, w).unwrap().holder_alpha;
    ensure(order.m_minus.is_infinite() && alpha <= 0.05, format!("order {:?}, holder {alpha:.4}", order.m_minus))
}

fn c10_limacon() -> Check {
    let ac = arc(&catalog::limacon_default().unwrap());
    let rep = double_points(&ac, default_separation(&ac)).unwrap();
    if rep.crossings.len() != 1 {
        return Err(format!("{} double points", rep.crossings.len()));
    }
    let x = &rep.crossings[0];
    let (ta, tb) = x.t.unwrap();
    let t_err = (ta + 2.0 * PI / 3.0).abs().max((tb - 2.0 * PI / 3.0).abs());
    let fig = figure1().map_err(|e| e.to_string())?;
    let (inv, _) = limacon_involute();
    let z = [inv.s_range().0, inv.s_range().1];
    let inv_rep = double_points(&inv, default_separation(&inv)).unwrap().excluding(&z, 4.0 * inv.spacing());
    ensure(
        x.point.norm() <= 1e-6 && t_err <= 1e-6 && fig.max_deviation <= 1e-6 && inv_rep.is_empty(),
        format!(
            "double point |p| {:.2e}, parameter err {t_err:.2e}, involute deviation {:.2e}, involute crossings {}",
            x.point.norm(),
            fig.max_deviation,
            inv_rep.crossings.len()
        ),
    )
}

fn c11_tait_kneser() -> Check {
    let mut worst = f64::INFINITY;
    let mut curves: Vec<(String, ArcCurve, Vec<(f64, f64)>)> = Vec::new();
    let s = spiral();
    let r = s.s_range();
    curves.push(("spiral".into(), s, vec![r]));
    let inv = limacon_involute().0;
    let r = inv.s_range();
    curves.push(("limacon involute".into(), inv, vec![r]));
    for m in [1, 3, 5] {
        let p = arc(&catalog::radius_profile(m, 1.0, 1.0).unwrap());
        let r = p.s_range();
        curves.push((format!("profile m={m}"), p, vec![r]));
    }
    let e = ellipse();
    let q = ellipse_quarters(&e);
    curves.push(("ellipse".into(), e, q));

    let mut failures = Vec::new();
    let mut pairs = 0;
    for (k, (name, ac, ranges)) in curves.iter().enumerate() {
        for &(lo, hi) in ranges {
            let rep = tait_kneser_check(ac, (lo, hi), 200, k as u64).unwrap();
            pairs += rep.pairs;
            worst = worst.min(rep.worst_margin);
            if !rep.nested || rep.worst_margin < -NESTING_SLACK {
                failures.push(format!("{name} nesting"));
            }
            let piece = if ranges.len() > 1 { arc_piece(ac, lo, hi) } else { ac.clone() };
            if !double_points(&piece, default_separation(&piece)).unwrap().is_empty() {
                failures.push(format!("{name} double point"));
            }
        }
    }
    ensure(failures.is_empty(), format!("{pairs} pairs, worst margin {worst:.2e}; {}", failures.join(", ")))
}

/// Restriction of `ac` to `[lo, hi]`, rebuilt as its own curve.
fn arc_piece(ac: &ArcCurve, lo: f64, hi: f64) -> ArcCurve {
    let a = ac.clone();
    let f0 = ac.eval_frame(lo).unwrap();
    evolute_kit::curve::curve_from_curvature(move |s| a.kappa_at(s).unwrap(), (lo, hi), f0.point, f0.phi, ac.options())
        .unwrap()
}

fn c12_cli() -> Check {
    let bin = env!("CARGO_BIN_EXE_evolute-kit");
    let run = || Command::new(bin).args(["analyze", "logarithmic_spiral:k=1", "--seed", "0"]).output().unwrap();
    let (a, b) = (run(), run());
    let same_json = a.status.success() && a.stdout == b.stdout;

    let dir = std::env::temp_dir().join(format!("evolute-kit-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("figure1.svg");
    let out = Command::new(bin).args(["figure1", "--out"]).arg(&path).output().unwrap();
    if !out.status.success() {
        return Err(format!("figure1 exited {:?}", out.status.code()));
    }
    let svg = fs::read_to_string(&path).unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/figure1.svg");
    if std::env::var_os("UPDATE_GOLDEN").is_some() || !golden.exists() {
        fs::write(&golden, &svg).unwrap();
    }
    let same_svg = fs::read_to_string(&golden).unwrap() == svg;
    ensure(same_json && same_svg, format!("analyze byte-identical: {same_json}, figure1 matches golden: {same_svg}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("1 circle evolute degenerates to its center", c1_circle),
        ("2 ellipse and parabola evolutes match closed forms", c2_closed_forms),
        ("3 evolute tangent is the parent normal", c3_tangent_transfer),
        ("4 evolute arclength equals |dR|", c4_arclength_transfer),
        ("5 evolute curvature -kappa^3/kappa'", c5_curvature_transfer),
        ("6 integral identity for evolute increments", c6_increvol),
        ("7 involute of evolute round trip and parallel offset", c7_roundtrip),
        ("8 exponent laws and order recovery", c8_exponent_laws),
        ("9 infinite-order flat profile", c9_flat),
        ("10 limacon double point and involute", c10_limacon),
        ("11 osculating disks nest on monotone arcs", c11_tait_kneser),
        ("12 CLI determinism and golden figure", c12_cli),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
