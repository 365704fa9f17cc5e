//! Adaptive Simpson quadrature with Richardson correction.

use std::ops::{Add, Mul, Sub};

use crate::geom::Vec2;

/// Values that can be integrated: a vector space with a magnitude.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
    fn finite(self) -> bool;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Integrand for Vec2 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

const MAX_DEPTH: u32 = 50;
const INITIAL_PANELS: usize = 8;

/// Tolerance policy for [`simpson`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    /// Relative to the magnitude of the coarse estimate on the whole interval.
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }
}

/// Integrates `f` over `[a, b]`. Returns `None` when a non-finite sample is hit.
///
/// Reversed bounds flip the sign, so the result is antisymmetric in `(a, b)`.
pub fn simpson<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Option<T>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    if a == b {
        return Some(f(a) * 0.0);
    }
    if b < a {
        return simpson(f, b, a, tol).map(|v| v * -1.0);
    }
    let panel = (b - a) / INITIAL_PANELS as f64;
    let mut pieces = Vec::with_capacity(INITIAL_PANELS);
    let mut coarse_mag = 0.0;
    for k in 0..INITIAL_PANELS {
        let lo = a + panel * k as f64;
        let hi = if k + 1 == INITIAL_PANELS { b } else { lo + panel };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        if !(flo.finite() && fmid.finite() && fhi.finite()) {
            return None;
        }
        let whole = (flo + fmid * 4.0 + fhi) * ((hi - lo) / 6.0);
        coarse_mag += whole.magnitude();
        pieces.push((lo, hi, flo, fmid, fhi, whole));
    }
    let eps = tol.abs.max(tol.rel * coarse_mag) / INITIAL_PANELS as f64;
    let mut total: Option<T> = None;
    for (lo, hi, flo, fmid, fhi, whole) in pieces {
        let v = recurse(&f, lo, hi, flo, fmid, fhi, whole, eps, MAX_DEPTH)?;
        total = Some(match total {
            Some(t) => t + v,
            None => v,
        });
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn recurse<T, F>(f: &F, a: f64, b: f64, fa: T, fm: T, fb: T, whole: T, eps: f64, depth: u32) -> Option<T>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    if !(flm.finite() && frm.finite()) {
        return None;
    }
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.magnitude() <= 15.0 * eps || m <= a || m >= b {
        return Some(left + right + delta * (1.0 / 15.0));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?;
    Some(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = simpson(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, Tolerance::absolute(1e-14)).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn antisymmetric() {
        let f = |x: f64| x.sin().exp();
        let a = simpson(f, 0.3, 2.0, Tolerance::absolute(1e-12)).unwrap();
        let b = simpson(f, 2.0, 0.3, Tolerance::absolute(1e-12)).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn sine_to_tolerance() {
        let v = simpson(f64::sin, 0.0, PI, Tolerance::absolute(1e-12)).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn vector_integrand() {
        let v = simpson(|t: f64| Vec2::from_angle(t), 0.0, PI / 2.0, Tolerance::absolute(1e-12)).unwrap();
        assert!((v.x - 1.0).abs() < 1e-11 && (v.y - 1.0).abs() < 1e-11);
    }

    #[test]
    fn relative_tolerance_tiny_values() {
        let f = |x: f64| 1e-200 * x.exp();
        let v = simpson(f, 0.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        assert!(((v / 1e-200) - (1f64.exp() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn non_finite_reported() {
        assert!(simpson(|x: f64| 1.0 / x, 0.0, 1.0, Tolerance::absolute(1e-9)).is_none());
    }
}
