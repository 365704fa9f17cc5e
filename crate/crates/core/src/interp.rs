//! Piecewise-polynomial interpolants: Hermite segments and not-a-knot cubic splines.

use crate::quadrature::Integrand;

/// Locates the segment `[xs[i], xs[i+1]]` containing `x`, clamped to the table.
pub fn segment_index(xs: &[f64], x: f64) -> usize {
    debug_assert!(xs.len() >= 2);
    let i = xs.partition_point(|&v| v <= x);
    i.saturating_sub(1).min(xs.len() - 2)
}

/// Value and first three derivatives of an interpolant at one point.
#[derive(Debug, Clone, Copy)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

/// Degree-7 Hermite segment matching value and derivatives up to order 3 at both ends.
///
/// Adjacent segments built from shared node data join with three continuous derivatives.
pub fn septic<T: Integrand>(f0: [T; 4], f1: [T; 4], h: f64, u: f64) -> Jet<T> {
    let h2 = h * h;
    let h3 = h2 * h;
    let c0 = f0[0];
    let c1 = f0[1] * h;
    let c2 = f0[2] * (h2 / 2.0);
    let c3 = f0[3] * (h3 / 6.0);
    let d0 = f1[0] - (c0 + c1 + c2 + c3);
    let d1 = f1[1] * h - (c1 + c2 * 2.0 + c3 * 3.0);
    let d2 = f1[2] * h2 - (c2 * 2.0 + c3 * 6.0);
    let d3 = f1[3] * h3 - c3 * 6.0;
    let c4 = d0 * 35.0 - d1 * 15.0 + d2 * 2.5 - d3 * (1.0 / 6.0);
    let c5 = d0 * -84.0 + d1 * 39.0 - d2 * 7.0 + d3 * 0.5;
    let c6 = d0 * 70.0 - d1 * 34.0 + d2 * 6.5 - d3 * 0.5;
    let c7 = d0 * -20.0 + d1 * 10.0 - d2 * 2.0 + d3 * (1.0 / 6.0);
    poly_jet(&[c0, c1, c2, c3, c4, c5, c6, c7], h, u)
}

/// Quintic Hermite segment matching value and derivatives up to order 2 at both ends.
pub fn quintic<T: Integrand>(f0: [T; 3], f1: [T; 3], h: f64, u: f64) -> Jet<T> {
    let h2 = h * h;
    let c0 = f0[0];
    let c1 = f0[1] * h;
    let c2 = f0[2] * (h2 / 2.0);
    let d0 = f1[0] - (c0 + c1 + c2);
    let d1 = f1[1] * h - (c1 + c2 * 2.0);
    let d2 = f1[2] * h2 - c2 * 2.0;
    let c3 = d0 * 10.0 - d1 * 4.0 + d2 * 0.5;
    let c4 = d0 * -15.0 + d1 * 7.0 - d2;
    let c5 = d0 * 6.0 - d1 * 3.0 + d2 * 0.5;
    poly_jet(&[c0, c1, c2, c3, c4, c5], h, u)
}

/// Cubic Hermite segment matching value and first derivative at both ends.
pub fn cubic_hermite<T: Integrand>(f0: [T; 2], f1: [T; 2], h: f64, u: f64) -> Jet<T> {
    let c0 = f0[0];
    let c1 = f0[1] * h;
    let d0 = f1[0] - (c0 + c1);
    let d1 = f1[1] * h - c1;
    let c2 = d0 * 3.0 - d1;
    let c3 = d0 * -2.0 + d1;
    poly_jet(&[c0, c1, c2, c3], h, u)
}

/// Evaluates sum c_k u^k and its derivatives, rescaled from `u` to the physical
/// variable `x = x0 + h u`.
fn poly_jet<T: Integrand>(c: &[T], h: f64, u: f64) -> Jet<T> {
    let n = c.len();
    let mut p = c[n - 1];
    let mut p1 = c[n - 1] * 0.0;
    let mut p2 = p1;
    let mut p3 = p1;
    for k in (0..n - 1).rev() {
        p3 = p3 * u + p2 * 3.0;
        p2 = p2 * u + p1 * 2.0;
        p1 = p1 * u + p;
        p = p * u + c[k];
    }
    Jet {
        value: p,
        d1: p1 * (1.0 / h),
        d2: p2 * (1.0 / (h * h)),
        d3: p3 * (1.0 / (h * h * h)),
    }
}

/// Interpolating cubic spline with not-a-knot end conditions.
///
/// Not-a-knot reproduces cubic polynomials exactly and avoids the artificial
/// zero-curvature ends of the natural spline.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    /// Requires at least four strictly increasing abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        let n = xs.len();
        if n < 4 || ys.len() != n || xs.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        // Unknowns M_1 .. M_{n-2}; the ends are eliminated through not-a-knot.
        let k = n - 2;
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for j in 0..k {
            let i = j + 1;
            sub[j] = h[i - 1];
            diag[j] = 2.0 * (h[i - 1] + h[i]);
            sup[j] = h[i];
            rhs[j] = 6.0 * (d[i] - d[i - 1]);
        }
        let (h0, h1) = (h[0], h[1]);
        diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
        sup[0] = (h1 * h1 - h0 * h0) / h1;
        let (a, b) = (h[n - 3], h[n - 2]);
        if k == 2 {
            // The right-end substitution also lands on the first row's neighbour.
            sub[1] = (a * a - b * b) / a;
            diag[1] = (a + b) * (2.0 * a + b) / a;
        } else {
            sub[k - 1] = (a * a - b * b) / a;
            diag[k - 1] = (a + b) * (2.0 * a + b) / a;
        }

        // Thomas algorithm.
        for j in 1..k {
            let w = sub[j] / diag[j - 1];
            diag[j] -= w * sup[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        let mut inner = vec![0.0; k];
        inner[k - 1] = rhs[k - 1] / diag[k - 1];
        for j in (0..k - 1).rev() {
            inner[j] = (rhs[j] - sup[j] * inner[j + 1]) / diag[j];
        }

        let mut m = vec![0.0; n];
        m[1..n - 1].copy_from_slice(&inner);
        m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
        m[n - 1] = ((a + b) * m[n - 2] - b * m[n - 3]) / a;
        Some(Self { xs, ys, m })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Value and derivatives at `x`; the third derivative is piecewise constant.
    pub fn jet(&self, x: f64) -> Jet<f64> {
        let i = segment_index(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        let value = m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (self.ys[i] / h - m0 * h / 6.0) * a
            + (self.ys[i + 1] / h - m1 * h / 6.0) * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (self.ys[i + 1] - self.ys[i]) / h
            - (m1 - m0) * h / 6.0;
        let d2 = (m0 * a + m1 * b) / h;
        let d3 = (m1 - m0) / h;
        Jet { value, d1, d2, d3 }
    }

    /// First derivative at every knot.
    pub fn knot_slopes(&self) -> Vec<f64> {
        self.xs.iter().map(|&x| self.jet(x).d1).collect()
    }
}
