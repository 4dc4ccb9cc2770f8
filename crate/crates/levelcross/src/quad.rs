//! Globally adaptive Gauss–Kronrod quadrature (7–15 point pair).

use crate::error::{Error, Result};

/// Tolerances and budget for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 200 }
    }
}

/// Integral value together with the final error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// One Gauss–Kronrod 15-point evaluation: (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        result_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    (value, err)
}

/// Adaptively integrates `f` over [a, b], splitting the interval with the
/// largest error estimate until the tolerances are met.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, subdivisions: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integrate: bounds [{a}, {b}] must be finite")));
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };

    struct Interval {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v0, e0) = gk15(&f, lo, hi);
    let mut segments = vec![Interval { a: lo, b: hi, value: v0, err: e0 }];
    let mut subdivisions = 0usize;

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.err).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(QuadResult { value: sign * total, error_estimate: total_err, subdivisions });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailed { error: total_err, subdivisions });
        }
        // split the worst interval
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval at machine resolution, accept what we have
            segments.push(seg);
            let total: f64 = segments.iter().map(|s| s.value).sum();
            let total_err: f64 = segments.iter().map(|s| s.err).sum();
            return Ok(QuadResult { value: sign * total, error_estimate: total_err, subdivisions });
        }
        let (vl, el) = gk15(&f, seg.a, mid);
        let (vr, er) = gk15(&f, mid, seg.b);
        segments.push(Interval { a: seg.a, b: mid, value: vl, err: el });
        segments.push(Interval { a: mid, b: seg.b, value: vr, err: er });
        subdivisions += 1;
    }
}
