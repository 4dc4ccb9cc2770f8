//! Derivatives in the drift rate c and the level u: the large-u
//! approximations F and G of the true derivatives, the exact derivatives of
//! the kernel A itself, and a small implicit-function engine used for level
//! curve slopes. The two notions (approximating the derivative versus
//! differentiating the approximation) are deliberately kept apart.

use crate::coreint::{elem_integral, CoreParams};
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;
use crate::special::normal_pdf;

/// Accuracy hint: the F/G approximations carry O(ln u / u) remainders and
/// can even flip sign at small u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QualityFlag {
    LargeUOk,
    SmallUWarning,
}

fn quality(p: &CoreParams) -> QualityFlag {
    if p.u * p.m * p.m / p.dsq >= 5.0 {
        QualityFlag::LargeUOk
    } else {
        QualityFlag::SmallUWarning
    }
}

/// A derivative value together with its displayed addends; the addends sum
/// to the value exactly.
#[derive(Debug, Clone)]
pub struct DerivReport {
    pub value: f64,
    pub decomposition: Vec<(&'static str, f64)>,
    pub quality: QualityFlag,
}

impl DerivReport {
    fn from_parts(parts: Vec<(&'static str, f64)>, quality: QualityFlag) -> Self {
        let value = parts.iter().map(|(_, v)| v).sum();
        Self { value, decomposition: parts, quality }
    }
}

fn elems(p: &CoreParams) -> Result<(f64, f64, f64)> {
    let quad = QuadratureConfig { max_subdivisions: 600, ..Default::default() };
    Ok((
        elem_integral(0, p, &quad)?,
        elem_integral(1, p, &quad)?,
        elem_integral(2, p, &quad)?,
    ))
}

/// Large-u approximation F of d/dc P{T <= t}: two drift-weighted difference
/// groups plus the plain E^1, E^2 terms.
pub fn approx_dc(p: &CoreParams) -> Result<DerivReport> {
    require_positive_drift(p)?;
    let (e0, e1, e2) = elems(p)?;
    let gap = 1.0 - p.c * p.m;
    let w = p.m * p.u / (p.c * p.c * p.dsq);
    let parts = vec![
        ("weighted (1-cM)E0-E1 group", w * (gap * e0 - e1)),
        ("weighted (1-cM)E1-E2 group", -w * (gap * e1 - e2)),
        ("-E1/c", -e1 / p.c),
        ("E2/c", e2 / p.c),
    ];
    Ok(DerivReport::from_parts(parts, quality(p)))
}

/// Large-u approximation G of d/du P{T <= t}.
pub fn approx_du(p: &CoreParams) -> Result<DerivReport> {
    require_positive_drift(p)?;
    let (_, e1, e2) = elems(p)?;
    let gap = 1.0 - p.c * p.m;
    let parts = vec![
        (
            "weighted (1-cM)E1-E2 group",
            p.m / (p.c * p.dsq) * (gap * e1 - e2),
        ),
        ("(E1-E2)/u", (e1 - e2) / p.u),
    ];
    Ok(DerivReport::from_parts(parts, quality(p)))
}

fn require_positive_drift(p: &CoreParams) -> Result<()> {
    if p.c > 0.0 {
        Ok(())
    } else {
        Err(Error::Regime("derivative expressions need c > 0".into()))
    }
}

// density of the kernel's integrand at the upper endpoint x = ct/u; this is
// the boundary contribution of differentiating the integration limit
fn endpoint_density(p: &CoreParams) -> f64 {
    let (c, u, t, m, dsq) = (p.c, p.u, p.t, p.m, p.dsq);
    let w = 1.0 + c * t / u;
    normal_pdf(c * m * w, c * c * dsq / u * w, c * t / u).unwrap_or(0.0)
}

/// Exact d/dc of the kernel A(t), by direct differentiation.
pub fn a_dc(p: &CoreParams) -> Result<f64> {
    require_positive_drift(p)?;
    let (e0, e1, e2) = elems(p)?;
    let (c, u, dsq) = (p.c, p.u, p.dsq);
    let gap = 1.0 - c * p.m;
    let c3d = c * c * c * dsq;
    Ok(u * gap / c3d * e0 - (u * (2.0 - c * p.m) / (c * c * dsq) + 1.0) / c * e1
        + u / c3d * e2
        + p.t / (u + c * p.t) * endpoint_density(p))
}

/// Same value grouped into the O(1/u) difference combinations; must agree
/// with [`a_dc`] to machine accuracy.
pub fn a_dc_grouped(p: &CoreParams) -> Result<f64> {
    require_positive_drift(p)?;
    let (e0, e1, e2) = elems(p)?;
    let (c, u, dsq) = (p.c, p.u, p.dsq);
    let gap = 1.0 - c * p.m;
    let w = u / (c * c * c * dsq);
    Ok(w * (gap * e0 - e1) - w * (gap * e1 - e2) - e1 / c
        + p.t / (u + c * p.t) * endpoint_density(p))
}

/// Exact d/du of the kernel A(t).
pub fn a_du(p: &CoreParams) -> Result<f64> {
    require_positive_drift(p)?;
    let (e0, e1, e2) = elems(p)?;
    let (c, u, t, dsq) = (p.c, p.u, p.t, p.dsq);
    let gap = 1.0 - c * p.m;
    let c2d = c * c * dsq;
    Ok(-gap * gap / (2.0 * c2d) * e0 + e1 / (2.0 * u) + gap / c2d * e1
        - e2 / (2.0 * c2d)
        - c * t / (u * (u + c * t)) * endpoint_density(p))
}

/// Grouped form of [`a_du`]; must agree to machine accuracy.
pub fn a_du_grouped(p: &CoreParams) -> Result<f64> {
    require_positive_drift(p)?;
    let (e0, e1, e2) = elems(p)?;
    let (c, u, t, dsq) = (p.c, p.u, p.t, p.dsq);
    let gap = 1.0 - c * p.m;
    let c2d = c * c * dsq;
    Ok((gap * e1 - e2) / c2d - (gap * gap * e0 - e2) / (2.0 * c2d) + e1 / (2.0 * u)
        - c * t / (u * (u + c * t)) * endpoint_density(p))
}

/// First derivative of the function y = f(x) defined by F(x, y) = 0, from
/// the partial derivatives of F at the point.
pub fn implicit_first_from(fx: f64, fy: f64) -> Result<f64> {
    if fy.abs() < 1e-14 * fx.abs().max(1.0) {
        return Err(Error::SingularImplicit(fy));
    }
    Ok(-fx / fy)
}

/// Second derivative of the implicit function from the five partials.
pub fn implicit_second_from(fx: f64, fy: f64, fxx: f64, fxy: f64, fyy: f64) -> Result<f64> {
    let slope = implicit_first_from(fx, fy)?;
    Ok(-(fxx + 2.0 * fxy * slope + fyy * slope * slope) / fy)
}

/// Central-difference step sized to the cube root of machine epsilon.
fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// First derivative of the implicit function by central differences of F.
/// The point must lie on the curve within `feas_tol`.
pub fn implicit_first<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    y0: f64,
    feas_tol: f64,
) -> Result<f64> {
    let val = f(x0, y0);
    if val.abs() > feas_tol {
        return Err(Error::Domain(format!("point is off the curve: F = {val}, tol {feas_tol}")));
    }
    let (hx, hy) = (fd_step(x0), fd_step(y0));
    let fx = (f(x0 + hx, y0) - f(x0 - hx, y0)) / (2.0 * hx);
    let fy = (f(x0, y0 + hy) - f(x0, y0 - hy)) / (2.0 * hy);
    implicit_first_from(fx, fy)
}

/// Second derivative by central differences of F.
pub fn implicit_second<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    y0: f64,
    feas_tol: f64,
) -> Result<f64> {
    let val = f(x0, y0);
    if val.abs() > feas_tol {
        return Err(Error::Domain(format!("point is off the curve: F = {val}, tol {feas_tol}")));
    }
    // second-order partials need a larger step to keep roundoff in check
    let hx = f64::EPSILON.powf(0.25) * x0.abs().max(1.0);
    let hy = f64::EPSILON.powf(0.25) * y0.abs().max(1.0);
    let fx = (f(x0 + hx, y0) - f(x0 - hx, y0)) / (2.0 * hx);
    let fy = (f(x0, y0 + hy) - f(x0, y0 - hy)) / (2.0 * hy);
    let fxx = (f(x0 + hx, y0) - 2.0 * val + f(x0 - hx, y0)) / (hx * hx);
    let fyy = (f(x0, y0 + hy) - 2.0 * val + f(x0, y0 - hy)) / (hy * hy);
    let fxy = (f(x0 + hx, y0 + hy) - f(x0 + hx, y0 - hy) - f(x0 - hx, y0 + hy)
        + f(x0 - hx, y0 - hy))
        / (4.0 * hx * hy);
    implicit_second_from(fx, fy, fxx, fxy, fyy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coreint::a_kernel;

    fn params(u: f64, c: f64, t: f64) -> CoreParams {
        CoreParams::new(u, c, t, 0.0, 1.0, 6.0).unwrap()
    }

    #[test]
    fn grouped_forms_are_identities() {
        for &(u, c, t) in &[(40.0, 1.0, 100.0), (40.0, 0.8, 100.0), (160.0, 1.2, 50.0)] {
            let p = params(u, c, t);
            let raw = a_dc(&p).unwrap();
            let grouped = a_dc_grouped(&p).unwrap();
            assert!((raw - grouped).abs() <= 1e-12 * raw.abs().max(1.0), "{raw} vs {grouped}");
            let raw = a_du(&p).unwrap();
            let grouped = a_du_grouped(&p).unwrap();
            assert!((raw - grouped).abs() <= 1e-12 * raw.abs().max(1.0), "{raw} vs {grouped}");
        }
    }

    #[test]
    fn kernel_derivatives_match_finite_differences() {
        let fd = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
        // in c at the critical point of the c-sweep figure parameters
        let in_c = |c: f64| a_kernel(&params(40.0, c, 100.0)).unwrap();
        let exact = a_dc(&params(40.0, 1.0, 100.0)).unwrap();
        let approx = fd(&in_c, 1.0, 1e-5);
        assert!((exact - approx).abs() <= 1e-4 * approx.abs(), "{exact} vs {approx}");
        // in u on both drift sides
        for &c in &[0.8, 1.2] {
            let in_u = |u: f64| a_kernel(&params(u, c, 100.0)).unwrap();
            let exact = a_du(&params(40.0, c, 100.0)).unwrap();
            let approx = fd(&in_u, 40.0, 1e-4);
            assert!((exact - approx).abs() <= 1e-4 * approx.abs(), "c={c}: {exact} vs {approx}");
        }
    }

    #[test]
    fn decomposition_sums_to_value() {
        let p = params(40.0, 0.8, 100.0);
        for rep in [approx_dc(&p).unwrap(), approx_du(&p).unwrap()] {
            let sum: f64 = rep.decomposition.iter().map(|(_, v)| v).sum();
            assert!((sum - rep.value).abs() <= 1e-12 * sum.abs().max(1.0));
        }
    }

    #[test]
    fn dc_approximation_negative_across_drift_sweep() {
        for &c in &[0.2, 0.5, 0.8, 1.0, 1.2, 1.6, 1.9] {
            let rep = approx_dc(&params(40.0, c, 100.0)).unwrap();
            assert!(rep.value < 0.0, "c={c}: F = {}", rep.value);
        }
    }

    #[test]
    fn du_approximation_sign_change_in_u() {
        // positive at small u is expected; negative beyond a threshold
        let at = |u: f64| approx_du(&params(u, 1.2, 100.0)).unwrap();
        assert_eq!(at(2.0).quality, QualityFlag::SmallUWarning);
        assert_eq!(at(160.0).quality, QualityFlag::LargeUOk);
        assert!(at(160.0).value < 0.0);
        let mut saw_positive = false;
        for &u in &[1.0, 2.0, 4.0, 8.0, 16.0] {
            saw_positive |= at(u).value > 0.0;
        }
        assert!(saw_positive, "expected a positive stretch at small u");
    }

    #[test]
    fn approximations_approach_exact_derivatives_as_u_grows() {
        let gap_dc = |u: f64| {
            let p = params(u, 0.8, 100.0);
            (approx_dc(&p).unwrap().value - a_dc(&p).unwrap()).abs()
        };
        let gap_du = |u: f64| {
            let p = params(u, 0.8, 100.0);
            (approx_du(&p).unwrap().value - a_du(&p).unwrap()).abs()
        };
        assert!(gap_dc(320.0) < 0.5 * gap_dc(40.0), "{} vs {}", gap_dc(320.0), gap_dc(40.0));
        assert!(gap_du(320.0) < 0.5 * gap_du(40.0), "{} vs {}", gap_du(320.0), gap_du(40.0));
    }

    #[test]
    fn implicit_engine_closed_forms() {
        // unit circle at (0.6, 0.8)
        let circle = |x: f64, y: f64| x * x + y * y - 1.0;
        let d1 = implicit_first(circle, 0.6, 0.8, 1e-10).unwrap();
        assert!((d1 + 0.75).abs() < 1e-8, "{d1}");
        let d2 = implicit_second(circle, 0.6, 0.8, 1e-10).unwrap();
        assert!((d2 + 1.953125).abs() < 1e-5, "{d2}");
        // identity line
        let line = |x: f64, y: f64| x - y;
        assert!((implicit_first(line, 1.0, 1.0, 1e-10).unwrap() - 1.0).abs() < 1e-10);
        assert!(implicit_second(line, 1.0, 1.0, 1e-10).unwrap().abs() < 1e-6);
        // parabola y = x^2
        let parab = |x: f64, y: f64| y - x * x;
        assert!((implicit_first(parab, 3.0, 9.0, 1e-10).unwrap() - 6.0).abs() < 1e-7);
        assert!((implicit_second(parab, 3.0, 9.0, 1e-10).unwrap() - 2.0).abs() < 1e-4);
        // exponential level curve e^x - y = 0
        let expc = |x: f64, y: f64| x.exp() - y;
        let e = 1.0f64.exp();
        assert!((implicit_first(expc, 1.0, e, 1e-10).unwrap() - e).abs() < 1e-7);
        // analytic partials reproduce the same to 1e-8 or better
        assert!((implicit_first_from(2.0 * 0.6, 2.0 * 0.8).unwrap() + 0.75).abs() < 1e-12);
        assert!(
            (implicit_second_from(1.2, 1.6, 2.0, 0.0, 2.0).unwrap() + 1.953125).abs() < 1e-12
        );
        // degenerate vertical tangent
        assert!(matches!(implicit_first_from(1.0, 0.0), Err(Error::SingularImplicit(_))));
        // off-curve point rejected
        assert!(implicit_first(circle, 0.6, 0.9, 1e-10).is_err());
    }
}
