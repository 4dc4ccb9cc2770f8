//! Standard-normal pdf, cdf, log-cdf and quantile.

use crate::error::{Error, Result};
use crate::special::erf::{erfc, erfcx};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_2PI: f64 = 2.5066282746310002;

/// Standard Gaussian density at `x`.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Gaussian density with mean `a` and variance `bsq` at `x`.
pub fn normal_pdf(a: f64, bsq: f64, x: f64) -> Result<f64> {
    if bsq <= 0.0 {
        return Err(Error::Domain(format!("normal_pdf: variance {bsq} must be positive")));
    }
    let z = (x - a) / bsq.sqrt();
    Ok(std_normal_pdf(z) / bsq.sqrt())
}

/// Standard Gaussian cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// ln of the standard Gaussian cdf, stable down to arbitrarily negative `x`.
///
/// For very negative `x` the cdf itself underflows; the scaled complementary
/// error function keeps the logarithm finite there.
pub fn normal_log_cdf(x: f64) -> f64 {
    if x > -20.0 {
        let p = normal_cdf(x);
        if p > 0.0 {
            return p.ln();
        }
    }
    // Phi(x) = erfc(-x/sqrt(2)) / 2 = exp(-x^2/2) * erfcx(-x/sqrt(2)) / 2
    let z = -x / SQRT_2;
    -0.5 * x * x + erfcx(z).ln() - std::f64::consts::LN_2
}

// Acklam's rational approximation for the normal quantile (relative error
// below 1.15e-9), polished by one Newton step on the upper-tail equation.
fn acklam_ppf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Upper-tail quantile: z such that 1 - Phi(z) = alpha.
pub fn normal_quantile(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("normal_quantile: alpha {alpha} outside (0,1)")));
    }
    let z0 = -acklam_ppf(alpha);
    // Newton on g(z) = (1 - Phi(z)) - alpha, using the tail form directly so
    // small alpha keeps full precision.
    let tail = 0.5 * erfc(z0 / SQRT_2);
    let z = z0 + (tail - alpha) / std_normal_pdf(z0);
    Ok(z)
}
