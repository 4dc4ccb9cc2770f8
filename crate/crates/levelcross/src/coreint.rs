//! Elementary window integrals E^k of the crossing-probability approximation,
//! their closed forms and degenerate-drift limits, the kernel A(t|v), the
//! three weighted approximations of the crossing probability, and the
//! normal tail approximation of the aggregate process at a fixed time.

use crate::dist::{MomentSummary, RenewalModel};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};
use crate::special::gig::exp_scaled_tail;
use crate::special::{normal_cdf, normal_pdf, GigParams};

/// Width of the near-critical band around c = c* where the two-branch closed
/// form of E^1 is numerically unusable (its mu parameter diverges).
pub const EPS_SWITCH_FACTOR: f64 = 1e-4;

/// Arguments of one E^k window integral. `v` conditions on the first renewal
/// epoch: the integral is then taken at level u + c v over the horizon t - v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreParams {
    pub u: f64,
    pub c: f64,
    pub t: f64,
    pub v: f64,
    pub m: f64,
    pub dsq: f64,
}

impl CoreParams {
    pub fn new(u: f64, c: f64, t: f64, v: f64, m: f64, dsq: f64) -> Result<Self> {
        if !(u > 0.0) {
            return Err(Error::Domain(format!("core params: u {u} must be positive")));
        }
        if !(c >= 0.0) {
            return Err(Error::Domain(format!("core params: c {c} must be nonnegative")));
        }
        if !(t > 0.0 && v >= 0.0 && v <= t) {
            return Err(Error::Domain(format!("core params: need t > 0 and 0 <= v <= t, got t {t}, v {v}")));
        }
        if !(dsq > 0.0 && m > 0.0) {
            return Err(Error::Domain(format!("core params: M {m} and D^2 {dsq} must be positive")));
        }
        Ok(Self { u, c, t, v, m, dsq })
    }

    /// Level and horizon after conditioning on T1 = v.
    fn effective(&self) -> (f64, f64) {
        (self.u + self.c * self.v, self.t - self.v)
    }

    fn near_critical_gap(&self) -> f64 {
        1.0 - self.c * self.m
    }

    fn in_switch_band(&self) -> bool {
        self.near_critical_gap().abs() <= EPS_SWITCH_FACTOR * self.m
    }
}

/// E^k by adaptive quadrature. Valid in every positive-drift regime,
/// including the near-critical band.
pub fn elem_integral(k: u32, p: &CoreParams, quad: &QuadratureConfig) -> Result<f64> {
    if p.c == 0.0 {
        return Err(Error::Regime(
            "E^k has a degenerate window at c = 0; use elem_limit_c0".into(),
        ));
    }
    let (ue, horizon) = p.effective();
    if horizon <= 0.0 {
        return Ok(0.0);
    }
    let upper = p.c * horizon / ue;
    let mean_slope = p.c * p.m;
    let var_slope = p.c * p.c * p.dsq / ue;
    let r = integrate(
        |x| {
            let w = x + 1.0;
            w.powi(-(k as i32)) * gaussian_slope_pdf(mean_slope, var_slope, w, x)
        },
        0.0,
        upper,
        quad,
    )?;
    Ok(r.value.max(0.0))
}

// density at x of a normal with mean mean_slope*w and variance var_slope*w
fn gaussian_slope_pdf(mean_slope: f64, var_slope: f64, w: f64, x: f64) -> f64 {
    normal_pdf(mean_slope * w, var_slope * w, x).unwrap_or(0.0)
}

/// Closed form of E^1 through the generalized inverse Gaussian cdf with
/// p = -1/2. Refuses the near-critical band where its parameters blow up.
pub fn elem_closed1(p: &CoreParams) -> Result<f64> {
    if p.c <= 0.0 {
        return Err(Error::Regime("closed form needs c > 0; use elem_limit_c0".into()));
    }
    let gap = p.near_critical_gap();
    if p.in_switch_band() {
        return Err(Error::NearCritical { gap, band: EPS_SWITCH_FACTOR * p.m });
    }
    let (ue, horizon) = p.effective();
    if horizon <= 0.0 {
        return Ok(0.0);
    }
    let x = p.c * horizon / ue;
    let lambda = ue / (p.c * p.c * p.dsq);
    let value = if gap > 0.0 {
        let mu = 1.0 / gap;
        let g = GigParams::new(mu, lambda, -0.5)?;
        crate::special::gig_cdf(&g, x + 1.0)? - crate::special::gig_cdf(&g, 1.0)?
    } else {
        // the prefactor exp(-2 lambda / mu_hat) is folded into each cdf term
        // so nothing overflows
        let mu_hat = 1.0 / (-gap);
        scaled_cdf_half(mu_hat, lambda, x + 1.0) - scaled_cdf_half(mu_hat, lambda, 1.0)
    };
    Ok(value.max(0.0))
}

// exp(-2 lambda / mu) * F(y; mu, lambda, -1/2)
//   = exp(-2 lambda / mu) * Phi(s_minus) + Phi(-s_plus)
fn scaled_cdf_half(mu: f64, lambda: f64, y: f64) -> f64 {
    let root = (lambda / y).sqrt();
    let s_minus = root * (y / mu - 1.0);
    let s_plus = root * (y / mu + 1.0);
    exp_scaled_tail(-2.0 * lambda / mu, -s_minus) + normal_cdf(-s_plus)
}

/// Limit of E^1 as c -> 0 at fixed u, t.
pub fn elem_limit_c0(u: f64, t: f64, m: f64, dsq: f64) -> f64 {
    let d = dsq.sqrt();
    normal_cdf(m * u.sqrt() / d) - normal_cdf((m * u - t) / (d * u.sqrt()))
}

/// Value of E^1 at the critical drift c = c* = 1/M.
pub fn elem_limit_cstar(u: f64, t: f64, m: f64, dsq: f64, cstar: f64) -> f64 {
    let d = dsq.sqrt();
    2.0 * (normal_cdf(m * u.sqrt() / d) - normal_cdf(m * u / (d * (u + cstar * t).sqrt())))
}

/// The kernel A(t|v): E^1 at level u + c v over the horizon t - v. Routes to
/// the closed form away from c = 0 and c = c*, to the limit formulas or
/// quadrature otherwise. Always in [0, 1].
pub fn a_kernel(p: &CoreParams) -> Result<f64> {
    let (ue, horizon) = p.effective();
    if horizon <= 0.0 {
        return Ok(0.0);
    }
    let value = if p.c == 0.0 {
        elem_limit_c0(ue, horizon, p.m, p.dsq)
    } else if p.in_switch_band() {
        let quad = QuadratureConfig { max_subdivisions: 400, ..Default::default() };
        elem_integral(1, p, &quad)?
    } else {
        elem_closed1(p)?
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Which weighting of the kernel approximates the crossing probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxVariant {
    /// integral of A(t|v) against the first-spacing density
    ConditionalWeighted,
    /// integral of A(t-v) against the first-spacing density
    ConvolutionWeighted,
    /// A(t) alone; adequate once t is large
    Plain,
}

/// Approximation value plus a flag recording whether clamping to [0, 1]
/// actually bit (it can at small u, where the approximation degrades).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxResult {
    pub value: f64,
    pub clamped: bool,
}

/// Approximate P{T_{u,c} <= t} for the model, by the chosen variant.
pub fn approx_crossing_prob(
    model: &RenewalModel,
    u: f64,
    c: f64,
    t: f64,
    variant: ApproxVariant,
) -> Result<ApproxResult> {
    let s = model.summary()?;
    approx_crossing_prob_with(model, &s, u, c, t, variant)
}

/// Same as [`approx_crossing_prob`] with a precomputed moment summary.
pub fn approx_crossing_prob_with(
    model: &RenewalModel,
    s: &MomentSummary,
    u: f64,
    c: f64,
    t: f64,
    variant: ApproxVariant,
) -> Result<ApproxResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("approximation horizon t {t} must be positive")));
    }
    let raw = match variant {
        ApproxVariant::Plain => {
            let p = CoreParams::new(u, c, t, 0.0, s.m, s.dsq)?;
            a_kernel(&p)?
        }
        ApproxVariant::ConditionalWeighted => {
            let quad = QuadratureConfig {
                abs_tol: 1e-10,
                rel_tol: 1e-8,
                max_subdivisions: 400,
            };
            let f1 = model.dist_t1;
            let r = integrate(
                |v| {
                    let p = match CoreParams::new(u, c, t, v, s.m, s.dsq) {
                        Ok(p) => p,
                        Err(_) => return 0.0,
                    };
                    a_kernel(&p).unwrap_or(0.0) * f1.pdf_unchecked(v.max(1e-300))
                },
                0.0,
                t,
                &quad,
            )?;
            r.value
        }
        ApproxVariant::ConvolutionWeighted => {
            let quad = QuadratureConfig {
                abs_tol: 1e-10,
                rel_tol: 1e-8,
                max_subdivisions: 400,
            };
            let f1 = model.dist_t1;
            let r = integrate(
                |v| {
                    let horizon = t - v;
                    if horizon <= 0.0 {
                        return 0.0;
                    }
                    let p = match CoreParams::new(u, c, horizon, 0.0, s.m, s.dsq) {
                        Ok(p) => p,
                        Err(_) => return 0.0,
                    };
                    a_kernel(&p).unwrap_or(0.0) * f1.pdf_unchecked(v.max(1e-300))
                },
                0.0,
                t,
                &quad,
            )?;
            r.value
        }
    };
    let value = raw.clamp(0.0, 1.0);
    Ok(ApproxResult { value, clamped: value != raw })
}

/// Denominator convention in the variance of the aggregate at a fixed time.
/// `MeanJumpCubed` divides the mixed second-moment combination by (EY)^3;
/// `MeanSpacingCubed` divides by (ET)^3, which is the dimensionally
/// consistent choice and the one Monte Carlo confirms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceConvention {
    MeanJumpCubed,
    MeanSpacingCubed,
}

/// Normal approximation of P{V_t > u} for the aggregate V at fixed time t.
pub fn normal_compound_tail(
    model: &RenewalModel,
    u: f64,
    t: f64,
    convention: VarianceConvention,
) -> Result<f64> {
    let s = model.summary()?;
    let (et, ey, dt, dy) = (s.et, s.ey, s.dt, s.dy);
    let mean = ey / et * t + ey * (dt - et * et) / (2.0 * et * et);
    let denom = match convention {
        VarianceConvention::MeanJumpCubed => ey,
        VarianceConvention::MeanSpacingCubed => et,
    };
    let var = (ey * ey * dt + et * et * dy) / denom.powi(3) * t;
    if !(var > 0.0) {
        return Err(Error::Domain(format!("aggregate variance {var} must be positive")));
    }
    Ok(1.0 - normal_cdf((u - mean) / var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistributionSpec;

    fn params(u: f64, c: f64, t: f64) -> CoreParams {
        CoreParams::new(u, c, t, 0.0, 1.0, 6.0).unwrap()
    }

    fn quad() -> QuadratureConfig {
        QuadratureConfig { max_subdivisions: 600, ..Default::default() }
    }

    #[test]
    fn zero_length_window_is_zero() {
        let p = CoreParams::new(40.0, 1.0, 100.0, 100.0, 1.0, 6.0).unwrap();
        assert_eq!(elem_integral(1, &p, &quad()).unwrap(), 0.0);
        assert_eq!(a_kernel(&p).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_quadrature_sub_and_super() {
        // sub-critical branch
        let p = params(40.0, 0.8, 100.0);
        let q = elem_integral(1, &p, &quad()).unwrap();
        let c = elem_closed1(&p).unwrap();
        assert!((q - c).abs() < 1e-8, "sub: {q} vs {c}");
        // super-critical branch
        let p = params(40.0, 1.2, 100.0);
        let q = elem_integral(1, &p, &quad()).unwrap();
        let c = elem_closed1(&p).unwrap();
        assert!((q - c).abs() < 1e-8, "super: {q} vs {c}");
    }

    #[test]
    fn closed_form_sweep_against_quadrature() {
        // m = 0.75, c* = 4/3, excluding the switch band by construction
        let (m, dsq) = (0.75, 1.40625);
        let cstar = 1.0 / m;
        for &cf in &[0.2, 0.5, 0.8, 1.2, 2.0, 5.0] {
            for &u in &[10.0, 40.0, 160.0] {
                for &t in &[50.0, 100.0, 400.0] {
                    let p = CoreParams::new(u, cf * cstar, t, 0.0, m, dsq).unwrap();
                    let q = elem_integral(1, &p, &quad()).unwrap();
                    let c = elem_closed1(&p).unwrap();
                    assert!(
                        (q - c).abs() < 1e-7,
                        "cf={cf} u={u} t={t}: quad {q} closed {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn switch_band_refused_by_closed_form() {
        let p = params(40.0, 1.0 + 1e-6, 100.0);
        assert!(matches!(elem_closed1(&p), Err(Error::NearCritical { .. })));
        // but the kernel still evaluates there via quadrature
        let v = a_kernel(&p).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn small_drift_limit() {
        let q = QuadratureConfig { max_subdivisions: 2000, ..Default::default() };
        let p = params(40.0, 1e-6, 100.0);
        let e = elem_integral(1, &p, &q).unwrap();
        let lim = elem_limit_c0(40.0, 100.0, 1.0, 6.0);
        assert!((e - lim).abs() < 1e-5, "{e} vs {lim}");
    }

    #[test]
    fn critical_drift_limit() {
        let lim = elem_limit_cstar(40.0, 100.0, 1.0, 6.0, 1.0);
        for &c in &[1.0 - 1e-6, 1.0 + 1e-6] {
            let p = params(40.0, c, 100.0);
            let e = elem_integral(1, &p, &quad()).unwrap();
            assert!((e - lim).abs() < 1e-5, "c={c}: {e} vs {lim}");
        }
    }

    #[test]
    fn large_drift_vanishes() {
        let p = params(40.0, 1e4, 100.0);
        let e = elem_integral(1, &p, &quad()).unwrap();
        assert!(e < 1e-12, "E^1 at huge c should vanish, got {e}");
    }

    #[test]
    fn elem_monotone_in_k() {
        for &c in &[0.5, 1.0, 1.3] {
            let p = params(40.0, c, 100.0);
            let e0 = elem_integral(0, &p, &quad()).unwrap();
            let e1 = elem_integral(1, &p, &quad()).unwrap();
            let e2 = elem_integral(2, &p, &quad()).unwrap();
            assert!(e0 >= e1 && e1 >= e2, "c={c}: {e0} {e1} {e2}");
        }
    }

    #[test]
    fn kernel_reparameterization_identity() {
        let with_v = CoreParams::new(40.0, 1.0, 100.0, 10.0, 1.0, 6.0).unwrap();
        let shifted = CoreParams::new(50.0, 1.0, 90.0, 0.0, 1.0, 6.0).unwrap();
        let a = a_kernel(&with_v).unwrap();
        let b = a_kernel(&shifted).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        let c = elem_integral(1, &shifted, &quad()).unwrap();
        assert!((a - c).abs() < 1e-7);
    }

    #[test]
    fn kernel_monotonicity() {
        // nondecreasing in t, nonincreasing in u
        let mut prev = 0.0;
        for &t in &[20.0, 50.0, 100.0, 200.0, 400.0] {
            let v = a_kernel(&params(40.0, 0.9, t)).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        let mut prev = 1.0;
        for &u in &[10.0, 20.0, 40.0, 80.0, 160.0] {
            let v = a_kernel(&params(u, 0.9, 100.0)).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn elem_differences_shrink_like_inverse_u() {
        // u * |(1-cM) E^0 - E^1| and u * |(1-cM) E^1 - E^2| stay bounded
        let (m, dsq, c, t) = (1.0, 6.0, 0.8, 100.0);
        let gap = 1.0 - c * m;
        let mut bound0: f64 = 0.0;
        let mut bound1: f64 = 0.0;
        for &u in &[40.0, 80.0, 160.0, 320.0] {
            let p = CoreParams::new(u, c, t, 0.0, m, dsq).unwrap();
            let e0 = elem_integral(0, &p, &quad()).unwrap();
            let e1 = elem_integral(1, &p, &quad()).unwrap();
            let e2 = elem_integral(2, &p, &quad()).unwrap();
            bound0 = bound0.max(u * (gap * e0 - e1).abs());
            bound1 = bound1.max(u * (gap * e1 - e2).abs());
        }
        assert!(bound0 < 10.0, "u-scaled first difference grew: {bound0}");
        assert!(bound1 < 10.0, "u-scaled second difference grew: {bound1}");
    }

    fn exp_exp_model() -> RenewalModel {
        RenewalModel::ordinary(
            DistributionSpec::exponential(1.0).unwrap(),
            DistributionSpec::exponential(1.0).unwrap(),
        )
    }

    #[test]
    fn approximations_vanish_at_tiny_horizon() {
        let model = exp_exp_model();
        for variant in [
            ApproxVariant::Plain,
            ApproxVariant::ConditionalWeighted,
            ApproxVariant::ConvolutionWeighted,
        ] {
            let r = approx_crossing_prob(&model, 40.0, 1.0, 1e-9, variant).unwrap();
            assert!(r.value < 1e-6, "{variant:?}: {}", r.value);
        }
    }

    #[test]
    fn weighted_variants_converge_at_long_horizons() {
        let model = exp_exp_model();
        let diff = |t: f64| {
            let a = approx_crossing_prob(&model, 40.0, 1.1, t, ApproxVariant::ConditionalWeighted)
                .unwrap()
                .value;
            let b = approx_crossing_prob(&model, 40.0, 1.1, t, ApproxVariant::ConvolutionWeighted)
                .unwrap()
                .value;
            (a - b).abs()
        };
        let d2 = diff(1e2);
        let d4 = diff(1e4);
        assert!(d4 <= 10.0 * d2, "difference at t=1e4 {d4} vs t=1e2 {d2}");
    }

    #[test]
    fn plain_approx_monotonicity() {
        let model = exp_exp_model();
        let p = |u: f64, c: f64, t: f64| {
            approx_crossing_prob(&model, u, c, t, ApproxVariant::Plain).unwrap().value
        };
        let mut prev = 1.0;
        for &u in &[10.0, 20.0, 40.0, 80.0] {
            let v = p(u, 1.0, 100.0);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
        let mut prev = 1.0;
        for &c in &[0.5, 0.8, 1.1, 1.5, 2.5] {
            let v = p(40.0, c, 100.0);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
        let mut prev = 0.0;
        for &t in &[50.0, 100.0, 200.0, 400.0] {
            let v = p(40.0, 1.0, t);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn normal_tail_reference_points() {
        let model = exp_exp_model();
        // delta = rho = 1: EV_t = t + (1 - 1)/2 = t
        let (et, ey, dt, dy) = (1.0f64, 1.0f64, 1.0f64, 1.0f64);
        let mean = ey / et * 400.0 + ey * (dt - et * et) / (2.0 * et * et);
        assert!((mean - 400.0).abs() < 1e-12);
        let half = normal_compound_tail(&model, mean, 400.0, VarianceConvention::MeanJumpCubed)
            .unwrap();
        assert!((half - 0.5).abs() < 1e-12);
        let var = (ey * ey * dt + et * et * dy) / ey.powi(3) * 400.0;
        let three_sigma = normal_compound_tail(
            &model,
            mean + 3.0 * var.sqrt(),
            400.0,
            VarianceConvention::MeanJumpCubed,
        )
        .unwrap();
        assert!((three_sigma - 0.00135).abs() < 1e-5);
    }

    #[test]
    fn variance_conventions_coincide_only_when_means_match() {
        // asymmetric model: the two conventions disagree
        let model = RenewalModel::ordinary(
            DistributionSpec::exponential(2.0).unwrap(),
            DistributionSpec::exponential(0.5).unwrap(),
        );
        let a =
            normal_compound_tail(&model, 450.0, 100.0, VarianceConvention::MeanJumpCubed).unwrap();
        let b = normal_compound_tail(&model, 450.0, 100.0, VarianceConvention::MeanSpacingCubed)
            .unwrap();
        assert!((a - b).abs() > 1e-3, "{a} vs {b}");
    }
}
