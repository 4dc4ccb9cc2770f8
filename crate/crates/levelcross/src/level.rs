//! The inverse problem: given a target probability alpha and horizon t, find
//! the level u where the crossing probability equals alpha. Provides the
//! root-on-A heuristic solver, closed asymptotic regime formulas, the
//! normalized structure function, two-sided elementary bounds, and
//! adjustment-coefficient solvers for the exponential upper bounds.

use crate::coreint::{a_kernel, CoreParams};
use crate::dist::{DistributionSpec, MomentSummary, RenewalModel};
use crate::error::{Error, Result};
use crate::special::{normal_cdf, normal_log_cdf, normal_quantile};

/// How a level value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMethod {
    RootOnA,
    AsymSub,
    AsymCriticalBand,
    AsymSuper,
    McBisection,
}

/// A solved fixed-probability level with solver provenance.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub c: f64,
    pub alpha: f64,
    pub t: f64,
    pub level: f64,
    pub method: LevelMethod,
    /// absolute objective value at the returned level
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Drift regime relative to the critical rate c* = 1/M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    SubCritical,
    CriticalBand,
    SuperCritical,
}

/// Classification constants: sub-critical below `k_sub * cstar`, super-critical
/// above `k_super * cstar`, critical band between.
#[derive(Debug, Clone, Copy)]
pub struct RegimeSplit {
    pub k_sub: f64,
    pub k_super: f64,
}

impl Default for RegimeSplit {
    fn default() -> Self {
        Self { k_sub: 0.9, k_super: 1.1 }
    }
}

pub fn classify_regime(c: f64, cstar: f64, split: &RegimeSplit) -> RegimeTag {
    if c < split.k_sub * cstar {
        RegimeTag::SubCritical
    } else if c > split.k_super * cstar {
        RegimeTag::SuperCritical
    } else {
        RegimeTag::CriticalBand
    }
}

/// Upper alpha quantile of the standard normal: Phi(z) = 1 - alpha.
fn z_upper(alpha: f64) -> Result<f64> {
    normal_quantile(alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha <= 0.0 || alpha >= 0.5 {
        return Err(Error::Domain(format!("alpha {alpha} must lie in (0, 1/2)")));
    }
    Ok(())
}

/// Level at which the approximation A equals alpha, by bracketed bisection
/// with a secant polish. A is strictly decreasing in u on the bracket.
pub fn solve_heuristic_level(
    model: &RenewalModel,
    alpha: f64,
    t: f64,
    c: f64,
    tol: f64,
) -> Result<LevelReport> {
    let s = model.summary()?;
    solve_heuristic_level_with(&s, alpha, t, c, tol)
}

pub fn solve_heuristic_level_with(
    s: &MomentSummary,
    alpha: f64,
    t: f64,
    c: f64,
    tol: f64,
) -> Result<LevelReport> {
    check_alpha(alpha)?;
    if t <= 0.0 || c < 0.0 {
        return Err(Error::Domain(format!("need t > 0 and c >= 0, got t {t}, c {c}")));
    }
    let objective = |u: f64| -> Result<f64> {
        let p = CoreParams::new(u, c, t, 0.0, s.m, s.dsq)?;
        Ok(a_kernel(&p)? - alpha)
    };

    // grow the bracket by doubling until the objective changes sign
    let u0 = 1f64.max((s.cstar - c) * t);
    let mut lo = u0;
    let mut flo = objective(lo)?;
    let mut hi = lo;
    let mut fhi = flo;
    let mut iterations = 0usize;
    if flo > 0.0 {
        // level lies above the seed
        for _ in 0..64 {
            hi *= 2.0;
            fhi = objective(hi)?;
            iterations += 1;
            if fhi <= 0.0 {
                break;
            }
            lo = hi;
            flo = fhi;
        }
    } else {
        // level lies below the seed
        for _ in 0..64 {
            lo *= 0.5;
            flo = objective(lo)?;
            iterations += 1;
            if flo >= 0.0 {
                break;
            }
            hi = lo;
            fhi = flo;
        }
    }
    if flo < 0.0 || fhi > 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    let bracket = (lo, hi);

    // bisect to a narrow interval, then polish with secant steps
    let width_goal = 1e-3 * hi.abs().max(1.0);
    while hi - lo > width_goal {
        let mid = 0.5 * (lo + hi);
        let fmid = objective(mid)?;
        iterations += 1;
        if fmid >= 0.0 {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (flo, fhi);
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..40 {
        if best.1.abs() <= tol {
            break;
        }
        if fb == fa {
            break;
        }
        let x = b - fb * (b - a) / (fb - fa);
        let x = x.clamp(bracket.0, bracket.1);
        let fx = objective(x)?;
        iterations += 1;
        (a, fa) = (b, fb);
        (b, fb) = (x, fx);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
    }
    if best.1.abs() > tol {
        return Err(Error::SolverFailed { residual: best.1.abs(), tol });
    }
    Ok(LevelReport {
        c,
        alpha,
        t,
        level: best.0,
        method: LevelMethod::RootOnA,
        residual: best.1.abs(),
        bracket,
        iterations,
    })
}

/// Closed-form level at c = 0: t/M + (D/M^{3/2}) z_alpha sqrt(t).
pub fn level_zero(model: &RenewalModel, alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s = model.summary()?;
    Ok(t / s.m + s.dsq.sqrt() / s.m.powf(1.5) * z_upper(alpha)? * t.sqrt())
}

/// Which side of the critical rate the band parametrization sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandSide {
    Below,
    Above,
}

/// Normalized level inside the critical band: the root x of
///   1 - Phi(x - d) + Phi(-d - x) e^{2dx} = alpha   (side below)
///   1 - Phi(x + d) + Phi(d - x) e^{-2dx} = alpha   (side above)
/// where d >= 0 measures the scaled distance from c*. At d = 0 both reduce
/// to 2(1 - Phi(x)) = alpha, so x = z_{alpha/2}.
pub fn x_alpha_band(delta: f64, alpha: f64, side: BandSide) -> Result<f64> {
    check_alpha(alpha)?;
    if delta < 0.0 {
        return Err(Error::Domain(format!("delta {delta} must be nonnegative")));
    }
    // Phi(-d-x) e^{2dx} evaluated in log space: the product decays like
    // exp(-(x-d)^2/2) even when e^{2dx} alone overflows
    let f = |x: f64| -> f64 {
        match side {
            BandSide::Below => {
                1.0 - normal_cdf(x - delta) + (2.0 * delta * x + normal_log_cdf(-delta - x)).exp()
                    - alpha
            }
            BandSide::Above => {
                1.0 - normal_cdf(x + delta)
                    + (-2.0 * delta * x + normal_log_cdf(delta - x)).exp()
                    - alpha
            }
        }
    };
    let hi = z_upper(alpha / 2.0)? + delta + 5.0;
    solve_decreasing(f, 0.0, hi, 1e-12).and_then(|(root, residual)| {
        if residual <= 1e-10 {
            Ok(root)
        } else {
            Err(Error::SolverFailed { residual, tol: 1e-10 })
        }
    })
}

/// Normalized limiting level above the critical band: the larger positive
/// root x of
///   (1 - Phi(((cM-2)/(cM)) sqrt(x))) exp(-2((cM-1)/(c^2 M^2)) x)
///     + Phi(sqrt(x)) = 1 + alpha.
/// The limiting level itself is (D^2/M^2) x.
pub fn x_alpha_super(c: f64, m: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let cm = c * m;
    if cm <= 1.0 {
        return Err(Error::Regime(format!("need c M > 1, got {cm}")));
    }
    let h = |x: f64| -> f64 {
        let root = x.sqrt();
        let arg = (cm - 2.0) / cm * root;
        let scale = -2.0 * (cm - 1.0) / (cm * cm) * x;
        (normal_log_cdf(-arg) + scale).exp() + normal_cdf(root) - 1.0 - alpha
    };
    // h(0) = h(inf) = -alpha with a positive hump between; the relevant root
    // is the larger one (it grows as alpha shrinks, like a level should)
    let mut x_pos = f64::NAN;
    let mut x = 1e-3;
    for _ in 0..60 {
        if h(x) > 0.0 {
            x_pos = x;
            break;
        }
        x *= 2.0;
    }
    if x_pos.is_nan() {
        return Err(Error::BracketFailure { lo: 1e-3, hi: x, flo: h(1e-3), fhi: h(x) });
    }
    let mut hi = x_pos;
    for _ in 0..200 {
        hi *= 2.0;
        if h(hi) < 0.0 {
            break;
        }
        x_pos = hi;
    }
    solve_decreasing(h, x_pos, hi, 1e-12).and_then(|(root, residual)| {
        if residual <= 1e-10 {
            Ok(root)
        } else {
            Err(Error::SolverFailed { residual, tol: 1e-10 })
        }
    })
}

/// Bisection for a function positive at `lo` and negative at `hi`, followed
/// by secant polish; returns (root, |f(root)|).
fn solve_decreasing<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo < 0.0 || fhi > 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid >= 0.0 {
            (lo, flo) = (mid, fmid);
        } else {
            (hi, fhi) = (mid, fmid);
        }
        if fmid.abs() <= tol {
            return Ok((mid, fmid.abs()));
        }
    }
    let root = if flo.abs() < fhi.abs() { lo } else { hi };
    Ok((root, f(root).abs()))
}

/// Closed asymptotic level formula for the given regime.
pub fn level_asym(
    model: &RenewalModel,
    alpha: f64,
    t: f64,
    c: f64,
    regime: RegimeTag,
) -> Result<f64> {
    check_alpha(alpha)?;
    let s = model.summary()?;
    let split = RegimeSplit::default();
    let natural = classify_regime(c, s.cstar, &split);
    if natural != regime {
        return Err(Error::Regime(format!(
            "c {} is {:?} (c* = {}), not {:?}",
            c, natural, s.cstar, regime
        )));
    }
    let scale = s.dsq.sqrt() / s.m.powf(1.5);
    match regime {
        RegimeTag::SubCritical => Ok((s.cstar - c) * t + scale * z_upper(alpha)? * t.sqrt()),
        RegimeTag::CriticalBand => {
            // c = c* -+ scale * delta / sqrt(t)
            let delta = (s.cstar - c) * t.sqrt() / scale;
            let (delta, side) =
                if delta >= 0.0 { (delta, BandSide::Below) } else { (-delta, BandSide::Above) };
            Ok(scale * x_alpha_band(delta, alpha, side)? * t.sqrt())
        }
        RegimeTag::SuperCritical => {
            Ok(s.dsq / (s.m * s.m) * x_alpha_super(c, s.m, alpha)?)
        }
    }
}

/// The level curve in normalized coordinates: maps y to the drift rate
/// c = c* - y D / (M^{3/2} sqrt(t)), solves the heuristic level there, and
/// returns (level - max(0, (c*-c)t)) M^{3/2} / (D sqrt(t)).
pub fn structure_function(model: &RenewalModel, alpha: f64, t: f64, y: f64) -> Result<f64> {
    let s = model.summary()?;
    let scale = s.dsq.sqrt() / s.m.powf(1.5);
    let c = s.cstar - y * scale / t.sqrt();
    if c < 0.0 {
        return Err(Error::Domain(format!("y {y} maps to negative drift rate {c}")));
    }
    let rep = solve_heuristic_level_with(&s, alpha, t, c, 1e-6)?;
    Ok((rep.level - 0f64.max((s.cstar - c) * t)) / (scale * t.sqrt()))
}

/// Elementary two-sided asymptotic bounds below the critical rate:
/// lo uses z_alpha, hi uses z_{alpha/2}, both on top of the drift term.
pub fn bounds_subcritical(
    model: &RenewalModel,
    alpha: f64,
    t: f64,
    c: f64,
) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let s = model.summary()?;
    if c > s.cstar {
        return Err(Error::Regime(format!("c {} exceeds the critical rate {}", c, s.cstar)));
    }
    let drift = (s.cstar - c) * t;
    let scale = s.dsq.sqrt() / s.m.powf(1.5) * t.sqrt();
    Ok((drift + scale * z_upper(alpha)?, drift + scale * z_upper(alpha / 2.0)?))
}

/// The positive exponent kappa making e^{-kappa u} an upper bound for the
/// crossing probability at drift c > c*. Three solvable cases:
/// exponential/exponential (closed form), exponential T with light-tailed Y
/// (root of E e^{kY} = 1 + ck/delta), exponential Y with general T
/// (root of E e^{-kcT} = 1 - k/rho).
pub fn adjustment_coefficient(model: &RenewalModel, c: f64) -> Result<f64> {
    let s = model.summary()?;
    if c <= s.cstar {
        return Err(Error::Regime(format!(
            "no positive root: c {} must exceed the critical rate {}",
            c, s.cstar
        )));
    }
    match (model.dist_t, model.dist_y) {
        (
            DistributionSpec::Exponential { rate: delta },
            DistributionSpec::Exponential { rate: rho },
        ) => Ok(rho - delta / c),
        (DistributionSpec::Exponential { rate: delta }, y) => {
            if let DistributionSpec::Pareto { .. } = y {
                return Err(Error::UnsupportedModel(
                    "heavy-tailed jumps admit no exponential adjustment coefficient".into(),
                ));
            }
            let DistributionSpec::Erlang { rate, .. } = y else { unreachable!() };
            // g(0) = 0, g'(0) < 0 above c*, g -> +inf at the mgf pole
            let g = |k: f64| y.mgf(k).map(|v| v - 1.0 - c * k / delta);
            solve_increasing_root(g, rate)
        }
        (t_dist, DistributionSpec::Exponential { rate: rho }) => {
            let g = |k: f64| t_dist.mgf(-k * c).map(|v| v - 1.0 + k / rho);
            // g(rho) = E e^{-rho c T} > 0; the positive root lies in (0, rho)
            solve_increasing_root(g, rho)
        }
        _ => Err(Error::UnsupportedModel(
            "adjustment coefficient needs an exponential inter-renewal or jump law".into(),
        )),
    }
}

// Root of g on (0, pole): g(0) = 0, g dips negative, crosses back up before
// the pole. Bisection between the last negative point and pole, then secant.
fn solve_increasing_root<G: Fn(f64) -> Result<f64>>(g: G, pole: f64) -> Result<f64> {
    let mut lo = 1e-8 * pole;
    if g(lo)? >= 0.0 {
        return Err(Error::Regime("objective not negative near zero".into()));
    }
    let mut hi = pole * (1.0 - 1e-9);
    let mut flo = g(lo)?;
    let mut fhi = g(hi)?;
    if fhi < 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fmid = g(mid)?;
        if fmid < 0.0 {
            (lo, flo) = (mid, fmid);
        } else {
            (hi, fhi) = (mid, fmid);
        }
    }
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, flo, fhi);
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..30 {
        if best.1.abs() <= 1e-12 || fb == fa {
            break;
        }
        let x = b - fb * (b - a) / (fb - fa);
        let fx = g(x)?;
        (a, fa) = (b, fb);
        (b, fb) = (x, fx);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
    }
    if best.1.abs() > 1e-12 {
        return Err(Error::SolverFailed { residual: best.1.abs(), tol: 1e-12 });
    }
    Ok(best.0)
}

/// Horizon-free upper bound on the level above the critical rate. The
/// exponential/exponential model has a sharper closed form; otherwise
/// -ln(alpha)/kappa with kappa the adjustment coefficient.
pub fn upper_bound_supercritical(model: &RenewalModel, alpha: f64, c: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if let (
        DistributionSpec::Exponential { rate: delta },
        DistributionSpec::Exponential { rate: rho },
    ) = (model.dist_t, model.dist_y)
    {
        let s = model.summary()?;
        if c <= s.cstar {
            return Err(Error::Regime(format!(
                "c {} must exceed the critical rate {}",
                c, s.cstar
            )));
        }
        return Ok(0f64.max(-(alpha * c * rho / delta).ln() / (rho - delta / c)));
    }
    Ok(-alpha.ln() / adjustment_coefficient(model, c)?)
}

/// Second-difference convexity report for the solved level curve on a grid.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub convex: bool,
    pub levels: Vec<f64>,
    /// interior grid points where the second difference dips below -tolerance
    pub violations: Vec<(f64, f64)>,
    pub tolerance: f64,
}

/// Check second differences of a sampled curve against -tolerance.
pub fn second_difference_report(grid: &[f64], values: &[f64], tolerance: f64) -> ConvexityReport {
    let mut violations = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let d2 = values[i + 1] - 2.0 * values[i] + values[i - 1];
        if d2 < -tolerance {
            violations.push((grid[i], d2));
        }
    }
    ConvexityReport { convex: violations.is_empty(), levels: values.to_vec(), violations, tolerance }
}

/// Solve the heuristic level on a uniform drift grid and verify convexity of
/// the resulting curve via second differences.
pub fn convexity_check(
    model: &RenewalModel,
    alpha: f64,
    t: f64,
    cgrid: &[f64],
) -> Result<ConvexityReport> {
    let s = model.summary()?;
    let mut levels = Vec::with_capacity(cgrid.len());
    for &c in cgrid {
        levels.push(solve_heuristic_level_with(&s, alpha, t, c, 1e-8)?.level);
    }
    let scale = levels.iter().cloned().fold(1f64, f64::max);
    Ok(second_difference_report(cgrid, &levels, 1e-6 * scale))
}
