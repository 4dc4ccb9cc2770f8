//! Exact-event Monte Carlo for the crossing time: per-path indicators,
//! probability estimates with binomial error bars, and the empirical
//! fixed-probability level by stochastic bisection.
//!
//! Checking only renewal epochs is exact, not an approximation: between
//! jumps the process u + cs - V_s is nondecreasing (c >= 0), so its infimum
//! over [0, t] is attained at a jump epoch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::RenewalModel;
use crate::error::{Error, Result};
use crate::level::{LevelMethod, LevelReport};

/// Simulation settings. `prob_tolerance` bounds the empirical probability
/// gap across the final bisection bracket.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub npaths: usize,
    pub seed: u64,
    pub max_bisection: usize,
    pub prob_tolerance: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { npaths: 100_000, seed: 1, max_bisection: 60, prob_tolerance: 2e-3 }
    }
}

/// A binomial probability estimate.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub phat: f64,
    pub stderr: f64,
    pub npaths: usize,
    pub seed: u64,
}

/// Independent substream for one path: every path sees the same draws
/// regardless of u, c, t or thread scheduling, which makes estimates
/// deterministic and pathwise monotone in u (common random numbers).
fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// True iff the process u + cs - V_s goes negative by horizon t, checked at
/// renewal epochs only (exact; see module docs).
pub fn crossing_indicator<R: Rng + ?Sized>(
    model: &RenewalModel,
    u: f64,
    c: f64,
    t: f64,
    rng: &mut R,
) -> bool {
    let mut epoch = model.dist_t1.sample(rng);
    let mut jumps = 0.0f64;
    loop {
        if epoch > t {
            return false;
        }
        jumps += model.dist_y.sample(rng);
        if jumps - c * epoch > u {
            return true;
        }
        epoch += model.dist_t.sample(rng);
    }
}

/// Mean of independent crossing indicators over `cfg.npaths` substreams.
/// The reduction sums integer success counts, so the result does not depend
/// on thread count or scheduling order.
pub fn estimate_crossing_prob(
    model: &RenewalModel,
    u: f64,
    c: f64,
    t: f64,
    cfg: &McConfig,
) -> McEstimate {
    let count: u64 = (0..cfg.npaths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            crossing_indicator(model, u, c, t, &mut rng) as u64
        })
        .sum();
    let n = cfg.npaths as f64;
    let phat = count as f64 / n;
    McEstimate { phat, stderr: (phat * (1.0 - phat) / n).sqrt(), npaths: cfg.npaths, seed: cfg.seed }
}

/// Empirical fixed-probability level: bisection on u of the estimated
/// crossing probability, reusing the same substreams at every u so the
/// empirical curve is monotone path-by-path and the bisection is well-posed.
pub fn simulate_level(
    model: &RenewalModel,
    alpha: f64,
    t: f64,
    c: f64,
    cfg: &McConfig,
) -> Result<LevelReport> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!("alpha {alpha} must lie in (0, 1/2)")));
    }
    let s = model.summary()?;
    let phat = |u: f64| estimate_crossing_prob(model, u, c, t, cfg).phat;

    let mut lo = 1f64.max((s.cstar - c) * t);
    let mut flo = phat(lo) - alpha;
    let (mut hi, mut fhi) = (lo, flo);
    let mut iterations = 0usize;
    if flo > 0.0 {
        for _ in 0..64 {
            hi *= 2.0;
            fhi = phat(hi) - alpha;
            iterations += 1;
            if fhi <= 0.0 {
                break;
            }
            (lo, flo) = (hi, fhi);
        }
    } else {
        for _ in 0..64 {
            lo *= 0.5;
            flo = phat(lo) - alpha;
            iterations += 1;
            if flo >= 0.0 {
                break;
            }
            (hi, fhi) = (lo, flo);
        }
    }
    if flo < 0.0 || fhi > 0.0 {
        return Err(Error::BracketFailure { lo, hi, flo, fhi });
    }
    let bracket = (lo, hi);
    let mut best = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
    for _ in 0..cfg.max_bisection {
        if flo - fhi <= cfg.prob_tolerance {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = phat(mid) - alpha;
        iterations += 1;
        if fmid >= 0.0 {
            (lo, flo) = (mid, fmid);
        } else {
            (hi, fhi) = (mid, fmid);
        }
        if fmid.abs() < best.1.abs() {
            best = (mid, fmid);
        }
    }
    Ok(LevelReport {
        c,
        alpha,
        t,
        level: best.0,
        method: LevelMethod::McBisection,
        residual: best.1.abs(),
        bracket,
        iterations,
    })
}
