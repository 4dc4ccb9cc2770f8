//! Parametric positive laws for inter-renewal times and jump sizes, and the
//! derived renewal-model moment summary.

use rand::Rng;

use crate::error::{Error, Result};

/// A positive law from one of the three supported families.
///
/// The Pareto density is the Lomax-style form
/// f(y) = a b (1 + b y)^{-(a+1)}, y > 0, with mean 1/(b (a-1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Exponential { rate: f64 },
    Erlang { rate: f64, shape: u32 },
    Pareto { a: f64, b: f64 },
}

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        if rate <= 0.0 {
            return Err(Error::Domain(format!("exponential: rate {rate} must be positive")));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn erlang(rate: f64, shape: u32) -> Result<Self> {
        if rate <= 0.0 || shape < 1 {
            return Err(Error::Domain(format!(
                "erlang: rate {rate} must be positive and shape {shape} >= 1"
            )));
        }
        Ok(Self::Erlang { rate, shape })
    }

    /// Pareto with shape `a > 1` and rate `b > 0`. The mean must exist; higher
    /// moments are checked where they are needed.
    pub fn pareto(a: f64, b: f64) -> Result<Self> {
        if a <= 1.0 || b <= 0.0 {
            return Err(Error::Domain(format!(
                "pareto: shape a {a} must exceed 1 and rate b {b} must be positive"
            )));
        }
        Ok(Self::Pareto { a, b })
    }

    /// Density at `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::Domain(format!("pdf: x {x} must be positive")));
        }
        Ok(self.pdf_unchecked(x))
    }

    pub(crate) fn pdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => rate * (-rate * x).exp(),
            Self::Erlang { rate, shape } => {
                let k = shape as f64;
                let mut log_fact = 0.0;
                for i in 2..shape {
                    log_fact += (i as f64).ln();
                }
                (k * rate.ln() + (k - 1.0) * x.ln() - rate * x - log_fact).exp()
            }
            Self::Pareto { a, b } => a * b * (1.0 + b * x).powf(-(a + 1.0)),
        }
    }

    /// Right limit of the density at zero; the exact-evaluator grids sample
    /// point zero with this value.
    pub fn pdf_at_zero(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => rate,
            Self::Erlang { rate, shape } => {
                if shape == 1 {
                    rate
                } else {
                    0.0
                }
            }
            Self::Pareto { a, b } => a * b,
        }
    }

    /// Analytic derivative of the density, used by the Kendall derivative terms.
    pub fn pdf_deriv(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::Domain(format!("pdf_deriv: x {x} must be nonnegative")));
        }
        Ok(match *self {
            Self::Exponential { rate } => -rate * rate * (-rate * x).exp(),
            Self::Erlang { rate, shape } => {
                if shape == 1 {
                    -rate * rate * (-rate * x).exp()
                } else if x == 0.0 {
                    if shape == 2 {
                        rate * rate
                    } else {
                        0.0
                    }
                } else {
                    let k = shape as f64;
                    self.pdf_unchecked(x) * ((k - 1.0) / x - rate)
                }
            }
            Self::Pareto { a, b } => -a * (a + 1.0) * b * b * (1.0 + b * x).powf(-(a + 2.0)),
        })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { rate } => 1.0 - (-rate * x).exp(),
            Self::Erlang { rate, shape } => {
                // 1 - exp(-rate x) sum_{i<k} (rate x)^i / i!
                let mut term = 1.0;
                let mut sum = 1.0;
                for i in 1..shape {
                    term *= rate * x / i as f64;
                    sum += term;
                }
                1.0 - (-rate * x).exp() * sum
            }
            Self::Pareto { a, b } => 1.0 - (1.0 + b * x).powf(-a),
        }
    }

    /// Survival function P{X > x}.
    pub fn tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match *self {
            Self::Exponential { rate } => (-rate * x).exp(),
            Self::Erlang { rate, shape } => {
                let mut term = 1.0;
                let mut sum = 1.0;
                for i in 1..shape {
                    term *= rate * x / i as f64;
                    sum += term;
                }
                (-rate * x).exp() * sum
            }
            Self::Pareto { a, b } => (1.0 + b * x).powf(-a),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Erlang { rate, shape } => shape as f64 / rate,
            Self::Pareto { a, b } => 1.0 / (b * (a - 1.0)),
        }
    }

    /// Variance; Pareto needs a > 2.
    pub fn variance(&self) -> Result<f64> {
        match *self {
            Self::Exponential { rate } => Ok(1.0 / (rate * rate)),
            Self::Erlang { rate, shape } => Ok(shape as f64 / (rate * rate)),
            Self::Pareto { a, b } => {
                if a <= 2.0 {
                    return Err(Error::UnsupportedModel(format!(
                        "pareto variance requires a > 2, got a = {a}"
                    )));
                }
                let m1 = self.mean();
                let m2 = 2.0 / (b * b * (a - 1.0) * (a - 2.0));
                Ok(m2 - m1 * m1)
            }
        }
    }

    /// Third raw moment E X^3; Pareto needs a > 3.
    pub fn third_raw_moment(&self) -> Result<f64> {
        match *self {
            Self::Exponential { rate } => Ok(6.0 / rate.powi(3)),
            Self::Erlang { rate, shape } => {
                let k = shape as f64;
                Ok(k * (k + 1.0) * (k + 2.0) / rate.powi(3))
            }
            Self::Pareto { a, b } => {
                if a <= 3.0 {
                    return Err(Error::UnsupportedModel(format!(
                        "pareto third moment requires a > 3, got a = {a}"
                    )));
                }
                Ok(6.0 / (b.powi(3) * (a - 1.0) * (a - 2.0) * (a - 3.0)))
            }
        }
    }

    /// One variate by the inverse-cdf method (Erlang as a sum of exponentials).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Exponential { rate } => sample_exponential(rate, rng),
            Self::Erlang { rate, shape } => {
                (0..shape).map(|_| sample_exponential(rate, rng)).sum()
            }
            Self::Pareto { a, b } => {
                let u: f64 = rng.gen::<f64>();
                ((1.0 - u).powf(-1.0 / a) - 1.0) / b
            }
        }
    }

    /// Moment generating function E e^{sX} for s where it is finite.
    /// Heavy-tailed laws (Pareto) have no light tail: error for s > 0.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        match *self {
            Self::Exponential { rate } => {
                if s >= rate {
                    return Err(Error::Domain(format!("mgf diverges at s {s} >= rate {rate}")));
                }
                Ok(rate / (rate - s))
            }
            Self::Erlang { rate, shape } => {
                if s >= rate {
                    return Err(Error::Domain(format!("mgf diverges at s {s} >= rate {rate}")));
                }
                Ok((rate / (rate - s)).powi(shape as i32))
            }
            Self::Pareto { .. } => {
                if s <= 0.0 {
                    // E e^{sX} with s <= 0 is finite for any positive law
                    let cfg = crate::quad::QuadratureConfig::default();
                    let upper = self.mean() * 60.0 - 40.0 / s.min(-1e-12);
                    let r = crate::quad::integrate(
                        |x| (s * x).exp() * self.pdf_unchecked(x),
                        0.0,
                        upper,
                        &cfg,
                    )?;
                    Ok(r.value)
                } else {
                    Err(Error::UnsupportedModel(
                        "pareto is heavy-tailed: E exp(sX) diverges for s > 0".into(),
                    ))
                }
            }
        }
    }
}

fn sample_exponential<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen::<f64>();
    -(1.0 - u).ln() / rate
}

/// Normalized drift/variance summary of a renewal model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub et: f64,
    pub ey: f64,
    pub dt: f64,
    pub dy: f64,
    pub et3: f64,
    pub ey3: f64,
    /// M = ET / EY
    pub m: f64,
    /// D^2 = ((ET)^2 DY + (EY)^2 DT) / (EY)^3
    pub dsq: f64,
    /// c* = EY / ET = 1 / M
    pub cstar: f64,
}

/// The triple of laws (T1, T, Y) with T1 =d T in the ordinary model. The T1
/// slot is kept separate because the weighted approximations integrate
/// against f_{T1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalModel {
    pub dist_t1: DistributionSpec,
    pub dist_t: DistributionSpec,
    pub dist_y: DistributionSpec,
}

impl RenewalModel {
    /// Ordinary renewal model: T1 distributed as T.
    pub fn ordinary(dist_t: DistributionSpec, dist_y: DistributionSpec) -> Self {
        Self { dist_t1: dist_t, dist_t, dist_y }
    }

    /// Closed-form moment summary; errors if a required moment is infinite.
    pub fn summary(&self) -> Result<MomentSummary> {
        let et = self.dist_t.mean();
        let ey = self.dist_y.mean();
        let dt = self.dist_t.variance()?;
        let dy = self.dist_y.variance()?;
        let et3 = self.dist_t.third_raw_moment()?;
        let ey3 = self.dist_y.third_raw_moment()?;
        let m = et / ey;
        let dsq = (et * et * dy + ey * ey * dt) / ey.powi(3);
        if dsq <= 0.0 {
            return Err(Error::UnsupportedModel(format!("degenerate model: D^2 = {dsq}")));
        }
        Ok(MomentSummary { et, ey, dt, dy, et3, ey3, m, dsq, cstar: 1.0 / m })
    }
}
