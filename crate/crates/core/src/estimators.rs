//! Estimators of the shape and of the PDF/CDF curves.
//!
//! Maximum likelihood and the UMVUE have closed forms. The percentile,
//! least squares and weighted least squares estimators minimise an
//! order-statistic objective in `alpha` with [`minimize_scalar`], starting
//! from a bracket around the MLE.

use std::fmt;
use std::str::FromStr;

use crate::distribution::{self, ShapeParam, UnitPoint};
use crate::error::{Error, Result};
use crate::optimize::minimize_scalar;

/// Argument tolerance for the percentile / least squares fits.
pub const FIT_TOLERANCE: f64 = 1e-8;

/// The initial bracket is `[mle / BRACKET_FACTOR, mle * BRACKET_FACTOR]`.
const BRACKET_FACTOR: f64 = 100.0;
const MAX_BRACKET_EXPANSIONS: usize = 64;

/// Minimum sample size for the UMVUE curves.
pub const UMVUE_MIN_N: usize = 3;

/// An i.i.d. sample from the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<UnitPoint>,
}

impl Sample {
    /// Rejects empty input and any value outside the open interval (0, 1).
    pub fn new(values: &[f64]) -> Result<Self> {
        let values = values.iter().map(|&v| UnitPoint::new(v)).collect::<Result<Vec<_>>>()?;
        Self::from_points(values)
    }

    pub fn from_points(values: Vec<UnitPoint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SampleTooSmall { n: 0, required: 1 });
        }
        Ok(Sample { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[UnitPoint] {
        &self.values
    }

    pub fn ordered(&self) -> OrderedSample {
        OrderedSample::new(self)
    }
}

/// Order statistics of a sample with their plotting positions `i / (n + 1)`.
///
/// `g(x_(i))` and its logarithm are cached since every objective uses them.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSample {
    sorted: Vec<UnitPoint>,
    g: Vec<f64>,
    ln_g: Vec<f64>,
}

impl OrderedSample {
    pub fn new(sample: &Sample) -> Self {
        let mut sorted = sample.values.clone();
        // Stable: ties keep input order.
        sorted.sort_by(|a, b| a.get().total_cmp(&b.get()));
        let g = sorted.iter().map(|x| x.g()).collect();
        let ln_g = sorted.iter().map(|x| x.ln_g()).collect();
        OrderedSample { sorted, g, ln_g }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[UnitPoint] {
        &self.sorted
    }

    /// Plotting position of the `i`-th order statistic, 1-based.
    pub fn plotting_position(&self, i: usize) -> f64 {
        i as f64 / (self.len() + 1) as f64
    }
}

/// The five fitting methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Mle,
    Umvue,
    Pce,
    Lse,
    Wlse,
}

impl Estimator {
    pub const ALL: [Estimator; 5] =
        [Estimator::Mle, Estimator::Umvue, Estimator::Pce, Estimator::Lse, Estimator::Wlse];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Mle => "mle",
            Estimator::Umvue => "umvue",
            Estimator::Pce => "pce",
            Estimator::Lse => "lse",
            Estimator::Wlse => "wlse",
        }
    }

    /// Fit this estimator to a sample.
    pub fn fit(self, sample: &Sample) -> Result<FittedCurve> {
        match self {
            Estimator::Mle => Ok(mle(sample)),
            Estimator::Umvue => umvue(sample),
            Estimator::Pce => pce(sample),
            Estimator::Lse => lse(sample),
            Estimator::Wlse => wlse(sample),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown estimator '{s}' (expected mle, umvue, pce, lse or wlse)")))
    }
}

/// A fitted PDF/CDF pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedCurve {
    /// Plug-in curves `pdf(alpha_hat, .)`, `cdf(alpha_hat, .)`.
    Shape { alpha_hat: ShapeParam, method: Estimator },
    /// UMVUE curves, functions of the sufficient statistic `t` and `n`.
    Umvue { t: f64, n: usize },
}

impl FittedCurve {
    pub fn method(&self) -> Estimator {
        match *self {
            FittedCurve::Shape { method, .. } => method,
            FittedCurve::Umvue { .. } => Estimator::Umvue,
        }
    }

    /// Shape estimate, if this is a plug-in fit.
    pub fn alpha_hat(&self) -> Option<f64> {
        match *self {
            FittedCurve::Shape { alpha_hat, .. } => Some(alpha_hat.get()),
            FittedCurve::Umvue { .. } => None,
        }
    }

    /// Estimated density at `x`.
    ///
    /// For the UMVUE this is
    /// `(n-1)(2-2x)(t+b)^(n-2) / ((2x-x^2) t^(n-1))` with `b = ln(2x-x^2)`,
    /// and zero when `t + b <= 0`.
    pub fn pdf(&self, x: UnitPoint) -> f64 {
        match *self {
            FittedCurve::Shape { alpha_hat, .. } => distribution::pdf(alpha_hat, x),
            FittedCurve::Umvue { t, n } => {
                let b = x.ln_g();
                if t + b <= 0.0 {
                    return 0.0;
                }
                let nf = n as f64;
                let ratio = (t + b) / t;
                (nf - 1.0) * (2.0 - 2.0 * x.get()) / x.g() / t * ratio.powi(n as i32 - 2)
            }
        }
    }

    /// Estimated distribution function at `x`: `((t + b) / t)^(n-1)` for the
    /// UMVUE, zero when `t + b <= 0`.
    pub fn cdf(&self, x: UnitPoint) -> f64 {
        match *self {
            FittedCurve::Shape { alpha_hat, .. } => distribution::cdf(alpha_hat, x),
            FittedCurve::Umvue { t, n } => {
                let b = x.ln_g();
                if t + b <= 0.0 {
                    return 0.0;
                }
                ((t + b) / t).powi(n as i32 - 1)
            }
        }
    }
}

/// `t = -sum ln(2x_i - x_i^2)`, complete sufficient for `alpha`.
pub fn sufficient_statistic(sample: &Sample) -> f64 {
    -sample.values.iter().map(|x| x.ln_g()).sum::<f64>()
}

/// Maximum likelihood: `alpha_hat = n / t`.
pub fn mle(sample: &Sample) -> FittedCurve {
    let alpha = sample.len() as f64 / sufficient_statistic(sample);
    FittedCurve::Shape { alpha_hat: ShapeParam::new(alpha).expect("t > 0"), method: Estimator::Mle }
}

/// UMVUE of the curves. Needs `n >= 3`.
pub fn umvue(sample: &Sample) -> Result<FittedCurve> {
    let n = sample.len();
    if n < UMVUE_MIN_N {
        return Err(Error::SampleTooSmall { n, required: UMVUE_MIN_N });
    }
    Ok(FittedCurve::Umvue { t: sufficient_statistic(sample), n })
}

/// `sum (p_i^(1/alpha) - g(x_(i)))^2`.
pub fn pce_objective(alpha: f64, os: &OrderedSample) -> f64 {
    let n1 = (os.len() + 1) as f64;
    os.g.iter()
        .enumerate()
        .map(|(i, &g)| {
            let p = (i + 1) as f64 / n1;
            let r = (p.ln() / alpha).exp() - g;
            r * r
        })
        .sum()
}

/// `sum (g(x_(i))^alpha - p_i)^2`.
pub fn lse_objective(alpha: f64, os: &OrderedSample) -> f64 {
    let n1 = (os.len() + 1) as f64;
    os.ln_g
        .iter()
        .enumerate()
        .map(|(i, &lg)| {
            let r = (alpha * lg).exp() - (i + 1) as f64 / n1;
            r * r
        })
        .sum()
}

/// Inverse variance of `F(X_(i))`: `(n+2)(n+1)^2 / (i (n-i+1))`, 1-based `i`.
pub fn wlse_weight(i: usize, n: usize) -> f64 {
    let (i, n) = (i as f64, n as f64);
    (n + 2.0) * (n + 1.0) * (n + 1.0) / (i * (n - i + 1.0))
}

/// `sum w_i (g(x_(i))^alpha - p_i)^2`.
pub fn wlse_objective(alpha: f64, os: &OrderedSample) -> f64 {
    let n = os.len();
    let n1 = (n + 1) as f64;
    os.ln_g
        .iter()
        .enumerate()
        .map(|(i, &lg)| {
            let r = (alpha * lg).exp() - (i + 1) as f64 / n1;
            wlse_weight(i + 1, n) * r * r
        })
        .sum()
}

/// Minimise `objective` over `alpha`, starting from a bracket of two
/// decades either side of `start` and widening whenever the minimiser lands
/// on an end of the bracket.
fn fit_shape<F: Fn(f64) -> f64>(objective: F, start: f64, method: Estimator) -> Result<FittedCurve> {
    let mut lo = start / BRACKET_FACTOR;
    let mut hi = start * BRACKET_FACTOR;
    let mut evaluations = 0;
    for _ in 0..=MAX_BRACKET_EXPANSIONS {
        let m = minimize_scalar(&objective, lo, hi, FIT_TOLERANCE)?;
        evaluations += m.evaluations;
        let edge = 4.0 * FIT_TOLERANCE;
        if m.x - lo <= edge && lo > f64::MIN_POSITIVE {
            hi = lo * 4.0;
            lo /= 2.0;
        } else if hi - m.x <= edge && hi < f64::MAX / 2.0 {
            lo = hi / 4.0;
            hi *= 2.0;
        } else {
            let alpha_hat = ShapeParam::new(m.x)?;
            return Ok(FittedCurve::Shape { alpha_hat, method });
        }
    }
    Err(Error::NonConvergence { what: format!("{method} bracket expansion"), evaluations })
}

fn mle_alpha(sample: &Sample) -> f64 {
    sample.len() as f64 / sufficient_statistic(sample)
}

/// Percentile estimator.
pub fn pce(sample: &Sample) -> Result<FittedCurve> {
    let os = sample.ordered();
    fit_shape(|a| pce_objective(a, &os), mle_alpha(sample), Estimator::Pce)
}

/// Least squares estimator.
pub fn lse(sample: &Sample) -> Result<FittedCurve> {
    let os = sample.ordered();
    fit_shape(|a| lse_objective(a, &os), mle_alpha(sample), Estimator::Lse)
}

/// Weighted least squares estimator.
pub fn wlse(sample: &Sample) -> Result<FittedCurve> {
    let os = sample.ordered();
    fit_shape(|a| wlse_objective(a, &os), mle_alpha(sample), Estimator::Wlse)
}
