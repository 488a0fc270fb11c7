//! Closed-form moments and mean squared errors of the MLE and UMVUE curve
//! estimators, with direct quadrature of the defining integrals.
//!
//! With `T = -sum ln g(X_i) ~ Gamma(n, alpha)`, the MLE `S = n / T` has
//! density `f_S(s) = (n alpha)^n exp(-n alpha / s) / (Gamma(n) s^(n+1))`.
//! Integrating the plug-in curves against it gives Bessel-`K` closed forms;
//! the UMVUE second moments reduce to a finite sum of upper incomplete gamma
//! functions. Everything is assembled in log space.

use crate::distribution::{self, ShapeParam, UnitPoint};
use crate::error::{Error, Result};
use crate::estimators::UMVUE_MIN_N;
use crate::quadrature::ln_integral_unimodal;
use crate::special::{ln_bessel_k, ln_binomial, ln_gamma_unchecked, upper_inc_gamma};

const LN_2: f64 = std::f64::consts::LN_2;
const QUAD_REL_TOL: f64 = 1e-12;

/// Series and quadrature second moments further apart than this mark the
/// series as unreliable.
pub const SERIES_AGREEMENT: f64 = 1e-6;

/// Order `r` moment of an estimator from a size-`n` sample at `(alpha, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    pub r: u32,
    pub n: usize,
    pub alpha: ShapeParam,
    pub x: UnitPoint,
}

impl MomentQuery {
    pub fn new(r: u32, n: usize, alpha: f64, x: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("moment order r must be >= 1"));
        }
        if n == 0 {
            return Err(Error::domain("sample size n must be >= 1"));
        }
        Ok(MomentQuery { r, n, alpha: ShapeParam::new(alpha)?, x: UnitPoint::new(x)? })
    }

    /// `b = ln(2x - x^2)`; an error once `x` is so close to 1 that `b`
    /// rounds to zero and the Bessel argument vanishes.
    fn b(&self) -> Result<f64> {
        let b = self.x.ln_g();
        if b < 0.0 {
            Ok(b)
        } else {
            Err(Error::Overflow(format!("x = {} is too close to 1: ln(2x - x^2) rounds to 0", self.x.get())))
        }
    }
}

fn finite_exp(ln: f64, what: &str) -> Result<f64> {
    let v = ln.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} = exp({ln})")))
    }
}

/// `ln E[fhat(x)^r]` for the MLE plug-in density.
pub fn ln_mle_pdf_moment(q: &MomentQuery) -> Result<f64> {
    let b = q.b()?;
    let (r, n) = (q.r as f64, q.n as f64);
    let n_alpha = n * q.alpha.get();
    let x = q.x.get();
    let arg = 2.0 * (-n_alpha * r * b).sqrt();
    Ok(LN_2 + 0.5 * (r + n) * n_alpha.ln() + r * (2.0 - 2.0 * x).ln()
        - ln_gamma_unchecked(n)
        - r * b
        - 0.5 * (r - n) * (-r * b).ln()
        + ln_bessel_k(r - n, arg)?)
}

/// `E[fhat(x)^r]` for the MLE plug-in density.
pub fn mle_pdf_moment(q: &MomentQuery) -> Result<f64> {
    finite_exp(ln_mle_pdf_moment(q)?, "E[fhat^r]")
}

/// `ln E[Fhat(x)^r]` for the MLE plug-in CDF.
pub fn ln_mle_cdf_moment(q: &MomentQuery) -> Result<f64> {
    let b = q.b()?;
    let (r, n) = (q.r as f64, q.n as f64);
    let n_alpha = n * q.alpha.get();
    let arg = 2.0 * (-n_alpha * r * b).sqrt();
    Ok(LN_2 + 0.5 * n * n_alpha.ln() - ln_gamma_unchecked(n) + 0.5 * n * (-r * b).ln()
        + ln_bessel_k(-n, arg)?)
}

/// `E[Fhat(x)^r]` for the MLE plug-in CDF.
pub fn mle_cdf_moment(q: &MomentQuery) -> Result<f64> {
    finite_exp(ln_mle_cdf_moment(q)?, "E[Fhat^r]")
}

fn mse_from_moments(first: f64, second: f64, target: f64) -> f64 {
    second - 2.0 * target * first + target * target
}

/// Mean squared error of the MLE density estimate at `x`.
pub fn mle_pdf_mse(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q1 = MomentQuery::new(1, n, alpha, x)?;
    let q2 = MomentQuery { r: 2, ..q1 };
    let target = distribution::pdf(q1.alpha, q1.x);
    Ok(mse_from_moments(mle_pdf_moment(&q1)?, mle_pdf_moment(&q2)?, target))
}

/// Mean squared error of the MLE CDF estimate at `x`.
pub fn mle_cdf_mse(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q1 = MomentQuery::new(1, n, alpha, x)?;
    let q2 = MomentQuery { r: 2, ..q1 };
    let target = distribution::cdf(q1.alpha, q1.x);
    Ok(mse_from_moments(mle_cdf_moment(&q1)?, mle_cdf_moment(&q2)?, target))
}

/// Bias `E[Fhat(x)] - F(x)` of the MLE CDF estimate.
pub fn mle_cdf_bias(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q = MomentQuery::new(1, n, alpha, x)?;
    Ok(mle_cdf_moment(&q)? - distribution::cdf(q.alpha, q.x))
}

/// Bias `E[fhat(x)] - f(x)` of the MLE density estimate.
pub fn mle_pdf_bias(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q = MomentQuery::new(1, n, alpha, x)?;
    Ok(mle_pdf_moment(&q)? - distribution::pdf(q.alpha, q.x))
}

/// Positive root of `a2 s^2 + a1 s + a0 = 0` with `a2 > 0 > a0`, computed
/// without cancellation.
fn positive_root(a2: f64, a1: f64, a0: f64) -> f64 {
    let disc = (a1 * a1 - 4.0 * a2 * a0).sqrt();
    let q = -0.5 * (a1 + a1.signum() * disc);
    let (r1, r2) = if q != 0.0 { (q / a2, a0 / q) } else { (disc / (2.0 * a2), -disc / (2.0 * a2)) };
    r1.max(r2)
}

/// Log-integrand of `∫_0^∞ s^c e^(r b s - n alpha / s) ds` (up to constants),
/// integrated by quadrature.
fn ln_s_integral(c: f64, r: f64, b: f64, n_alpha: f64) -> Result<f64> {
    // Stationary point: r b s^2 + c s + n alpha = 0, i.e.
    // (-r b) s^2 - c s - n alpha = 0.
    let mode = positive_root(-r * b, -c, -n_alpha);
    let log_f = move |s: f64| c * s.ln() + r * b * s - n_alpha / s;
    let curvature = (-c / (mode * mode) - 2.0 * n_alpha / mode.powi(3)).abs();
    let scale = 1.0 / curvature.max(1e-300).sqrt();
    ln_integral_unimodal(log_f, 0.0, f64::INFINITY, mode, scale.min(mode.max(1e-3)), QUAD_REL_TOL)
}

/// `ln E[fhat(x)^r]` by quadrature against the sampling density of the MLE.
pub fn ln_mle_pdf_moment_quadrature(q: &MomentQuery) -> Result<f64> {
    let b = q.b()?;
    let (r, n) = (q.r as f64, q.n as f64);
    let n_alpha = n * q.alpha.get();
    // [s (2-2x) g^(s-1)]^r f_S(s) = const * s^(r-n-1) e^(r b s - n alpha / s)
    let ln_const = n * n_alpha.ln() - ln_gamma_unchecked(n) + r * (2.0 - 2.0 * q.x.get()).ln() - r * b;
    Ok(ln_const + ln_s_integral(r - n - 1.0, r, b, n_alpha)?)
}

/// `E[fhat(x)^r]` by quadrature.
pub fn mle_pdf_moment_quadrature(q: &MomentQuery) -> Result<f64> {
    finite_exp(ln_mle_pdf_moment_quadrature(q)?, "E[fhat^r]")
}

/// `ln E[Fhat(x)^r]` by quadrature against the sampling density of the MLE.
pub fn ln_mle_cdf_moment_quadrature(q: &MomentQuery) -> Result<f64> {
    let b = q.b()?;
    let (r, n) = (q.r as f64, q.n as f64);
    let n_alpha = n * q.alpha.get();
    let ln_const = n * n_alpha.ln() - ln_gamma_unchecked(n);
    Ok(ln_const + ln_s_integral(-n - 1.0, r, b, n_alpha)?)
}

/// `E[Fhat(x)^r]` by quadrature.
pub fn mle_cdf_moment_quadrature(q: &MomentQuery) -> Result<f64> {
    finite_exp(ln_mle_cdf_moment_quadrature(q)?, "E[Fhat^r]")
}

/// MLE density MSE assembled from quadrature moments.
pub fn mle_pdf_mse_quadrature(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q1 = MomentQuery::new(1, n, alpha, x)?;
    let q2 = MomentQuery { r: 2, ..q1 };
    let target = distribution::pdf(q1.alpha, q1.x);
    Ok(mse_from_moments(mle_pdf_moment_quadrature(&q1)?, mle_pdf_moment_quadrature(&q2)?, target))
}

/// MLE CDF MSE assembled from quadrature moments.
pub fn mle_cdf_mse_quadrature(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let q1 = MomentQuery::new(1, n, alpha, x)?;
    let q2 = MomentQuery { r: 2, ..q1 };
    let target = distribution::cdf(q1.alpha, q1.x);
    Ok(mse_from_moments(mle_cdf_moment_quadrature(&q1)?, mle_cdf_moment_quadrature(&q2)?, target))
}

/// Which UMVUE curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UmvueCurve {
    Pdf,
    Cdf,
}

/// Finite-sum evaluation of a UMVUE second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// `sum |term_i| / |sum term_i|`.
    pub cancellation: f64,
    /// Cancellation times the worst input relative error.
    pub rel_error_estimate: f64,
}

/// UMVUE mean squared error with both evaluations of the second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmvueMse {
    pub mse: f64,
    /// Authoritative second moment, by quadrature.
    pub second_moment: f64,
    /// Binomial/incomplete-gamma series, when it could be evaluated.
    pub series: Option<SeriesValue>,
}

impl UmvueMse {
    /// Relative gap between the series and the quadrature.
    pub fn series_discrepancy(&self) -> Option<f64> {
        self.series.map(|s| ((s.value - self.second_moment) / self.second_moment).abs())
    }

    /// The series agrees with the quadrature to [`SERIES_AGREEMENT`].
    pub fn series_reliable(&self) -> bool {
        self.series_discrepancy().is_some_and(|d| d <= SERIES_AGREEMENT)
    }
}

struct UmvueSetup {
    n: usize,
    alpha: f64,
    b: f64,
    /// ln of the constant in front of the t-integral.
    ln_prefactor: f64,
    /// (t + b)^power, t^(-(n - 1)) in the integrand.
    power: usize,
    target: f64,
}

fn umvue_setup(curve: UmvueCurve, n: usize, alpha: f64, x: f64) -> Result<UmvueSetup> {
    if n < UMVUE_MIN_N {
        return Err(Error::SampleTooSmall { n, required: UMVUE_MIN_N });
    }
    let q = MomentQuery::new(1, n, alpha, x)?;
    let b = q.b()?;
    let nf = n as f64;
    let ln_alpha_n = nf * alpha.ln() - ln_gamma_unchecked(nf);
    Ok(match curve {
        UmvueCurve::Pdf => {
            // A = (n - 1)(2 - 2x) / (2x - x^2)
            let ln_a = (nf - 1.0).ln() + (2.0 - 2.0 * x).ln() - b;
            UmvueSetup {
                n,
                alpha,
                b,
                ln_prefactor: ln_alpha_n + 2.0 * ln_a,
                power: 2 * n - 4,
                target: distribution::pdf(q.alpha, q.x),
            }
        }
        UmvueCurve::Cdf => UmvueSetup {
            n,
            alpha,
            b,
            ln_prefactor: ln_alpha_n,
            power: 2 * n - 2,
            target: distribution::cdf(q.alpha, q.x),
        },
    })
}

/// `ln [prefactor * ∫_{-b}^∞ (t + b)^k t^(-(n-1)) e^(-alpha t) dt]`.
fn ln_umvue_second_moment_quadrature(s: &UmvueSetup) -> Result<f64> {
    let (k, m) = (s.power as f64, (s.n - 1) as f64);
    let (alpha, b) = (s.alpha, s.b);
    let log_f = move |t: f64| k * (t + b).ln() - m * t.ln() - alpha * t;
    // Stationary point: alpha t^2 - (k - m - alpha b) t + m b = 0.
    let mode = positive_root(alpha, -(k - m - alpha * b), m * b);
    let curvature = (k / (mode + b).powi(2) - m / (mode * mode)).abs();
    let scale = (1.0 / curvature.max(1e-300).sqrt()).min(mode + b);
    Ok(s.ln_prefactor + ln_integral_unimodal(log_f, -b, f64::INFINITY, mode, scale, QUAD_REL_TOL)?)
}

/// Expand `(t + b)^k t^(-(n-1)) = sum_i C(k, i) b^i t^(e_i - 1)` with
/// `e_i = k - n + 2 - i` and integrate term by term:
/// `∫_{-b}^∞ t^(e_i - 1) e^(-alpha t) dt = alpha^(-e_i) Gamma(e_i, -alpha b)`.
fn umvue_second_moment_series(s: &UmvueSetup) -> Result<SeriesValue> {
    let k = s.power;
    let nf = s.n as f64;
    let x = -s.alpha * s.b;
    let ln_abs_b = (-s.b).ln();
    let ln_alpha = s.alpha.ln();
    let e0 = k as f64 - nf + 2.0;
    let mut terms = Vec::with_capacity(k + 1);
    let mut worst_input = f64::EPSILON;
    for i in 0..=k {
        let e = e0 - i as f64;
        let g = upper_inc_gamma(e, x)?;
        if g.value.is_nan() || g.value <= 0.0 {
            return Err(Error::Overflow(format!("Gamma({e}, {x}) underflowed")));
        }
        worst_input = worst_input.max(g.rel_error);
        let ln_c = ln_binomial(k as u64, i as i64).expect("0 <= i <= k");
        let ln_mag = s.ln_prefactor + ln_c + i as f64 * ln_abs_b - e * ln_alpha + g.value.ln();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        terms.push((ln_mag, sign));
    }
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    // Neumaier-compensated sum of the rescaled terms.
    let (mut sum, mut comp, mut abs_sum) = (0.0f64, 0.0f64, 0.0f64);
    for &(ln_mag, sign) in &terms {
        let v = sign * (ln_mag - top).exp();
        abs_sum += v.abs();
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    let total = sum + comp;
    let cancellation = abs_sum / total.abs();
    let value = finite_exp(top, "UMVUE series scale")? * total;
    Ok(SeriesValue { value, cancellation, rel_error_estimate: cancellation * worst_input })
}

fn umvue_mse(curve: UmvueCurve, n: usize, alpha: f64, x: f64) -> Result<UmvueMse> {
    let setup = umvue_setup(curve, n, alpha, x)?;
    let second_moment = finite_exp(ln_umvue_second_moment_quadrature(&setup)?, "UMVUE second moment")?;
    let series = umvue_second_moment_series(&setup).ok();
    Ok(UmvueMse { mse: second_moment - setup.target * setup.target, second_moment, series })
}

/// MSE of the UMVUE density estimate at `x`, `n >= 3`.
///
/// The second moment is
/// `alpha^n A^2 / Gamma(n) ∫_{-b}^∞ (1 + b/t)^(2n-4) t^(n-3) e^(-alpha t) dt`
/// with `A = (n-1)(2-2x)/(2x-x^2)` and `b = ln(2x-x^2)`. Quadrature of this
/// integral is authoritative. The series
/// `A^2 / Gamma(n) sum_{i=0}^{2n-4} C(2n-4, i) b^i alpha^(i+2) Gamma(n-i-2, -alpha b)`
/// is evaluated alongside; it alternates in sign and cancels badly for
/// large `n`.
pub fn umvue_pdf_mse(n: usize, alpha: f64, x: f64) -> Result<UmvueMse> {
    umvue_mse(UmvueCurve::Pdf, n, alpha, x)
}

/// MSE of the UMVUE CDF estimate at `x`, `n >= 3`.
///
/// Series form:
/// `1 / Gamma(n) sum_{i=0}^{2n-2} C(2n-2, i) b^i alpha^i Gamma(n-i, -alpha b)`.
pub fn umvue_cdf_mse(n: usize, alpha: f64, x: f64) -> Result<UmvueMse> {
    umvue_mse(UmvueCurve::Cdf, n, alpha, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn positive_root_stable() {
        let r = positive_root(1.0, -3.0, -4.0);
        assert!((r - 4.0).abs() < 1e-15);
        let r = positive_root(1e-12, 1.0, -1.0);
        assert!((r - 1.0).abs() < 1e-11);
    }

    #[test]
    fn query_validation() {
        assert!(MomentQuery::new(0, 5, 1.0, 0.5).is_err());
        assert!(MomentQuery::new(1, 0, 1.0, 0.5).is_err());
        assert!(MomentQuery::new(1, 5, -1.0, 0.5).is_err());
        assert!(MomentQuery::new(1, 5, 1.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(n, a, x) in &[(10, 1.0, 0.5), (5, 0.5, 0.3), (1, 2.0, 0.7), (40, 3.0, 0.2)] {
            for r in 1..=3 {
                let q = MomentQuery::new(r, n, a, x).unwrap();
                let c = mle_pdf_moment(&q).unwrap();
                let o = mle_pdf_moment_quadrature(&q).unwrap();
                assert!(rel(c, o) < 1e-8, "pdf r={r} n={n} a={a} x={x}: {c} vs {o}");
                let c = mle_cdf_moment(&q).unwrap();
                let o = mle_cdf_moment_quadrature(&q).unwrap();
                assert!(rel(c, o) < 1e-8, "cdf r={r} n={n} a={a} x={x}: {c} vs {o}");
            }
        }
    }

    #[test]
    fn cdf_moment_tends_to_one_near_right_end() {
        let q = MomentQuery::new(1, 10, 1.0, 1.0 - 1e-6).unwrap();
        assert!((mle_cdf_moment(&q).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn largest_x_below_one_stays_finite() {
        // b = ln(1 - (1-x)^2) ~ -1.2e-32 here; the Bessel argument is tiny
        // but the log-space evaluation keeps the moments finite.
        let x = 1.0 - f64::EPSILON / 2.0;
        let q = MomentQuery::new(1, 10, 1.0, x).unwrap();
        assert!((mle_cdf_moment(&q).unwrap() - 1.0).abs() < 1e-12);
        assert!(mle_pdf_moment(&q).unwrap() < 1e-12);
    }

    #[test]
    fn large_n_consistency() {
        let q = MomentQuery::new(1, 200, 2.0, 0.5).unwrap();
        let f = distribution::pdf(q.alpha, q.x);
        assert!(rel(mle_pdf_moment(&q).unwrap(), f) < 0.01);
    }

    #[test]
    fn mse_at_least_squared_bias() {
        for &(n, a, x) in &[(10, 1.0, 0.5), (5, 3.0, 0.25), (50, 0.5, 0.75)] {
            let bias = mle_pdf_bias(n, a, x).unwrap();
            assert!(mle_pdf_mse(n, a, x).unwrap() >= bias * bias);
            let bias = mle_cdf_bias(n, a, x).unwrap();
            assert!(mle_cdf_mse(n, a, x).unwrap() >= bias * bias);
        }
    }

    #[test]
    fn umvue_series_agrees_with_quadrature() {
        let m = umvue_pdf_mse(5, 1.0, 0.5).unwrap();
        assert!(m.series_discrepancy().unwrap() < 1e-8, "{m:?}");
        let m = umvue_cdf_mse(5, 1.0, 0.5).unwrap();
        assert!(m.series_discrepancy().unwrap() < 1e-8, "{m:?}");
        // mpmath value of the corrected series at n=5, alpha=2, x=0.5.
        let m = umvue_pdf_mse(5, 2.0, 0.5).unwrap();
        assert!(rel(m.second_moment, 2.353_147_057_754_292_5) < 1e-10);
        let m = umvue_cdf_mse(5, 2.0, 0.5).unwrap();
        assert!(rel(m.second_moment, 0.341_752_426_702_704_84) < 1e-10);
    }

    #[test]
    fn umvue_rejects_small_n() {
        assert!(matches!(umvue_pdf_mse(2, 1.0, 0.5), Err(Error::SampleTooSmall { .. })));
        assert!(umvue_cdf_mse(2, 1.0, 0.5).is_err());
    }

    #[test]
    fn mses_shrink_with_n() {
        for &(a, x) in &[(0.5, 0.25), (1.0, 0.5), (2.0, 0.75)] {
            let mut prev = [f64::INFINITY; 4];
            for &n in &[5, 10, 25, 50, 100] {
                let cur = [
                    mle_pdf_mse(n, a, x).unwrap(),
                    mle_cdf_mse(n, a, x).unwrap(),
                    umvue_pdf_mse(n, a, x).unwrap().mse,
                    umvue_cdf_mse(n, a, x).unwrap().mse,
                ];
                for (c, p) in cur.iter().zip(&prev) {
                    assert!(*c >= -1e-12 && c < p, "n={n} a={a} x={x}: {cur:?} {prev:?}");
                }
                prev = cur;
            }
            assert!(prev.iter().all(|&m| m < 0.05));
        }
    }
}
