//! Special functions: `K_nu(z)` for real order, `Gamma(s, x)` for any real
//! `s`, log-gamma and log-binomial coefficients.

use crate::error::{Error, Result};
use crate::quadrature::ln_integral_unimodal;

pub use statrs::function::gamma::ln_gamma as ln_gamma_unchecked;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Relative error above which a recurrence result is reported as degraded.
pub const DEGRADED_REL_ERROR: f64 = 1e-6;

/// `ln Gamma(s)` for `s > 0`.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if s > 0.0 && s.is_finite() {
        Ok(ln_gamma_unchecked(s))
    } else {
        Err(Error::domain(format!("ln_gamma needs s > 0, got {s}")))
    }
}

/// `ln C(m, k)`, or `None` when the coefficient is zero (`k < 0` or `k > m`).
///
/// Small `m` is computed with exact integer arithmetic before taking the log.
pub fn ln_binomial(m: u64, k: i64) -> Option<f64> {
    if k < 0 || k as u64 > m {
        return None;
    }
    let k = (k as u64).min(m - k as u64);
    if m <= 100 {
        // c * (m - i) <= C(100, 50) * 100 < 2^128 at every step.
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (m - i) as u128 / (i + 1) as u128;
        }
        return Some((c as f64).ln());
    }
    let m = m as f64;
    let k = k as f64;
    Some(ln_gamma_unchecked(m + 1.0) - ln_gamma_unchecked(k + 1.0) - ln_gamma_unchecked(m - k + 1.0))
}

/// `ln K_nu(z)` for real `nu` and `z > 0`.
///
/// Computed from `K_nu(z) = ∫_0^∞ exp(-z cosh t) cosh(nu t) dt` by adaptive
/// quadrature in log space, so orders and arguments whose `K` lies far
/// outside the `f64` range are still handled.
pub fn ln_bessel_k(nu: f64, z: f64) -> Result<f64> {
    if !nu.is_finite() {
        return Err(Error::domain(format!("Bessel order must be finite, got {nu}")));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::domain(format!("bessel_k needs z > 0, got {z}")));
    }
    let nu = nu.abs();
    let ln_cosh_nu = move |t: f64| {
        let a = nu * t;
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    };
    let log_f = move |t: f64| -z * t.cosh() + ln_cosh_nu(t);

    // Stationary point of the log-integrand: z sinh t = nu tanh(nu t). It is
    // t = 0 when nu^2 <= z, otherwise the unique positive root, which lies
    // below asinh(nu / z).
    let mode = if nu * nu <= z {
        0.0
    } else {
        let h = |t: f64| nu * (nu * t).tanh() - z * t.sinh();
        let (mut lo, mut hi) = (0.0f64, (nu / z).asinh());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let curvature = -z * mode.cosh() + nu * nu / (nu * mode).cosh().powi(2);
    let scale = (1.0 / curvature.abs().max(1e-12).sqrt()).min(1.0);
    ln_integral_unimodal(log_f, 0.0, f64::INFINITY, mode, scale, 1e-13)
}

/// Modified Bessel function of the second kind `K_nu(z)`, real order.
///
/// Returns [`Error::Overflow`] when the value exceeds the `f64` range; use
/// [`ln_bessel_k`] in that regime.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    let ln = ln_bessel_k(nu, z)?;
    let v = ln.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("K_{nu}({z}) = exp({ln})")))
    }
}

/// Value of `Gamma(s, x)` together with an estimate of its relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncGamma {
    pub value: f64,
    pub rel_error: f64,
}

impl IncGamma {
    /// True when cancellation in the recurrence may have cost more than
    /// [`DEGRADED_REL_ERROR`] of relative accuracy.
    pub fn degraded(&self) -> bool {
        self.rel_error.is_nan() || self.rel_error > DEGRADED_REL_ERROR
    }
}

/// Upper (complementary) incomplete gamma `Gamma(s, x) = ∫_x^∞ t^(s-1) e^(-t) dt`
/// for any real `s` and `x > 0`.
///
/// * `s > 0`: series for the lower function when `x < s + 1`, continued
///   fraction otherwise.
/// * `s <= 0`, `x > 1`: the continued fraction, which converges for any `s`.
/// * `s <= 0`, `x <= 1`: downward recurrence
///   `Gamma(s, x) = (Gamma(s + 1, x) - x^s e^(-x)) / s` from a positive start
///   `s + ceil(-s) + 1`, or from `Gamma(0, x) = E1(x)` for integer `s`.
pub fn upper_inc_gamma(s: f64, x: f64) -> Result<IncGamma> {
    if !s.is_finite() {
        return Err(Error::domain(format!("incomplete gamma needs finite s, got {s}")));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("incomplete gamma needs x > 0, got {x}")));
    }
    let value = if s > 0.0 || x > 1.0 {
        ln_upper_inc_gamma_direct(s, x)?.exp()
    } else {
        return downward_recurrence(s, x);
    };
    if !value.is_finite() {
        return Err(Error::Overflow(format!("Gamma({s}, {x})")));
    }
    Ok(IncGamma { value, rel_error: 4.0 * f64::EPSILON })
}

/// `ln Gamma(s, x)` by series or continued fraction. Requires `s > 0` or
/// `x > 1`.
fn ln_upper_inc_gamma_direct(s: f64, x: f64) -> Result<f64> {
    if s > 0.0 && x < s + 1.0 {
        let p = lower_series_regularized(s, x)?;
        Ok(ln_gamma_unchecked(s) + (-p).ln_1p())
    } else {
        Ok(s * x.ln() - x + legendre_cf(s, x)?.ln())
    }
}

const MAX_TERMS: usize = 100_000;

/// `gamma(s, x) / Gamma(s)` by the power series, `s > 0`.
fn lower_series_regularized(s: f64, x: f64) -> Result<f64> {
    let mut ap = s;
    let mut del = 1.0 / s;
    let mut sum = del;
    for _ in 0..MAX_TERMS {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON * 0.5 {
            return Ok(sum * (s * x.ln() - x - ln_gamma_unchecked(s)).exp());
        }
    }
    Err(Error::NonConvergence { what: format!("incomplete gamma series s={s} x={x}"), evaluations: MAX_TERMS })
}

/// Continued fraction `Gamma(s, x) = e^(-x) x^s * CF`, modified Lentz.
fn legendre_cf(s: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let i = i as f64;
        let an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence { what: format!("incomplete gamma fraction s={s} x={x}"), evaluations: MAX_TERMS })
}

/// Exponential integral `E1(x) = Gamma(0, x)` by its power series, `0 < x <= 1`.
fn exp_integral_e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let k = k as f64;
        term *= -x / k;
        let add = term / k;
        sum += add;
        if add.abs() < f64::EPSILON * sum.abs() * 0.1 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

fn downward_recurrence(s: f64, x: f64) -> Result<IncGamma> {
    let steps = (-s).ceil();
    let integer = s == s.round();
    let (mut s_k, mut value) = if integer {
        (0.0, exp_integral_e1_series(x))
    } else {
        let start = s + steps + 1.0;
        (start, ln_upper_inc_gamma_direct(start, x)?.exp())
    };
    let mut abs_err = 4.0 * f64::EPSILON * value.abs();
    let ln_x = x.ln();
    while s_k > s + 0.5 {
        s_k -= 1.0;
        let term = (s_k * ln_x - x).exp();
        let term_err = f64::EPSILON * term * (1.0 + (s_k * ln_x).abs() + x);
        value = (value - term) / s_k;
        abs_err = (abs_err + term_err) / s_k.abs() + f64::EPSILON * value.abs();
        if !value.is_finite() {
            return Err(Error::Overflow(format!("Gamma({s}, {x})")));
        }
    }
    let rel_error = if value > 0.0 { abs_err / value } else { f64::INFINITY };
    Ok(IncGamma { value, rel_error })
}
