//! Density, distribution function, quantile and sampling for the Topp-Leone law.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};

/// Positive, finite shape parameter `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ShapeParam(f64);

impl ShapeParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(ShapeParam(alpha))
        } else {
            Err(Error::domain(format!("shape must be positive and finite, got {alpha}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// A point of the open unit interval, the support of the distribution.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitPoint(f64);

impl UnitPoint {
    pub fn new(x: f64) -> Result<Self> {
        if x > 0.0 && x < 1.0 {
            Ok(UnitPoint(x))
        } else {
            Err(Error::domain(format!("x must lie in (0, 1), got {x}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `2x - x^2`, the base of both the density and the CDF.
    #[inline]
    pub fn g(self) -> f64 {
        let x = self.0;
        x * (2.0 - x)
    }

    /// `ln(2x - x^2)`, strictly negative.
    ///
    /// Near `x = 1` this is evaluated as `ln(1 - (1 - x)^2)` to keep the
    /// digits of the small result.
    #[inline]
    pub fn ln_g(self) -> f64 {
        let x = self.0;
        if x > 0.5 {
            let c = 1.0 - x;
            (-c * c).ln_1p()
        } else {
            x.ln() + (2.0 - x).ln()
        }
    }
}

/// `g(x) = 2x - x^2`.
pub fn g(x: UnitPoint) -> f64 {
    x.g()
}

/// `alpha (2 - 2x) (2x - x^2)^(alpha - 1)`.
pub fn pdf(alpha: ShapeParam, x: UnitPoint) -> f64 {
    let a = alpha.get();
    a * (2.0 - 2.0 * x.get()) * ((a - 1.0) * x.ln_g()).exp()
}

/// `(2x - x^2)^alpha`.
pub fn cdf(alpha: ShapeParam, x: UnitPoint) -> f64 {
    (alpha.get() * x.ln_g()).exp()
}

/// Inverse of [`cdf`]: `1 - sqrt(1 - u^(1/alpha))`.
///
/// Evaluated as `v / (1 + sqrt(1 - v))` with `v = u^(1/alpha)` and
/// `1 - v = -expm1(ln(u) / alpha)`, which is exact to rounding at both ends
/// of the interval.
pub fn quantile(alpha: ShapeParam, u: f64) -> Result<UnitPoint> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("probability must lie in (0, 1), got {u}")));
    }
    let e = u.ln() / alpha.get();
    let v = e.exp();
    let one_minus_v = -e.exp_m1();
    UnitPoint::new(v / (1.0 + one_minus_v.sqrt()))
}

/// Source of uniform variates on the open interval (0, 1).
pub trait UniformSource {
    fn next_open01(&mut self) -> f64;
}

impl<R: Rng + ?Sized> UniformSource for R {
    fn next_open01(&mut self) -> f64 {
        self.sample(Open01)
    }
}

/// Replays a fixed list of uniforms; panics when exhausted.
#[derive(Debug, Clone)]
pub struct FixedUniforms {
    values: Vec<f64>,
    pos: usize,
}

impl FixedUniforms {
    pub fn new(values: Vec<f64>) -> Self {
        FixedUniforms { values, pos: 0 }
    }
}

impl UniformSource for FixedUniforms {
    fn next_open01(&mut self) -> f64 {
        let u = self.values[self.pos];
        self.pos += 1;
        u
    }
}

/// Draw `count` variates by inversion.
pub fn sample<S: UniformSource + ?Sized>(
    alpha: ShapeParam,
    source: &mut S,
    count: usize,
) -> Result<Vec<UnitPoint>> {
    (0..count).map(|_| quantile(alpha, source.next_open01())).collect()
}
