//! The Topp-Leone distribution on (0, 1) and estimators of its density and
//! distribution function.
//!
//! The law has CDF `F(x) = (2x - x^2)^alpha` for a shape `alpha > 0`. This
//! crate provides:
//!
//! * [`distribution`]: density, CDF, quantile and inversion sampling;
//! * [`special`]: modified Bessel `K_nu` of real order, the upper incomplete
//!   gamma function for any real first argument, log-gamma and log-binomials;
//! * [`estimators`]: maximum likelihood, UMVUE, percentile, least squares
//!   and weighted least squares fits of the PDF/CDF curves;
//! * [`moments`]: closed-form moments and mean squared errors of the MLE and
//!   UMVUE curve estimators, together with quadrature cross-checks;
//! * [`mc`]: a reproducible, parallel Monte Carlo MSE study;
//! * [`report`]: the CSV schema the study is written in;
//! * [`cli`]: the command-line front end used by the `toppleone` binary.

pub mod cli;
pub mod distribution;
mod error;
pub mod estimators;
pub mod mc;
pub mod moments;
pub mod optimize;
pub mod quadrature;
pub mod report;
pub mod special;

pub use distribution::{ShapeParam, UnitPoint};
pub use error::{Error, Result};
pub use estimators::{Estimator, FittedCurve, OrderedSample, Sample};
pub use mc::{Aggregate, Grid, MseRecord, StudyConfig, Target};

