//! Monte Carlo mean squared errors of the fitted PDF and CDF curves.
//!
//! Each replicate draws its sample from its own counter-based stream, keyed
//! on the study seed, the `(n, alpha)` cell and the replicate index. Every
//! estimator in a cell therefore sees the same samples, and results do not
//! depend on how replicates are spread over threads: per-replicate errors
//! are collected in index order and reduced sequentially.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distribution::{self, ShapeParam, UnitPoint};
use crate::error::{Error, Result};
use crate::estimators::{Estimator, FittedCurve, Sample, UMVUE_MIN_N};

/// Generator used for every replicate stream; written into study outputs.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9; seed_from_u64(cell key), stream = replicate index)";

/// A record is flagged when more than this fraction of replicates failed.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

/// Deterministic uniform stream for one replicate.
pub fn replicate_stream(seed: u64, replicate_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate_index);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the streams for the `(n, alpha)` cell of a study.
pub fn cell_seed(seed: u64, n: usize, alpha: f64) -> u64 {
    splitmix64(seed ^ splitmix64(n as u64 ^ splitmix64(alpha.to_bits())))
}

/// Which curve an MSE refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Pdf,
    Cdf,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Pdf => "pdf",
            Target::Cdf => "cdf",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pdf" => Ok(Target::Pdf),
            "cdf" => Ok(Target::Cdf),
            _ => Err(Error::domain(format!("unknown target '{s}'"))),
        }
    }
}

/// Evenly spaced evaluation abscissae `lo, ..., hi` (`count` points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        UnitPoint::new(lo)?;
        UnitPoint::new(hi)?;
        if count == 0 || lo > hi || (count == 1 && lo != hi) {
            return Err(Error::domain(format!("invalid grid {lo}:{hi}:{count}")));
        }
        Ok(Grid { lo, hi, count })
    }

    /// The default grid `0.05, 0.10, ..., 0.95`.
    pub fn default_grid() -> Self {
        Grid { lo: 0.05, hi: 0.95, count: 19 }
    }

    pub fn points(&self) -> Vec<UnitPoint> {
        if self.count == 1 {
            return vec![UnitPoint::new(self.lo).expect("validated")];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let x = if i + 1 == self.count { self.hi } else { self.lo + i as f64 * step };
                UnitPoint::new(x).expect("validated")
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `lo:hi:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::domain(format!("grid must be lo:hi:count, got '{s}'"));
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        Grid::new(lo, hi, count)
    }
}

/// How squared errors are reduced over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    /// One record per target: squared error averaged over the grid.
    MeanOverGrid,
    /// One record per grid point and target.
    PerPoint,
}

impl FromStr for Aggregate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" | "mean-over-grid" => Ok(Aggregate::MeanOverGrid),
            "per-point" => Ok(Aggregate::PerPoint),
            _ => Err(Error::domain(format!("aggregate must be 'mean' or 'per-point', got '{s}'"))),
        }
    }
}

/// Full design of a simulation study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub alphas: Vec<f64>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub estimators: Vec<Estimator>,
    pub grid: Grid,
    pub aggregate: Aggregate,
}

impl Default for StudyConfig {
    /// 1000 replicates of sizes 10, 20, 50, 100 for shapes 0.5, 1, 2, 3,
    /// all five estimators, averaged over the default grid.
    fn default() -> Self {
        StudyConfig {
            alphas: vec![0.5, 1.0, 2.0, 3.0],
            sizes: vec![10, 20, 50, 100],
            reps: 1000,
            seed: 42,
            estimators: Estimator::ALL.to_vec(),
            grid: Grid::default_grid(),
            aggregate: Aggregate::MeanOverGrid,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::domain("reps must be >= 1"));
        }
        if self.alphas.is_empty() || self.sizes.is_empty() || self.estimators.is_empty() {
            return Err(Error::domain("alphas, sizes and estimators must be nonempty"));
        }
        for &a in &self.alphas {
            ShapeParam::new(a)?;
        }
        if self.sizes.contains(&0) {
            return Err(Error::domain("sample sizes must be >= 1"));
        }
        if self.estimators.contains(&Estimator::Umvue) {
            if let Some(&n) = self.sizes.iter().find(|&&n| n < UMVUE_MIN_N) {
                return Err(Error::SampleTooSmall { n, required: UMVUE_MIN_N });
            }
        }
        Grid::new(self.grid.lo, self.grid.hi, self.grid.count)?;
        Ok(())
    }
}

/// One cell of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct MseRecord {
    pub estimator: Estimator,
    pub n: usize,
    pub alpha: f64,
    pub target: Target,
    pub mse: f64,
    /// Standard error of `mse` across replicates.
    pub mc_se: f64,
    pub reps: usize,
    pub seed: u64,
    /// `lo:hi:count` for grid averages, the abscissa for per-point records.
    pub grid: String,
    /// Replicates dropped because the estimator failed to converge.
    pub failures: usize,
}

impl MseRecord {
    pub fn flagged(&self) -> bool {
        self.failures as f64 > MAX_FAILURE_FRACTION * self.reps as f64
    }
}

/// Mean and standard error of a list of replicate values.
fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

fn draw_sample(seed: u64, n: usize, alpha: ShapeParam, index: u64) -> Result<Sample> {
    let mut rng = replicate_stream(cell_seed(seed, n, alpha.get()), index);
    Sample::from_points(distribution::sample(alpha, &mut rng, n)?)
}

/// Monte Carlo MSE of one estimator in one `(n, alpha)` cell.
///
/// Returns the pdf records followed by the cdf records: one of each for
/// [`Aggregate::MeanOverGrid`], one per grid point for
/// [`Aggregate::PerPoint`].
pub fn mc_mse(kind: Estimator, n: usize, alpha: f64, config: &StudyConfig) -> Result<Vec<MseRecord>> {
    let shape = ShapeParam::new(alpha)?;
    if kind == Estimator::Umvue && n < UMVUE_MIN_N {
        return Err(Error::SampleTooSmall { n, required: UMVUE_MIN_N });
    }
    if config.reps == 0 {
        return Err(Error::domain("reps must be >= 1"));
    }
    let points = config.grid.points();
    let truth_pdf: Vec<f64> = points.iter().map(|&x| distribution::pdf(shape, x)).collect();
    let truth_cdf: Vec<f64> = points.iter().map(|&x| distribution::cdf(shape, x)).collect();
    let g = points.len();
    let per_point = config.aggregate == Aggregate::PerPoint;

    let replicate = |index: usize| -> Result<Option<Vec<f64>>> {
        let sample = draw_sample(config.seed, n, shape, index as u64)?;
        let fit = match kind.fit(&sample) {
            Ok(fit) => fit,
            Err(Error::NonConvergence { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let sq_pdf = points.iter().zip(&truth_pdf).map(|(&x, &t)| (fit.pdf(x) - t).powi(2));
        let sq_cdf = points.iter().zip(&truth_cdf).map(|(&x, &t)| (fit.cdf(x) - t).powi(2));
        Ok(Some(if per_point {
            sq_pdf.chain(sq_cdf).collect()
        } else {
            vec![sq_pdf.sum::<f64>() / g as f64, sq_cdf.sum::<f64>() / g as f64]
        }))
    };
    let results: Vec<Option<Vec<f64>>> =
        (0..config.reps).into_par_iter().map(replicate).collect::<Result<_>>()?;

    let ok: Vec<&Vec<f64>> = results.iter().flatten().collect();
    let failures = config.reps - ok.len();
    let columns = if per_point { 2 * g } else { 2 };
    let mut records = Vec::with_capacity(columns);
    for c in 0..columns {
        let column: Vec<f64> = ok.iter().map(|r| r[c]).collect();
        let (mse, mc_se) = mean_and_se(&column);
        let (target, grid) = if per_point {
            let target = if c < g { Target::Pdf } else { Target::Cdf };
            (target, points[c % g].get().to_string())
        } else {
            (if c == 0 { Target::Pdf } else { Target::Cdf }, config.grid.to_string())
        };
        records.push(MseRecord {
            estimator: kind,
            n,
            alpha,
            target,
            mse,
            mc_se,
            reps: config.reps,
            seed: config.seed,
            grid,
            failures,
        });
    }
    Ok(records)
}

/// Run every `(n, estimator, alpha)` cell of the study.
///
/// Records are ordered by sample size, then estimator, then shape, then
/// target, following the configuration's list order.
pub fn run_study(config: &StudyConfig) -> Result<Vec<MseRecord>> {
    config.validate()?;
    let mut out = Vec::new();
    for &n in &config.sizes {
        for &kind in &config.estimators {
            for &alpha in &config.alphas {
                let mut records = mc_mse(kind, n, alpha, config)?;
                if config.aggregate == Aggregate::PerPoint {
                    // Interleave pdf/cdf by grid point.
                    let g = records.len() / 2;
                    let cdf = records.split_off(g);
                    records = records.into_iter().zip(cdf).flat_map(|(p, c)| [p, c]).collect();
                }
                out.extend(records);
            }
        }
    }
    Ok(out)
}

/// [`run_study`] on a dedicated pool of `threads` worker threads.
pub fn run_study_with_threads(config: &StudyConfig, threads: usize) -> Result<Vec<MseRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_study(config))
}

/// Monte Carlo summary of a scalar statistic: mean, its standard error,
/// the sample variance and the standard error of that variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub count: usize,
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Self {
        let (mean, mean_se) = mean_and_se(values);
        let sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
        let (variance, variance_se) = mean_and_se(&sq);
        Summary { mean, mean_se, variance, variance_se, count: values.len() }
    }
}

/// Replicated fits of one estimator at a single abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSummary {
    /// Shape estimates; `None` for the UMVUE.
    pub alpha_hat: Option<Summary>,
    pub pdf: Summary,
    pub cdf: Summary,
    pub failures: usize,
}

/// Fit `kind` to `reps` samples and summarise the shape estimate and the
/// fitted curves at `x`. Uses the same streams as [`mc_mse`].
pub fn mc_curve_summary(
    kind: Estimator,
    n: usize,
    alpha: f64,
    x: f64,
    reps: usize,
    seed: u64,
) -> Result<CurveSummary> {
    let shape = ShapeParam::new(alpha)?;
    let x = UnitPoint::new(x)?;
    let fits: Vec<Option<FittedCurve>> = (0..reps)
        .into_par_iter()
        .map(|i| -> Result<Option<FittedCurve>> {
            let sample = draw_sample(seed, n, shape, i as u64)?;
            match kind.fit(&sample) {
                Ok(f) => Ok(Some(f)),
                Err(Error::NonConvergence { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let fits: Vec<FittedCurve> = fits.into_iter().flatten().collect();
    let failures = reps - fits.len();
    let alpha_hat = match kind {
        Estimator::Umvue => None,
        _ => Some(Summary::from_values(&fits.iter().filter_map(|f| f.alpha_hat()).collect::<Vec<_>>())),
    };
    let pdf = Summary::from_values(&fits.iter().map(|f| f.pdf(x)).collect::<Vec<_>>());
    let cdf = Summary::from_values(&fits.iter().map(|f| f.cdf(x)).collect::<Vec<_>>());
    Ok(CurveSummary { alpha_hat, pdf, cdf, failures })
}
