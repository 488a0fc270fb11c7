//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or domain error,
//! 3 estimator non-convergence.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::distribution::{self, ShapeParam, UnitPoint};
use crate::error::Error;
use crate::estimators::{Estimator, FittedCurve, Sample};
use crate::mc::{self, Aggregate, Grid, MseRecord, StudyConfig};
use crate::moments::{self, UmvueMse};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "toppleone", version, about = "Topp-Leone distribution: estimation, analytic MSEs and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit estimators to a file with one observation in (0, 1) per line.
    Fit {
        input: PathBuf,
        /// Comma-separated estimators: mle, umvue, pce, lse, wlse.
        #[arg(long, short, value_delimiter = ',', default_value = "mle")]
        estimator: Vec<Estimator>,
        /// Also print the fitted pdf and cdf at this point.
        #[arg(long)]
        at: Option<f64>,
    },
    /// Evaluate the pdf, cdf and quantile round trip.
    Eval {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        x: f64,
    },
    /// Exact MSE of the MLE or UMVUE curves at a point.
    MseAnalytic {
        #[arg(long, short)]
        estimator: Estimator,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        x: f64,
    },
    /// Monte Carlo MSE study; writes CSV.
    Sim {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "mle,umvue,pce,lse,wlse")]
        estimators: Vec<Estimator>,
        /// lo:hi:count
        #[arg(long, default_value = "0.05:0.95:19")]
        grid: Grid,
        /// mean or per-point
        #[arg(long, default_value = "mean")]
        aggregate: Aggregate,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; all cores when omitted.
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: EXIT_USAGE, message }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Fit { input, estimator, at } => cmd_fit(&input, &estimator, at, out),
        Command::Eval { alpha, x } => cmd_eval(alpha, x, out),
        Command::MseAnalytic { estimator, n, alpha, x } => cmd_mse_analytic(estimator, n, alpha, x, out),
        Command::Sim { alpha, n, reps, seed, estimators, grid, aggregate, out: path, threads } => {
            let config = StudyConfig { alphas: alpha, sizes: n, reps, seed, estimators, grid, aggregate };
            cmd_sim(&config, path.as_deref(), threads, out, err)
        }
    }
}

/// Observations from text: one per line, `#` starts a comment.
pub fn parse_observations(text: &str) -> Result<Vec<f64>, Failure> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let v: f64 = content
            .parse()
            .map_err(|_| usage(format!("line {}: cannot parse '{content}' as a number", i + 1)))?;
        UnitPoint::new(v).map_err(|_| usage(format!("line {}: value {v} is outside (0, 1)", i + 1)))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(usage("no observations".into()));
    }
    Ok(values)
}

fn cmd_fit(input: &std::path::Path, kinds: &[Estimator], at: Option<f64>, out: &mut dyn Write) -> Result<(), Failure> {
    let text = fs::read_to_string(input).map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", input.display()) })?;
    let sample = Sample::new(&parse_observations(&text)?)?;
    let at = at.map(UnitPoint::new).transpose()?;
    writeln!(out, "n = {}", sample.len())?;
    for &kind in kinds {
        let fit = kind.fit(&sample)?;
        match fit {
            FittedCurve::Shape { alpha_hat, .. } => writeln!(out, "{kind}: alpha_hat = {}", alpha_hat.get())?,
            FittedCurve::Umvue { t, n } => writeln!(out, "{kind}: t = {t}, n = {n}")?,
        }
        if let Some(x) = at {
            writeln!(out, "  pdf({}) = {}", x.get(), fit.pdf(x))?;
            writeln!(out, "  cdf({}) = {}", x.get(), fit.cdf(x))?;
        }
    }
    Ok(())
}

fn cmd_eval(alpha: f64, x: f64, out: &mut dyn Write) -> Result<(), Failure> {
    let a = ShapeParam::new(alpha)?;
    let p = UnitPoint::new(x)?;
    let f = distribution::pdf(a, p);
    let cdf = distribution::cdf(a, p);
    writeln!(out, "pdf = {f}")?;
    writeln!(out, "cdf = {cdf}")?;
    if cdf > 0.0 && cdf < 1.0 {
        let back = distribution::quantile(a, cdf)?.get();
        writeln!(out, "quantile(cdf) = {back} (error {:.3e})", (back - x).abs())?;
    }
    Ok(())
}

fn overflow_diagnostic(e: Error, x: f64) -> Failure {
    match e {
        Error::Overflow(m) => usage(format!("overflow at x = {x} (1 - x = {:e}): {m}", 1.0 - x)),
        e => e.into(),
    }
}

fn write_umvue(out: &mut dyn Write, target: &str, m: &UmvueMse) -> io::Result<()> {
    writeln!(out, "{target}_mse = {}", m.mse)?;
    writeln!(out, "{target}_second_moment_quadrature = {}", m.second_moment)?;
    match m.series {
        Some(s) => {
            writeln!(out, "{target}_second_moment_series = {}", s.value)?;
            writeln!(out, "{target}_series_discrepancy = {:e}", m.series_discrepancy().unwrap_or(f64::NAN))?;
            writeln!(out, "{target}_series_reliable = {}", m.series_reliable())
        }
        None => writeln!(out, "{target}_series_reliable = false (series not evaluable)"),
    }
}

fn cmd_mse_analytic(kind: Estimator, n: usize, alpha: f64, x: f64, out: &mut dyn Write) -> Result<(), Failure> {
    match kind {
        Estimator::Mle => {
            let pdf = moments::mle_pdf_mse(n, alpha, x).map_err(|e| overflow_diagnostic(e, x))?;
            let cdf = moments::mle_cdf_mse(n, alpha, x).map_err(|e| overflow_diagnostic(e, x))?;
            writeln!(out, "estimator = mle")?;
            writeln!(out, "method = closed form (Bessel K)")?;
            writeln!(out, "pdf_mse = {pdf}")?;
            writeln!(out, "cdf_mse = {cdf}")?;
            writeln!(out, "reliable = {}", pdf.is_finite() && cdf.is_finite())?;
        }
        Estimator::Umvue => {
            let pdf = moments::umvue_pdf_mse(n, alpha, x).map_err(|e| overflow_diagnostic(e, x))?;
            let cdf = moments::umvue_cdf_mse(n, alpha, x).map_err(|e| overflow_diagnostic(e, x))?;
            writeln!(out, "estimator = umvue")?;
            writeln!(out, "method = quadrature, series cross-check")?;
            write_umvue(out, "pdf", &pdf)?;
            write_umvue(out, "cdf", &cdf)?;
        }
        other => {
            return Err(usage(format!("no closed-form MSE for {other}; use `sim`")));
        }
    }
    Ok(())
}

fn cmd_sim(
    config: &StudyConfig,
    path: Option<&std::path::Path>,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    config.validate()?;
    let records: Vec<MseRecord> = match threads {
        Some(0) => return Err(usage("--threads must be >= 1".into())),
        Some(t) => mc::run_study_with_threads(config, t)?,
        None => mc::run_study(config)?,
    };
    for r in records.iter().filter(|r| r.flagged()) {
        writeln!(
            err,
            "warning: {} n={} alpha={} {}: {} of {} replicates failed",
            r.estimator, r.n, r.alpha, r.target, r.failures, r.reps
        )?;
    }
    match path {
        Some(p) => {
            report::write_csv_file(p, &records)?;
            writeln!(err, "wrote {} records to {}", records.len(), p.display())?;
        }
        None => report::write_csv(&records, &mut *out)?,
    }
    Ok(())
}
