//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! cargo test --release --test acceptance

use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use toppleone::distribution::{self, cdf, quantile};
use toppleone::mc::{self, mc_curve_summary, mc_mse, replicate_stream, Grid, StudyConfig, Target};
use toppleone::moments::{mle_cdf_mse, mle_pdf_mse, umvue_cdf_mse, umvue_pdf_mse};
use toppleone::special::{bessel_k, upper_inc_gamma};
use toppleone::{Estimator, Sample, ShapeParam, UnitPoint};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn point_config(x: f64, reps: usize, seed: u64) -> StudyConfig {
    StudyConfig { reps, seed, grid: Grid::new(x, x, 1).unwrap(), ..StudyConfig::default() }
}

fn analytic_vs_mc_mle() -> Outcome {
    let mut worst_z: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for n in [10, 50] {
        for alpha in [1.0, 2.0] {
            let start = Instant::now();
            let records = mc_mse(Estimator::Mle, n, alpha, &point_config(0.5, 100_000, 11)).unwrap();
            slowest = slowest.max(start.elapsed());
            for r in records {
                let exact = match r.target {
                    Target::Pdf => mle_pdf_mse(n, alpha, 0.5).unwrap(),
                    Target::Cdf => mle_cdf_mse(n, alpha, 0.5).unwrap(),
                };
                let z = (r.mse - exact).abs() / r.mc_se;
                worst_z = worst_z.max(z);
                if z > 3.0 {
                    failures.push(format!("n={n} alpha={alpha} {}: z={z:.2}", r.target));
                }
            }
        }
    }
    let fast = slowest < Duration::from_secs(30);
    outcome(
        failures.is_empty() && fast,
        format!("max |z| = {worst_z:.2}, slowest cell {slowest:.1?} {}", failures.join("; ")),
    )
}

fn mle_mean_recovery() -> Outcome {
    let s = mc_curve_summary(Estimator::Mle, 10, 2.0, 0.5, 100_000, 12).unwrap();
    let mean = s.alpha_hat.unwrap().mean;
    let target = 20.0 / 9.0;
    outcome(rel(mean, target) < 0.005, format!("mean alpha_hat = {mean:.5}, target {target:.5}, rel {:.2e}", rel(mean, target)))
}

fn umvue_unbiased() -> Outcome {
    let a = ShapeParam::new(2.0).unwrap();
    let x = UnitPoint::new(0.5).unwrap();
    let s = mc_curve_summary(Estimator::Umvue, 10, 2.0, 0.5, 100_000, 13).unwrap();
    let zp = (s.pdf.mean - distribution::pdf(a, x)).abs() / s.pdf.mean_se;
    let zc = (s.cdf.mean - distribution::cdf(a, x)).abs() / s.cdf.mean_se;
    outcome(zp <= 3.0 && zc <= 3.0, format!("pdf |z| = {zp:.2}, cdf |z| = {zc:.2}"))
}

fn umvue_series_cross_validation() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [5, 10, 15] {
        for alpha in [0.5, 1.0, 2.0] {
            for x in [0.25, 0.5, 0.75] {
                for m in [umvue_pdf_mse(n, alpha, x).unwrap(), umvue_cdf_mse(n, alpha, x).unwrap()] {
                    worst = worst.max(m.series_discrepancy().unwrap_or(f64::INFINITY));
                }
            }
        }
    }
    let a = ShapeParam::new(1.0).unwrap();
    let x = UnitPoint::new(0.5).unwrap();
    let s = mc_curve_summary(Estimator::Umvue, 5, 1.0, 0.5, 1_000_000, 14).unwrap();
    let pdf = umvue_pdf_mse(5, 1.0, 0.5).unwrap();
    let cdf = umvue_cdf_mse(5, 1.0, 0.5).unwrap();
    let f2 = distribution::pdf(a, x).powi(2);
    let c2 = distribution::cdf(a, x).powi(2);
    let variances = [
        ("pdf quadrature", pdf.second_moment - f2, s.pdf),
        ("pdf series", pdf.series.unwrap().value - f2, s.pdf),
        ("cdf quadrature", cdf.second_moment - c2, s.cdf),
        ("cdf series", cdf.series.unwrap().value - c2, s.cdf),
    ];
    let mut worst_z: f64 = 0.0;
    let mut failures = Vec::new();
    for (label, exact, mc) in variances {
        let z = (mc.variance - exact).abs() / mc.variance_se;
        worst_z = worst_z.max(z);
        if z > 3.0 {
            failures.push(format!("{label} z={z:.2}"));
        }
    }
    outcome(
        worst <= 1e-8 && failures.is_empty(),
        format!("max series/quadrature gap {worst:.1e}, max variance |z| = {worst_z:.2} {}", failures.join("; ")),
    )
}

fn default_design(reps: usize) -> (StudyConfig, Vec<toppleone::MseRecord>) {
    let config = StudyConfig { reps, seed: 42, ..StudyConfig::default() };
    let records = mc::run_study(&config).unwrap();
    (config, records)
}

fn mle_smallest_mse() -> Outcome {
    let (config, records) = default_design(1000);
    let mut detail = Vec::new();
    let mut pass = true;
    for target in [Target::Pdf, Target::Cdf] {
        let mut wins = 0;
        for &n in &config.sizes {
            for &alpha in &config.alphas {
                let cell = records.iter().filter(|r| r.n == n && r.alpha == alpha && r.target == target);
                let best = cell.min_by(|a, b| a.mse.total_cmp(&b.mse)).unwrap();
                if best.estimator == Estimator::Mle {
                    wins += 1;
                }
            }
        }
        pass &= wins >= 14;
        detail.push(format!("{target}: MLE smallest in {wins}/16"));
    }
    outcome(pass, detail.join(", "))
}

fn mse_decreases_with_n() -> Outcome {
    let (config, records) = default_design(10_000);
    let mut violations = Vec::new();
    for &kind in &config.estimators {
        for &alpha in &config.alphas {
            for target in [Target::Pdf, Target::Cdf] {
                let series: Vec<f64> = config
                    .sizes
                    .iter()
                    .map(|&n| {
                        records
                            .iter()
                            .find(|r| r.estimator == kind && r.n == n && r.alpha == alpha && r.target == target)
                            .unwrap()
                            .mse
                    })
                    .collect();
                if series.windows(2).any(|w| w[1] >= w[0]) {
                    violations.push(format!("{kind} alpha={alpha} {target}"));
                }
            }
        }
    }
    outcome(violations.is_empty(), format!("{} of 40 sequences not strictly decreasing {}", violations.len(), violations.join("; ")))
}

fn special_functions() -> Outcome {
    let mut worst_half: f64 = 0.0;
    for z in [0.1, 1.0, 10.0] {
        let closed = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp();
        worst_half = worst_half.max(rel(bessel_k(0.5, z).unwrap(), closed));
    }
    let mut worst_sym: f64 = 0.0;
    for nu in [0.3, 1.0, 2.5, 7.0, 20.0] {
        for z in [0.05, 0.5, 3.0, 25.0] {
            let k = bessel_k(nu, z).unwrap();
            worst_sym = worst_sym.max((k - bessel_k(-nu, z).unwrap()).abs() / k);
        }
    }
    let mut worst_exp: f64 = 0.0;
    for x in [1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0] {
        worst_exp = worst_exp.max(rel(upper_inc_gamma(1.0, x).unwrap().value, (-x).exp()));
    }
    let mut worst_rec: f64 = 0.0;
    for i in 0..=80 {
        let s = -10.0 + 0.25 * i as f64;
        for x in [0.1, 0.3, 0.9, 1.5, 4.0, 11.0, 27.0, 50.0] {
            let lhs = upper_inc_gamma(s + 1.0, x).unwrap().value;
            let rhs = s * upper_inc_gamma(s, x).unwrap().value + x.powf(s) * (-x).exp();
            worst_rec = worst_rec.max(rel(rhs, lhs));
        }
    }
    outcome(
        worst_half <= 1e-10 && worst_sym <= 1e-12 && worst_exp <= 1e-12 && worst_rec <= 1e-9,
        format!("K_1/2 {worst_half:.1e}, symmetry {worst_sym:.1e}, Gamma(1,x) {worst_exp:.1e}, recurrence {worst_rec:.1e}"),
    )
}

fn distribution_checks() -> Outcome {
    let mut worst_round: f64 = 0.0;
    let mut worst_ks: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        let a = ShapeParam::new(alpha).unwrap();
        for i in 1..=1000 {
            let u = (i as f64 - 0.5) / 1000.0;
            worst_round = worst_round.max((cdf(a, quantile(a, u).unwrap()) - u).abs());
        }
        let mut draws: Vec<f64> = distribution::sample(a, &mut replicate_stream(15, alpha.to_bits()), 100_000)
            .unwrap()
            .into_iter()
            .map(|x| cdf(a, x))
            .collect();
        draws.sort_by(f64::total_cmp);
        let m = draws.len() as f64;
        let d = draws
            .iter()
            .enumerate()
            .map(|(i, &f)| (f - i as f64 / m).max((i + 1) as f64 / m - f))
            .fold(0.0, f64::max);
        worst_ks = worst_ks.max(d);
    }
    outcome(worst_round <= 1e-12 && worst_ks < 0.01, format!("round trip {worst_round:.1e}, max KS distance {worst_ks:.2e}"))
}

fn zero_residual_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha0 in [0.5, 1.0, 3.0] {
        let a = ShapeParam::new(alpha0).unwrap();
        let xs: Vec<f64> = (1..=9).map(|i| quantile(a, i as f64 / 10.0).unwrap().get()).collect();
        let sample = Sample::new(&xs).unwrap();
        for kind in [Estimator::Pce, Estimator::Lse, Estimator::Wlse] {
            let fitted = kind.fit(&sample).unwrap().alpha_hat().unwrap();
            worst = worst.max((fitted - alpha0).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |alpha_hat - alpha0| = {worst:.1e}"))
}

fn reproducible_csv() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_toppleone");
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let status = Command::new(exe)
            .args(["sim", "--seed", "2024", "--threads", threads, "--out"])
            .arg(&path)
            .stderr(Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let first = run("a.csv", "1");
    let second = run("b.csv", "1");
    let parallel = run("c.csv", "8");
    outcome(
        first == second && first == parallel,
        format!("{} bytes; repeat identical: {}, 1 vs 8 threads identical: {}", first.len(), first == second, first == parallel),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 10] = [
        ("analytic vs Monte Carlo MLE MSE", analytic_vs_mc_mle),
        ("MLE mean recovery", mle_mean_recovery),
        ("UMVUE unbiasedness", umvue_unbiased),
        ("UMVUE series vs quadrature vs Monte Carlo", umvue_series_cross_validation),
        ("MLE smallest MSE in default design", mle_smallest_mse),
        ("MSE decreases with n", mse_decreases_with_n),
        ("special functions", special_functions),
        ("distribution round trip and KS", distribution_checks),
        ("zero-residual recovery", zero_residual_recovery),
        ("reproducible simulation CSV", reproducible_csv),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {status}: {name} ({}) [{:.1?}]", i + 1, o.detail.trim_end(), start.elapsed());
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
