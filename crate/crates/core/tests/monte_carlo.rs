//! Simulation results checked against the closed-form moments.

use toppleone::mc::{mc_curve_summary, mc_mse, run_study, Grid, StudyConfig, Target};
use toppleone::moments::{mle_cdf_moment, mle_pdf_mse, umvue_cdf_mse, umvue_pdf_mse, MomentQuery};
use toppleone::Estimator;

fn point(x: f64, reps: usize, seed: u64) -> StudyConfig {
    StudyConfig { reps, seed, grid: Grid::new(x, x, 1).unwrap(), ..StudyConfig::default() }
}

#[test]
fn mle_pdf_mse_million_replicates() {
    let r = &mc_mse(Estimator::Mle, 10, 1.0, &point(0.5, 1_000_000, 21)).unwrap()[0];
    let exact = mle_pdf_mse(10, 1.0, 0.5).unwrap();
    assert!((r.mse - exact).abs() <= 3.0 * r.mc_se, "{} vs {exact}", r.mse);
    assert!(((r.mse - exact) / exact).abs() < 0.02);
    assert_eq!(r.failures, 0);
}

#[test]
fn mle_cdf_first_moment() {
    let s = mc_curve_summary(Estimator::Mle, 10, 1.0, 0.5, 1_000_000, 22).unwrap();
    let exact = mle_cdf_moment(&MomentQuery::new(1, 10, 1.0, 0.5).unwrap()).unwrap();
    assert!((s.cdf.mean - exact).abs() <= 3.0 * s.cdf.mean_se, "{} vs {exact}", s.cdf.mean);
}

#[test]
fn umvue_grid_mean_matches_analytic() {
    let config = StudyConfig { reps: 100_000, seed: 23, ..StudyConfig::default() };
    let points = config.grid.points();
    for (n, alpha) in [(10, 1.0), (20, 3.0)] {
        let records = mc_mse(Estimator::Umvue, n, alpha, &config).unwrap();
        for r in records {
            let exact = points
                .iter()
                .map(|x| match r.target {
                    Target::Pdf => umvue_pdf_mse(n, alpha, x.get()).unwrap().mse,
                    Target::Cdf => umvue_cdf_mse(n, alpha, x.get()).unwrap().mse,
                })
                .sum::<f64>()
                / points.len() as f64;
            assert!((r.mse - exact).abs() <= 3.0 * r.mc_se, "n={n} alpha={alpha} {}: {} vs {exact}", r.target, r.mse);
        }
    }
}

#[test]
fn estimators_share_samples_within_a_cell() {
    // With one replicate and a single point, UMVUE and MLE use the same t, so
    // the two fits are functions of the same sample.
    let config = point(0.5, 1, 24);
    let a = mc_curve_summary(Estimator::Mle, 10, 2.0, 0.5, 1, 24).unwrap();
    let u = mc_curve_summary(Estimator::Umvue, 10, 2.0, 0.5, 1, 24).unwrap();
    let t = 10.0 / a.alpha_hat.unwrap().mean;
    let b = (2.0 * 0.5 - 0.25f64).ln();
    assert!((u.cdf.mean - ((t + b) / t).powi(9)).abs() < 1e-12);
    assert_eq!(mc_mse(Estimator::Mle, 10, 2.0, &config).unwrap()[0].reps, 1);
}

#[test]
fn study_records_are_valid() {
    let records = run_study(&StudyConfig { reps: 200, ..StudyConfig::default() }).unwrap();
    assert_eq!(records.len(), 160);
    for r in &records {
        assert!(r.mse.is_finite() && r.mse >= 0.0 && r.mc_se >= 0.0, "{r:?}");
        assert!(!r.flagged(), "{r:?}");
    }
}
