//! Exact MSEs of the MLE and UMVUE curves, checked against simulation.
//!
//! cargo run --release --example analytic_mse

use toppleone::mc::{mc_mse, Grid, StudyConfig, Target};
use toppleone::moments::{mle_cdf_mse, mle_pdf_mse, umvue_cdf_mse, umvue_pdf_mse};
use toppleone::Estimator;

fn main() -> toppleone::Result<()> {
    let x = 0.5;
    println!("{:>4} {:>5} {:>8} {:>6} {:>12} {:>12} {:>10}", "n", "alpha", "est", "target", "exact", "simulated", "z");
    for n in [10, 50] {
        for alpha in [0.5, 2.0] {
            let config = StudyConfig { reps: 100_000, seed: 3, grid: Grid::new(x, x, 1)?, ..StudyConfig::default() };
            for kind in [Estimator::Mle, Estimator::Umvue] {
                let (pdf, cdf) = match kind {
                    Estimator::Mle => (mle_pdf_mse(n, alpha, x)?, mle_cdf_mse(n, alpha, x)?),
                    _ => (umvue_pdf_mse(n, alpha, x)?.mse, umvue_cdf_mse(n, alpha, x)?.mse),
                };
                for r in mc_mse(kind, n, alpha, &config)? {
                    let exact = if r.target == Target::Pdf { pdf } else { cdf };
                    let z = (r.mse - exact) / r.mc_se;
                    println!("{n:>4} {alpha:>5} {:>8} {:>6} {exact:>12.5e} {:>12.5e} {z:>10.2}", kind.name(), r.target.name(), r.mse);
                }
            }
        }
    }

    println!("\nMLE pdf MSE as x approaches 1 (n = 10, alpha = 2):");
    for k in [1, 3, 6, 9, 12, 15] {
        let x = 1.0 - 10f64.powi(-k);
        println!("  x = 1 - 1e-{k:<2}  mse = {:e}", mle_pdf_mse(10, 2.0, x)?);
    }
    Ok(())
}
