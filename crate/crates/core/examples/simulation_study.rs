//! The default simulation design: 1000 replicates for every combination of
//! n in {10, 20, 50, 100}, alpha in {0.5, 1, 2, 3} and the five estimators.
//! Prints the MSE table and, per target, how often the MLE has the
//! smallest MSE in its (n, alpha) cell.
//!
//! cargo run --release --example simulation_study [reps]

use std::time::Instant;

use toppleone::mc::{run_study, StudyConfig, Target};
use toppleone::Estimator;

fn main() -> toppleone::Result<()> {
    let reps = std::env::args().nth(1).map_or(1000, |s| s.parse().expect("reps"));
    let config = StudyConfig { reps, ..StudyConfig::default() };
    let start = Instant::now();
    let records = run_study(&config)?;
    println!("{} records in {:.1?}\n", records.len(), start.elapsed());

    for target in [Target::Pdf, Target::Cdf] {
        println!("{target} MSE");
        print!("{:>4} {:>5}", "n", "alpha");
        for e in Estimator::ALL {
            print!(" {:>11}", e.name());
        }
        println!();
        let mut mle_best = 0;
        for &n in &config.sizes {
            for &alpha in &config.alphas {
                print!("{n:>4} {alpha:>5}");
                let cell: Vec<_> = Estimator::ALL
                    .iter()
                    .map(|&e| {
                        records
                            .iter()
                            .find(|r| r.estimator == e && r.n == n && r.alpha == alpha && r.target == target)
                            .expect("record")
                    })
                    .collect();
                for r in &cell {
                    print!(" {:>11.4e}", r.mse);
                }
                let best = cell.iter().min_by(|a, b| a.mse.total_cmp(&b.mse)).expect("nonempty");
                if best.estimator == Estimator::Mle {
                    mle_best += 1;
                }
                println!("  best={}", best.estimator);
            }
        }
        println!("MLE smallest in {mle_best} of 16 cells\n");
    }
    Ok(())
}
