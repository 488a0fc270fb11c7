//! Fit the five estimators to one simulated sample and compare the fitted
//! curves with the truth.
//!
//! cargo run --example fit_estimators [n] [alpha] [seed]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toppleone::distribution::{self, sample};
use toppleone::{Estimator, Sample, ShapeParam, UnitPoint};

fn main() -> toppleone::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(30, |s| s.parse().expect("n"));
    let alpha: f64 = args.next().map_or(2.0, |s| s.parse().expect("alpha"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let a = ShapeParam::new(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = Sample::from_points(sample(a, &mut rng, n)?)?;
    let x = UnitPoint::new(0.5)?;

    println!("n = {n}, alpha = {alpha}, t = {:.6}", toppleone::estimators::sufficient_statistic(&data));
    println!("{:>6} {:>12} {:>12} {:>12}", "", "alpha_hat", "pdf(0.5)", "cdf(0.5)");
    println!("{:>6} {:>12.6} {:>12.6} {:>12.6}", "true", alpha, distribution::pdf(a, x), distribution::cdf(a, x));
    for kind in Estimator::ALL {
        let fit = kind.fit(&data)?;
        let shape = fit.alpha_hat().map_or("-".to_string(), |v| format!("{v:.6}"));
        println!("{:>6} {:>12} {:>12.6} {:>12.6}", kind.name(), shape, fit.pdf(x), fit.cdf(x));
    }
    Ok(())
}
