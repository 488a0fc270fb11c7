//! Density, distribution function, quantile and inversion sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toppleone::distribution::{cdf, pdf, quantile, sample};
use toppleone::{ShapeParam, UnitPoint};

fn main() -> toppleone::Result<()> {
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        let a = ShapeParam::new(alpha)?;
        println!("alpha = {alpha}");
        for x in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let p = UnitPoint::new(x)?;
            let u = cdf(a, p);
            println!("  x = {x:<4}  pdf = {:<20}  cdf = {:<20}  quantile(cdf) = {}", pdf(a, p), u, quantile(a, u)?.get());
        }
    }

    let a = ShapeParam::new(2.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = sample(a, &mut rng, 100_000)?;
    let mean = draws.iter().map(|x| x.get()).sum::<f64>() / draws.len() as f64;
    // E[X] = integral of 1 - F over (0, 1), 7/15 when alpha = 2.
    println!("\nmean of 1e5 draws at alpha = 2: {mean:.5} (exact {:.5})", 7.0 / 15.0);
    Ok(())
}
