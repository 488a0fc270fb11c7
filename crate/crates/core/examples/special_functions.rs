//! Modified Bessel function of the second kind and the upper incomplete
//! gamma function, including negative parameters.

use toppleone::special::{bessel_k, ln_bessel_k, upper_inc_gamma};

fn main() -> toppleone::Result<()> {
    println!("K_nu(z)");
    for (nu, z) in [(0.0, 1.0), (0.5, 0.1), (0.5, 10.0), (-3.0, 2.0), (3.0, 2.0), (12.5, 0.7)] {
        println!("  K_{nu}({z}) = {:e}", bessel_k(nu, z)?);
    }
    println!("  ln K_200(1e-6) = {} (K itself overflows)", ln_bessel_k(200.0, 1e-6)?);
    assert!(bessel_k(200.0, 1e-6).is_err());

    println!("\nGamma(s, x)");
    for (s, x) in [(3.5, 0.2), (1.0, 2.0), (0.0, 1.0), (-1.0, 1.0), (-0.5, 0.3), (-7.5, 4.0), (-9.0, 0.05)] {
        let g = upper_inc_gamma(s, x)?;
        let flag = if g.degraded() { "  (degraded)" } else { "" };
        println!("  Gamma({s}, {x}) = {:e}  rel. error <= {:.1e}{flag}", g.value, g.rel_error);
    }
    Ok(())
}
