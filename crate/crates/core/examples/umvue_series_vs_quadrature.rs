//! The UMVUE second moment by the finite binomial/incomplete-gamma series
//! and by direct quadrature. The series alternates in sign, so its
//! accuracy falls as n grows.

use toppleone::moments::{umvue_cdf_mse, umvue_pdf_mse};

fn main() -> toppleone::Result<()> {
    println!("{:>4} {:>5} {:>5} {:>6} {:>22} {:>22} {:>10} {:>8}", "n", "alpha", "x", "target", "quadrature", "series", "rel gap", "reliable");
    for n in [5, 10, 15, 30, 60] {
        for alpha in [0.5, 2.0] {
            for x in [0.25, 0.75] {
                for (target, m) in [("pdf", umvue_pdf_mse(n, alpha, x)?), ("cdf", umvue_cdf_mse(n, alpha, x)?)] {
                    let series = m.series.map_or("-".to_string(), |s| format!("{:.15e}", s.value));
                    let gap = m.series_discrepancy().map_or("-".to_string(), |d| format!("{d:.1e}"));
                    println!(
                        "{n:>4} {alpha:>5} {x:>5} {target:>6} {:>22.15e} {series:>22} {gap:>10} {:>8}",
                        m.second_moment,
                        m.series_reliable()
                    );
                }
            }
        }
    }
    Ok(())
}
