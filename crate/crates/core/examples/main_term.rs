//! Weighted cap counts Sigma(w) against eps^3 N sigma_inf S(N) / 2.

use expsum_lab::counting::{compare, median, write_comparisons, CompareSettings, SigmaWQuery};
use expsum_lab::sphere::sample_directions;

fn main() -> expsum_lab::Result<()> {
    let settings = CompareSettings::default();
    let mut rows = Vec::new();
    for r in [31u64, 51, 75] {
        for xi in sample_directions(r, 3) {
            let q = SigmaWQuery::with_eps_exponent(r, xi, 0.125)?;
            rows.push(compare(&q, &settings)?);
        }
    }
    write_comparisons(&rows, std::io::stdout().lock())?;
    let ratios: Vec<f64> = rows.iter().map(|c| c.ratio).collect();
    println!("median ratio {:.4}", median(&ratios).unwrap_or(f64::NAN));
    Ok(())
}
