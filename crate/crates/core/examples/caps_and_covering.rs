//! Largest empty caps on the scaled sphere and the covering exponent K.

use expsum_lab::sphere::{cap_gap, covering_exponent_estimate, normalize, CoveringQuery};

fn main() -> expsum_lab::Result<()> {
    let xi = normalize([1.0, 2.0f64.sqrt(), 3.0f64.sqrt(), 0.5])?;
    for n in [25u64, 121, 1001, 10_007] {
        let r = cap_gap(xi, n)?;
        println!("n = {n:6}  eps_min = {:.5}  nearest {:?}", r.eps_min, r.nearest);
    }

    let query = CoveringQuery {
        n_values: (5..=31u64).step_by(2).map(|r| r * r).collect(),
        num_samples: 500,
        seed: 1,
        max_two_adic: Some(0),
    };
    let est = covering_exponent_estimate(&query)?;
    est.write_csv(std::io::stdout().lock())?;
    Ok(())
}
