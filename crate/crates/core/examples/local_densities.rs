//! Local densities sigma_p, the truncated singular series and sigma_inf.

use std::f64::consts::PI;

use expsum_lab::densities::{sigma_infinity, sigma_p, singular_series, DensityFile, QuadratureSettings};
use expsum_lab::sphere::jacobi_r4;

fn main() -> expsum_lab::Result<()> {
    for (p, n) in [(2u64, 4u64), (2, 36), (3, 9), (3, 10), (5, 125), (7, 98)] {
        let r = sigma_p(p, n, 12)?;
        println!("sigma_{p}({n}) = {:.10}  stable from k = {}", r.sigma_p, r.k_star);
    }

    // r4(N) = pi^2 N S(N) exactly, so the truncated series should match
    for n in [30u64, 1000, 4096, 9999] {
        let s = singular_series(n, 2000, 0.05)?;
        let exact = jacobi_r4(n) as f64;
        println!("N = {n:5}  pi^2 N S = {:12.3}  r4 = {exact:8}", PI * PI * n as f64 * s.value);
    }

    let eps = 0.1;
    let s_inf = sigma_infinity(eps, &QuadratureSettings::default())?;
    let series = singular_series(10_404, 1000, 0.05)?;
    DensityFile::new(10_404, eps, s_inf, &series).write_json(std::io::stdout().lock())?;
    println!();
    Ok(())
}
