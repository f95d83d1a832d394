//! Quadratic Gauss sums G(s, t; q): closed form against the direct sum.

use expsum_lab::expsums::{gauss_bruteforce, gauss_closed, GaussParams};
use expsum_lab::modarith::gcd;

fn main() -> expsum_lab::Result<()> {
    println!("{:>4} {:>4} {:>4}  {:>28}  {:>9}", "s", "t", "q", "closed", "|diff|");
    for q in [1u64, 7, 8, 12, 16, 45, 97, 128] {
        for (s, t) in [(1i64, 0i64), (3, 1), (-5, 2), (11, -7)] {
            if gcd(s.rem_euclid(q as i64) as u64, q) != 1 {
                continue;
            }
            let p = GaussParams::new(s, t, q)?;
            let closed = gauss_closed(p)?;
            let diff = (closed - gauss_bruteforce(p)).norm();
            println!("{s:>4} {t:>4} {q:>4}  {:>13.8} {:>+13.8}i  {diff:9.2e}", closed.re, closed.im);
        }
    }
    Ok(())
}
