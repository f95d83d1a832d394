//! Kloosterman sums, the Weil bound and the multiplicative fast path.
//!
//! cargo run --release --example kloosterman_sums -- 1 1 105

use expsum_lab::expsums::{kloosterman, kloosterman_fast, weil_bound, KloostermanParams, KloostermanPlan};
use expsum_lab::modarith::factorize;

fn main() -> expsum_lab::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, n, c) = match args[..] {
        [m, n, c] => (m, n, c as u64),
        _ => (1, 1, 105),
    };
    let p = KloostermanParams::new(m, n, c)?;
    let f = factorize(c);
    println!("S({m}, {n}; {c}) = {:.12}", kloosterman(p));
    println!("via {f:?}: {:.12}", kloosterman_fast(p, &f)?);
    println!("Weil bound {:.6}", weil_bound(m, n, c));

    // one modulus, a whole row of n
    let plan = KloostermanPlan::new(c)?;
    let row = plan.row(m, 1, 12);
    for (k, s) in row.iter().enumerate() {
        let n = k as i64 + 1;
        println!("  n = {n:2}  S = {:>10.5}  |S|/Weil = {:.4}", s.re, s.norm() / weil_bound(m, n, c));
    }
    Ok(())
}
