//! The four-variable sum S_q(c) for F = x1^2 + ... + x4^2: reduced evaluation
//! against the q^4 direct sum.

use expsum_lab::expsums::{sq_bruteforce, sq_reduced, SqParams};

fn main() -> expsum_lab::Result<()> {
    let big_n = 4 * 13 * 13;
    for q in [1u64, 2, 3, 4, 8, 9, 12, 15, 25] {
        for c in [[0i64, 0, 0, 0], [1, 0, 0, 0], [1, 2, -3, 5], [2, 2, 2, 2]] {
            let p = SqParams::new(q, c, big_n)?;
            let fast = sq_reduced(p);
            let slow = sq_bruteforce(p)?;
            println!(
                "q = {q:2}  c = {c:?}  S = {:>14.6} {:>+14.6}i  |diff| = {:.1e}",
                fast.re,
                fast.im,
                (fast - slow).norm()
            );
        }
    }
    Ok(())
}
