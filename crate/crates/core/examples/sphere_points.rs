//! Integer points on x1^2 + x2^2 + x3^2 + x4^2 = n, counted against Jacobi's
//! formula and written as CSV.

use expsum_lab::sphere::{enumerate_sphere, jacobi_r4};

fn main() -> expsum_lab::Result<()> {
    for n in [1u64, 2, 7, 25, 100, 1001, 65536, 99_991] {
        let set = enumerate_sphere(n)?;
        println!("n = {n:6}  points {:8}  r4(n) {:8}", set.len(), jacobi_r4(n));
    }
    let set = enumerate_sphere(9)?;
    set.write_csv(std::io::stdout().lock())?;
    Ok(())
}
