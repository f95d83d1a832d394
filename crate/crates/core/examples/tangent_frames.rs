//! Orthonormal frames at a direction and the lattice truncation set around it.

use expsum_lab::sphere::{normalize, tangent_frame, TruncationSet};

fn main() -> expsum_lab::Result<()> {
    let xi = normalize([0.3, -0.4, 0.5, 0.7])?;
    let frame = tangent_frame(xi)?;
    for row in &frame.e {
        println!("{row:+.6?}");
    }
    println!("residual {:.2e}", frame.orthonormality_residual());
    let v = [1.0, 2.0, 3.0, 4.0];
    let coords = frame.coordinates(&v);
    println!("coordinates {coords:.6?} -> {:.6?}", frame.combine(&coords));

    for big_n in [400u64, 2500, 10_000] {
        let set = TruncationSet::new(xi, 0.3, big_n, 0.01)?;
        println!("N = {big_n:6}  |C| = {:6}  scale {:.1}", set.count(), set.size_scale());
    }
    Ok(())
}
