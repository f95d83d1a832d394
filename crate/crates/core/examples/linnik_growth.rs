//! Partial sums of S(m, n; c) / c against sqrt(X), with a growth exponent fit.

use expsum_lab::linnik::{growth_exponent, linnik_trace, ResidueClassRange, TwistedLinnikQuery};

fn main() -> expsum_lab::Result<()> {
    let x = 5_000;
    for (k, a, alpha) in [(1u64, 0u64, 0.0), (1, 0, 0.5), (4, 1, 0.0), (3, 2, 0.9)] {
        let q = TwistedLinnikQuery::new(1, 1, ResidueClassRange::new(k, a, x)?, alpha, 1.0)?;
        let trace = linnik_trace(&q, 40)?;
        let last = trace.last().expect("non-empty trace");
        let fit = growth_exponent(&trace, 0.5)?;
        println!(
            "c = {a} mod {k}, alpha = {alpha}: |L({})| = {:.4}, envelope {:.1}, exponent {:+.3} ({} points)",
            last.x,
            last.value.norm(),
            last.weil_envelope,
            fit.slope,
            fit.used
        );
    }
    Ok(())
}
