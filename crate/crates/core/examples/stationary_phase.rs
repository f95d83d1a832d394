//! Stationary phase for int e^{i lambda |x|^2} phi(x) dx: expansion terms and
//! the decay of the truncation error.

use expsum_lab::oscillatory::{expansion_terms, gaussian, verify_expansion, OscillatorySettings};

fn main() -> expsum_lab::Result<()> {
    let settings = OscillatorySettings::default();
    let quartic = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        r2 * r2 * (-r2).exp()
    };
    let e = expansion_terms(&gaussian, 2, 3)?;
    for (j, (a, d)) in e.terms.iter().zip(&e.laplacians).enumerate() {
        println!("n = 2  a_{j} = {a:.6}  Delta^{j} phi(0) = {d:.6}");
    }

    let grid = [25.0, 50.0, 100.0, 200.0];
    for n in 1..=3 {
        for order in 0..=1 {
            let check = verify_expansion(&gaussian, n, order, &grid, &settings)?;
            println!("gaussian n = {n} N = {order}: slope {:+.3}", check.slope.unwrap_or(f64::NAN));
        }
    }
    let check = verify_expansion(&quartic, 1, 0, &grid, &settings)?;
    check.write_csv(std::io::stdout().lock())?;
    Ok(())
}
