//! Quadrature for `int_{R^n} e^{i lambda |x|^2} phi(x) dx` and the
//! stationary-phase expansion at the origin.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linnik::least_squares_slope;
use crate::summation::{ComplexKahan, KahanSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorySettings {
    /// Absolute tolerance for the whole integral.
    pub quad_tol: f64,
    /// `phi` is treated as zero for `|x| > truncation`.
    pub truncation: f64,
    pub max_depth: u32,
}

impl Default for OscillatorySettings {
    fn default() -> Self {
        Self {
            quad_tol: 1e-12,
            truncation: 8.0,
            max_depth: 40,
        }
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights at `GK_NODES[1], [3], [5], [7]`.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7-15 panel: (Kronrod value, |Kronrod - Gauss|).
fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for i in 0..8 {
        let v = if i == 7 {
            f(c)
        } else {
            f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i])
        };
        kron += v * GK_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += v * GAUSS_WEIGHTS[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

fn adaptive(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32, acc: &mut ComplexKahan) -> Result<()> {
    let (value, err) = gk15(f, a, b);
    if err <= tol || (err <= 1e-15 * value.norm()) {
        acc.add(value);
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::NonConvergence(format!("panel [{a}, {b}] did not reach {tol:e}")));
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1, acc)?;
    adaptive(f, m, b, 0.5 * tol, depth - 1, acc)
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        nodes[m - 1 - i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

const SPHERE_LEVELS: usize = 8;

fn legendre_rule(level: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static RULES: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    &RULES.get_or_init(|| (0..SPHERE_LEVELS).map(|l| gauss_legendre(4 << l)).collect())[level]
}

/// `int_{S^{n-1}} phi(rho w) dw` at one angular resolution level, with the
/// sum of absolute contributions.
fn sphere_rule<F: Fn(&[f64]) -> f64>(phi: &F, n: usize, rho: f64, level: usize) -> (f64, f64) {
    let mut acc = KahanSum::new();
    let mut scale = 0.0;
    match n {
        1 => {
            let (a, b) = (phi(&[rho]), phi(&[-rho]));
            acc.add(a);
            acc.add(b);
            scale = a.abs() + b.abs();
        }
        2 => {
            let m = 8usize << level;
            let w = 2.0 * PI / m as f64;
            for k in 0..m {
                let t = w * k as f64;
                let v = w * phi(&[rho * t.cos(), rho * t.sin()]);
                acc.add(v);
                scale += v.abs();
            }
        }
        _ => {
            let (us, ws) = legendre_rule(level);
            let m = 2 * us.len();
            let dw = 2.0 * PI / m as f64;
            for (u, wu) in us.iter().zip(ws) {
                let s = (1.0 - u * u).max(0.0).sqrt();
                for k in 0..m {
                    let t = dw * k as f64;
                    let v = wu * dw * phi(&[rho * s * t.cos(), rho * s * t.sin(), rho * u]);
                    acc.add(v);
                    scale += v.abs();
                }
            }
        }
    }
    (acc.value(), scale)
}

/// Spherical average, refined by doubling until consecutive levels agree.
fn sphere_integral<F: Fn(&[f64]) -> f64>(phi: &F, n: usize, rho: f64) -> Result<f64> {
    let (mut prev, _) = sphere_rule(phi, n, rho, 0);
    if n == 1 {
        return Ok(prev);
    }
    for level in 1..SPHERE_LEVELS {
        let (cur, scale) = sphere_rule(phi, n, rho, level);
        if (cur - prev).abs() <= 1e-13 * scale + 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!("angular rule did not settle at radius {rho}")))
}

/// Cap on `lambda L^2 / pi`, the number of radial panels.
pub const MAX_RADIAL_PANELS: f64 = 1e6;

/// `int_{R^n} e^{i lambda |x|^2} phi(x) dx` for `n` in 1..=3.
///
/// In polar coordinates this is `int_0^L e^{i lambda rho^2} rho^{n-1} Phi(rho)`
/// with `Phi` the integral of `phi` over the sphere of radius `rho`. The
/// radial integral is split where the phase crosses multiples of `pi`, so
/// panels shrink like `pi / (lambda rho)`, and each panel is integrated by
/// adaptive Gauss-Kronrod 7-15.
pub fn oscillatory_integral<F>(phi: &F, n: usize, lambda: f64, settings: &OscillatorySettings) -> Result<Complex64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(1..=3).contains(&n) {
        return Err(Error::invalid(format!("dimension must be 1, 2 or 3, got {n}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    if !(settings.quad_tol > 0.0) || !(settings.truncation > 0.0) {
        return Err(Error::invalid("bad quadrature settings"));
    }
    let big_l = settings.truncation;
    let panels = lambda * big_l * big_l / PI;
    if panels > MAX_RADIAL_PANELS {
        return Err(Error::ResourceLimit(format!("{panels:.3e} radial panels exceed {MAX_RADIAL_PANELS:e}")));
    }
    let failure = std::cell::RefCell::new(None);
    let integrand = |rho: f64| -> Complex64 {
        match sphere_integral(phi, n, rho) {
            Ok(v) => Complex64::from_polar(1.0, lambda * rho * rho) * (v * rho.powi(n as i32 - 1)),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let mut breaks = vec![0.0];
    let mut k = 1.0;
    loop {
        let rho = (k * PI / lambda).sqrt();
        if rho >= big_l {
            break;
        }
        breaks.push(rho);
        k += 1.0;
    }
    breaks.push(big_l);
    let mut acc = ComplexKahan::new();
    for w in breaks.windows(2) {
        let tol = settings.quad_tol * (w[1] - w[0]) / big_l;
        adaptive(&integrand, w[0], w[1], tol, settings.max_depth, &mut acc)?;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(acc.value())
}

/// Step and number of Richardson levels used for `Delta^j phi(0)`.
///
/// Rounding error of the composed stencil grows like `h^(-2j)`, so the step
/// grows with `j`.
pub const LAPLACIAN_SCHEDULE: [(f64, u32); 5] = [(0.0, 0), (1e-2, 1), (1e-2, 1), (0.3, 3), (0.3, 3)];

/// Composed central-difference Laplacian `Delta_h^j phi(x)`.
fn discrete_laplacian_power<F: Fn(&[f64]) -> f64>(phi: &F, x: &mut Vec<f64>, j: u32, h: f64) -> f64 {
    if j == 0 {
        return phi(x);
    }
    let centre = discrete_laplacian_power(phi, x, j - 1, h);
    let mut acc = KahanSum::new();
    for i in 0..x.len() {
        let xi = x[i];
        x[i] = xi + h;
        acc.add(discrete_laplacian_power(phi, x, j - 1, h));
        x[i] = xi - h;
        acc.add(discrete_laplacian_power(phi, x, j - 1, h));
        x[i] = xi;
        acc.add(-2.0 * centre);
    }
    acc.value() / (h * h)
}

/// `Delta^j phi(0)` with Richardson extrapolation in `h^2`.
pub fn laplacian_power_at_origin<F: Fn(&[f64]) -> f64>(phi: &F, n: usize, j: u32) -> f64 {
    if j == 0 {
        return phi(&vec![0.0; n]);
    }
    let (h, levels) = LAPLACIAN_SCHEDULE[(j as usize).min(4)];
    let mut table: Vec<f64> = (0..=levels)
        .map(|l| discrete_laplacian_power(phi, &mut vec![0.0; n], j, h / f64::from(1u32 << l)))
        .collect();
    for l in 1..=levels {
        let f = 4f64.powi(l as i32);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    table[0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseExpansion {
    pub n: usize,
    /// `a_0, ..., a_N`.
    pub terms: Vec<Complex64>,
    pub laplacians: Vec<f64>,
}

impl PhaseExpansion {
    /// `lambda^(-n/2) sum_j a_j lambda^(-j)`.
    pub fn evaluate(&self, lambda: f64) -> Complex64 {
        let mut acc = ComplexKahan::new();
        for (j, a) in self.terms.iter().enumerate() {
            acc.add(a * lambda.powi(-(j as i32)));
        }
        acc.value() * lambda.powf(-(self.n as f64) / 2.0)
    }

    /// `n/2 + N + 1`.
    pub fn remainder_bound_exponent(&self) -> f64 {
        self.n as f64 / 2.0 + self.terms.len() as f64
    }
}

/// `a_j = (i pi)^(n/2) (i/4)^j / j! Delta^j phi(0)` for `j = 0..=order`.
pub fn expansion_coefficient(n: usize, j: u32, laplacian: f64) -> Complex64 {
    let lead = Complex64::from_polar(PI.powf(n as f64 / 2.0), PI * n as f64 / 4.0);
    let factorial: f64 = (1..=j).map(f64::from).product();
    lead * Complex64::new(0.0, 0.25).powu(j) * (laplacian / factorial)
}

pub fn expansion_terms<F: Fn(&[f64]) -> f64>(phi: &F, n: usize, order: u32) -> Result<PhaseExpansion> {
    if !(1..=3).contains(&n) {
        return Err(Error::invalid(format!("dimension must be 1, 2 or 3, got {n}")));
    }
    if order > 4 {
        return Err(Error::invalid("expansion order is limited to 4"));
    }
    let laplacians: Vec<f64> = (0..=order).map(|j| laplacian_power_at_origin(phi, n, j)).collect();
    let terms = laplacians
        .iter()
        .enumerate()
        .map(|(j, &d)| expansion_coefficient(n, j as u32, d))
        .collect();
    Ok(PhaseExpansion { n, terms, laplacians })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRow {
    pub lambda: f64,
    pub abs_error: f64,
    pub n: usize,
    pub n_terms: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    pub rows: Vec<ExpansionRow>,
    /// Log-log slope of `abs_error` against `lambda`; `None` when fewer than
    /// two errors are positive.
    pub slope: Option<f64>,
}

impl ExpansionCheck {
    /// CSV with header `lambda,abs_error,n,N_terms`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["lambda", "abs_error", "n", "N_terms"])?;
        for r in &self.rows {
            w.write_record([r.lambda.to_string(), r.abs_error.to_string(), r.n.to_string(), r.n_terms.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Remainder `|integral - lambda^(-n/2) sum_{j<=N} a_j lambda^(-j)|` on a grid.
pub fn verify_expansion<F>(
    phi: &F,
    n: usize,
    order: u32,
    lambda_grid: &[f64],
    settings: &OscillatorySettings,
) -> Result<ExpansionCheck>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if lambda_grid.len() < 3 {
        return Err(Error::invalid("need at least three lambda values"));
    }
    if lambda_grid[0] < 10.0 || lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("lambda grid must be increasing and start at 10 or more"));
    }
    let expansion = expansion_terms(phi, n, order)?;
    let rows: Vec<ExpansionRow> = lambda_grid
        .par_iter()
        .map(|&lambda| {
            let value = oscillatory_integral(phi, n, lambda, settings)?;
            Ok(ExpansionRow {
                lambda,
                abs_error: (value - expansion.evaluate(lambda)).norm(),
                n,
                n_terms: order,
            })
        })
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| (r.lambda.ln(), r.abs_error.ln()))
        .unzip();
    let slope = (xs.len() >= 2).then(|| least_squares_slope(&xs, &ys));
    Ok(ExpansionCheck { rows, slope })
}

/// `e^{-|x|^2}`.
pub fn gaussian(x: &[f64]) -> f64 {
    (-x.iter().map(|v| v * v).sum::<f64>()).exp()
}

/// `Delta^j e^{-|x|^2}` at 0 in dimension `n`: `(-4)^j Gamma(n/2 + j) / Gamma(n/2)`.
pub fn gaussian_laplacian_power(n: usize, j: u32) -> f64 {
    let half = n as f64 / 2.0;
    (0..j).map(|k| -4.0 * (half + k as f64)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_gaussian_1d(lambda: f64) -> Complex64 {
        (Complex64::new(PI, 0.0) / Complex64::new(1.0, -lambda)).sqrt()
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral_examples() {
        let s = OscillatorySettings::default();
        for lambda in [1.0, 10.0, 25.0, 100.0] {
            let v = oscillatory_integral(&gaussian, 1, lambda, &s).unwrap();
            assert!((v - exact_gaussian_1d(lambda)).norm() < 1e-11, "lambda {lambda}");
        }
        for (n, lambda) in [(2usize, 12.0), (3, 7.0)] {
            let v = oscillatory_integral(&gaussian, n, lambda, &s).unwrap();
            let exact = exact_gaussian_1d(lambda).powi(n as i32);
            assert!((v - exact).norm() < 1e-10, "n={n}: {v} vs {exact}");
        }
        let zero = |_: &[f64]| 0.0;
        assert_eq!(oscillatory_integral(&zero, 2, 30.0, &s).unwrap(), Complex64::new(0.0, 0.0));
        assert!(oscillatory_integral(&gaussian, 4, 30.0, &s).is_err());
        assert!(oscillatory_integral(&gaussian, 1, 0.0, &s).is_err());
    }

    #[test]
    fn non_radial_integrand() {
        // e^{-x^2 - 2y^2} factorizes into one-dimensional Gaussians
        let phi = |x: &[f64]| (-x[0] * x[0] - 2.0 * x[1] * x[1]).exp();
        let lambda = 9.0;
        let exact = exact_gaussian_1d(lambda) * (Complex64::new(PI, 0.0) / Complex64::new(2.0, -lambda)).sqrt();
        let v = oscillatory_integral(&phi, 2, lambda, &OscillatorySettings::default()).unwrap();
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn vanishing_low_terms_decay_faster() {
        let phi = |x: &[f64]| x[0].powi(4) * (-x[0] * x[0]).exp();
        let s = OscillatorySettings::default();
        let lambdas: [f64; 4] = [25.0, 50.0, 100.0, 200.0];
        let (xs, ys): (Vec<f64>, Vec<f64>) = lambdas
            .iter()
            .map(|&l| (l.ln(), oscillatory_integral(&phi, 1, l, &s).unwrap().norm().ln()))
            .unzip();
        assert!((least_squares_slope(&xs, &ys) + 2.5).abs() < 0.05);
    }

    #[test]
    fn coefficient_examples() {
        let e = expansion_terms(&gaussian, 1, 1).unwrap();
        let lead = Complex64::new(0.0, PI).sqrt();
        assert!((e.terms[0] - lead).norm() < 1e-14);
        assert!((e.laplacians[1] + 2.0).abs() < 1e-8);
        assert!((e.terms[1] - lead * Complex64::new(0.0, 0.25) * -2.0).norm() < 1e-8);
        let flat = |x: &[f64]| if x.iter().all(|v| v.abs() < 5.0) { 0.0 } else { 1.0 };
        let e = expansion_terms(&flat, 3, 4).unwrap();
        assert!(e.terms.iter().all(|a| a.norm() == 0.0));
        assert!(expansion_terms(&gaussian, 1, 5).is_err());
    }

    #[test]
    fn laplacians_match_symbolic_values() {
        for n in 1..=3usize {
            for j in 0..=4u32 {
                let fd = laplacian_power_at_origin(&gaussian, n, j);
                let exact = gaussian_laplacian_power(n, j);
                assert!((fd - exact).abs() <= 1e-5 * exact.abs(), "n={n} j={j}: {fd} vs {exact}");
            }
        }
        assert_eq!(gaussian_laplacian_power(1, 2), 12.0);
    }

    #[test]
    fn expansion_matches_exact_series() {
        // sqrt(pi / (1 - i lambda)) = sqrt(i pi / lambda) (1 + i / lambda)^(-1/2)
        let e = expansion_terms(&gaussian, 1, 2).unwrap();
        let lead = Complex64::new(0.0, PI).sqrt();
        assert!((e.terms[1] / lead - Complex64::new(0.0, -0.5)).norm() < 1e-8);
        assert!((e.terms[2] / lead - Complex64::new(-0.375, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn decay_slopes() {
        let s = OscillatorySettings::default();
        let grid = [25.0, 50.0, 100.0];
        let s0 = verify_expansion(&gaussian, 1, 0, &grid, &s).unwrap().slope.unwrap();
        let s1 = verify_expansion(&gaussian, 1, 1, &grid, &s).unwrap().slope.unwrap();
        assert!(s0 <= -1.5 + 0.2, "slope {s0}");
        assert!(s1 <= -2.5 + 0.25, "slope {s1}");
        assert!((s1 - s0 + 1.0).abs() < 0.1);
        let zero = |_: &[f64]| 0.0;
        let check = verify_expansion(&zero, 1, 1, &grid, &s).unwrap();
        assert!(check.rows.iter().all(|r| r.abs_error == 0.0));
        assert!(check.slope.is_none());
        assert!(verify_expansion(&gaussian, 1, 0, &[25.0, 50.0], &s).is_err());
        assert!(verify_expansion(&gaussian, 1, 0, &[5.0, 50.0, 100.0], &s).is_err());
    }

    #[test]
    fn decay_slopes_higher_dimensions() {
        let s = OscillatorySettings::default();
        for (n, order, grid) in [
            (1usize, 2u32, [20.0, 40.0, 80.0]),
            (2, 0, [20.0, 40.0, 80.0]),
            (2, 1, [20.0, 40.0, 80.0]),
            (3, 0, [15.0, 30.0, 60.0]),
            (3, 1, [15.0, 30.0, 60.0]),
        ] {
            let slope = verify_expansion(&gaussian, n, order, &grid, &s).unwrap().slope.unwrap();
            let bound = -(n as f64 / 2.0 + order as f64 + 1.0) + 0.25;
            assert!(slope <= bound, "n={n} N={order}: slope {slope}");
        }
    }

    #[test]
    fn csv_header() {
        let check = verify_expansion(&gaussian, 1, 0, &[10.0, 20.0, 40.0], &OscillatorySettings::default()).unwrap();
        let mut buf = Vec::new();
        check.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("lambda,abs_error,n,N_terms\n"));
    }
}
