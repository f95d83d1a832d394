//! The weighted count `Sigma(w)` of points of `F(x) = N` near a direction,
//! and its comparison with the main term `eps^3 N sigma_inf S / 2`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{sigma_infinity, singular_series, weight_w, QuadratureSettings, SingularSeriesResult};
use crate::error::{Error, Result};
use crate::modarith::{perfect_square_root, valuation};
use crate::sphere::LatticePoint4;
use crate::summation::KahanSum;

/// Largest number of `(x1, x2, x3)` candidates scanned by [`sigma_w`].
pub const MAX_BOX_CANDIDATES: f64 = 4e9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaWQuery {
    /// `N = 4 r^2`.
    pub r: u64,
    pub xi: [f64; 4],
    pub eps: f64,
    /// `v_2(r)`; the asymptotics assume it is bounded.
    pub two_adic_note: u32,
}

impl SigmaWQuery {
    pub fn new(r: u64, xi: [f64; 4], eps: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("r must be positive"));
        }
        if r > 1 << 24 {
            return Err(Error::ResourceLimit(format!("r = {r} is too large")));
        }
        let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("xi must be a unit vector, |xi| = {norm}")));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1], got {eps}")));
        }
        let q = Self {
            r,
            xi,
            eps,
            two_adic_note: valuation(2, r),
        };
        if eps * q.sqrt_n() < 1.0 {
            return Err(Error::invalid(format!("need eps sqrt(N) >= 1, got {}", eps * q.sqrt_n())));
        }
        Ok(q)
    }

    /// `eps = N^(-exponent)`.
    pub fn with_eps_exponent(r: u64, xi: [f64; 4], exponent: f64) -> Result<Self> {
        let big_n = 4.0 * (r as f64) * (r as f64);
        Self::new(r, xi, big_n.powf(-exponent))
    }

    pub fn big_n(&self) -> u64 {
        4 * self.r * self.r
    }

    pub fn sqrt_n(&self) -> f64 {
        2.0 * self.r as f64
    }
}

/// `w(x / sqrt(N))` at a lattice point.
pub fn weight_at(x: &LatticePoint4, xi: &[f64; 4], eps: f64, sqrt_n: f64) -> f64 {
    weight_w(&x.map(|v| v as f64 / sqrt_n), xi, eps)
}

/// `[ceil(c - h), floor(c + h)]`.
fn int_range(center: f64, half: f64) -> (i64, i64) {
    ((center - half).ceil() as i64, (center + half).floor() as i64)
}

/// `Sigma(w) = sum_{F(x) = N} w(x / sqrt N)`.
///
/// Only the box `|x - sqrt(N) xi|_inf <= eps sqrt(N)` is scanned; `x4` comes
/// from a perfect-square test. Non-zero terms are added in lexicographic
/// order of `x`, so the result equals the same sum taken over the whole
/// sphere in that order.
pub fn sigma_w(q: &SigmaWQuery) -> Result<f64> {
    let big_n = q.big_n() as i64;
    let s = q.sqrt_n();
    let half = q.eps * s;
    let ranges: [(i64, i64); 4] = std::array::from_fn(|i| int_range(s * q.xi[i], half));
    let volume: f64 = ranges[..3].iter().map(|(a, b)| (b - a + 1).max(0) as f64).product();
    if volume > MAX_BOX_CANDIDATES {
        return Err(Error::ResourceLimit(format!("{volume} candidate triples exceed the box limit")));
    }
    let (lo4, hi4) = ranges[3];
    let slices: Vec<Vec<f64>> = (ranges[0].0..=ranges[0].1)
        .into_par_iter()
        .map(|x1| {
            let mut out = Vec::new();
            for x2 in ranges[1].0..=ranges[1].1 {
                let r2 = big_n - x1 * x1 - x2 * x2;
                if r2 < 0 {
                    continue;
                }
                for x3 in ranges[2].0..=ranges[2].1 {
                    let r3 = r2 - x3 * x3;
                    if r3 < 0 {
                        continue;
                    }
                    let Some(root) = perfect_square_root(r3 as u64) else {
                        continue;
                    };
                    let root = root as i64;
                    let candidates = if root == 0 { vec![0] } else { vec![-root, root] };
                    for x4 in candidates {
                        if x4 < lo4 || x4 > hi4 {
                            continue;
                        }
                        let w = weight_at(&[x1, x2, x3, x4], &q.xi, q.eps, s);
                        if w != 0.0 {
                            out.push(w);
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(slices.into_iter().flatten().collect::<KahanSum>().value())
}

/// `eps^3 N sigma_inf S / 2`.
pub fn main_term(q: &SigmaWQuery, densities: &SingularSeriesResult, s_inf: f64) -> f64 {
    q.eps.powi(3) * q.big_n() as f64 * s_inf * densities.value / 2.0
}

/// `eps^4 N + eps^(5/2) N^(3/4) + eps N^(1/2)`.
pub fn error_budget(eps: f64, big_n: f64) -> f64 {
    eps.powi(4) * big_n + eps.powf(2.5) * big_n.powf(0.75) + eps * big_n.sqrt()
}

/// `eps + eps^(-1/2) N^(-1/4) + eps^(-2) N^(-1/2)`.
pub fn budget_ratio_formula(eps: f64, big_n: f64) -> f64 {
    eps + eps.powf(-0.5) * big_n.powf(-0.25) + eps.powi(-2) * big_n.powf(-0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermComparison {
    pub r: u64,
    pub n: u64,
    pub eps: f64,
    pub sigma_w: f64,
    pub main_term: f64,
    pub ratio: f64,
    pub error_budget: f64,
    /// `error_budget / (eps^3 N)`.
    pub budget_ratio: f64,
    pub sigma_infinity: f64,
    pub singular_series: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareSettings {
    pub prime_cutoff: u64,
    pub quadrature: QuadratureSettings,
}

impl Default for CompareSettings {
    fn default() -> Self {
        Self {
            prime_cutoff: 1000,
            quadrature: QuadratureSettings::default(),
        }
    }
}

pub fn compare(q: &SigmaWQuery, settings: &CompareSettings) -> Result<MainTermComparison> {
    let s_inf = sigma_infinity(q.eps, &settings.quadrature)?;
    let series = singular_series(q.big_n(), settings.prime_cutoff, 1.0)?;
    compare_with(q, &series, s_inf)
}

/// [`compare`] with precomputed densities for the same `N` and `eps`.
pub fn compare_with(q: &SigmaWQuery, series: &SingularSeriesResult, s_inf: f64) -> Result<MainTermComparison> {
    let sw = sigma_w(q)?;
    let main = main_term(q, series, s_inf);
    let big_n = q.big_n() as f64;
    let budget = error_budget(q.eps, big_n);
    Ok(MainTermComparison {
        r: q.r,
        n: q.big_n(),
        eps: q.eps,
        sigma_w: sw,
        main_term: main,
        ratio: sw / main,
        error_budget: budget,
        budget_ratio: budget / (q.eps.powi(3) * big_n),
        sigma_infinity: s_inf,
        singular_series: series.value,
    })
}

/// CSV with header `r,N,eps,sigma_w,main_term,ratio,budget_ratio`.
pub fn write_comparisons<W: Write>(rows: &[MainTermComparison], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["r", "N", "eps", "sigma_w", "main_term", "ratio", "budget_ratio"])?;
    for c in rows {
        w.write_record([
            c.r.to_string(),
            c.n.to_string(),
            c.eps.to_string(),
            c.sigma_w.to_string(),
            c.main_term.to_string(),
            c.ratio.to_string(),
            c.budget_ratio.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Median of a non-empty slice of finite values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::w0_eval;
    use crate::sphere::{cap_gap, enumerate_sphere, normalize, sample_directions};

    fn oracle(q: &SigmaWQuery) -> f64 {
        let s = q.sqrt_n();
        let mut acc = KahanSum::new();
        for p in enumerate_sphere(q.big_n()).unwrap().points {
            let w = weight_w(&p.map(|v| v as f64 / s), &q.xi, q.eps);
            if w != 0.0 {
                acc.add(w);
            }
        }
        acc.value()
    }

    #[test]
    fn query_validation() {
        let xi = [1.0, 0.0, 0.0, 0.0];
        assert!(SigmaWQuery::new(0, xi, 0.5).is_err());
        assert!(SigmaWQuery::new(5, [1.0, 1.0, 0.0, 0.0], 0.5).is_err());
        assert!(SigmaWQuery::new(5, xi, 0.05).is_err());
        assert!(SigmaWQuery::new(5, xi, 0.1).is_ok());
        assert_eq!(SigmaWQuery::new(12, xi, 0.5).unwrap().two_adic_note, 2);
    }

    #[test]
    fn sigma_w_examples() {
        let xi = normalize([3.0, 4.0, 0.0, 0.0]).unwrap();
        let q = SigmaWQuery::new(5, xi, 0.3).unwrap();
        assert_eq!(sigma_w(&q).unwrap(), oracle(&q));
        // x0 = (6, 8, 0, 0) lies on the N = 100 sphere in direction xi
        assert!(sigma_w(&q).unwrap() >= w0_eval(0.0).powi(2));
        let q = SigmaWQuery::new(5, xi, 0.1).unwrap();
        assert!(sigma_w(&q).unwrap() >= w0_eval(0.0).powi(2));
        // an empty cap
        let xi = sample_directions(9, 100)
            .into_iter()
            .find(|xi| cap_gap(*xi, 100).unwrap().eps_min > 0.1)
            .unwrap();
        let q = SigmaWQuery::new(5, xi, 0.1).unwrap();
        assert_eq!(sigma_w(&q).unwrap(), 0.0);
    }

    #[test]
    fn sigma_w_matches_full_sphere() {
        for r in [5u64, 12, 25, 50] {
            for (i, xi) in sample_directions(r, 6).into_iter().enumerate() {
                let eps = [0.2, 0.35, 0.5][i % 3];
                let q = SigmaWQuery::new(r, xi, eps).unwrap();
                assert_eq!(sigma_w(&q).unwrap(), oracle(&q), "r={r} eps={eps}");
            }
        }
    }

    #[test]
    fn sigma_w_monotone_in_eps() {
        for xi in sample_directions(77, 4) {
            let mut prev = 0.0;
            for eps in [0.1, 0.15, 0.2, 0.3, 0.4, 0.6, 0.8] {
                let v = sigma_w(&SigmaWQuery::new(30, xi, eps).unwrap()).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn sigma_w_signed_permutation_invariance() {
        let xi = sample_directions(5, 1)[0];
        let base = sigma_w(&SigmaWQuery::new(40, xi, 0.3).unwrap()).unwrap();
        let moved = [-xi[2], xi[0], xi[3], -xi[1]];
        let v = sigma_w(&SigmaWQuery::new(40, moved, 0.3).unwrap()).unwrap();
        assert!((v - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn main_term_scaling() {
        let xi = [1.0, 0.0, 0.0, 0.0];
        let series = singular_series(100, 100, 1.0).unwrap();
        let q = SigmaWQuery::new(5, xi, 0.4).unwrap();
        let base = main_term(&q, &series, 1.3);
        let doubled = SingularSeriesResult {
            value: 2.0 * series.value,
            ..series.clone()
        };
        assert!((main_term(&q, &doubled, 1.3) - 2.0 * base).abs() <= 1e-12 * base);
        let q2 = SigmaWQuery::new(5, xi, 0.2).unwrap();
        assert!((main_term(&q2, &series, 1.3) * 8.0 - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn compare_r51() {
        let xi = sample_directions(1, 1)[0];
        let q = SigmaWQuery::with_eps_exponent(51, xi, 0.125).unwrap();
        let c = compare(&q, &CompareSettings::default()).unwrap();
        assert!(c.main_term > 0.0 && c.main_term.is_finite());
        let expected = budget_ratio_formula(q.eps, q.big_n() as f64);
        assert!((c.budget_ratio - expected).abs() <= 1e-13 * expected);
        let mut buf = Vec::new();
        write_comparisons(&[c], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,N,eps,sigma_w,main_term,ratio,budget_ratio\n51,10404,"));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }
}
