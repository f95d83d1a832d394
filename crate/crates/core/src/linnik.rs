//! Twisted Linnik partial sums
//! `L(X) = sum_{c ≡ a mod k, c <= X} S(m, n; c) / c * e(2 sqrt(mn) alpha / c)`
//! and empirical growth exponents of `|L(X)|`.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::{kloosterman, weil_bound, ComplexValue, KloostermanParams};
use crate::modarith::MAX_MODULUS;
use crate::summation::{ComplexKahan, KahanSum};

/// Number of consecutive moduli handled by one shard. Fixed so that results do
/// not depend on the worker count.
const SHARD_LEN: u64 = 256;

/// Summation range `c ≡ a mod k`, `1 <= c <= limit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassRange {
    pub k: u64,
    pub a: u64,
    pub limit: u64,
}

impl ResidueClassRange {
    pub fn new(k: u64, a: u64, limit: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("residue-class modulus k must be at least 1"));
        }
        if a >= k {
            return Err(Error::invalid(format!("residue class a = {a} must satisfy a < k = {k}")));
        }
        if limit == 0 {
            return Err(Error::invalid("summation limit X must be at least 1"));
        }
        if limit > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { modulus: limit });
        }
        Ok(Self { k, a, limit })
    }

    /// Smallest admissible `c >= from`.
    fn first_at_least(&self, from: u64) -> u64 {
        let r = from % self.k;
        let shift = (self.a + self.k - r) % self.k;
        from + shift
    }

    pub fn contains(&self, c: u64) -> bool {
        c >= 1 && c <= self.limit && c % self.k == self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistedLinnikQuery {
    pub m: i64,
    pub n: i64,
    pub range: ResidueClassRange,
    pub alpha: f64,
    pub bound_b: f64,
}

impl TwistedLinnikQuery {
    pub fn new(m: i64, n: i64, range: ResidueClassRange, alpha: f64, bound_b: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("m and n must be non-zero"));
        }
        if (m as i128) * (n as i128) <= 0 {
            return Err(Error::invalid(
                "m n must be positive: the twist e(2 sqrt(mn) alpha / c) needs a real square root",
            ));
        }
        if !(bound_b >= 1.0) || !bound_b.is_finite() {
            return Err(Error::invalid(format!("B must be a finite real >= 1, got {bound_b}")));
        }
        if !alpha.is_finite() || alpha.abs() > bound_b {
            return Err(Error::invalid(format!("alpha = {alpha} must satisfy |alpha| <= B = {bound_b}")));
        }
        Ok(Self {
            m,
            n,
            range,
            alpha,
            bound_b,
        })
    }

    /// `sqrt(|mn|) > X`: the Selberg range.
    pub fn in_selberg_range(&self) -> bool {
        ((self.m as f64) * (self.n as f64)).abs().sqrt() > self.range.limit as f64
    }

    fn twist_frequency(&self) -> f64 {
        2.0 * ((self.m as f64) * (self.n as f64)).sqrt() * self.alpha
    }
}

/// `S(m,n;c)/c * e(freq / c)`.
#[inline]
fn term(q: &TwistedLinnikQuery, freq: f64, c: u64) -> Complex64 {
    let s = kloosterman(KloostermanParams { m: q.m, n: q.n, c }) / c as f64;
    if freq == 0.0 {
        return s;
    }
    let (sin, cos) = (TAU * freq / c as f64).sin_cos();
    s * Complex64::new(cos, sin)
}

/// Admissible moduli in `[lo, hi]`, ascending.
fn moduli(range: &ResidueClassRange, lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    let start = range.first_at_least(lo.max(1));
    (start..=hi).step_by(range.k as usize)
}

/// Shard boundaries `[lo, hi]` over `1..=limit`.
fn shards(limit: u64) -> Vec<(u64, u64)> {
    (0..limit.div_ceil(SHARD_LEN))
        .map(|i| (i * SHARD_LEN + 1, ((i + 1) * SHARD_LEN).min(limit)))
        .collect()
}

/// The partial sum `L(X)`.
///
/// Shards of consecutive moduli are summed independently and combined in
/// ascending order, so the value is independent of thread scheduling.
pub fn twisted_linnik_sum(q: &TwistedLinnikQuery) -> Result<ComplexValue> {
    TwistedLinnikQuery::new(q.m, q.n, q.range, q.alpha, q.bound_b)?;
    let freq = q.twist_frequency();
    let parts: Vec<Complex64> = shards(q.range.limit)
        .into_par_iter()
        .map(|(lo, hi)| {
            moduli(&q.range, lo, hi)
                .map(|c| term(q, freq, c))
                .collect::<ComplexKahan>()
                .value()
        })
        .collect();
    Ok(parts.into_iter().collect::<ComplexKahan>().value())
}

/// `sum_{c ≡ a mod k, c <= X} S(m, n; c) / c` with no twist factor at all.
pub fn linnik_sum_untwisted(m: i64, n: i64, range: &ResidueClassRange) -> ComplexValue {
    let parts: Vec<Complex64> = shards(range.limit)
        .into_par_iter()
        .map(|(lo, hi)| {
            moduli(range, lo, hi)
                .map(|c| kloosterman(KloostermanParams { m, n, c }) / c as f64)
                .collect::<ComplexKahan>()
                .value()
        })
        .collect();
    parts.into_iter().collect::<ComplexKahan>().value()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub x: u64,
    pub value: ComplexValue,
    /// `sum_{c <= x} tau(c) sqrt(gcd(m, n, c)) / sqrt(c)` over the same range:
    /// the triangle-inequality bound on `|L(x)|` from Weil's bound.
    pub weil_envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSumTrace {
    pub checkpoints: Vec<Checkpoint>,
    pub selberg_range: bool,
}

impl PartialSumTrace {
    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    /// CSV with header `X,re,im,abs,weil_envelope`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["X", "re", "im", "abs", "weil_envelope"])?;
        for cp in &self.checkpoints {
            w.write_record([
                cp.x.to_string(),
                cp.value.re.to_string(),
                cp.value.im.to_string(),
                cp.value.norm().to_string(),
                cp.weil_envelope.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Logarithmically spaced checkpoints `round(X^(i/(count-1)))`, deduplicated.
pub fn checkpoint_grid(limit: u64, count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let log_x = (limit as f64).ln();
    for i in 0..count {
        let x = if i + 1 == count {
            limit
        } else {
            ((log_x * i as f64 / (count - 1) as f64).exp().round() as u64).clamp(1, limit)
        };
        if out.last().is_none_or(|&prev| x > prev) {
            out.push(x);
        }
    }
    out
}

/// Running partial sums of `L` at logarithmically spaced checkpoints.
///
/// Each shard of moduli is summed once; a checkpoint combines the whole shards
/// below it and re-sums at most one partial shard.
///
/// The last checkpoint is `X` itself and equals [`twisted_linnik_sum`] of the
/// same query bit for bit.
pub fn linnik_trace(q: &TwistedLinnikQuery, num_checkpoints: usize) -> Result<PartialSumTrace> {
    TwistedLinnikQuery::new(q.m, q.n, q.range, q.alpha, q.bound_b)?;
    if num_checkpoints < 2 {
        return Err(Error::invalid("need at least 2 checkpoints"));
    }
    let grid = checkpoint_grid(q.range.limit, num_checkpoints);
    let freq = q.twist_frequency();

    // Checkpoint prefixes group their terms exactly like the full sum does.
    let shard_list = shards(q.range.limit);
    let shard_values: Vec<(Complex64, f64)> = shard_list
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = ComplexKahan::new();
            let mut env = KahanSum::new();
            for c in moduli(&q.range, lo, hi) {
                acc.add(term(q, freq, c));
                env.add(weil_bound(q.m, q.n, c) / c as f64);
            }
            (acc.value(), env.value())
        })
        .collect();

    let mut checkpoints = Vec::with_capacity(grid.len());
    for &x in &grid {
        let full = ((x / SHARD_LEN) as usize).min(shard_list.len());
        let mut total = ComplexKahan::new();
        let mut env_total = KahanSum::new();
        for &(v, e) in &shard_values[..full] {
            total.add(v);
            env_total.add(e);
        }
        let tail_lo = full as u64 * SHARD_LEN + 1;
        if tail_lo <= x {
            let mut acc = ComplexKahan::new();
            let mut env = KahanSum::new();
            for c in moduli(&q.range, tail_lo, x) {
                acc.add(term(q, freq, c));
                env.add(weil_bound(q.m, q.n, c) / c as f64);
            }
            total.add(acc.value());
            env_total.add(env.value());
        }
        checkpoints.push(Checkpoint {
            x,
            value: total.value(),
            weil_envelope: env_total.value(),
        });
    }
    Ok(PartialSumTrace {
        checkpoints,
        selberg_range: q.in_selberg_range(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// Least-squares slope of `log |L(X)|` against `log X`.
    pub slope: f64,
    pub used: usize,
    /// Tail checkpoints discarded because `|L(X)| < 1e-12`.
    pub dropped: usize,
}

/// Fit the growth exponent over the last `tail_fraction` of the checkpoints.
///
/// A slope near 0 is what square-root-free cancellation predicts; a slope
/// near 1/2 is the trivial bound from Weil's estimate.
pub fn growth_exponent(trace: &PartialSumTrace, tail_fraction: f64) -> Result<GrowthFit> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::invalid(format!("tail fraction must lie in (0, 1], got {tail_fraction}")));
    }
    let total = trace.checkpoints.len();
    let take = ((total as f64 * tail_fraction).ceil() as usize).min(total);
    let tail = &trace.checkpoints[total - take..];
    let (points, dropped): (Vec<&Checkpoint>, Vec<&Checkpoint>) = tail.iter().partition(|cp| cp.value.norm() >= 1e-12);
    if points.len() < 3 {
        return Err(Error::InsufficientData { usable: points.len() });
    }
    let xs: Vec<f64> = points.iter().map(|cp| (cp.x as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|cp| cp.value.norm().ln()).collect();
    Ok(GrowthFit {
        slope: least_squares_slope(&xs, &ys),
        used: points.len(),
        dropped: dropped.len(),
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
