//! Weight functions, the archimedean density `sigma_inf` and the local
//! densities `sigma_p` of `F(x) = N` for the sum of four squares.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{factorize, is_prime, primes_up_to, valuation};
use crate::summation::{pairwise_sum, KahanSum};

/// Identifier carried by every report that depends on the choice of `w0`.
pub const W0_IDENTIFIER: &str = "bump:exp(-1/(1-t^2))";

/// `int_{-1}^{1} exp(-1/(1-t^2)) dt`.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_44;

/// Normalized bump `w0(t) = c exp(-1/(1-t^2))` on `|t| < 1`, zero outside.
pub fn w0_eval(t: f64) -> f64 {
    w0_of_square(t * t)
}

/// `w0(sqrt(s))` for `s >= 0`, without taking the square root.
pub fn w0_of_square(s: f64) -> f64 {
    if s < 1.0 {
        (-1.0 / (1.0 - s)).exp() / BUMP_MASS
    } else {
        0.0
    }
}

/// Normalized bump weights as a type, for APIs taking a weight family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BumpWeight;

impl BumpWeight {
    pub fn normalization(&self) -> f64 {
        1.0 / BUMP_MASS
    }

    pub fn eval(&self, t: f64) -> f64 {
        w0_eval(t)
    }

    pub fn identifier(&self) -> &'static str {
        W0_IDENTIFIER
    }
}

/// `w(x) = w0(|x - xi| / eps) w0(2 xi.(x - xi) / eps^2)`.
pub fn weight_w(x: &[f64; 4], xi: &[f64; 4], eps: f64) -> f64 {
    let d: [f64; 4] = std::array::from_fn(|i| x[i] - xi[i]);
    let dist2 = d.iter().map(|v| v * v).sum::<f64>();
    let first = w0_of_square(dist2 / (eps * eps));
    if first == 0.0 {
        return 0.0;
    }
    let along = 2.0 * (0..4).map(|i| xi[i] * d[i]).sum::<f64>() / (eps * eps);
    first * w0_eval(along)
}

/// The weight `psi_y` on `R^3`.
///
/// With `u = y - |x|^2` and `root = sqrt(1 + eps^2 u)`, the two arguments
/// `2 eps^-2 (root - 1)` and `eps^-1 (1 - root)` are evaluated as
/// `2u / (1 + root)` and `-eps u / (1 + root)`, which avoids cancellation.
/// Returns 0 when `1 + eps^2 u < 0`.
pub fn psi_y(x: &[f64; 3], y: f64, eps: f64) -> f64 {
    let norm2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let u = y - norm2;
    let radicand = 1.0 + eps * eps * u;
    if radicand < 0.0 {
        return 0.0;
    }
    let denom = 1.0 + radicand.sqrt();
    let first = w0_eval(2.0 * u / denom);
    if first == 0.0 {
        return 0.0;
    }
    let tail = eps * u / denom;
    first * w0_of_square(norm2 + tail * tail)
}

/// Settings for the nested trapezoid rule behind [`sigma_infinity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Relative tolerance on consecutive levels.
    pub tol: f64,
    /// First level; level `L` uses `2^L` panels per axis.
    pub initial_level: u32,
    pub max_level: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            initial_level: 4,
            max_level: 9,
        }
    }
}

/// Trapezoid rule for `psi_0` on the octant `[0,1]^3` with `2^level` panels
/// per axis, times 8. Planes of constant `x1` are summed in parallel and
/// combined pairwise in index order.
fn octant_trapezoid(eps: f64, level: u32) -> f64 {
    let m = 1usize << level;
    let h = 1.0 / m as f64;
    let weight = |i: usize| if i == 0 || i == m { 0.5 } else { 1.0 };
    let planes: Vec<f64> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 * h;
            let mut acc = KahanSum::new();
            for j in 0..=m {
                let b = j as f64 * h;
                if a * a + b * b >= 1.0 {
                    break;
                }
                for k in 0..=m {
                    let c = k as f64 * h;
                    let v = psi_y(&[a, b, c], 0.0, eps);
                    if v == 0.0 && a * a + b * b + c * c >= 1.0 {
                        break;
                    }
                    acc.add(weight(j) * weight(k) * v);
                }
            }
            weight(i) * acc.value()
        })
        .collect();
    8.0 * h * h * h * pairwise_sum(&planes)
}

/// `sigma_inf = int_{R^3} psi_0(x) dx`.
///
/// The integrand is smooth with compact support inside the unit ball, so the
/// trapezoid rule converges faster than any power of the step and no
/// extrapolation is applied. Levels are refined until two consecutive values
/// agree to `tol` relative.
pub fn sigma_infinity(eps: f64, settings: &QuadratureSettings) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(settings.tol > 0.0) || settings.initial_level == 0 || settings.initial_level > settings.max_level {
        return Err(Error::invalid("bad quadrature settings"));
    }
    let mut prev = octant_trapezoid(eps, settings.initial_level);
    for level in settings.initial_level + 1..=settings.max_level {
        let cur = octant_trapezoid(eps, level);
        if (cur - prev).abs() <= settings.tol * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "sigma_inf at eps = {eps} not within {} after level {}",
        settings.tol, settings.max_level
    )))
}

/// `sigma_p` at prime `p` with the level `k*` at which it stabilized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub k_star: u32,
    #[serde(rename = "value")]
    pub sigma_p: f64,
}

/// `#{x mod p : x1^2 + ... + x4^2 = target}` for odd `p`, in `O(p)`.
///
/// The number of representations of `a` by two squares depends only on
/// whether `a` is zero, a residue or a non-residue, so three values suffice.
fn four_square_count_odd(p: u64, target: u64) -> u128 {
    let mut one = vec![0u64; p as usize];
    for x in 0..p {
        one[(x * x % p) as usize] += 1;
    }
    let two_at = |a: u64| -> u128 { (0..p).map(|x| one[((a + p - x * x % p) % p) as usize] as u128).sum() };
    let non_residue = (2..p).find(|&a| one[a as usize] == 0).unwrap_or(2);
    let (zero, residue, non) = (two_at(0), two_at(1), two_at(non_residue));
    // one[a] is 1 at zero, 2 at residues and 0 at non-residues
    let two = |a: u64| match one[a as usize] {
        1 => zero,
        2 => residue,
        _ => non,
    };
    let target = target % p;
    (0..p).map(|a| two(a) * two((target + p - a) % p)).sum()
}

/// Histogram of `x1^2 + ... + x4^2 mod m` over `x` in `allowed^4`.
fn histogram_count(m: u64, allowed: impl Fn(u64) -> bool) -> Vec<u128> {
    let mut one = vec![0u128; m as usize];
    for x in (0..m).filter(|&x| allowed(x)) {
        one[(x * x % m) as usize] += 1;
    }
    let conv = |a: &[u128], b: &[u128]| -> Vec<u128> {
        let mut out = vec![0u128; m as usize];
        for (i, &u) in a.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in b.iter().enumerate() {
                out[(i + j) % m as usize] += u * v;
            }
        }
        out
    };
    let two = conv(&one, &one);
    conv(&two, &two)
}

/// `#{x mod m : F(x) = N mod m}` by histogram convolution, `O(m^2)`.
pub fn count_mod_histogram(big_n: u64, m: u64) -> u128 {
    histogram_count(m, |_| true)[(big_n % m) as usize]
}

/// Exact solution counts of `F(x) = N mod p^k`, built by lifting.
///
/// Solutions split into those with some coordinate prime to `p` and those
/// with all coordinates divisible by `p`. The first kind lifts uniformly: by
/// `p^3` per level for odd `p` from `k = 1`, and by `8` for `p = 2` from
/// `k = 3`. The second kind reduces to the count for `N / p^2` two levels
/// down.
struct LocalCounter {
    p: u64,
    /// Nonsingular counts at the base levels (`k = 1` odd, `k = 1..=3` even).
    base: Vec<u128>,
    big_n: u64,
}

impl LocalCounter {
    fn new(p: u64, big_n: u64) -> Self {
        if p == 2 {
            let base = (1..=3u32)
                .map(|k| {
                    let m = 1u64 << k;
                    let all = histogram_count(m, |_| true)[(big_n % m) as usize];
                    let even = histogram_count(m, |x| x % 2 == 0)[(big_n % m) as usize];
                    all - even
                })
                .collect();
            Self { p, base, big_n }
        } else {
            let total = four_square_count_odd(p, big_n);
            let singular = u128::from(big_n % p == 0);
            Self {
                p,
                base: vec![total - singular],
                big_n,
            }
        }
    }

    fn nonsingular(&self, k: u32) -> Option<u128> {
        let p = self.p as u128;
        if self.p == 2 {
            if k <= 3 {
                return Some(self.base[k as usize - 1]);
            }
            8u128.checked_pow(k - 3)?.checked_mul(self.base[2])
        } else {
            p.checked_pow(3 * (k - 1))?.checked_mul(self.base[0])
        }
    }

    fn count(&self, k: u32) -> Option<u128> {
        self.count_for(self.big_n, k)
    }

    fn count_for(&self, big_n: u64, k: u32) -> Option<u128> {
        if k == 0 {
            return Some(1);
        }
        let ns = if big_n == self.big_n {
            self.nonsingular(k)?
        } else {
            LocalCounter::new(self.p, big_n).nonsingular(k)?
        };
        let p = self.p;
        let singular = match k {
            1 => u128::from(big_n % p == 0),
            2 => {
                if big_n % (p * p) == 0 {
                    (p as u128).pow(4)
                } else {
                    0
                }
            }
            _ => {
                if big_n % (p * p) == 0 {
                    (p as u128).pow(4).checked_mul(self.count_for(big_n / (p * p), k - 2)?)?
                } else {
                    0
                }
            }
        };
        ns.checked_add(singular)
    }
}

/// Local density `sigma_p = lim p^(-3k) #{x mod p^k : F(x) = N}`.
///
/// Counts are formed for `k = 1, 2, ...` until `count(k+1) = p^3 count(k)`
/// holds exactly.
pub fn sigma_p(p: u64, big_n: u64, k_max: u32) -> Result<DensityReport> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if big_n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if k_max < 2 {
        return Err(Error::invalid("k_max must be at least 2"));
    }
    let counter = LocalCounter::new(p, big_n);
    let overflow = || Error::ResourceLimit(format!("solution count mod {p}^k overflows at k <= {k_max}"));
    let p3 = (p as u128).pow(3);
    let mut prev = counter.count(1).ok_or_else(overflow)?;
    for k in 1..k_max {
        let next = counter.count(k + 1).ok_or_else(overflow)?;
        if Some(next) == prev.checked_mul(p3) {
            let sigma = prev as f64 / (p as f64).powi(3 * k as i32);
            return Ok(DensityReport { p, k_star: k, sigma_p: sigma });
        }
        prev = next;
    }
    Err(Error::NotStabilized { p, k_max })
}

/// `p^(-3k) #{x mod p^k : F(x) = N}` as an exact pair (count, k).
pub fn normalized_count(p: u64, big_n: u64, k: u32) -> Result<(u128, u32)> {
    if !is_prime(p) || k == 0 {
        return Err(Error::invalid("need a prime p and k >= 1"));
    }
    LocalCounter::new(p, big_n)
        .count(k)
        .map(|c| (c, k))
        .ok_or_else(|| Error::ResourceLimit(format!("count mod {p}^{k} overflows")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesResult {
    pub value: f64,
    pub prime_cutoff: u64,
    /// `value * P^(-1/2)`.
    pub tail_bound: f64,
    /// Whether `tail_bound <= tol * value`.
    pub within_tolerance: bool,
    pub factors: Vec<DensityReport>,
}

/// Extra levels beyond `v_p(N)` allowed for stabilization.
const K_MARGIN: u32 = 5;

/// Truncated product `prod sigma_p` over `p <= P` and over the primes of `N`
/// above `P`.
pub fn singular_series(big_n: u64, prime_cutoff: u64, tol: f64) -> Result<SingularSeriesResult> {
    if prime_cutoff < 3 {
        return Err(Error::invalid("prime cutoff must be at least 3"));
    }
    if big_n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let mut primes = primes_up_to(prime_cutoff);
    primes.extend(
        factorize(big_n)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|&p| p > prime_cutoff),
    );
    let factors: Vec<DensityReport> = primes
        .par_iter()
        .map(|&p| sigma_p(p, big_n, valuation(p, big_n) + K_MARGIN))
        .collect::<Result<_>>()?;
    let value = factors.iter().map(|f| f.sigma_p).product::<f64>();
    let tail_bound = value / (prime_cutoff as f64).sqrt();
    Ok(SingularSeriesResult {
        value,
        prime_cutoff,
        tail_bound,
        within_tolerance: tail_bound <= tol * value,
        factors,
    })
}

/// The JSON density report for one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    #[serde(rename = "N")]
    pub n: u64,
    pub eps: f64,
    pub sigma_infinity: f64,
    pub sigma_p: Vec<DensityReport>,
    pub singular_series: f64,
    pub tail_bound: f64,
    pub prime_cutoff: u64,
    pub w0: String,
}

impl DensityFile {
    pub fn new(big_n: u64, eps: f64, sigma_infinity: f64, series: &SingularSeriesResult) -> Self {
        Self {
            n: big_n,
            eps,
            sigma_infinity,
            sigma_p: series.factors.clone(),
            singular_series: series.value,
            tail_bound: series.tail_bound,
            prime_cutoff: series.prime_cutoff,
            w0: W0_IDENTIFIER.to_string(),
        }
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }
}
