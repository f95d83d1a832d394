//! Integer points on the spheres `x1^2 + x2^2 + x3^2 + x4^2 = n`, spherical
//! cap gaps, and sampling estimates of the covering exponent of `S^3`.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{factorize, isqrt, perfect_square_root, valuation};

pub type LatticePoint4 = [i64; 4];

/// Default resource ceiling on `n` for [`enumerate_sphere`].
pub const DEFAULT_SPHERE_CEILING: u64 = 100_000_000;

/// `vol S^3 = 2 pi^2`.
pub const SPHERE_VOLUME: f64 = 2.0 * PI * PI;

const UNIT_TOL: f64 = 1e-9;

/// Full set of integer points on `F(x) = n`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpherePointSet {
    pub n: u64,
    pub points: Vec<LatticePoint4>,
}

impl SpherePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `x1,x2,x3,x4`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x1", "x2", "x3", "x4"])?;
        for p in &self.points {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn quad_form(x: &LatticePoint4) -> i128 {
    x.iter().map(|&v| v as i128 * v as i128).sum()
}

fn check_ceiling(n: u64, ceiling: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("sphere radius squared n must be at least 1"));
    }
    if n > ceiling {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the enumeration ceiling {ceiling}"
        )));
    }
    Ok(())
}

/// Representatives `x1 >= x2 >= x3 >= x4 >= 0` of the orbits of the signed
/// permutation group acting on the solutions of `F(x) = n`.
///
/// Slices over `x1` run in parallel and are concatenated in slice order.
pub fn canonical_points(n: u64) -> Vec<LatticePoint4> {
    let top = isqrt(n);
    let slices: Vec<Vec<LatticePoint4>> = (0..=top)
        .into_par_iter()
        .map(|x1| {
            let mut out = Vec::new();
            let r1 = n - x1 * x1;
            // remaining three squares are each <= x1^2
            if r1 > 3 * x1 * x1 {
                return out;
            }
            for x2 in (0..=x1.min(isqrt(r1))).rev() {
                let r2 = r1 - x2 * x2;
                if r2 > 2 * x2 * x2 {
                    break;
                }
                for x3 in (0..=x2.min(isqrt(r2))).rev() {
                    let r3 = r2 - x3 * x3;
                    if r3 > x3 * x3 {
                        break;
                    }
                    if let Some(x4) = perfect_square_root(r3) {
                        out.push([x1 as i64, x2 as i64, x3 as i64, x4 as i64]);
                    }
                }
            }
            out
        })
        .collect();
    slices.into_iter().flatten().collect()
}

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

/// All signed permutations of `rep`, without repetition.
pub fn orbit(rep: &LatticePoint4) -> Vec<LatticePoint4> {
    let mut out = Vec::with_capacity(384);
    for perm in &PERMUTATIONS {
        for signs in 0..16u32 {
            let mut x = [0i64; 4];
            for i in 0..4 {
                let v = rep[perm[i]];
                x[i] = if signs >> i & 1 == 1 { -v } else { v };
            }
            out.push(x);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Every integer solution of `F(x) = n`, with `n` bounded by
/// [`DEFAULT_SPHERE_CEILING`].
pub fn enumerate_sphere(n: u64) -> Result<SpherePointSet> {
    enumerate_sphere_bounded(n, DEFAULT_SPHERE_CEILING)
}

pub fn enumerate_sphere_bounded(n: u64, ceiling: u64) -> Result<SpherePointSet> {
    check_ceiling(n, ceiling)?;
    let mut points: Vec<LatticePoint4> = canonical_points(n).iter().flat_map(orbit).collect();
    points.sort_unstable();
    Ok(SpherePointSet { n, points })
}

/// Jacobi's four-square count `8 * sum_{d | n, 4 ∤ d} d`.
pub fn jacobi_r4(n: u64) -> u64 {
    assert!(n >= 1, "r4 is computed for n >= 1");
    let mut divisors = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divisors.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divisors.extend(current.iter().map(|d| d * pk));
        }
    }
    8 * divisors.iter().filter(|&&d| d % 4 != 0).sum::<u64>()
}

fn check_unit(xi: &[f64; 4]) -> Result<()> {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::invalid(format!("direction must be a unit vector, |xi| = {norm}")));
    }
    Ok(())
}

/// Scale a non-zero vector to unit length.
pub fn normalize(v: [f64; 4]) -> Result<[f64; 4]> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
    }
    Ok(v.map(|x| x / norm))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapReport {
    pub xi: [f64; 4],
    pub n: u64,
    /// `min_x |x / sqrt(n) - xi|` over the sphere points.
    pub eps_min: f64,
    pub nearest: LatticePoint4,
}

/// Orbit representatives of one sphere, for repeated nearest-point queries.
#[derive(Debug, Clone)]
pub struct SphereIndex {
    n: u64,
    reps: Vec<LatticePoint4>,
    count: u64,
}

impl SphereIndex {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_ceiling(n, DEFAULT_SPHERE_CEILING)
    }

    pub fn with_ceiling(n: u64, ceiling: u64) -> Result<Self> {
        check_ceiling(n, ceiling)?;
        let reps = canonical_points(n);
        if reps.is_empty() {
            return Err(Error::EmptySphere { n });
        }
        let count = reps.iter().map(|r| orbit(r).len() as u64).sum();
        Ok(Self { n, reps, count })
    }

    /// `#S^3(sqrt n) ∩ Z^4`.
    pub fn point_count(&self) -> u64 {
        self.count
    }

    /// Nearest sphere point to the direction `xi`.
    ///
    /// Maximising `x . xi` over an orbit pairs the sorted coordinates of the
    /// representative with the sorted `|xi_i|` (rearrangement inequality), so
    /// only representatives are scanned.
    pub fn nearest(&self, xi: &[f64; 4]) -> CapReport {
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &j| xi[j].abs().total_cmp(&xi[i].abs()).then(i.cmp(&j)));
        let sorted = order.map(|i| xi[i].abs());
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (idx, r) in self.reps.iter().enumerate() {
            let dot: f64 = (0..4).map(|j| r[j] as f64 * sorted[j]).sum();
            if dot > best.0 {
                best = (dot, idx);
            }
        }
        let rep = self.reps[best.1];
        let mut nearest = [0i64; 4];
        for (j, &coord) in order.iter().enumerate() {
            nearest[coord] = if xi[coord] < 0.0 { -rep[j] } else { rep[j] };
        }
        let scale = (self.n as f64).sqrt();
        let eps_min = (0..4)
            .map(|i| {
                let d = nearest[i] as f64 / scale - xi[i];
                d * d
            })
            .sum::<f64>()
            .sqrt();
        CapReport {
            xi: *xi,
            n: self.n,
            eps_min,
            nearest,
        }
    }
}

/// Largest empty-cap radius around `xi` for the points `x / sqrt(n)`.
pub fn cap_gap(xi: [f64; 4], n: u64) -> Result<CapReport> {
    check_unit(&xi)?;
    Ok(SphereIndex::new(n)?.nearest(&xi))
}

pub fn write_cap_reports<W: Write>(reports: &[CapReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["xi1", "xi2", "xi3", "xi4", "n", "eps_min", "nx1", "nx2", "nx3", "nx4"])?;
    for r in reports {
        let mut row: Vec<String> = r.xi.iter().map(f64::to_string).collect();
        row.push(r.n.to_string());
        row.push(r.eps_min.to_string());
        row.extend(r.nearest.iter().map(i64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Uniform directions on `S^3` from normalized standard Gaussian 4-vectors,
/// drawn sequentially from a ChaCha8 stream seeded with `seed`.
///
/// The first `k` directions of a longer draw equal a draw of length `k`.
pub fn sample_directions(seed: u64, count: usize) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        if let Ok(u) = normalize(v) {
            out.push(u);
        }
    }
    out
}

/// Leading-order cap volume `(4 pi / 3) eps^3`.
pub fn cap_volume(eps: f64) -> f64 {
    4.0 * PI / 3.0 * eps.powi(3)
}

/// `max` over the given directions of the empty-cap volume.
pub fn lambda_from_directions(index: &SphereIndex, directions: &[[f64; 4]]) -> f64 {
    directions
        .iter()
        .map(|xi| cap_volume(index.nearest(xi).eps_min))
        .fold(0.0, f64::max)
}

/// Sampling lower bound for `lambda(r)` with `r^2 = n`.
pub fn lambda_estimate(n: u64, num_samples: usize, seed: u64) -> Result<f64> {
    if num_samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let index = SphereIndex::new(n)?;
    Ok(lambda_from_directions(&index, &sample_directions(seed, num_samples)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringQuery {
    pub n_values: Vec<u64>,
    pub num_samples: usize,
    pub seed: u64,
    /// Largest admissible 2-adic valuation of `n`; `Some(0)` keeps odd `n`.
    pub max_two_adic: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringRow {
    pub n: u64,
    pub count: u64,
    pub lambda_hat: f64,
    pub k_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringEstimate {
    pub rows: Vec<CoveringRow>,
    pub skipped: Vec<(u64, String)>,
}

impl CoveringEstimate {
    /// CSV with header `n,count,lambda_hat,K_hat`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "count", "lambda_hat", "K_hat"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.count.to_string(),
                r.lambda_hat.to_string(),
                r.k_hat.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-`n` seed so that each sphere gets its own reproducible direction stream.
fn seed_for(seed: u64, n: u64) -> u64 {
    seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `K(n) = log(#points) / log(2 pi^2 / lambda_hat)` for each admissible `n`.
///
/// `lambda_hat` is a sampling lower bound, so `K(n)` is biased low; it is an
/// exploratory estimate. Empty spheres and `n` failing the 2-adic filter are
/// skipped and reported.
pub fn covering_exponent_estimate(query: &CoveringQuery) -> Result<CoveringEstimate> {
    if query.num_samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &n in &query.n_values {
        if n == 0 {
            skipped.push((n, "n must be positive".to_string()));
            continue;
        }
        if let Some(max_v) = query.max_two_adic {
            let v = valuation(2, n);
            if v > max_v {
                skipped.push((n, format!("2-adic valuation {v} exceeds {max_v}")));
                continue;
            }
        }
        let index = match SphereIndex::new(n) {
            Ok(ix) => ix,
            Err(Error::EmptySphere { .. }) => {
                skipped.push((n, "empty sphere".to_string()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let dirs = sample_directions(seed_for(query.seed, n), query.num_samples);
        let lambda_hat = lambda_from_directions(&index, &dirs);
        let count = index.point_count();
        rows.push(CoveringRow {
            n,
            count,
            lambda_hat,
            k_hat: (count as f64).ln() / (SPHERE_VOLUME / lambda_hat).ln(),
        });
    }
    Ok(CoveringEstimate { rows, skipped })
}

/// Orthonormal frame `e1, e2, e3, e4` with `e4 = xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentFrame {
    pub e: [[f64; 4]; 4],
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

impl TangentFrame {
    /// `(v . e1, ..., v . e4)`.
    pub fn coordinates(&self, v: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| dot(v, &self.e[i]))
    }

    /// `u1 e1 + ... + u4 e4`.
    pub fn combine(&self, u: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|k| (0..4).map(|i| u[i] * self.e[i][k]).sum())
    }

    /// `max |e_i . e_j - delta_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&self.e[i], &self.e[j]) - target).abs());
            }
        }
        worst
    }
}

/// Complete `xi` to an orthonormal frame by Gram-Schmidt.
///
/// The seed vectors are the standard basis vectors other than the one at the
/// largest `|xi_i|`, in index order; each is orthogonalized twice.
pub fn tangent_frame(xi: [f64; 4]) -> Result<TangentFrame> {
    check_unit(&xi)?;
    let xi = normalize(xi)?;
    let pivot = (0..4)
        .max_by(|&i, &j| xi[i].abs().total_cmp(&xi[j].abs()).then(j.cmp(&i)))
        .expect("four coordinates");
    let mut basis: Vec<[f64; 4]> = Vec::with_capacity(4);
    for k in (0..4).filter(|&k| k != pivot) {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        for _ in 0..2 {
            for b in basis.iter().chain(std::iter::once(&xi)) {
                let proj = dot(&v, b);
                for i in 0..4 {
                    v[i] -= proj * b[i];
                }
            }
        }
        basis.push(normalize(v)?);
    }
    Ok(TangentFrame {
        e: [basis[0], basis[1], basis[2], xi],
    })
}

/// The truncation set of dual vectors `c` with `|c| <= N^delta / eps` and
/// `max(|ĉ1|, |ĉ2|, |ĉ3|, eps |ĉ4|) <= N^delta`, in the frame at `xi`.
#[derive(Debug, Clone, Copy)]
pub struct TruncationSet {
    frame: TangentFrame,
    eps: f64,
    bound: f64,
}

impl TruncationSet {
    pub fn new(xi: [f64; 4], eps: f64, big_n: u64, delta: f64) -> Result<Self> {
        if !(eps > 0.0) || !(delta > 0.0) {
            return Err(Error::invalid("eps and delta must be positive"));
        }
        if big_n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        Ok(Self {
            frame: tangent_frame(xi)?,
            eps,
            bound: (big_n as f64).powf(delta),
        })
    }

    pub fn contains(&self, c: &LatticePoint4) -> bool {
        let cf = c.map(|v| v as f64);
        let norm = dot(&cf, &cf).sqrt();
        if norm > self.bound / self.eps {
            return false;
        }
        let hat = self.frame.coordinates(&cf);
        let m = hat[0].abs().max(hat[1].abs()).max(hat[2].abs()).max(self.eps * hat[3].abs());
        m <= self.bound
    }

    /// Number of members, by scanning the box `|c_i| <= N^delta / eps`.
    pub fn count(&self) -> u64 {
        let r = (self.bound / self.eps).floor() as i64;
        let mut total = 0u64;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        if self.contains(&[a, b, c, d]) {
                            total += 1;
                        }
                    }
                }
            }
        }
        total
    }

    /// `eps^-1 N^(4 delta)`.
    pub fn size_scale(&self) -> f64 {
        self.bound.powi(4) / self.eps
    }
}

/// Membership of `c` in the truncation set at `(xi, eps, N, delta)`.
pub fn classify_c(c: LatticePoint4, xi: [f64; 4], eps: f64, big_n: u64, delta: f64) -> Result<bool> {
    Ok(TruncationSet::new(xi, eps, big_n, delta)?.contains(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sphere(n: u64) -> Vec<LatticePoint4> {
        let r = isqrt(n) as i64;
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        if quad_form(&[a, b, c, d]) == n as i128 {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_sphere(1).unwrap().len(), 8);
        assert_eq!(enumerate_sphere(4).unwrap().len(), 24);
        assert_eq!(jacobi_r4(4), 8 * 3);
        // r4(7) = 8 (1 + 7) = 64: (±2, ±1, ±1, ±1) and permutations
        assert_eq!(brute_sphere(7).len(), 64);
        assert_eq!(enumerate_sphere(7).unwrap().len(), 64);
        assert!(enumerate_sphere(0).is_err());
        assert!(matches!(
            enumerate_sphere_bounded(50, 10),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=60u64 {
            let mut brute = brute_sphere(n);
            brute.sort_unstable();
            assert_eq!(enumerate_sphere(n).unwrap().points, brute, "n={n}");
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_r4(1), 8);
        assert_eq!(jacobi_r4(4), 24);
        assert_eq!(jacobi_r4(2), 24);
        assert_eq!(enumerate_sphere(2).unwrap().len(), 24);
    }

    #[test]
    fn counts_match_jacobi_up_to_800() {
        for n in 1..=800u64 {
            let set = enumerate_sphere(n).unwrap();
            assert_eq!(set.len() as u64, jacobi_r4(n), "n={n}");
            assert!(set.points.iter().all(|p| quad_form(p) == n as i128));
        }
    }

    #[test]
    fn cap_examples() {
        let r = cap_gap([1.0, 0.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(r.eps_min, 0.0);
        assert_eq!(r.nearest, [1, 0, 0, 0]);
        let r = cap_gap([0.5, 0.5, 0.5, 0.5], 4).unwrap();
        assert!(r.eps_min < 1e-15);
        assert_eq!(r.nearest, [1, 1, 1, 1]);
        let r = cap_gap([1.0, 0.0, 0.0, 0.0], 2).unwrap();
        assert!((r.eps_min - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!(cap_gap([1.0, 0.0, 0.0, 0.0], 0).is_err());
        assert!(cap_gap([1.0, 1.0, 0.0, 0.0], 2).is_err());
    }

    #[test]
    fn cap_matches_full_scan() {
        for n in [3u64, 25, 50, 81, 99] {
            let set = enumerate_sphere(n).unwrap();
            let index = SphereIndex::new(n).unwrap();
            for xi in sample_directions(n, 200) {
                let brute = set
                    .points
                    .iter()
                    .map(|p| {
                        let s = (n as f64).sqrt();
                        (0..4).map(|i| (p[i] as f64 / s - xi[i]).powi(2)).sum::<f64>().sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                let fast = index.nearest(&xi);
                assert!((fast.eps_min - brute).abs() < 1e-12);
                assert_eq!(quad_form(&fast.nearest), n as i128);
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert!(lambda_estimate(1, 10, 0).unwrap() > 0.0);
        let a = lambda_estimate(25, 1000, 7).unwrap();
        let b = lambda_estimate(25, 1000, 7).unwrap();
        assert_eq!(a, b);
        let index = SphereIndex::new(25).unwrap();
        let on_lattice = normalize([3.0, 4.0, 0.0, 0.0]).unwrap();
        assert_eq!(lambda_from_directions(&index, &[on_lattice]), 0.0);
        assert!(matches!(lambda_estimate(0, 1, 0), Err(_)));
    }

    #[test]
    fn lambda_regression_snapshot() {
        let v = lambda_estimate(25, 1000, 7).unwrap();
        assert!((v - LAMBDA_25_SEED7).abs() < 1e-12, "lambda = {v:.17e}");
    }

    const LAMBDA_25_SEED7: f64 = 2.368_177_799_336_321_5e-1;

    #[test]
    fn covering_monotone_in_samples() {
        let run = |k| {
            covering_exponent_estimate(&CoveringQuery {
                n_values: vec![49],
                num_samples: k,
                seed: 3,
                max_two_adic: Some(0),
            })
            .unwrap()
            .rows[0]
        };
        let mut prev = run(1);
        for k in [10, 100, 1000] {
            let cur = run(k);
            assert!(cur.lambda_hat >= prev.lambda_hat);
            // log(2 pi^2 / lambda) shrinks as lambda grows
            assert!(cur.k_hat >= prev.k_hat);
            prev = cur;
        }
    }

    #[test]
    fn covering_skips() {
        let est = covering_exponent_estimate(&CoveringQuery {
            n_values: vec![4, 9, 25],
            num_samples: 50,
            seed: 1,
            max_two_adic: Some(0),
        })
        .unwrap();
        assert_eq!(est.rows.len(), 2);
        assert_eq!(est.skipped.len(), 1);
        assert!(est.rows.iter().all(|r| r.k_hat.is_finite() && r.k_hat > 0.0));
    }

    #[test]
    fn frame_examples() {
        let f = tangent_frame([0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            f.e,
            [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]
        );
        assert!(tangent_frame([0.0, 0.0, 0.0, 2.0]).is_err());
        for xi in sample_directions(11, 200) {
            let f = tangent_frame(xi).unwrap();
            assert!(f.orthonormality_residual() <= 1e-12);
            assert_eq!(f.e[3], normalize(xi).unwrap());
            let u = [0.3, -1.2, 2.5, 0.7];
            let v = f.combine(&u);
            let fu: f64 = u.iter().map(|x| x * x).sum();
            let fv: f64 = v.iter().map(|x| x * x).sum();
            assert!((fu - fv).abs() <= 1e-10);
            let c = [3.0, -1.0, 4.0, 2.0];
            let back = f.combine(&f.coordinates(&c));
            assert!((0..4).all(|i| (back[i] - c[i]).abs() <= 1e-10));
        }
    }

    #[test]
    fn truncation_set_examples() {
        let xi = normalize([1.0, 2.0, 2.0, 4.0]).unwrap();
        let set = TruncationSet::new(xi, 0.2, 10_000, 0.1).unwrap();
        assert!(set.contains(&[0, 0, 0, 0]));
        // N^delta / eps = 10^0.4 / 0.2 ≈ 12.56; a point along xi just outside
        let outside = [0, 0, 0, 13];
        assert!(!classify_c(outside, xi, 0.2, 10_000, 0.1).unwrap());
        assert!(classify_c([0, 0, 0, 0], xi, 0.2, 10_000, 0.1).unwrap());
        assert!(TruncationSet::new(xi, 0.0, 10, 0.1).is_err());
    }

    #[test]
    fn truncation_set_size() {
        // recorded constant: #C <= 40 eps^-1 N^(4 delta) on these configurations
        const C: f64 = 40.0;
        for (seed, eps, big_n, delta) in [(1u64, 0.2, 10_000u64, 0.1), (2, 0.3, 40_000, 0.08), (3, 0.5, 1_000_000, 0.1)] {
            let xi = sample_directions(seed, 1)[0];
            let set = TruncationSet::new(xi, eps, big_n, delta).unwrap();
            let count = set.count() as f64;
            assert!(count >= 1.0);
            assert!(count <= C * set.size_scale(), "count {count} scale {}", set.size_scale());
        }
    }
}
