//! Kloosterman sums, quadratic Gauss sums and the circle-method sum `S_q(c)`.
//!
//! Each closed form has a brute-force counterpart in this module and the two
//! are compared in the tests. All sums accumulate with [`ComplexKahan`] in a
//! fixed term order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{
    delta_parity, divisor_tau, epsilon_factor, gcd, inverse_unchecked, is_prime, jacobi_unchecked,
    mul_mod, reduce, MAX_MODULUS,
};
use crate::summation::ComplexKahan;

pub type ComplexValue = Complex64;

/// Default cap on `q` for the `O(q^5)` brute-force evaluation of `S_q(c)`.
pub const DEFAULT_SQ_BRUTEFORCE_CAP: u64 = 60;

/// `e(j / c) = exp(2 pi i j / c)` for a residue `j` in `[0, c)`.
///
/// The angle is taken in `(-pi, pi]` to keep the argument of `sin_cos` small.
#[inline]
pub fn unit_root(j: u64, c: u64) -> Complex64 {
    debug_assert!(j < c);
    let signed = if 2 * j > c { j as f64 - c as f64 } else { j as f64 };
    let (s, co) = (TAU * signed / c as f64).sin_cos();
    Complex64::new(co, s)
}

/// Table of `e(j / c)` for all `j mod c`.
#[derive(Debug, Clone)]
pub struct RootTable {
    modulus: u64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl RootTable {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let (cos, sin) = (0..modulus)
            .map(|j| {
                let z = unit_root(j, modulus);
                (z.re, z.im)
            })
            .unzip();
        Self { modulus, cos, sin }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, j: u64) -> Complex64 {
        Complex64::new(self.cos[j as usize], self.sin[j as usize])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KloostermanParams {
    pub m: i64,
    pub n: i64,
    pub c: u64,
}

impl KloostermanParams {
    pub fn new(m: i64, n: i64, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::invalid("Kloosterman modulus c must be at least 1"));
        }
        if c > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { modulus: c });
        }
        Ok(Self { m, n, c })
    }
}

/// `S(m, n; c)`: the sum over units `x mod c` of `e((m x + n x̄) / c)`.
///
/// Inverses come from the extended Euclidean algorithm term by term. For
/// `c = 1` the single residue `x = 0` is a unit and the value is 1.
pub fn kloosterman(p: KloostermanParams) -> ComplexValue {
    let c = p.c;
    let m = reduce(p.m, c);
    let n = reduce(p.n, c);
    let mut acc = ComplexKahan::new();
    for x in 0..c {
        if let Some(xbar) = inverse_unchecked(x, c) {
            let idx = ((m as u128 * x as u128 + n as u128 * xbar as u128) % c as u128) as u64;
            acc.add(unit_root(idx, c));
        }
    }
    acc.value()
}

/// Weil's bound `tau(c) sqrt(gcd(m, n, c)) sqrt(c)`.
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c);
    divisor_tau(c) as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

/// Precomputed units, inverses and roots for many Kloosterman sums with one
/// modulus. Produces bit-identical values to [`kloosterman`].
#[derive(Debug, Clone)]
pub struct KloostermanPlan {
    c: u64,
    units: Vec<(u64, u64)>,
    roots: RootTable,
}

impl KloostermanPlan {
    pub fn new(c: u64) -> Result<Self> {
        KloostermanParams::new(0, 0, c)?;
        let units = (0..c)
            .filter_map(|x| inverse_unchecked(x, c).map(|xb| (x, xb)))
            .collect();
        Ok(Self {
            c,
            units,
            roots: RootTable::new(c),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    pub fn eval(&self, m: i64, n: i64) -> ComplexValue {
        let c = self.c;
        let (m, n) = (reduce(m, c), reduce(n, c));
        let mut acc = ComplexKahan::new();
        for &(x, xb) in &self.units {
            let idx = ((m as u128 * x as u128 + n as u128 * xb as u128) % c as u128) as u64;
            acc.add(self.roots.get(idx));
        }
        acc.value()
    }

    /// `S(m, n; c)` for `n = n_start, n_start + 1, ..., n_start + count - 1`.
    pub fn row(&self, m: i64, n_start: i64, count: usize) -> Vec<ComplexValue> {
        let c = self.c;
        let m = reduce(m, c);
        let n0 = reduce(n_start, c);
        let mut accs = vec![ComplexKahan::new(); count];
        for &(x, xb) in &self.units {
            let mut idx = ((m as u128 * x as u128 + n0 as u128 * xb as u128) % c as u128) as u64;
            for acc in accs.iter_mut() {
                acc.add(self.roots.get(idx));
                idx += xb;
                if idx >= c {
                    idx -= c;
                }
            }
        }
        accs.iter().map(ComplexKahan::value).collect()
    }
}

/// `S(m, n; c)` through twisted multiplicativity over the prime-power parts
/// of `c`: `S(m, n; uv) = S(m v̄, n v̄; u) S(m ū, n ū; v)` for coprime `u, v`.
///
/// `factorization` must be the exact factorization of `c` into distinct
/// primes. Each prime-power factor is summed directly with [`kloosterman`].
pub fn kloosterman_fast(p: KloostermanParams, factorization: &[(u64, u32)]) -> Result<ComplexValue> {
    let mut product: u64 = 1;
    for (i, &(q, e)) in factorization.iter().enumerate() {
        if e == 0 || !is_prime(q) {
            return Err(Error::invalid(format!(
                "inconsistent factorization: ({q}, {e}) is not a prime power"
            )));
        }
        if factorization[..i].iter().any(|&(r, _)| r == q) {
            return Err(Error::invalid(format!("inconsistent factorization: prime {q} repeated")));
        }
        product = q
            .checked_pow(e)
            .and_then(|pe| product.checked_mul(pe))
            .ok_or_else(|| Error::invalid("inconsistent factorization: product overflows"))?;
    }
    if product != p.c {
        return Err(Error::invalid(format!(
            "inconsistent factorization: product {product} differs from c = {}",
            p.c
        )));
    }
    Ok(twisted_product(p.m, p.n, factorization))
}

fn twisted_product(m: i64, n: i64, factors: &[(u64, u32)]) -> ComplexValue {
    match factors {
        [] => kloosterman(KloostermanParams { m, n, c: 1 }),
        [(q, e)] => kloosterman(KloostermanParams { m, n, c: q.pow(*e) }),
        [(q, e), rest @ ..] => {
            let u = q.pow(*e);
            let v: u64 = rest.iter().map(|&(r, f)| r.pow(f)).product();
            let v_inv = inverse_unchecked(v % u, u).expect("coprime parts");
            let u_inv = inverse_unchecked(u % v, v).expect("coprime parts");
            let twist = |x: i64, t: u64, modulus: u64| mul_mod(reduce(x, modulus), t, modulus) as i64;
            let left = kloosterman(KloostermanParams {
                m: twist(m, v_inv, u),
                n: twist(n, v_inv, u),
                c: u,
            });
            left * twisted_product(twist(m, u_inv, v), twist(n, u_inv, v), rest)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussParams {
    pub s: i64,
    pub t: i64,
    pub q: u64,
}

impl GaussParams {
    pub fn new(s: i64, t: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("Gauss sum modulus q must be at least 1"));
        }
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { modulus: q });
        }
        Ok(Self { s, t, q })
    }
}

/// `G(s, t; q) = sum_{b mod q} e_q(s b^2 + t b)`, term by term.
pub fn gauss_bruteforce(p: GaussParams) -> ComplexValue {
    let q = p.q;
    let (s, t) = (reduce(p.s, q) as u128, reduce(p.t, q) as u128);
    let mut acc = ComplexKahan::new();
    for b in 0..q as u128 {
        let idx = ((s * (b * b % q as u128) + t * b) % q as u128) as u64;
        acc.add(unit_root(idx, q));
    }
    acc.value()
}

/// [`gauss_bruteforce`] against a precomputed root table for `q`.
///
/// The phase index is advanced incrementally; suitable for sweeping many
/// `(s, t)` pairs with one modulus.
pub fn gauss_bruteforce_with(roots: &RootTable, s: i64, t: i64) -> ComplexValue {
    let q = roots.modulus();
    let s = reduce(s, q);
    let t = reduce(t, q);
    let mut acc = ComplexKahan::new();
    // idx(b) = s b^2 + t b, idx(b+1) - idx(b) = s(2b + 1) + t
    let mut idx = 0u64;
    let mut step = (s + t) % q;
    let two_s = (2 * s) % q;
    for _ in 0..q {
        acc.add(roots.get(idx));
        idx += step;
        if idx >= q {
            idx -= q;
        }
        step += two_s;
        if step >= q {
            step -= q;
        }
    }
    acc.value()
}

/// Closed-form evaluation of `G(s, t; q)` for `gcd(s, q) = 1`, split by the
/// 2-adic valuation of `q`:
///
/// * `q` odd: `eps_q sqrt(q) (s/q) e(-(4s)^{-1} t^2 / q)`
/// * `q = 2v`, `v` odd: `2 delta_t eps_v sqrt(v) (2s/v) e(-(8s)^{-1} t^2 / v)`
/// * `4 | q`: `(1+i) eps_s^{-1} (1 - delta_t) sqrt(q) (q/s) e(-s^{-1} t^2 / 4q)`
pub fn gauss_closed(p: GaussParams) -> Result<ComplexValue> {
    let q = p.q;
    let s = reduce(p.s, q);
    if gcd(s, q) != 1 {
        return Err(Error::invalid(format!(
            "closed form needs gcd(s, q) = 1, got s = {}, q = {q}",
            p.s
        )));
    }
    if q == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let t_sq = |modulus: u64| {
        let t = reduce(p.t, modulus);
        mul_mod(t, t, modulus)
    };
    let neg_root = |idx: u64, modulus: u64| unit_root((modulus - idx % modulus) % modulus, modulus);

    if q % 2 == 1 {
        let inv = inverse_unchecked(mul_mod(4, s, q), q).expect("unit");
        let phase = neg_root(mul_mod(inv, t_sq(q), q), q);
        let sign = jacobi_unchecked(s, q) as f64;
        return Ok(epsilon_factor(q as i64)? * (q as f64).sqrt() * sign * phase);
    }
    if q % 4 == 2 {
        if delta_parity(p.t) == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = q / 2;
        if v == 1 {
            return Ok(Complex64::new(2.0, 0.0));
        }
        let sv = s % v;
        let inv = inverse_unchecked(mul_mod(8, sv, v), v).expect("unit");
        let phase = neg_root(mul_mod(inv, t_sq(v), v), v);
        let sign = jacobi_unchecked(mul_mod(2, sv, v), v) as f64;
        return Ok(2.0 * epsilon_factor(v as i64)? * (v as f64).sqrt() * sign * phase);
    }
    // 4 | q, so s is odd.
    if delta_parity(p.t) == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let four_q = 4 * q;
    let inv = inverse_unchecked(s, four_q).expect("unit");
    let phase = neg_root(mul_mod(inv, t_sq(four_q), four_q), four_q);
    let eps_inv = epsilon_factor(s as i64)?.inv();
    let sign = jacobi_unchecked(q % s, s) as f64;
    Ok(Complex64::new(1.0, 1.0) * eps_inv * (q as f64).sqrt() * sign * phase)
}

/// Parameters of `S_q(c)` for the target `N = 4N'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqParams {
    pub q: u64,
    pub c: [i64; 4],
    pub n: u64,
}

impl SqParams {
    pub fn new(q: u64, c: [i64; 4], n: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("q must be at least 1"));
        }
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { modulus: q });
        }
        if n == 0 || n % 4 != 0 {
            return Err(Error::invalid(format!("N must be a positive multiple of 4, got {n}")));
        }
        Ok(Self { q, c, n })
    }

    fn quad_form_c(&self) -> i128 {
        self.c.iter().map(|&x| x as i128 * x as i128).sum()
    }
}

/// `S_q(c)` from its defining double sum over `a in (Z/q)^*` and
/// `b in (Z/q)^4`, with `q` capped at [`DEFAULT_SQ_BRUTEFORCE_CAP`].
pub fn sq_bruteforce(p: SqParams) -> Result<ComplexValue> {
    sq_bruteforce_capped(p, DEFAULT_SQ_BRUTEFORCE_CAP)
}

/// [`sq_bruteforce`] with an explicit cap on `q`.
pub fn sq_bruteforce_capped(p: SqParams, cap: u64) -> Result<ComplexValue> {
    let q = p.q;
    if q > cap {
        return Err(Error::ResourceLimit(format!(
            "brute-force S_q(c) costs O(q^5); q = {q} exceeds the cap {cap}"
        )));
    }
    let roots = RootTable::new(q);
    let qs = q as usize;
    let n_mod = reduce(p.n as i64, q);
    let mut total = ComplexKahan::new();
    let mut g = vec![vec![0usize; qs]; 4];
    for a in 0..q {
        if gcd(a, q) != 1 {
            continue;
        }
        // phase(b) = a (F(b) - N) + b.c  =  shift + sum_i g_i(b_i)  (mod q)
        for (i, gi) in g.iter_mut().enumerate() {
            let ci = reduce(p.c[i], q);
            for (b, slot) in gi.iter_mut().enumerate() {
                let b = b as u64;
                *slot = ((mul_mod(a, mul_mod(b, b, q), q) + mul_mod(ci, b, q)) % q) as usize;
            }
        }
        let shift = ((q - mul_mod(a, n_mod, q)) % q) as usize;
        let mut inner_acc = ComplexKahan::new();
        for &g0 in &g[0] {
            let s1 = (shift + g0) % qs;
            for &g1 in &g[1] {
                let s2 = (s1 + g1) % qs;
                for &g2 in &g[2] {
                    let s3 = (s2 + g2) % qs;
                    let (mut re, mut im) = (0.0, 0.0);
                    for &g3 in &g[3] {
                        let mut idx = s3 + g3;
                        if idx >= qs {
                            idx -= qs;
                        }
                        re += roots.cos[idx];
                        im += roots.sin[idx];
                    }
                    inner_acc.add_parts(re, im);
                }
            }
        }
        total.add(inner_acc.value());
    }
    Ok(total.value())
}

/// `S_q(c)` through its reduction to a single Kloosterman sum:
///
/// * `q` odd: `q^2 S(N', F(c); q)`
/// * `q ≡ 2 mod 4`: `4 q^2 S(2N', F(c)/2; q)` when every `c_i` is odd, else 0
/// * `4 | q`: `-4 q^2 S(N, F(c'); q)` when `c = 2c'`, else 0
pub fn sq_reduced(p: SqParams) -> ComplexValue {
    let q = p.q;
    let n_prime = (p.n / 4) as i128;
    let f_c = p.quad_form_c();
    let q2 = (q as f64) * (q as f64);
    let red = |x: i128| x.rem_euclid(q as i128) as i64;
    let k = |m: i128, n: i128| kloosterman(KloostermanParams { m: red(m), n: red(n), c: q });

    if q % 2 == 1 {
        return q2 * k(n_prime, f_c);
    }
    if q % 4 == 2 {
        if p.c.iter().any(|&ci| delta_parity(ci) == 0) {
            return Complex64::new(0.0, 0.0);
        }
        return 4.0 * q2 * k(2 * n_prime, f_c / 2);
    }
    if p.c.iter().any(|&ci| delta_parity(ci) == 1) {
        return Complex64::new(0.0, 0.0);
    }
    let f_half: i128 = p.c.iter().map(|&x| (x as i128 / 2) * (x as i128 / 2)).sum();
    -4.0 * q2 * k(p.n as i128, f_half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{factorize, mod_inv};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn kloosterman_examples() {
        let k = |m, n, c| kloosterman(KloostermanParams::new(m, n, c).unwrap());
        assert!(close(k(1, 1, 1), Complex64::new(1.0, 0.0), 1e-15));
        // e(2/3) + e(4/3)
        let direct = unit_root(2, 3) + unit_root(1, 3);
        assert!(close(k(1, 1, 3), direct, 1e-15));
        assert!(close(k(1, 1, 3), Complex64::new(-1.0, 0.0), 1e-12));
        assert!(close(k(1, 1, 2), Complex64::new(1.0, 0.0), 1e-15));
        assert!(KloostermanParams::new(1, 1, 0).is_err());
    }

    #[test]
    fn kloosterman_realness_and_symmetry() {
        for c in 1..=300u64 {
            let plan = KloostermanPlan::new(c).unwrap();
            for m in -3..=3i64 {
                for n in -3..=3i64 {
                    let s = plan.eval(m, n);
                    assert!(s.im.abs() <= 1e-9 * c as f64, "imag part at c={c}");
                    let t = plan.eval(n, m);
                    assert!(close(s, t, 1e-9 * c as f64));
                }
            }
        }
    }

    #[test]
    fn twist_identity() {
        for q in 1..=200u64 {
            let plan = KloostermanPlan::new(q).unwrap();
            for t in (1..q.max(2)).filter(|&t| gcd(t, q) == 1).take(6) {
                for (a, b) in [(1i64, 2i64), (3, 5), (7, -4)] {
                    let lhs = plan.eval(a, t as i64 * b);
                    let rhs = plan.eval(t as i64 * a, b);
                    assert!(close(lhs, rhs, 1e-9 * q as f64), "q={q} t={t}");
                }
            }
        }
    }

    #[test]
    fn plan_matches_direct_bitwise() {
        for c in [1u64, 2, 7, 12, 97, 360] {
            let plan = KloostermanPlan::new(c).unwrap();
            let row = plan.row(-5, -7, 15);
            for (i, v) in row.iter().enumerate() {
                let n = -7 + i as i64;
                let direct = kloosterman(KloostermanParams { m: -5, n, c });
                assert_eq!(*v, direct);
                assert_eq!(plan.eval(-5, n), direct);
            }
        }
    }

    #[test]
    fn weil_bound_small() {
        for c in 1..=400u64 {
            let plan = KloostermanPlan::new(c).unwrap();
            for m in -6..=6 {
                let row = plan.row(m, -6, 13);
                for (i, s) in row.iter().enumerate() {
                    let n = -6 + i as i64;
                    assert!(s.norm() <= weil_bound(m, n, c) + 1e-9 * c as f64);
                }
            }
        }
    }

    #[test]
    fn fast_path_examples() {
        let fast = |m, n, c: u64| {
            kloosterman_fast(KloostermanParams::new(m, n, c).unwrap(), &factorize(c)).unwrap()
        };
        for (m, n, c) in [(1, 1, 15), (1, 1, 4), (1, 1, 1), (3, -2, 360), (0, 5, 98), (7, 7, 97)] {
            let direct = kloosterman(KloostermanParams::new(m, n, c).unwrap());
            assert!(close(fast(m, n, c), direct, 1e-8 * (c as f64).sqrt()));
        }
        // prime modulus: same code path, same bits
        let p = KloostermanParams::new(2, 3, 101).unwrap();
        assert_eq!(kloosterman_fast(p, &[(101, 1)]).unwrap(), kloosterman(p));
    }

    #[test]
    fn fast_path_rejects_bad_factorizations() {
        let p = KloostermanParams::new(1, 1, 12).unwrap();
        assert!(kloosterman_fast(p, &[(2, 2), (5, 1)]).is_err());
        assert!(kloosterman_fast(p, &[(4, 1), (3, 1)]).is_err());
        assert!(kloosterman_fast(p, &[(2, 1), (2, 1), (3, 1)]).is_err());
        assert!(kloosterman_fast(p, &[(2, 2), (3, 1)]).is_ok());
    }

    #[test]
    fn gauss_examples() {
        let g = |s, t, q| gauss_bruteforce(GaussParams::new(s, t, q).unwrap());
        let gc = |s, t, q| gauss_closed(GaussParams::new(s, t, q).unwrap()).unwrap();
        assert!(close(g(1, 0, 1), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(g(1, 0, 4), Complex64::new(2.0, 2.0), 1e-12));
        assert!(close(g(1, 1, 2), Complex64::new(2.0, 0.0), 1e-12));
        assert!(close(gc(1, 0, 5), Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        assert!(close(gc(1, 1, 2), Complex64::new(2.0, 0.0), 1e-12));
        assert!(close(gc(1, 0, 4), Complex64::new(2.0, 2.0), 1e-12));
        assert!(gauss_closed(GaussParams::new(2, 1, 4).unwrap()).is_err());
    }

    #[test]
    fn gauss_closed_matches_bruteforce() {
        for q in 1..=48u64 {
            let roots = RootTable::new(q);
            for s in (0..q as i64).filter(|&s| gcd(reduce(s, q), q) == 1) {
                for t in -2 * q as i64..=2 * q as i64 {
                    let brute = gauss_bruteforce_with(&roots, s, t);
                    let closed = gauss_closed(GaussParams { s, t, q }).unwrap();
                    assert!(close(brute, closed, 1e-9 * (q as f64).sqrt()), "q={q} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn gauss_negative_s() {
        for q in [5u64, 6, 8, 12, 21] {
            for s in [-1i64, -3, -7] {
                if gcd(reduce(s, q), q) != 1 {
                    continue;
                }
                for t in -4..4 {
                    let p = GaussParams { s, t, q };
                    assert!(close(gauss_bruteforce(p), gauss_closed(p).unwrap(), 1e-9));
                }
            }
        }
    }

    #[test]
    fn sq_examples() {
        let p = |q, c, n| SqParams::new(q, c, n).unwrap();
        assert!(close(sq_bruteforce(p(1, [3, -1, 2, 0], 4)).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
        assert!(close(sq_reduced(p(1, [3, -1, 2, 0], 4)), Complex64::new(1.0, 0.0), 1e-12));
        let e = p(3, [1, 0, 0, 0], 4);
        assert!(close(sq_bruteforce(e).unwrap(), Complex64::new(-9.0, 0.0), 1e-9));
        assert!(close(sq_reduced(e), Complex64::new(-9.0, 0.0), 1e-9));
        assert_eq!(sq_reduced(p(4, [1, 1, 1, 1], 4)), Complex64::new(0.0, 0.0));
        assert!(sq_bruteforce(p(4, [1, 1, 1, 1], 4)).unwrap().norm() < 1e-9);
        assert_eq!(sq_reduced(p(2, [2, 0, 0, 0], 4)), Complex64::new(0.0, 0.0));
        assert!(sq_bruteforce(p(2, [2, 0, 0, 0], 4)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn sq_q2_zero_vector_matches_direct_count() {
        // q = 2, a = 1: sum over b mod 2 of e_2(F(b) - 4) = sum (-1)^{F(b)}
        let direct: i64 = (0..16)
            .map(|bits: u32| if bits.count_ones() % 2 == 0 { 1 } else { -1 })
            .sum();
        let v = sq_bruteforce(SqParams::new(2, [0; 4], 4).unwrap()).unwrap();
        assert!(close(v, Complex64::new(direct as f64, 0.0), 1e-12));
    }

    #[test]
    fn sq_reduced_matches_bruteforce_small() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 21) as i64 - 10
        };
        for q in 1..=14u64 {
            for _ in 0..6 {
                let c = [next(), next(), next(), next()];
                for n in [4u64, 100, 400, 12] {
                    let p = SqParams::new(q, c, n).unwrap();
                    let b = sq_bruteforce(p).unwrap();
                    let r = sq_reduced(p);
                    assert!((b - r).norm() <= 1e-6 * b.norm().max(1.0), "q={q} c={c:?} N={n}");
                }
            }
            // force the even-vector and odd-vector branches
            for c in [[2, -4, 6, 0], [1, 3, -5, 7]] {
                let p = SqParams::new(q, c, 36).unwrap();
                let b = sq_bruteforce(p).unwrap();
                assert!((b - sq_reduced(p)).norm() <= 1e-6 * b.norm().max(1.0));
            }
        }
    }

    #[test]
    fn sq_bruteforce_cap() {
        let p = SqParams::new(61, [0; 4], 4).unwrap();
        assert!(matches!(sq_bruteforce(p), Err(Error::ResourceLimit(_))));
        assert!(SqParams::new(5, [0; 4], 6).is_err());
    }

    #[test]
    fn inverse_helper_consistent() {
        for c in 2..100u64 {
            for x in 0..c {
                let a = inverse_unchecked(x, c);
                let b = mod_inv(x as i64, c).ok();
                assert_eq!(a, b);
            }
        }
    }
}
