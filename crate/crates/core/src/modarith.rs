//! Integer and modular arithmetic primitives.
//!
//! Moduli are `u64` bounded by [`MAX_MODULUS`] (2^40). Products are formed in
//! 128-bit width, so every operation here is exact for the supported range.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus accepted by the checked entry points.
pub const MAX_MODULUS: u64 = 1 << 40;

fn check_modulus(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    if m > MAX_MODULUS {
        return Err(Error::ModulusTooLarge { modulus: m });
    }
    Ok(())
}

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inverse(&self) -> Result<Self> {
        let value = mod_inv(self.value as i64, self.modulus)?;
        Ok(Self {
            value,
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self {
            value: pow_unchecked(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

/// Least non-negative residue of `x` modulo `m`.
#[inline]
pub fn reduce(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_unchecked(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// `base^exp mod m` by square-and-multiply.
pub fn mod_pow(base: i64, exp: u64, m: u64) -> Result<u64> {
    check_modulus(m)?;
    Ok(pow_unchecked(reduce(base, m), exp, m))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `x` modulo `m` by the extended Euclidean algorithm, or `None`
/// when `gcd(x, m) > 1`. For `m == 1` the only residue is 0.
#[inline]
pub(crate) fn inverse_unchecked(x: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (x as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Multiplicative inverse of `x` modulo `m`.
///
/// Returns [`Error::NotInvertible`] when `gcd(x, m) > 1`. Modulo 1 every
/// integer is congruent to 0, which is returned.
pub fn mod_inv(x: i64, m: u64) -> Result<u64> {
    check_modulus(m)?;
    inverse_unchecked(reduce(x, m), m).ok_or(Error::NotInvertible {
        value: x,
        modulus: m,
    })
}

/// Jacobi symbol `(s / q)` for odd positive `q`, via quadratic reciprocity.
pub fn jacobi_symbol(s: i64, q: u64) -> Result<i8> {
    if q == 0 || q % 2 == 0 {
        return Err(Error::invalid(format!(
            "Jacobi symbol needs an odd positive modulus, got {q}"
        )));
    }
    Ok(jacobi_unchecked(reduce(s, q), q))
}

pub(crate) fn jacobi_unchecked(a: u64, n: u64) -> i8 {
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Number of positive divisors of `n`.
///
/// # Panics
/// If `n == 0`.
pub fn divisor_tau(n: u64) -> u64 {
    assert!(n >= 1, "divisor_tau is defined for n >= 1");
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Parity indicator: 1 for odd `n`, 0 for even `n`.
#[inline]
pub fn delta_parity(n: i64) -> u8 {
    (n.rem_euclid(2)) as u8
}

/// The unit `1` for `n ≡ 1 mod 4` and `i` for `n ≡ 3 mod 4`.
pub fn epsilon_factor(n: i64) -> Result<Complex64> {
    match n.rem_euclid(4) {
        1 => Ok(Complex64::new(1.0, 0.0)),
        3 => Ok(Complex64::new(0.0, 1.0)),
        _ => Err(Error::invalid(format!(
            "epsilon factor is defined for odd n only, got {n}"
        ))),
    }
}

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Newton iteration from an upper bound; decreasing until it settles.
    let mut x = (n as f64).sqrt() as u64 + 1;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128) * ((x + 1) as u128) <= n as u128 {
        x += 1;
    }
    x
}

/// `Some(root)` when `n` is a perfect square.
#[inline]
pub fn perfect_square_root(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n > 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_pow_examples() {
        // repeated multiplication oracle
        let mut acc = 1u64;
        for _ in 0..10 {
            acc = acc * 2 % 1000;
        }
        assert_eq!(acc, 24);
        assert_eq!(mod_pow(2, 10, 1000).unwrap(), 24);
        assert_eq!(mod_pow(5, 0, 7).unwrap(), 1);
        assert_eq!(mod_pow(3, 1, 7).unwrap(), 3);
        assert_eq!(mod_pow(-1, 3, 7).unwrap(), 6);
    }

    #[test]
    fn mod_inv_examples() {
        let brute = (0..7).find(|y| 3 * y % 7 == 1).unwrap();
        assert_eq!(mod_inv(3, 7).unwrap(), brute);
        assert_eq!(brute, 5);
        for m in 2..50 {
            assert_eq!(mod_inv(1, m).unwrap(), 1);
        }
        assert_eq!(mod_inv(1, 1).unwrap(), 0);
        assert!(matches!(mod_inv(2, 4), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn rejects_oversized_modulus() {
        assert!(matches!(
            mod_pow(2, 3, MAX_MODULUS + 1),
            Err(Error::ModulusTooLarge { .. })
        ));
        assert!(mod_inv(2, MAX_MODULUS - 1).is_ok());
        assert!(mod_inv(3, 0).is_err());
    }

    #[test]
    fn mod_inv_large_modulus() {
        let m = MAX_MODULUS - 1;
        let x = 1_234_567_891i64;
        let y = mod_inv(x, m).unwrap();
        assert_eq!(mul_mod(x as u64, y, m), 1);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(2, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(2, 3).unwrap() * jacobi_symbol(2, 5).unwrap(), 1);
        for q in (1..60).step_by(2) {
            assert_eq!(jacobi_symbol(1, q).unwrap(), 1);
        }
        assert_eq!(jacobi_symbol(3, 9).unwrap(), 0);
        assert!(jacobi_symbol(3, 8).is_err());
        assert_eq!(jacobi_symbol(-1, 5).unwrap(), 1);
        assert_eq!(jacobi_symbol(-1, 7).unwrap(), -1);
    }

    #[test]
    fn jacobi_multiplicative_exhaustive() {
        for q in (1..=99u64).step_by(2) {
            for s1 in 0..q as i64 {
                for s2 in 0..q as i64 {
                    let lhs = jacobi_symbol(s1 * s2, q).unwrap();
                    let rhs = jacobi_symbol(s1, q).unwrap() * jacobi_symbol(s2, q).unwrap();
                    assert_eq!(lhs, rhs, "q={q} s1={s1} s2={s2}");
                }
            }
        }
    }

    #[test]
    fn jacobi_euler_criterion() {
        for q in primes_up_to(101).into_iter().filter(|&p| p > 2) {
            for s in 0..q as i64 {
                let e = mod_pow(s, (q - 1) / 2, q).unwrap();
                let expected = match e {
                    0 => 0,
                    1 => 1,
                    x if x == q - 1 => -1,
                    x => panic!("unexpected Euler value {x}"),
                };
                assert_eq!(jacobi_symbol(s, q).unwrap(), expected);
            }
        }
    }

    #[test]
    fn tau_examples() {
        let brute = (1..=12).filter(|d| 12 % d == 0).count() as u64;
        assert_eq!(divisor_tau(12), brute);
        assert_eq!(divisor_tau(12), 6);
        assert_eq!(divisor_tau(1), 1);
        for p in primes_up_to(200) {
            assert_eq!(divisor_tau(p), 2);
        }
        for n in 1..500u64 {
            assert_eq!(divisor_tau(n), (1..=n).filter(|d| n % d == 0).count() as u64);
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_factor(5).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(epsilon_factor(3).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(epsilon_factor(1).unwrap(), Complex64::new(1.0, 0.0));
        assert!(epsilon_factor(4).is_err());
        assert_eq!(delta_parity(7), 1);
        assert_eq!(delta_parity(-3), 1);
        assert_eq!(delta_parity(0), 0);
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..100_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        for &n in &[u64::MAX, u64::MAX - 1, (1u64 << 62) + 12345, 999_999_999_999_999_999] {
            let r = isqrt(n) as u128;
            assert!(r * r <= n as u128 && (r + 1) * (r + 1) > n as u128);
        }
        assert_eq!(perfect_square_root(49), Some(7));
        assert_eq!(perfect_square_root(50), None);
    }

    #[test]
    fn factorize_roundtrip() {
        for n in 1..2000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn residue_ops() {
        let a = Residue::new(-3, 7).unwrap();
        assert_eq!(a.value(), 4);
        assert_eq!((a * a.inverse().unwrap()).value(), 1);
        assert_eq!((a + Residue::new(3, 7).unwrap()).value(), 0);
        assert_eq!(a.pow(3).value(), 64 % 7);
    }
}
