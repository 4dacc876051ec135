//! Exact arithmetic in `Z_N`.
//!
//! Moduli are desk-scale (below `2^31`), so every product of two reduced
//! residues fits in a `u64`.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The modulus `N` of a residue ring, remembering `p` and `k` when `N = p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Modulus {
    value: u64,
    prime: Option<u64>,
    exponent: u32,
}

impl Modulus {
    pub fn prime_power(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("exponent must be at least 1".into()));
        }
        let mut value: u64 = 1;
        for _ in 0..k {
            value = value
                .checked_mul(p)
                .filter(|v| *v < MAX_MODULUS)
                .ok_or_else(|| Error::InvalidModulus(format!("{p}^{k} exceeds 2^31")))?;
        }
        Ok(Modulus { value, prime: Some(p), exponent: k })
    }

    /// Any `N >= 2`; recognises prime powers.
    pub fn new(n: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&n) {
            return Err(Error::InvalidModulus(format!("{n} is out of range")));
        }
        let f = factor(n);
        if f.len() == 1 {
            Ok(Modulus { value: n, prime: Some(f[0].0), exponent: f[0].1 })
        } else {
            Ok(Modulus { value: n, prime: None, exponent: 0 })
        }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `p` when `N = p^k`.
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    /// `k` when `N = p^k`, zero for composite moduli.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_prime_power(&self) -> bool {
        self.prime.is_some()
    }

    /// Prime factorisation of `N`.
    pub fn factorization(&self) -> Vec<(u64, u32)> {
        match self.prime {
            Some(p) => vec![(p, self.exponent)],
            None => factor(self.value),
        }
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.value
    }

    #[inline]
    pub fn reduce_signed(&self, a: i64) -> u64 {
        a.rem_euclid(self.value as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.value - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.value
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.value)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a % self.value, self.value) == 1
    }

    pub fn inverse(&self, a: u64) -> Result<u64> {
        let a = a % self.value;
        let (g, x, _) = xgcd(a as i128, self.value as i128);
        if g != 1 {
            return Err(Error::NotAUnit { value: a, modulus: self.value });
        }
        Ok(x.rem_euclid(self.value as i128) as u64)
    }

    /// A unit `u` with `u * a == gcd(a, N) (mod N)`.
    pub fn unit_normalizer(&self, a: u64) -> u64 {
        let n = self.value;
        let a = a % n;
        if a == 0 {
            return 1;
        }
        let g = gcd(a, n);
        let m = n / g;
        // (a/g) is a unit mod n/g; lift its inverse to a unit mod n.
        let base = if m == 1 {
            1
        } else {
            let (_, x, _) = xgcd((a / g % m) as i128, m as i128);
            x.rem_euclid(m as i128) as u64
        };
        let mut u = base;
        while gcd(u, n) != 1 {
            u += m;
        }
        u % n
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An element of `Z_N`, stored as its least non-negative representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueInt {
    value: u64,
    modulus: Modulus,
}

impl ResidueInt {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        ResidueInt { value: modulus.reduce_signed(value), modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.value, other.modulus.value));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ResidueInt { value: self.modulus.add(self.value, other.value), modulus: self.modulus })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ResidueInt { value: self.modulus.sub(self.value, other.value), modulus: self.modulus })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ResidueInt { value: self.modulus.mul(self.value, other.value), modulus: self.modulus })
    }

    pub fn pow(&self, e: u64) -> Self {
        ResidueInt { value: self.modulus.pow(self.value, e), modulus: self.modulus }
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Inverse of a unit of `Z_N`.
pub fn unit_inverse(a: &ResidueInt) -> Result<ResidueInt> {
    let value = a.modulus.inverse(a.value)?;
    Ok(ResidueInt { value, modulus: a.modulus })
}

/// A `p`-adic valuation; zero has valuation infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinity,
}

pub fn p_valuation(a: i64, p: u64) -> Valuation {
    if a == 0 {
        return Valuation::Infinity;
    }
    let mut a = a.unsigned_abs();
    let mut e = 0;
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Least `t >= 1` with `p^t == 1 (mod d)`.
pub fn multiplicative_order(p: u64, d: u64) -> Result<u64> {
    if d == 0 || gcd(p, d) != 1 {
        return Err(Error::NotCoprime { a: p, b: d });
    }
    if d == 1 {
        return Ok(1);
    }
    let base = p % d;
    let mut acc = base;
    let mut t = 1;
    while acc != 1 {
        acc = acc * base % d;
        t += 1;
    }
    Ok(t)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended Euclid: `(g, x, y)` with `a x + b y = g >= 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Splits `n = p^r * n'` with `p` not dividing `n'`.
pub fn split_p_part(n: u64, p: u64) -> (u32, u64) {
    let mut r = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (r, m)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
