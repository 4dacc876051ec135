//! Dense univariate polynomials over `Z_N` and small finite fields `F_{p^m}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::zring::{factor, multiplicative_order, Modulus};

/// A polynomial over `Z_N`, coefficients ascending by degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<u64>,
    modulus: Modulus,
}

impl Poly {
    pub fn new(coeffs: Vec<u64>, modulus: Modulus) -> Self {
        let mut p = Poly {
            coeffs: coeffs.into_iter().map(|c| modulus.reduce(c)).collect(),
            modulus,
        };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64], modulus: Modulus) -> Self {
        Poly::new(coeffs.iter().map(|&c| modulus.reduce_signed(c)).collect(), modulus)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Poly { coeffs: Vec::new(), modulus }
    }

    pub fn constant(c: u64, modulus: Modulus) -> Self {
        Poly::new(vec![c], modulus)
    }

    pub fn one(modulus: Modulus) -> Self {
        Poly::constant(1, modulus)
    }

    /// `c * x^e`.
    pub fn monomial(c: u64, e: usize, modulus: Modulus) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Poly::new(coeffs, modulus)
    }

    /// `x - a`.
    pub fn linear(a: u64, modulus: Modulus) -> Self {
        Poly::new(vec![modulus.neg(modulus.reduce(a)), 1], modulus)
    }

    /// `x^n + 1`.
    pub fn x_pow_plus_one(n: usize, modulus: Modulus) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = 1;
        c[n] = modulus.add(c[n], 1);
        Poly::new(c, modulus)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize, modulus: Modulus) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = modulus.neg(1);
        c[n] = modulus.add(c[n], 1);
        Poly::new(c, modulus)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficients padded with zeros to `len` entries.
    pub fn to_vec(&self, len: usize) -> Vec<u64> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| m.add(self.coeff(i), other.coeff(i))).collect(), m)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| m.sub(self.coeff(i), other.coeff(i))).collect(), m)
    }

    pub fn neg(&self) -> Poly {
        let m = self.modulus;
        Poly::new(self.coeffs.iter().map(|&c| m.neg(c)).collect(), m)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let m = self.modulus;
        Poly::new(self.coeffs.iter().map(|&a| m.mul(a, c)).collect(), m)
    }

    /// Multiplication by `x^e`.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; e];
        c.extend_from_slice(&self.coeffs);
        Poly { coeffs: c, modulus: self.modulus }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.modulus, other.modulus);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.modulus);
        }
        let n = self.modulus.value();
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a * b % n) % n;
            }
        }
        Poly::new(acc, self.modulus)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e mod g` for `g` with unit leading coefficient.
    pub fn pow_mod(&self, mut e: u64, g: &Poly) -> Result<Poly> {
        let mut base = self.rem(g)?;
        let mut acc = Poly::one(self.modulus).rem(g)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(g)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(g)?;
            }
        }
        Ok(acc)
    }

    /// Division with remainder by a polynomial whose leading coefficient is a unit.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        divmod_monic(self, g)
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(divmod_monic(self, g)?.1)
    }

    /// Exact quotient, or `None` when `g` does not divide `self`.
    pub fn exact_div(&self, g: &Poly) -> Result<Option<Poly>> {
        let (q, r) = divmod_monic(self, g)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn eval(&self, a: u64) -> u64 {
        let m = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, a), c))
    }

    /// Reinterprets the coefficients modulo a divisor of `N`.
    pub fn reduce_to(&self, target: Modulus) -> Poly {
        debug_assert_eq!(self.modulus.value() % target.value(), 0);
        Poly::new(self.coeffs.clone(), target)
    }

    /// Embeds least non-negative representatives into a larger ring.
    pub fn lift_to(&self, target: Modulus) -> Poly {
        Poly::new(self.coeffs.clone(), target)
    }

    /// Monic gcd over a prime field.
    pub fn gcd_field(&self, other: &Poly) -> Result<Poly> {
        Ok(ext_gcd_field(self, other)?.0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `f = q g + r` with `deg r < deg g`, exact over `Z_N`.
pub fn divmod_monic(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    let m = f.modulus;
    debug_assert_eq!(m, g.modulus);
    let dg = g.degree().ok_or(Error::NonUnitLeading(0))?;
    let inv = m.inverse(g.leading()).map_err(|_| Error::NonUnitLeading(g.leading()))?;
    let mut r = f.coeffs.clone();
    if r.len() <= dg {
        return Ok((Poly::zero(m), f.clone()));
    }
    let mut q = vec![0u64; r.len() - dg];
    for i in (dg..r.len()).rev() {
        let c = m.mul(r[i], inv);
        if c == 0 {
            continue;
        }
        q[i - dg] = c;
        for (j, &gj) in g.coeffs.iter().enumerate() {
            let idx = i - dg + j;
            r[idx] = m.sub(r[idx], m.mul(c, gj));
        }
    }
    r.truncate(dg);
    Ok((Poly::new(q, m), Poly::new(r, m)))
}

/// Extended Euclid over a prime field: `(g, s, t)` with `s a + t b = g`, `g` monic
/// (or zero when both inputs are zero).
pub fn ext_gcd_field(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let m = a.modulus;
    if m.exponent() != 1 {
        return Err(Error::InvalidModulus(format!("{} is not a prime", m.value())));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(m), Poly::zero(m));
    let (mut t0, mut t1) = (Poly::zero(m), Poly::one(m));
    while !r1.is_zero() {
        let (q, r) = divmod_monic(&r0, &r1)?;
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let inv = m.inverse(r0.leading())?;
    Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
}

/// Irreducibility over `Z_p` by Rabin's test.
pub fn is_irreducible_mod_p(f: &Poly) -> Result<bool> {
    let m = f.modulus();
    let p = m.value();
    let deg = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d as u64,
    };
    let x = Poly::monomial(1, 1, m);
    // x^(p^deg) == x (mod f)
    let mut power = x.clone();
    let mut frob = Vec::with_capacity(deg as usize + 1);
    frob.push(power.clone());
    for _ in 0..deg {
        power = power.pow_mod(p, f)?;
        frob.push(power.clone());
    }
    if frob[deg as usize] != x.rem(f)? {
        return Ok(false);
    }
    for (q, _) in factor(deg) {
        let h = frob[(deg / q) as usize].sub(&x);
        let g = f.gcd_field(&h)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic polynomials of degree `m` over `Z_p` in lexicographic order, comparing
/// the constant term first.
pub fn monic_polys_lex(p: u64, m: usize) -> impl Iterator<Item = Vec<u64>> {
    monic_polys_lex_from(p, m, 0)
}

/// As [`monic_polys_lex`], starting at position `start` of the order.
pub fn monic_polys_lex_from(p: u64, m: usize, start: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(m as u32);
    (start..total).map(move |idx| {
        let mut c = vec![0u64; m + 1];
        let mut rest = idx;
        for i in (0..m).rev() {
            c[i] = rest % p;
            rest /= p;
        }
        c[m] = 1;
        c
    })
}

/// Lexicographically least monic irreducible polynomial of degree `m` over `Z_p`.
pub fn least_irreducible(p: u64, m: usize) -> Result<Poly> {
    let md = Modulus::prime_power(p, 1)?;
    // for m > 1 every candidate with zero constant term is divisible by x
    let start = if m > 1 { p.pow(m as u32 - 1) } else { 0 };
    for c in monic_polys_lex_from(p, m, start) {
        let f = Poly::new(c, md);
        if is_irreducible_mod_p(&f)? {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element of `F_p[y]/(field_modulus)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    rep: Poly,
    field_modulus: Poly,
}

impl FieldElement {
    pub fn new(rep: Poly, field_modulus: &Poly) -> Result<Self> {
        let rep = rep.rem(field_modulus)?;
        Ok(FieldElement { rep, field_modulus: field_modulus.clone() })
    }

    pub fn from_base(c: u64, field_modulus: &Poly) -> Self {
        FieldElement { rep: Poly::constant(c, field_modulus.modulus()), field_modulus: field_modulus.clone() }
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn field_modulus(&self) -> &Poly {
        &self.field_modulus
    }

    pub fn is_one(&self) -> bool {
        self.rep.coeffs() == [1]
    }

    /// The value in `Z_p` when the element lies in the prime subfield.
    pub fn as_base(&self) -> Option<u64> {
        match self.rep.degree() {
            None => Some(0),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FieldElement { rep: self.rep.add(&other.rep), field_modulus: self.field_modulus.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FieldElement { rep: self.rep.sub(&other.rep), field_modulus: self.field_modulus.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rep = self.rep.mul(&other.rep).rem(&self.field_modulus).expect("field modulus is monic");
        FieldElement { rep, field_modulus: self.field_modulus.clone() }
    }

    pub fn pow(&self, e: u64) -> Self {
        let rep = self.rep.pow_mod(e, &self.field_modulus).expect("field modulus is monic");
        FieldElement { rep, field_modulus: self.field_modulus.clone() }
    }

    /// Coefficients of the representative, constant term first.
    pub fn lex_key(&self, m: usize) -> Vec<u64> {
        self.rep.to_vec(m)
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(&self) -> Option<u64> {
        if self.rep.is_zero() {
            return None;
        }
        let p = self.rep.modulus().value();
        let m = self.field_modulus.degree().unwrap() as u32;
        let mut ord = p.pow(m) - 1;
        for (q, _) in factor(ord) {
            while ord % q == 0 && self.pow(ord / q).is_one() {
                ord /= q;
            }
        }
        Some(ord)
    }
}

/// Primitive `d`-th root of unity in `F_{p^{o(p,d)}}`, chosen as the least
/// element of order `d`, together with the field modulus.
///
/// The elements of order `d` are the powers `b^j`, `gcd(j, d) = 1`, of any one
/// of them, so only that orbit is compared.
pub fn build_splitting_field(p: u64, d: u64) -> Result<(FieldElement, Poly)> {
    let m = multiplicative_order(p, d)? as usize;
    let field_modulus = least_irreducible(p, m)?;
    let md = field_modulus.modulus();
    let cofactor = (p.pow(m as u32) - 1) / d;
    let prime_divisors: Vec<u64> = factor(d).into_iter().map(|(q, _)| q).collect();
    let has_order_d = |e: &FieldElement| {
        e.pow(d).is_one() && prime_divisors.iter().all(|&q| !e.pow(d / q).is_one())
    };
    for c in monic_polys_lex_from(p, m, 1) {
        let rep = Poly::new(c[..m].to_vec(), md);
        let b = FieldElement::new(rep, &field_modulus)?.pow(cofactor);
        if !has_order_d(&b) {
            continue;
        }
        let least = (1..=d)
            .filter(|&j| crate::zring::gcd(j, d) == 1)
            .map(|j| b.pow(j))
            .min_by(|x, y| x.lex_key(m).cmp(&y.lex_key(m)))
            .expect("d >= 1");
        return Ok((least, field_modulus));
    }
    unreachable!("the multiplicative group of F_(p^m) is cyclic of order divisible by d")
}

/// `q_{d,l}(x) = prod_j (x - eta^(p^j))` for `eta = eta_d^l`, as a polynomial over `Z_p`.
pub fn minimal_polynomial(eta_power: &FieldElement, p: u64, d: u64, _l: u64) -> Result<Poly> {
    let deg = multiplicative_order(p, d)? as usize;
    let fm = eta_power.field_modulus();
    // coefficients in F, ascending
    let mut prod: Vec<FieldElement> = vec![FieldElement::from_base(1, fm)];
    let mut root = eta_power.clone();
    for _ in 0..deg {
        let neg_root = FieldElement::from_base(0, fm).sub(&root);
        let mut next = vec![FieldElement::from_base(0, fm); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].add(&c.mul(&neg_root));
        }
        prod = next;
        root = root.pow(p);
    }
    let base = Modulus::prime_power(p, 1)?;
    let coeffs = prod.iter().map(|c| c.as_base().ok_or(Error::NotInBaseField)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs, base))
}
