//! Cyclotomic factorization of `x^n ± 1` over `Z_p` and Hensel lifting of the
//! labeled factors to `Z_{p^k}`.
//!
//! Write `n = p^r n'` with `p ∤ n'`. Over `Z_p` the irreducible factors of
//! `x^{n'} - 1` are the `q_{d,l}`, `d | n'`, `l` running over coset
//! representatives of `<p>` in `(Z_d)^×`. Over `Z_{p^k}` each lifts uniquely
//! (level 0), and each radical sum `Σ_{i<p} x^{n' p^{b-1} i}` contributes one
//! further factor per label (level `b`), reducing to `q_{d,l}^{p^{b-1}(p-1)}`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{build_splitting_field, divmod_monic, ext_gcd_field, minimal_polynomial, Poly};
use crate::zring::{divisors, euler_phi, gcd, multiplicative_order, split_p_part, Modulus};

/// Integer coefficients of the `d`-th cyclotomic polynomial, ascending.
pub fn cyclotomic(d: u64) -> Vec<i64> {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in divisors(d) {
        if e == d {
            continue;
        }
        num = exact_div_int(&num, &cyclotomic(e));
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div_int(f: &[i64], g: &[i64]) -> Vec<i64> {
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], 1);
    let mut r = f.to_vec();
    let mut q = vec![0i64; f.len() - dg];
    for i in (dg..f.len()).rev() {
        let c = r[i];
        q[i - dg] = c;
        for (j, &gj) in g.iter().enumerate() {
            r[i - dg + j] -= c * gj;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "cyclotomic division is exact");
    q
}

/// Least representatives of the cosets of `<p>` in `(Z_d)^×`, ascending.
pub fn coset_reps(p: u64, d: u64) -> Result<Vec<u64>> {
    multiplicative_order(p, d)?;
    if d == 1 {
        return Ok(vec![1]);
    }
    let mut seen = vec![false; d as usize];
    let mut reps = Vec::new();
    for u in 1..d {
        if gcd(u, d) != 1 || seen[u as usize] {
            continue;
        }
        reps.push(u);
        let mut v = u;
        while !seen[v as usize] {
            seen[v as usize] = true;
            v = v * (p % d) % d;
        }
    }
    Ok(reps)
}

/// Label `(d, l, level)` of a factor, with its degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FactorLabel {
    pub d: u64,
    pub l: u64,
    pub level: u32,
    pub degree: usize,
}

/// A factor together with its label; `multiplicity` is 1 except in the
/// `k = 1` form of `x^n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFactor {
    pub label: FactorLabel,
    pub poly: Poly,
    pub multiplicity: u64,
}

/// `Λ(p, n')`: labels `(d, l)` indexing the factors of `x^{n'} + 1` mod `p`.
pub fn lambda_index(p: u64, n_prime: u64) -> Result<Vec<FactorLabel>> {
    multiplicative_order(p, n_prime)?;
    let ds: Vec<u64> = if p == 2 {
        divisors(n_prime)
    } else {
        divisors(2 * n_prime).into_iter().filter(|d| n_prime % d != 0).collect()
    };
    let mut out = Vec::new();
    for d in ds {
        let o = multiplicative_order(p, d)? as usize;
        for l in coset_reps(p, d)? {
            out.push(FactorLabel { d, l, level: 0, degree: o });
        }
    }
    Ok(out)
}

/// Memo of the base factors `q_{d,l}` over `Z_p`.
#[derive(Default)]
pub struct BaseFactors {
    cache: HashMap<(u64, u64), Vec<(u64, Poly)>>,
}

impl BaseFactors {
    pub fn new() -> Self {
        Self::default()
    }

    /// All `q_{d,l}` for `l ∈ Ξ(p, d)`, in coset-representative order.
    pub fn of(&mut self, p: u64, d: u64) -> Result<&[(u64, Poly)]> {
        if !self.cache.contains_key(&(p, d)) {
            let (eta, _) = build_splitting_field(p, d)?;
            let mut v = Vec::new();
            for l in coset_reps(p, d)? {
                v.push((l, minimal_polynomial(&eta.pow(l), p, d, l)?));
            }
            self.cache.insert((p, d), v);
        }
        Ok(&self.cache[&(p, d)])
    }

    pub fn get(&mut self, p: u64, d: u64, l: u64) -> Result<Poly> {
        self.of(p, d)?
            .iter()
            .find(|(ll, _)| *ll == l)
            .map(|(_, q)| q.clone())
            .ok_or_else(|| Error::InvalidParameter(format!("{l} is not a coset representative mod {d}")))
    }
}

/// `q_{d,l}` over `Z_p`.
pub fn base_factor(p: u64, d: u64, l: u64) -> Result<Poly> {
    BaseFactors::new().get(p, d, l)
}

/// Labeled factorization of `x^n - 1` over `Z_p`, `p ∤ n`.
pub fn factor_mod_p(n: u64, p: u64) -> Result<Vec<LabeledFactor>> {
    if gcd(n, p) != 1 {
        return Err(Error::NotCoprime { a: n, b: p });
    }
    let mut bf = BaseFactors::new();
    let mut out = Vec::new();
    for d in divisors(n) {
        let o = multiplicative_order(p, d)? as usize;
        for (l, q) in bf.of(p, d)? {
            out.push(LabeledFactor {
                label: FactorLabel { d, l: *l, level: 0, degree: o },
                poly: q.clone(),
                multiplicity: 1,
            });
        }
    }
    Ok(out)
}

/// Unique monic divisor of `target` (over `Z_{p^k}`) reducing to `q` mod `p`.
///
/// `q` need not be irreducible: any monic factor coprime to its cofactor mod
/// `p` lifts uniquely. Precision doubles each round; the cofactor and a Bézout
/// pair are carried along.
pub fn hensel_lift_factor(q: &Poly, p: u64, k: u32, target: &Poly) -> Result<Poly> {
    let mp = Modulus::prime_power(p, 1)?;
    let mk = Modulus::prime_power(p, k)?;
    if !q.is_monic() || q.modulus() != mp {
        return Err(Error::InvalidParameter("base factor must be monic over Z_p".into()));
    }
    if !target.is_monic() || target.modulus() != mk {
        return Err(Error::InvalidParameter("target must be monic over Z_{p^k}".into()));
    }
    let (cof, rem) = divmod_monic(&target.reduce_to(mp), q)?;
    if !rem.is_zero() {
        return Err(Error::InvalidParameter(format!("{q} does not divide the target mod {p}")));
    }
    let (g, s, t) = ext_gcd_field(&cof, q)?;
    if g.degree() != Some(0) {
        return Err(Error::NotSimpleFactor);
    }
    if k == 1 {
        return Ok(q.clone());
    }
    // invariant: target ≡ g·h and s·g + t·h ≡ 1 (mod p^e); h is the monic factor sought
    let (mut g, mut h, mut s, mut t) = (cof, q.clone(), s, t);
    let mut e = 1u32;
    while e < k {
        let e2 = (2 * e).min(k);
        let m2 = Modulus::prime_power(p, e2)?;
        let (gl, hl, sl, tl) = (g.lift_to(m2), h.lift_to(m2), s.lift_to(m2), t.lift_to(m2));
        let f = target.reduce_to(m2);
        let err = f.sub(&gl.mul(&hl));
        let (qq, r) = divmod_monic(&sl.mul(&err), &hl)?;
        let g_new = gl.add(&tl.mul(&err)).add(&qq.mul(&gl));
        let h_new = hl.add(&r);
        let b = sl.mul(&g_new).add(&tl.mul(&h_new)).sub(&Poly::one(m2));
        let (c, dd) = divmod_monic(&sl.mul(&b), &h_new)?;
        let s_new = sl.sub(&dd);
        let t_new = tl.sub(&tl.mul(&b)).sub(&c.mul(&g_new));
        g = g_new;
        h = h_new;
        s = s_new;
        t = t_new;
        e = e2;
    }
    debug_assert!(h.is_monic());
    match target.exact_div(&h)? {
        Some(_) => Ok(h),
        None => Err(Error::NotSimpleFactor),
    }
}

/// `Σ_{i<p} x^{m i}` over `modulus`.
pub fn radical_sum(p: u64, m: usize, modulus: Modulus) -> Poly {
    let mut c = vec![0u64; m * (p as usize - 1) + 1];
    for i in 0..p as usize {
        c[m * i] = 1;
    }
    Poly::new(c, modulus)
}

/// `q^{(k)}_{d,l,r}`: the factor of `Σ_{i<p} x^{d p^{r-1} i}` over `Z_{p^k}` reducing
/// to `q_{d,l}^{p^{r-1}(p-1)}`.
///
/// The radical sum for `d` divides the one for any `n'` with `d | n'`, `p ∤ n'/d`,
/// and the lift is unique, so this is the factor attached to every such `n'`.
pub fn lift_radical_factor(d: u64, l: u64, r: u32, p: u64, k: u32) -> Result<LabeledFactor> {
    lift_radical_with(&mut BaseFactors::new(), d, l, r, p, k)
}

fn lift_radical_with(bf: &mut BaseFactors, d: u64, l: u64, r: u32, p: u64, k: u32) -> Result<LabeledFactor> {
    if r == 0 {
        return Err(Error::InvalidParameter("radical level must be at least 1".into()));
    }
    let q = bf.get(p, d, l)?;
    let e = p.pow(r - 1) * (p - 1);
    let mk = Modulus::prime_power(p, k)?;
    let target = radical_sum(p, (d * p.pow(r - 1)) as usize, mk);
    let poly = hensel_lift_factor(&q.pow(e), p, k, &target)?;
    Ok(LabeledFactor {
        label: FactorLabel { d, l, level: r, degree: poly.degree().unwrap() },
        poly,
        multiplicity: 1,
    })
}

/// Level-0 lift `q^{(k)}_{d,l}`, the factor of `x^d - 1` reducing to `q_{d,l}`.
fn lift_level0_with(bf: &mut BaseFactors, d: u64, l: u64, p: u64, k: u32) -> Result<LabeledFactor> {
    let q = bf.get(p, d, l)?;
    let mk = Modulus::prime_power(p, k)?;
    let poly = hensel_lift_factor(&q, p, k, &Poly::x_pow_minus_one(d as usize, mk))?;
    Ok(LabeledFactor {
        label: FactorLabel { d, l, level: 0, degree: poly.degree().unwrap() },
        poly,
        multiplicity: 1,
    })
}

/// `q^{(k)}_λ` for `λ = (d, l)`.
pub fn lift_level0(d: u64, l: u64, p: u64, k: u32) -> Result<LabeledFactor> {
    lift_level0_with(&mut BaseFactors::new(), d, l, p, k)
}

/// Labeled factorization of `x^n - 1` over `Z_{p^k}`: `q^{(k)}_{d,l,b}` for
/// `d | n'`, `0 <= b <= r`.
pub fn factor_xn_minus1(p: u64, k: u32, n: u64) -> Result<Vec<LabeledFactor>> {
    let (r, n_prime) = split_p_part(n, p);
    let mut bf = BaseFactors::new();
    let mut out = Vec::new();
    for d in divisors(n_prime) {
        for l in coset_reps(p, d)? {
            out.push(lift_level0_with(&mut bf, d, l, p, k)?);
            for b in 1..=r {
                out.push(lift_radical_with(&mut bf, d, l, b, p, k)?);
            }
        }
    }
    out.sort_by_key(|f| f.label);
    Ok(out)
}

/// Labeled factorization of `Σ_{i<p} x^{n' p^{r-1} i}` (requires `p | n`).
pub fn factor_radical_sum(p: u64, k: u32, n: u64) -> Result<Vec<LabeledFactor>> {
    let (r, n_prime) = split_p_part(n, p);
    if r == 0 {
        return Err(Error::InvalidParameter(format!("{p} does not divide {n}")));
    }
    let mut bf = BaseFactors::new();
    let mut out = Vec::new();
    for d in divisors(n_prime) {
        for l in coset_reps(p, d)? {
            out.push(lift_radical_with(&mut bf, d, l, r, p, k)?);
        }
    }
    Ok(out)
}

/// The polynomial `Σ_{i<p} x^{n' p^{r-1} i}` for `n = p^r n'`, `r >= 1`.
pub fn radical_sum_for(p: u64, k: u32, n: u64) -> Result<Poly> {
    let (r, n_prime) = split_p_part(n, p);
    if r == 0 {
        return Err(Error::InvalidParameter(format!("{p} does not divide {n}")));
    }
    Ok(radical_sum(p, (n_prime * p.pow(r - 1)) as usize, Modulus::prime_power(p, k)?))
}

/// Labeled factorization of `x^n + 1` over `Z_{p^k}`.
///
/// * `k = 1`: `q_λ` with multiplicity `p^r`, `λ ∈ Λ(p, n')`.
/// * `p` odd, `k >= 2`: `q^{(k)}_{λ,b}` for `0 <= b <= r`.
/// * `p = 2`, `k >= 2`: one factor `q^{(k)}_{λ,r+1}` per `λ`.
pub fn factor_xn_plus1(p: u64, k: u32, n: u64) -> Result<Vec<LabeledFactor>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Modulus::prime_power(p, k)?;
    let (r, n_prime) = split_p_part(n, p);
    let mut bf = BaseFactors::new();
    let mut out = Vec::new();
    for lam in lambda_index(p, n_prime)? {
        let (d, l) = (lam.d, lam.l);
        if k == 1 {
            out.push(LabeledFactor { label: lam, poly: bf.get(p, d, l)?, multiplicity: p.pow(r) });
        } else if p == 2 {
            out.push(lift_radical_with(&mut bf, d, l, r + 1, p, k)?);
        } else {
            out.push(lift_level0_with(&mut bf, d, l, p, k)?);
            for b in 1..=r {
                out.push(lift_radical_with(&mut bf, d, l, b, p, k)?);
            }
        }
    }
    out.sort_by_key(|f| f.label);
    Ok(out)
}

/// Product of the factors, with multiplicities.
pub fn product(factors: &[LabeledFactor], modulus: Modulus) -> Poly {
    factors.iter().fold(Poly::one(modulus), |acc, f| acc.mul(&f.poly.pow(f.multiplicity)))
}

/// The factor of `x^n + 1` (all levels of one label multiplied together) that
/// serves as the CRT component attached to `λ`.
pub fn component_contexts(p: u64, k: u32, n: u64) -> Result<Vec<(FactorLabel, Poly)>> {
    let factors = factor_xn_plus1(p, k, n)?;
    let mk = Modulus::prime_power(p, k)?;
    let mut out: Vec<(FactorLabel, Poly)> = Vec::new();
    for f in factors {
        let power = f.poly.pow(f.multiplicity);
        match out.last_mut() {
            Some((lab, poly)) if lab.d == f.label.d && lab.l == f.label.l => {
                *poly = poly.mul(&power);
                lab.degree = poly.degree().unwrap();
            }
            _ => {
                let mut lab = f.label;
                lab.level = 0;
                lab.degree = power.degree().unwrap();
                out.push((lab, power.reduce_to(mk)));
            }
        }
    }
    Ok(out)
}

/// `(u, v)` with `u a + v b = 1` over `Z_{p^k}`, for `a`, `b` coprime mod `p`;
/// `deg u < deg b` when `b` is monic.
///
/// Built as in the chain-ring argument: a Bézout pair mod `p` gives
/// `s a + t b = 1 - p g`, and `h = Σ_i (p g)^i` inverts `1 - p g`.
pub fn bezout_certificate(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let m = a.modulus();
    let p = m.prime().ok_or_else(|| Error::InvalidModulus(format!("{} is not a prime power", m.value())))?;
    let k = m.exponent();
    let mp = Modulus::prime_power(p, 1)?;
    let (g, s, t) = ext_gcd_field(&a.reduce_to(mp), &b.reduce_to(mp))?;
    if g.degree() != Some(0) {
        return Err(Error::NotCoprime { a: 0, b: 0 });
    }
    let (s, t) = (s.lift_to(m), t.lift_to(m));
    let pg = Poly::one(m).sub(&s.mul(a).add(&t.mul(b)));
    let mut h = Poly::one(m);
    let mut term = Poly::one(m);
    for _ in 1..k {
        term = term.mul(&pg);
        h = h.add(&term);
    }
    let (mut u, mut v) = (h.mul(&s), h.mul(&t));
    if b.is_monic() && a.is_monic() {
        let (q, ur) = divmod_monic(&u, b)?;
        u = ur;
        v = v.add(&q.mul(a));
    }
    debug_assert!(u.mul(a).add(&v.mul(b)) == Poly::one(m));
    Ok((u, v))
}

/// Degree of `q_{d,l}`: `o(p, d)`.
pub fn base_degree(p: u64, d: u64) -> Result<u64> {
    multiplicative_order(p, d)
}

/// Number of labels in `Ξ(p, d)`.
pub fn coset_count(p: u64, d: u64) -> Result<u64> {
    Ok(euler_phi(d) / multiplicative_order(p, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn int_poly(c: &[i64], n: u64) -> Poly {
        Poly::from_i64(c, md(n))
    }

    /// Cyclotomic polynomials by the Möbius product, an independent route.
    fn cyclotomic_mobius(d: u64) -> Vec<i64> {
        fn mobius(n: u64) -> i64 {
            let f = crate::zring::factor(n);
            if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len() % 2 == 0 {
                1
            } else {
                -1
            }
        }
        // work with big modulus to recover integer coefficients
        let m = md(1 << 30);
        let mut num = Poly::one(m);
        let mut den = Poly::one(m);
        for e in divisors(d) {
            let f = Poly::x_pow_minus_one(e as usize, m);
            match mobius(d / e) {
                1 => num = num.mul(&f),
                -1 => den = den.mul(&f),
                _ => {}
            }
        }
        let q = num.exact_div(&den).unwrap().unwrap();
        let half = m.value() / 2;
        q.coeffs().iter().map(|&c| if c > half { c as i64 - m.value() as i64 } else { c as i64 }).collect()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        for d in 1..=60 {
            assert_eq!(cyclotomic(d), cyclotomic_mobius(d), "d = {d}");
            assert_eq!(cyclotomic(d).len() as u64 - 1, euler_phi(d));
        }
    }

    #[test]
    fn coset_examples() {
        assert_eq!(coset_reps(3, 8).unwrap(), vec![1, 5]);
        assert_eq!(coset_reps(5, 4).unwrap(), vec![1, 3]);
        assert_eq!(coset_reps(7, 1).unwrap(), vec![1]);
        assert!(matches!(coset_reps(3, 6), Err(Error::NotCoprime { .. })));
        for p in [2, 3, 5, 7] {
            for d in 1..=40 {
                if d % p == 0 {
                    continue;
                }
                assert_eq!(coset_reps(p, d).unwrap().len() as u64, coset_count(p, d).unwrap());
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let dl = |v: Vec<FactorLabel>| v.into_iter().map(|f| (f.d, f.l)).collect::<Vec<_>>();
        assert_eq!(dl(lambda_index(3, 4).unwrap()), vec![(8, 1), (8, 5)]);
        assert_eq!(dl(lambda_index(3, 1).unwrap()), vec![(2, 1)]);
        assert_eq!(dl(lambda_index(2, 1).unwrap()), vec![(1, 1)]);
    }

    #[test]
    fn factor_mod_p_examples() {
        let f = factor_mod_p(4, 3).unwrap();
        let labels: Vec<_> = f.iter().map(|f| (f.label.d, f.label.l)).collect();
        assert_eq!(labels, vec![(1, 1), (2, 1), (4, 1)]);
        assert_eq!(f[0].poly, int_poly(&[-1, 1], 3));
        assert_eq!(f[1].poly, int_poly(&[1, 1], 3));
        assert_eq!(f[2].poly, int_poly(&[1, 0, 1], 3));
        assert_eq!(factor_mod_p(2, 3).unwrap().len(), 2);

        let f8 = factor_mod_p(8, 3).unwrap();
        let q81 = f8.iter().find(|f| f.label.d == 8 && f.label.l == 1).unwrap();
        let q85 = f8.iter().find(|f| f.label.d == 8 && f.label.l == 5).unwrap();
        assert_eq!(q81.poly, int_poly(&[2, 1, 1], 3));
        assert_eq!(q85.poly, int_poly(&[2, 2, 1], 3));
        assert!(matches!(factor_mod_p(6, 3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn cyclotomic_splits_into_base_factors() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=30 {
                if d % p == 0 {
                    continue;
                }
                let mp = md(p);
                let psi = int_poly(&cyclotomic(d), p);
                let mut bf = BaseFactors::new();
                let prod = bf.of(p, d).unwrap().iter().fold(Poly::one(mp), |a, (_, q)| a.mul(q));
                assert_eq!(prod, psi, "p = {p}, d = {d}");
            }
        }
    }

    #[test]
    fn hensel_examples() {
        let q = int_poly(&[2, 1, 1], 3);
        let target = Poly::x_pow_minus_one(8, md(9));
        assert_eq!(hensel_lift_factor(&q, 3, 2, &target).unwrap(), int_poly(&[8, 4, 1], 9));
        let lin = int_poly(&[-2, 1], 5);
        assert_eq!(hensel_lift_factor(&lin, 5, 2, &Poly::x_pow_minus_one(4, md(25))).unwrap(), int_poly(&[-7, 1], 25));
        assert_eq!(hensel_lift_factor(&lin, 5, 1, &Poly::x_pow_minus_one(4, md(5))).unwrap(), lin);
        // (x+1)^2 divides x^2+1 mod 2: not simple once the cofactor shares it
        let x1 = int_poly(&[1, 1], 2);
        assert_eq!(hensel_lift_factor(&x1, 2, 2, &Poly::x_pow_plus_one(2, md(4))), Err(Error::NotSimpleFactor));
    }

    #[test]
    fn hensel_matches_exhaustive_search() {
        // (3,2,8): exactly one of the 81 monic lifts of x^2+x+2 divides x^8 - 1
        let m9 = md(9);
        let target = Poly::x_pow_minus_one(8, m9);
        let q = int_poly(&[2, 1, 1], 3);
        let mut hits = Vec::new();
        for c in crate::poly::monic_polys_lex(9, 2) {
            let cand = Poly::new(c, m9);
            if cand.reduce_to(md(3)) == q && target.exact_div(&cand).unwrap().is_some() {
                hits.push(cand);
            }
        }
        assert_eq!(hits, vec![int_poly(&[8, 4, 1], 9)]);
    }

    #[test]
    fn radical_examples() {
        let f = lift_radical_factor(1, 1, 1, 3, 2).unwrap();
        assert_eq!(f.poly, int_poly(&[1, 1, 1], 9));
        assert_eq!(lift_radical_factor(1, 1, 1, 2, 2).unwrap().poly, int_poly(&[1, 1], 4));
        assert_eq!(lift_radical_factor(1, 1, 2, 2, 2).unwrap().poly, int_poly(&[1, 0, 1], 4));
    }

    #[test]
    fn plus_one_examples() {
        let f = factor_xn_plus1(2, 2, 2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].poly, int_poly(&[1, 0, 1], 4));
        assert_eq!((f[0].label.d, f[0].label.l, f[0].label.level), (1, 1, 2));

        let f = factor_xn_plus1(3, 1, 2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].poly, int_poly(&[1, 0, 1], 3));
        assert_eq!(f[0].multiplicity, 1);
        assert_eq!((f[0].label.d, f[0].label.l), (4, 1));

        let f = factor_xn_plus1(5, 1, 2).unwrap();
        let polys: Vec<_> = f.iter().map(|f| f.poly.clone()).collect();
        assert_eq!(polys, vec![int_poly(&[-2, 1], 5), int_poly(&[-3, 1], 5)]);
    }

    #[test]
    fn product_identities() {
        for p in [2u64, 3, 5] {
            for k in 1..=3u32 {
                let mk = Modulus::prime_power(p, k).unwrap();
                for n in 1..=12u64 {
                    let f = factor_xn_plus1(p, k, n).unwrap();
                    assert_eq!(product(&f, mk), Poly::x_pow_plus_one(n as usize, mk), "+ {p} {k} {n}");
                    let f = factor_xn_minus1(p, k, n).unwrap();
                    assert_eq!(product(&f, mk), Poly::x_pow_minus_one(n as usize, mk), "- {p} {k} {n}");
                    if n % p == 0 {
                        let f = factor_radical_sum(p, k, n).unwrap();
                        assert_eq!(product(&f, mk), radical_sum_for(p, k, n).unwrap(), "rad {p} {k} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn reductions_match_labels() {
        for p in [2u64, 3, 5] {
            let mp = md(p);
            for k in 2..=3u32 {
                for n in 1..=12u64 {
                    for f in factor_xn_plus1(p, k, n).unwrap() {
                        let q = base_factor(p, f.label.d, f.label.l).unwrap();
                        let e = if f.label.level == 0 { 1 } else { p.pow(f.label.level - 1) * (p - 1) };
                        assert_eq!(f.poly.reduce_to(mp), q.pow(e));
                        assert!(f.poly.is_monic());
                    }
                }
            }
        }
    }

    #[test]
    fn distinct_labels_are_coprime() {
        for p in [2u64, 3, 5] {
            for k in 1..=3u32 {
                let mk = Modulus::prime_power(p, k).unwrap();
                for n in 2..=12u64 {
                    let comps = component_contexts(p, k, n).unwrap();
                    for i in 0..comps.len() {
                        for j in i + 1..comps.len() {
                            let (u, v) = bezout_certificate(&comps[i].1, &comps[j].1).unwrap();
                            assert_eq!(u.mul(&comps[i].1).add(&v.mul(&comps[j].1)), Poly::one(mk));
                        }
                    }
                }
            }
        }
    }

    fn has_monic_divisor(f: &Poly) -> bool {
        let deg = f.degree().unwrap();
        let p = f.modulus().value();
        (1..=deg / 2).any(|m| {
            crate::poly::monic_polys_lex(p, m)
                .any(|c| f.exact_div(&Poly::new(c, f.modulus())).unwrap().is_some())
        })
    }

    #[test]
    fn base_factors_irreducible() {
        for p in [2u64, 3, 5] {
            for n in 2..=12u64 {
                for f in factor_xn_plus1(p, 1, n).unwrap() {
                    if f.poly.degree().unwrap() <= 4 {
                        assert!(!has_monic_divisor(&f.poly), "{}", f.poly);
                    }
                }
            }
        }
    }
}
