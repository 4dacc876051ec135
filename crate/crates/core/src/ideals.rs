//! Ideals of `Z_N[x]` containing a fixed monic polynomial `C`, stored as
//! submodules of `Z_N[x]/(C) ≅ Z_N^m` in Howell form.
//!
//! A row's pivot is its highest nonzero degree. Rows are kept with strictly
//! decreasing pivots, each pivot entry a divisor of `N`, and every entry sitting
//! in another row's pivot column reduced below that pivot. With the annihilator
//! rows folded in (Howell's condition), reduction against the rows decides
//! membership and produces a unique representative of each residue class, so
//! two ideals are equal exactly when their rows are.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{AdmissibilityClause, Error, Result};
use crate::factorlift::{bezout_certificate, component_contexts, factor_xn_plus1, FactorLabel, BaseFactors};
use crate::poly::Poly;
use crate::zring::{lcm, split_p_part, xgcd, Modulus};

/// Residue rings larger than this are not enumerated element by element.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

fn lead(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn axpy(m: Modulus, y: &mut [u64], a: u64, x: &[u64]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = m.add(*yi, m.mul(a, xi));
    }
}

fn scaled(m: Modulus, a: u64, x: &[u64]) -> Vec<u64> {
    x.iter().map(|&c| m.mul(a, c)).collect()
}

/// Howell form of the `Z_N`-module spanned by `rows` (all of length `width`).
pub fn howell_form(rows: Vec<Vec<u64>>, m: Modulus) -> Vec<Vec<u64>> {
    let n = m.value();
    let mut work: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|c| c % n).collect::<Vec<_>>())
        .filter(|r| lead(r).is_some())
        .collect();
    let width = work.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<u64>> = Vec::new();
    for c in (0..width).rev() {
        let (mut bucket, rest): (Vec<_>, Vec<_>) = work.into_iter().partition(|r| lead(r) == Some(c));
        work = rest;
        let Some(mut piv) = bucket.pop() else { continue };
        for b in bucket {
            let (alpha, beta) = (piv[c] as i128, b[c] as i128);
            let (g, x, y) = xgcd(alpha, beta);
            let (x, y) = (x.rem_euclid(n as i128) as u64, y.rem_euclid(n as i128) as u64);
            let (bg, ag) = ((beta / g) as u64 % n, (alpha / g) as u64 % n);
            let mut new_piv = scaled(m, x, &piv);
            axpy(m, &mut new_piv, y, &b);
            let mut rest_row = scaled(m, bg, &piv);
            axpy(m, &mut rest_row, m.neg(ag), &b);
            piv = new_piv;
            if lead(&rest_row).is_some() {
                work.push(rest_row);
            }
        }
        let u = m.unit_normalizer(piv[c]);
        piv = scaled(m, u, &piv);
        let g = piv[c];
        let ann = scaled(m, n / g, &piv);
        if lead(&ann).is_some() {
            work.push(ann);
        }
        out.push(piv);
    }
    // clear entries above each pivot
    for j in 0..out.len() {
        let c = lead(&out[j]).unwrap();
        let g = out[j][c];
        let (head, tail) = out.split_at_mut(j);
        for row in head.iter_mut() {
            let q = row[c] / g;
            if q != 0 {
                axpy(m, row, m.neg(q % n), &tail[0]);
            }
        }
    }
    out
}

/// Normal form of `v` against rows in Howell form.
pub fn reduce_against(rows: &[Vec<u64>], m: Modulus, v: &mut [u64]) {
    for row in rows {
        let c = lead(row).unwrap();
        let q = v[c] / row[c];
        if q != 0 {
            axpy(m, v, m.neg(q), row);
        }
    }
}

/// Multiplication by `x` on coefficient vectors modulo the monic `context`.
pub fn shift_mod(v: &[u64], context: &Poly) -> Vec<u64> {
    let m = context.modulus();
    let w = v.len();
    let top = v[w - 1];
    let mut out = vec![0u64; w];
    out[1..w].copy_from_slice(&v[..w - 1]);
    if top != 0 {
        for (i, o) in out.iter_mut().enumerate() {
            *o = m.sub(*o, m.mul(top, context.coeff(i)));
        }
    }
    out
}

/// An ideal of `Z_N[x]` containing the monic `context`.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    modulus: Modulus,
    context: Poly,
    rows: Vec<Vec<u64>>,
    generators: Vec<Poly>,
}

impl PartialEq for IdealPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.context == other.context && self.rows == other.rows
    }
}

impl Eq for IdealPresentation {}

impl Hash for IdealPresentation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.context.hash(state);
        self.rows.hash(state);
    }
}

impl IdealPresentation {
    /// The ideal `(generators) + (context)`.
    pub fn canonical_form(generators: &[Poly], context: &Poly) -> Result<Self> {
        let modulus = context.modulus();
        if !context.is_monic() || context.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidParameter("context polynomial must be monic of positive degree".into()));
        }
        let w = context.degree().unwrap();
        let mut rows = Vec::with_capacity(generators.len() * w);
        for g in generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(g.modulus().value(), modulus.value()));
            }
            let mut v = g.rem(context)?.to_vec(w);
            for _ in 0..w {
                rows.push(v.clone());
                v = shift_mod(&v, context);
            }
        }
        Ok(IdealPresentation {
            modulus,
            context: context.clone(),
            rows: howell_form_padded(rows, modulus, w),
            generators: generators.to_vec(),
        })
    }

    /// Zero ideal of `Z_N[x]/(context)`, i.e. `(context)`.
    pub fn zero(context: &Poly) -> Result<Self> {
        Self::canonical_form(&[], context)
    }

    /// Ideal spanned (as a module) by `rows`, which must already be shift-closed.
    fn from_closed_rows(rows: Vec<Vec<u64>>, context: &Poly, generators: Vec<Poly>) -> Self {
        let modulus = context.modulus();
        let w = context.degree().unwrap();
        IdealPresentation { modulus, context: context.clone(), rows: howell_form_padded(rows, modulus, w), generators }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn context(&self) -> &Poly {
        &self.context
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// `deg context`, the length of every row.
    pub fn width(&self) -> usize {
        self.context.degree().unwrap()
    }

    pub fn row_polys(&self) -> Vec<Poly> {
        self.rows.iter().map(|r| Poly::new(r.clone(), self.modulus)).collect()
    }

    /// `(pivot column, pivot entry)` per row.
    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.rows.iter().map(|r| {
            let c = lead(r).unwrap();
            (c, r[c])
        }).collect()
    }

    pub fn to_vec(&self, f: &Poly) -> Result<Vec<u64>> {
        if f.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(f.modulus().value(), self.modulus.value()));
        }
        Ok(f.rem(&self.context)?.to_vec(self.width()))
    }

    /// Unique representative of `v + Q`.
    pub fn normal_form_vec(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        reduce_against(&self.rows, self.modulus, &mut v);
        v
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        Ok(Poly::new(self.normal_form_vec(&self.to_vec(f)?), self.modulus))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.contains_vec(&self.to_vec(f)?))
    }

    pub fn contains_vec(&self, v: &[u64]) -> bool {
        self.normal_form_vec(v).iter().all(|&c| c == 0)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains_vec(&Poly::one(self.modulus).to_vec(self.width()))
    }

    /// `|Z_N[x]/Q|`, if it fits in a `u128`.
    pub fn quotient_order(&self) -> Option<u128> {
        let n = self.modulus.value() as u128;
        let mut pivot_at = vec![None; self.width()];
        for (c, g) in self.pivots() {
            pivot_at[c] = Some(g as u128);
        }
        pivot_at.into_iter().try_fold(1u128, |acc, g| acc.checked_mul(g.unwrap_or(n)))
    }

    /// `Q + (extra)`.
    pub fn add_generators(&self, extra: &[Poly]) -> Result<Self> {
        let mut gens = self.row_polys();
        gens.extend_from_slice(extra);
        let mut out = Self::canonical_form(&gens, &self.context)?;
        out.generators = self.generators.iter().chain(extra).cloned().collect();
        Ok(out)
    }

    /// `Q + R`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(Self::from_closed_rows(rows, &self.context, gens))
    }

    /// `Q · (extra)`, the product with the ideal generated by `extra`.
    pub fn product_with(&self, extra: &[Poly]) -> Result<Self> {
        let mut gens = Vec::new();
        for r in self.row_polys() {
            for e in extra {
                gens.push(r.mul(e));
            }
        }
        Self::canonical_form(&gens, &self.context)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.value(), other.modulus.value()));
        }
        if self.context != other.context {
            return Err(Error::InvalidParameter("ideals live in different quotient rings".into()));
        }
        Ok(())
    }

    /// Same ideal of `Z_N[x]` viewed modulo another monic polynomial it contains.
    pub fn with_context(&self, context: &Poly) -> Result<Self> {
        let mut gens = self.row_polys();
        gens.push(self.context.clone());
        let out = Self::canonical_form(&gens, context)?;
        if !out.contains(&self.context)? || !self.contains(context)? {
            return Err(Error::InvalidParameter("new context does not lie in the ideal".into()));
        }
        Ok(IdealPresentation { generators: self.generators.clone(), ..out })
    }

    /// Every normal form, i.e. one representative per residue class.
    pub fn residues(&self) -> Result<Vec<Vec<u64>>> {
        let order = self.quotient_order().filter(|&o| o <= EXHAUSTIVE_LIMIT).ok_or_else(|| {
            Error::TooLarge(format!("quotient of Z_{}[x]/({}) exceeds 2^16 elements", self.modulus, self.context))
        })?;
        let n = self.modulus.value();
        let mut range = vec![n; self.width()];
        for (c, g) in self.pivots() {
            range[c] = g;
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0u64; self.width()];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return Ok(out);
                }
                cur[i] += 1;
                if cur[i] < range[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.row_polys().iter().map(|r| r.to_string()).collect();
        write!(f, "({}) in Z_{}[x]/({})", rows.join(", "), self.modulus, self.context)
    }
}

fn howell_form_padded(rows: Vec<Vec<u64>>, m: Modulus, w: usize) -> Vec<Vec<u64>> {
    debug_assert!(rows.iter().all(|r| r.len() == w));
    howell_form(rows, m)
}

/// Which clause of admissibility `Q ∈ I(N, n)` fails, if any. Clauses are
/// tried in the order (i), (iii), (ii).
pub fn admissibility(q: &IdealPresentation, n: u64) -> Result<Option<AdmissibilityClause>> {
    let md = q.modulus();
    if !q.contains(&Poly::x_pow_plus_one(n as usize, md))? {
        return Ok(Some(AdmissibilityClause::ContainsTarget));
    }
    // a nonzero constant usually drags x^m + 1 in with it; report the root cause
    if has_nonzero_constant(q)? {
        return Ok(Some(AdmissibilityClause::NonzeroConstant));
    }
    for m in 1..n {
        if q.contains(&Poly::x_pow_plus_one(m as usize, md))? {
            return Ok(Some(AdmissibilityClause::SmallerExponent(m)));
        }
    }
    Ok(None)
}

/// Whether `Q ∈ I(N, n)`.
pub fn is_admissible(q: &IdealPresentation, n: u64) -> Result<bool> {
    Ok(admissibility(q, n)?.is_none())
}

/// Some nonzero constant lies in `Q` iff `N/ℓ` does for a prime `ℓ | N`.
pub fn has_nonzero_constant(q: &IdealPresentation) -> Result<bool> {
    let md = q.modulus();
    for (l, _) in md.factorization() {
        if q.contains(&Poly::constant(md.value() / l, md))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Clauses for the type II standard form over `Z_2`: `x^n + 1 ∈ Q`,
/// `x^m + 1 ∉ Q` for proper divisors `m` of `n`, and `Q` proper.
pub fn admissibility_type2(q: &IdealPresentation, n: u64) -> Result<Option<AdmissibilityClause>> {
    let md = q.modulus();
    if md.value() != 2 {
        return Err(Error::InvalidParameter("type II standard forms live over Z_2".into()));
    }
    if !q.contains(&Poly::x_pow_plus_one(n as usize, md))? {
        return Ok(Some(AdmissibilityClause::ContainsTarget));
    }
    for m in crate::zring::divisors(n) {
        if m < n && q.contains(&Poly::x_pow_plus_one(m as usize, md))? {
            return Ok(Some(AdmissibilityClause::SmallerExponent(m)));
        }
    }
    if q.is_unit_ideal() {
        return Ok(Some(AdmissibilityClause::NonzeroConstant));
    }
    Ok(None)
}

/// The decomposition `Z_{p^k}[x]/(x^n+1) ≅ ∏_λ Z_{p^k}[x]/(C_λ)`.
#[derive(Clone, Debug)]
pub struct CrtSplit {
    modulus: Modulus,
    context: Poly,
    components: Vec<(FactorLabel, Poly)>,
    idempotents: Vec<Poly>,
}

impl CrtSplit {
    pub fn new(p: u64, k: u32, n: u64) -> Result<Self> {
        let modulus = Modulus::prime_power(p, k)?;
        let context = Poly::x_pow_plus_one(n as usize, modulus);
        let components = component_contexts(p, k, n)?;
        let mut idempotents = Vec::with_capacity(components.len());
        for (_, c) in &components {
            let cof = context.exact_div(c)?.expect("component divides x^n + 1");
            let (_, v) = bezout_certificate(c, &cof)?;
            idempotents.push(v.mul(&cof).rem(&context)?);
        }
        Ok(CrtSplit { modulus, context, components, idempotents })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn context(&self) -> &Poly {
        &self.context
    }

    pub fn components(&self) -> &[(FactorLabel, Poly)] {
        &self.components
    }

    /// `e_λ`: `1` modulo `C_λ`, `0` modulo every other component.
    pub fn idempotents(&self) -> &[Poly] {
        &self.idempotents
    }

    pub fn forward(&self, f: &Poly) -> Result<Vec<Poly>> {
        self.components.iter().map(|(_, c)| f.rem(c)).collect()
    }

    pub fn backward(&self, parts: &[Poly]) -> Result<Poly> {
        if parts.len() != self.components.len() {
            return Err(Error::InvalidParameter("wrong number of components".into()));
        }
        let mut acc = Poly::zero(self.modulus);
        for (e, g) in self.idempotents.iter().zip(parts) {
            acc = acc.add(&e.mul(g));
        }
        acc.rem(&self.context)
    }

    /// The ideal of `Z_{p^k}[x]/(x^n+1)` whose component at `λ` is `parts[λ]`.
    pub fn assemble(&self, parts: &[IdealPresentation]) -> Result<IdealPresentation> {
        let mut gens = Vec::new();
        for ((e, part), (_, c)) in self.idempotents.iter().zip(parts).zip(&self.components) {
            if part.context() != c {
                return Err(Error::InvalidParameter("component ideal has the wrong context".into()));
            }
            for r in part.row_polys() {
                gens.push(e.mul(&r));
            }
        }
        let mut out = IdealPresentation::canonical_form(&gens, &self.context)?;
        out.generators = gens;
        Ok(out)
    }
}

/// Polynomial whose roots mod `p` are exactly those of `f`, each once.
fn radical_mod_p(f: &Poly) -> Result<Poly> {
    let mp = f.modulus();
    let p = mp.value();
    let mut h = f.clone();
    let mut rad = Poly::one(mp);
    let x = Poly::monomial(1, 1, mp);
    let mut xp = x.clone();
    let mut d = 0;
    while h.degree().unwrap_or(0) > 0 {
        d += 1;
        xp = xp.pow_mod(p, &h)?;
        let g = h.gcd_field(&xp.sub(&x))?;
        if g.degree().unwrap_or(0) > 0 {
            rad = rad.mul(&g);
            loop {
                let c = h.gcd_field(&g)?;
                if c.degree() == Some(0) {
                    break;
                }
                h = h.exact_div(&c)?.unwrap();
            }
            xp = xp.rem(&h)?;
        }
        debug_assert!(d <= f.degree().unwrap());
    }
    Ok(rad)
}

/// All ideals of `Z_{p^k}[x]` containing the monic `f`, by upward search: each
/// ideal `I` is extended by single elements of the socle of `R/I` (those killed
/// by `p` and by the radical of `f mod p`), which includes a generator of
/// every minimal overideal.
pub fn enumerate_ideals_containing(f: &Poly, p: u64, k: u32) -> Result<Vec<IdealPresentation>> {
    let md = Modulus::prime_power(p, k)?;
    if f.modulus() != md || !f.is_monic() {
        return Err(Error::InvalidParameter("expected a monic polynomial over Z_{p^k}".into()));
    }
    let deg = f.degree().unwrap_or(0);
    let size = (md.value() as u128).checked_pow(deg as u32);
    if size.map_or(true, |s| s > EXHAUSTIVE_LIMIT) {
        return Err(Error::TooLarge(format!("Z_{}[x]/({f}) has more than 2^16 elements", md.value())));
    }
    let rad = radical_mod_p(&f.reduce_to(Modulus::prime_power(p, 1)?))?.lift_to(md);
    let rad_vec = rad.rem(f)?.to_vec(deg);
    let zero = IdealPresentation::zero(f)?;
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    seen.insert(zero.rows.clone());
    let mut queue = VecDeque::from([zero]);
    let mut out = Vec::new();
    while let Some(ideal) = queue.pop_front() {
        for g in ideal.residues()? {
            if g.iter().all(|&c| c == 0) {
                continue;
            }
            if !ideal.contains_vec(&scaled(md, p, &g)) || !ideal.contains_vec(&mul_mod(&g, &rad_vec, f)) {
                continue;
            }
            let mut rows = ideal.rows.clone();
            let mut v = g;
            for _ in 0..deg {
                let next = shift_mod(&v, f);
                rows.push(v);
                v = next;
            }
            let j = IdealPresentation::from_closed_rows(rows, f, Vec::new());
            if seen.insert(j.rows.clone()) {
                queue.push_back(j);
            }
        }
        out.push(ideal);
    }
    for i in &mut out {
        i.generators = i.row_polys();
    }
    sort_ideals(&mut out);
    Ok(out)
}

/// Deterministic order: by quotient size, then rows.
pub fn sort_ideals(v: &mut [IdealPresentation]) {
    v.sort_by(|a, b| (a.quotient_order(), &a.rows).cmp(&(b.quotient_order(), &b.rows)));
}

fn mul_mod(a: &[u64], b: &[u64], context: &Poly) -> Vec<u64> {
    let m = context.modulus();
    let w = a.len();
    Poly::new(a.to_vec(), m).mul(&Poly::new(b.to_vec(), m)).rem(context).unwrap().to_vec(w)
}

/// Closed-form lattice of ideals containing the CRT component `C_λ` of
/// `x^n + 1`, when one is known:
///
/// * `k = 1`: `(q_λ^a)`, `0 <= a <= p^r`;
/// * `p` odd, `r = 0`: `(q^{(k)}_λ, p^u)`, `0 <= u <= k`;
/// * `p = 2`: `(q^{(k)}_{λ,r+1}, 2^u (q^{(k)}_λ)^v, 2^{u+1})`, `u < k`, `v <= 2^r`.
///
/// Returns the component context and the (deduplicated) list.
pub fn closed_form_ideals(p: u64, k: u32, n: u64, d: u64, l: u64) -> Result<Option<(Poly, Vec<IdealPresentation>)>> {
    let md = Modulus::prime_power(p, k)?;
    let (r, _) = split_p_part(n, p);
    let Some((_, context)) = component_contexts(p, k, n)?.into_iter().find(|(lab, _)| lab.d == d && lab.l == l) else {
        return Err(Error::InvalidParameter(format!("({d}, {l}) is not a label of x^{n}+1 mod {p}")));
    };
    let mut out: Vec<IdealPresentation> = Vec::new();
    let mut push = |i: IdealPresentation| {
        if !out.contains(&i) {
            out.push(i);
        }
    };
    if k == 1 {
        let q = BaseFactors::new().get(p, d, l)?;
        for a in 0..=p.pow(r) {
            push(IdealPresentation::canonical_form(&[q.pow(a)], &context)?);
        }
    } else if p == 2 {
        let qt = crate::factorlift::lift_level0(d, l, p, k)?.poly;
        for u in 0..k {
            for v in 0..=p.pow(r) {
                let g1 = qt.pow(v).scale(p.pow(u));
                let g2 = Poly::constant(p.pow(u + 1), md);
                push(IdealPresentation::canonical_form(&[g1, g2], &context)?);
            }
        }
    } else if r == 0 {
        for u in 0..=k {
            push(IdealPresentation::canonical_form(&[Poly::constant(p.pow(u), md)], &context)?);
        }
    } else {
        return Ok(None);
    }
    Ok(Some((context, out)))
}

/// Ideals containing the component `C_λ`: closed form when available,
/// exhaustive search otherwise.
pub fn component_ideals(p: u64, k: u32, n: u64, d: u64, l: u64) -> Result<Vec<IdealPresentation>> {
    if let Some((_, v)) = closed_form_ideals(p, k, n, d, l)? {
        return Ok(v);
    }
    let comps = component_contexts(p, k, n)?;
    let (_, c) = comps.iter().find(|(lab, _)| lab.d == d && lab.l == l).ok_or_else(|| {
        Error::InvalidParameter(format!("({d}, {l}) is not a label of x^{n}+1 mod {p}"))
    })?;
    enumerate_ideals_containing(c, p, k)
}

/// Small dense linear algebra over `F_p`: a basis of `{v : A v = 0}`.
fn nullspace_mod_p(a: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(row, r);
        let inv = crate::zring::mod_pow(m[row][c], p - 2, p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r2 in 0..m.len() {
            if r2 != row && m[r2][c] != 0 {
                let f = m[r2][c];
                for cc in 0..cols {
                    m[r2][cc] = (m[r2][cc] + p * p - f * m[row][cc] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[i][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// The maximal sub-ideals `J ⊂ I` with `I/J ≅ R/m`, `m = (p, q̃)`, where `q̃` is
/// any lift of a monic irreducible factor of the context mod `p`.
///
/// `J` contains `K = m·I`; `V = I/K` is an `F_p`-space with an action `T` of `x`,
/// and the candidates are `K + W` for the largest `T`-stable subspace `W`
/// inside the kernel of each nonzero functional.
pub fn maximal_subideals(ideal: &IdealPresentation, q_tilde: &Poly) -> Result<Vec<IdealPresentation>> {
    let md = ideal.modulus();
    let p = md.prime().ok_or_else(|| Error::InvalidModulus("descent needs a prime-power modulus".into()))?;
    let ctx = ideal.context().clone();
    let kk = ideal.product_with(&[Poly::constant(p, md), q_tilde.clone()])?;
    if kk == *ideal {
        return Ok(Vec::new());
    }
    // chain K = K_0 < K_1 < ... < K_dim = I, each step of index p
    let mut chain = vec![kk.rows.clone()];
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for r in &ideal.rows {
        let top = chain.last().unwrap();
        let mut t = r.clone();
        reduce_against(top, md, &mut t);
        if t.iter().any(|&c| c != 0) {
            basis.push(r.clone());
            let mut rows = top.clone();
            rows.push(r.clone());
            chain.push(howell_form(rows, md));
        }
    }
    let dim = basis.len();
    let coords = |v: &[u64]| -> Vec<u64> {
        let mut v = v.to_vec();
        let mut out = vec![0u64; dim];
        for i in (0..dim).rev() {
            for c in 0..p {
                let mut t = v.clone();
                axpy(md, &mut t, md.neg(c), &basis[i]);
                let mut probe = t.clone();
                reduce_against(&chain[i], md, &mut probe);
                if probe.iter().all(|&x| x == 0) {
                    out[i] = c;
                    v = t;
                    break;
                }
            }
        }
        out
    };
    // T[j] = coordinates of x · b_j
    let t_cols: Vec<Vec<u64>> = basis.iter().map(|b| coords(&shift_mod(b, &ctx))).collect();
    let apply_t_transpose = |psi: &[u64]| -> Vec<u64> {
        // (ψ T)_j = Σ_i ψ_i T[j]_i
        (0..dim).map(|j| (0..dim).map(|i| psi[i] * t_cols[j][i]).sum::<u64>() % p).collect()
    };
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    let mut out = Vec::new();
    let total = p.pow(dim as u32);
    for idx in 1..total {
        let mut psi = vec![0u64; dim];
        let mut rest = idx;
        for x in psi.iter_mut() {
            *x = rest % p;
            rest /= p;
        }
        // one functional per line
        if psi.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut mat = vec![psi.clone()];
        let mut cur = psi;
        for _ in 1..dim {
            cur = apply_t_transpose(&cur);
            mat.push(cur.clone());
        }
        let w = nullspace_mod_p(&mat, dim, p);
        let mut rows = kk.rows.clone();
        for wv in &w {
            let mut lifted = vec![0u64; ideal.width()];
            for (i, &c) in wv.iter().enumerate() {
                axpy(md, &mut lifted, c, &basis[i]);
            }
            rows.push(lifted);
        }
        let j = IdealPresentation::from_closed_rows(rows, &ctx, Vec::new());
        debug_assert!(j.rows.iter().all(|r| j.contains_vec(&shift_mod(r, &ctx))));
        if seen.insert(j.rows.clone()) {
            out.push(j);
        }
    }
    for j in &mut out {
        j.generators = j.row_polys();
    }
    Ok(out)
}

/// Every ideal of `Z_{p^k}[x]/(x^n+1)` of index at most `max_index`, by descent
/// through maximal sub-ideals from the unit ideal.
pub fn ideals_of_small_index(p: u64, k: u32, n: u64, max_index: u128) -> Result<Vec<IdealPresentation>> {
    let md = Modulus::prime_power(p, k)?;
    let context = Poly::x_pow_plus_one(n as usize, md);
    let lifts: Vec<Poly> = factor_xn_plus1(p, 1, n)?.into_iter().map(|f| f.poly.lift_to(md)).collect();
    let unit = IdealPresentation::canonical_form(&[Poly::one(md)], &context)?;
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::from([unit.rows.clone()]);
    let mut queue = VecDeque::from([unit]);
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for q in &lifts {
            for j in maximal_subideals(&i, q)? {
                let ok = j.quotient_order().is_some_and(|o| o <= max_index);
                if ok && seen.insert(j.rows.clone()) {
                    queue.push_back(j);
                }
            }
        }
        out.push(i);
    }
    sort_ideals(&mut out);
    Ok(out)
}

/// One prime-power component `(p, k_p, Q_p, n_p)` of a composite standard form.
#[derive(Clone, Debug)]
pub struct PrimeComponent {
    pub p: u64,
    pub k: u32,
    pub ideal: IdealPresentation,
    pub n: u64,
}

/// `Q = ⋂_p Pr_p^{-1}(Q_p)` over `Z_N`, `N = ∏ p^{k_p}`, valence `n = lcm(n_p)`.
pub fn compose_across_primes(components: &[PrimeComponent]) -> Result<(u64, u64, IdealPresentation)> {
    if components.is_empty() {
        return Err(Error::InvalidParameter("no components".into()));
    }
    let mut primes = HashSet::new();
    for c in components {
        if !primes.insert(c.p) {
            return Err(Error::DuplicatePrime(c.p));
        }
        let md = c.ideal.modulus();
        if md.prime() != Some(c.p) || md.exponent() != c.k {
            return Err(Error::InvalidParameter(format!("component over {} is not over Z_{}^{}", md, c.p, c.k)));
        }
        let bad = if c.n == 1 {
            // valence 2: only the non-constant clause is meaningful
            !c.ideal.contains(&Poly::x_pow_plus_one(1, md))? || has_nonzero_constant(&c.ideal)?
        } else {
            admissibility(&c.ideal, c.n)?.is_some()
        };
        if bad {
            return Err(Error::ComponentNotAdmissible(c.p));
        }
    }
    let n = components.iter().fold(1, |acc, c| lcm(acc, c.n));
    let big_n: u64 = components.iter().map(|c| c.ideal.modulus().value()).product();
    let mn = Modulus::new(big_n)?;
    let context = Poly::x_pow_plus_one(n as usize, mn);
    let mut gens = Vec::new();
    for c in components {
        let pk = c.ideal.modulus().value();
        if !c.ideal.contains(&Poly::x_pow_plus_one(n as usize, c.ideal.modulus()))? {
            return Err(Error::IncompatibleValences(n));
        }
        let rest = big_n / pk;
        // ε ≡ 1 mod p^k, ε ≡ 0 mod N / p^k
        let inv = c.ideal.modulus().inverse(rest % pk)?;
        let eps = mn.mul(rest, inv);
        for g in c.ideal.row_polys().into_iter().chain([c.ideal.context().clone()]) {
            gens.push(g.lift_to(mn).scale(eps));
        }
    }
    let q = IdealPresentation::canonical_form(&gens, &context)?;
    for c in components {
        let md = c.ideal.modulus();
        let mut proj: Vec<Poly> = q.row_polys().iter().map(|r| r.reduce_to(md)).collect();
        proj.push(Poly::x_pow_plus_one(n as usize, md));
        let pr = IdealPresentation::canonical_form(&proj, c.ideal.context())?;
        if pr != c.ideal {
            return Err(Error::IncompatibleValences(n));
        }
    }
    if n > 1 && admissibility(&q, n)?.is_some() {
        return Err(Error::IncompatibleValences(n));
    }
    Ok((big_n, n, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn md(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn poly(c: &[i64], n: u64) -> Poly {
        Poly::from_i64(c, md(n))
    }

    fn ideal(gens: &[&[i64]], ctx: &[i64], n: u64) -> IdealPresentation {
        let g: Vec<Poly> = gens.iter().map(|c| poly(c, n)).collect();
        IdealPresentation::canonical_form(&g, &poly(ctx, n)).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let q = ideal(&[&[-2, 1]], &[1, 0, 1], 5);
        assert_eq!(q.rows(), &[vec![3, 1]]);
        // x ∈ Q forces x^2 = -1 ∈ Q, so (2, x) is the whole ring modulo x^2 + 1
        let q = ideal(&[&[2], &[0, 1]], &[1, 0, 1], 4);
        assert_eq!(q.rows(), &[vec![0, 1], vec![1, 0]]);
        assert!(q.is_unit_ideal());
        let q = ideal(&[&[2], &[0, 1]], &[0, 0, 1], 4);
        assert_eq!(q.rows(), &[vec![0, 1], vec![2, 0]]);
        let q = ideal(&[], &[1, 0, 1], 4);
        assert!(q.rows().is_empty());
    }

    #[test]
    fn contains_examples() {
        let q = ideal(&[&[-2, 1], &[3]], &[1, 0, 1], 9);
        assert!(q.contains(&poly(&[1, 1], 9)).unwrap());
        let q = ideal(&[&[-2, 1]], &[1, 0, 1], 5);
        assert!(!q.contains(&poly(&[1, 1], 5)).unwrap());
        assert_eq!(q.normal_form(&poly(&[1, 1], 5)).unwrap(), poly(&[3], 5));
        assert!(q.contains(&Poly::zero(md(5))).unwrap());
    }

    #[test]
    fn admissibility_examples() {
        let ctx = [1, 0, 1];
        assert_eq!(admissibility(&ideal(&[&[-2, 1]], &ctx, 5), 2).unwrap(), None);
        assert_eq!(
            admissibility(&ideal(&[&[-2, 1], &[3]], &ctx, 9), 2).unwrap(),
            Some(AdmissibilityClause::NonzeroConstant)
        );
        assert_eq!(
            admissibility(&ideal(&[&[1, 1]], &[1, 0, 1], 2), 2).unwrap(),
            Some(AdmissibilityClause::SmallerExponent(1))
        );
        assert_eq!(
            admissibility(&ideal(&[&[1, 1]], &[1, 1], 3), 2).unwrap(),
            Some(AdmissibilityClause::ContainsTarget)
        );
    }

    /// Membership by naive saturation: the set of all elements of the ideal.
    fn naive_closure(gens: &[Vec<u64>], ctx: &Poly) -> HashSet<Vec<u64>> {
        let m = ctx.modulus();
        let w = ctx.degree().unwrap();
        let mut set: HashSet<Vec<u64>> = HashSet::from([vec![0; w]]);
        let mut frontier: Vec<Vec<u64>> = vec![vec![0; w]];
        let mut moves: Vec<Vec<u64>> = gens.to_vec();
        // close generators under x first
        let mut i = 0;
        while i < moves.len() {
            let s = shift_mod(&moves[i], ctx);
            if !moves.contains(&s) {
                moves.push(s);
            }
            i += 1;
        }
        while let Some(v) = frontier.pop() {
            for g in &moves {
                let mut t = v.clone();
                axpy(m, &mut t, 1, g);
                if set.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        set
    }

    #[test]
    fn contains_matches_naive_closure() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let cases: [(u64, usize); 6] = [(4, 3), (8, 3), (9, 3), (2, 8), (3, 5), (27, 2)];
        for (n, w) in cases {
            let m = md(n);
            for _ in 0..20 {
                let mut ctx: Vec<u64> = (0..w).map(|_| rng.gen_range(0..n)).collect();
                ctx.push(1);
                let ctx = Poly::new(ctx, m);
                let gens: Vec<Vec<u64>> =
                    (0..rng.gen_range(1..3)).map(|_| (0..w).map(|_| rng.gen_range(0..n)).collect()).collect();
                let q = IdealPresentation::canonical_form(
                    &gens.iter().map(|g| Poly::new(g.clone(), m)).collect::<Vec<_>>(),
                    &ctx,
                )
                .unwrap();
                let closure = naive_closure(&gens, &ctx);
                assert_eq!(q.quotient_order().unwrap() * closure.len() as u128, (n as u128).pow(w as u32));
                for v in q.residues().unwrap().iter().take(64) {
                    assert_eq!(q.contains_vec(v), closure.contains(v));
                }
                for v in closure.iter().take(64) {
                    assert!(q.contains_vec(v));
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_order_independent() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let contexts = [(4u64, vec![1, 0, 0, 1]), (9, vec![1, 0, 1]), (8, vec![1, 0, 0, 0, 1]), (25, vec![1, 0, 1])];
        for (n, c) in contexts {
            let m = md(n);
            let ctx = Poly::new(c.clone(), m);
            let w = c.len() - 1;
            for _ in 0..250 {
                let mut gens: Vec<Poly> = (0..rng.gen_range(0..4))
                    .map(|_| Poly::new((0..w + 2).map(|_| rng.gen_range(0..n)).collect(), m))
                    .collect();
                let a = IdealPresentation::canonical_form(&gens, &ctx).unwrap();
                let b = IdealPresentation::canonical_form(&a.row_polys(), &ctx).unwrap();
                assert_eq!(a, b);
                gens.reverse();
                let c = IdealPresentation::canonical_form(&gens, &ctx).unwrap();
                assert_eq!(a, c);
            }
        }
    }

    #[test]
    fn crt_examples() {
        let s = CrtSplit::new(5, 1, 2).unwrap();
        let x = Poly::monomial(1, 1, md(5));
        assert_eq!(s.forward(&x).unwrap(), vec![poly(&[2], 5), poly(&[3], 5)]);
        assert_eq!(s.forward(&Poly::one(md(5))).unwrap(), vec![poly(&[1], 5), poly(&[1], 5)]);
        let s = CrtSplit::new(3, 1, 2).unwrap();
        assert_eq!(s.components().len(), 1);
        assert_eq!(s.forward(&x.lift_to(md(3))).unwrap(), vec![Poly::monomial(1, 1, md(3))]);
    }

    #[test]
    fn crt_round_trip_small() {
        for (p, k, n) in [(5u64, 1u32, 2u64), (3, 2, 2), (2, 2, 3), (3, 1, 4), (2, 1, 6), (5, 1, 4)] {
            let s = CrtSplit::new(p, k, n).unwrap();
            let m = s.modulus();
            let q = IdealPresentation::zero(s.context()).unwrap();
            for v in q.residues().unwrap() {
                let f = Poly::new(v, m);
                assert_eq!(s.backward(&s.forward(&f).unwrap()).unwrap(), f);
            }
        }
    }

    #[test]
    fn closed_forms_examples() {
        let (_, v) = closed_form_ideals(3, 2, 2, 4, 1).unwrap().unwrap();
        assert_eq!(v.len(), 3);
        let (ctx, v) = closed_form_ideals(2, 2, 2, 1, 1).unwrap().unwrap();
        assert_eq!(ctx, poly(&[1, 0, 1], 4));
        let ex = enumerate_ideals_containing(&ctx, 2, 2).unwrap();
        assert_eq!(v.len(), ex.len());
        for i in &v {
            assert!(ex.contains(i));
        }
        let lin = enumerate_ideals_containing(&poly(&[-1, 1], 7), 7, 1).unwrap();
        assert_eq!(lin.len(), 2);
    }

    #[test]
    fn exhaustive_counts_small_rings() {
        // Z_4[x]/(x^2): ideals (0),(2x),(x),(2),(2,x),(x+2)?,... compare with naive subgroup scan
        let f = poly(&[0, 0, 1], 4);
        let ex = enumerate_ideals_containing(&f, 2, 2).unwrap();
        let naive = naive_ideals(&f);
        assert_eq!(ex.len(), naive);
        let f = poly(&[1, 0, 1], 3);
        assert_eq!(enumerate_ideals_containing(&f, 3, 1).unwrap().len(), 2);
    }

    /// Count ideals by brute force over subsets generated by at most two elements.
    fn naive_ideals(f: &Poly) -> usize {
        let zero = IdealPresentation::zero(f).unwrap();
        let all = zero.residues().unwrap();
        let mut set = HashSet::new();
        for a in &all {
            for b in &all {
                let gens = [Poly::new(a.clone(), f.modulus()), Poly::new(b.clone(), f.modulus())];
                set.insert(IdealPresentation::canonical_form(&gens, f).unwrap().rows.clone());
            }
        }
        set.len()
    }

    #[test]
    fn descent_finds_all_small_index_ideals() {
        for (p, k, n, bound) in [(3u64, 1u32, 2u64, 9u128), (3, 2, 2, 81), (5, 1, 2, 25), (2, 2, 2, 16), (3, 2, 3, 81)] {
            let desc = ideals_of_small_index(p, k, n, bound).unwrap();
            let ctx = Poly::x_pow_plus_one(n as usize, Modulus::prime_power(p, k).unwrap());
            let ex: Vec<_> = enumerate_ideals_containing(&ctx, p, k)
                .unwrap()
                .into_iter()
                .filter(|i| i.quotient_order().unwrap() <= bound)
                .collect();
            assert_eq!(desc.len(), ex.len(), "{p} {k} {n}");
            for i in &ex {
                assert!(desc.contains(i));
            }
        }
    }

    #[test]
    fn composition_example() {
        let q5 = ideal(&[&[-2, 1]], &[1, 0, 1], 5);
        let q13 = ideal(&[&[-5, 1]], &[1, 0, 1], 13);
        let comps = [
            PrimeComponent { p: 5, k: 1, ideal: q5.clone(), n: 2 },
            PrimeComponent { p: 13, k: 1, ideal: q13, n: 2 },
        ];
        let (big_n, n, q) = compose_across_primes(&comps).unwrap();
        assert_eq!((big_n, n), (65, 2));
        assert_eq!(q, ideal(&[&[-57, 1]], &[1, 0, 1], 65));
        assert!(q.contains(&poly(&[1, 0, 1], 65)).unwrap());

        let (big_n, n, q) = compose_across_primes(&comps[..1]).unwrap();
        assert_eq!((big_n, n), (5, 2));
        assert_eq!(q, q5);

        let q2 = ideal(&[&[1, 1]], &[1, 1], 2);
        let comps = [
            PrimeComponent { p: 2, k: 1, ideal: q2, n: 1 },
            PrimeComponent { p: 5, k: 1, ideal: q5.clone(), n: 2 },
        ];
        let (big_n, n, q) = compose_across_primes(&comps).unwrap();
        assert_eq!((big_n, n), (10, 2));
        assert!(q.contains(&poly(&[1, 0, 1], 10)).unwrap());
        assert!(is_admissible(&q, 2).unwrap());

        let dup = [
            PrimeComponent { p: 5, k: 1, ideal: q5.clone(), n: 2 },
            PrimeComponent { p: 5, k: 1, ideal: q5.clone(), n: 2 },
        ];
        assert_eq!(compose_across_primes(&dup).unwrap_err(), Error::DuplicatePrime(5));
        let bad = ideal(&[&[1, 1]], &[1, 0, 1], 5);
        let comps = [PrimeComponent { p: 5, k: 1, ideal: bad, n: 2 }];
        assert_eq!(compose_across_primes(&comps).unwrap_err(), Error::ComponentNotAdmissible(5));
    }
}
