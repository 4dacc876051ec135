//! Classification-family generators for standard-form ideals and the reconciliation
//! driver that matches them against the brute-force oracle.
//!
//! Every family enumerates its parameter space, builds the ideal, and keeps it
//! only if the computational predicates hold (admissibility, group type);
//! candidate lists are deduplicated by canonical ideal equality.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::cayley::{build_map, brute_force_rbcms, find_isomorphism, trace_faces, CayleyMapRecord, GroupTable, MapType};
use crate::error::{Error, Result};
use crate::factorlift::{factor_xn_plus1, lambda_index, lift_level0, FactorLabel};
use crate::ideals::{admissibility, admissibility_type2, ideals_of_small_index, CrtSplit, IdealPresentation};
use crate::poly::Poly;
use crate::structure::{quotient_group_type, AbelianType};
use crate::zring::{binomial, divisors, euler_phi, is_prime, lcm, mod_pow, split_p_part, Modulus};

/// Roots of `x^n + 1` in `Z_{p^k}`: a scan of `Z_p`, then digit-by-digit lifting
/// (every lift is tried, so repeated roots are handled too).
pub fn solve_unit_roots(p: u64, k: u32, n: u64) -> Vec<u64> {
    let mut roots: Vec<u64> = (0..p).filter(|&a| (mod_pow(a, n, p) + 1) % p == 0).collect();
    let mut m = p;
    for _ in 1..k {
        let next = m * p;
        roots = roots
            .iter()
            .flat_map(|&a| (0..p).map(move |t| a + t * m))
            .filter(|&a| (mod_pow(a, n, next) + 1) % next == 0)
            .collect();
        m = next;
    }
    roots.sort_unstable();
    roots
}

/// `Θ(p, n)`: divisors `d` of `2n` with `d ∤ n` and `p ≡ -1 (mod d)`.
pub fn theta_set(p: u64, n: u64) -> Vec<u64> {
    divisors(2 * n).into_iter().filter(|&d| n % d != 0 && (p + 1) % d == 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Variant {
    ElementaryI,
    ElementaryII,
    TwoGroup,
    Coprime,
    Cyclic,
    Rank2,
    /// Groups without a closed family: admissible ideals of the right index.
    Generic,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::ElementaryI => "elementaryI",
            Variant::ElementaryII => "elementaryII",
            Variant::TwoGroup => "twoGroup",
            Variant::Coprime => "coprime",
            Variant::Cyclic => "cyclic",
            Variant::Rank2 => "rank2",
            Variant::Generic => "generic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub variant: Variant,
    /// exponent function `K` on factor labels
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub k_fn: Vec<(FactorLabel, u64)>,
    /// level function `J` on factor labels
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub j_fn: Vec<(FactorLabel, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<FactorLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_tag: Option<char>,
    /// coefficients of a quadratic generator outside the printed rank-two shapes
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<Vec<u64>>,
}

impl FamilyParams {
    fn new(variant: Variant) -> Self {
        FamilyParams {
            variant,
            k_fn: Vec::new(),
            j_fn: Vec::new(),
            mu: None,
            mu1: None,
            mu2: None,
            alpha: None,
            nu: None,
            label: None,
            case_tag: None,
            quadratic: None,
        }
    }
}

/// One surviving family member.
#[derive(Clone, Debug)]
pub struct FamilyMap {
    pub params: FamilyParams,
    pub ideal: IdealPresentation,
    pub map: CayleyMapRecord,
    /// For rank-two families with an explicit generator sequence: whether
    /// that sequence gives a map isomorphic to `map`.
    pub explicit_check: Option<bool>,
}

fn context(p: u64, k: u32, n: u64) -> Result<(Modulus, Poly)> {
    let md = Modulus::prime_power(p, k)?;
    Ok((md, Poly::x_pow_plus_one(n as usize, md)))
}

/// `M_Q` when `Q` is admissible and the map is non-degenerate.
fn standard_map(q: &IdealPresentation, n: u64, ty: MapType) -> Result<Option<CayleyMapRecord>> {
    match build_map(q, n, ty) {
        Ok(m) => Ok(Some(m)),
        Err(Error::NotAdmissible(_)) | Err(Error::DegenerateOmega(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Keeps the first member for each distinct ideal.
fn push_unique(out: &mut Vec<FamilyMap>, seen: &mut HashSet<IdealPresentation>, fm: FamilyMap) {
    if seen.insert(fm.ideal.clone()) {
        out.push(fm);
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    Ok(())
}

/// Type I maps on `Z_{p^k}`: `Q = (x - μ)` for `μ ∈ U(p^k, n)`, kept when admissible.
pub fn classify_cyclic(p: u64, k: u32, n: u64) -> Result<Vec<FamilyMap>> {
    check_prime(p)?;
    check_n(n)?;
    let (md, ctx) = context(p, k, n)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for mu in solve_unit_roots(p, k, n) {
        let q = IdealPresentation::canonical_form(&[Poly::linear(mu, md)], &ctx)?;
        if let Some(map) = standard_map(&q, n, MapType::I)? {
            let mut params = FamilyParams::new(Variant::Cyclic);
            params.mu = Some(mu);
            push_unique(&mut out, &mut seen, FamilyMap { params, ideal: q, map, explicit_check: None });
        }
    }
    Ok(out)
}

/// All exponent functions `K: Λ → {0, …, bound}` with `Σ K(λ)·deg q_λ = m`.
fn exponent_functions(degrees: &[usize], bound: u64, m: usize) -> Vec<Vec<u64>> {
    fn go(degrees: &[usize], bound: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degrees[cur.len()];
        for e in 0..=bound {
            let used = e as usize * d;
            if used > left {
                break;
            }
            cur.push(e);
            go(degrees, bound, left - used, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, bound, m, &mut Vec::new(), &mut out);
    out
}

/// Maps on `Z_p^m`: `Q = (∏ q_λ^{K(λ)})` with `K` ranging over `0..=p^r`, filtered
/// by admissibility (type I) or the involution clauses (type II, `p = 2`).
pub fn classify_elementary(p: u64, m: usize, n: u64, ty: MapType) -> Result<Vec<FamilyMap>> {
    check_prime(p)?;
    check_n(n)?;
    if m == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    if ty == MapType::II && p != 2 {
        return Ok(Vec::new());
    }
    let (md, ctx) = context(p, 1, n)?;
    let factors = factor_xn_plus1(p, 1, n)?;
    let degrees: Vec<usize> = factors.iter().map(|f| f.label.degree).collect();
    let (r, _) = split_p_part(n, p);
    let variant = if ty == MapType::I { Variant::ElementaryI } else { Variant::ElementaryII };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for kf in exponent_functions(&degrees, p.pow(r), m) {
        let f = factors.iter().zip(&kf).fold(Poly::one(md), |acc, (fac, &e)| acc.mul(&fac.poly.pow(e)));
        let q = IdealPresentation::canonical_form(&[f], &ctx)?;
        let ok = match ty {
            MapType::I => admissibility(&q, n)?.is_none(),
            MapType::II => admissibility_type2(&q, n)?.is_none(),
        };
        if !ok {
            continue;
        }
        if let Some(map) = standard_map(&q, n, ty)? {
            let mut params = FamilyParams::new(variant);
            params.k_fn = factors.iter().map(|f| f.label).zip(kf).collect();
            push_unique(&mut out, &mut seen, FamilyMap { params, ideal: q, map, explicit_check: None });
        }
    }
    Ok(out)
}

/// Counts of exponent functions satisfying the literal side conditions for
/// `Z_p^m`: `(codomain 0..=r, lcm = n')` and `(codomain 0..=r, lcm = 2n')`.
/// No admissibility filter is applied; these are compared with the oracle in
/// the reconciliation report.
pub fn elementary_clause_counts(p: u64, m: usize, n: u64) -> Result<(usize, usize)> {
    let (r, n_prime) = split_p_part(n, p);
    let factors = factor_xn_plus1(p, 1, n)?;
    let degrees: Vec<usize> = factors.iter().map(|f| f.label.degree).collect();
    let mut printed = 0;
    let mut doubled = 0;
    for kf in exponent_functions(&degrees, r as u64, m) {
        if !kf.contains(&(r as u64)) {
            continue;
        }
        let l = factors.iter().zip(&kf).filter(|(_, &e)| e != 0).fold(1, |acc, (f, _)| lcm(acc, f.label.d));
        printed += usize::from(l == n_prime);
        doubled += usize::from(l == 2 * n_prime);
    }
    Ok((printed, doubled))
}

fn for_each_function(len: usize, range: u64, mut f: impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
    let mut cur = vec![0u64; len];
    loop {
        f(&cur)?;
        let mut i = 0;
        loop {
            if i == len {
                return Ok(());
            }
            cur[i] += 1;
            if cur[i] < range {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Type I maps on abelian 2-groups of exponent `2^k`, assembled componentwise
/// from `(q_{λ,r+1}, 2^J q_λ^K, 2^{J+1})` with `J ≤ k-1`, `K ≤ 2^r`, and
/// `J(λ) = k-1`, `K(λ) ≠ 0` somewhere.
pub fn classify_2group(k: u32, n: u64) -> Result<Vec<FamilyMap>> {
    two_group_members(k, n, None)
}

fn two_group_members(k: u32, n: u64, want: Option<&AbelianType>) -> Result<Vec<FamilyMap>> {
    check_n(n)?;
    let (r, _) = split_p_part(n, 2);
    let split = CrtSplit::new(2, k, n)?;
    let md = split.modulus();
    let comps: Vec<(FactorLabel, Poly)> = split.components().to_vec();
    let lifts: Vec<Poly> = comps.iter().map(|(l, _)| lift_level0(l.d, l.l, 2, k).map(|f| f.poly)).collect::<Result<_>>()?;
    let kmax = 1u64 << r;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let len = comps.len();
    for_each_function(len, k as u64, |jf| {
        for_each_function(len, kmax + 1, |kf| {
            if !(0..len).any(|i| jf[i] == k as u64 - 1 && kf[i] != 0) {
                return Ok(());
            }
            let mut parts = Vec::with_capacity(len);
            for i in 0..len {
                let a = Poly::constant(1 << jf[i], md).mul(&lifts[i].pow(kf[i]));
                let b = Poly::constant((1u64 << (jf[i] + 1)) % md.value(), md);
                parts.push(IdealPresentation::canonical_form(&[a, b], &comps[i].1)?);
            }
            let q = split.assemble(&parts)?;
            if want.is_some_and(|w| quotient_group_type(&q) != *w) {
                return Ok(());
            }
            if let Some(map) = standard_map(&q, n, MapType::I)? {
                let mut params = FamilyParams::new(Variant::TwoGroup);
                params.j_fn = comps.iter().map(|c| c.0).zip(jf.iter().map(|&j| j as u32)).collect();
                params.k_fn = comps.iter().map(|c| c.0).zip(kf.iter().copied()).collect();
                push_unique(&mut out, &mut seen, FamilyMap { params, ideal: q, map, explicit_check: None });
            }
            Ok(())
        })
    })?;
    Ok(out)
}

/// Type I maps on abelian `p`-groups of exponent `p^k`, `p` odd and prime to
/// `n`: componentwise `(q_λ^{(k)}, p^{J(λ)})` with `k ∈ Im J`.
pub fn classify_coprime(p: u64, k: u32, n: u64) -> Result<Vec<FamilyMap>> {
    coprime_members(p, k, n, None)
}

fn coprime_members(p: u64, k: u32, n: u64, want: Option<&AbelianType>) -> Result<Vec<FamilyMap>> {
    check_prime(p)?;
    check_n(n)?;
    if p == 2 || n % p == 0 {
        return Err(Error::InvalidParameter(format!("need odd p prime to n, got p={p}, n={n}")));
    }
    let split = CrtSplit::new(p, k, n)?;
    let md = split.modulus();
    let comps: Vec<(FactorLabel, Poly)> = split.components().to_vec();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for_each_function(comps.len(), k as u64 + 1, |jf| {
        if !jf.contains(&(k as u64)) {
            return Ok(());
        }
        let parts = comps
            .iter()
            .zip(jf)
            .map(|((_, c), &j)| IdealPresentation::canonical_form(&[Poly::constant(p.pow(j as u32) % md.value(), md)], c))
            .collect::<Result<Vec<_>>>()?;
        let q = split.assemble(&parts)?;
        if want.is_some_and(|w| quotient_group_type(&q) != *w) {
            return Ok(());
        }
        if let Some(map) = standard_map(&q, n, MapType::I)? {
            let mut params = FamilyParams::new(Variant::Coprime);
            params.j_fn = comps.iter().map(|c| c.0).zip(jf.iter().map(|&j| j as u32)).collect();
            push_unique(&mut out, &mut seen, FamilyMap { params, ideal: q, map, explicit_check: None });
        }
        Ok(())
    })?;
    Ok(out)
}

/// Map on `Z_{p^a} × Z_{p^b}` (`a ≥ b`) from an explicit type I sequence given
/// as coordinate pairs.
fn explicit_map(p: u64, a: u32, b: u32, seq: &[(u64, u64)]) -> Result<CayleyMapRecord> {
    let t = AbelianType::from_cyclic_orders(&[p.pow(a), p.pow(b)]);
    let g = Arc::new(GroupTable::from_type(&t)?);
    // primary coordinates are stored smallest modulus first
    let omega = seq.iter().map(|&(x, y)| g.element(&[y % p.pow(b), x % p.pow(a)])).collect::<Result<Vec<_>>>()?;
    CayleyMapRecord::from_sequence(g, omega, MapType::I)
}

fn explicit_matches(map: &CayleyMapRecord, p: u64, a: u32, b: u32, seq: &[(u64, u64)]) -> bool {
    match explicit_map(p, a, b, seq) {
        Ok(e) => find_isomorphism(map, &e).is_some(),
        Err(_) => false,
    }
}

/// `m^e` in `Z_M` for a unit `m`, negative exponents allowed.
fn unit_pow(m: u64, e: i64, modulus: u64) -> u64 {
    if e >= 0 {
        mod_pow(m, e as u64, modulus)
    } else {
        // m^{-1} = m^{φ(M)-1}
        let inv = mod_pow(m, euler_phi(modulus) - 1, modulus);
        mod_pow(inv, (-e) as u64, modulus)
    }
}

/// Which reading of the rank-two quadratic cases a member came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticReading {
    /// `d ∈ Θ(p, n)`, `ν = 0`
    Theta,
    /// `deg q_λ = 2` but `d ∉ Θ(p, n)`
    DegreeTwo,
    /// a constant shift `ν ≠ 0` giving a new ideal
    NuShift,
    /// a quadratic generator of neither printed shape
    OtherQuadratic,
}

pub fn quadratic_reading(p: u64, n: u64, params: &FamilyParams) -> Option<QuadraticReading> {
    if params.quadratic.is_some() {
        return Some(QuadraticReading::OtherQuadratic);
    }
    if params.case_tag != Some('b') {
        return None;
    }
    let lab = params.label?;
    Some(if params.nu.unwrap_or(0) != 0 {
        QuadraticReading::NuShift
    } else if theta_set(p, n).contains(&lab.d) {
        QuadraticReading::Theta
    } else {
        QuadraticReading::DegreeTwo
    })
}

/// Type I maps on `Z_{p^k} × Z_{p^{k'}}` for odd `p`, by the four rank-two cases.
/// Case (b) runs over every quadratic `q_λ` (not only `d ∈ Θ(p,n)`) and over
/// the shifts `q_λ^{(k)} - pν` with `p^{r+1}ν = 0`; case (d) runs over all
/// `μ, α, ν` satisfying the side conditions. For `k = k' ≥ 2` the printed
/// shapes of (b) and (c) are not exhaustive, so every monic quadratic lift of
/// `q_λ` or `(x - μ)^2` is tried as well. The group type and admissibility are
/// checked on every candidate.
pub fn classify_rank2(p: u64, k: u32, k2: u32, n: u64) -> Result<Vec<FamilyMap>> {
    check_prime(p)?;
    check_n(n)?;
    if p == 2 || k2 == 0 || k2 > k {
        return Err(Error::InvalidParameter(format!("need odd p and k ≥ k' ≥ 1, got p={p}, k={k}, k'={k2}")));
    }
    let (md, ctx) = context(p, k, n)?;
    let pk = md.value();
    let pk2 = p.pow(k2);
    let want = AbelianType::from_cyclic_orders(&[pk, pk2]);
    let (r, n_prime) = split_p_part(n, p);
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut consider = |q: IdealPresentation, params: FamilyParams, explicit: Option<Vec<(u64, u64)>>, out: &mut Vec<FamilyMap>| -> Result<()> {
        if seen.contains(&q) || quotient_group_type(&q) != want {
            return Ok(());
        }
        if let Some(map) = standard_map(&q, n, MapType::I)? {
            let explicit_check = explicit.map(|seq| explicit_matches(&map, p, k, k2, &seq));
            push_unique(out, &mut seen, FamilyMap { params, ideal: q, map, explicit_check });
        }
        Ok(())
    };

    // (a) two distinct linear components
    let u1 = solve_unit_roots(p, k, n);
    let u2 = solve_unit_roots(p, k2, n);
    for &m1 in &u1 {
        for &m2 in &u2 {
            if m1 % p == m2 % p {
                continue;
            }
            let a = Poly::linear(m1, md).mul(&Poly::linear(m2, md));
            let b = Poly::linear(m1, md).scale(pk2 % pk);
            let q = IdealPresentation::canonical_form(&[a, b], &ctx)?;
            let mut params = FamilyParams::new(Variant::Rank2);
            params.case_tag = Some('a');
            params.mu1 = Some(m1);
            params.mu2 = Some(m2);
            let seq = (0..n).map(|i| (mod_pow(m1, i, pk), mod_pow(m2, i, pk2))).collect();
            consider(q, params, Some(seq), &mut out)?;
        }
    }

    // (b) one quadratic component, k = k': the printed shifts q_λ^{(k)} - pν
    // with constant ν first, then (below) every other monic quadratic lift
    let quad_labels: Vec<FactorLabel> = lambda_index(p, n_prime)?.into_iter().filter(|l| l.degree == 2).collect();
    if k == k2 {
        for &lab in &quad_labels {
            let qt = lift_level0(lab.d, lab.l, p, k)?.poly;
            let nus: Vec<u64> = (0..pk).filter(|&nu| (p.pow(r + 1) as u128 * nu as u128) % pk as u128 == 0).collect();
            for nu in nus {
                let g = qt.sub(&Poly::constant(p * nu % pk, md));
                let q = IdealPresentation::canonical_form(&[g], &ctx)?;
                let mut params = FamilyParams::new(Variant::Rank2);
                params.case_tag = Some('b');
                params.label = Some(lab);
                params.nu = Some(nu);
                consider(q, params, None, &mut out)?;
            }
        }
    }

    // (c) a repeated linear component over Z_p
    let repeated: Vec<u64> = if r > 0 { solve_unit_roots(p, 1, n_prime) } else { Vec::new() };
    if k == 1 && k2 == 1 {
        for &mu in &repeated {
            let q = IdealPresentation::canonical_form(&[Poly::linear(mu, md).pow(2)], &ctx)?;
            let mut params = FamilyParams::new(Variant::Rank2);
            params.case_tag = Some('c');
            params.mu = Some(mu);
            let seq = (0..n as i64)
                .map(|i| {
                    let first = unit_pow(mu, i, p);
                    let second = if i == 0 { 0 } else { (i as u64 % p) * unit_pow(mu, i - 1, p) % p };
                    (first, second)
                })
                .collect();
            consider(q, params, Some(seq), &mut out)?;
        }
    }

    // k = k': any monic quadratic g reducing to a quadratic q_λ or to (x - μ)^2
    // gives Z_{p^k}[x]/(g) ≅ Z_{p^k}^2. Members not of the printed shapes
    // above are kept with their coefficients so the report can count them.
    if k == k2 {
        let fp = Modulus::prime_power(p, 1)?;
        let mut bases: Vec<(char, Poly)> = Vec::new();
        for lab in &quad_labels {
            bases.push(('b', crate::factorlift::base_factor(p, lab.d, lab.l)?));
        }
        for &mu in &repeated {
            bases.push(('c', Poly::linear(mu, fp).pow(2)));
        }
        for c0 in 0..pk {
            for c1 in 0..pk {
                let g = Poly::new(vec![c0, c1, 1], md);
                let Some((tag, _)) = bases.iter().find(|(_, b)| g.reduce_to(fp) == *b) else { continue };
                let q = IdealPresentation::canonical_form(&[g], &ctx)?;
                let mut params = FamilyParams::new(Variant::Rank2);
                params.case_tag = Some(*tag);
                params.quadratic = Some(vec![c0, c1, 1]);
                consider(q, params, None, &mut out)?;
            }
        }
    }

    // (d) k > k' = 1
    if r > 0 && k > 1 && k2 == 1 {
        let pm = pk / p;
        for mu in (0..pk).filter(|&m| (mod_pow(m, n_prime, p) + 1) % p == 0) {
            for alpha in 0..pm {
                for nu in 0..pm {
                    let lhs = (p * p % pk) * alpha % pk;
                    let rhs = (p * p * p % pk) * (nu * nu % pk) % pk;
                    if lhs != rhs || (p.pow(r + 1) as u128 * nu as u128) % pk as u128 != 0 {
                        continue;
                    }
                    let lin = Poly::linear(mu, md);
                    let g1 = lin.pow(2).sub(&Poly::constant(p * alpha % pk, md));
                    let g2 = lin.scale(p).sub(&Poly::constant(p * p % pk * nu % pk, md));
                    let q = IdealPresentation::canonical_form(&[g1, g2], &ctx)?;
                    let mut params = FamilyParams::new(Variant::Rank2);
                    params.case_tag = Some('d');
                    params.mu = Some(mu);
                    params.alpha = Some(alpha);
                    params.nu = Some(nu);
                    let shift = (mu + p * nu) % pk;
                    let c = (p * alpha % pk + pk - p * p % pk * (nu * nu % pk) % pk) % pk;
                    let seq = (0..n as i64)
                        .map(|i| {
                            let b2 = (binomial(i as u64, 2) % pk as u128) as u64;
                            let tail = if i >= 2 { b2 * c % pk * unit_pow(mu, i - 2, pk) % pk } else { 0 };
                            let first = (unit_pow(shift, i, pk) + tail) % pk;
                            let second = if i == 0 { 0 } else { (i as u64 % p) * unit_pow(mu % p, i - 1, p) % p };
                            (first, second)
                        })
                        .collect();
                    consider(q, params, Some(seq), &mut out)?;
                }
            }
        }
    }
    Ok(out)
}

/// Admissible ideals of index `|G|` with quotient `G`, found by descent through
/// the ideal lattice. Covers groups outside every closed family.
pub fn classify_generic(group: &AbelianType, n: u64) -> Result<Vec<FamilyMap>> {
    check_n(n)?;
    let p = group.prime().ok_or_else(|| Error::InvalidGroup(format!("{group} is not a p-group")))?;
    let k = split_p_part(group.exponent(), p).0;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for q in ideals_of_small_index(p, k, n, group.order())? {
        if q.quotient_order() != Some(group.order()) || quotient_group_type(&q) != *group {
            continue;
        }
        if let Some(map) = standard_map(&q, n, MapType::I)? {
            push_unique(&mut out, &mut seen, FamilyMap { params: FamilyParams::new(Variant::Generic), ideal: q, map, explicit_check: None });
        }
    }
    Ok(out)
}

/// The family responsible for `(group, valence, type)`, with its members on
/// exactly that group.
pub fn theorem_family(group: &AbelianType, valence: usize, ty: MapType) -> Result<(Variant, Vec<FamilyMap>)> {
    let p = group.prime().ok_or_else(|| Error::InvalidGroup(format!("{group} is not a p-group")))?;
    let exps = group.p_exponents().unwrap();
    let k = *exps.iter().max().unwrap();
    let rank = group.rank();
    if ty == MapType::II {
        if valence == 0 {
            return Err(Error::InvalidParameter("valence must be positive".into()));
        }
        let n = valence as u64;
        if p != 2 || k != 1 {
            return Ok((Variant::ElementaryII, Vec::new()));
        }
        return Ok((Variant::ElementaryII, classify_elementary(2, rank, n, MapType::II)?));
    }
    if valence == 0 || valence % 2 == 1 {
        return Err(Error::InvalidParameter(format!("type I valence must be even, got {valence}")));
    }
    let n = (valence / 2) as u64;
    let (variant, all) = if rank == 1 {
        (Variant::Cyclic, classify_cyclic(p, k, n)?)
    } else if p == 2 {
        (Variant::TwoGroup, two_group_members(k, n, Some(group))?)
    } else if k == 1 {
        (Variant::ElementaryI, classify_elementary(p, rank, n, MapType::I)?)
    } else if n % p != 0 {
        (Variant::Coprime, coprime_members(p, k, n, Some(group))?)
    } else if rank == 2 {
        (Variant::Rank2, classify_rank2(p, exps[1].max(exps[0]), exps[0].min(exps[1]), n)?)
    } else {
        (Variant::Generic, classify_generic(group, n)?)
    };
    let maps = all.into_iter().filter(|f| quotient_group_type(&f.ideal) == *group).collect();
    Ok((variant, maps))
}

#[derive(Clone, Debug, Serialize)]
pub struct MapSummary {
    pub ideal: String,
    pub params: FamilyParams,
    pub genus: i64,
    pub faces: usize,
    pub group_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_check: Option<bool>,
}

/// One reading of an ambiguous side condition, with the count it produces.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub topic: String,
    pub reading: String,
    pub count: usize,
    pub oracle_count: usize,
    pub agrees: bool,
    /// whether this is the reading the family generator implements
    pub implemented: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconciliationReport {
    pub group: String,
    pub valence: usize,
    pub map_type: MapType,
    pub variant: Variant,
    pub family_count: usize,
    pub oracle_count: usize,
    /// `(family index, oracle index)` pairs of isomorphic maps
    pub matching: Vec<(usize, usize)>,
    pub unmatched_family: Vec<usize>,
    pub unmatched_oracle: Vec<usize>,
    pub maps: Vec<MapSummary>,
    pub discrepancies: Vec<Discrepancy>,
    pub agree: bool,
}

/// Runs the responsible family and the oracle on `(group, valence)`, matches
/// them up to isomorphism, and lists the outcome of each ambiguous reading.
pub fn cross_check(group: &AbelianType, valence: usize, ty: MapType) -> Result<ReconciliationReport> {
    let oracle = brute_force_rbcms(group, valence, ty)?;
    let (variant, family) = theorem_family(group, valence, ty)?;
    let mut matching = Vec::new();
    let mut used = vec![false; oracle.len()];
    let mut unmatched_family = Vec::new();
    for (i, fm) in family.iter().enumerate() {
        let hit = (0..oracle.len()).find(|&j| !used[j] && find_isomorphism(&fm.map, &oracle[j]).is_some());
        match hit {
            Some(j) => {
                used[j] = true;
                matching.push((i, j));
            }
            None => unmatched_family.push(i),
        }
    }
    let unmatched_oracle: Vec<usize> = (0..oracle.len()).filter(|&j| !used[j]).collect();
    let maps = family
        .iter()
        .map(|fm| {
            let s = trace_faces(&fm.map);
            MapSummary {
                ideal: fm.ideal.to_string(),
                params: fm.params.clone(),
                genus: s.genus,
                faces: s.faces,
                group_type: quotient_group_type(&fm.ideal).to_string(),
                explicit_check: fm.explicit_check,
            }
        })
        .collect();
    let discrepancies = readings(group, valence, ty, variant, &family, oracle.len())?;
    let agree = family.len() == oracle.len()
        && unmatched_family.is_empty()
        && unmatched_oracle.is_empty()
        && discrepancies.iter().filter(|d| d.implemented).all(|d| d.agrees);
    Ok(ReconciliationReport {
        group: group.to_string(),
        valence,
        map_type: ty,
        variant,
        family_count: family.len(),
        oracle_count: oracle.len(),
        matching,
        unmatched_family,
        unmatched_oracle,
        maps,
        discrepancies,
        agree,
    })
}

fn reading(topic: &str, reading: &str, count: usize, oracle: usize, implemented: bool) -> Discrepancy {
    Discrepancy { topic: topic.into(), reading: reading.into(), count, oracle_count: oracle, agrees: count == oracle, implemented }
}

fn readings(group: &AbelianType, valence: usize, ty: MapType, variant: Variant, family: &[FamilyMap], oracle: usize) -> Result<Vec<Discrepancy>> {
    let p = group.prime().unwrap();
    let n = match ty {
        MapType::I => valence as u64 / 2,
        MapType::II => valence as u64,
    };
    let mut out = Vec::new();
    match variant {
        Variant::ElementaryI | Variant::ElementaryII => {
            let topic = "elementary exponent range and lcm clause";
            let (printed, doubled) = elementary_clause_counts(p, group.rank(), n)?;
            out.push(reading(topic, "K ≤ r with lcm of d(λ) equal to n'", printed, oracle, false));
            out.push(reading(topic, "K ≤ r with lcm of d(λ) equal to 2n'", doubled, oracle, false));
            out.push(reading(topic, "K ≤ p^r, admissibility filter", family.len(), oracle, true));
        }
        Variant::Rank2 => {
            let topic = "rank-two quadratic case";
            let tags: Vec<Option<QuadraticReading>> = family.iter().map(|f| quadratic_reading(p, n, &f.params)).collect();
            let count = |skip: &[QuadraticReading]| tags.iter().filter(|t| !t.is_some_and(|t| skip.contains(&t))).count();
            use QuadraticReading::*;
            out.push(reading(topic, "d ∈ Θ(p,n), ν = 0", count(&[DegreeTwo, NuShift, OtherQuadratic]), oracle, false));
            out.push(reading(topic, "deg q_λ = 2, ν = 0", count(&[NuShift, OtherQuadratic]), oracle, false));
            out.push(reading(topic, "deg q_λ = 2, constant ν with p^{r+1}ν = 0", count(&[OtherQuadratic]), oracle, false));
            out.push(reading(topic, "printed shapes plus every monic quadratic lift when k = k'", family.len(), oracle, true));
            let shifts = tags.iter().filter(|t| **t == Some(NuShift)).count();
            out.push(reading(topic, &format!("new ideals from ν ≠ 0: {shifts}"), shifts, 0, false));
            let others = tags.iter().filter(|t| **t == Some(OtherQuadratic)).count();
            out.push(reading(topic, &format!("quadratic generators outside the printed shapes: {others}"), others, 0, false));
            let bad = family.iter().filter(|f| f.explicit_check == Some(false)).count();
            out.push(reading("rank-two explicit generator sequences", "sequences not isomorphic to M_Q", bad, 0, false));
        }
        _ => {}
    }
    Ok(out)
}

/// Abelian `p`-groups of order at most `max_order` for each `p` in `primes`.
pub fn p_groups(primes: &[u64], max_order: u64) -> Vec<AbelianType> {
    primes.iter().flat_map(|&p| AbelianType::p_groups_up_to(p, max_order)).collect()
}
