//! Balanced Cayley maps on finite abelian groups: the standard maps `M_Q`,
//! verification straight from the definitions, isomorphism, face tracing, and
//! a brute-force enumerator used as an independent oracle.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::{admissibility, admissibility_type2, IdealPresentation};
use crate::poly::Poly;
use crate::structure::{enumerate_residues, AbelianType};
use crate::zring::{factor, gcd};

const NONE: u32 = u32::MAX;

/// Largest group for which an addition table is built.
pub const MAX_TABLE_ORDER: usize = 1 << 12;

/// A finite abelian group given by its full addition table.
#[derive(Clone, Debug)]
pub struct GroupTable {
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    labels: Vec<String>,
    group_type: AbelianType,
    /// Primary-decomposition coordinates (only for tables built from a type).
    coords: Option<Vec<u64>>,
}

impl GroupTable {
    fn build(order: usize, group_type: AbelianType, labels: Vec<String>, add_fn: impl Fn(usize, usize) -> usize, zero: usize) -> Result<Self> {
        if order > MAX_TABLE_ORDER {
            return Err(Error::TooLarge(format!("group of order {order} exceeds the table limit")));
        }
        let mut add = vec![0u32; order * order];
        for i in 0..order {
            for j in i..order {
                let s = add_fn(i, j) as u32;
                add[i * order + j] = s;
                add[j * order + i] = s;
            }
        }
        let mut neg = vec![0u32; order];
        for i in 0..order {
            neg[i] = (0..order).find(|&j| add[i * order + j] as usize == zero).unwrap() as u32;
        }
        Ok(GroupTable { order, add, neg, zero, labels, group_type, coords: None })
    }

    /// The group `Z_{m_1} × … × Z_{m_s}` on its primary decomposition.
    pub fn from_type(t: &AbelianType) -> Result<Self> {
        let moduli = primary_moduli(t);
        let order: usize = moduli.iter().map(|&m| m as usize).product();
        if order > MAX_TABLE_ORDER {
            return Err(Error::TooLarge(format!("group of order {order} exceeds the table limit")));
        }
        let decode = |mut i: usize| -> Vec<u64> {
            moduli.iter().map(|&m| {
                let c = (i % m as usize) as u64;
                i /= m as usize;
                c
            }).collect()
        };
        let encode = |v: &[u64]| -> usize {
            v.iter().zip(&moduli).rev().fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
        };
        let labels = (0..order).map(|i| {
            let v = decode(i);
            format!("({})", v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        }).collect();
        let mut g = Self::build(order, t.clone(), labels, |i, j| {
            let (a, b) = (decode(i), decode(j));
            let s: Vec<u64> = a.iter().zip(&b).zip(&moduli).map(|((x, y), m)| (x + y) % m).collect();
            encode(&s)
        }, 0)?;
        g.coords = Some(moduli);
        Ok(g)
    }

    /// The additive group of `Z_N[x]/Q`, elements indexed as in `enumerate_residues`.
    pub fn from_ideal(q: &IdealPresentation) -> Result<Self> {
        let res = enumerate_residues(q)?;
        let t = crate::structure::quotient_group_type(q);
        let labels = (0..res.len()).map(|i| res.label(i)).collect();
        let zero = res.index_of_vec(&vec![0; q.width()]);
        Self::build(res.len(), t, labels, |i, j| res.add(i, j), zero)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `c · a`.
    pub fn scalar(&self, c: u64, a: usize) -> usize {
        let mut acc = self.zero;
        let mut base = a;
        let mut c = c;
        while c > 0 {
            if c & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            c >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut acc = a;
        while acc != self.zero {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    /// Element with the given primary coordinates (smallest modulus first);
    /// only for tables built by [`GroupTable::from_type`].
    pub fn element(&self, coords: &[u64]) -> Result<usize> {
        let moduli = self.coords.as_ref().ok_or_else(|| Error::InvalidGroup("table has no coordinates".into()))?;
        if coords.len() != moduli.len() {
            return Err(Error::InvalidParameter(format!("expected {} coordinates", moduli.len())));
        }
        Ok(coords.iter().zip(moduli).rev().fold(0usize, |acc, (&c, &m)| acc * m as usize + (c % m) as usize))
    }

    /// Moduli of the primary coordinates, when the table has them.
    pub fn coordinate_moduli(&self) -> Option<&[u64]> {
        self.coords.as_deref()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn group_type(&self) -> &AbelianType {
        &self.group_type
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.zero] = true;
        let mut queue = VecDeque::from([self.zero]);
        while let Some(v) = queue.pop_front() {
            for &g in gens {
                let w = self.add(v, g);
                if !mask[w] {
                    mask[w] = true;
                    queue.push_back(w);
                }
            }
        }
        mask
    }
}

fn primary_moduli(t: &AbelianType) -> Vec<u64> {
    let mut out = Vec::new();
    for &d in t.invariant_factors() {
        for (p, e) in factor(d) {
            out.push(p.pow(e));
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MapType {
    I,
    II,
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapType::I => write!(f, "I"),
            MapType::II => write!(f, "II"),
        }
    }
}

/// A balanced Cayley map `CM(G, Ω, ρ)` with `Ω` listed in `ρ`-order.
#[derive(Clone, Debug)]
pub struct CayleyMapRecord {
    group: Arc<GroupTable>,
    omega: Vec<usize>,
    rho_cycle: Vec<usize>,
    rho_next: Vec<u32>,
    map_type: MapType,
    ideal: Option<IdealPresentation>,
}

impl CayleyMapRecord {
    /// From `ω_1, …, ω_n`: type I uses `Ω = {±ω_i}` with `ρ(ω_n) = -ω_1`, type II
    /// uses `Ω = {ω_i}` with `ρ(ω_n) = ω_1`.
    pub fn from_sequence(group: Arc<GroupTable>, omega: Vec<usize>, map_type: MapType) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::DegenerateOmega("empty generating sequence".into()));
        }
        let mut rho_cycle = omega.clone();
        if map_type == MapType::I {
            rho_cycle.extend(omega.iter().map(|&w| group.neg(w)));
        }
        let mut rho_next = vec![NONE; group.order()];
        for (i, &w) in rho_cycle.iter().enumerate() {
            if w == group.zero() {
                return Err(Error::DegenerateOmega("the identity lies in Omega".into()));
            }
            if rho_next[w] != NONE {
                return Err(Error::DegenerateOmega(format!("{} occurs twice in Omega", group.label(w))));
            }
            rho_next[w] = rho_cycle[(i + 1) % rho_cycle.len()] as u32;
        }
        if map_type == MapType::II && omega.iter().any(|&w| group.add(w, w) != group.zero()) {
            return Err(Error::DegenerateOmega("type II generators must have order 2".into()));
        }
        if group.span(&omega).iter().any(|&b| !b) {
            return Err(Error::DegenerateOmega("Omega does not generate the group".into()));
        }
        Ok(CayleyMapRecord { group, omega, rho_cycle, rho_next, map_type, ideal: None })
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<GroupTable> {
        self.group.clone()
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    /// `Ω` in cyclic `ρ`-order starting at `ω_1`.
    pub fn rho_cycle(&self) -> &[usize] {
        &self.rho_cycle
    }

    pub fn rho(&self, w: usize) -> Option<usize> {
        let r = self.rho_next[w];
        (r != NONE).then_some(r as usize)
    }

    pub fn valence(&self) -> usize {
        self.rho_cycle.len()
    }

    pub fn map_type(&self) -> MapType {
        self.map_type
    }

    pub fn ideal(&self) -> Option<&IdealPresentation> {
        self.ideal.as_ref()
    }

    /// `n`: half the valence for type I, the valence for type II.
    pub fn n(&self) -> usize {
        self.omega.len()
    }
}

/// The standard map `M_Q` on `Z_N[x]/Q`: `ω_i` is the class of `x^{i-1}`.
pub fn build_map(q: &IdealPresentation, n: u64, map_type: MapType) -> Result<CayleyMapRecord> {
    let clause = match map_type {
        MapType::I => admissibility(q, n)?,
        MapType::II => admissibility_type2(q, n)?,
    };
    if let Some(c) = clause {
        return Err(Error::NotAdmissible(c));
    }
    let res = enumerate_residues(q)?;
    let group = Arc::new(GroupTable::from_ideal(q)?);
    let md = q.modulus();
    let omega = (0..n as usize).map(|i| res.index_of_poly(&Poly::monomial(1, i, md))).collect::<Result<Vec<_>>>()?;
    let mut rec = CayleyMapRecord::from_sequence(group, omega, map_type)?;
    rec.ideal = Some(q.clone());
    Ok(rec)
}

/// Propagates `φ(g + ω) = φ(g) + img(ω)` from `φ(0) = 0` over the Cayley graph
/// of `gens` (which must generate `G`), checking consistency; returns `φ` if it
/// is a well-defined bijective homomorphism `G → H`.
fn extend_hom(g: &GroupTable, h: &GroupTable, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let mut phi = vec![usize::MAX; g.order()];
    let mut hit = vec![false; h.order()];
    phi[g.zero()] = h.zero();
    hit[h.zero()] = true;
    let mut queue = VecDeque::from([g.zero()]);
    while let Some(v) = queue.pop_front() {
        for (&w, &iw) in gens.iter().zip(imgs) {
            let t = g.add(v, w);
            let it = h.add(phi[v], iw);
            if phi[t] == usize::MAX {
                if hit[it] {
                    return None;
                }
                phi[t] = it;
                hit[it] = true;
                queue.push_back(t);
            } else if phi[t] != it {
                return None;
            }
        }
    }
    phi.iter().all(|&x| x != usize::MAX).then_some(phi)
}

/// Whether `ρ` extends to an automorphism of `G`; the witness is that
/// automorphism as a table.
pub fn is_rbcm(map: &CayleyMapRecord) -> (bool, Option<Vec<usize>>) {
    let imgs: Vec<usize> = map.rho_cycle.iter().map(|&w| map.rho(w).unwrap()).collect();
    match extend_hom(&map.group, &map.group, &map.rho_cycle, &imgs) {
        Some(phi) => (true, Some(phi)),
        None => (false, None),
    }
}

/// Whether a group isomorphism `σ` with `σ(Ω) = Ω'` and `σρ = ρ'σ` exists.
/// `σ` is pinned by the image of `ω_1`, which is tried at every point of `Ω'`.
pub fn maps_isomorphic(a: &CayleyMapRecord, b: &CayleyMapRecord) -> Result<bool> {
    if a.map_type != b.map_type {
        return Err(Error::TypeMismatch);
    }
    Ok(find_isomorphism(a, b).is_some())
}

/// The isomorphism `σ` behind [`maps_isomorphic`], as a table.
pub fn find_isomorphism(a: &CayleyMapRecord, b: &CayleyMapRecord) -> Option<Vec<usize>> {
    if a.valence() != b.valence() || a.group.order() != b.group.order() || a.group.group_type() != b.group.group_type() {
        return None;
    }
    let v = a.valence();
    for shift in 0..v {
        let imgs: Vec<usize> = (0..v).map(|i| b.rho_cycle[(i + shift) % v]).collect();
        if let Some(phi) = extend_hom(&a.group, &b.group, &a.rho_cycle, &imgs) {
            return Some(phi);
        }
    }
    None
}

/// Vertex, edge and face counts of the embedding, with genus and face lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: i64,
    /// face length → number of faces
    pub face_lengths: BTreeMap<usize, usize>,
}

/// Faces by the rule `(v, ω) → (v + ω, ρ(-ω))`.
pub fn trace_faces(map: &CayleyMapRecord) -> MapStats {
    let g = &map.group;
    let val = map.valence();
    let pos: HashMap<usize, usize> = map.rho_cycle.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut seen = vec![false; g.order() * val];
    let mut face_lengths = BTreeMap::new();
    let mut faces = 0;
    for start in 0..seen.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut len = 0;
        let mut dart = start;
        while !seen[dart] {
            seen[dart] = true;
            len += 1;
            let (v, i) = (dart / val, dart % val);
            let w = map.rho_cycle[i];
            let next_w = map.rho(g.neg(w)).unwrap();
            dart = g.add(v, w) * val + pos[&next_w];
        }
        *face_lengths.entry(len).or_insert(0) += 1;
    }
    let vertices = g.order();
    let edges = vertices * val / 2;
    let chi = vertices as i64 - edges as i64 + faces as i64;
    MapStats { vertices, edges, faces, genus: (2 - chi) / 2, face_lengths }
}

/// Checks straight from the definition that the map automorphisms act
/// transitively on darts: for every dart `d` there is a dart permutation sending
/// `(0, ω_1)` to `d` and commuting with rotation and with the edge involution.
pub fn is_arc_regular(map: &CayleyMapRecord) -> bool {
    let g = &map.group;
    let val = map.valence();
    let nd = g.order() * val;
    let pos: HashMap<usize, usize> = map.rho_cycle.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let rot = |d: usize| (d / val) * val + (d % val + 1) % val;
    let inv = |d: usize| {
        let (v, i) = (d / val, d % val);
        let w = map.rho_cycle[i];
        g.add(v, w) * val + pos[&g.neg(w)]
    };
    let base = g.zero() * val;
    (0..nd).all(|target| {
        let mut f = vec![usize::MAX; nd];
        let mut used = vec![false; nd];
        f[base] = target;
        used[target] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(d) = queue.pop_front() {
            for (x, fx) in [(rot(d), rot(f[d])), (inv(d), inv(f[d]))] {
                if f[x] == usize::MAX {
                    if used[fx] {
                        return false;
                    }
                    f[x] = fx;
                    used[fx] = true;
                    queue.push_back(x);
                } else if f[x] != fx {
                    return false;
                }
            }
        }
        f.iter().all(|&x| x != usize::MAX)
    })
}

/// Group-order cap for the oracle: `RBCM_ORACLE_BUDGET`, default 128.
pub fn oracle_budget() -> usize {
    std::env::var("RBCM_ORACLE_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(128)
}

/// Automorphism generators of the primary decomposition, as permutations:
/// unit scalings of each summand and the elementary transvections
/// `e_i ↦ e_i + p^{max(0, e_j - e_i)} e_j` within each prime.
fn automorphism_generators(g: &GroupTable) -> Vec<Vec<u32>> {
    let Some(moduli) = g.coords.clone() else { return Vec::new() };
    let s = moduli.len();
    let basis: Vec<usize> = (0..s).map(|i| moduli[..i].iter().map(|&m| m as usize).product()).collect();
    let mut images_list: Vec<Vec<usize>> = Vec::new();
    for i in 0..s {
        let m = moduli[i];
        let units: Vec<u64> = if m <= 2 {
            Vec::new()
        } else if m % 2 == 0 {
            vec![m - 1, 5 % m]
        } else {
            let phi = m / factor(m)[0].0 * (factor(m)[0].0 - 1);
            let root = (2..m).find(|&u| gcd(u, m) == 1 && crate::zring::multiplicative_order(u, m).ok() == Some(phi)).unwrap();
            vec![root]
        };
        for u in units {
            let mut imgs = basis.clone();
            imgs[i] = g.scalar(u, basis[i]);
            images_list.push(imgs);
        }
        for j in 0..s {
            let (mi, mj) = (moduli[i], moduli[j]);
            if i == j || gcd(mi, mj) == 1 {
                continue;
            }
            let c = if mj > mi { mj / mi } else { 1 };
            let mut imgs = basis.clone();
            imgs[i] = g.add(basis[i], g.scalar(c, basis[j]));
            images_list.push(imgs);
        }
    }
    images_list
        .into_iter()
        .filter_map(|imgs| extend_hom(g, g, &basis, &imgs))
        .map(|phi| phi.into_iter().map(|x| x as u32).collect())
        .collect()
}

fn uf_find(parent: &mut [u32], x: u32) -> u32 {
    let mut r = x;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut y = x;
    while parent[y as usize] != r {
        let next = parent[y as usize];
        parent[y as usize] = r;
        y = next;
    }
    r
}

/// For each prefix length `s <= depth`, marks the tuples that are the
/// lexicographically least member of their `Aut(G)`-orbit (first entry most
/// significant, so prefixes of representatives are representatives).
fn canonical_prefixes(g: &GroupTable, depth: usize) -> Vec<Vec<bool>> {
    let gens = automorphism_generators(g);
    let ord = g.order();
    let mut out = Vec::new();
    for s in 1..=depth {
        let total = ord.pow(s as u32);
        let mut parent: Vec<u32> = (0..total as u32).collect();
        let mut digits = vec![0usize; s];
        for idx in 0..total {
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = rest % ord;
                rest /= ord;
            }
            for a in &gens {
                let img = digits.iter().fold(0usize, |acc, &d| acc * ord + a[d] as usize);
                let (ra, rb) = (uf_find(&mut parent, idx as u32), uf_find(&mut parent, img as u32));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi as usize] = lo;
                }
            }
        }
        out.push((0..total as u32).map(|i| uf_find(&mut parent, i) == i).collect());
    }
    out
}

struct OracleSearch<'a> {
    g: &'a GroupTable,
    n: usize,
    map_type: MapType,
    candidates: Vec<usize>,
    canon: Vec<Vec<bool>>,
    found: Vec<Vec<usize>>,
}

impl OracleSearch<'_> {
    /// `seq = ω_1..ω_i`; `phi` is defined on `H_{i-1} = <ω_1..ω_{i-1}>`
    /// (`in_prev`), with `phi(ω_j) = ω_{j+1}`.
    fn dfs(&mut self, seq: &mut Vec<usize>, phi: &[u32], in_prev: &[bool]) {
        let g = self.g;
        let i = seq.len();
        let last = seq[i - 1];
        // H_i = H_{i-1} + <ω_i>
        let h_i = {
            let mut gens: Vec<usize> = seq.clone();
            gens.dedup();
            g.span(&gens)
        };
        let whole = h_i.iter().all(|&b| b);
        if !whole && i == self.n {
            return;
        }
        let closing = match self.map_type {
            MapType::I => g.neg(seq[0]),
            MapType::II => seq[0],
        };
        let choices: Vec<usize> = if whole && i == self.n {
            vec![closing]
        } else if whole {
            self.candidates.clone()
        } else {
            self.candidates.iter().copied().filter(|&y| !h_i[y]).collect()
        };
        for y in choices {
            if i < self.n && self.collides(seq, y) {
                continue;
            }
            // prefix (ω_1..ω_{i+1}) must be an orbit representative
            if let Some(mask) = self.canon.get(i).filter(|_| i < self.n) {
                let idx = seq.iter().chain(std::iter::once(&y)).fold(0usize, |acc, &d| acc * g.order() + d);
                if !mask[idx] {
                    continue;
                }
            }
            let Some((new_phi, _)) = extend_partial(g, phi, in_prev, last, y) else { continue };
            if whole {
                self.finish(seq, y, &new_phi);
            } else {
                seq.push(y);
                self.dfs(seq, &new_phi, &h_i);
                seq.pop();
            }
        }
    }

    fn collides(&self, seq: &[usize], y: usize) -> bool {
        let g = self.g;
        seq.iter().any(|&w| w == y || (self.map_type == MapType::I && g.neg(w) == y))
            || (self.map_type == MapType::I && g.neg(y) == y)
    }

    /// `phi` is now total; run the forced tail and test closure.
    fn finish(&mut self, seq: &[usize], next: usize, phi: &[u32]) {
        let g = self.g;
        let mut full = seq.to_vec();
        let mut y = next;
        while full.len() < self.n {
            if self.collides(&full, y) {
                return;
            }
            full.push(y);
            y = phi[*full.last().unwrap()] as usize;
        }
        let closing = match self.map_type {
            MapType::I => g.neg(full[0]),
            MapType::II => full[0],
        };
        if y == closing {
            self.found.push(full);
        }
    }
}

/// Extends `phi` from `H'` (mask `in_prev`) to `H' + <x>` by `phi(x) = y`;
/// `None` if this is not a well-defined injective homomorphism.
fn extend_partial(g: &GroupTable, phi: &[u32], in_prev: &[bool], x: usize, y: usize) -> Option<(Vec<u32>, Vec<bool>)> {
    let mut out = phi.to_vec();
    let mut mask = in_prev.to_vec();
    let mut used = vec![false; g.order()];
    let members: Vec<usize> = (0..g.order()).filter(|&h| in_prev[h]).collect();
    for &h in &members {
        used[phi[h] as usize] = true;
    }
    let (mut cx, mut cy) = (x, y);
    loop {
        if in_prev[cx] {
            // c·x ∈ H': the relation must be respected
            return (phi[cx] as usize == cy).then_some((out, mask));
        }
        for &h in &members {
            let t = g.add(h, cx);
            let it = g.add(phi[h] as usize, cy);
            if used[it] {
                return None;
            }
            used[it] = true;
            out[t] = it as u32;
            mask[t] = true;
        }
        cx = g.add(cx, x);
        cy = g.add(cy, y);
    }
}

/// One record per isomorphism class of balanced regular Cayley maps of the given
/// type and valence on the abelian group `t`, by exhaustive search over the
/// sequences `ω_1, ω_2 = φ(ω_1), …` with `φ ∈ Aut(G)`.
pub fn brute_force_rbcms(t: &AbelianType, valence: usize, map_type: MapType) -> Result<Vec<CayleyMapRecord>> {
    let order = t.order() as usize;
    if order > oracle_budget() {
        return Err(Error::TooLarge(format!("group order {order} exceeds the oracle budget {}", oracle_budget())));
    }
    if valence > 2 * order.max(1) {
        return Err(Error::TooLarge(format!("valence {valence} exceeds twice the group order")));
    }
    let n = match map_type {
        MapType::I if valence % 2 == 0 && valence >= 2 => valence / 2,
        MapType::II if valence >= 1 => valence,
        _ => return Err(Error::InvalidParameter(format!("valence {valence} is impossible for type {map_type}"))),
    };
    if order == 1 {
        return Ok(Vec::new());
    }
    let g = Arc::new(GroupTable::from_type(t)?);
    let wanted = match map_type {
        MapType::I => t.exponent(),
        MapType::II => 2,
    };
    if map_type == MapType::I && wanted == 2 {
        // every element is its own inverse: ±ω collide
        return Ok(Vec::new());
    }
    if map_type == MapType::II && !(t.is_elementary() && t.prime() == Some(2)) {
        return Ok(Vec::new());
    }
    let candidates: Vec<usize> = (0..order).filter(|&a| g.element_order(a) == wanted).collect();
    let mut depth = 0;
    while depth < 3 && order.pow(depth as u32 + 1) <= 1 << 21 {
        depth += 1;
    }
    let canon = canonical_prefixes(&g, depth.min(n));
    let mut search = OracleSearch { g: &g, n, map_type, candidates: candidates.clone(), canon, found: Vec::new() };
    let phi0 = {
        let mut v = vec![NONE; order];
        v[g.zero()] = g.zero() as u32;
        v
    };
    let mut prev = vec![false; order];
    prev[g.zero()] = true;
    for &w in &candidates {
        if !search.canon.is_empty() && !search.canon[0][w] {
            continue;
        }
        search.dfs(&mut vec![w], &phi0, &prev);
    }
    let mut classes: Vec<CayleyMapRecord> = Vec::new();
    let mut keys: Vec<MapStats> = Vec::new();
    for seq in search.found {
        let rec = CayleyMapRecord::from_sequence(g.clone(), seq, map_type)?;
        let stats = trace_faces(&rec);
        let dup = classes.iter().zip(&keys).any(|(c, k)| *k == stats && find_isomorphism(c, &rec).is_some());
        if !dup {
            classes.push(rec);
            keys.push(stats);
        }
    }
    Ok(classes)
}
