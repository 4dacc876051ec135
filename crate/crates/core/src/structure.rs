//! Abelian-group invariants of `Z_N[x]/Q` and explicit residue tables.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::IdealPresentation;
use crate::poly::Poly;
use crate::zring::{factor, gcd, Modulus};

/// A finite abelian group `Z_{d_1} × … × Z_{d_s}` with `1 < d_1 | d_2 | … | d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelianType {
    invariant_factors: Vec<u64>,
}

impl AbelianType {
    /// Normalises any list of cyclic orders into invariant factors.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
        for &o in orders {
            for (p, e) in factor(o) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut inv = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable();
            // align largest powers with the last invariant factor
            for (i, &q) in powers.iter().rev().enumerate() {
                inv[len - 1 - i] *= q;
            }
        }
        AbelianType { invariant_factors: inv }
    }

    pub fn trivial() -> Self {
        AbelianType { invariant_factors: Vec::new() }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    /// Least common multiple of element orders (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// `Some(p)` when the group is a nontrivial `p`-group.
    pub fn prime(&self) -> Option<u64> {
        let f = factor(self.exponent());
        (f.len() == 1).then(|| f[0].0)
    }

    /// Exponents `e_i` with `d_i = p^{e_i}`, for a `p`-group.
    pub fn p_exponents(&self) -> Option<Vec<u32>> {
        self.prime()?;
        Some(self.invariant_factors.iter().map(|&d| factor(d)[0].1).collect())
    }

    pub fn is_elementary(&self) -> bool {
        self.prime().is_some_and(|p| self.exponent() == p)
    }

    /// Whether `self` is a homomorphic image of `other` (equivalently, a subgroup).
    pub fn divides(&self, other: &AbelianType) -> bool {
        let (a, b) = (&self.invariant_factors, &other.invariant_factors);
        a.len() <= b.len() && a.iter().rev().zip(b.iter().rev()).all(|(x, y)| y % x == 0)
    }

    /// Parses `Z4xZ2`, `Z_4 x Z_2`, `4x2`, `4,2` or `Z3^2`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(spec.to_string());
        let cleaned: String = spec.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut orders = Vec::new();
        for part in cleaned.split(|c| c == 'x' || c == '*' || c == ',' || c == '×') {
            let part = part.strip_prefix('Z').unwrap_or(part);
            let (base, pow) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let d: u64 = base.parse().map_err(|_| bad())?;
            if d < 2 {
                return Err(bad());
            }
            orders.extend(std::iter::repeat(d).take(pow));
        }
        Ok(Self::from_cyclic_orders(&orders))
    }

    /// All abelian `p`-groups of order `p^e`, `1 <= e`, with order at most `max_order`.
    pub fn p_groups_up_to(p: u64, max_order: u64) -> Vec<AbelianType> {
        let mut out = Vec::new();
        let mut e = 1u32;
        while p.checked_pow(e).is_some_and(|o| o <= max_order) {
            for part in partitions(e, e) {
                let orders: Vec<u64> = part.iter().map(|&x| p.pow(x)).collect();
                out.push(Self::from_cyclic_orders(&orders));
            }
            e += 1;
        }
        out
    }
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Invariants of `Z^w / (rows + N Z^w)`: the matrix is diagonalised by
/// unimodular row and column operations, with entries kept modulo `N`
/// (legitimate because `N Z^w` lies in the lattice).
pub fn smith_invariants(rows: &[Vec<u64>], modulus: Modulus, width: usize) -> AbelianType {
    let n = modulus.value() as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&c| c as i128 % n).collect()).collect();
    let h = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < h.min(width) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.map_or(true, |(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        let piv = a[t][t];
        for i in t + 1..h {
            let q = a[i][t] / piv;
            if q != 0 {
                for j in t..width {
                    a[i][j] = (a[i][j] - q * a[t][j]).rem_euclid(n);
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..width {
            let q = a[t][j] / piv;
            if q != 0 {
                for row in a.iter_mut().skip(t) {
                    row[j] = (row[j] - q * row[t]).rem_euclid(n);
                }
            }
            clean &= a[t][j] == 0;
        }
        if clean {
            diag.push(a[t][t] as u64);
            t += 1;
        }
    }
    // Z / gcd(d, N) for each diagonal entry, Z / N for each missing one
    let mut cyclic: Vec<u64> = diag.iter().map(|&d| gcd(d, modulus.value())).collect();
    cyclic.extend(std::iter::repeat(modulus.value()).take(width - diag.len()));
    AbelianType::from_cyclic_orders(&cyclic.into_iter().filter(|&c| c > 1).collect::<Vec<_>>())
}

/// Additive structure of `Z_N[x]/Q`.
pub fn quotient_group_type(q: &IdealPresentation) -> AbelianType {
    smith_invariants(q.rows(), q.modulus(), q.width())
}

/// The residues of `Z_N[x]/Q` with index lookup; elements are normal forms.
#[derive(Clone, Debug)]
pub struct Residues {
    ideal: IdealPresentation,
    elements: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
}

/// Every residue of `Z_N[x]/Q` exactly once.
pub fn enumerate_residues(q: &IdealPresentation) -> Result<Residues> {
    let elements = q.residues()?;
    let index = elements.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(Residues { ideal: q.clone(), elements, index })
}

impl Residues {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn element(&self, i: usize) -> &[u64] {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    /// Index of the class of an arbitrary coefficient vector.
    pub fn index_of_vec(&self, v: &[u64]) -> usize {
        self.index[&self.ideal.normal_form_vec(v)]
    }

    pub fn index_of_poly(&self, f: &Poly) -> Result<usize> {
        Ok(self.index_of_vec(&self.ideal.to_vec(f)?))
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let m = self.ideal.modulus();
        let v: Vec<u64> = self.elements[i].iter().zip(&self.elements[j]).map(|(&a, &b)| m.add(a, b)).collect();
        self.index_of_vec(&v)
    }

    pub fn neg(&self, i: usize) -> usize {
        let m = self.ideal.modulus();
        let v: Vec<u64> = self.elements[i].iter().map(|&a| m.neg(a)).collect();
        self.index_of_vec(&v)
    }

    pub fn mul_x(&self, i: usize) -> usize {
        self.index_of_vec(&crate::ideals::shift_mod(&self.elements[i], self.ideal.context()))
    }

    pub fn label(&self, i: usize) -> String {
        Poly::new(self.elements[i].clone(), self.ideal.modulus()).to_string()
    }
}
