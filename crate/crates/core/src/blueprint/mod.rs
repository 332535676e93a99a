//! Blueprint presentation of `M̄_{0,n}` and crossed-product blueprints.
//!
//! Generators `x_I` are indexed by subsets `I ⊂ {1..n}` with `1 ∈ I`,
//! `|I| ≥ 2` and `|Iᶜ| ≥ 2`; a subset not containing `1` stands for its
//! complement. Such an index is a split of the markings, i.e. an internal edge of
//! a tree with leaves `1..n`.

mod crossed;
mod relations;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{range, Error, Result};
use crate::perm::Permutation;

pub use crossed::{
    boundary_crossed_relations, centralizer_subgroup, crossed_mul, crossed_relations,
    CrossedElem, CrossedRel,
};
pub use relations::{
    clear_denominators, localize_relation, permute_relation, plucker_relations,
    relation_triples, BlueprintRel,
};

/// Largest `n` supported; indices are stored as bitmasks.
pub const MAX_N: usize = 31;

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A canonical generator index: a subset of `{1..n}` containing `1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetIndex {
    bits: u32,
}

impl SubsetIndex {
    /// Canonical index of the split `{I, Iᶜ}`; either side may be given.
    pub fn new(members: &[u32], n: usize) -> Result<Self> {
        if !(4..=MAX_N).contains(&n) {
            return Err(range("n", n as i64, "4 <= n <= 31"));
        }
        let mut bits = 0u32;
        for &m in members {
            if m == 0 || m as usize > n {
                return Err(Error::Parse(format!("{m} is not in 1..={n}")));
            }
            bits |= 1 << (m - 1);
        }
        Self::from_bits(bits, n)
    }

    fn from_bits(bits: u32, n: usize) -> Result<Self> {
        let bits = if bits & 1 == 0 { full_mask(n) & !bits } else { bits };
        let k = bits.count_ones() as usize;
        if k < 2 || n - k < 2 {
            return Err(Error::Parse(format!(
                "subset of size {k} does not give a split of {n} markings"
            )));
        }
        Ok(SubsetIndex { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn members(&self) -> Vec<u32> {
        (0..32).filter(|i| self.bits >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, m: u32) -> bool {
        (1..=32).contains(&m) && self.bits >> (m - 1) & 1 == 1
    }

    /// `I` or `Iᶜ` contains `{a, b}` and misses `{c, d}`.
    pub fn separates(&self, ab: (u32, u32), cd: (u32, u32)) -> bool {
        let side = |x: u32| self.contains(x);
        side(ab.0) == side(ab.1) && side(cd.0) == side(cd.1) && side(ab.0) != side(cd.0)
    }

    /// Image under a permutation of `{1..n}`, re-canonicalized.
    pub fn permute(&self, pi: &Permutation) -> SubsetIndex {
        let n = pi.degree();
        let mut bits = 0;
        for m in self.members() {
            bits |= 1 << (pi.apply(m) - 1);
        }
        SubsetIndex::from_bits(bits, n).expect("permutations preserve split sizes")
    }

    /// Nested or jointly covering: the two splits are compatible.
    pub fn compatible(&self, other: &SubsetIndex, n: usize) -> bool {
        let (a, b) = (self.bits, other.bits);
        a & b == a || a & b == b || a | b == full_mask(n)
    }
}

impl Ord for SubsetIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(&other.members()))
    }
}

impl PartialOrd for SubsetIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{self}")
    }
}

impl Serialize for SubsetIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

/// All canonical indices for `n` markings, ordered by size then members.
pub fn index_set(n: i64) -> Result<Vec<SubsetIndex>> {
    if !(4..=20).contains(&n) {
        return Err(range("n", n, "4 <= n <= 20"));
    }
    let n = n as usize;
    let mut out: Vec<SubsetIndex> = (0..1u32 << (n - 1))
        .filter_map(|rest| SubsetIndex::from_bits(rest << 1 | 1, n).ok())
        .collect();
    out.sort();
    Ok(out)
}

/// Every pair of indices is nested or covers `{1..n}`.
pub fn is_simplex(sigma: &[SubsetIndex], n: usize) -> bool {
    sigma
        .iter()
        .enumerate()
        .all(|(i, a)| sigma[i + 1..].iter().all(|b| a.compatible(b, n)))
}

/// Number of maximal simplexes of the complex of compatible splits, by
/// exhaustive maximal-clique search.
pub fn count_max_simplexes(n: i64) -> Result<u64> {
    if !(4..=8).contains(&n) {
        return Err(range("n", n, "4 <= n <= 8"));
    }
    let idx = index_set(n)?;
    let nu = n as usize;
    let adj: Vec<Vec<bool>> = idx
        .iter()
        .map(|a| idx.iter().map(|b| a != b && a.compatible(b, nu)).collect())
        .collect();
    let mut count = 0;
    let all: Vec<usize> = (0..idx.len()).collect();
    bron_kerbosch(&adj, all, Vec::new(), &mut count);
    Ok(count)
}

fn bron_kerbosch(adj: &[Vec<bool>], mut p: Vec<usize>, mut x: Vec<usize>, count: &mut u64) {
    if p.is_empty() {
        if x.is_empty() {
            *count += 1;
        }
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("p is nonempty");
    let cand: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in cand {
        let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, np, nx, count);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// A monomial in the `x_I`, possibly divided by a power of `f = Π_I x_I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    exponents: BTreeMap<SubsetIndex, u32>,
    f_denominator: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: SubsetIndex) -> Self {
        Monomial::from_factors([(i, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (SubsetIndex, u32)>) -> Self {
        let mut exponents = BTreeMap::new();
        for (i, e) in factors {
            *exponents.entry(i).or_insert(0) += e;
        }
        exponents.retain(|_, e| *e > 0);
        Monomial {
            exponents,
            f_denominator: 0,
        }
    }

    pub fn exponents(&self) -> &BTreeMap<SubsetIndex, u32> {
        &self.exponents
    }

    pub fn f_denominator(&self) -> u32 {
        self.f_denominator
    }

    pub fn with_denominator(mut self, k: u32) -> Self {
        self.f_denominator = k;
        self
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::from_factors(
            self.exponents
                .iter()
                .chain(&other.exponents)
                .map(|(&i, &e)| (i, e)),
        );
        m.f_denominator = self.f_denominator + other.f_denominator;
        m
    }
}

/// `f = Π_{I ∈ ℐ} x_I`.
pub fn f_element(n: i64) -> Result<Monomial> {
    Ok(Monomial::from_factors(index_set(n)?.into_iter().map(|i| (i, 1))))
}

/// Relabels the indices of `m` by `pi` and re-canonicalizes.
pub fn perm_action(pi: &Permutation, m: &Monomial) -> Monomial {
    let mut out = Monomial::from_factors(m.exponents.iter().map(|(i, &e)| (i.permute(pi), e)));
    out.f_denominator = m.f_denominator;
    out
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            write!(f, "1")?;
        }
        for (k, (i, e)) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{i}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        match self.f_denominator {
            0 => Ok(()),
            1 => write!(f, "/f"),
            k => write!(f, "/f^{k}"),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct FactorDoc {
    index: SubsetIndex,
    exp: u32,
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<FactorDoc> = self
            .exponents
            .iter()
            .map(|(&index, &exp)| FactorDoc { index, exp })
            .collect();
        let mut st = s.serialize_struct("Monomial", 2)?;
        st.serialize_field("factors", &factors)?;
        st.serialize_field("f_denominator", &self.f_denominator)?;
        st.end()
    }
}
