//! Plücker-type relations and localization bookkeeping.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{f_element, index_set, perm_action, Monomial};
use crate::error::Result;
use crate::perm::Permutation;

/// A relation `Σ left ≡ Σ right`; both sides are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlueprintRel {
    pub left: Vec<Monomial>,
    pub right: Vec<Monomial>,
}

impl BlueprintRel {
    pub fn new(mut left: Vec<Monomial>, mut right: Vec<Monomial>) -> Self {
        left.sort();
        right.sort();
        BlueprintRel { left, right }
    }

    /// All monomials, forgetting sides.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut all: Vec<Monomial> = self.left.iter().chain(&self.right).cloned().collect();
        all.sort();
        all
    }
}

fn fmt_sum(f: &mut fmt::Formatter<'_>, sum: &[Monomial]) -> fmt::Result {
    if sum.is_empty() {
        return write!(f, "0");
    }
    for (k, m) in sum.iter().enumerate() {
        if k > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{m}")?;
    }
    Ok(())
}

impl fmt::Display for BlueprintRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sum(f, &self.left)?;
        write!(f, " == ")?;
        fmt_sum(f, &self.right)
    }
}

/// One relation per quadruple `i < j < k < l`:
/// `[ij|kl] + [il|jk] ≡ [ik|jl]`, where `[ab|cd]` multiplies the `x_I` whose
/// split separates `{a, b}` from `{c, d}`.
pub fn plucker_relations(n: i64) -> Result<Vec<BlueprintRel>> {
    let idx = index_set(n)?;
    let n = n as u32;
    let pattern = |ab: (u32, u32), cd: (u32, u32)| {
        Monomial::from_factors(idx.iter().filter(|i| i.separates(ab, cd)).map(|&i| (i, 1)))
    };
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    out.push(BlueprintRel::new(
                        vec![pattern((i, j), (k, l)), pattern((i, l), (j, k))],
                        vec![pattern((i, k), (j, l))],
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Divides every monomial by `f^k`.
pub fn localize_relation(r: &BlueprintRel, k: u32) -> BlueprintRel {
    let shift = |ms: &[Monomial]| -> Vec<Monomial> {
        ms.iter()
            .map(|m| {
                let d = m.f_denominator() + k;
                m.clone().with_denominator(d)
            })
            .collect()
    };
    BlueprintRel::new(shift(&r.left), shift(&r.right))
}

/// Multiplies both sides by the largest power of `f` occurring in a
/// denominator, leaving a relation without denominators.
pub fn clear_denominators(r: &BlueprintRel, n: i64) -> Result<BlueprintRel> {
    let f = f_element(n)?;
    let top = r
        .left
        .iter()
        .chain(&r.right)
        .map(Monomial::f_denominator)
        .max()
        .unwrap_or(0);
    let clear = |ms: &[Monomial]| -> Vec<Monomial> {
        ms.iter()
            .map(|m| {
                let mut out = m.clone().with_denominator(0);
                for _ in m.f_denominator()..top {
                    out = out.mul(&f);
                }
                out
            })
            .collect()
    };
    Ok(BlueprintRel::new(clear(&r.left), clear(&r.right)))
}

/// Applies `pi` to every monomial of `r`.
pub fn permute_relation(pi: &Permutation, r: &BlueprintRel) -> BlueprintRel {
    BlueprintRel::new(
        r.left.iter().map(|m| perm_action(pi, m)).collect(),
        r.right.iter().map(|m| perm_action(pi, m)).collect(),
    )
}

/// Relations as unordered monomial triples. A permutation moves the three
/// separation patterns of a quadruple among themselves, possibly across sides,
/// so relation sets are compared in this form.
pub fn relation_triples(rels: &[BlueprintRel]) -> BTreeSet<Vec<Monomial>> {
    rels.iter().map(BlueprintRel::monomials).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::{is_simplex, SubsetIndex};

    #[test]
    fn small_relations() {
        let four = plucker_relations(4).unwrap();
        assert_eq!(four.len(), 1);
        assert_eq!(four[0].to_string(), "x{1,2} + x{1,4} == x{1,3}");
        let five = plucker_relations(5).unwrap();
        assert_eq!(five.len(), 5);
        assert_eq!(
            five[0].to_string(),
            "x{1,2}*x{1,2,5} + x{1,4}*x{1,4,5} == x{1,3}*x{1,3,5}"
        );
        assert_eq!(
            five[4].to_string(),
            "x{1,2,3}*x{1,4,5} + x{1,2,5}*x{1,3,4} == x{1,2,4}*x{1,3,5}"
        );
        assert_eq!(plucker_relations(6).unwrap().len(), 15);
    }

    fn supports_are_simplexes(n: i64) -> bool {
        plucker_relations(n).unwrap().iter().all(|r| {
            r.monomials().iter().all(|m| {
                let support: Vec<SubsetIndex> = m.exponents().keys().copied().collect();
                is_simplex(&support, n as usize)
            })
        })
    }

    #[test]
    fn monomial_supports() {
        for n in 4..=7 {
            assert!(plucker_relations(n)
                .unwrap()
                .iter()
                .all(|r| r.monomials().len() == 3));
        }
        assert!(supports_are_simplexes(4));
        assert!(supports_are_simplexes(5));
        // {1,2,5} and {1,2,6} both separate 12|34
        assert!(!supports_are_simplexes(6));
    }

    #[test]
    fn localization_round_trip() {
        let r = plucker_relations(4).unwrap().remove(0);
        assert_eq!(localize_relation(&r, 0), r);
        let loc = localize_relation(&r, 1);
        assert!(loc.monomials().iter().all(|m| m.f_denominator() == 1));
        assert_eq!(loc.to_string(), "x{1,2}/f + x{1,4}/f == x{1,3}/f");
        assert_eq!(clear_denominators(&loc, 4).unwrap(), r);
        let twice = localize_relation(&localize_relation(&r, 2), 1);
        assert_eq!(clear_denominators(&twice, 4).unwrap(), r);
    }

    #[test]
    fn transposition_moves_quadruples() {
        let five = plucker_relations(5).unwrap();
        let swap = Permutation::from_cycles(5, &[&[4, 5]]).unwrap();
        let moved = permute_relation(&swap, &five[0]);
        assert_eq!(moved.monomials(), five[1].monomials());
    }

    #[test]
    fn closure_under_s5() {
        let rels = plucker_relations(5).unwrap();
        let triples = relation_triples(&rels);
        for pi in Permutation::all(5) {
            let img: Vec<BlueprintRel> = rels.iter().map(|r| permute_relation(&pi, r)).collect();
            assert_eq!(relation_triples(&img), triples);
        }
    }
}
