//! Crossed products `𝒜 ⋊ G` of a blueprint with a group of marking
//! permutations.

use std::fmt;

use serde::Serialize;

use super::relations::plucker_relations;
use super::{perm_action, BlueprintRel, Monomial};
use crate::error::{range, Error, Result};
use crate::perm::Permutation;

/// A pair `(Σ a_i, g)`. The permutation's degree is the number of markings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CrossedElem {
    pub sum: Vec<Monomial>,
    pub perm: Permutation,
}

impl CrossedElem {
    pub fn new(mut sum: Vec<Monomial>, perm: Permutation) -> Self {
        sum.sort();
        CrossedElem { sum, perm }
    }

    /// `(1, e)` on `n` markings.
    pub fn unit(n: usize) -> Self {
        CrossedElem::new(vec![Monomial::one()], Permutation::identity(n))
    }
}

impl fmt::Display for CrossedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if self.sum.is_empty() {
            write!(f, "0")?;
        }
        for (k, m) in self.sum.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ", {})", self.perm)
    }
}

/// `(a, g)(a', g') = (a · g(a'), g g')`, extended bilinearly over sums.
pub fn crossed_mul(x: &CrossedElem, y: &CrossedElem) -> Result<CrossedElem> {
    if x.perm.degree() != y.perm.degree() {
        return Err(Error::Incompatible(format!(
            "permutations of degree {} and {}",
            x.perm.degree(),
            y.perm.degree()
        )));
    }
    let moved: Vec<Monomial> = y.sum.iter().map(|m| perm_action(&x.perm, m)).collect();
    let sum = x
        .sum
        .iter()
        .flat_map(|a| moved.iter().map(move |b| a.mul(b)))
        .collect();
    Ok(CrossedElem::new(sum, x.perm.compose(&y.perm)))
}

/// `((Σ a_i, g), (Σ b_j, g))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossedRel {
    pub left: CrossedElem,
    pub right: CrossedElem,
}

impl fmt::Display for CrossedRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.left, self.right)
    }
}

/// Tags both sides of every relation with every group element. Group elements
/// of smaller degree are extended by fixed points.
pub fn crossed_relations(
    rels: &[BlueprintRel],
    group: &[Permutation],
    n: usize,
) -> Result<Vec<CrossedRel>> {
    let mut out = Vec::with_capacity(rels.len() * group.len());
    for g in group {
        if g.degree() > n {
            return Err(Error::Incompatible(format!(
                "{g} does not act on {n} markings"
            )));
        }
        let g = g.extend(n);
        for r in rels {
            out.push(CrossedRel {
                left: CrossedElem::new(r.left.clone(), g.clone()),
                right: CrossedElem::new(r.right.clone(), g.clone()),
            });
        }
    }
    Ok(out)
}

/// Permutations of `{1..2g}` commuting with `(1 2)(3 4)⋯(2g-1 2g)`: permute
/// the pairs, then swap inside any of them. Sorted by image list.
pub fn centralizer_subgroup(g: i64) -> Result<Vec<Permutation>> {
    if !(1..=5).contains(&g) {
        return Err(range("g", g, "1 <= g <= 5"));
    }
    let g = g as usize;
    let mut out = Vec::new();
    for sigma in Permutation::all(g) {
        for flips in 0u32..1 << g {
            let mut images = vec![0u32; 2 * g];
            for p in 0..g {
                let q = sigma.images()[p] as usize - 1;
                let flip = flips >> p & 1;
                images[2 * p] = (2 * q) as u32 + 1 + flip;
                images[2 * p + 1] = (2 * q) as u32 + 2 - flip;
            }
            out.push(Permutation::from_images(images)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Crossed-product relations for a genus-zero boundary stratum: the
/// Plücker relations of `M̄_{0,n}` tagged by the centralizer of the
/// involution pairing the first `2g` markings.
pub fn boundary_crossed_relations(g: i64, n: i64) -> Result<Vec<CrossedRel>> {
    if n < (2 * g).max(4) {
        return Err(range("n", n, "n >= max(2g, 4)"));
    }
    let group = centralizer_subgroup(g)?;
    crossed_relations(&plucker_relations(n)?, &group, n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::{index_set, SubsetIndex};

    #[test]
    fn centralizer_orders() {
        assert_eq!(centralizer_subgroup(1).unwrap().len(), 2);
        assert_eq!(centralizer_subgroup(2).unwrap().len(), 8);
        assert_eq!(centralizer_subgroup(3).unwrap().len(), 48);
        assert!(centralizer_subgroup(0).is_err());
        let inv = Permutation::from_cycles(6, &[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        let brute: Vec<Permutation> = Permutation::all(6)
            .into_iter()
            .filter(|p| p.compose(&inv) == inv.compose(p))
            .collect();
        assert_eq!(brute, centralizer_subgroup(3).unwrap());
    }

    #[test]
    fn untwisted_and_conjugation() {
        let idx = index_set(5).unwrap();
        let m = Monomial::var(idx[0]);
        let m2 = Monomial::var(idx[5]);
        let e = Permutation::identity(5);
        let p = crossed_mul(
            &CrossedElem::new(vec![m.clone()], e.clone()),
            &CrossedElem::new(vec![m2.clone()], e.clone()),
        )
        .unwrap();
        assert_eq!(p, CrossedElem::new(vec![m.mul(&m2)], e.clone()));

        let g = Permutation::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        let one = vec![Monomial::one()];
        let left = CrossedElem::new(one.clone(), g.clone());
        let right = CrossedElem::new(one, g.inverse());
        let mid = CrossedElem::new(vec![m.clone()], e.clone());
        let conj = crossed_mul(&crossed_mul(&left, &mid).unwrap(), &right).unwrap();
        assert_eq!(conj, CrossedElem::new(vec![perm_action(&g, &m)], e));
        assert_eq!(
            conj.sum[0],
            Monomial::var(SubsetIndex::new(&[1, 3], 5).unwrap())
        );

        let unit = CrossedElem::unit(5);
        assert_eq!(crossed_mul(&unit, &left).unwrap(), left);
        assert_eq!(crossed_mul(&left, &unit).unwrap(), left);
        assert!(crossed_mul(&unit, &CrossedElem::unit(4)).is_err());
    }

    #[test]
    fn relation_counts() {
        let five = plucker_relations(5).unwrap();
        let trivial = crossed_relations(&five, &[Permutation::identity(5)], 5).unwrap();
        assert_eq!(trivial.len(), 5);
        assert!(trivial.iter().all(|r| r.left.perm.is_identity()));
        let pair = centralizer_subgroup(1).unwrap();
        assert_eq!(crossed_relations(&five, &pair, 5).unwrap().len(), 10);
        assert_eq!(boundary_crossed_relations(2, 6).unwrap().len(), 15 * 8);
        assert!(boundary_crossed_relations(3, 5).is_err());
        assert_eq!(
            trivial[0].to_string(),
            "(x{1,2}*x{1,2,5} + x{1,4}*x{1,4,5}, e) == (x{1,3}*x{1,3,5}, e)"
        );
    }
}
