//! The operad of oriented rooted trees with labelled inputs, and the boundary
//! stratification of `T_{d,n}` (and `M̄_{0,n+1} = T_{1,n}`) it indexes.
//!
//! A stable tree with `n` inputs indexes a stratum of `T_{d,n}`; the stratum is
//! the product over vertices `v` of the open stratum `TH_{d,in(v)}`, where
//! `in(v)` counts incoming tails and child edges. Summing these classes over
//! all stable trees recovers `[T_{d,n}]`.

mod tree;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{range, Error, Result};
use crate::genseries::open_stratum_class;
use crate::motive::{blowup_class, proj_class, MotClass};

pub use tree::{Flag, Marking, Nested, RootedTree};

/// A boundary stratum of `T_{d,n}`: a stable tree together with the dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumDescriptor {
    tree: RootedTree,
    d: u32,
}

impl StratumDescriptor {
    pub fn new(tree: RootedTree, d: i64) -> Result<Self> {
        if d < 1 {
            return Err(range("d", d, "d >= 1"));
        }
        if !tree.is_stable() {
            return Err(Error::Unstable(tree.to_string()));
        }
        Ok(StratumDescriptor { tree, d: d as u32 })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Codimension of the stratum: one boundary divisor per edge.
    pub fn codimension(&self) -> usize {
        self.tree.edge_count()
    }

    /// Class of the open stratum, `Π_v [TH_{d,in(v)}]`.
    pub fn class(&self) -> MotClass {
        self.tree
            .in_degrees()
            .into_iter()
            .map(|k| open_stratum_class(self.d as i64, k as i64).expect("stable in-degree >= 2"))
            .product()
    }
}

fn require_stable(tau: &RootedTree) -> Result<()> {
    if tau.is_stable() {
        Ok(())
    } else {
        Err(Error::Unstable(tau.to_string()))
    }
}

/// Class of the rooted tree of `P^d`'s shaped like `tau`.
///
/// The root contributes `[P^d]`. Each further vertex is attached by blowing up
/// a point of its mother (codimension `d`) and gluing its hyperplane
/// `H ≅ P^{d-1}` onto the exceptional divisor, so it adds
/// `[P^d] - [P^{d-1}]` after the blowup. The total is `N [P^d] - (N - 1)`.
pub fn tree_class(tau: &RootedTree, d: i64) -> Result<MotClass> {
    require_stable(tau)?;
    if d < 1 {
        return Err(range("d", d, "d >= 1"));
    }
    let p_d = proj_class(d)?;
    let hyperplane = proj_class(d - 1)?;
    let mut class = p_d.clone();
    for _ in 1..tau.vertex_count() {
        class = blowup_class(&class, &MotClass::one(), d)?;
        class = class + &p_d - &hyperplane;
    }
    Ok(class)
}

/// Points of the tree of `P^d`'s over the degree-`m` extension of `F_1`.
pub fn tree_points(tau: &RootedTree, d: i64, m: u64) -> Result<BigInt> {
    Ok(tree_class(tau, d)?.count_points(m))
}

fn set_partitions(items: &[Marking]) -> Vec<Vec<Vec<Marking>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// All stable nested trees on the given labels. The root's incoming flags
/// are the blocks of a set partition with at least two blocks; singleton
/// blocks are input tails and larger blocks are stable subtrees.
fn stable_nested(labels: &[Marking], memo: &mut BTreeMap<Vec<Marking>, Vec<Nested>>) -> Vec<Nested> {
    if let Some(v) = memo.get(labels) {
        return v.clone();
    }
    let mut out = Vec::new();
    for blocks in set_partitions(labels) {
        if blocks.len() < 2 {
            continue;
        }
        let mut inputs = Vec::new();
        let mut options: Vec<Vec<Nested>> = Vec::new();
        for b in &blocks {
            if b.len() == 1 {
                inputs.push(b[0]);
            } else {
                options.push(stable_nested(b, memo));
            }
        }
        // cartesian product over the subtree choices
        let mut partial: Vec<Vec<Nested>> = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::with_capacity(partial.len() * opts.len());
            for p in &partial {
                for o in opts {
                    let mut q = p.clone();
                    q.push(o.clone());
                    next.push(q);
                }
            }
            partial = next;
        }
        for children in partial {
            out.push(Nested::new(inputs.clone(), children));
        }
    }
    out.sort();
    memo.insert(labels.to_vec(), out.clone());
    out
}

/// Every stable rooted tree with inputs labelled `1..=n`, once per
/// isomorphism class, in canonical order.
pub fn enumerate_stable_trees(n: i64) -> Result<Vec<RootedTree>> {
    Ok(enumerate_stable_nested(n)?
        .iter()
        .map(|t| RootedTree::from_nested(t).expect("generated trees are valid"))
        .collect())
}

/// [`enumerate_stable_trees`] in nested form.
pub fn enumerate_stable_nested(n: i64) -> Result<Vec<Nested>> {
    if n < 2 {
        return Err(range("n", n, "n >= 2"));
    }
    let labels: Vec<Marking> = (1..=n as Marking).collect();
    Ok(stable_nested(&labels, &mut BTreeMap::new()))
}

fn nested_in_degrees(t: &Nested, out: &mut Vec<usize>) {
    out.push(t.in_degree());
    for c in &t.children {
        nested_in_degrees(c, out);
    }
}

/// One row per stratum of `T_{d,n}`.
#[derive(Debug, Clone, Serialize)]
pub struct StratumRow {
    pub tree: Nested,
    pub codimension: usize,
    pub class: MotClass,
}

/// The strata of `T_{d,n}` with their classes, in canonical tree order.
pub fn stratum_table(d: i64, n: i64) -> Result<Vec<StratumRow>> {
    if d < 1 {
        return Err(range("d", d, "d >= 1"));
    }
    let trees = enumerate_stable_nested(n)?;
    let mut open: Vec<MotClass> = Vec::new();
    for k in 0..=n {
        open.push(if k >= 2 {
            open_stratum_class(d, k)?
        } else {
            MotClass::zero()
        });
    }
    Ok(trees
        .into_iter()
        .map(|t| {
            let mut degs = Vec::new();
            nested_in_degrees(&t, &mut degs);
            let class = degs.iter().map(|&k| open[k].clone()).product();
            StratumRow {
                codimension: degs.len() - 1,
                tree: t,
                class,
            }
        })
        .collect())
}

/// `Σ` over stable trees of `Π_v [TH_{d,in(v)}]`.
pub fn strata_sum(d: i64, n: i64) -> Result<MotClass> {
    Ok(stratum_table(d, n)?.into_iter().map(|r| r.class).sum())
}

/// Number of strata of each codimension, index = codimension.
pub fn strata_counts(n: i64) -> Result<Vec<usize>> {
    let mut counts = Vec::new();
    for t in enumerate_stable_nested(n)? {
        let c = t.vertex_count() - 1;
        if counts.len() <= c {
            counts.resize(c + 1, 0);
        }
        counts[c] += 1;
    }
    Ok(counts)
}
