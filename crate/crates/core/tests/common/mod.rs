//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use f1kit::treeop::{enumerate_stable_trees, Marking, Nested, RootedTree};
use f1kit::Permutation;

/// The unit together with every stable tree on `1..=k`, `2 <= k <= max`.
pub fn tree_family(max: usize) -> Vec<Vec<RootedTree>> {
    let mut by_arity = vec![Vec::new(); max + 1];
    by_arity[1].push(RootedTree::unit());
    for (k, slot) in by_arity.iter_mut().enumerate().skip(2) {
        *slot = enumerate_stable_trees(k as i64).unwrap();
    }
    by_arity
}

/// All tuples of `len` trees from `family` whose arities sum to at most `budget`.
pub fn tuples(family: &[Vec<RootedTree>], len: usize, budget: usize) -> Vec<Vec<RootedTree>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in 1..family.len() {
        if a + (len - 1) > budget {
            break;
        }
        for t in &family[a] {
            for rest in tuples(family, len - 1, budget - a) {
                let mut v = vec![t.clone()];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Left and right unit laws.
pub fn unit_laws(family: &[Vec<RootedTree>]) -> Result<usize, String> {
    let mut n = 0;
    for tau in family.iter().flatten() {
        let units = vec![RootedTree::unit(); tau.arity()];
        let right = tau.compose(&units).map_err(|e| e.to_string())?;
        check(&right == tau, || format!("right unit fails for {tau}"))?;
        let left = RootedTree::unit()
            .compose(std::slice::from_ref(tau))
            .map_err(|e| e.to_string())?;
        check(&left == tau, || format!("left unit fails for {tau}"))?;
        n += 1;
    }
    Ok(n)
}

/// `(τ ∘ σ) ∘ ρ = τ ∘ (σ_i ∘ ρ_block_i)` for total arity up to `max`.
pub fn associativity(family: &[Vec<RootedTree>], max: usize) -> Result<usize, String> {
    let mut n = 0;
    for tau in family.iter().flatten() {
        let k = tau.arity();
        for sigma in tuples(family, k, max) {
            let inner = tau.compose(&sigma).map_err(|e| e.to_string())?;
            let m = inner.arity();
            for rho in tuples(family, m, max) {
                let lhs = inner.compose(&rho).map_err(|e| e.to_string())?;
                let mut start = 0;
                let mut nested = Vec::new();
                for s in &sigma {
                    let block = &rho[start..start + s.arity()];
                    start += s.arity();
                    nested.push(s.compose(block).map_err(|e| e.to_string())?);
                }
                let rhs = tau.compose(&nested).map_err(|e| e.to_string())?;
                check(lhs == rhs, || {
                    format!("associativity fails for {tau} with {sigma:?} then {rho:?}")
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn offsets(args: &[RootedTree]) -> Vec<Marking> {
    let mut out = vec![0];
    for a in args {
        out.push(out.last().unwrap() + a.arity() as Marking);
    }
    out
}

/// Equivariance in the outer tree and in each argument.
pub fn equivariance(family: &[Vec<RootedTree>], max: usize) -> Result<usize, String> {
    let mut n = 0;
    for tau in family.iter().flatten() {
        let k = tau.arity();
        for args in tuples(family, k, max) {
            let base = tau.compose(&args).map_err(|e| e.to_string())?;
            // outer: input j of τπ receives args[π(j) - 1]
            for pi in Permutation::all(k) {
                let lhs = tau
                    .permute_markings(&pi)
                    .and_then(|t| t.compose(&args))
                    .map_err(|e| e.to_string())?;
                let reordered: Vec<RootedTree> =
                    (1..=k as u32).map(|j| args[pi.apply(j) as usize - 1].clone()).collect();
                let rhs = tau.compose(&reordered).map_err(|e| e.to_string())?;
                // block j of rhs is block π(j) of lhs
                let (ro, lo) = (offsets(&reordered), offsets(&args));
                let mut map = BTreeMap::new();
                for j in 0..k {
                    let target = pi.apply(j as u32 + 1) as usize - 1;
                    for x in 0..reordered[j].arity() as Marking {
                        map.insert(ro[j] + x + 1, lo[target] + x + 1);
                    }
                }
                let moved = rhs.relabel(&map).map_err(|e| e.to_string())?;
                check(moved == lhs, || format!("outer equivariance fails for {tau}, {pi}"))?;
                n += 1;
            }
            // inner: permuting one argument permutes its block
            for (i, a) in args.iter().enumerate() {
                for pi in Permutation::all(a.arity()) {
                    let mut changed = args.clone();
                    changed[i] = a.permute_markings(&pi).map_err(|e| e.to_string())?;
                    let lhs = tau.compose(&changed).map_err(|e| e.to_string())?;
                    let off = offsets(&args)[i];
                    let map = base
                        .markings()
                        .into_iter()
                        .map(|x| {
                            if x > off && x <= off + a.arity() as Marking {
                                (x, off + pi.apply(x - off))
                            } else {
                                (x, x)
                            }
                        })
                        .collect();
                    let rhs = base.relabel(&map).map_err(|e| e.to_string())?;
                    check(lhs == rhs, || format!("inner equivariance fails for {tau}, arg {i}, {pi}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// Forgets `y` in an argument. A root left with one child edge and no inputs
/// is kept: inside a composite that vertex is merged into a stable vertex.
fn forget_in_argument(sigma: &RootedTree, y: Marking) -> RootedTree {
    let nested = sigma.to_nested();
    if nested.inputs == vec![y] && nested.children.len() == 1 {
        let n = Nested::new(vec![], nested.children.clone());
        return RootedTree::from_nested(&n).unwrap();
    }
    sigma.forget_marking(y).unwrap()
}

/// Forgetting a marking that lies in an argument of arity at least two
/// commutes with composition into a stable tree.
pub fn forget_compose(family: &[Vec<RootedTree>], max: usize) -> Result<usize, String> {
    let mut n = 0;
    for tau in family.iter().flatten().filter(|t| t.is_stable()) {
        let k = tau.arity();
        for args in tuples(family, k, max) {
            let composite = tau.compose(&args).map_err(|e| e.to_string())?;
            let off = offsets(&args);
            for (i, a) in args.iter().enumerate() {
                if a.arity() < 2 {
                    continue;
                }
                for y in a.markings() {
                    let s = off[i] + y;
                    let lhs = composite.forget_marking(s).map_err(|e| e.to_string())?;
                    let mut changed = args.clone();
                    changed[i] = forget_in_argument(a, y);
                    let rhs = tau.compose(&changed).map_err(|e| e.to_string())?;
                    let map = lhs
                        .markings()
                        .into_iter()
                        .map(|x| (x, if x < s { x } else { x - 1 }))
                        .collect();
                    let lhs = lhs.relabel(&map).map_err(|e| e.to_string())?;
                    check(lhs == rhs, || {
                        format!("forget {s} does not commute for {tau} with {args:?}")
                    })?;
                    check(lhs.is_stable() || lhs.arity() == 1, || format!("unstable result {lhs}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}
