mod common;

use common::*;
use f1kit::treeop::RootedTree;
use f1kit::Permutation;

#[test]
fn unit_and_associativity_up_to_four_inputs() {
    let family = tree_family(4);
    assert!(unit_laws(&family).unwrap() > 0);
    assert!(associativity(&family, 4).unwrap() > 0);
}

#[test]
fn equivariance_up_to_four_inputs() {
    let family = tree_family(4);
    assert!(equivariance(&family, 4).unwrap() > 0);
}

#[test]
fn forget_commutes_with_compose_up_to_four_inputs() {
    let family = tree_family(4);
    assert!(forget_compose(&family, 4).unwrap() > 0);
}

#[test]
fn permutation_action_laws() {
    for t in &tree_family(4)[4] {
        for pi in Permutation::all(4) {
            let there = t.permute_markings(&pi).unwrap();
            assert_eq!(there.permute_markings(&pi.inverse()).unwrap(), *t);
            for rho in Permutation::all(4) {
                let a = there.permute_markings(&rho).unwrap();
                let b = t.permute_markings(&rho.compose(&pi)).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn contraction_order_is_irrelevant() {
    for t in tree_family(5)[5].iter().filter(|t| t.edge_count() >= 2) {
        let mut forward = t.clone();
        while let Some(&e) = forward.edges().first() {
            forward = forward.contract_edge(e).unwrap();
        }
        let mut backward = t.clone();
        while let Some(&e) = backward.edges().last() {
            backward = backward.contract_edge(e).unwrap();
        }
        assert_eq!(forward, backward);
        assert_eq!(forward, RootedTree::corolla(1..=5).unwrap());
    }
}
