//! Acceptance suite. Prints one `PASS`/`FAIL` line per check and exits
//! nonzero if any check fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use f1kit::blueprint::{
    boundary_crossed_relations, centralizer_subgroup, count_max_simplexes, crossed_mul, f_element,
    index_set, perm_action, permute_relation, plucker_relations, relation_triples, CrossedElem,
    Monomial,
};
use f1kit::genseries::{open_stratum_class, solve_tdn_ode};
use f1kit::torif::{
    blowup_decomposition, diagonal_selection, is_strongly_complemented, torify_proj_power,
    torify_proj_space, torify_tree_curve, PartialPiece, Selection, TorifExpr,
};
use f1kit::treeop::{enumerate_stable_trees, strata_counts, strata_sum, tree_points};
use f1kit::{blowup_class, f1m_count, mbar0_class, proj_class, tdn_class, Basis, MotClass, Permutation};
use num_bigint::BigInt;
use num_integer::binomial;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn recursion_matches_ode_genus_zero() -> Check {
    let s = solve_tdn_ode(1, 12).map_err(|e| e.to_string())?;
    for n in 2..=12 {
        let want = mbar0_class(n as i64 + 1).unwrap();
        ensure!(s.coeff(n) == Some(&want), "coefficient {n}: {:?} vs {want}", s.coeff(n));
    }
    Ok(())
}

fn recursion_matches_ode_all_d() -> Check {
    for d in 1..=3 {
        let s = solve_tdn_ode(d, 9).map_err(|e| e.to_string())?;
        for n in 1..=9 {
            let want = tdn_class(d, n as i64).unwrap();
            ensure!(s.coeff(n) == Some(&want), "d={d} n={n}");
        }
    }
    Ok(())
}

fn d_one_specializes() -> Check {
    for n in 1..=10 {
        ensure!(tdn_class(1, n).unwrap() == mbar0_class(n + 1).unwrap(), "n={n}");
    }
    Ok(())
}

fn known_values() -> Check {
    let l = |c: &[i64]| MotClass::from_i64s(c, Basis::L);
    ensure!(mbar0_class(4).unwrap() == l(&[1, 1]), "M04");
    ensure!(mbar0_class(5).unwrap() == l(&[1, 5, 1]), "M05");
    let m6 = mbar0_class(6).unwrap();
    ensure!(m6 == l(&[1, 16, 16, 1]), "M06 = {}", m6.format(Basis::L));
    let want: Vec<BigInt> = [1, 0, 16, 0, 16, 0, 1].iter().map(|&x| x.into()).collect();
    ensure!(m6.poincare_poly() == want, "poincare {:?}", m6.poincare_poly());
    Ok(())
}

fn positivity() -> Check {
    for n in 2..=12 {
        ensure!(mbar0_class(n).unwrap().is_effective_torus_class(), "mbar0 n={n}");
    }
    for d in 1..=3 {
        for n in 1..=8 {
            ensure!(tdn_class(d, n).unwrap().is_effective_torus_class(), "tdn d={d} n={n}");
        }
        for n in 3..=10 {
            let c = open_stratum_class(d, n).unwrap();
            ensure!(!c.is_effective_torus_class(), "open d={d} n={n} is {c}");
        }
    }
    Ok(())
}

fn strata_oracle() -> Check {
    for d in 1..=2 {
        for n in 2..=7 {
            ensure!(
                strata_sum(d, n).unwrap() == tdn_class(d, n).unwrap(),
                "d={d} n={n}"
            );
        }
    }
    ensure!(enumerate_stable_trees(4).unwrap().len() == 26, "26 strata");
    ensure!(strata_counts(4).unwrap() == vec![1, 10, 15], "1+10+15");
    Ok(())
}

fn point_counts() -> Check {
    ensure!(f1m_count(1, 4, 0).unwrap() == 7.into(), "f1m(1,4,0)");
    ensure!(f1m_count(1, 5, 0).unwrap() == 34.into(), "f1m(1,5,0)");
    let trees: Vec<_> = (2..=5)
        .flat_map(|n| enumerate_stable_trees(n).unwrap())
        .take(100)
        .collect();
    ensure!(trees.len() == 100, "only {} trees", trees.len());
    for t in &trees {
        let nv = t.vertex_count() as u64;
        for m in 0..=10u64 {
            let want = BigInt::from(nv * (m + 1) + 1);
            ensure!(tree_points(t, 1, m).unwrap() == want, "{t} at m={m}");
        }
    }
    Ok(())
}

fn torification_calculus() -> Check {
    for d in 0..=5 {
        let ct = torify_proj_space(d).unwrap();
        ensure!(ct.total_class() == &proj_class(d).unwrap(), "P^{d}");
        ensure!(ct.recomputed_class() == proj_class(d).unwrap(), "P^{d} pieces");
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let trees = enumerate_stable_trees(4).unwrap();
    for case in 0..50 {
        let ct = match rng.gen_range(0..3) {
            0 => torify_proj_space(rng.gen_range(1..=4)).unwrap(),
            1 => torify_proj_power(rng.gen_range(1..=2), rng.gen_range(1..=3), rng.gen()).unwrap(),
            _ => torify_tree_curve(&trees[rng.gen_range(0..trees.len())]).unwrap(),
        };
        let whole: Vec<usize> = (0..ct.pieces().len()).filter(|_| rng.gen_bool(0.3)).collect();
        let center = Selection::pieces(whole.clone());
        let codim = rng.gen_range(1..=4);
        let y: MotClass = whole
            .iter()
            .map(|&i| ct.pieces()[i].expr.eval_class().unwrap())
            .sum();
        let got = blowup_decomposition(&ct, &center, codim).map_err(|e| e.to_string())?;
        let want = blowup_class(ct.total_class(), &y, codim).unwrap();
        ensure!(got.total_class() == &want, "case {case}");
        ensure!(got.recomputed_class() == want, "case {case} pieces");
    }
    let p1 = torify_proj_space(1).unwrap();
    ensure!(
        is_strongly_complemented(&p1, &Selection::pieces(vec![0])).unwrap(),
        "fixed point of P^1"
    );
    let interior = Selection {
        whole: vec![],
        partial: vec![PartialPiece {
            piece: 2,
            sub: TorifExpr::point(),
        }],
    };
    ensure!(!is_strongly_complemented(&p1, &interior).unwrap(), "interior point of P^1");
    let square = torify_proj_power(1, 2, false).unwrap();
    let diag = diagonal_selection(&square, 1, 2, false).unwrap();
    ensure!(!is_strongly_complemented(&square, &diag).unwrap(), "diagonal, product pieces");
    let sheared = torify_proj_power(1, 2, true).unwrap();
    let diag = diagonal_selection(&sheared, 1, 2, true).unwrap();
    ensure!(is_strongly_complemented(&sheared, &diag).unwrap(), "diagonal, sheared pieces");
    Ok(())
}

fn blueprint() -> Check {
    for n in 4..=10 {
        ensure!(
            index_set(n).unwrap().len() == (1usize << (n - 1)) - n as usize - 1,
            "index set n={n}"
        );
        ensure!(
            plucker_relations(n).unwrap().len() as u64 == binomial(n as u64, 4),
            "relations n={n}"
        );
    }
    let four = plucker_relations(4).unwrap();
    ensure!(four[0].to_string() == "x{1,2} + x{1,4} == x{1,3}", "n=4 relation {}", four[0]);
    for (n, want) in [(4, 3), (5, 15), (6, 105)] {
        ensure!(count_max_simplexes(n).unwrap() == want, "simplexes n={n}");
    }
    for n in 4..=6 {
        let rels = plucker_relations(n).unwrap();
        let triples = relation_triples(&rels);
        let f = f_element(n).unwrap();
        for pi in Permutation::all(n as usize) {
            let img: Vec<_> = rels.iter().map(|r| permute_relation(&pi, r)).collect();
            ensure!(relation_triples(&img) == triples, "closure n={n} {pi}");
            ensure!(perm_action(&pi, &f) == f, "f moved by {pi}");
        }
    }
    Ok(())
}

fn random_elem(rng: &mut StdRng, gens: &[f1kit::blueprint::SubsetIndex], group: &[Permutation]) -> CrossedElem {
    let terms = rng.gen_range(1..=2);
    let sum = (0..terms)
        .map(|_| {
            Monomial::from_factors(
                (0..rng.gen_range(0..=2)).map(|_| (gens[rng.gen_range(0..gens.len())], rng.gen_range(1..=2))),
            )
        })
        .collect();
    CrossedElem::new(sum, group[rng.gen_range(0..group.len())].clone())
}

fn crossed_products() -> Check {
    for g in 1..=4i64 {
        let c = centralizer_subgroup(g).unwrap();
        let order = (1u64 << g) * (1..=g as u64).product::<u64>();
        ensure!(c.len() as u64 == order, "order for g={g}");
        let set: std::collections::BTreeSet<_> = c.iter().cloned().collect();
        for a in &c {
            ensure!(set.contains(&a.inverse()), "inverse");
            for b in c.iter().step_by(7) {
                ensure!(set.contains(&a.compose(b)), "closure");
            }
        }
    }
    let n = 6;
    let gens = index_set(n).unwrap();
    let group: Vec<Permutation> = centralizer_subgroup(2)
        .unwrap()
        .iter()
        .map(|p| p.extend(n as usize))
        .collect();
    let mut rng = StdRng::seed_from_u64(0xc0ffee);
    for _ in 0..10_000 {
        let x = random_elem(&mut rng, &gens, &group);
        let y = random_elem(&mut rng, &gens, &group);
        let z = random_elem(&mut rng, &gens, &group);
        let l = crossed_mul(&crossed_mul(&x, &y).unwrap(), &z).unwrap();
        let r = crossed_mul(&x, &crossed_mul(&y, &z).unwrap()).unwrap();
        ensure!(l == r, "associativity fails for {x}, {y}, {z}");
    }
    let e = CrossedElem::unit(n as usize);
    let x = random_elem(&mut rng, &gens, &group);
    ensure!(crossed_mul(&e, &x).unwrap() == x && crossed_mul(&x, &e).unwrap() == x, "identity");
    let rels = boundary_crossed_relations(2, 6).unwrap();
    ensure!(rels.len() as u64 == binomial(6, 4) * 8, "{} crossed relations", rels.len());
    Ok(())
}

fn operad_laws() -> Check {
    let family = common::tree_family(5);
    common::unit_laws(&family)?;
    common::associativity(&family, 5)?;
    common::equivariance(&family, 5)?;
    common::forget_compose(&family, 5)?;
    Ok(())
}

fn cli_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_f1kit");
    let invocations: &[&[&str]] = &[
        &["classes", "--space", "mbar0", "--n", "9", "--basis", "L"],
        &["classes", "--space", "tdn", "--d", "2", "--n", "6"],
        &["points", "--space", "tdn", "--d", "3", "--n", "5", "--m", "4"],
        &["series", "--d", "2", "--order", "8"],
        &["strata", "--d", "2", "--n", "5"],
        &["torify", "--space", "open", "--d", "2", "--n", "4"],
        &["torify", "--space", "power", "--d", "1", "--n", "2", "--sheared"],
        &["blueprint", "--n", "6", "--localize", "1"],
        &["crossed", "--g", "2", "--n", "6"],
    ];
    for args in invocations {
        for format in ["text", "json", "csv"] {
            let run = || {
                Command::new(bin)
                    .args(*args)
                    .args(["--format", format])
                    .env_remove("F1KIT_CACHE_DIR")
                    .output()
                    .map_err(|e| e.to_string())
            };
            let (a, b) = (run()?, run()?);
            ensure!(a.status.success(), "{args:?} {format} failed: {}", String::from_utf8_lossy(&a.stderr));
            ensure!(a.stdout == b.stdout, "{args:?} {format} differs between runs");
            ensure!(!a.stdout.contains(&b'\r'), "{args:?} {format} has CR");
        }
    }
    Ok(())
}

type Named = (&'static str, fn() -> Check);

fn main() {
    let checks: [Named; 12] = [
        ("recursion equals ODE coefficients, genus zero", recursion_matches_ode_genus_zero),
        ("recursion equals ODE coefficients, d = 1..3", recursion_matches_ode_all_d),
        ("T_{1,n} equals M̄_{0,n+1}", d_one_specializes),
        ("known classes and Poincaré polynomial", known_values),
        ("positivity of closed spaces, negativity of open strata", positivity),
        ("strata sums equal T_{d,n}", strata_oracle),
        ("F_1^m point counts", point_counts),
        ("torification calculus", torification_calculus),
        ("blueprint presentation", blueprint),
        ("crossed products", crossed_products),
        ("operad laws", operad_laws),
        ("CLI determinism", cli_determinism),
    ];
    let budget = Duration::from_secs(60);
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let result = match result {
            Ok(()) if took > budget => Err(format!("took {took:.1?}, budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
