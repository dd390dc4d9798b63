use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tricolor::gen::{connected_graphs, random_target_lists};
use tricolor::homsolver::{check_properties, distance_split, hom_solve};
use tricolor::oracle::brute_hom;
use tricolor::{Graph, GraphBuilder, HomInstance, Mode, SolverConfig, TargetGraph, Verdict};

fn looped_graph(k: usize, adj: &[bool]) -> Graph {
    let mut b = GraphBuilder::new(k).allow_loops();
    let mut i = 0;
    for u in 0..k {
        for v in u..k {
            if adj[i] {
                b.add_edge(u, v).unwrap();
            }
            i += 1;
        }
    }
    b.build()
}

/// All homomorphisms respecting the lists, by enumerating `k^n` maps.
fn homs(inst: &HomInstance) -> BTreeSet<Vec<u8>> {
    let n = inst.vertex_count();
    let k = inst.target().vertex_count();
    let h = inst.target().graph();
    let mut out = BTreeSet::new();
    for code in 0..k.pow(n as u32) {
        let mut x = code;
        let m: Vec<u8> = (0..n)
            .map(|_| {
                let c = (x % k) as u8;
                x /= k;
                c
            })
            .collect();
        let ok = (0..n).all(|v| inst.lists()[v].contains(m[v]))
            && inst
                .graph()
                .edges()
                .all(|(u, v)| h.has_edge(m[u] as usize, m[v] as usize));
        if ok {
            out.insert(m);
        }
    }
    out
}

fn targets() -> Vec<Arc<TargetGraph>> {
    ["C3", "C4", "C5", "C6", "PSTAR3", "PSTAR4"]
        .iter()
        .map(|t| Arc::new(TargetGraph::named(t).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn property_flags_match_definitions(
        k in 1usize..=7,
        adj in vec(prop::bool::weighted(0.3), 28),
    ) {
        let h = looped_graph(k, &adj);
        let h = &h;
        let nbrs = |v: usize| (0..k).filter(move |&u| h.has_edge(v, u));
        let p1 = (0..k).all(|v| nbrs(v).count() <= 2);
        let p2 = (0..k).all(|x| {
            (0..k).filter(|&y| y != x).all(|y| nbrs(x).filter(|&w| h.has_edge(y, w)).count() <= 1)
        });
        let p3 = (0..k).all(|v| !h.has_edge(v, v));
        prop_assert_eq!(check_properties(h), (p1, p2, p3));
    }
}

#[test]
fn named_target_flags() {
    let flags = |t: &str| {
        let t = TargetGraph::named(t).unwrap();
        (t.p1, t.p2, t.p3)
    };
    assert_eq!(flags("C3"), (true, true, true));
    assert_eq!(flags("C4"), (true, false, true));
    assert_eq!(flags("C5"), (true, true, true));
    assert_eq!(flags("C6"), (true, true, true));
    assert_eq!(flags("P*3"), (true, true, false));
    assert_eq!(flags("pstar4"), (true, true, false));
}

#[test]
fn distance_split_preserves_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut splits = 0;
    for target in targets() {
        let k = target.vertex_count();
        for n in 1..=4 {
            for g in connected_graphs(n) {
                let g = Arc::new(g);
                for _ in 0..5 {
                    let lists = random_target_lists(n, k, &mut rng);
                    let inst = HomInstance::new(g.clone(), lists, target.clone()).unwrap();
                    let Some(parts) = distance_split(&inst) else {
                        continue;
                    };
                    splits += 1;
                    let mut union = BTreeSet::new();
                    for part in &parts {
                        assert!(part.instance.target().vertex_count() == k - 1);
                        for m in homs(&part.instance) {
                            let lifted = part.lift(&m);
                            assert!(inst.verify(&lifted));
                            union.insert(lifted);
                        }
                    }
                    assert_eq!(union, homs(&inst), "{inst:?}");
                }
            }
        }
    }
    assert!(splits > 100, "only {splits} splits exercised");
}

#[test]
fn hom_solve_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for target in targets() {
        let k = target.vertex_count();
        for n in 1..=4 {
            for g in connected_graphs(n) {
                let g = Arc::new(g);
                for _ in 0..4 {
                    let lists = random_target_lists(n, k, &mut rng);
                    let inst = HomInstance::new(g.clone(), lists, target.clone()).unwrap();
                    let sols = homs(&inst);
                    let oracle = brute_hom(&inst).unwrap();
                    assert_eq!(oracle.count, sols.len() as u128);
                    for mode in Mode::ALL {
                        let out = hom_solve(&inst, &SolverConfig::with_mode(mode)).unwrap();
                        match out.verdict {
                            Verdict::Sat(m) => {
                                assert!(sols.contains(m.colors()), "{mode} {inst:?}")
                            }
                            Verdict::Unsat => assert!(sols.is_empty(), "{mode} {inst:?}"),
                            Verdict::Timeout => panic!("timeout"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_homomorphism_cases() {
    let c3 = Arc::new(TargetGraph::cycle(3).unwrap());
    let c5 = Arc::new(TargetGraph::cycle(5).unwrap());
    let cases = [
        (Graph::complete(3), c5.clone(), false),
        (Graph::cycle(5), c3, true),
        (Graph::cycle(5), c5, true),
    ];
    for (g, h, sat) in cases {
        let inst = HomInstance::full(g, h);
        assert_eq!(brute_hom(&inst).unwrap().is_sat(), sat);
        for mode in Mode::ALL {
            let out = hom_solve(&inst, &SolverConfig::with_mode(mode)).unwrap();
            assert_eq!(out.verdict.is_sat(), sat, "{mode} {inst:?}");
        }
    }
}
