use std::collections::VecDeque;

use tricolor::format::serialize_coloring;
use tricolor::gen::{connected_graphs, generate, Family, GenSpec, ListMode};
use tricolor::Graph;

/// Diameter by one BFS per vertex over the adjacency predicate.
fn diameter(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for v in 0..n {
                if g.has_edge(u, v) && dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        best = best.max(*dist.iter().max()?);
        if best == usize::MAX {
            return None;
        }
    }
    Some(best)
}

#[test]
fn families_meet_their_diameter_contracts() {
    for seed in 0..25 {
        for n in [6, 12, 25, 40] {
            let d2 = generate(&GenSpec::new(Family::RandomDiam2, n, seed)).unwrap();
            assert_eq!(diameter(d2.graph()), Some(2), "diam2 n={n} seed={seed}");
            let d3 = generate(&GenSpec::new(Family::RandomDiam3, n, seed)).unwrap();
            assert_eq!(diameter(d3.graph()), Some(3), "diam3 n={n} seed={seed}");
            let apex = generate(&GenSpec::new(Family::UniversalApex, n, seed)).unwrap();
            assert!(diameter(apex.graph()).unwrap() <= 2);
            assert_eq!(apex.graph().degree(n - 1), n - 1);
        }
    }
    for n in 3..12 {
        let c = generate(&GenSpec::new(Family::Cycle, n, 0)).unwrap();
        assert_eq!(diameter(c.graph()), Some(n / 2));
        assert_eq!(c.graph().edge_count(), n);
    }
    let p = generate(&GenSpec::new(Family::Petersen, 99, 0)).unwrap();
    assert_eq!(diameter(p.graph()), Some(2));
    assert_eq!(p.graph().edge_count(), 15);
}

#[test]
fn same_spec_gives_identical_files() {
    for family in [
        Family::UniversalApex,
        Family::RandomDiam2,
        Family::RandomDiam3,
        Family::Cycle,
        Family::Petersen,
    ] {
        for list_mode in [
            ListMode::Full,
            ListMode::RandomNonempty,
            ListMode::RandomSizeLe2,
        ] {
            for seed in 0..5 {
                let spec = GenSpec::new(family, 20, seed).lists(list_mode);
                let a = serialize_coloring(&generate(&spec).unwrap());
                let b = serialize_coloring(&generate(&spec).unwrap());
                assert_eq!(a, b, "{family} {list_mode} {seed}");
            }
        }
    }
    let custom = GenSpec::new(Family::CustomEdgeProb, 30, 3).edge_prob(0.2);
    assert_eq!(
        serialize_coloring(&generate(&custom).unwrap()),
        serialize_coloring(&generate(&custom).unwrap())
    );
}

#[test]
fn seeds_change_the_instance() {
    let a = generate(&GenSpec::new(Family::RandomDiam2, 30, 1)).unwrap();
    let b = generate(&GenSpec::new(Family::RandomDiam2, 30, 2)).unwrap();
    assert_ne!(a, b);
}

#[test]
fn list_modes_respect_their_sizes() {
    for seed in 0..10 {
        let spec = GenSpec::new(Family::RandomDiam2, 30, seed);
        let full = generate(&spec.clone().lists(ListMode::Full)).unwrap();
        assert!(full.lists().iter().all(|l| l.len() == 3));
        let small = generate(&spec.clone().lists(ListMode::RandomSizeLe2)).unwrap();
        assert!(small.lists().iter().all(|l| (1..=2).contains(&l.len())));
        let any = generate(&spec.lists(ListMode::RandomNonempty)).unwrap();
        assert!(any.lists().iter().all(|l| !l.is_empty()));
    }
}

#[test]
fn connected_graph_counts() {
    let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, [1, 1, 4, 38, 728]);
    assert!(connected_graphs(5).iter().all(|g| diameter(g).is_some()));
}
