use proptest::collection::vec;
use proptest::prelude::*;
use tricolor::format::{parse, serialize, Instance};
use tricolor::{ColorSet, ColoringInstance, Graph, GraphBuilder, HomInstance, TargetGraph};

fn edges_from(n: usize, bits: &[bool]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    edges
}

fn coloring_strategy() -> impl Strategy<Value = ColoringInstance> {
    (1usize..=10).prop_flat_map(|n| {
        (vec(any::<bool>(), n * (n - 1) / 2), vec(1u64..8, n)).prop_map(move |(bits, masks)| {
            let g = Graph::from_edges(n, &edges_from(n, &bits)).unwrap();
            let lists = masks
                .into_iter()
                .map(|m| ColorSet::from_bits(m << 1))
                .collect();
            ColoringInstance::new(g, lists).unwrap()
        })
    })
}

fn hom_strategy() -> impl Strategy<Value = HomInstance> {
    (1usize..=8, 1usize..=6).prop_flat_map(|(n, k)| {
        (
            vec(any::<bool>(), n * (n - 1) / 2),
            vec(1u64..(1 << k), n),
            vec(any::<bool>(), k * (k + 1) / 2),
        )
            .prop_map(move |(bits, masks, target_bits)| {
                let g = Graph::from_edges(n, &edges_from(n, &bits)).unwrap();
                let mut b = GraphBuilder::new(k).allow_loops();
                let mut i = 0;
                for x in 0..k {
                    for y in x..k {
                        if target_bits[i] {
                            b.add_edge(x, y).unwrap();
                        }
                        i += 1;
                    }
                }
                let h = TargetGraph::new(b.build(), "H").unwrap();
                let lists = masks.into_iter().map(ColorSet::from_bits).collect();
                HomInstance::new(g, lists, h).unwrap()
            })
    })
}

/// The same coloring instance written with comments, blank lines, CRLF line
/// ends, duplicated and reversed edges, and explicit full lists.
fn noisy_text(inst: &ColoringInstance, order: &[usize]) -> String {
    let g = inst.graph();
    let edges: Vec<_> = g.edges().collect();
    let mut out = format!(
        "c noisy\r\n\r\np col {} {}\r\n",
        g.vertex_count(),
        edges.len()
    );
    for (i, &(u, v)) in edges.iter().enumerate() {
        let (a, b) = if order.get(i).is_some_and(|x| x % 2 == 0) {
            (v, u)
        } else {
            (u, v)
        };
        out.push_str(&format!("e {} {}  \r\n", a + 1, b + 1));
    }
    for (u, v) in edges.iter().take(2) {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    for v in (0..g.vertex_count()).rev() {
        let colors: Vec<String> = inst.list(v).iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "c vertex {}\nl {} {}\n",
            v + 1,
            v + 1,
            colors.join(" ")
        ));
    }
    out
}

proptest! {
    #[test]
    fn coloring_round_trips(inst in coloring_strategy()) {
        let text = serialize(&Instance::Coloring(inst.clone()));
        let once = parse(&text).unwrap();
        prop_assert!(once.warnings.is_empty());
        prop_assert_eq!(&once.instance, &Instance::Coloring(inst));
        let twice = parse(&serialize(&once.instance)).unwrap();
        prop_assert_eq!(once.instance, twice.instance);
    }

    #[test]
    fn hom_round_trips(inst in hom_strategy()) {
        let once = parse(&serialize(&Instance::Hom(inst.clone()))).unwrap();
        prop_assert!(once.warnings.is_empty());
        let Instance::Hom(h) = &once.instance else {
            return Err(TestCaseError::fail("target section lost"));
        };
        prop_assert_eq!(h.lists(), inst.lists());
        prop_assert_eq!(h.graph(), inst.graph());
        prop_assert_eq!(h.target().graph(), inst.target().graph());
        let twice = parse(&serialize(&once.instance)).unwrap();
        prop_assert_eq!(once.instance, twice.instance);
    }

    #[test]
    fn noisy_input_parses_to_the_same_instance(
        inst in coloring_strategy(),
        order in vec(any::<usize>(), 45),
    ) {
        let parsed = parse(&noisy_text(&inst, &order)).unwrap();
        prop_assert_eq!(&parsed.instance, &Instance::Coloring(inst.clone()));
        // The header counts distinct edges, so only the duplicates warn.
        let dupes = inst.graph().edge_count().min(2);
        prop_assert_eq!(parsed.warnings.len(), dupes);
    }
}
