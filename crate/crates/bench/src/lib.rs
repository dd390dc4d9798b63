//! Seeded instance sets shared by the benchmarks.

use tricolor::gen::{self, Family, GenSpec, ListMode};
use tricolor::{ColoringInstance, Graph, HomInstance, Mode, TargetGraph};

/// A labelled benchmark input.
pub struct Fixture {
    pub label: String,
    pub instance: ColoringInstance,
}

/// `count` full-list instances of `family` on `n` vertices, seeds `0..count`.
pub fn family(family: Family, n: usize, count: u64) -> Vec<Fixture> {
    (0..count)
        .map(|seed| {
            let spec = GenSpec::new(family, n, seed).lists(ListMode::Full);
            Fixture {
                label: format!("{family}/n={n}/seed={seed}"),
                instance: gen::generate(&spec).expect("benchmark family generates"),
            }
        })
        .collect()
}

/// Modes that accept a graph of this diameter.
pub fn modes_for(inst: &ColoringInstance) -> Vec<Mode> {
    let d = inst.graph().diameter();
    Mode::ALL.into_iter().filter(|m| m.applies_to(d)).collect()
}

/// Full-list homomorphism instances of diameter at most 3 onto small cycles
/// and looped paths.
pub fn hom_fixtures() -> Vec<(String, HomInstance)> {
    let graphs = [
        ("petersen", Graph::petersen()),
        ("c6", Graph::cycle(6)),
        ("c7", Graph::cycle(7)),
    ];
    let mut out = Vec::new();
    for target in ["C3", "C5", "PSTAR3"] {
        let t = TargetGraph::named(target).expect("named target");
        for (name, g) in &graphs {
            out.push((
                format!("{name}->{target}"),
                HomInstance::full(g.clone(), t.clone()),
            ));
        }
    }
    out
}
