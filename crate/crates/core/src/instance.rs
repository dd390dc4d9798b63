//! List 3-coloring instances, their layer structure, and the propagation
//! rules that bring an instance to a reduced state.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::color::{Color, ColorSet, Palette};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::twosat;

/// A color per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn get(&self, v: usize) -> Color {
        self.0[v]
    }
}

/// A graph together with a list `L(v) ⊆ {1,2,3}` for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringInstance {
    graph: Arc<Graph>,
    lists: Vec<ColorSet>,
}

/// Result of [`ColoringInstance::reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction<T> {
    Reduced(T),
    /// Some list became empty.
    Failure,
}

impl<T> Reduction<T> {
    pub fn reduced(self) -> Option<T> {
        match self {
            Reduction::Reduced(t) => Some(t),
            Reduction::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Reduction::Failure)
    }
}

/// Outcome of finishing an instance whose lists all have at most two colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finish<T> {
    Sat(T),
    Unsat,
}

impl ColoringInstance {
    pub fn new(graph: impl Into<Arc<Graph>>, lists: Vec<ColorSet>) -> Result<Self> {
        let graph = graph.into();
        if graph.allows_loops() && graph.has_loops() {
            return Err(Error::InvalidArgument(
                "coloring instances cannot have loops".into(),
            ));
        }
        if lists.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "{} lists for {} vertices",
                lists.len(),
                graph.vertex_count()
            )));
        }
        if let Some(v) = lists.iter().position(|l| !l.is_subset(ColorSet::THREE)) {
            return Err(Error::InvalidArgument(format!(
                "list of vertex {v} is not a subset of {{1,2,3}}"
            )));
        }
        Ok(ColoringInstance { graph, lists })
    }

    /// Every list is `{1,2,3}`.
    pub fn full(graph: impl Into<Arc<Graph>>) -> Self {
        let graph = graph.into();
        let lists = vec![ColorSet::THREE; graph.vertex_count()];
        ColoringInstance { graph, lists }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn lists(&self) -> &[ColorSet] {
        &self.lists
    }

    pub fn list(&self, v: usize) -> ColorSet {
        self.lists[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Replaces `L(v)`; the new list must still be a subset of `{1,2,3}`.
    pub fn set_list(&mut self, v: usize, list: ColorSet) {
        assert!(list.is_subset(ColorSet::THREE));
        self.lists[v] = list;
    }

    /// Propagates singleton lists to fixpoint: whenever `L(v) = {a}`, `a` is
    /// removed from every neighbor's list. Fails as soon as a list empties.
    /// Vertices are never deleted.
    pub fn reduce(&self) -> Reduction<ColoringInstance> {
        let mut out = self.clone();
        match propagate(&out.graph, &mut out.lists, &Palette::three()) {
            Ok(_) => Reduction::Reduced(out),
            Err(PropagationFailure) => Reduction::Failure,
        }
    }

    /// Partition of the vertices by list size. Requires non-empty lists.
    pub fn layers(&self) -> Result<LayerStructure> {
        LayerStructure::of(&self.lists)
    }

    /// Solves an instance whose lists all have size 1 or 2 via 2-SAT.
    pub fn finish_two_lists(&self) -> Result<Finish<Coloring>> {
        let enc = twosat::edwards_encode(self)?;
        Ok(match enc.solve() {
            Some(colors) => {
                let c = Coloring(colors);
                debug_assert!(self.verify(c.colors()));
                Finish::Sat(c)
            }
            None => Finish::Unsat,
        })
    }

    /// Whether `c` is a proper coloring that respects every list.
    pub fn verify(&self, c: &[Color]) -> bool {
        proper_list_map(&self.graph, &self.lists, &Palette::three(), c)
    }
}

/// Checks that `map` respects `lists` and sends every edge to a compatible
/// color pair.
pub(crate) fn proper_list_map(
    graph: &Graph,
    lists: &[ColorSet],
    palette: &Palette,
    map: &[Color],
) -> bool {
    map.len() == graph.vertex_count()
        && map.iter().zip(lists).all(|(&c, l)| l.contains(c))
        && graph.edges().all(|(u, v)| palette.allows(map[u], map[v]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PropagationFailure;

/// Singleton propagation over an arbitrary color graph: a vertex fixed to `c`
/// restricts each neighbor's list to the colors compatible with `c`. Returns
/// the number of colors removed.
pub(crate) fn propagate(
    graph: &Graph,
    lists: &mut [ColorSet],
    palette: &Palette,
) -> Result<usize, PropagationFailure> {
    let queue: VecDeque<usize> = (0..lists.len()).filter(|&v| lists[v].len() <= 1).collect();
    propagate_from(graph, lists, palette, queue)
}

pub(crate) fn propagate_from(
    graph: &Graph,
    lists: &mut [ColorSet],
    palette: &Palette,
    mut queue: VecDeque<usize>,
) -> Result<usize, PropagationFailure> {
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        let c = match lists[v].single() {
            Some(c) => c,
            None if lists[v].is_empty() => return Err(PropagationFailure),
            None => continue,
        };
        let allowed = palette.compatible(c);
        for &u in graph.neighbors(v) {
            let u = u as usize;
            let before = lists[u];
            let after = before.intersect(allowed);
            if after != before {
                removed += before.len() - after.len();
                lists[u] = after;
                match after.len() {
                    0 => return Err(PropagationFailure),
                    1 => queue.push_back(u),
                    _ => {}
                }
            }
        }
    }
    Ok(removed)
}

/// Vertices grouped by list size, with the two progress measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStructure {
    pub v1: VertexSet,
    pub v2: VertexSet,
    /// Vertices whose list has three or more colors.
    pub v3: VertexSet,
    /// `2|V2| + 3|V3|`.
    pub measure_diam3: usize,
    /// `|V3|`.
    pub measure_diam2: usize,
}

impl LayerStructure {
    pub(crate) fn of(lists: &[ColorSet]) -> Result<Self> {
        let n = lists.len();
        let mut v1 = VertexSet::new(n);
        let mut v2 = VertexSet::new(n);
        let mut v3 = VertexSet::new(n);
        let mut weight = 0;
        for (v, l) in lists.iter().enumerate() {
            match l.len() {
                0 => {
                    return Err(Error::ContractViolation(format!(
                        "vertex {v} has an empty list"
                    )))
                }
                1 => {
                    v1.insert(v);
                }
                2 => {
                    v2.insert(v);
                    weight += 2;
                }
                k => {
                    v3.insert(v);
                    weight += k;
                }
            }
        }
        let measure_diam2 = v3.len();
        Ok(LayerStructure {
            v1,
            v2,
            v3,
            measure_diam3: weight,
            measure_diam2,
        })
    }

    /// `V2 ∪ V3`.
    pub fn unfixed(&self) -> VertexSet {
        self.v2.union(&self.v3)
    }
}
