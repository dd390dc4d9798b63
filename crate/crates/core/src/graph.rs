//! Undirected graphs with bitset adjacency and the distance, neighborhood and
//! contraction primitives used by the solvers.
//!
//! Graphs are immutable once built. Loops are only accepted when the graph is
//! created as a homomorphism target (see [`GraphBuilder::allow_loops`]); a loop
//! at `v` makes `v` a member of its own neighborhood.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Dense bit-indexed subset of `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(WORD)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_in<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::new(universe);
        for v in items {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        debug_assert!(v < self.universe);
        let (w, b) = (v / WORD, v % WORD);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        debug_assert!(v < self.universe);
        let (w, b) = (v / WORD, v % WORD);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        had
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Lowest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<VertexSet>,
    neighbors: Vec<Vec<u32>>,
    edge_count: usize,
    allows_loops: bool,
}

/// Collects edges, then freezes them into a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    vertex_count: usize,
    adjacency: Vec<VertexSet>,
    allows_loops: bool,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        GraphBuilder {
            vertex_count,
            adjacency: vec![VertexSet::new(vertex_count); vertex_count],
            allows_loops: false,
        }
    }

    /// Accept `u == v` edges. Only homomorphism targets should need this.
    pub fn allow_loops(mut self) -> Self {
        self.allows_loops = true;
        self
    }

    /// Adds the edge `uv`. Returns `Ok(false)` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        for x in [u, v] {
            if x >= self.vertex_count {
                return Err(Error::InvalidVertex {
                    vertex: x,
                    vertex_count: self.vertex_count,
                });
            }
        }
        if u == v && !self.allows_loops {
            return Err(Error::LoopNotAllowed(u));
        }
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(fresh)
    }

    pub fn build(self) -> Graph {
        let neighbors: Vec<Vec<u32>> = self
            .adjacency
            .iter()
            .map(|s| s.iter().map(|x| x as u32).collect())
            .collect();
        let mut twice = 0;
        let mut loops = 0;
        for (v, ns) in neighbors.iter().enumerate() {
            twice += ns.len();
            if self.adjacency[v].contains(v) {
                loops += 1;
            }
        }
        Graph {
            adjacency: self.adjacency,
            neighbors,
            edge_count: (twice - loops) / 2 + loops,
            allows_loops: self.allows_loops,
        }
    }
}

/// Vertex correspondence between an induced subgraph and its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMap {
    /// `to_parent[i]` is the parent id of subgraph vertex `i`.
    pub to_parent: Vec<usize>,
    /// `from_parent[v]` is the subgraph id of parent vertex `v`, if kept.
    pub from_parent: Vec<Option<usize>>,
}

impl Graph {
    /// Loop-free graph from an edge list.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(vertex_count);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(vertex_count: usize) -> Graph {
        GraphBuilder::new(vertex_count).build()
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v).unwrap();
            }
        }
        b.build()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// The cycle `C_n`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Petersen graph: outer 5-cycle 0..5, spokes `i -- i+5`, inner pentagram.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn allows_loops(&self) -> bool {
        self.allows_loops
    }

    /// Open neighborhood `N(v)` as a sorted slice.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    /// Open neighborhood `N(v)` as a bitset.
    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    /// Closed neighborhood `N[v]`.
    pub fn closed_neighbor_set(&self, v: usize) -> VertexSet {
        let mut s = self.adjacency[v].clone();
        s.insert(v);
        s
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.vertex_count()).any(|v| self.has_edge(v, v))
    }

    /// Edges `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v >= u)
                .map(move |v| (u, v))
        })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    /// Union of open neighborhoods of `set`, minus `set` itself.
    pub fn neighborhood_of(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.vertex_count());
        for v in set.iter() {
            out.union_with(&self.adjacency[v]);
        }
        out.difference_with(set);
        out
    }

    /// `N[set] = N(set) ∪ set`.
    pub fn closed_neighborhood_of(&self, set: &VertexSet) -> VertexSet {
        let mut out = set.clone();
        for v in set.iter() {
            out.union_with(&self.adjacency[v]);
        }
        out
    }

    /// Hop distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        Ok(self.bfs_within(source, None))
    }

    fn bfs_within(&self, source: usize, allowed: Option<&VertexSet>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap() + 1;
            for &w in &self.neighbors[u] {
                let w = w as usize;
                if dist[w].is_none() && allowed.is_none_or(|a| a.contains(w)) {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_within(0, None).iter().all(Option::is_some)
    }

    /// Largest pairwise distance; `None` when the graph is disconnected.
    /// The empty graph and a single vertex both have diameter 0.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.vertex_count() {
            for d in self.bfs_within(s, None) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// `N^{≤radius}[v]`, or the open variant without `v` when `closed` is false.
    pub fn ball(&self, v: usize, radius: usize, closed: bool) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.ball_within(v, radius, closed, None))
    }

    /// Ball around `v` measured inside the subgraph induced by `allowed`
    /// (which must contain `v`).
    pub fn ball_within(
        &self,
        v: usize,
        radius: usize,
        closed: bool,
        allowed: Option<&VertexSet>,
    ) -> VertexSet {
        let mut out = VertexSet::new(self.vertex_count());
        out.insert(v);
        let mut frontier = vec![v];
        for _ in 0..radius {
            let mut next = Vec::new();
            for u in frontier {
                for &w in &self.neighbors[u] {
                    let w = w as usize;
                    if allowed.is_none_or(|a| a.contains(w)) && out.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        if !closed {
            out.remove(v);
        }
        out
    }

    /// Subgraph induced by `set`, with vertices renumbered in increasing order.
    pub fn induced(&self, set: &VertexSet) -> (Graph, InducedMap) {
        let to_parent = set.to_vec();
        let mut from_parent = vec![None; self.vertex_count()];
        for (i, &v) in to_parent.iter().enumerate() {
            from_parent[v] = Some(i);
        }
        let mut b = GraphBuilder::new(to_parent.len());
        b.allows_loops = self.allows_loops;
        for (i, &v) in to_parent.iter().enumerate() {
            for &w in &self.neighbors[v] {
                if let Some(j) = from_parent[w as usize] {
                    if j >= i {
                        b.add_edge(i, j).expect("induced edge in range");
                    }
                }
            }
        }
        (
            b.build(),
            InducedMap {
                to_parent,
                from_parent,
            },
        )
    }

    /// Identify non-adjacent `u` and `v` into a new vertex `z` with
    /// `N(z) = N(u) ∪ N(v)`. Other vertices keep their relative order and `z`
    /// gets the last id. The returned vector maps old ids to new ids.
    pub fn contract_pair(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>)> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfContraction(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::AdjacentContraction(u, v));
        }
        let n = self.vertex_count();
        let z = n - 2;
        let mut map = vec![0; n];
        let mut next = 0;
        for (x, slot) in map.iter_mut().enumerate() {
            if x == u || x == v {
                *slot = z;
            } else {
                *slot = next;
                next += 1;
            }
        }
        let mut b = GraphBuilder::new(n - 1);
        b.allows_loops = self.allows_loops;
        for (a, c) in self.edges() {
            let (ma, mc) = (map[a], map[c]);
            if ma != mc || a == c {
                b.add_edge(ma, mc)?;
            }
        }
        Ok((b.build(), map))
    }

    /// Lowest-id vertex of `N[u] ∩ N[v]`, if any.
    pub fn common_neighbor_witness(&self, u: usize, v: usize) -> Option<usize> {
        let mut s = self.closed_neighbor_set(u);
        s.intersect_with(&self.closed_neighbor_set(v));
        s.first()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_iter_in(n, xs.iter().copied())
    }

    #[test]
    fn vertex_set_ops() {
        let a = set(130, &[0, 64, 129]);
        let b = set(130, &[64, 100]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.union(&b).to_vec(), vec![0, 64, 100, 129]);
        assert_eq!(a.intersection(&b).to_vec(), vec![64]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 129]);
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(b.first(), Some(64));
        assert!(set(130, &[64]).is_subset(&a));
        assert!(VertexSet::new(0).is_empty());
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(
            Graph::path(5).bfs_distances(0).unwrap(),
            vec![Some(0), Some(1), Some(2), Some(3), Some(4)]
        );
        assert_eq!(
            Graph::complete(4).bfs_distances(0).unwrap(),
            vec![Some(0), Some(1), Some(1), Some(1)]
        );
        assert_eq!(Graph::empty(1).bfs_distances(0).unwrap(), vec![Some(0)]);
        assert_eq!(
            Graph::empty(2).bfs_distances(0).unwrap(),
            vec![Some(0), None]
        );
        assert!(matches!(
            Graph::path(3).bfs_distances(3),
            Err(Error::InvalidVertex { vertex: 3, .. })
        ));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(Graph::cycle(5).diameter(), Some(2));
        assert_eq!(Graph::path(5).diameter(), Some(4));
        assert_eq!(Graph::empty(2).diameter(), None);
        assert_eq!(Graph::empty(1).diameter(), Some(0));
        assert_eq!(Graph::petersen().diameter(), Some(2));
        assert_eq!(Graph::cycle(7).diameter(), Some(3));
    }

    #[test]
    fn ball_examples() {
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            assert_eq!(c5.ball(v, 1, true).unwrap().len(), 3);
            assert_eq!(c5.ball(v, 0, true).unwrap().to_vec(), vec![v]);
            assert!(c5.ball(v, 0, false).unwrap().is_empty());
        }
        assert_eq!(
            Graph::path(5).ball(0, 2, true).unwrap().to_vec(),
            vec![0, 1, 2]
        );
        assert_eq!(
            Graph::path(5).ball(0, 2, false).unwrap().to_vec(),
            vec![1, 2]
        );
        assert!(Graph::path(5).ball(9, 1, true).is_err());
    }

    #[test]
    fn induced_examples() {
        let c5 = Graph::cycle(5);
        let (p3, map) = c5.induced(&set(5, &[1, 2, 3]));
        assert_eq!(p3, Graph::path(3));
        assert_eq!(map.to_parent, vec![1, 2, 3]);
        assert_eq!(map.from_parent[0], None);
        assert_eq!(map.from_parent[2], Some(1));

        let (empty, _) = c5.induced(&VertexSet::new(5));
        assert_eq!(empty.vertex_count(), 0);

        // Outer face 0..5 of the standard labeling.
        let (face, _) = Graph::petersen().induced(&set(10, &[0, 1, 2, 3, 4]));
        assert_eq!(face, Graph::cycle(5));
        // Inner pentagram 5..10 is also a 5-cycle (5-7-9-6-8-5).
        let (inner, _) = Graph::petersen().induced(&set(10, &[5, 6, 7, 8, 9]));
        assert_eq!(inner.edge_count(), 5);
        assert!((0..5).all(|v| inner.degree(v) == 2));
        assert_eq!(inner.diameter(), Some(2));
    }

    #[test]
    fn contraction_examples() {
        // P3 u-w-v with u=0, w=1, v=2: z=1, w=0.
        let (g, map) = Graph::path(3).contract_pair(0, 2).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(map, vec![1, 0, 1]);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 1);

        // C4 opposite vertices: z adjacent to both others, star K_{1,2}.
        let (g, map) = Graph::cycle(4).contract_pair(0, 2).unwrap();
        let z = map[0];
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.degree(z), 2);
        assert_eq!(g.edge_count(), 2);

        // C5 with u, v at distance 2: deg(z) = 3.
        let (g, map) = Graph::cycle(5).contract_pair(0, 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(map[0]), 3);

        assert_eq!(
            Graph::cycle(5).contract_pair(0, 1).unwrap_err(),
            Error::AdjacentContraction(0, 1)
        );
        assert!(Graph::cycle(5).contract_pair(2, 2).is_err());
    }

    #[test]
    fn common_neighbor_examples() {
        let c4 = Graph::cycle(4);
        assert_eq!(c4.common_neighbor_witness(0, 2), Some(1));
        assert_eq!(Graph::empty(2).common_neighbor_witness(0, 1), None);
        let k4 = Graph::complete(4);
        for u in 0..4 {
            for v in 0..4 {
                // N[u] ∩ N[v] is everything in K4.
                assert_eq!(k4.common_neighbor_witness(u, v), Some(0));
            }
        }
    }

    #[test]
    fn loops_only_when_allowed() {
        assert_eq!(
            Graph::from_edges(2, &[(1, 1)]).unwrap_err(),
            Error::LoopNotAllowed(1)
        );
        let mut b = GraphBuilder::new(2).allow_loops();
        b.add_edge(0, 0).unwrap();
        b.add_edge(0, 1).unwrap();
        assert!(!b.add_edge(1, 0).unwrap());
        let h = b.build();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.degree(0), 2);
        assert!(h.has_loops());
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
    }
}
