//! List homomorphism into small targets `H` whose vertices have at most two
//! neighbors (a loop counting the vertex itself).
//!
//! Colors are the vertex ids of `H`. The same search engine as for
//! 3-coloring is used with `H` as its color graph; before searching, every
//! pair of colors further apart in `H` than the diameter of `G` is split off,
//! since the image of a connected `G` has diameter at most `diam(G)`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::color::{Color, ColorSet, Palette, MAX_COLORS};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::instance::{propagate, proper_list_map, Finish, Reduction};
use crate::solver::{
    run_engine, Mode, SearchOutcome, SearchStats, SolverConfig, Strategy, Verdict,
};
use crate::twosat;

/// A homomorphism: the `H`-vertex chosen for every vertex of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping(pub Vec<Color>);

impl Mapping {
    pub fn colors(&self) -> &[Color] {
        &self.0
    }
}

/// Flags `(p1, p2, p3)`:
/// * `p1`: every vertex has at most two neighbors, itself included if looped;
/// * `p2`: two distinct vertices share at most one common neighbor;
/// * `p3`: no loops.
pub fn check_properties(h: &Graph) -> (bool, bool, bool) {
    let n = h.vertex_count();
    let p1 = (0..n).all(|v| h.degree(v) <= 2);
    let p2 = (0..n)
        .all(|x| (x + 1..n).all(|y| h.neighbor_set(x).intersection_len(h.neighbor_set(y)) <= 1));
    let p3 = !h.has_loops();
    (p1, p2, p3)
}

/// The target graph `H`, with its property flags cached.
#[derive(Clone, PartialEq, Eq)]
pub struct TargetGraph {
    graph: Graph,
    name: String,
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
}

impl fmt::Debug for TargetGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetGraph")
            .field("name", &self.name)
            .field("vertices", &self.graph.vertex_count())
            .field("p", &(self.p1, self.p2, self.p3))
            .finish()
    }
}

impl TargetGraph {
    pub fn new(graph: Graph, name: impl Into<String>) -> Result<Self> {
        if graph.vertex_count() > MAX_COLORS {
            return Err(Error::InvalidArgument(format!(
                "targets are limited to {MAX_COLORS} vertices, got {}",
                graph.vertex_count()
            )));
        }
        let (p1, p2, p3) = check_properties(&graph);
        Ok(TargetGraph {
            graph,
            name: name.into(),
            p1,
            p2,
            p3,
        })
    }

    /// `C_k`, vertices `0..k` in cyclic order.
    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!("C_k needs k >= 3, got {k}")));
        }
        TargetGraph::new(Graph::cycle(k), format!("C{k}"))
    }

    /// `P*_k`: the path `0 - 1 - .. - k-1` with loops at both ends.
    pub fn pstar(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!(
                "P*_k needs k >= 3, got {k}"
            )));
        }
        let mut b = GraphBuilder::new(k).allow_loops();
        for i in 0..k - 1 {
            b.add_edge(i, i + 1)?;
        }
        b.add_edge(0, 0)?;
        b.add_edge(k - 1, k - 1)?;
        TargetGraph::new(b.build(), format!("PSTAR{k}"))
    }

    /// Parses `C<k>` or `PSTAR<k>` (also `P*<k>`), case-insensitively.
    pub fn named(name: &str) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        let bad = || Error::InvalidArgument(format!("unknown target `{name}`"));
        let (ctor, digits): (fn(usize) -> Result<Self>, &str) = if let Some(d) = upper
            .strip_prefix("PSTAR")
            .or_else(|| upper.strip_prefix("P*"))
        {
            (TargetGraph::pstar, d)
        } else if let Some(d) = upper.strip_prefix('C') {
            (TargetGraph::cycle, d)
        } else {
            return Err(bad());
        };
        ctor(digits.parse().map_err(|_| bad())?)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn colors(&self) -> ColorSet {
        ColorSet::first_k(self.vertex_count())
    }

    /// `H` as a color graph: `c` may sit next to every `H`-neighbor of `c`.
    pub fn palette(&self) -> Palette {
        let compatible = (0..self.vertex_count())
            .map(|c| ColorSet::from_colors(self.graph.neighbors(c).iter().map(|&x| x as Color)))
            .collect();
        Palette::from_compatibility(self.colors(), compatible)
    }

    /// Whether every vertex has exactly two distinct neighbors and `H` is
    /// connected, i.e. `H` is a cycle.
    pub fn is_cycle(&self) -> bool {
        let n = self.vertex_count();
        n >= 3 && self.p3 && (0..n).all(|v| self.graph.degree(v) == 2) && self.graph.is_connected()
    }
}

/// A graph `G` (no loops), lists of `H`-vertices, and the target `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomInstance {
    graph: Arc<Graph>,
    lists: Vec<ColorSet>,
    target: Arc<TargetGraph>,
}

impl HomInstance {
    /// Lists must be subsets of `V(H)`; empty lists are allowed and simply
    /// make the instance unsatisfiable.
    pub fn new(
        graph: impl Into<Arc<Graph>>,
        lists: Vec<ColorSet>,
        target: impl Into<Arc<TargetGraph>>,
    ) -> Result<Self> {
        let graph = graph.into();
        let target = target.into();
        if let Some((v, _)) = graph.edges().find(|&(u, v)| u == v) {
            return Err(Error::LoopNotAllowed(v));
        }
        if lists.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "{} lists for {} vertices",
                lists.len(),
                graph.vertex_count()
            )));
        }
        if let Some(v) = (0..lists.len()).find(|&v| !lists[v].is_subset(target.colors())) {
            return Err(Error::InvalidArgument(format!(
                "list of vertex {v} is not a subset of V(H)"
            )));
        }
        Ok(HomInstance {
            graph,
            lists,
            target,
        })
    }

    /// Every vertex may take every color.
    pub fn full(graph: impl Into<Arc<Graph>>, target: impl Into<Arc<TargetGraph>>) -> Self {
        let graph = graph.into();
        let target = target.into();
        let lists = vec![target.colors(); graph.vertex_count()];
        HomInstance::new(graph, lists, target).expect("full lists are valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lists(&self) -> &[ColorSet] {
        &self.lists
    }

    pub fn target(&self) -> &TargetGraph {
        &self.target
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Whether `map` respects the lists and sends every edge onto an edge of
    /// `H` (loops included).
    pub fn verify(&self, map: &[Color]) -> bool {
        map.iter()
            .all(|&c| (c as usize) < self.target.vertex_count())
            && proper_list_map(&self.graph, &self.lists, &self.target.palette(), map)
    }
}

/// One side of a distance split: an instance over `H - x` plus the original
/// color of each of its colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPart {
    pub instance: HomInstance,
    pub colors: Vec<Color>,
}

impl SplitPart {
    pub fn lift(&self, map: &[Color]) -> Vec<Color> {
        map.iter().map(|&c| self.colors[c as usize]).collect()
    }
}

/// The lexicographically first pair `x < y` of target vertices further apart
/// than `diam(G)` (different components count as infinitely far), split into
/// the instance without `x` and the instance without `y`. `None` if no such
/// pair exists or `G` is disconnected.
pub fn distance_split(inst: &HomInstance) -> Option<[SplitPart; 2]> {
    let d = inst.graph.diameter()?;
    let h = inst.target.graph();
    let k = h.vertex_count();
    let (x, y) = (0..k).find_map(|x| {
        let dist = h.bfs_distances(x).expect("valid vertex");
        (x + 1..k)
            .find(|&y| dist[y].is_none_or(|e| e > d))
            .map(|y| (x, y))
    })?;
    Some([without_color(inst, x), without_color(inst, y)])
}

fn without_color(inst: &HomInstance, x: usize) -> SplitPart {
    let h = inst.target.graph();
    let keep = VertexSet::from_iter_in(h.vertex_count(), (0..h.vertex_count()).filter(|&c| c != x));
    let (sub, map) = h.induced(&keep);
    let colors: Vec<Color> = map.to_parent.iter().map(|&c| c as Color).collect();
    let lists = inst
        .lists
        .iter()
        .map(|l| {
            ColorSet::from_colors(
                l.iter()
                    .filter_map(|c| map.from_parent[c as usize].map(|z| z as Color)),
            )
        })
        .collect();
    let target = TargetGraph::new(sub, format!("{}-{}", inst.target.name, x))
        .expect("subgraph of a valid target");
    SplitPart {
        instance: HomInstance::new(inst.graph.clone(), lists, target).expect("lists remapped"),
        colors,
    }
}

/// Singleton propagation: a vertex mapped to `c` restricts its neighbors to
/// `N_H(c)`. Requires `p1`.
pub fn hom_reduce(inst: &HomInstance) -> Result<Reduction<HomInstance>> {
    require_p1(&inst.target)?;
    let mut lists = inst.lists.clone();
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(Reduction::Failure);
    }
    Ok(
        match propagate(&inst.graph, &mut lists, &inst.target.palette()) {
            Ok(_) => Reduction::Reduced(HomInstance {
                lists,
                ..inst.clone()
            }),
            Err(_) => Reduction::Failure,
        },
    )
}

/// Solves an instance whose lists all have size 1 or 2 via 2-SAT.
pub fn hom_two_lists(inst: &HomInstance) -> Result<Finish<Mapping>> {
    if inst.lists.iter().any(|l| l.is_empty()) {
        return Ok(Finish::Unsat);
    }
    let enc = twosat::encode_list_pairs(&inst.graph, &inst.lists, &inst.target.palette())?;
    Ok(match enc.solve() {
        Some(map) => {
            debug_assert!(inst.verify(&map));
            Finish::Sat(Mapping(map))
        }
        None => Finish::Unsat,
    })
}

fn require_p1(t: &TargetGraph) -> Result<()> {
    if t.p1 {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!(
            "target {} has a vertex with more than two neighbors",
            t.name
        )))
    }
}

/// Decides a list homomorphism instance. `G` must be connected with diameter
/// at most 3 and `H` must satisfy `p1`.
///
/// Colors splitting apart is applied first, depth-first. The remaining
/// instances are searched with the strategy for `cfg.mode`: witness rules for
/// diameter-2 graphs into cycles with `p2`, or degree branching otherwise.
/// Witness nodes always fall back to complete branching, so every mode
/// decides correctly.
pub fn hom_solve(inst: &HomInstance, cfg: &SolverConfig) -> Result<SearchOutcome<Mapping>> {
    if !inst.target.p1 {
        return Err(Error::InvalidArgument(format!(
            "target {} has a vertex with more than two neighbors",
            inst.target.name
        )));
    }
    let d = inst.graph.diameter();
    if !matches!(d, Some(d) if d <= 3) {
        return Err(Error::InvalidArgument(format!(
            "list homomorphism needs a connected graph of diameter at most 3, got {}",
            d.map_or("infinity".to_string(), |d| d.to_string())
        )));
    }
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let verdict = solve_split(inst, cfg, start, &mut stats);
    stats.wall_time = start.elapsed();
    let verdict = match verdict {
        Verdict::Sat(m) => {
            assert!(inst.verify(&m), "solver produced an invalid homomorphism");
            Verdict::Sat(Mapping(m))
        }
        Verdict::Unsat => Verdict::Unsat,
        Verdict::Timeout => Verdict::Timeout,
    };
    Ok(SearchOutcome { verdict, stats })
}

fn solve_split(
    inst: &HomInstance,
    cfg: &SolverConfig,
    start: Instant,
    stats: &mut SearchStats,
) -> Verdict<Vec<Color>> {
    let Some(parts) = distance_split(inst) else {
        return solve_leaf(inst, cfg, start, stats);
    };
    for part in &parts {
        match solve_split(&part.instance, cfg, start, stats) {
            Verdict::Sat(m) => return Verdict::Sat(part.lift(&m)),
            Verdict::Unsat => {}
            Verdict::Timeout => return Verdict::Timeout,
        }
    }
    Verdict::Unsat
}

fn solve_leaf(
    inst: &HomInstance,
    cfg: &SolverConfig,
    start: Instant,
    stats: &mut SearchStats,
) -> Verdict<Vec<Color>> {
    if inst.lists.iter().all(|l| l.len() <= 2) {
        stats.r3 += 1;
        return match hom_two_lists(inst).expect("lists have at most two colors") {
            Finish::Sat(m) => Verdict::Sat(m.0),
            Finish::Unsat => Verdict::Unsat,
        };
    }
    let t = &inst.target;
    let d = inst.graph.diameter().expect("connected");
    let strategy = match cfg.mode {
        Mode::Complete => Strategy::Complete,
        Mode::BaselineMs => Strategy::Baseline,
        Mode::Diam3 => Strategy::DegreeBall { diameter: d },
        Mode::Paper | Mode::Randomized if d <= 2 && t.p2 && t.is_cycle() => Strategy::Witness {
            sample: cfg.mode == Mode::Randomized,
            trust_exhaustion: false,
        },
        Mode::Paper | Mode::Randomized => Strategy::DegreeBall { diameter: d },
    };
    let mut leaf_cfg = cfg.clone();
    if let Some(limit) = cfg.time_limit {
        leaf_cfg.time_limit = Some(limit.saturating_sub(start.elapsed()));
    }
    let out = run_engine(
        inst.graph.clone(),
        inst.lists.clone(),
        &t.palette(),
        strategy,
        &leaf_cfg,
    );
    stats.merge(&out.stats);
    out.verdict
}
