//! Depth-first branch-and-reduce over list assignments.
//!
//! The engine is shared by the 3-coloring solver and the list homomorphism
//! solver: both are "map every vertex to a color from its list so that every
//! edge lands on a compatible pair", differing only in the [`Palette`].
//!
//! Every node applies singleton propagation, finishes through 2-SAT once no
//! list has three or more colors, and otherwise asks its [`Strategy`] for an
//! ordered, lazily produced sequence of children. The first satisfiable child
//! in that order wins, which makes the reported certificate the one on the
//! lexicographically smallest satisfiable branch path. When the root is
//! explored by several workers, results are still combined in child order so
//! outcome, certificate and counters do not depend on the thread count.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::color::{Color, ColorSet, Palette};
use crate::graph::{Graph, VertexSet};
use crate::instance::{propagate, LayerStructure};
use crate::twosat;

use super::rules::{self, RuleChoice, WitnessEnumerator};
use super::{SearchStats, SolverConfig};

/// How a node with lists of three or more colors is split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Strategy {
    /// Branch on every color of the lowest-id vertex with a big list.
    Complete,
    /// Rules B1 to B4. With `sample`, B4 draws a random witness instead of
    /// enumerating. With `trust_exhaustion`, a B4 enumeration that runs to
    /// completion without success settles the node as unsatisfiable;
    /// otherwise (and always after sampling or a budget cut) the node falls
    /// back to complete branching.
    Witness {
        sample: bool,
        trust_exhaustion: bool,
    },
    /// High-degree branching plus dominating-ball enumeration, for a graph of
    /// the given diameter.
    DegreeBall { diameter: usize },
    /// Color a small dominating set at the root, complete branching below.
    Baseline,
}

/// Lower bound on how much a child must shrink `|V3|`, checked once the
/// child has been reduced.
#[derive(Debug, Clone, Copy)]
enum Progress {
    /// More than `parent^{2/3}` big lists removed.
    B1 { parent: usize },
    /// At least `⌈parent/6⌉` big lists removed.
    B4 { parent: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    graph: Arc<Graph>,
    lists: Vec<ColorSet>,
    /// Current vertex id of every original vertex.
    origin: Arc<Vec<u32>>,
    seed: u64,
    depth: usize,
    progress: Option<Progress>,
}

impl Node {
    pub(crate) fn root(graph: Arc<Graph>, lists: Vec<ColorSet>, seed: u64) -> Node {
        let origin = Arc::new((0..graph.vertex_count() as u32).collect());
        Node {
            graph,
            lists,
            origin,
            seed,
            depth: 0,
            progress: None,
        }
    }

    fn child(&self, lists: Vec<ColorSet>) -> Node {
        Node {
            graph: self.graph.clone(),
            lists,
            origin: self.origin.clone(),
            seed: 0,
            depth: self.depth + 1,
            progress: None,
        }
    }

    fn with_list(&self, v: usize, list: ColorSet) -> Node {
        let mut lists = self.lists.clone();
        lists[v] = list;
        self.child(lists)
    }
}

#[derive(Debug)]
pub(crate) enum Interrupt {
    Timeout,
    Cancelled,
}

type NodeResult = Result<Option<Vec<Color>>, Interrupt>;

/// A node ready to branch, or its finished result.
type Prepared = Result<(Node, LayerStructure), Option<Vec<Color>>>;

pub(crate) struct Engine<'a> {
    pub palette: &'a Palette,
    pub strategy: Strategy,
    pub cfg: &'a SolverConfig,
    pub deadline: Option<Instant>,
}

struct Task<'c> {
    stats: SearchStats,
    cancel: Option<(&'c AtomicUsize, usize)>,
}

/// Ordered, lazily expanded children of one node.
enum Children<'n> {
    List(VecDeque<Node>),
    Witness {
        node: &'n Node,
        en: Box<WitnessEnumerator<'n>>,
        parent_mu: usize,
        trust_exhaustion: bool,
        fallback: Fallback,
    },
    Sampled {
        first: VecDeque<Node>,
        fallback: Fallback,
    },
    Colorings {
        node: &'n Node,
        vertices: Vec<usize>,
        odometer: rules::Odometer,
    },
}

impl<'a> Engine<'a> {
    /// Solves from `root`, combining the root's children in parallel when
    /// `cfg.threads > 1`.
    pub(crate) fn run(&self, root: Node) -> (Result<Option<Vec<Color>>, Interrupt>, SearchStats) {
        let mut task = Task {
            stats: SearchStats::default(),
            cancel: None,
        };
        let result = if self.cfg.threads <= 1 {
            self.solve_node(root, &mut task)
        } else {
            self.solve_root_parallel(root, &mut task)
        };
        (result, task.stats)
    }

    fn check_interrupt(&self, task: &Task<'_>) -> Result<(), Interrupt> {
        if let Some((best, me)) = task.cancel {
            if best.load(Ordering::Relaxed) < me {
                return Err(Interrupt::Cancelled);
            }
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Interrupt::Timeout);
            }
        }
        Ok(())
    }

    /// Propagates, checks progress, and finishes the node if it has no big
    /// lists. Returns the reduced node and its layers otherwise.
    fn prepare(&self, mut node: Node, task: &mut Task<'_>) -> Result<Prepared, Interrupt> {
        self.check_interrupt(task)?;
        let stats = &mut task.stats;
        stats.nodes_expanded += 1;
        stats.max_depth = stats.max_depth.max(node.depth);
        match propagate(&node.graph, &mut node.lists, self.palette) {
            Ok(removed) => stats.r1 += removed,
            Err(_) => {
                stats.r2 += 1;
                return Ok(Err(None));
            }
        }
        let layers = LayerStructure::of(&node.lists).expect("propagation leaves lists non-empty");
        if let Some(p) = node.progress {
            stats.progress_checks += 1;
            let now = layers.measure_diam2;
            let ok = match p {
                Progress::B1 { parent } => {
                    rules::exceeds_two_thirds(parent.saturating_sub(now), parent)
                }
                Progress::B4 { parent } => {
                    parent.saturating_sub(now) >= rules::domination_target(parent)
                }
            };
            if !ok {
                stats.progress_violations += 1;
            }
        }
        if layers.v3.is_empty() {
            stats.r3 += 1;
            let enc = twosat::encode_list_pairs(&node.graph, &node.lists, self.palette)
                .expect("lists have at most two colors");
            return Ok(Err(enc.solve().map(|colors| {
                node.origin.iter().map(|&z| colors[z as usize]).collect()
            })));
        }
        Ok(Ok((node, layers)))
    }

    fn solve_node(&self, node: Node, task: &mut Task<'_>) -> NodeResult {
        let (node, layers) = match self.prepare(node, task)? {
            Ok(x) => x,
            Err(done) => return Ok(done),
        };
        let mut children = self.expand(&node, &layers, &mut task.stats);
        let mut idx = 0u64;
        while let Some(mut child) = self.next_child(&mut children, &mut task.stats) {
            child.seed = mix_seed(node.seed, idx);
            idx += 1;
            if let Some(c) = self.solve_node(child, task)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn solve_root_parallel(&self, root: Node, task: &mut Task<'_>) -> NodeResult {
        let (node, layers) = match self.prepare(root, task)? {
            Ok(x) => x,
            Err(done) => return Ok(done),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.threads)
            .stack_size(STACK_BYTES)
            .build()
            .expect("thread pool");
        let mut children = self.expand(&node, &layers, &mut task.stats);
        let batch_size = 2 * self.cfg.threads;
        let mut idx = 0usize;
        loop {
            // Expansion counters are attributed per child so that counters
            // from children past the winning one can be discarded.
            let mut batch = Vec::with_capacity(batch_size);
            for _ in 0..batch_size {
                let mut delta = SearchStats::default();
                match self.next_child(&mut children, &mut delta) {
                    Some(mut child) => {
                        child.seed = mix_seed(node.seed, idx as u64);
                        batch.push((idx, child, delta));
                        idx += 1;
                    }
                    None => {
                        task.stats.merge(&delta);
                        break;
                    }
                }
            }
            if batch.is_empty() {
                return Ok(None);
            }
            let exhausted = batch.len() < batch_size;
            let best = AtomicUsize::new(usize::MAX);
            let results: Vec<(usize, SearchStats, SearchStats, NodeResult)> = pool.install(|| {
                batch
                    .into_par_iter()
                    .map(|(i, child, delta)| {
                        let mut sub = Task {
                            stats: SearchStats::default(),
                            cancel: Some((&best, i)),
                        };
                        let r = self.solve_node(child, &mut sub);
                        if matches!(r, Ok(Some(_))) {
                            best.fetch_min(i, Ordering::Relaxed);
                        }
                        (i, delta, sub.stats, r)
                    })
                    .collect()
            });
            for (_, delta, sub, r) in results {
                task.stats.merge(&delta);
                task.stats.merge(&sub);
                match r {
                    Ok(Some(c)) => return Ok(Some(c)),
                    Ok(None) => {}
                    Err(Interrupt::Timeout) => return Err(Interrupt::Timeout),
                    Err(Interrupt::Cancelled) => {
                        unreachable!("only children past a winner are cancelled")
                    }
                }
            }
            if exhausted {
                return Ok(None);
            }
        }
    }

    fn complete_children(
        &self,
        node: &Node,
        layers: &LayerStructure,
        stats: &mut SearchStats,
    ) -> VecDeque<Node> {
        stats.complete_branches += 1;
        let v = layers.v3.first().expect("big list present");
        node.lists[v]
            .iter()
            .map(|c| node.with_list(v, ColorSet::singleton(c)))
            .collect()
    }

    fn expand<'n>(
        &self,
        node: &'n Node,
        layers: &LayerStructure,
        stats: &mut SearchStats,
    ) -> Children<'n> {
        match self.strategy {
            Strategy::Complete => Children::List(self.complete_children(node, layers, stats)),
            Strategy::Baseline if node.depth == 0 => {
                stats.dominating_sets += 1;
                let s = dominating_set(&node.graph);
                let vertices: Vec<usize> = s.iter().filter(|&v| node.lists[v].len() > 1).collect();
                self.colorings_of(node, vertices)
            }
            Strategy::Baseline => Children::List(self.complete_children(node, layers, stats)),
            Strategy::DegreeBall { diameter } => self.degree_ball(node, layers, diameter, stats),
            Strategy::Witness {
                sample,
                trust_exhaustion,
            } => self.witness_rules(node, layers, sample, trust_exhaustion, stats),
        }
    }

    fn colorings_of<'n>(&self, node: &'n Node, vertices: Vec<usize>) -> Children<'n> {
        let choices = vertices
            .iter()
            .map(|&v| node.lists[v].iter().collect())
            .collect();
        Children::Colorings {
            node,
            vertices,
            odometer: rules::Odometer::new(choices),
        }
    }

    fn degree_ball<'n>(
        &self,
        node: &'n Node,
        layers: &LayerStructure,
        diameter: usize,
        stats: &mut SearchStats,
    ) -> Children<'n> {
        let d = diameter.max(1);
        let mu = layers.measure_diam3 as f64;
        let threshold = (mu * mu.ln()).max(0.0).powf(1.0 / d as f64);
        let unfixed = layers.unfixed();
        let g = &node.graph;
        let heavy = unfixed
            .iter()
            .find(|&v| g.neighbor_set(v).intersection_len(&unfixed) as f64 >= threshold);
        if let Some(v) = heavy {
            stats.degree_branches += 1;
            // Most common list among the unfixed neighbors, lowest mask on ties.
            let mut counts: Vec<(ColorSet, usize)> = Vec::new();
            for u in g.neighbor_set(v).intersection(&unfixed).iter() {
                let l = node.lists[u];
                match counts.iter_mut().find(|(m, _)| *m == l) {
                    Some((_, k)) => *k += 1,
                    None => counts.push((l, 1)),
                }
            }
            counts.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
            let own = node.lists[v];
            let a = counts
                .first()
                .and_then(|(l, _)| own.intersect(*l).min())
                .or_else(|| own.min())
                .unwrap();
            return Children::List(VecDeque::from([
                node.with_list(v, ColorSet::singleton(a)),
                node.with_list(v, own.without(a)),
            ]));
        }
        stats.ball_branches += 1;
        let v = layers.v3.first().unwrap();
        let ball = g.ball_within(v, d - 1, true, Some(&unfixed));
        self.colorings_of(node, ball.to_vec())
    }

    fn witness_rules<'n>(
        &self,
        node: &'n Node,
        layers: &LayerStructure,
        sample: bool,
        trust_exhaustion: bool,
        stats: &mut SearchStats,
    ) -> Children<'n> {
        let mu = layers.measure_diam2;
        match rules::select_rule(&node.graph, layers) {
            RuleChoice::B1(v) => {
                stats.b1 += 1;
                Children::List(
                    node.lists[v]
                        .iter()
                        .map(|c| {
                            let mut ch = node.with_list(v, ColorSet::singleton(c));
                            ch.progress = Some(Progress::B1 { parent: mu });
                            ch
                        })
                        .collect(),
                )
            }
            RuleChoice::B2(v) => {
                stats.b2 += 1;
                Children::List(
                    node.lists[v]
                        .iter()
                        .map(|c| node.with_list(v, ColorSet::singleton(c)))
                        .collect(),
                )
            }
            RuleChoice::B3(u, v) => {
                stats.b3 += 1;
                Children::List(self.b3_children(node, u, v, stats))
            }
            RuleChoice::B4 => {
                stats.b4 += 1;
                if sample {
                    let mut rng = ChaCha8Rng::seed_from_u64(node.seed);
                    let w = rules::sample_with_palette(
                        &node.graph,
                        &node.lists,
                        layers,
                        self.cfg,
                        &mut rng,
                    );
                    let first = match w {
                        Some(w) => {
                            stats.witnesses_sampled += 1;
                            rules::phi_family(&node.lists, &w, self.cfg.phi_cap)
                                .into_iter()
                                .map(|t| witness_child(node, &t, mu))
                                .collect()
                        }
                        None => VecDeque::new(),
                    };
                    let fallback = self.complete_children_lazy(node, layers);
                    Children::Sampled {
                        first,
                        fallback: Fallback::new(fallback),
                    }
                } else {
                    let en = WitnessEnumerator::with_palette(
                        &node.graph,
                        &node.lists,
                        layers,
                        self.palette.colors(),
                        self.cfg,
                    );
                    let fallback = self.complete_children_lazy(node, layers);
                    Children::Witness {
                        node,
                        en: Box::new(en),
                        parent_mu: mu,
                        trust_exhaustion,
                        fallback: Fallback::new(fallback),
                    }
                }
            }
        }
    }

    /// Complete-branching children, counted only if actually used.
    fn complete_children_lazy(&self, node: &Node, layers: &LayerStructure) -> VecDeque<Node> {
        let v = layers.v3.first().expect("big list present");
        node.lists[v]
            .iter()
            .map(|c| node.with_list(v, ColorSet::singleton(c)))
            .collect()
    }

    fn b3_children(
        &self,
        node: &Node,
        u: usize,
        v: usize,
        stats: &mut SearchStats,
    ) -> VecDeque<Node> {
        let (lu, lv) = (node.lists[u], node.lists[v]);
        let mut out = VecDeque::new();
        for a in lu.iter() {
            for b in lv.iter().filter(|&b| b != a) {
                let mut lists = node.lists.clone();
                lists[u] = ColorSet::singleton(a);
                lists[v] = ColorSet::singleton(b);
                out.push_back(node.child(lists));
            }
        }
        let same = lu.intersect(lv);
        if node.graph.has_edge(u, v) {
            stats.contractions_skipped += 1;
            // Equal colors on an edge need a loop in the color graph.
            for c in same.iter().filter(|&c| self.palette.allows(c, c)) {
                let mut lists = node.lists.clone();
                lists[u] = ColorSet::singleton(c);
                lists[v] = ColorSet::singleton(c);
                out.push_back(node.child(lists));
            }
        } else if !same.is_empty() {
            stats.contractions += 1;
            let (g, map) = node.graph.contract_pair(u, v).expect("non-adjacent pair");
            let mut lists = vec![ColorSet::EMPTY; g.vertex_count()];
            for (old, &new) in map.iter().enumerate() {
                if old != u && old != v {
                    lists[new] = node.lists[old];
                }
            }
            lists[map[u]] = same;
            let origin: Vec<u32> = node
                .origin
                .iter()
                .map(|&z| map[z as usize] as u32)
                .collect();
            out.push_back(Node {
                graph: Arc::new(g),
                lists,
                origin: Arc::new(origin),
                seed: 0,
                depth: node.depth + 1,
                progress: None,
            });
        }
        out
    }

    fn next_child(&self, children: &mut Children<'_>, stats: &mut SearchStats) -> Option<Node> {
        match children {
            Children::List(q) => q.pop_front(),
            Children::Colorings {
                node,
                vertices,
                odometer,
            } => {
                let cs = odometer.next()?;
                let mut lists = node.lists.clone();
                for (&v, c) in vertices.iter().zip(cs) {
                    lists[v] = ColorSet::singleton(c);
                }
                Some(node.child(lists))
            }
            Children::Sampled {
                first, fallback, ..
            } => {
                if let Some(ch) = first.pop_front() {
                    stats.b4_branches += 1;
                    return Some(ch);
                }
                fallback.pop(stats)
            }
            Children::Witness {
                node,
                en,
                parent_mu,
                trust_exhaustion,
                fallback,
            } => {
                let before = en.checked();
                let next = en.next();
                stats.witness_tuples_checked += en.checked() - before;
                if let Some(t) = next {
                    stats.b4_branches += 1;
                    return Some(witness_child(node, &t, *parent_mu));
                }
                if *trust_exhaustion && !en.budget_exhausted() {
                    return None;
                }
                fallback.pop(stats)
            }
        }
    }
}

/// Complete-branching children used once witness branching gave up.
struct Fallback {
    queue: VecDeque<Node>,
    started: bool,
}

impl Fallback {
    fn new(queue: VecDeque<Node>) -> Self {
        Fallback {
            queue,
            started: false,
        }
    }

    fn pop(&mut self, stats: &mut SearchStats) -> Option<Node> {
        if !self.started && !self.queue.is_empty() {
            self.started = true;
            stats.fallbacks += 1;
            stats.complete_branches += 1;
        }
        self.queue.pop_front()
    }
}

fn witness_child(node: &Node, t: &rules::WitnessTuple, parent_mu: usize) -> Node {
    let mut lists = node.lists.clone();
    t.apply(&mut lists);
    let mut ch = node.child(lists);
    ch.progress = Some(Progress::B4 { parent: parent_mu });
    ch
}

/// Smaller of `N(v)` for a minimum-degree `v` and a greedy dominating set,
/// preferring `N(v)` on ties; `N(v)` only counts when it dominates.
pub(crate) fn dominating_set(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let greedy = greedy_dominating_set(g);
    let Some(v) = (0..n).min_by_key(|&v| (g.degree(v), v)) else {
        return greedy;
    };
    let nbr = g.neighbor_set(v).clone();
    let dominates = g.closed_neighborhood_of(&nbr).len() == n;
    if dominates && nbr.len() <= greedy.len() {
        nbr
    } else {
        greedy
    }
}

/// Repeatedly takes the vertex covering the most undominated vertices
/// (lowest id on ties).
pub(crate) fn greedy_dominating_set(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let mut undominated = VertexSet::full(n);
    let mut out = VertexSet::new(n);
    while !undominated.is_empty() {
        let best = (0..n)
            .max_by_key(|&v| {
                let gain = g.neighbor_set(v).intersection_len(&undominated)
                    + undominated.contains(v) as usize;
                (gain, std::cmp::Reverse(v))
            })
            .unwrap();
        out.insert(best);
        undominated.remove(best);
        undominated.difference_with(g.neighbor_set(best));
    }
    out
}

pub(crate) const STACK_BYTES: usize = 256 << 20;

fn mix_seed(parent: u64, idx: u64) -> u64 {
    let mut z = parent ^ idx.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
