//! Candidate selection for the branching rules B1 to B3 and the witness
//! tuples of rule B4.
//!
//! All thresholds compare integers against `μ^{2/3}` exactly by cubing both
//! sides, so there is no floating point rounding at the boundary.

use rand::Rng;

use crate::color::{Color, ColorSet};
use crate::graph::{Graph, VertexSet};
use crate::instance::{ColoringInstance, LayerStructure};

use super::SolverConfig;

/// `count > μ^{2/3}`.
#[inline]
pub(crate) fn exceeds_two_thirds(count: usize, mu: usize) -> bool {
    (count as u128).pow(3) > (mu as u128).pow(2)
}

/// `count >= μ^{2/3}`.
#[inline]
pub(crate) fn reaches_two_thirds(count: usize, mu: usize) -> bool {
    (count as u128).pow(3) >= (mu as u128).pow(2)
}

/// `count >= μ^{2/3} / 36`.
#[inline]
pub(crate) fn reaches_b2_threshold(count: usize, mu: usize) -> bool {
    (36 * count as u128).pow(3) >= (mu as u128).pow(2)
}

/// `⌈μ/6⌉`, the number of `V3` vertices an accepted witness must dominate.
#[inline]
pub fn domination_target(mu: usize) -> usize {
    mu.div_ceil(6)
}

/// Largest `|S|` and `|S̃|` for witness tuples: `⌊K μ^{1/3} ln μ⌋`, but at
/// least 1 whenever `μ >= 1` (the formula is 0 at `μ = 1`) and never more
/// than `μ`.
pub fn witness_size_bound(mu: usize, k_const: f64) -> usize {
    if mu == 0 {
        return 0;
    }
    let m = mu as f64;
    let raw = (k_const * m.cbrt() * m.ln()).floor();
    let raw = if raw.is_finite() && raw > 0.0 {
        raw as usize
    } else {
        0
    };
    raw.clamp(1, mu)
}

/// Probability with which neighbors of `v_a` enter `S̃` when sampling:
/// `min(1, 100 μ^{-1/3} ln μ)`.
pub fn sample_prob_s_tilde(mu: usize) -> f64 {
    if mu <= 1 {
        return 0.0;
    }
    let m = mu as f64;
    (100.0 * m.ln() / m.cbrt()).clamp(0.0, 1.0)
}

/// Probability with which `V3` vertices enter `S` when sampling:
/// `min(1, μ^{-2/3})`.
pub fn sample_prob_s(mu: usize) -> f64 {
    if mu == 0 {
        return 0.0;
    }
    (mu as f64).powf(-2.0 / 3.0).clamp(0.0, 1.0)
}

/// B1: lowest-id `v ∈ V2 ∪ V3` with more than `μ^{2/3}` neighbors in `V3`.
pub(crate) fn b1(graph: &Graph, layers: &LayerStructure) -> Option<usize> {
    let mu = layers.measure_diam2;
    if mu == 0 {
        return None;
    }
    let unfixed = layers.unfixed();
    let found = unfixed
        .iter()
        .find(|&v| exceeds_two_thirds(graph.neighbor_set(v).intersection_len(&layers.v3), mu));
    found
}

/// Number of `u ∈ V3 \ {v}` sharing a neighbor in `V2` with `v`.
pub(crate) fn b2_count(graph: &Graph, layers: &LayerStructure, v: usize) -> usize {
    let mut reach = VertexSet::new(graph.vertex_count());
    for w in graph.neighbor_set(v).intersection(&layers.v2).iter() {
        reach.union_with(graph.neighbor_set(w));
    }
    reach.intersect_with(&layers.v3);
    reach.remove(v);
    reach.len()
}

/// B2: lowest-id `v ∈ V3` such that at least `μ^{2/3}/36` vertices of `V3`
/// have a common neighbor with `v` inside `V2`.
pub(crate) fn b2(graph: &Graph, layers: &LayerStructure) -> Option<usize> {
    let mu = layers.measure_diam2;
    if mu == 0 || layers.v2.is_empty() {
        return None;
    }
    layers
        .v3
        .iter()
        .find(|&v| reaches_b2_threshold(b2_count(graph, layers, v), mu))
}

/// Number of `w ∈ V3` with `N(u) ∩ N(v) ∩ N(w) ≠ ∅`.
pub(crate) fn b3_count(graph: &Graph, layers: &LayerStructure, u: usize, v: usize) -> usize {
    let common = graph.neighbor_set(u).intersection(graph.neighbor_set(v));
    if common.is_empty() {
        return 0;
    }
    let mut reach = VertexSet::new(graph.vertex_count());
    for c in common.iter() {
        reach.union_with(graph.neighbor_set(c));
    }
    reach.intersection_len(&layers.v3)
}

/// B3: lexicographically smallest pair `u < v` in `V3` such that at least
/// `μ^{2/3}` vertices `w ∈ V3` satisfy `N(u) ∩ N(v) ∩ N(w) ≠ ∅`.
pub(crate) fn b3(graph: &Graph, layers: &LayerStructure) -> Option<(usize, usize)> {
    let mu = layers.measure_diam2;
    if mu < 2 {
        return None;
    }
    let v3 = layers.v3.to_vec();
    for (i, &u) in v3.iter().enumerate() {
        for &v in &v3[i + 1..] {
            if reaches_two_thirds(b3_count(graph, layers, u, v), mu) {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn rule_b1_candidate(inst: &ColoringInstance, layers: &LayerStructure) -> Option<usize> {
    b1(inst.graph(), layers)
}

pub fn rule_b2_candidate(inst: &ColoringInstance, layers: &LayerStructure) -> Option<usize> {
    b2(inst.graph(), layers)
}

pub fn rule_b3_candidate(
    inst: &ColoringInstance,
    layers: &LayerStructure,
) -> Option<(usize, usize)> {
    b3(inst.graph(), layers)
}

/// Which branching rule applies to a reduced instance, in priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleChoice {
    B1(usize),
    B2(usize),
    B3(usize, usize),
    B4,
}

/// First applicable of B1, B2, B3, falling through to B4.
pub fn select_rule(graph: &Graph, layers: &LayerStructure) -> RuleChoice {
    if let Some(v) = b1(graph, layers) {
        RuleChoice::B1(v)
    } else if let Some(v) = b2(graph, layers) {
        RuleChoice::B2(v)
    } else if let Some((u, v)) = b3(graph, layers) {
        RuleChoice::B3(u, v)
    } else {
        RuleChoice::B4
    }
}

/// A guess for rule B4: color `a` on all of `s`, and the coloring `phi`
/// (avoiding `a`) on the disjoint set `s_tilde`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTuple {
    pub a: Color,
    pub s: VertexSet,
    pub s_tilde: VertexSet,
    /// `(vertex, color)` for every vertex of `s_tilde`, by increasing vertex.
    pub phi: Vec<(usize, Color)>,
}

impl WitnessTuple {
    /// The lists of `lists` with the tuple's colors fixed.
    pub fn apply(&self, lists: &mut [ColorSet]) {
        for v in self.s.iter() {
            lists[v] = ColorSet::singleton(self.a);
        }
        for &(v, c) in &self.phi {
            lists[v] = ColorSet::singleton(c);
        }
    }
}

/// Number of `V3` vertices dominated by `S ∪ S̃ ∪ (N(S) ∩ N(S̃))`, with all
/// neighborhoods taken in the whole graph.
pub(crate) fn witness_domination(
    graph: &Graph,
    v3: &VertexSet,
    s: &VertexSet,
    s_tilde: &VertexSet,
) -> usize {
    let mut core = graph.neighborhood_of(s);
    core.intersect_with(&graph.neighborhood_of(s_tilde));
    core.union_with(s);
    core.union_with(s_tilde);
    graph.closed_neighborhood_of(&core).intersection_len(v3)
}

pub fn check_witness(inst: &ColoringInstance, layers: &LayerStructure, w: &WitnessTuple) -> usize {
    witness_domination(inst.graph(), &layers.v3, &w.s, &w.s_tilde)
}

/// Subsets of `pool` of size `0..=max`, by size and then lexicographically.
#[derive(Debug, Clone)]
pub(crate) struct SizeLexSubsets {
    pool: Vec<usize>,
    max: usize,
    idx: Option<Vec<usize>>,
    done: bool,
}

impl SizeLexSubsets {
    pub(crate) fn new(pool: Vec<usize>, max: usize) -> Self {
        let max = max.min(pool.len());
        SizeLexSubsets {
            pool,
            max,
            idx: None,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.pool.len();
        let idx = match &mut self.idx {
            None => {
                self.idx = Some(Vec::new());
                return true;
            }
            Some(idx) => idx,
        };
        let k = idx.len();
        // Next combination of the same size.
        for i in (0..k).rev() {
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                return true;
            }
        }
        if k < self.max {
            *idx = (0..k + 1).collect();
            return true;
        }
        false
    }
}

impl Iterator for SizeLexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.advance() {
            self.done = true;
            return None;
        }
        let idx = self.idx.as_ref().unwrap();
        Some(idx.iter().map(|&i| self.pool[i]).collect())
    }
}

/// Mixed-radix counter over per-position color lists, most significant
/// position first. Yields every combination in lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct Odometer {
    choices: Vec<Vec<Color>>,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(choices: Vec<Vec<Color>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        let idx = vec![0; choices.len()];
        Odometer {
            choices,
            idx,
            started: false,
            done,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<Color>;

    fn next(&mut self) -> Option<Vec<Color>> {
        if self.done {
            return None;
        }
        if self.started {
            let mut i = self.idx.len();
            loop {
                if i == 0 {
                    self.done = true;
                    return None;
                }
                i -= 1;
                self.idx[i] += 1;
                if self.idx[i] < self.choices[i].len() {
                    break;
                }
                self.idx[i] = 0;
            }
        }
        self.started = true;
        Some(
            self.idx
                .iter()
                .zip(&self.choices)
                .map(|(&i, cs)| cs[i])
                .collect(),
        )
    }
}

struct AcceptedPair {
    s: VertexSet,
    s_tilde: VertexSet,
    s_tilde_vertices: Vec<usize>,
    colors: Vec<Color>,
    color_pos: usize,
    phi: Option<Odometer>,
}

/// Canonical enumeration of accepted B4 tuples: `S` in size-lexicographic
/// order, then `S̃`, then `a`, then `φ`. The domination check runs once per
/// `(S, S̃)` pair and each check counts against the budget.
pub struct WitnessEnumerator<'a> {
    graph: &'a Graph,
    lists: &'a [ColorSet],
    v3: VertexSet,
    palette_colors: ColorSet,
    bound: usize,
    target: usize,
    budget: usize,
    checked: usize,
    budget_exhausted: bool,
    outer: SizeLexSubsets,
    inner: Option<(Vec<usize>, VertexSet, SizeLexSubsets)>,
    pending: Option<AcceptedPair>,
}

impl<'a> WitnessEnumerator<'a> {
    pub(crate) fn with_palette(
        graph: &'a Graph,
        lists: &'a [ColorSet],
        layers: &LayerStructure,
        palette_colors: ColorSet,
        cfg: &SolverConfig,
    ) -> Self {
        let mu = layers.measure_diam2;
        let bound = witness_size_bound(mu, cfg.k_const);
        let pool = layers.v3.to_vec();
        let mut outer = SizeLexSubsets::new(pool, bound);
        if mu == 0 {
            outer.done = true;
        }
        WitnessEnumerator {
            graph,
            lists,
            v3: layers.v3.clone(),
            palette_colors,
            bound,
            target: domination_target(mu),
            budget: cfg.witness_budget,
            checked: 0,
            budget_exhausted: false,
            outer,
            inner: None,
            pending: None,
        }
    }

    pub fn new(inst: &'a ColoringInstance, layers: &LayerStructure, cfg: &SolverConfig) -> Self {
        Self::with_palette(inst.graph(), inst.lists(), layers, ColorSet::THREE, cfg)
    }

    /// Whether enumeration stopped at the budget rather than running out of
    /// tuples.
    pub fn budget_exhausted(&self) -> bool {
        self.budget_exhausted
    }

    /// Number of `(S, S̃)` pairs whose domination was checked.
    pub fn checked(&self) -> usize {
        self.checked
    }

    pub fn size_bound(&self) -> usize {
        self.bound
    }

    fn next_pair(&mut self) -> Option<(VertexSet, VertexSet)> {
        loop {
            if let Some((_, s_set, inner)) = &mut self.inner {
                if let Some(st) = inner.next() {
                    let st_set = VertexSet::from_iter_in(self.graph.vertex_count(), st);
                    return Some((s_set.clone(), st_set));
                }
                self.inner = None;
            }
            let s = self.outer.next()?;
            let s_set = VertexSet::from_iter_in(self.graph.vertex_count(), s.iter().copied());
            let pool = self.v3.difference(&s_set).to_vec();
            let inner = SizeLexSubsets::new(pool, self.bound);
            self.inner = Some((s, s_set, inner));
        }
    }

    fn next_from_pending(&mut self) -> Option<WitnessTuple> {
        let p = self.pending.as_mut()?;
        loop {
            if let Some(odo) = &mut p.phi {
                if let Some(cs) = odo.next() {
                    let a = p.colors[p.color_pos - 1];
                    return Some(WitnessTuple {
                        a,
                        s: p.s.clone(),
                        s_tilde: p.s_tilde.clone(),
                        phi: p.s_tilde_vertices.iter().copied().zip(cs).collect(),
                    });
                }
                p.phi = None;
            }
            if p.color_pos >= p.colors.len() {
                self.pending = None;
                return None;
            }
            let a = p.colors[p.color_pos];
            p.color_pos += 1;
            let choices = p
                .s_tilde_vertices
                .iter()
                .map(|&v| self.lists[v].without(a).iter().collect())
                .collect();
            p.phi = Some(Odometer::new(choices));
        }
    }
}

impl Iterator for WitnessEnumerator<'_> {
    type Item = WitnessTuple;

    fn next(&mut self) -> Option<WitnessTuple> {
        loop {
            if let Some(t) = self.next_from_pending() {
                return Some(t);
            }
            if self.budget_exhausted {
                return None;
            }
            if self.checked >= self.budget {
                // Only report exhaustion if there was something left to check.
                if self.next_pair_peek() {
                    self.budget_exhausted = true;
                }
                return None;
            }
            let (s, s_tilde) = self.next_pair()?;
            self.checked += 1;
            if witness_domination(self.graph, &self.v3, &s, &s_tilde) < self.target {
                continue;
            }
            let colors = s
                .iter()
                .fold(self.palette_colors, |acc, v| acc.intersect(self.lists[v]))
                .iter()
                .collect();
            self.pending = Some(AcceptedPair {
                s_tilde_vertices: s_tilde.to_vec(),
                s,
                s_tilde,
                colors,
                color_pos: 0,
                phi: None,
            });
        }
    }
}

impl WitnessEnumerator<'_> {
    fn next_pair_peek(&mut self) -> bool {
        if let Some((_, _, inner)) = &self.inner {
            if inner.clone().next().is_some() {
                return true;
            }
        }
        self.outer.clone().next().is_some()
    }
}

/// Randomized witness search: pick `v_a ∈ V3` and `a ∈ L(v_a)`, put each
/// `V3`-neighbor of `v_a` into `S̃` with probability
/// [`sample_prob_s_tilde`], each remaining `V3` vertex into `S` with
/// probability [`sample_prob_s`], and keep the first draw (up to
/// `max_retries`) that respects the size bound and dominates `⌈μ/6⌉` of
/// `V3`. The returned `phi` is the lexicographically first coloring of `S̃`.
pub(crate) fn sample_with_palette<R: Rng>(
    graph: &Graph,
    lists: &[ColorSet],
    layers: &LayerStructure,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Option<WitnessTuple> {
    let mu = layers.measure_diam2;
    if mu == 0 {
        return None;
    }
    let v3 = layers.v3.to_vec();
    let bound = witness_size_bound(mu, cfg.k_const);
    let target = domination_target(mu);
    let (p_tilde, p) = (sample_prob_s_tilde(mu), sample_prob_s(mu));
    let n = graph.vertex_count();
    for _ in 0..cfg.max_retries {
        let v_a = v3[rng.gen_range(0..v3.len())];
        let colors: Vec<Color> = lists[v_a].iter().collect();
        let a = colors[rng.gen_range(0..colors.len())];
        let mut s_tilde = VertexSet::new(n);
        for x in graph.neighbor_set(v_a).intersection(&layers.v3).iter() {
            if rng.gen_bool(p_tilde) {
                s_tilde.insert(x);
            }
        }
        let mut s = VertexSet::new(n);
        for &x in &v3 {
            if !s_tilde.contains(x) && rng.gen_bool(p) {
                s.insert(x);
            }
        }
        if s.len() > bound || s_tilde.len() > bound {
            continue;
        }
        if s.iter().any(|v| !lists[v].contains(a)) {
            continue;
        }
        let phi: Option<Vec<(usize, Color)>> = s_tilde
            .iter()
            .map(|v| lists[v].without(a).min().map(|c| (v, c)))
            .collect();
        let Some(phi) = phi else { continue };
        if witness_domination(graph, &layers.v3, &s, &s_tilde) >= target {
            return Some(WitnessTuple { a, s, s_tilde, phi });
        }
    }
    None
}

pub fn sample_witness<R: Rng>(
    inst: &ColoringInstance,
    layers: &LayerStructure,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Option<WitnessTuple> {
    sample_with_palette(inst.graph(), inst.lists(), layers, cfg, rng)
}

/// Every coloring of `w.s_tilde` from the lists minus `w.a`, at most `cap`.
pub(crate) fn phi_family(lists: &[ColorSet], w: &WitnessTuple, cap: usize) -> Vec<WitnessTuple> {
    let verts = w.s_tilde.to_vec();
    let choices = verts
        .iter()
        .map(|&v| lists[v].without(w.a).iter().collect())
        .collect();
    Odometer::new(choices)
        .take(cap.max(1))
        .map(|cs| WitnessTuple {
            a: w.a,
            s: w.s.clone(),
            s_tilde: w.s_tilde.clone(),
            phi: verts.iter().copied().zip(cs).collect(),
        })
        .collect()
}
