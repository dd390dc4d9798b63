//! Brute-force ground truth and the differential sweep comparing every
//! solver mode against it.
//!
//! The oracles enumerate every list-respecting assignment in lexicographic
//! order (vertex 0 most significant, colors increasing) and check every edge
//! of every assignment. They share no code with the solvers beyond the
//! instance types.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::color::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::format::{serialize_coloring, serialize_hom};
use crate::gen::{self, Family, GenSpec, ListMode};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::homsolver::{hom_solve, HomInstance, TargetGraph};
use crate::instance::ColoringInstance;
use crate::solver::{solve, Mode, SearchStats, SolverConfig, Verdict};

/// Largest search space the oracles accept by default: `3^20`.
pub const DEFAULT_CAP: u128 = 3_486_784_401;

/// Assignment spaces at least this large are split across threads.
const PARALLEL_SPACE: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of solutions.
    pub count: u128,
    /// Lexicographically first solution.
    pub witness: Option<Vec<Color>>,
}

impl OracleReport {
    pub fn is_sat(&self) -> bool {
        self.count > 0
    }
}

pub fn brute_color(inst: &ColoringInstance) -> Result<OracleReport> {
    brute_color_capped(inst, DEFAULT_CAP)
}

/// Refuses when the product of list sizes exceeds `cap`.
pub fn brute_color_capped(inst: &ColoringInstance, cap: u128) -> Result<OracleReport> {
    let space = inst
        .lists()
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    if space > cap {
        return Err(Error::OracleCapExceeded { space, cap });
    }
    Ok(enumerate(inst.graph(), inst.lists(), |a, b| a != b))
}

pub fn brute_hom(inst: &HomInstance) -> Result<OracleReport> {
    brute_hom_capped(inst, DEFAULT_CAP)
}

/// Refuses when `|V(H)|^{|V(G)|}` exceeds `cap`.
pub fn brute_hom_capped(inst: &HomInstance, cap: u128) -> Result<OracleReport> {
    let k = inst.target().vertex_count() as u128;
    let space = (0..inst.vertex_count()).fold(1u128, |acc, _| acc.saturating_mul(k));
    if space > cap {
        return Err(Error::OracleCapExceeded { space, cap });
    }
    let h = inst.target().graph();
    Ok(enumerate(inst.graph(), inst.lists(), |a, b| {
        h.has_edge(a as usize, b as usize)
    }))
}

fn enumerate<F>(g: &Graph, lists: &[ColorSet], edge_ok: F) -> OracleReport
where
    F: Fn(Color, Color) -> bool + Sync,
{
    let choices: Vec<Vec<Color>> = lists.iter().map(|l| l.iter().collect()).collect();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if choices.iter().any(Vec::is_empty) {
        return OracleReport {
            count: 0,
            witness: None,
        };
    }
    let space = choices.iter().fold(1u128, |a, c| a * c.len() as u128);
    // Fix a prefix of vertices per chunk; chunks are combined in order.
    let mut split = 0;
    let mut chunks = 1u128;
    if space >= PARALLEL_SPACE {
        while split < choices.len() && chunks < 256 {
            chunks *= choices[split].len() as u128;
            split += 1;
        }
    }
    let prefixes: Vec<Vec<usize>> = odometer(&choices[..split]).collect();
    let run = |prefix: &Vec<usize>| -> (u128, Option<Vec<Color>>) {
        let mut count = 0u128;
        let mut first = None;
        let mut colors: Vec<Color> = vec![0; choices.len()];
        for (v, &i) in prefix.iter().enumerate() {
            colors[v] = choices[v][i];
        }
        for suffix in odometer(&choices[split..]) {
            for (j, &i) in suffix.iter().enumerate() {
                colors[split + j] = choices[split + j][i];
            }
            if edges.iter().all(|&(u, v)| edge_ok(colors[u], colors[v])) {
                count += 1;
                if first.is_none() {
                    first = Some(colors.clone());
                }
            }
        }
        (count, first)
    };
    let parts: Vec<(u128, Option<Vec<Color>>)> = if prefixes.len() > 1 {
        prefixes.par_iter().map(run).collect()
    } else {
        prefixes.iter().map(run).collect()
    };
    let count = parts.iter().map(|p| p.0).sum();
    let witness = parts.into_iter().find_map(|p| p.1);
    OracleReport { count, witness }
}

/// Index tuples over `choices` in lexicographic order; one empty tuple for an
/// empty `choices`.
fn odometer(choices: &[Vec<Color>]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = Some(vec![0usize; choices.len()]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < choices[i].len() {
                break Some(succ);
            }
            succ[i] = 0;
        };
        Some(cur)
    })
}

/// What the differential sweep runs. Every family is optional: zero counts
/// or empty lists switch it off.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// All connected labeled graphs on `1..=exhaustive_max_n` vertices.
    pub exhaustive_max_n: usize,
    /// List assignments per exhaustive graph.
    pub lists_per_graph: usize,
    pub exhaustive_lists: ListMode,
    pub random_diam2: usize,
    pub random_diam3: usize,
    /// Random graphs cycle through `n = d+1 ..= random_max_n`.
    pub random_max_n: usize,
    pub random_lists: ListMode,
    pub modes: Vec<Mode>,
    /// Targets compared on every connected graph with at most `hom_max_n`
    /// vertices.
    pub hom_targets: Vec<TargetGraph>,
    pub hom_max_n: usize,
    pub hom_lists_per_graph: usize,
    pub seed: u64,
    /// Worker threads for running instances; the report does not depend on it.
    pub threads: usize,
    /// Base solver settings; `mode` and `rng_seed` are set per run.
    pub solver: SolverConfig,
}

impl SweepConfig {
    /// Nothing to run.
    pub fn empty() -> Self {
        SweepConfig {
            exhaustive_max_n: 0,
            lists_per_graph: 0,
            exhaustive_lists: ListMode::RandomNonempty,
            random_diam2: 0,
            random_diam3: 0,
            random_max_n: 12,
            random_lists: ListMode::RandomNonempty,
            modes: Mode::ALL.to_vec(),
            hom_targets: Vec::new(),
            hom_max_n: 0,
            hom_lists_per_graph: 0,
            seed: 0,
            threads: 1,
            solver: SolverConfig::default(),
        }
    }
}

impl Default for SweepConfig {
    /// A quick sweep touching every family.
    fn default() -> Self {
        SweepConfig {
            exhaustive_max_n: 4,
            lists_per_graph: 5,
            random_diam2: 50,
            random_diam3: 20,
            random_max_n: 10,
            hom_targets: ["C3", "C5", "PSTAR3"]
                .iter()
                .map(|t| TargetGraph::named(t).expect("named target"))
                .collect(),
            hom_max_n: 3,
            hom_lists_per_graph: 3,
            ..SweepConfig::empty()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub family: String,
    /// Mode name, prefixed by the target for homomorphism runs.
    pub solver: String,
    pub oracle_sat: bool,
    /// `SAT`, `UNSAT`, `TIMEOUT`, `INVALID` (bad certificate) or an error.
    pub solver_result: String,
    pub instance: String,
    /// A smallest instance found by greedy deletion that still disagrees.
    pub minimized: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub instances: usize,
    pub runs: usize,
    pub sat: usize,
    pub unsat: usize,
    pub invalid_certificates: usize,
    pub timeouts: usize,
    pub disagreements: Vec<Disagreement>,
    /// Counters summed over all runs, without wall time.
    pub totals: SearchStats,
}

impl SweepReport {
    fn absorb(&mut self, r: SweepReport) {
        self.instances += r.instances;
        self.runs += r.runs;
        self.sat += r.sat;
        self.unsat += r.unsat;
        self.invalid_certificates += r.invalid_certificates;
        self.timeouts += r.timeouts;
        self.disagreements.extend(r.disagreements);
        self.totals.merge(&r.totals);
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.invalid_certificates == 0 && self.timeouts == 0
    }

    /// Deterministic text rendering; contains no timings.
    pub fn to_text(&self) -> String {
        let t = &self.totals;
        let mut out = String::new();
        writeln!(
            out,
            "instances={} runs={} sat={} unsat={}",
            self.instances, self.runs, self.sat, self.unsat
        )
        .unwrap();
        writeln!(
            out,
            "disagreements={} invalid_certificates={} timeouts={}",
            self.disagreements.len(),
            self.invalid_certificates,
            self.timeouts
        )
        .unwrap();
        writeln!(
            out,
            "nodes={} b1={} b2={} b3={} b4={} b4_branches={} fallbacks={}",
            t.nodes_expanded, t.b1, t.b2, t.b3, t.b4, t.b4_branches, t.fallbacks
        )
        .unwrap();
        writeln!(
            out,
            "progress_checks={} progress_violations={}",
            t.progress_checks, t.progress_violations
        )
        .unwrap();
        for d in &self.disagreements {
            writeln!(
                out,
                "disagreement family={} solver={} oracle={} result={}",
                d.family,
                d.solver,
                if d.oracle_sat { "SAT" } else { "UNSAT" },
                d.solver_result
            )
            .unwrap();
            for (label, text) in [("instance", &d.instance), ("minimized", &d.minimized)] {
                writeln!(out, "  {label}:").unwrap();
                for l in text.lines() {
                    writeln!(out, "    {l}").unwrap();
                }
            }
        }
        out
    }
}

enum Item {
    Coloring {
        family: String,
        inst: ColoringInstance,
        seed: u64,
    },
    Hom {
        family: String,
        inst: HomInstance,
        seed: u64,
    },
}

fn mix(parts: &[u64]) -> u64 {
    let mut z = 0x243F_6A88_85A3_08D3u64;
    for &p in parts {
        z ^= p;
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

fn items(cfg: &SweepConfig) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    for n in 1..=cfg.exhaustive_max_n {
        let reps = match cfg.exhaustive_lists {
            ListMode::Full => cfg.lists_per_graph.min(1),
            _ => cfg.lists_per_graph,
        };
        for (gi, g) in gen::connected_graphs(n).into_iter().enumerate() {
            for j in 0..reps {
                let seed = mix(&[cfg.seed, 1, n as u64, gi as u64, j as u64]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let lists = gen::random_lists(n, cfg.exhaustive_lists, &mut rng);
                out.push(Item::Coloring {
                    family: format!("exhaustive n={n} graph={gi} lists={j}"),
                    inst: ColoringInstance::new(g.clone(), lists)?,
                    seed,
                });
            }
        }
    }
    for (family, d, count) in [
        (Family::RandomDiam2, 2usize, cfg.random_diam2),
        (Family::RandomDiam3, 3, cfg.random_diam3),
    ] {
        if count == 0 {
            continue;
        }
        if cfg.random_max_n <= d {
            return Err(Error::InvalidArgument(format!(
                "random_max_n must exceed {d} for {family}"
            )));
        }
        let sizes = cfg.random_max_n - d;
        for i in 0..count {
            let n = d + 1 + i % sizes;
            let seed = mix(&[cfg.seed, 2, d as u64, i as u64]);
            let spec = GenSpec::new(family, n, seed).lists(cfg.random_lists);
            out.push(Item::Coloring {
                family: format!("{family} n={n} index={i}"),
                inst: gen::generate(&spec)?,
                seed,
            });
        }
    }
    for n in 1..=cfg.hom_max_n {
        for (gi, g) in gen::connected_graphs(n).into_iter().enumerate() {
            for t in &cfg.hom_targets {
                for j in 0..cfg.hom_lists_per_graph {
                    let seed = mix(&[cfg.seed, 3, n as u64, gi as u64, j as u64]);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let lists = gen::random_target_lists(n, t.vertex_count(), &mut rng);
                    out.push(Item::Hom {
                        family: format!("hom {} n={n} graph={gi} lists={j}", t.name()),
                        inst: HomInstance::new(g.clone(), lists, t.clone())?,
                        seed,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Runs every applicable mode on every instance and compares with the
/// oracle. Instances are independent, so they run in parallel and are
/// reported in generation order.
pub fn differential_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let items = items(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let parts: Vec<Result<SweepReport>> =
        pool.install(|| items.par_iter().map(|it| check_item(it, cfg)).collect());
    let mut report = SweepReport::default();
    for part in parts {
        report.absorb(part?);
    }
    Ok(report)
}

/// Outcome of one solver run relative to the oracle.
fn judge<T>(
    oracle_sat: bool,
    run: Result<crate::solver::SearchOutcome<T>>,
    valid: impl Fn(&T) -> bool,
    report: &mut SweepReport,
) -> Option<String> {
    report.runs += 1;
    let out = match run {
        Ok(out) => out,
        Err(e) => return Some(format!("error: {e}")),
    };
    report.totals.merge(&out.stats.without_time());
    match out.verdict {
        Verdict::Sat(c) if !valid(&c) => {
            report.invalid_certificates += 1;
            Some("INVALID".into())
        }
        Verdict::Sat(_) if oracle_sat => None,
        Verdict::Sat(_) => Some("SAT".into()),
        Verdict::Unsat if !oracle_sat => None,
        Verdict::Unsat => Some("UNSAT".into()),
        Verdict::Timeout => {
            report.timeouts += 1;
            Some("TIMEOUT".into())
        }
    }
}

fn mode_cfg(cfg: &SweepConfig, mode: Mode, seed: u64) -> SolverConfig {
    SolverConfig {
        mode,
        rng_seed: seed,
        ..cfg.solver.clone()
    }
}

fn check_item(item: &Item, cfg: &SweepConfig) -> Result<SweepReport> {
    let mut report = SweepReport {
        instances: 1,
        ..SweepReport::default()
    };
    match item {
        Item::Coloring { family, inst, seed } => {
            let oracle = brute_color(inst)?.is_sat();
            if oracle {
                report.sat += 1;
            } else {
                report.unsat += 1;
            }
            let d = inst.graph().diameter();
            for &mode in cfg.modes.iter().filter(|m| m.applies_to(d)) {
                let scfg = mode_cfg(cfg, mode, *seed);
                let run = solve(inst, &scfg);
                let verdict = judge(oracle, run, |c| inst.verify(c.colors()), &mut report);
                if let Some(result) = verdict {
                    let minimized = minimize(inst.graph(), inst.lists(), |g, l| {
                        let Ok(small) = ColoringInstance::new(g.clone(), l.to_vec()) else {
                            return false;
                        };
                        mode.applies_to(g.diameter()) && coloring_disagrees(&small, &scfg)
                    });
                    let minimized = ColoringInstance::new(minimized.0, minimized.1)?;
                    report.disagreements.push(Disagreement {
                        family: family.clone(),
                        solver: mode.name().to_string(),
                        oracle_sat: oracle,
                        solver_result: result,
                        instance: serialize_coloring(inst),
                        minimized: serialize_coloring(&minimized),
                    });
                }
            }
        }
        Item::Hom { family, inst, seed } => {
            let oracle = brute_hom(inst)?.is_sat();
            if oracle {
                report.sat += 1;
            } else {
                report.unsat += 1;
            }
            if !inst.target().p1 {
                return Ok(report);
            }
            for &mode in &cfg.modes {
                let scfg = mode_cfg(cfg, mode, *seed);
                let run = hom_solve(inst, &scfg);
                let verdict = judge(oracle, run, |m| inst.verify(m.colors()), &mut report);
                if let Some(result) = verdict {
                    let target = inst.target().clone();
                    let minimized = minimize(inst.graph(), inst.lists(), |g, l| {
                        let Ok(small) = HomInstance::new(g.clone(), l.to_vec(), target.clone())
                        else {
                            return false;
                        };
                        matches!(g.diameter(), Some(d) if d <= 3) && hom_disagrees(&small, &scfg)
                    });
                    let minimized = HomInstance::new(minimized.0, minimized.1, target)?;
                    report.disagreements.push(Disagreement {
                        family: family.clone(),
                        solver: format!("{}/{}", inst.target().name(), mode.name()),
                        oracle_sat: oracle,
                        solver_result: result,
                        instance: serialize_hom(inst),
                        minimized: serialize_hom(&minimized),
                    });
                }
            }
        }
    }
    Ok(report)
}

fn coloring_disagrees(inst: &ColoringInstance, cfg: &SolverConfig) -> bool {
    let Ok(oracle) = brute_color(inst) else {
        return false;
    };
    judge(
        oracle.is_sat(),
        solve(inst, cfg),
        |c| inst.verify(c.colors()),
        &mut SweepReport::default(),
    )
    .is_some()
}

fn hom_disagrees(inst: &HomInstance, cfg: &SolverConfig) -> bool {
    let Ok(oracle) = brute_hom(inst) else {
        return false;
    };
    judge(
        oracle.is_sat(),
        hom_solve(inst, cfg),
        |m| inst.verify(m.colors()),
        &mut SweepReport::default(),
    )
    .is_some()
}

/// Greedily deletes vertices, then edges, then list colors while `fails`
/// keeps holding.
fn minimize<F>(g: &Graph, lists: &[ColorSet], fails: F) -> (Graph, Vec<ColorSet>)
where
    F: Fn(&Graph, &[ColorSet]) -> bool,
{
    let mut g = g.clone();
    let mut lists = lists.to_vec();
    'outer: loop {
        let n = g.vertex_count();
        for v in 0..n {
            let keep = VertexSet::from_iter_in(n, (0..n).filter(|&u| u != v));
            let (sub, map) = g.induced(&keep);
            let sub_lists: Vec<ColorSet> = map.to_parent.iter().map(|&u| lists[u]).collect();
            if fails(&sub, &sub_lists) {
                g = sub;
                lists = sub_lists;
                continue 'outer;
            }
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        for skip in 0..edges.len() {
            let mut b = GraphBuilder::new(n);
            for (i, &(u, v)) in edges.iter().enumerate() {
                if i != skip {
                    b.add_edge(u, v).expect("valid edge");
                }
            }
            let sub = b.build();
            if fails(&sub, &lists) {
                g = sub;
                continue 'outer;
            }
        }
        for v in 0..n {
            if lists[v].len() < 2 {
                continue;
            }
            for c in lists[v].iter() {
                let mut smaller = lists.clone();
                smaller[v] = lists[v].without(c);
                if fails(&g, &smaller) {
                    lists = smaller;
                    continue 'outer;
                }
            }
        }
        return (g, lists);
    }
}
