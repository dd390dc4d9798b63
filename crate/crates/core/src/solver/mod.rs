//! Branch-and-reduce solvers for List 3-Coloring on graphs of small diameter.
//!
//! Five modes share one search engine:
//!
//! * [`Mode::Complete`]: plain branching on the lowest-id vertex with a full
//!   list. Always correct; the reference the others are measured against.
//! * [`Mode::Paper`]: rules B1 to B4 for diameter-2 graphs. B4 enumerates
//!   witness tuples up to the size bound derived from `k_const`; a finished
//!   enumeration settles the node, a budget cut falls back to complete
//!   branching. Correct whenever `k_const` is large enough for the instance.
//! * [`Mode::Randomized`]: B1 to B3 as above, B4 samples a witness; every B4
//!   node then falls back to complete branching, so it is always correct.
//! * [`Mode::BaselineMs`]: color a small dominating set, then 2-SAT.
//! * [`Mode::Diam3`]: high-degree branching and dominating balls, for
//!   diameter at most 3.

mod engine;
pub mod rules;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::color::{ColorSet, Palette};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Coloring, ColoringInstance};

pub(crate) use engine::{Engine, Interrupt, Node, Strategy, STACK_BYTES};
pub use rules::{
    check_witness, domination_target, rule_b1_candidate, rule_b2_candidate, rule_b3_candidate,
    sample_prob_s, sample_prob_s_tilde, sample_witness, select_rule, witness_size_bound,
    RuleChoice, WitnessEnumerator, WitnessTuple,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Complete,
    Paper,
    Randomized,
    BaselineMs,
    Diam3,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Complete,
        Mode::Paper,
        Mode::Randomized,
        Mode::BaselineMs,
        Mode::Diam3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Complete => "complete",
            Mode::Paper => "paper",
            Mode::Randomized => "randomized",
            Mode::BaselineMs => "baseline-ms",
            Mode::Diam3 => "diam3",
        }
    }

    /// Largest input diameter the mode accepts.
    pub fn max_diameter(self) -> Option<usize> {
        match self {
            Mode::Complete => None,
            Mode::Paper | Mode::Randomized | Mode::BaselineMs => Some(2),
            Mode::Diam3 => Some(3),
        }
    }

    /// Whether the mode accepts a graph of the given diameter
    /// (`None` = disconnected).
    pub fn applies_to(self, diameter: Option<usize>) -> bool {
        match (self.max_diameter(), diameter) {
            (None, _) => true,
            (Some(m), Some(d)) => d <= m,
            (Some(_), None) => false,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Multiplier in the witness size bound `K μ^{1/3} ln μ`.
    pub k_const: f64,
    /// Maximum `(S, S̃)` pairs checked per B4 node before falling back.
    pub witness_budget: usize,
    pub rng_seed: u64,
    /// Sampling attempts per B4 node in randomized mode.
    pub max_retries: usize,
    /// Maximum colorings of `S̃` branched on for one sampled witness.
    pub phi_cap: usize,
    pub time_limit: Option<Duration>,
    /// Workers for the root's children; results never depend on it.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Complete,
            k_const: 1.0,
            witness_budget: 100_000,
            rng_seed: 0,
            max_retries: 32,
            phi_cap: 64,
            time_limit: None,
            threads: 1,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mode: Mode) -> Self {
        SolverConfig {
            mode,
            ..SolverConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.k_const > 0.0 && self.k_const.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "k_const must be positive, got {}",
                self.k_const
            )));
        }
        Ok(())
    }
}

/// Search counters. All are additive across subtrees except `max_depth`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    /// Colors removed by singleton propagation.
    pub r1: usize,
    /// Nodes discarded because a list emptied.
    pub r2: usize,
    /// Nodes finished through 2-SAT.
    pub r3: usize,
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
    /// Nodes where B4 was attempted.
    pub b4: usize,
    /// Children produced by accepted B4 tuples.
    pub b4_branches: usize,
    pub witness_tuples_checked: usize,
    pub witnesses_sampled: usize,
    pub contractions: usize,
    pub contractions_skipped: usize,
    pub complete_branches: usize,
    pub fallbacks: usize,
    pub degree_branches: usize,
    pub ball_branches: usize,
    pub dominating_sets: usize,
    pub progress_checks: usize,
    pub progress_violations: usize,
    pub max_depth: usize,
    pub wall_time: Duration,
}

impl SearchStats {
    pub fn merge(&mut self, o: &SearchStats) {
        self.nodes_expanded += o.nodes_expanded;
        self.r1 += o.r1;
        self.r2 += o.r2;
        self.r3 += o.r3;
        self.b1 += o.b1;
        self.b2 += o.b2;
        self.b3 += o.b3;
        self.b4 += o.b4;
        self.b4_branches += o.b4_branches;
        self.witness_tuples_checked += o.witness_tuples_checked;
        self.witnesses_sampled += o.witnesses_sampled;
        self.contractions += o.contractions;
        self.contractions_skipped += o.contractions_skipped;
        self.complete_branches += o.complete_branches;
        self.fallbacks += o.fallbacks;
        self.degree_branches += o.degree_branches;
        self.ball_branches += o.ball_branches;
        self.dominating_sets += o.dominating_sets;
        self.progress_checks += o.progress_checks;
        self.progress_violations += o.progress_violations;
        self.max_depth = self.max_depth.max(o.max_depth);
        self.wall_time += o.wall_time;
    }

    /// `key=value` pairs in a fixed order, wall time last.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v: Vec<(&'static str, String)> = [
            ("nodes", self.nodes_expanded),
            ("r1", self.r1),
            ("r2", self.r2),
            ("r3", self.r3),
            ("b1", self.b1),
            ("b2", self.b2),
            ("b3", self.b3),
            ("b4", self.b4),
            ("b4_branches", self.b4_branches),
            ("witness_tuples_checked", self.witness_tuples_checked),
            ("witnesses_sampled", self.witnesses_sampled),
            ("contractions", self.contractions),
            ("contractions_skipped", self.contractions_skipped),
            ("complete_branches", self.complete_branches),
            ("fallbacks", self.fallbacks),
            ("degree_branches", self.degree_branches),
            ("ball_branches", self.ball_branches),
            ("dominating_sets", self.dominating_sets),
            ("progress_checks", self.progress_checks),
            ("progress_violations", self.progress_violations),
            ("max_depth", self.max_depth),
        ]
        .into_iter()
        .map(|(k, x)| (k, x.to_string()))
        .collect();
        v.push(("ms", format!("{:.3}", self.wall_time.as_secs_f64() * 1e3)));
        v
    }

    /// Everything except wall time, for determinism comparisons.
    pub fn without_time(&self) -> SearchStats {
        SearchStats {
            wall_time: Duration::ZERO,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<T> {
    Sat(T),
    Unsat,
    Timeout,
}

impl<T> Verdict<T> {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Timeout => "TIMEOUT",
        }
    }

    pub fn certificate(&self) -> Option<&T> {
        match self {
            Verdict::Sat(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub verdict: Verdict<T>,
    pub stats: SearchStats,
}

const INLINE_VERTICES: usize = 48;

/// Runs the engine on its own large stack and converts the result.
pub(crate) fn run_engine(
    graph: Arc<Graph>,
    lists: Vec<ColorSet>,
    palette: &Palette,
    strategy: Strategy,
    cfg: &SolverConfig,
) -> SearchOutcome<Vec<u8>> {
    let start = Instant::now();
    let root_vertex_count = graph.vertex_count();
    let engine = Engine {
        palette,
        strategy,
        cfg,
        deadline: cfg.time_limit.map(|t| start + t),
    };
    let root = Node::root(graph, lists, cfg.rng_seed);
    // Search depth is at most a small multiple of the vertex count.
    let inline = root_vertex_count <= INLINE_VERTICES && cfg.threads <= 1;
    let (result, mut stats) = if inline {
        engine.run(root)
    } else {
        std::thread::scope(|scope| {
            std::thread::Builder::new()
                .stack_size(STACK_BYTES)
                .spawn_scoped(scope, || engine.run(root))
                .expect("spawn solver thread")
                .join()
                .expect("solver thread panicked")
        })
    };
    stats.wall_time = start.elapsed();
    let verdict = match result {
        Ok(Some(c)) => Verdict::Sat(c),
        Ok(None) => Verdict::Unsat,
        Err(Interrupt::Timeout) => Verdict::Timeout,
        Err(Interrupt::Cancelled) => unreachable!("root is never cancelled"),
    };
    SearchOutcome { verdict, stats }
}

fn check_diameter(inst: &ColoringInstance, mode: Mode) -> Result<Option<usize>> {
    let d = inst.graph().diameter();
    if !mode.applies_to(d) {
        return Err(Error::InvalidArgument(format!(
            "{mode} mode needs a connected graph of diameter at most {}, got {}",
            mode.max_diameter().unwrap(),
            d.map_or("infinity".to_string(), |d| d.to_string())
        )));
    }
    Ok(d)
}

/// Decides `inst` with the configured mode.
pub fn solve(inst: &ColoringInstance, cfg: &SolverConfig) -> Result<SearchOutcome<Coloring>> {
    cfg.validate()?;
    let d = check_diameter(inst, cfg.mode)?;
    let strategy = match cfg.mode {
        Mode::Complete => Strategy::Complete,
        Mode::Paper => Strategy::Witness {
            sample: false,
            trust_exhaustion: true,
        },
        Mode::Randomized => Strategy::Witness {
            sample: true,
            trust_exhaustion: false,
        },
        Mode::BaselineMs => Strategy::Baseline,
        Mode::Diam3 => Strategy::DegreeBall {
            diameter: d.unwrap_or(0),
        },
    };
    let out = run_engine(
        inst.shared_graph().clone(),
        inst.lists().to_vec(),
        &Palette::three(),
        strategy,
        cfg,
    );
    let verdict = match out.verdict {
        Verdict::Sat(c) => {
            assert!(inst.verify(&c), "solver produced an invalid certificate");
            Verdict::Sat(Coloring(c))
        }
        Verdict::Unsat => Verdict::Unsat,
        Verdict::Timeout => Verdict::Timeout,
    };
    Ok(SearchOutcome {
        verdict,
        stats: out.stats,
    })
}

/// Degree branching plus dominating-ball enumeration (diameter ≤ 3).
pub fn solve_diam3(inst: &ColoringInstance, cfg: &SolverConfig) -> Result<SearchOutcome<Coloring>> {
    solve(
        inst,
        &SolverConfig {
            mode: Mode::Diam3,
            ..cfg.clone()
        },
    )
}

/// Dominating-set enumeration followed by 2-SAT (diameter ≤ 2).
pub fn solve_ms_baseline(
    inst: &ColoringInstance,
    cfg: &SolverConfig,
) -> Result<SearchOutcome<Coloring>> {
    solve(
        inst,
        &SolverConfig {
            mode: Mode::BaselineMs,
            ..cfg.clone()
        },
    )
}
