//! `tricolor`: solve, check, generate and benchmark List 3-Coloring and list
//! homomorphism instances.
//!
//! Exit codes: 0 satisfiable, 20 unsatisfiable, 124 timeout, 1 error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use tricolor::format::{self, Instance};
use tricolor::gen::{self, Family, GenSpec, ListMode};
use tricolor::homsolver::hom_solve;
use tricolor::oracle::{self, SweepConfig};
use tricolor::{
    solve, twosat, Color, ColorSet, ColoringInstance, HomInstance, Mode, Reduction, SearchStats,
    SolverConfig, TargetGraph, Verdict,
};

const EXIT_SAT: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_UNSAT: u8 = 20;
const EXIT_TIMEOUT: u8 = 124;

/// Bench CSV header.
const CSV_HEADER: &str = "family,n,seed,mode,verdict,nodes,b1,b2,b3,b4,ms";

#[derive(Parser)]
#[command(
    name = "tricolor",
    version,
    about = "Exact List 3-Coloring for graphs of small diameter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a List 3-Coloring instance.
    Solve {
        /// Instance file; standard input when absent or `-`.
        file: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the 2-SAT encoding of the propagated instance in DIMACS CNF.
        #[arg(long, value_name = "OUT")]
        dimacs_cnf: Option<PathBuf>,
    },
    /// Decide a list homomorphism instance.
    Hom {
        file: Option<PathBuf>,
        /// Target such as `C5` or `PSTAR3`; overrides a target section.
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Decide an instance by exhaustive enumeration and count solutions.
    Oracle {
        file: Option<PathBuf>,
        /// Largest assignment space to enumerate.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: u128,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability; defaults depend on the family.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value = "full", value_parser = parse_list_mode)]
        lists: ListMode,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time a solver over generated instances and emit CSV rows.
    Bench {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Repetitions per size; repetition `i` generates with `--seed` + `i`.
        #[arg(long, default_value_t = 3)]
        reps: u64,
        #[arg(long, default_value = "full", value_parser = parse_list_mode)]
        lists: ListMode,
        /// CSV output file; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Compare every solver mode with the oracle on generated families.
    Sweep {
        /// Exhaustive graphs up to this many vertices.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Random list assignments per exhaustive graph.
        #[arg(long, default_value_t = 5)]
        lists: usize,
        #[arg(long, default_value_t = 50)]
        diam2: usize,
        #[arg(long, default_value_t = 20)]
        diam3: usize,
        #[arg(long, default_value_t = 10)]
        random_max_n: usize,
        /// Comma-separated homomorphism targets.
        #[arg(long, value_delimiter = ',', default_value = "C3,C5,PSTAR3")]
        hom_targets: Vec<String>,
        #[arg(long, default_value_t = 3)]
        hom_max_n: usize,
        #[arg(long, default_value_t = 3)]
        hom_lists: usize,
        #[arg(long, default_value = "random-nonempty", value_parser = parse_list_mode)]
        exhaustive_lists: ListMode,
        #[arg(long, default_value = "random-nonempty", value_parser = parse_list_mode)]
        random_lists: ListMode,
        /// Constant in the witness size bound.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value = "complete", value_parser = parse_mode)]
    mode: Mode,
    /// Constant in the witness size bound.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Witness pairs checked per node before falling back.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    /// Sampling attempts per node in randomized mode.
    #[arg(long, default_value_t = 32)]
    retries: usize,
    /// Seconds before giving up.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Print search counters as `key=value` lines.
    #[arg(long)]
    stats: bool,
    /// Write the certificate (`v` line) to this file.
    #[arg(long, value_name = "OUT")]
    cert: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig, String> {
        let time_limit = match self.time_limit {
            Some(t) if !(t >= 0.0 && t.is_finite()) => {
                return Err(format!("invalid time limit {t}"));
            }
            t => t.map(Duration::from_secs_f64),
        };
        Ok(SolverConfig {
            mode: self.mode,
            k_const: self.k,
            witness_budget: self.budget,
            rng_seed: self.seed,
            max_retries: self.retries,
            time_limit,
            threads: self.threads.max(1),
            ..SolverConfig::default()
        })
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: tricolor::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: tricolor::Error| e.to_string())
}

fn parse_list_mode(s: &str) -> Result<ListMode, String> {
    s.parse().map_err(|e: tricolor::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_SAT };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read_input(file: Option<&Path>) -> Result<String, String> {
    match file {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn parse_file(file: Option<&Path>) -> Result<Instance, String> {
    let text = read_input(file)?;
    let parsed = format::parse(&text).map_err(|e| e.to_string())?;
    for w in &parsed.warnings {
        eprintln!("warning: line {}: {}", w.line, w.message);
    }
    Ok(parsed.instance)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write standard output: {e}")),
    }
}

fn value_line(colors: &[Color], offset: Color) -> String {
    let mut s = String::from("v");
    for &c in colors {
        s.push(' ');
        s.push_str(&(c + offset).to_string());
    }
    s
}

fn stats_text(stats: &SearchStats) -> String {
    stats
        .pairs()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect()
}

/// Prints the verdict block and returns the exit code.
fn report<T>(
    verdict: &Verdict<T>,
    stats: &SearchStats,
    args: &SolverArgs,
    colors: impl Fn(&T) -> String,
) -> Result<u8, String> {
    let mut out = format!("s {}\n", verdict.name());
    if let Verdict::Sat(c) = verdict {
        let line = colors(c);
        out.push_str(&line);
        out.push('\n');
        if let Some(path) = &args.cert {
            write_output(Some(path), &format!("{line}\n"))?;
        }
    }
    if args.stats {
        out.push_str(&stats_text(stats));
    }
    write_output(None, &out)?;
    Ok(match verdict {
        Verdict::Sat(_) => EXIT_SAT,
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Timeout => EXIT_TIMEOUT,
    })
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Solve {
            file,
            solver,
            dimacs_cnf,
        } => {
            let inst = match parse_file(file.as_deref())? {
                Instance::Coloring(c) => c,
                Instance::Hom(_) => {
                    return Err("file has a target section; use `tricolor hom`".into())
                }
            };
            if let Some(path) = dimacs_cnf {
                export_cnf(&inst, &path)?;
            }
            let cfg = solver.config()?;
            let out = solve(&inst, &cfg).map_err(|e| e.to_string())?;
            report(&out.verdict, &out.stats, &solver, |c| {
                value_line(c.colors(), 0)
            })
        }
        Command::Hom {
            file,
            target,
            solver,
        } => {
            let inst = hom_instance(parse_file(file.as_deref())?, target.as_deref())?;
            let cfg = solver.config()?;
            let out = hom_solve(&inst, &cfg).map_err(|e| e.to_string())?;
            report(&out.verdict, &out.stats, &solver, |m| {
                value_line(m.colors(), 1)
            })
        }
        Command::Oracle { file, cap } => {
            let (r, offset) = match parse_file(file.as_deref())? {
                Instance::Coloring(c) => (oracle::brute_color_capped(&c, cap), 0),
                Instance::Hom(h) => (oracle::brute_hom_capped(&h, cap), 1),
            };
            let r = r.map_err(|e| e.to_string())?;
            let mut out = format!("s {}\n", if r.is_sat() { "SAT" } else { "UNSAT" });
            if let Some(w) = &r.witness {
                out.push_str(&value_line(w, offset));
                out.push('\n');
            }
            out.push_str(&format!("count={}\n", r.count));
            write_output(None, &out)?;
            Ok(if r.is_sat() { EXIT_SAT } else { EXIT_UNSAT })
        }
        Command::Gen {
            family,
            n,
            seed,
            p,
            lists,
            output,
        } => {
            let spec = GenSpec {
                family,
                n,
                edge_prob: p,
                rng_seed: seed,
                list_mode: lists,
            };
            let inst = gen::generate(&spec).map_err(|e| e.to_string())?;
            write_output(output.as_deref(), &format::serialize_coloring(&inst))?;
            Ok(EXIT_SAT)
        }
        Command::Bench {
            family,
            n_list,
            reps,
            lists,
            csv,
            solver,
        } => bench(family, &n_list, reps, lists, csv.as_deref(), &solver),
        Command::Sweep {
            max_n,
            lists,
            diam2,
            diam3,
            random_max_n,
            hom_targets,
            hom_max_n,
            hom_lists,
            exhaustive_lists,
            random_lists,
            k,
            seed,
            threads,
        } => {
            let hom_targets = hom_targets
                .iter()
                .filter(|t| !t.is_empty())
                .map(|t| TargetGraph::named(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let cfg = SweepConfig {
                exhaustive_max_n: max_n,
                lists_per_graph: lists,
                random_diam2: diam2,
                random_diam3: diam3,
                random_max_n,
                hom_targets,
                hom_max_n,
                hom_lists_per_graph: hom_lists,
                exhaustive_lists,
                random_lists,
                seed,
                threads,
                solver: SolverConfig {
                    k_const: k,
                    ..SolverConfig::default()
                },
                ..SweepConfig::empty()
            };
            let r = oracle::differential_sweep(&cfg).map_err(|e| e.to_string())?;
            write_output(None, &r.to_text())?;
            Ok(if r.is_clean() { EXIT_SAT } else { EXIT_ERROR })
        }
    }
}

/// Builds the homomorphism instance from a parsed file and an optional named
/// target. Colors `1..=3` of a coloring file are read as target vertices.
fn hom_instance(parsed: Instance, target: Option<&str>) -> Result<HomInstance, String> {
    let named = target
        .map(TargetGraph::named)
        .transpose()
        .map_err(|e| e.to_string())?;
    let (graph, lists, file_target) = match parsed {
        Instance::Hom(h) => (
            h.graph().clone(),
            h.lists().to_vec(),
            Some(h.target().clone()),
        ),
        Instance::Coloring(c) => {
            let lists = c
                .lists()
                .iter()
                .map(|&l| (l != ColorSet::THREE).then(|| ColorSet::from_bits(l.bits() >> 1)))
                .collect::<Vec<_>>();
            let graph = c.graph().clone();
            let t = named.clone().ok_or("a coloring file needs `--target`")?;
            let lists = lists.into_iter().map(|l| l.unwrap_or(t.colors())).collect();
            (graph, lists, None)
        }
    };
    let t = named.or(file_target).ok_or("no target given")?;
    HomInstance::new(graph, lists, t).map_err(|e| e.to_string())
}

fn export_cnf(inst: &ColoringInstance, path: &Path) -> Result<(), String> {
    match inst.reduce() {
        Reduction::Failure => eprintln!("warning: propagation fails; no CNF written"),
        Reduction::Reduced(r) if r.lists().iter().all(|l| l.len() <= 2) => {
            let enc = twosat::edwards_encode(&r).map_err(|e| e.to_string())?;
            write_output(Some(path), &enc.cnf.to_dimacs())?;
        }
        Reduction::Reduced(_) => {
            eprintln!("warning: lists with three colors remain after propagation; no CNF written")
        }
    }
    Ok(())
}

fn bench(
    family: Family,
    n_list: &[usize],
    reps: u64,
    lists: ListMode,
    csv: Option<&Path>,
    args: &SolverArgs,
) -> Result<u8, String> {
    let cfg = args.config()?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for &n in n_list {
        for rep in 0..reps {
            let s = args.seed + rep;
            let spec = GenSpec::new(family, n, s).lists(lists);
            let inst = gen::generate(&spec).map_err(|e| e.to_string())?;
            let o = solve(&inst, &cfg).map_err(|e| e.to_string())?;
            let st = &o.stats;
            out.push_str(&format!(
                "{family},{n},{s},{},{},{},{},{},{},{},{:.3}\n",
                cfg.mode,
                o.verdict.name(),
                st.nodes_expanded,
                st.b1,
                st.b2,
                st.b3,
                st.b4,
                st.wall_time.as_secs_f64() * 1e3
            ));
        }
    }
    write_output(csv, &out)?;
    Ok(EXIT_SAT)
}
