//! Exact List 3-Coloring for graphs of diameter 2 and 3, with a list
//! homomorphism generalization to cycles and looped paths.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: immutable graphs over dense bitsets, BFS, balls, contraction.
//! * [`instance`]: list assignments, singleton propagation, layer structure.
//! * [`twosat`]: 2-SAT and the encoding of lists of size at most two.
//! * [`solver`]: the branch-and-reduce solvers.
//! * [`homsolver`]: list homomorphism into small targets.
//! * [`oracle`]: brute-force ground truth and differential sweeps.
//! * [`gen`]: seeded instance generators.
//! * [`format`]: the text instance format.
//!
//! ```
//! use tricolor::{solve, ColoringInstance, Graph, Mode, SolverConfig};
//!
//! let inst = ColoringInstance::full(Graph::petersen());
//! let out = solve(&inst, &SolverConfig::with_mode(Mode::Paper)).unwrap();
//! assert!(inst.verify(out.verdict.certificate().unwrap().colors()));
//! ```

pub mod color;
pub mod error;
pub mod format;
pub mod gen;
pub mod graph;
pub mod homsolver;
pub mod instance;
pub mod oracle;
pub mod solver;
pub mod twosat;

pub use color::{Color, ColorSet, Palette};
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, InducedMap, VertexSet};
pub use homsolver::{HomInstance, Mapping, TargetGraph};
pub use instance::{Coloring, ColoringInstance, Finish, LayerStructure, Reduction};
pub use solver::{
    solve, solve_diam3, solve_ms_baseline, Mode, SearchOutcome, SearchStats, SolverConfig, Verdict,
};
