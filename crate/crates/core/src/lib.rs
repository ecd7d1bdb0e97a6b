//! Exact model counting for propositional CNF with pluggable branching
//! heuristics.
//!
//! The counting engines share one backtracking core: unit propagation over a
//! reversible trail, component decomposition, and an optional component cache.
//! Branching is delegated to a [`counting::BranchingHeuristic`], which can be
//! a classic occurrence heuristic, a uniform random literal, or a message
//! passing network over the literal-clause incidence graph
//! ([`policy::GnnPolicy`]) whose parameters are trained with evolution
//! strategies ([`training`]). The [`generators`] module produces the benchmark
//! families (cellular automaton preimages, grid-world trajectories, Sudoku
//! completions, bit-vector arithmetic sentences) together with independent
//! counting oracles.

pub mod counting;
pub mod formula;
pub mod generators;
pub mod policy;
pub mod training;

pub use formula::{CnfFormula, Clause, Literal, Trail, Var};
