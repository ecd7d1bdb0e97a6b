//! Exact model counting engines.
//!
//! Three engines share one backtracking core and differ in how much structure
//! they exploit:
//!
//! * [`count_cdp`]: plain counting DPLL (no components, no cache),
//! * [`count_relsat`]: adds component decomposition (counts multiply),
//! * [`count_sharp`]: adds a component cache on top.
//!
//! Clause learning is deliberately absent. Branching is delegated to a
//! [`BranchingHeuristic`].

mod cache;
mod component;
mod engine;
mod heuristics;

pub use cache::{CacheStats, ComponentCache};
pub use component::{component_key, find_components, CacheKey, Component};
pub use engine::{count_cdp, count_relsat, count_sharp, CountResult, SolveLimits};
pub use heuristics::{
    pick_occurrence_max, pick_random, BranchingHeuristic, OccurrenceHeuristic, RandomHeuristic,
};
