//! The three counting engines.
//!
//! All of them propagate the formula's unit clauses once up front, then
//! branch. A branch assigns a literal, propagates, and counts both sides;
//! free variables (unset and no longer occurring in any active clause of the
//! current scope) contribute a factor of two each. The component engines
//! recurse per connected component and multiply; the caching engine
//! additionally memoizes component counts under the canonical component key.

use super::cache::{CacheStats, ComponentCache};
use super::component::{component_key, find_components, Component};
use super::heuristics::BranchingHeuristic;
use crate::formula::{CnfFormula, Literal, Trail, Var};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Resource limits for one solve. The decision cap aborts the run once the
/// heuristic would be invoked past it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    pub decision_cap: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            decision_cap: u64::MAX,
        }
    }
}

impl SolveLimits {
    pub fn capped(decision_cap: u64) -> SolveLimits {
        SolveLimits { decision_cap }
    }
}

/// Count plus instrumentation for one solve.
///
/// When `aborted` is false, `count` is the exact model count over all
/// `num_vars` variables. When the decision cap fired, `count` is meaningless
/// (zero) and the instrumentation reflects the work done up to the abort;
/// `decisions` never exceeds the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub count: BigUint,
    pub decisions: u64,
    pub conflicts: u64,
    pub cache_lookups: u64,
    pub cache_hits: u64,
    pub components_found: u64,
    pub stored_size_sum: u64,
    pub hit_size_sum: u64,
    /// Zero-based decision step at which each variable was first branched on.
    pub per_var_first_decision: BTreeMap<Var, u64>,
    pub aborted: bool,
}

impl CountResult {
    pub fn solved(&self) -> bool {
        !self.aborted
    }

    /// One-line JSON record with a fixed key order; the count is a decimal
    /// string so arbitrary precision survives.
    pub fn record_json(&self, wall_seconds: f64) -> String {
        format!(
            "{{\"count\":\"{}\",\"decisions\":{},\"conflicts\":{},\"cache_lookups\":{},\"cache_hits\":{},\"components_found\":{},\"stored_size_sum\":{},\"hit_size_sum\":{},\"aborted\":{},\"wall_seconds\":{:.6}}}",
            self.count.to_str_radix(10),
            self.decisions,
            self.conflicts,
            self.cache_lookups,
            self.cache_hits,
            self.components_found,
            self.stored_size_sum,
            self.hit_size_sum,
            self.aborted,
            wall_seconds,
        )
    }
}

/// Counting DPLL: no components, no cache.
pub fn count_cdp(
    formula: &CnfFormula,
    heuristic: &mut dyn BranchingHeuristic,
    limits: &SolveLimits,
) -> CountResult {
    Engine::new(formula, heuristic, None, limits).run(Mode::Plain)
}

/// Component decomposition without caching.
pub fn count_relsat(
    formula: &CnfFormula,
    heuristic: &mut dyn BranchingHeuristic,
    limits: &SolveLimits,
) -> CountResult {
    Engine::new(formula, heuristic, None, limits).run(Mode::Components)
}

/// Component decomposition with a component cache. The cache may be shared
/// across sequential solves of the same formula.
pub fn count_sharp(
    formula: &CnfFormula,
    heuristic: &mut dyn BranchingHeuristic,
    cache: &mut ComponentCache,
    limits: &SolveLimits,
) -> CountResult {
    Engine::new(formula, heuristic, Some(cache), limits).run(Mode::Components)
}

#[derive(PartialEq, Clone, Copy)]
enum Mode {
    Plain,
    Components,
}

/// Raised (as an error value) when the decision cap is hit.
struct Aborted;

struct Engine<'a, 'f> {
    trail: Trail<'f>,
    heuristic: &'a mut dyn BranchingHeuristic,
    cache: Option<&'a mut ComponentCache>,
    limits: &'a SolveLimits,
    decisions: u64,
    conflicts: u64,
    components_found: u64,
    first_decision: BTreeMap<Var, u64>,
}

impl<'a, 'f> Engine<'a, 'f> {
    fn new(
        formula: &'f CnfFormula,
        heuristic: &'a mut dyn BranchingHeuristic,
        cache: Option<&'a mut ComponentCache>,
        limits: &'a SolveLimits,
    ) -> Self {
        Engine {
            trail: Trail::new(formula),
            heuristic,
            cache,
            limits,
            decisions: 0,
            conflicts: 0,
            components_found: 0,
            first_decision: BTreeMap::new(),
        }
    }

    fn run(mut self, mode: Mode) -> CountResult {
        let cache_before: CacheStats = self
            .cache
            .as_ref()
            .map(|c| c.stats().clone())
            .unwrap_or_default();

        let init = self.trail.propagate_initial();
        let outcome = if init.conflict {
            self.conflicts += 1;
            Ok(BigUint::zero())
        } else {
            match mode {
                Mode::Plain => self.plain_node(),
                Mode::Components => self.component_root(),
            }
        };

        let cache_after: CacheStats = self
            .cache
            .as_ref()
            .map(|c| c.stats().clone())
            .unwrap_or_default();
        let aborted = outcome.is_err();
        CountResult {
            count: outcome.unwrap_or_default(),
            decisions: self.decisions,
            conflicts: self.conflicts,
            cache_lookups: cache_after.lookups - cache_before.lookups,
            cache_hits: cache_after.hits - cache_before.hits,
            components_found: self.components_found,
            stored_size_sum: cache_after.stored_size_sum - cache_before.stored_size_sum,
            hit_size_sum: cache_after.hit_size_sum - cache_before.hit_size_sum,
            per_var_first_decision: self.first_decision,
            aborted,
        }
    }

    /// Asks the heuristic for the next decision, enforcing the cap and
    /// recording first-decision steps.
    fn decide(&mut self, component: &Component) -> Result<Literal, Aborted> {
        if self.decisions >= self.limits.decision_cap {
            return Err(Aborted);
        }
        let lit = self.heuristic.pick(&self.trail, component, self.decisions);
        debug_assert!(
            component.vars.binary_search(&lit.var()).is_ok(),
            "heuristic picked a literal outside its component"
        );
        debug_assert!(self.trail.is_unset(lit.var()));
        self.first_decision.entry(lit.var()).or_insert(self.decisions);
        self.decisions += 1;
        Ok(lit)
    }

    /// Plain counting DPLL over the whole formula; free variables are picked
    /// up at the no-active-clause leaves.
    fn plain_node(&mut self) -> Result<BigUint, Aborted> {
        if self.trail.active_clause_count() == 0 {
            return Ok(BigUint::one() << self.trail.free_variable_count() as usize);
        }
        let scope = Component::root(&self.trail);
        let lit = self.decide(&scope)?;
        let mut total = BigUint::zero();
        for l in [lit, !lit] {
            let prop = self.trail.unit_propagate(l);
            if prop.conflict {
                self.conflicts += 1;
                self.trail.undo();
                continue;
            }
            match self.plain_node() {
                Ok(c) => {
                    total += c;
                    self.trail.undo();
                }
                Err(e) => {
                    self.trail.undo();
                    return Err(e);
                }
            }
        }
        Ok(total)
    }

    fn component_root(&mut self) -> Result<BigUint, Aborted> {
        let root = Component::root(&self.trail);
        let components = find_components(&self.trail, &root);
        self.components_found += components.len() as u64;
        let covered: u64 = components.iter().map(|c| c.vars.len() as u64).sum();
        let free = u64::from(self.trail.free_variable_count()) - covered;
        let mut total = BigUint::one() << free as usize;
        for component in &components {
            total *= self.solve_component(component)?;
        }
        Ok(total)
    }

    fn solve_component(&mut self, component: &Component) -> Result<BigUint, Aborted> {
        let size = component.vars.len();
        let key = self.cache.as_ref().map(|_| component_key(component));
        if let (Some(cache), Some(key)) = (self.cache.as_deref_mut(), key.as_ref()) {
            if let Some(count) = cache.lookup(key, size) {
                return Ok(count);
            }
        }
        let lit = self.decide(component)?;
        let total = self.count_side(component, lit)? + self.count_side(component, !lit)?;
        if let (Some(cache), Some(key)) = (self.cache.as_deref_mut(), key) {
            cache.store(key, total.clone(), size);
        }
        Ok(total)
    }

    /// One branch of a component: propagate `lit`, split what is left of the
    /// component, recurse, and undo.
    fn count_side(&mut self, component: &Component, lit: Literal) -> Result<BigUint, Aborted> {
        let prop = self.trail.unit_propagate(lit);
        if prop.conflict {
            self.conflicts += 1;
            self.trail.undo();
            return Ok(BigUint::zero());
        }
        let sub = find_components(&self.trail, component);
        self.components_found += sub.len() as u64;
        let unset = component.unset_count(&self.trail);
        let covered: u64 = sub.iter().map(|c| c.vars.len() as u64).sum();
        let mut total = BigUint::one() << (unset - covered) as usize;
        for component in &sub {
            match self.solve_component(component) {
                Ok(c) => total *= c,
                Err(e) => {
                    self.trail.undo();
                    return Err(e);
                }
            }
        }
        self.trail.undo();
        Ok(total)
    }
}
