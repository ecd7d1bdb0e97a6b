//! Component decomposition of the active clause set.
//!
//! Two clauses are connected when they share an unset variable. Splitting the
//! active clauses into connected components lets the engines multiply the
//! sub-counts instead of branching across unrelated parts of the formula.

use crate::formula::{Literal, Trail, Var};

/// A scope for counting: a set of active clause ids plus the unset variables
/// occurring in them. Both lists are sorted ascending, which makes the pair
/// canonical for caching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub clause_ids: Vec<u32>,
    pub vars: Vec<Var>,
}

/// Canonical byte encoding of a component, injective over (clause_ids, vars).
pub type CacheKey = Vec<u8>;

impl Component {
    /// The whole-formula scope: every active clause and every unset variable
    /// occurring in one. Not necessarily connected.
    pub fn root(trail: &Trail) -> Component {
        let formula = trail.formula();
        let mut clause_ids = Vec::new();
        let mut seen = vec![false; formula.num_vars() as usize + 1];
        let mut vars = Vec::new();
        for cid in 0..formula.num_clauses() {
            if !trail.clause_is_active(cid) {
                continue;
            }
            clause_ids.push(cid);
            for lit in trail.residual_literals(cid) {
                if !seen[lit.var() as usize] {
                    seen[lit.var() as usize] = true;
                    vars.push(lit.var());
                }
            }
        }
        vars.sort_unstable();
        Component { clause_ids, vars }
    }

    /// Number of this component's variables still unset on `trail`.
    pub fn unset_count(&self, trail: &Trail) -> u64 {
        self.vars.iter().filter(|&&v| trail.is_unset(v)).count() as u64
    }
}

/// Builds the canonical cache key: clause ids then vars, each run prefixed
/// with its length, all little-endian u32.
pub fn component_key(component: &Component) -> CacheKey {
    let mut key =
        Vec::with_capacity(4 * (component.clause_ids.len() + component.vars.len() + 2));
    key.extend_from_slice(&(component.clause_ids.len() as u32).to_le_bytes());
    for &cid in &component.clause_ids {
        key.extend_from_slice(&cid.to_le_bytes());
    }
    key.extend_from_slice(&(component.vars.len() as u32).to_le_bytes());
    for &v in &component.vars {
        key.extend_from_slice(&v.to_le_bytes());
    }
    key
}

/// Splits the still-active clauses of `scope` into connected components.
///
/// Must only be called after propagation reached a fixpoint without conflict,
/// so no active clause in scope is unit or empty. The result is ordered by
/// smallest clause id; each component's lists are sorted.
pub fn find_components(trail: &Trail, scope: &Component) -> Vec<Component> {
    let formula = trail.formula();
    let mut in_scope = vec![false; formula.num_clauses() as usize];
    let mut active: Vec<u32> = Vec::with_capacity(scope.clause_ids.len());
    for &cid in &scope.clause_ids {
        if trail.clause_is_active(cid) {
            in_scope[cid as usize] = true;
            active.push(cid);
        }
    }

    let mut visited = vec![false; formula.num_clauses() as usize];
    // Components are variable-disjoint, so one seen map serves the whole call.
    let mut seen_var = vec![false; formula.num_vars() as usize + 1];
    let mut components = Vec::new();
    for &start in &active {
        if visited[start as usize] {
            continue;
        }
        visited[start as usize] = true;
        let mut clause_ids = Vec::new();
        let mut vars = Vec::new();
        let mut queue = vec![start];
        while let Some(cid) = queue.pop() {
            debug_assert!(trail.clause_unassigned_count(cid) >= 2);
            clause_ids.push(cid);
            for lit in trail.residual_literals(cid) {
                let var = lit.var();
                if seen_var[var as usize] {
                    continue;
                }
                seen_var[var as usize] = true;
                vars.push(var);
                for l in [Literal::positive(var), Literal::negative(var)] {
                    for &next in formula.clauses_with(l) {
                        if in_scope[next as usize] && !visited[next as usize] {
                            visited[next as usize] = true;
                            queue.push(next);
                        }
                    }
                }
            }
        }
        clause_ids.sort_unstable();
        vars.sort_unstable();
        components.push(Component { clause_ids, vars });
    }
    components
}
