//! Branching heuristics.

use super::component::Component;
use crate::formula::{Literal, Trail};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Picks the next decision literal for a component.
///
/// `trail` exposes the residual formula (active clauses, unset variables,
/// annotations); `step` is the zero-based index of the decision about to be
/// made. The returned literal's variable must belong to `component.vars`.
pub trait BranchingHeuristic {
    fn pick(&mut self, trail: &Trail<'_>, component: &Component, step: u64) -> Literal;
}

/// The occurrence half of VSADS: branch on the variable appearing in the most
/// active clauses of the component (both polarities summed), preferring the
/// more frequent polarity. Ties go to the smallest variable, then positive.
pub fn pick_occurrence_max(trail: &Trail<'_>, component: &Component) -> Literal {
    let mut pos = vec![0u32; component.vars.len()];
    let mut neg = vec![0u32; component.vars.len()];
    for &cid in &component.clause_ids {
        if !trail.clause_is_active(cid) {
            continue;
        }
        for lit in trail.residual_literals(cid) {
            let slot = component
                .vars
                .binary_search(&lit.var())
                .expect("literal outside component");
            if lit.is_positive() {
                pos[slot] += 1;
            } else {
                neg[slot] += 1;
            }
        }
    }
    let mut best = 0usize;
    let mut best_score = 0u32;
    for (slot, (&p, &n)) in pos.iter().zip(&neg).enumerate() {
        let score = p + n;
        if score > best_score {
            best_score = score;
            best = slot;
        }
    }
    assert!(best_score > 0, "component has no occurrences");
    Literal::new(component.vars[best], pos[best] >= neg[best])
}

/// Uniform draw over the component's `2 * |vars|` literals.
pub fn pick_random<R: Rng>(component: &Component, rng: &mut R) -> Literal {
    let i = rng.random_range(0..component.vars.len() * 2);
    Literal::new(component.vars[i / 2], i % 2 == 0)
}

pub struct OccurrenceHeuristic;

impl BranchingHeuristic for OccurrenceHeuristic {
    fn pick(&mut self, trail: &Trail<'_>, component: &Component, _step: u64) -> Literal {
        pick_occurrence_max(trail, component)
    }
}

/// Seeded uniform-random branching. One stream for the whole solve, so the
/// sequence of draws depends on traversal order.
pub struct RandomHeuristic {
    rng: ChaCha8Rng,
}

impl RandomHeuristic {
    pub fn new(seed: u64) -> RandomHeuristic {
        RandomHeuristic {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BranchingHeuristic for RandomHeuristic {
    fn pick(&mut self, _trail: &Trail<'_>, component: &Component, _step: u64) -> Literal {
        pick_random(component, &mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_dimacs, CnfFormula};

    fn lit(code: i64) -> Literal {
        Literal::from_dimacs(code)
    }

    fn root_of(f: &CnfFormula) -> (Trail<'_>, Component) {
        let trail = Trail::new(f);
        let root = Component::root(&trail);
        (trail, root)
    }

    #[test]
    fn occurrence_picks_most_frequent_with_polarity() {
        // x2 appears three times, twice negative.
        let f = parse_dimacs("p cnf 3 3\n-2 1 0\n-2 3 0\n2 3 0\n").unwrap();
        let (trail, root) = root_of(&f);
        assert_eq!(pick_occurrence_max(&trail, &root), lit(-2));
    }

    #[test]
    fn occurrence_breaks_ties_by_var_then_positive() {
        let f = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        let (trail, root) = root_of(&f);
        assert_eq!(pick_occurrence_max(&trail, &root), lit(1));
    }

    #[test]
    fn occurrence_prefers_negative_when_strictly_more_frequent() {
        // All of x2, x3, x4 appear twice; smallest wins, and x2's
        // occurrences are both negative.
        let f = parse_dimacs("p cnf 4 3\n-2 3 0\n-2 4 0\n3 4 0\n").unwrap();
        let (trail, root) = root_of(&f);
        assert_eq!(pick_occurrence_max(&trail, &root), lit(-2));
    }

    #[test]
    fn random_is_reproducible_and_in_range() {
        let f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        let (trail, root) = root_of(&f);
        let mut a = RandomHeuristic::new(7);
        let mut b = RandomHeuristic::new(7);
        for step in 0..50 {
            let la = a.pick(&trail, &root, step);
            let lb = b.pick(&trail, &root, step);
            assert_eq!(la, lb);
            assert!(root.vars.contains(&la.var()));
        }
    }

    #[test]
    fn random_draw_frequencies_are_roughly_uniform() {
        // 4 literals, 10_000 draws: each expected 2500, sd ~ 43. A 3-sigma
        // band is [2370, 2630].
        let f = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        let (trail, root) = root_of(&f);
        let mut h = RandomHeuristic::new(123);
        let mut counts = std::collections::HashMap::new();
        for step in 0..10_000 {
            *counts.entry(h.pick(&trail, &root, step)).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 4);
        for (_, c) in counts {
            assert!((2370..=2630).contains(&c), "count {c} outside 3-sigma band");
        }
    }
}
