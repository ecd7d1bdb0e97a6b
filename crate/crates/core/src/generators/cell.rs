//! Elementary cellular automaton preimage counting.
//!
//! An instance encodes the full (r+1)-row evolution grid of an n-cell
//! circular automaton: one variable per cell, the rule's truth table as
//! clauses between consecutive rows, and the sampled terminal state as unit
//! clauses on the last row. Models of the CNF are exactly the initial states
//! that evolve into the terminal state, so the model count is the preimage
//! count under r applications of the rule.

use super::{Family, Instance};
use crate::formula::{CnfFormula, Literal, Var};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A Wolfram rule number: bit `(l<<2 | c<<1 | r)` of the number is the next
/// state of a cell with neighborhood `(l, c, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRule(pub u8);

impl CellRule {
    pub fn next(self, l: bool, c: bool, r: bool) -> bool {
        let idx = (u8::from(l) << 2) | (u8::from(c) << 1) | u8::from(r);
        self.0 >> idx & 1 == 1
    }
}

/// One synchronous update with circular boundary.
pub fn cell_step(state: &[bool], rule: CellRule) -> Vec<bool> {
    let n = state.len();
    assert!(n >= 3, "need at least three cells");
    (0..n)
        .map(|i| rule.next(state[(i + n - 1) % n], state[i], state[(i + 1) % n]))
        .collect()
}

/// Counts initial states that reach `target` after `r` steps, by forward
/// simulation of every one of the 2^n initial states.
pub fn enumerate_preimages(rule: CellRule, r: u32, target: &[bool]) -> BigUint {
    let n = target.len();
    assert!(n <= 20, "enumeration is exponential in n");
    let mut count = BigUint::zero();
    for bits in 0u64..1 << n {
        let mut state: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        for _ in 0..r {
            state = cell_step(&state, rule);
        }
        if state == target {
            count += 1u32;
        }
    }
    count
}

/// Clause template over the symbolic slots (left, center, right, out);
/// `true` keeps the slot's positive literal.
type TemplateClause = Vec<(usize, bool)>;

/// The rule relation `out <-> rule(l, c, r)` as clauses, starting from one
/// clause per truth-table row and merging complementary pairs to fixpoint
/// (so rule 204 collapses to the biconditional out<->center, and rule 0 to
/// the unit clause not-out).
fn rule_template(rule: CellRule) -> Vec<TemplateClause> {
    let mut clauses: Vec<TemplateClause> = (0..8u8)
        .map(|idx| {
            let (l, c, r) = (idx >> 2 & 1 == 1, idx >> 1 & 1 == 1, idx & 1 == 1);
            vec![
                (0, !l),
                (1, !c),
                (2, !r),
                (3, rule.next(l, c, r)),
            ]
        })
        .collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..clauses.len() {
            for j in i + 1..clauses.len() {
                if let Some(m) = merge(&clauses[i], &clauses[j]) {
                    clauses.swap_remove(j);
                    clauses.swap_remove(i);
                    if !clauses.iter().any(|c| subsumes(c, &m)) {
                        clauses.push(m);
                    }
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return clauses;
        }
    }
}

/// Resolution of two clauses that differ in exactly one slot's polarity.
fn merge(a: &TemplateClause, b: &TemplateClause) -> Option<TemplateClause> {
    if a.len() != b.len() {
        return None;
    }
    let vars_a: Vec<usize> = a.iter().map(|&(v, _)| v).collect();
    if vars_a != b.iter().map(|&(v, _)| v).collect::<Vec<_>>() {
        return None;
    }
    let diffs: Vec<usize> = (0..a.len()).filter(|&k| a[k].1 != b[k].1).collect();
    match diffs.as_slice() {
        [k] => {
            let mut m = a.clone();
            m.remove(*k);
            Some(m)
        }
        _ => None,
    }
}

fn subsumes(small: &TemplateClause, big: &TemplateClause) -> bool {
    small.iter().all(|lit| big.contains(lit))
}

pub fn gen_cell(rule: CellRule, n: u32, r: u32, seed: u64) -> Instance {
    assert!(n >= 3, "need at least three cells");
    assert!(r >= 1, "need at least one step");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();

    let var = |row: u32, col: u32| -> Var { row * n + col + 1 };
    let template = rule_template(rule);
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for row in 1..=r {
        for col in 0..n {
            let slots = [
                var(row - 1, (col + n - 1) % n),
                var(row - 1, col),
                var(row - 1, (col + 1) % n),
                var(row, col),
            ];
            for tc in &template {
                clauses.push(
                    tc.iter()
                        .map(|&(slot, positive)| Literal::new(slots[slot], positive))
                        .collect(),
                );
            }
        }
    }
    for col in 0..n {
        clauses.push(vec![Literal::new(var(r, col), target[col as usize])]);
    }

    let mut formula = CnfFormula::new(n * (r + 1), clauses);
    for row in 0..=r {
        for col in 0..n {
            formula.set_time(var(row, col), f64::from(row) / f64::from(r));
            formula.set_coord(var(row, col), row, col);
        }
    }
    Instance {
        formula,
        family: Family::Cell {
            rule: rule.0,
            n,
            r,
        },
        seed,
        oracle_count: None,
    }
}

/// Domain oracle for a generated instance (forward simulation).
pub fn cell_oracle_count(rule: CellRule, n: u32, r: u32, seed: u64) -> BigUint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    enumerate_preimages(rule, r, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_relsat, OccurrenceHeuristic, SolveLimits};
    use crate::formula::serialize_dimacs;
    use num_traits::One;

    #[test]
    fn rule_204_is_the_identity() {
        let state = vec![true, false, true, true, false];
        assert_eq!(cell_step(&state, CellRule(204)), state);
    }

    #[test]
    fn rule_0_maps_to_all_zeros() {
        let state = vec![true, true, false, true];
        assert_eq!(cell_step(&state, CellRule(0)), vec![false; 4]);
    }

    #[test]
    fn rule_110_hand_checked_on_00100() {
        // Neighborhoods (l,c,r) around 00100, circular: positions read
        // (0,0,0)(0,0,1)(0,1,0)(1,0,0)(0,0,0) -> rule 110 table gives 0,1,1,0,0.
        let state = vec![false, false, true, false, false];
        assert_eq!(
            cell_step(&state, CellRule(110)),
            vec![false, true, true, false, false]
        );
    }

    #[test]
    fn rule_template_minimizes_identity_and_constant_rules() {
        // out <-> center: exactly the two biconditional clauses.
        let t204 = rule_template(CellRule(204));
        assert_eq!(t204.len(), 2);
        assert!(t204.iter().all(|c| c.len() == 2));
        // Constant zero: the single unit clause (not out).
        let t0 = rule_template(CellRule(0));
        assert_eq!(t0, vec![vec![(3, false)]]);
        // Constant one.
        assert_eq!(rule_template(CellRule(255)), vec![vec![(3, true)]]);
    }

    #[test]
    fn rule_204_instances_count_one() {
        for seed in 0..3 {
            let inst = gen_cell(CellRule(204), 6, 3, seed);
            let r = count_relsat(
                &inst.formula,
                &mut OccurrenceHeuristic,
                &SolveLimits::default(),
            );
            assert!(r.count.is_one());
            // The identity rule chains units from the last row all the way
            // up, so initial propagation alone solves it.
            assert_eq!(r.decisions, 0);
        }
    }

    #[test]
    fn rule_0_all_zero_target_counts_every_initial_state() {
        // Force the all-zeros target by searching a seed... instead, encode
        // directly: any target works only if it is all zeros, so pick a seed
        // whose sampled target is all zeros or check against the oracle.
        let n = 8;
        for seed in 0..20 {
            let inst = gen_cell(CellRule(0), n, 1, seed);
            let expected = cell_oracle_count(CellRule(0), n, 1, seed);
            let got = count_relsat(
                &inst.formula,
                &mut OccurrenceHeuristic,
                &SolveLimits::default(),
            );
            assert_eq!(got.count, expected);
            // Rule 0 reaches all-zeros from every state; any other target is
            // unreachable.
            let all_zero_target = expected == BigUint::from(1u32) << n;
            assert_eq!(got.count.is_zero(), !all_zero_target);
        }
    }

    #[test]
    fn cnf_count_matches_forward_simulation() {
        for (rule, n, r, seed) in [
            (CellRule(49), 8, 3, 11),
            (CellRule(9), 7, 2, 5),
            (CellRule(35), 6, 4, 2),
            (CellRule(110), 5, 3, 8),
        ] {
            let inst = gen_cell(rule, n, r, seed);
            let expected = cell_oracle_count(rule, n, r, seed);
            let got = count_relsat(
                &inst.formula,
                &mut OccurrenceHeuristic,
                &SolveLimits::default(),
            );
            assert_eq!(got.count, expected, "rule {} n={n} r={r}", rule.0);
        }
    }

    #[test]
    fn annotations_cover_the_grid_bijectively() {
        let (n, r) = (5u32, 3u32);
        let inst = gen_cell(CellRule(30), n, r, 1);
        let f = &inst.formula;
        assert_eq!(f.num_vars(), n * (r + 1));
        let mut seen = std::collections::HashSet::new();
        for v in 1..=f.num_vars() {
            let (row, col) = f.coord(v).expect("every variable has a coordinate");
            assert!(row <= r && col < n);
            assert!(seen.insert((row, col)), "coordinate reused");
            assert_eq!(f.time(v), Some(f64::from(row) / f64::from(r)));
        }
        assert_eq!(seen.len(), (n * (r + 1)) as usize);
    }

    #[test]
    fn fixed_seed_reproduces_instance_bytes() {
        let a = serialize_dimacs(&gen_cell(CellRule(49), 6, 2, 42).formula);
        let b = serialize_dimacs(&gen_cell(CellRule(49), 6, 2, 42).formula);
        assert_eq!(a, b);
        let c = serialize_dimacs(&gen_cell(CellRule(49), 6, 2, 43).formula);
        assert_ne!(a, c);
    }

    #[test]
    fn file_stem_matches_family_parameters() {
        let inst = gen_cell(CellRule(9), 14, 7, 101);
        assert_eq!(inst.file_stem(), "cell_9_14_7_101");
    }
}
