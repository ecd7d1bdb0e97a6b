//! Reversible assignment trail with counter-based unit propagation.
//!
//! Each clause keeps a satisfied flag and a count of unassigned literals
//! (no watched literals; formulas here are small and the engines visit every
//! clause of a component anyway). Every propagation pushes a frame recording
//! exactly which variables were assigned, which clauses were marked satisfied,
//! and which counters were decremented, so `undo` restores the previous state
//! bit for bit.

use super::{CnfFormula, Literal, Var};
use std::collections::VecDeque;

#[derive(Debug, Default)]
struct Frame {
    assigned: Vec<Var>,
    satisfied: Vec<u32>,
    /// Clause ids whose unassigned-literal counter was decremented, one entry
    /// per decrement.
    shrunk: Vec<u32>,
}

/// Outcome of one propagation: every literal set (the decision first, then
/// implied literals in assignment order) and whether an empty clause was hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationResult {
    pub forced: Vec<Literal>,
    pub conflict: bool,
}

pub struct Trail<'f> {
    formula: &'f CnfFormula,
    assign: Vec<Option<bool>>,
    num_assigned: u32,
    satisfied: Vec<bool>,
    unassigned: Vec<u32>,
    num_unsatisfied: u32,
    frames: Vec<Frame>,
}

impl<'f> Trail<'f> {
    pub fn new(formula: &'f CnfFormula) -> Trail<'f> {
        Trail {
            formula,
            assign: vec![None; formula.num_vars() as usize + 1],
            num_assigned: 0,
            satisfied: vec![false; formula.num_clauses() as usize],
            unassigned: formula
                .clauses()
                .iter()
                .map(|c| c.len() as u32)
                .collect(),
            num_unsatisfied: formula.num_clauses(),
            frames: Vec::new(),
        }
    }

    pub fn formula(&self) -> &'f CnfFormula {
        self.formula
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.assign[var as usize]
    }

    pub fn is_unset(&self, var: Var) -> bool {
        self.assign[var as usize].is_none()
    }

    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.value(lit.var()).map(|v| lit.value_given(v))
    }

    pub fn assigned_count(&self) -> u32 {
        self.num_assigned
    }

    /// Number of pushed propagation frames.
    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// A clause is active while no literal in it is true.
    pub fn clause_is_active(&self, cid: u32) -> bool {
        !self.satisfied[cid as usize]
    }

    pub fn clause_unassigned_count(&self, cid: u32) -> u32 {
        self.unassigned[cid as usize]
    }

    pub fn active_clause_count(&self) -> u32 {
        self.num_unsatisfied
    }

    /// Unassigned literals of a clause (all of them are non-false while the
    /// clause is active).
    pub fn residual_literals(&self, cid: u32) -> impl Iterator<Item = Literal> + '_ {
        self.formula
            .clause(cid)
            .literals()
            .iter()
            .copied()
            .filter(|l| self.is_unset(l.var()))
    }

    /// Unset variables over the whole formula, including variables that occur
    /// in no clause.
    pub fn free_variable_count(&self) -> u32 {
        self.formula.num_vars() - self.num_assigned
    }

    /// Propagates the unit clauses of the original formula to fixpoint.
    /// Must be the first propagation on a fresh trail.
    pub fn propagate_initial(&mut self) -> PropagationResult {
        assert!(self.frames.is_empty(), "initial propagation on a used trail");
        let units: Vec<Literal> = self
            .formula
            .clauses()
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c.literals()[0])
            .collect();
        self.frames.push(Frame::default());
        self.run(units)
    }

    /// Assigns `decision` true and propagates to fixpoint. The forced set
    /// includes the decision itself.
    pub fn unit_propagate(&mut self, decision: Literal) -> PropagationResult {
        assert!(
            self.is_unset(decision.var()),
            "decision variable {} is already assigned",
            decision.var()
        );
        self.frames.push(Frame::default());
        self.run(vec![decision])
    }

    /// Pops the newest frame, restoring the exact state before the matching
    /// propagation.
    pub fn undo(&mut self) {
        let frame = self.frames.pop().expect("undo without a propagation");
        for &cid in &frame.shrunk {
            self.unassigned[cid as usize] += 1;
        }
        for &cid in &frame.satisfied {
            self.satisfied[cid as usize] = false;
            self.num_unsatisfied += 1;
        }
        for &var in &frame.assigned {
            self.assign[var as usize] = None;
            self.num_assigned -= 1;
        }
    }

    fn run(&mut self, pending: Vec<Literal>) -> PropagationResult {
        // Literals are assigned only when dequeued: a clause that becomes unit
        // enqueues its survivor, and the value check on dequeue resolves both
        // duplicate forcings and opposed forcings (the latter as a conflict).
        let mut forced: Vec<Literal> = Vec::new();
        let mut queue: VecDeque<Literal> = pending.into();
        let mut conflict = false;
        while let Some(lit) = queue.pop_front() {
            match self.literal_value(lit) {
                Some(true) => continue,
                Some(false) => {
                    conflict = true;
                    break;
                }
                None => {
                    self.set(lit);
                    forced.push(lit);
                    if self.apply(lit, &mut queue) {
                        conflict = true;
                        break;
                    }
                }
            }
        }
        PropagationResult { forced, conflict }
    }

    fn set(&mut self, lit: Literal) {
        self.assign[lit.var() as usize] = Some(lit.is_positive());
        self.num_assigned += 1;
        self.frames.last_mut().unwrap().assigned.push(lit.var());
    }

    /// Applies the clause-level effects of `lit` having become true. Returns
    /// true on conflict (some clause ran out of literals).
    fn apply(&mut self, lit: Literal, queue: &mut VecDeque<Literal>) -> bool {
        let formula = self.formula;
        for &cid in formula.clauses_with(lit) {
            if !self.satisfied[cid as usize] {
                self.satisfied[cid as usize] = true;
                self.num_unsatisfied -= 1;
                self.frames.last_mut().unwrap().satisfied.push(cid);
            }
        }
        for &cid in formula.clauses_with(!lit) {
            if self.satisfied[cid as usize] {
                continue;
            }
            self.unassigned[cid as usize] -= 1;
            self.frames.last_mut().unwrap().shrunk.push(cid);
            match self.unassigned[cid as usize] {
                0 => return true,
                1 => {
                    let unit = formula
                        .clause(cid)
                        .literals()
                        .iter()
                        .copied()
                        .find(|l| self.is_unset(l.var()))
                        .expect("unassigned counter out of sync");
                    queue.push_back(unit);
                }
                _ => {}
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_dimacs;

    fn lit(code: i64) -> Literal {
        Literal::from_dimacs(code)
    }

    /// The running example formula: (x1 v -x4) & (-x1 v -x2) & (x3 v x5).
    fn example() -> CnfFormula {
        parse_dimacs("p cnf 5 3\n1 -4 0\n-1 -2 0\n3 5 0\n").unwrap()
    }

    fn snapshot(t: &Trail) -> (Vec<Option<bool>>, Vec<bool>, Vec<u32>, u32, u32, usize) {
        let f = t.formula();
        (
            (1..=f.num_vars()).map(|v| t.value(v)).collect(),
            (0..f.num_clauses()).map(|c| !t.clause_is_active(c)).collect(),
            (0..f.num_clauses())
                .map(|c| t.clause_unassigned_count(c))
                .collect(),
            t.assigned_count(),
            t.active_clause_count(),
            t.depth(),
        )
    }

    #[test]
    fn decision_forces_chain() {
        let f = parse_dimacs("p cnf 2 2\n1 0\n-1 2 0\n").unwrap();
        let mut t = Trail::new(&f);
        let r = t.unit_propagate(lit(1));
        assert!(!r.conflict);
        assert_eq!(r.forced, vec![lit(1), lit(2)]);
    }

    #[test]
    fn conflict_on_opposed_units() {
        // (x1) & (-x1 v x2) & (-x2): propagating x1 forces x2 and empties the
        // last clause.
        let f = parse_dimacs("p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap();
        let mut t = Trail::new(&f);
        let r = t.unit_propagate(lit(1)); // decision on an existing unit is fine pre-propagation
        assert!(r.conflict);
    }

    #[test]
    fn example_propagation_matches_by_hand() {
        let f = example();
        let mut t = Trail::new(&f);
        let r = t.unit_propagate(lit(1));
        assert!(!r.conflict);
        assert_eq!(r.forced, vec![lit(1), lit(-2)]);
        assert_eq!(t.free_variable_count(), 3);
        // Clause 2 is the only active clause left.
        assert!(!t.clause_is_active(0));
        assert!(!t.clause_is_active(1));
        assert!(t.clause_is_active(2));
    }

    #[test]
    fn initial_propagation_handles_units_and_conflicts() {
        let f = parse_dimacs("p cnf 2 2\n1 0\n-1 2 0\n").unwrap();
        let mut t = Trail::new(&f);
        let r = t.propagate_initial();
        assert!(!r.conflict);
        assert_eq!(r.forced, vec![lit(1), lit(2)]);
        assert_eq!(t.active_clause_count(), 0);

        let g = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let mut t = Trail::new(&g);
        assert!(t.propagate_initial().conflict);
    }

    #[test]
    fn no_active_clause_is_unit_or_empty_after_clean_propagation() {
        let f = example();
        let mut t = Trail::new(&f);
        let r = t.unit_propagate(lit(-4));
        assert!(!r.conflict);
        for cid in 0..f.num_clauses() {
            if t.clause_is_active(cid) {
                assert!(t.clause_unassigned_count(cid) >= 2);
            }
        }
    }

    #[test]
    fn undo_restores_state_exactly() {
        let f = example();
        let mut t = Trail::new(&f);
        let before = snapshot(&t);
        t.unit_propagate(lit(1));
        assert_ne!(snapshot(&t), before);
        t.undo();
        assert_eq!(snapshot(&t), before);

        // Nested frames unwind in order, including through a conflict.
        let mid_expected = {
            t.unit_propagate(lit(1));
            snapshot(&t)
        };
        let r = t.unit_propagate(lit(4)); // clause 0 is already satisfied by x1, so this is quiet
        assert!(!r.conflict);
        t.undo();
        assert_eq!(snapshot(&t), mid_expected);
        t.undo();
        assert_eq!(snapshot(&t), before);
    }

    #[test]
    fn one_assignment_making_two_clauses_unit_with_opposed_survivors_conflicts() {
        // Setting x2 shrinks both clauses to units x3 and -x3 in the same
        // pass; the second forcing must surface as a conflict, not a panic.
        let f = parse_dimacs("p cnf 3 2\n-2 3 0\n-2 -3 0\n").unwrap();
        let mut t = Trail::new(&f);
        let before = snapshot(&t);
        assert!(t.unit_propagate(lit(2)).conflict);
        t.undo();
        assert_eq!(snapshot(&t), before);
        assert!(!t.unit_propagate(lit(-2)).conflict);
    }

    #[test]
    fn forced_set_is_order_independent() {
        // Same clauses in different file orders must force the same set.
        let a = parse_dimacs("p cnf 4 3\n-1 2 0\n-2 3 0\n-3 4 0\n").unwrap();
        let b = parse_dimacs("p cnf 4 3\n-3 4 0\n-1 2 0\n-2 3 0\n").unwrap();
        let mut ta = Trail::new(&a);
        let mut tb = Trail::new(&b);
        let mut fa = ta.unit_propagate(lit(1)).forced;
        let mut fb = tb.unit_propagate(lit(1)).forced;
        fa.sort();
        fb.sort();
        assert_eq!(fa, fb);
        assert_eq!(fa.len(), 4);
    }
}
