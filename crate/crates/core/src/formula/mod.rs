//! CNF formulas: literals, normalized clauses, per-variable annotations, and
//! the reversible assignment trail used by the counting engines.

mod dimacs;
mod trail;

pub use dimacs::{parse_dimacs, serialize_dimacs, ParseError, ParseErrorKind};
pub use trail::{PropagationResult, Trail};

use std::fmt;
use std::ops::Not;

/// Variables are 1-based indices, as in DIMACS.
pub type Var = u32;

/// A literal, packed as `var << 1 | negated`.
///
/// The derived ordering sorts by variable first and puts the positive literal
/// before the negative one, which is exactly the tie-break order the branching
/// heuristics use.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        debug_assert!(var >= 1, "variables are 1-based");
        Literal(var << 1 | u32::from(!positive))
    }

    pub fn positive(var: Var) -> Literal {
        Literal::new(var, true)
    }

    pub fn negative(var: Var) -> Literal {
        Literal::new(var, false)
    }

    /// Builds a literal from a nonzero DIMACS integer.
    pub fn from_dimacs(code: i64) -> Literal {
        debug_assert!(code != 0);
        Literal::new(code.unsigned_abs() as Var, code > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var());
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Truth value of this literal when its variable is assigned `var_value`.
    pub fn value_given(self, var_value: bool) -> bool {
        var_value == self.is_positive()
    }

    /// Dense index usable for occurrence tables: positive literals at even
    /// slots, negative at odd.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal(self.0 ^ 1)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
///
/// Clauses are normalized on construction: duplicate literals are dropped
/// (first occurrence kept) and tautologies are rejected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Normalizes a literal list. Returns `None` when the clause contains a
    /// literal and its negation and is therefore trivially satisfied.
    ///
    /// Panics on an empty literal list; empty clauses cannot be represented
    /// (the parser rejects them and no generator emits them).
    pub fn new(lits: Vec<Literal>) -> Option<Clause> {
        assert!(!lits.is_empty(), "empty clause");
        let mut seen: Vec<Literal> = Vec::with_capacity(lits.len());
        for lit in lits {
            if seen.contains(&!lit) {
                return None;
            }
            if !seen.contains(&lit) {
                seen.push(lit);
            }
        }
        Some(Clause { lits: seen })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A CNF formula over variables `1..=num_vars`, with optional per-variable
/// semantic annotations (a normalized time in `[0, 1]` and an integer
/// `(row, col)` coordinate) carried through DIMACS as `c feature` comments.
#[derive(Clone, PartialEq, Debug)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
    time: Vec<Option<f64>>,
    coord: Vec<Option<(u32, u32)>>,
    /// Clause ids containing each literal, indexed by `Literal::index`.
    occ: Vec<Vec<u32>>,
}

impl CnfFormula {
    /// Builds a formula, normalizing every clause and dropping tautologies.
    ///
    /// Panics when a literal mentions a variable outside `1..=num_vars`.
    pub fn new<I>(num_vars: u32, clauses: I) -> CnfFormula
    where
        I: IntoIterator<Item = Vec<Literal>>,
    {
        let mut f = CnfFormula {
            num_vars,
            clauses: Vec::new(),
            time: vec![None; num_vars as usize + 1],
            coord: vec![None; num_vars as usize + 1],
            occ: vec![Vec::new(); 2 * (num_vars as usize + 1)],
        };
        for lits in clauses {
            for &l in &lits {
                assert!(
                    l.var() >= 1 && l.var() <= num_vars,
                    "literal {l} out of range for {num_vars} variables"
                );
            }
            if let Some(clause) = Clause::new(lits) {
                let cid = f.clauses.len() as u32;
                for &l in clause.literals() {
                    f.occ[l.index()].push(cid);
                }
                f.clauses.push(clause);
            }
        }
        f
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> u32 {
        self.clauses.len() as u32
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, cid: u32) -> &Clause {
        &self.clauses[cid as usize]
    }

    /// Ids of the clauses containing `lit`.
    pub fn clauses_with(&self, lit: Literal) -> &[u32] {
        &self.occ[lit.index()]
    }

    /// Whether `var` occurs in any clause.
    pub fn var_occurs(&self, var: Var) -> bool {
        !self.occ[Literal::positive(var).index()].is_empty()
            || !self.occ[Literal::negative(var).index()].is_empty()
    }

    pub fn set_time(&mut self, var: Var, t: f64) {
        self.time[var as usize] = Some(t);
    }

    pub fn time(&self, var: Var) -> Option<f64> {
        self.time[var as usize]
    }

    pub fn has_time_annotations(&self) -> bool {
        self.time.iter().any(Option::is_some)
    }

    pub fn set_coord(&mut self, var: Var, row: u32, col: u32) {
        self.coord[var as usize] = Some((row, col));
    }

    pub fn coord(&self, var: Var) -> Option<(u32, u32)> {
        self.coord[var as usize]
    }

    pub fn has_coord_annotations(&self) -> bool {
        self.coord.iter().any(Option::is_some)
    }
}
