//! Benchmark instance generators and their independent counting oracles.
//!
//! Each family produces CNF encodings whose model count equals a quantity the
//! matching oracle computes without touching the solver: cellular automaton
//! preimage counts by forward simulation, grid-world trajectory counts by
//! dynamic programming, Sudoku completion counts by backtracking, and
//! bit-vector sentence counts by input enumeration.

mod arith;
mod cell;
mod grid;
mod oracle;
mod sudoku;

pub use arith::{arith_oracle_count, gen_arith, sample_sentence, ArithSentence, CmpOp, Expr, Op};
pub use cell::{cell_oracle_count, cell_step, enumerate_preimages, gen_cell, CellRule};
pub use grid::{gen_grid, grid_oracle_count, GridGenError, GridWorld};
pub use oracle::{oracle_count, OracleError, ORACLE_VAR_LIMIT};
pub use sudoku::{gen_sudoku, reveals_of, sudoku_oracle_count, SudokuGrid};

use crate::formula::CnfFormula;
use num_bigint::BigUint;

/// One generated benchmark instance plus the metadata the manifest records.
#[derive(Debug, Clone)]
pub struct Instance {
    pub formula: CnfFormula,
    pub family: Family,
    pub seed: u64,
    /// Ground-truth model count from the family's domain oracle, when it was
    /// requested at generation time.
    pub oracle_count: Option<BigUint>,
}

/// Family tag and parameters of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cell { rule: u8, n: u32, r: u32 },
    Grid { s: u32, t: u32 },
    Sudoku { n: u32, k: u32 },
    Arith { n: u32, d: u32, w: u32 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cell { .. } => "cell",
            Family::Grid { .. } => "grid",
            Family::Sudoku { .. } => "sudoku",
            Family::Arith { .. } => "arith",
        }
    }
}

impl Instance {
    /// Canonical file stem `<family>_<params>_<seed>`.
    pub fn file_stem(&self) -> String {
        match self.family {
            Family::Cell { rule, n, r } => format!("cell_{rule}_{n}_{r}_{}", self.seed),
            Family::Grid { s, t } => format!("grid_{s}_{t}_{}", self.seed),
            Family::Sudoku { n, k } => format!("sudoku_{n}_{k}_{}", self.seed),
            Family::Arith { n, d, w } => format!("arith_{n}_{d}_{w}_{}", self.seed),
        }
    }
}
