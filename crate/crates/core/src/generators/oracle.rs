//! Brute-force model counting by assignment enumeration.
//!
//! Independent of the solver stack on purpose: it looks at raw clauses only,
//! so engine tests can compare against it.

use crate::formula::CnfFormula;
use num_bigint::BigUint;
use thiserror::Error;

/// Enumeration is capped at this many variables (2^24 assignments).
pub const ORACLE_VAR_LIMIT: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("formula has {0} variables, enumeration is capped at {ORACLE_VAR_LIMIT}")]
    TooManyVariables(u32),
}

/// Counts satisfying assignments over all `num_vars` variables by exhaustive
/// enumeration.
pub fn oracle_count(formula: &CnfFormula) -> Result<BigUint, OracleError> {
    let n = formula.num_vars();
    if n > ORACLE_VAR_LIMIT {
        return Err(OracleError::TooManyVariables(n));
    }
    // Bit i-1 of an assignment word holds variable i.
    let masks: Vec<(u32, u32)> = formula
        .clauses()
        .iter()
        .map(|c| {
            let mut pos = 0u32;
            let mut neg = 0u32;
            for &l in c.literals() {
                let bit = 1u32 << (l.var() - 1);
                if l.is_positive() {
                    pos |= bit;
                } else {
                    neg |= bit;
                }
            }
            (pos, neg)
        })
        .collect();

    let mut count = 0u64;
    for a in 0..(1u64 << n) {
        let a = a as u32;
        if masks.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}
