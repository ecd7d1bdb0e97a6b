//! Grid-world trajectory counting.
//!
//! An agent walks an s x s grid for t steps; moves off the edge clamp (the
//! agent stays put). The instance counts action sequences whose induced path
//! never touches lava. The encoding is one-hot positions per step, two action
//! bits per step, and transition clauses tying the three together, so each
//! safe action sequence corresponds to exactly one model.

use super::{Family, Instance};
use crate::formula::{CnfFormula, Literal, Var};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Actions in encoding order; the two action bits of step k spell the index.
const ACTIONS: [(i32, i32); 4] = [(-1, 0), (1, 0), (0, 1), (0, -1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWorld {
    pub s: u32,
    /// Row-major terrain, true = lava.
    pub lava: Vec<bool>,
    pub start: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridGenError;

impl fmt::Display for GridGenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no viable terrain after 100 attempts")
    }
}

impl std::error::Error for GridGenError {}

impl GridWorld {
    pub fn new(s: u32, lava: Vec<bool>, start: u32) -> GridWorld {
        assert!(s >= 2);
        assert_eq!(lava.len(), (s * s) as usize);
        assert!(!lava[start as usize], "start square must be safe");
        GridWorld { s, lava, start }
    }

    pub fn is_safe(&self, square: u32) -> bool {
        !self.lava[square as usize]
    }

    /// Destination of an action, clamped at the walls.
    pub fn step(&self, square: u32, action: usize) -> u32 {
        let s = self.s as i32;
        let (dr, dc) = ACTIONS[action];
        let row = (square as i32 / s + dr).clamp(0, s - 1);
        let col = (square as i32 % s + dc).clamp(0, s - 1);
        (row * s + col) as u32
    }

    /// In-bounds adjacent squares (clamped self-moves are not neighbors).
    fn neighbors(&self, square: u32) -> impl Iterator<Item = u32> + '_ {
        (0..4).filter_map(move |a| {
            let dest = self.step(square, a);
            (dest != square).then_some(dest)
        })
    }

    /// CNF whose models are the safe action sequences of length `t`.
    pub fn encode(&self, t: u32) -> CnfFormula {
        assert!(t >= 1);
        let s2 = self.s * self.s;
        let pos = |k: u32, q: u32| -> Var { k * s2 + q + 1 };
        let act = |k: u32, bit: u32| -> Var { (t + 1) * s2 + 2 * k + bit + 1 };
        let num_vars = (t + 1) * s2 + 2 * t;

        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        clauses.push(vec![Literal::new(pos(0, self.start), true)]);
        for k in 0..=t {
            clauses.push((0..s2).map(|q| Literal::new(pos(k, q), true)).collect());
            for q1 in 0..s2 {
                for q2 in q1 + 1..s2 {
                    clauses.push(vec![
                        Literal::new(pos(k, q1), false),
                        Literal::new(pos(k, q2), false),
                    ]);
                }
            }
            for q in 0..s2 {
                if !self.is_safe(q) {
                    clauses.push(vec![Literal::new(pos(k, q), false)]);
                }
            }
        }
        for k in 0..t {
            for q in 0..s2 {
                for (a, _) in ACTIONS.iter().enumerate() {
                    let dest = self.step(q, a);
                    clauses.push(vec![
                        Literal::new(pos(k, q), false),
                        Literal::new(act(k, 0), a & 1 == 0),
                        Literal::new(act(k, 1), a >> 1 == 0),
                        Literal::new(pos(k + 1, dest), true),
                    ]);
                }
            }
        }

        let mut formula = CnfFormula::new(num_vars, clauses);
        for k in 0..=t {
            for q in 0..s2 {
                formula.set_time(pos(k, q), f64::from(k) / f64::from(t));
            }
        }
        for k in 0..t {
            for bit in 0..2 {
                formula.set_time(act(k, bit), f64::from(k) / f64::from(t));
            }
        }
        formula
    }
}

/// Number of length-`t` action sequences whose path stays on safe squares,
/// by dynamic programming over (square, step).
pub fn grid_oracle_count(world: &GridWorld, t: u32) -> BigUint {
    let s2 = (world.s * world.s) as usize;
    let mut counts = vec![BigUint::zero(); s2];
    counts[world.start as usize] += 1u32;
    for _ in 0..t {
        let mut next = vec![BigUint::zero(); s2];
        for q in 0..s2 {
            if counts[q].is_zero() {
                continue;
            }
            for a in 0..4 {
                let dest = world.step(q as u32, a) as usize;
                if world.is_safe(dest as u32) {
                    next[dest] += &counts[q];
                }
            }
        }
        counts = next;
    }
    counts.into_iter().sum()
}

pub fn gen_grid(s: u32, t: u32, seed: u64) -> Result<Instance, GridGenError> {
    assert!(s >= 2);
    assert!(t >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let lava: Vec<bool> = (0..s * s).map(|_| rng.random_bool(0.25)).collect();
        let start = rng.random_range(0..s * s);
        if lava[start as usize] {
            continue;
        }
        let world = GridWorld::new(s, lava, start);
        if world.neighbors(start).any(|q| world.is_safe(q)) {
            let oracle = grid_oracle_count(&world, t);
            return Ok(Instance {
                formula: world.encode(t),
                family: Family::Grid { s, t },
                seed,
                oracle_count: Some(oracle),
            });
        }
    }
    Err(GridGenError)
}
