//! Sudoku completion counting.
//!
//! Instances are n x n grids (n a perfect square) with k revealed cells taken
//! from a uniformly generated complete solution. The CNF has one variable per
//! (cell, digit): exactly-one digit per cell, at-most-one occurrence of each
//! digit per row, column and box, and the reveals as positive unit clauses.

use super::{Family, Instance};
use crate::formula::{CnfFormula, Literal, Var};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A partially (or fully) filled grid. Digits are 1..=n, row-major cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuGrid {
    pub n: u32,
    pub cells: Vec<Option<u8>>,
}

impl SudokuGrid {
    pub fn empty(n: u32) -> SudokuGrid {
        assert!(box_side(n) * box_side(n) == n, "n must be a perfect square");
        SudokuGrid {
            n,
            cells: vec![None; (n * n) as usize],
        }
    }

    pub fn get(&self, row: u32, col: u32) -> Option<u8> {
        self.cells[(row * self.n + col) as usize]
    }

    pub fn set(&mut self, row: u32, col: u32, digit: Option<u8>) {
        self.cells[(row * self.n + col) as usize] = digit;
    }

    /// Digits usable at `(row, col)` given the current fill, as a bitmask
    /// with bit d-1 standing for digit d.
    fn candidates(&self, row: u32, col: u32) -> u32 {
        let n = self.n;
        let s = box_side(n);
        let mut used = 0u32;
        for i in 0..n {
            if let Some(d) = self.get(row, i) {
                used |= 1 << (d - 1);
            }
            if let Some(d) = self.get(i, col) {
                used |= 1 << (d - 1);
            }
        }
        let (br, bc) = (row / s * s, col / s * s);
        for r in br..br + s {
            for c in bc..bc + s {
                if let Some(d) = self.get(r, c) {
                    used |= 1 << (d - 1);
                }
            }
        }
        !used & ((1 << n) - 1)
    }

    /// Most-constrained empty cell, or None when the grid is full.
    fn select_cell(&self) -> Option<(u32, u32, u32)> {
        let n = self.n;
        let mut best: Option<(u32, u32, u32)> = None;
        for row in 0..n {
            for col in 0..n {
                if self.get(row, col).is_some() {
                    continue;
                }
                let cands = self.candidates(row, col);
                if best.is_none_or(|(_, _, b)| cands.count_ones() < b.count_ones()) {
                    best = Some((row, col, cands));
                }
            }
        }
        best
    }

    /// True when no filled cell conflicts with another in its row, column
    /// or box.
    pub fn is_consistent(&self) -> bool {
        (0..self.n).all(|row| (0..self.n).all(|col| self.placement_ok(row, col)))
    }

    fn placement_ok(&self, row: u32, col: u32) -> bool {
        let Some(d) = self.get(row, col) else {
            return true;
        };
        let s = box_side(self.n);
        for i in 0..self.n {
            if i != col && self.get(row, i) == Some(d) {
                return false;
            }
            if i != row && self.get(i, col) == Some(d) {
                return false;
            }
        }
        let (br, bc) = (row / s * s, col / s * s);
        for r in br..br + s {
            for c in bc..bc + s {
                if (r, c) != (row, col) && self.get(r, c) == Some(d) {
                    return false;
                }
            }
        }
        true
    }
}

fn box_side(n: u32) -> u32 {
    (n as f64).sqrt().round() as u32
}

/// Exhaustive completion count by backtracking over the most-constrained
/// cell first.
pub fn sudoku_oracle_count(grid: &SudokuGrid) -> BigUint {
    assert!(grid.n <= 9, "oracle is for desk-scale grids");
    if !grid.is_consistent() {
        return BigUint::zero();
    }
    let mut work = grid.clone();
    let mut count = BigUint::zero();
    complete_all(&mut work, &mut count);
    count
}

fn complete_all(grid: &mut SudokuGrid, count: &mut BigUint) {
    let Some((row, col, cands)) = grid.select_cell() else {
        *count += 1u32;
        return;
    };
    for d in 1..=grid.n as u8 {
        if cands >> (d - 1) & 1 == 1 {
            grid.set(row, col, Some(d));
            complete_all(grid, count);
            grid.set(row, col, None);
        }
    }
}

/// Uniformly-ish random complete grid: most-constrained-cell backtracking
/// with shuffled digit order, restarting if a search exceeds its node budget.
fn random_complete(n: u32, rng: &mut ChaCha8Rng) -> SudokuGrid {
    loop {
        let mut grid = SudokuGrid::empty(n);
        let mut budget = 200_000u64;
        if fill(&mut grid, rng, &mut budget) {
            return grid;
        }
    }
}

fn fill(grid: &mut SudokuGrid, rng: &mut ChaCha8Rng, budget: &mut u64) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let Some((row, col, cands)) = grid.select_cell() else {
        return true;
    };
    let mut digits: Vec<u8> = (1..=grid.n as u8).filter(|d| cands >> (d - 1) & 1 == 1).collect();
    digits.shuffle(rng);
    for d in digits {
        grid.set(row, col, Some(d));
        if fill(grid, rng, budget) {
            return true;
        }
        grid.set(row, col, None);
    }
    false
}

pub fn gen_sudoku(n: u32, k: u32, seed: u64) -> Instance {
    assert!(k <= n * n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solution = random_complete(n, &mut rng);
    let mut picks = rand::seq::index::sample(&mut rng, (n * n) as usize, k as usize).into_vec();
    picks.sort_unstable();

    let s = box_side(n);
    let var = |row: u32, col: u32, d: u32| -> Var { (row * n + col) * n + d };
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for row in 0..n {
        for col in 0..n {
            clauses.push((1..=n).map(|d| Literal::new(var(row, col, d), true)).collect());
            for d1 in 1..=n {
                for d2 in d1 + 1..=n {
                    clauses.push(vec![
                        Literal::new(var(row, col, d1), false),
                        Literal::new(var(row, col, d2), false),
                    ]);
                }
            }
        }
    }
    for row in 0..n {
        for d in 1..=n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    clauses.push(vec![
                        Literal::new(var(row, c1, d), false),
                        Literal::new(var(row, c2, d), false),
                    ]);
                }
            }
        }
    }
    for col in 0..n {
        for d in 1..=n {
            for r1 in 0..n {
                for r2 in r1 + 1..n {
                    clauses.push(vec![
                        Literal::new(var(r1, col, d), false),
                        Literal::new(var(r2, col, d), false),
                    ]);
                }
            }
        }
    }
    for br in (0..n).step_by(s as usize) {
        for bc in (0..n).step_by(s as usize) {
            let members: Vec<(u32, u32)> = (br..br + s)
                .flat_map(|r| (bc..bc + s).map(move |c| (r, c)))
                .collect();
            for d in 1..=n {
                for (i, &(r1, c1)) in members.iter().enumerate() {
                    for &(r2, c2) in &members[i + 1..] {
                        if r1 == r2 || c1 == c2 {
                            continue;
                        }
                        clauses.push(vec![
                            Literal::new(var(r1, c1, d), false),
                            Literal::new(var(r2, c2, d), false),
                        ]);
                    }
                }
            }
        }
    }
    for idx in picks {
        let (row, col) = (idx as u32 / n, idx as u32 % n);
        let d = u32::from(solution.get(row, col).unwrap());
        clauses.push(vec![Literal::new(var(row, col, d), true)]);
    }

    Instance {
        formula: CnfFormula::new(n * n * n, clauses),
        family: Family::Sudoku { n, k },
        seed,
        oracle_count: None,
    }
}

/// Reads the revealed cells back out of an instance's unit clauses. All
/// structural clauses have length >= 2, so units are exactly the reveals.
pub fn reveals_of(formula: &CnfFormula, n: u32) -> SudokuGrid {
    let mut grid = SudokuGrid::empty(n);
    for clause in formula.clauses() {
        if let [lit] = clause.literals() {
            assert!(lit.is_positive());
            let v = lit.var() - 1;
            let d = (v % n) as u8 + 1;
            grid.cells[(v / n) as usize] = Some(d);
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_relsat, OccurrenceHeuristic, SolveLimits};
    use crate::formula::serialize_dimacs;
    use num_traits::One;

    fn cnf_count(inst: &Instance) -> BigUint {
        count_relsat(
            &inst.formula,
            &mut OccurrenceHeuristic,
            &SolveLimits::default(),
        )
        .count
    }

    #[test]
    fn fully_revealed_grid_counts_one() {
        let inst = gen_sudoku(4, 16, 3);
        assert!(cnf_count(&inst).is_one());
        let revealed = reveals_of(&inst.formula, 4);
        assert!(revealed.cells.iter().all(Option::is_some));
        assert!(revealed.is_consistent());
        assert!(sudoku_oracle_count(&revealed).is_one());
    }

    #[test]
    fn empty_4x4_has_288_solutions() {
        assert_eq!(sudoku_oracle_count(&SudokuGrid::empty(4)), BigUint::from(288u32));
        let inst = gen_sudoku(4, 0, 0);
        assert_eq!(cnf_count(&inst), BigUint::from(288u32));
    }

    #[test]
    fn cnf_count_matches_backtracking_oracle() {
        for seed in 0..4 {
            let inst = gen_sudoku(4, 6, seed);
            let revealed = reveals_of(&inst.formula, 4);
            assert_eq!(
                cnf_count(&inst),
                sudoku_oracle_count(&revealed),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn nine_by_nine_with_many_reveals_matches_oracle() {
        let inst = gen_sudoku(9, 70, 1);
        let revealed = reveals_of(&inst.formula, 9);
        assert_eq!(cnf_count(&inst), sudoku_oracle_count(&revealed));
    }

    #[test]
    fn contradictory_reveal_counts_zero() {
        let mut grid = SudokuGrid::empty(4);
        grid.set(0, 0, Some(1));
        grid.set(0, 3, Some(1));
        assert!(!grid.is_consistent());
        assert!(sudoku_oracle_count(&grid).is_zero());
    }

    #[test]
    fn generated_solutions_are_valid_grids() {
        for n in [4, 9] {
            for seed in 0..3 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let grid = random_complete(n, &mut rng);
                assert!(grid.cells.iter().all(Option::is_some));
                assert!(grid.is_consistent(), "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn sixteen_by_sixteen_generation_is_feasible() {
        let inst = gen_sudoku(16, 120, 5);
        assert_eq!(inst.formula.num_vars(), 16 * 16 * 16);
        let revealed = reveals_of(&inst.formula, 16);
        assert_eq!(revealed.cells.iter().filter(|c| c.is_some()).count(), 120);
        assert!(revealed.is_consistent());
    }

    #[test]
    fn fixed_seed_reproduces_instance_bytes() {
        let a = serialize_dimacs(&gen_sudoku(4, 5, 21).formula);
        let b = serialize_dimacs(&gen_sudoku(4, 5, 21).formula);
        assert_eq!(a, b);
        assert_ne!(a, serialize_dimacs(&gen_sudoku(4, 5, 22).formula));
    }
}
