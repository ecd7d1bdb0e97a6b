//! Random bit-vector sentence counting.
//!
//! A sentence compares two expression trees over n unsigned w-bit variables
//! with wraparound arithmetic. The circuit is Tseitin-encoded: input bits
//! come first (bit b of variable i is CNF variable i*w + b + 1, LSB first),
//! every gate output gets a fresh auxiliary variable defined by biconditional
//! clauses, and the comparison's output literal is asserted as a unit. Each
//! auxiliary is a function of the inputs, so the model count equals the
//! number of satisfying input vectors.

use super::{Family, Instance};
use crate::formula::{CnfFormula, Literal, Var};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    And,
    Or,
    Xor,
    AbsDiff,
}

const OPS: [Op; 6] = [Op::Add, Op::Sub, Op::And, Op::Or, Op::Xor, Op::AbsDiff];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(u32),
    Const(u64),
    Not(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
    Ne,
}

const CMPS: [CmpOp; 6] = [CmpOp::Le, CmpOp::Ge, CmpOp::Lt, CmpOp::Gt, CmpOp::Eq, CmpOp::Ne];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithSentence {
    pub n: u32,
    pub w: u32,
    pub cmp: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

fn mask(w: u32) -> u64 {
    if w == 64 { u64::MAX } else { (1 << w) - 1 }
}

fn eval_expr(e: &Expr, inputs: &[u64], w: u32) -> u64 {
    let m = mask(w);
    match e {
        Expr::Var(i) => inputs[*i as usize] & m,
        Expr::Const(c) => c & m,
        Expr::Not(a) => !eval_expr(a, inputs, w) & m,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval_expr(a, inputs, w), eval_expr(b, inputs, w));
            match op {
                Op::Add => x.wrapping_add(y) & m,
                Op::Sub => x.wrapping_sub(y) & m,
                Op::And => x & y,
                Op::Or => x | y,
                Op::Xor => x ^ y,
                Op::AbsDiff => x.abs_diff(y),
            }
        }
    }
}

impl ArithSentence {
    pub fn eval(&self, inputs: &[u64]) -> bool {
        let x = eval_expr(&self.lhs, inputs, self.w);
        let y = eval_expr(&self.rhs, inputs, self.w);
        match self.cmp {
            CmpOp::Le => x <= y,
            CmpOp::Ge => x >= y,
            CmpOp::Lt => x < y,
            CmpOp::Gt => x > y,
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
        }
    }

    pub fn encode(&self) -> CnfFormula {
        let (n, w) = (self.n, self.w);
        let mut circ = Circuit {
            next_var: n * w + 1,
            clauses: Vec::new(),
        };
        let lhs = circ.build(&self.lhs, n, w);
        let rhs = circ.build(&self.rhs, n, w);
        let out = match self.cmp {
            CmpOp::Lt => circ.lt(&lhs, &rhs),
            CmpOp::Gt => circ.lt(&rhs, &lhs),
            CmpOp::Ge => {
                let b = circ.lt(&lhs, &rhs);
                not(b)
            }
            CmpOp::Le => {
                let b = circ.lt(&rhs, &lhs);
                not(b)
            }
            CmpOp::Eq => circ.eq(&lhs, &rhs),
            CmpOp::Ne => {
                let b = circ.eq(&lhs, &rhs);
                not(b)
            }
        };
        match out {
            Bit::Const(true) => {}
            Bit::Const(false) => {
                circ.clauses.push(vec![Literal::new(1, true)]);
                circ.clauses.push(vec![Literal::new(1, false)]);
            }
            Bit::Lit(l) => circ.clauses.push(vec![l]),
        }
        CnfFormula::new(circ.next_var - 1, circ.clauses)
    }
}

/// A circuit wire: either settled at build time or a CNF literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bit {
    Const(bool),
    Lit(Literal),
}

fn not(b: Bit) -> Bit {
    match b {
        Bit::Const(v) => Bit::Const(!v),
        Bit::Lit(l) => Bit::Lit(!l),
    }
}

struct Circuit {
    next_var: Var,
    clauses: Vec<Vec<Literal>>,
}

impl Circuit {
    fn fresh(&mut self) -> Literal {
        let v = self.next_var;
        self.next_var += 1;
        Literal::new(v, true)
    }

    /// z <-> a AND b, constant-folded where possible.
    fn and(&mut self, a: Bit, b: Bit) -> Bit {
        match (a, b) {
            (Bit::Const(false), _) | (_, Bit::Const(false)) => Bit::Const(false),
            (Bit::Const(true), x) | (x, Bit::Const(true)) => x,
            (Bit::Lit(p), Bit::Lit(q)) if p == q => a,
            (Bit::Lit(p), Bit::Lit(q)) if p == !q => Bit::Const(false),
            (Bit::Lit(p), Bit::Lit(q)) => {
                let z = self.fresh();
                self.clauses.push(vec![!z, p]);
                self.clauses.push(vec![!z, q]);
                self.clauses.push(vec![z, !p, !q]);
                Bit::Lit(z)
            }
        }
    }

    fn or(&mut self, a: Bit, b: Bit) -> Bit {
        let z = self.and(not(a), not(b));
        not(z)
    }

    /// z <-> a XOR b, constant-folded where possible.
    fn xor(&mut self, a: Bit, b: Bit) -> Bit {
        match (a, b) {
            (Bit::Const(false), x) | (x, Bit::Const(false)) => x,
            (Bit::Const(true), x) | (x, Bit::Const(true)) => not(x),
            (Bit::Lit(p), Bit::Lit(q)) if p == q => Bit::Const(false),
            (Bit::Lit(p), Bit::Lit(q)) if p == !q => Bit::Const(true),
            (Bit::Lit(p), Bit::Lit(q)) => {
                let z = self.fresh();
                self.clauses.push(vec![!z, p, q]);
                self.clauses.push(vec![!z, !p, !q]);
                self.clauses.push(vec![z, !p, q]);
                self.clauses.push(vec![z, p, !q]);
                Bit::Lit(z)
            }
        }
    }

    fn mux(&mut self, sel: Bit, t: Bit, f: Bit) -> Bit {
        let on = self.and(sel, t);
        let off = self.and(not(sel), f);
        self.or(on, off)
    }

    /// Ripple-carry sum of two LSB-first words plus carry-in; returns the
    /// word modulo 2^w and the carry out.
    fn add_full(&mut self, x: &[Bit], y: &[Bit], carry_in: Bit) -> (Vec<Bit>, Bit) {
        let mut carry = carry_in;
        let mut sum = Vec::with_capacity(x.len());
        for (&xb, &yb) in x.iter().zip(y) {
            let half = self.xor(xb, yb);
            sum.push(self.xor(half, carry));
            let gen_c = self.and(xb, yb);
            let prop_c = self.and(half, carry);
            carry = self.or(gen_c, prop_c);
        }
        (sum, carry)
    }

    fn sub(&mut self, x: &[Bit], y: &[Bit]) -> (Vec<Bit>, Bit) {
        let noty: Vec<Bit> = y.iter().map(|&b| not(b)).collect();
        // x + !y + 1 = x - y + 2^w; the carry out is 1 exactly when x >= y.
        self.add_full(x, &noty, Bit::Const(true))
    }

    /// Unsigned x < y (borrow of x - y).
    fn lt(&mut self, x: &[Bit], y: &[Bit]) -> Bit {
        let (_, ge) = self.sub(x, y);
        not(ge)
    }

    fn eq(&mut self, x: &[Bit], y: &[Bit]) -> Bit {
        let mut acc = Bit::Const(true);
        for (&xb, &yb) in x.iter().zip(y) {
            let diff = self.xor(xb, yb);
            acc = self.and(acc, not(diff));
        }
        acc
    }

    fn build(&mut self, e: &Expr, n: u32, w: u32) -> Vec<Bit> {
        match e {
            Expr::Var(i) => {
                assert!(*i < n);
                (0..w)
                    .map(|b| Bit::Lit(Literal::new(i * w + b + 1, true)))
                    .collect()
            }
            Expr::Const(c) => (0..w).map(|b| Bit::Const(c >> b & 1 == 1)).collect(),
            Expr::Not(a) => self.build(a, n, w).into_iter().map(not).collect(),
            Expr::Bin(op, a, b) => {
                let x = self.build(a, n, w);
                let y = self.build(b, n, w);
                match op {
                    Op::Add => self.add_full(&x, &y, Bit::Const(false)).0,
                    Op::Sub => self.sub(&x, &y).0,
                    Op::And => x
                        .iter()
                        .zip(&y)
                        .map(|(&xb, &yb)| self.and(xb, yb))
                        .collect(),
                    Op::Or => x.iter().zip(&y).map(|(&xb, &yb)| self.or(xb, yb)).collect(),
                    Op::Xor => x
                        .iter()
                        .zip(&y)
                        .map(|(&xb, &yb)| self.xor(xb, yb))
                        .collect(),
                    Op::AbsDiff => {
                        let (d1, ge) = self.sub(&x, &y);
                        let (d2, _) = self.sub(&y, &x);
                        d1.iter()
                            .zip(&d2)
                            .map(|(&hi, &lo)| self.mux(ge, hi, lo))
                            .collect()
                    }
                }
            }
        }
    }
}

fn sample_expr(rng: &mut ChaCha8Rng, depth: u32, n: u32, w: u32) -> Expr {
    let leaf = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.7) {
            Expr::Var(rng.random_range(0..n))
        } else {
            Expr::Const(rng.random_range(0..=mask(w)))
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..10u32) {
        0 | 1 => leaf(rng),
        2 => Expr::Not(Box::new(sample_expr(rng, depth - 1, n, w))),
        _ => Expr::Bin(
            OPS[rng.random_range(0..OPS.len())],
            Box::new(sample_expr(rng, depth - 1, n, w)),
            Box::new(sample_expr(rng, depth - 1, n, w)),
        ),
    }
}

pub fn sample_sentence(n: u32, d: u32, w: u32, seed: u64) -> ArithSentence {
    assert!(n >= 1 && d >= 1 && (1..=32).contains(&w));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ArithSentence {
        n,
        w,
        cmp: CMPS[rng.random_range(0..CMPS.len())],
        lhs: sample_expr(&mut rng, d, n, w),
        rhs: sample_expr(&mut rng, d, n, w),
    }
}

pub fn gen_arith(n: u32, d: u32, w: u32, seed: u64) -> Instance {
    Instance {
        formula: sample_sentence(n, d, w, seed).encode(),
        family: Family::Arith { n, d, w },
        seed,
        oracle_count: None,
    }
}

/// Counts satisfying input vectors by direct evaluation of the sentence.
pub fn arith_oracle_count(sentence: &ArithSentence) -> BigUint {
    let bits = sentence.n * sentence.w;
    assert!(bits <= 20, "enumeration is exponential in n*w");
    let m = mask(sentence.w);
    let mut count = BigUint::zero();
    for v in 0u64..1 << bits {
        let inputs: Vec<u64> = (0..sentence.n)
            .map(|i| v >> (i * sentence.w) & m)
            .collect();
        if sentence.eval(&inputs) {
            count += 1u32;
        }
    }
    count
}
