//! Policy architecture configuration and the parameter container.
//!
//! Sizes are fixed: 32-wide embeddings, literal-to-clause message MLP
//! 64x32x32, clause-to-literal 32x32x32, decision MLP 32x256x64x1 (33-wide
//! input with the time feature, 1-wide in the time-only ablation), optional
//! score-feature MLP 2x32x32 replacing the shared initial literal embedding.
//! The flat vector layout is what ES perturbs and what the parameter file
//! stores; `flatten`/`unflatten` are exact inverses.

use super::mlp::Mlp;
use crate::formula::Var;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const EMBED_DIM: usize = 32;
pub const MSG_HIDDEN: usize = 32;
pub const DECISION_HIDDEN1: usize = 256;
pub const DECISION_HIDDEN2: usize = 64;
pub const SCORE_HIDDEN: usize = 32;

#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("parameter vector has length {got}, architecture needs {expected}")]
    FlatLengthMismatch { got: usize, expected: usize },
    #[error("time feature enabled but variable {0} has no time annotation")]
    MissingTime(Var),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConfig {
    /// Message passing rounds K.
    pub iterations: u32,
    /// Append the per-variable time annotation to the decision input.
    pub use_time: bool,
    /// Replace the shared initial literal embedding with a learned function
    /// of normalized occurrence counts.
    pub use_score_feature: bool,
    /// Ablation: skip message passing entirely and score each variable from
    /// its time annotation alone. Implies `use_time`.
    pub time_only: bool,
    /// Initial value for every GIN epsilon (each is trainable afterwards).
    pub gin_epsilon_init: f64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            iterations: 2,
            use_time: false,
            use_score_feature: false,
            time_only: false,
            gin_epsilon_init: 0.0,
        }
    }
}

impl PolicyConfig {
    pub fn time_only() -> PolicyConfig {
        PolicyConfig {
            use_time: true,
            time_only: true,
            ..PolicyConfig::default()
        }
    }

    pub fn assert_valid(&self) {
        assert!(!self.time_only || self.use_time, "time_only implies use_time");
        assert!(
            !(self.time_only && self.use_score_feature),
            "time_only bypasses the GNN, so the score feature has nothing to feed"
        );
        assert!(self.iterations >= 1 || self.time_only, "need at least one round");
    }

    pub fn decision_input_dim(&self) -> usize {
        if self.time_only {
            1
        } else if self.use_time {
            EMBED_DIM + 1
        } else {
            EMBED_DIM
        }
    }

    fn decision_dims(&self) -> [usize; 4] {
        [self.decision_input_dim(), DECISION_HIDDEN1, DECISION_HIDDEN2, 1]
    }

    pub fn flat_len(&self) -> usize {
        self.assert_valid();
        let mlp_len = |dims: &[usize]| -> usize {
            dims.windows(2).map(|d| d[0] * d[1] + d[1]).sum()
        };
        let mut total = mlp_len(&self.decision_dims());
        if !self.time_only {
            total += EMBED_DIM; // h0_clause
            if self.use_score_feature {
                total += mlp_len(&[2, SCORE_HIDDEN, EMBED_DIM]);
            } else {
                total += EMBED_DIM; // h0_literal
            }
            let per_round = mlp_len(&[2 * EMBED_DIM, MSG_HIDDEN, EMBED_DIM])
                + mlp_len(&[EMBED_DIM, MSG_HIDDEN, EMBED_DIM])
                + 2; // the two epsilons
            total += per_round * self.iterations as usize;
        }
        total
    }
}

/// One round of message passing.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundParams {
    /// Literal-to-clause message MLP (64x32x32); the clause's own embedding
    /// is zero-padded to the 64-wide concatenated-pair space.
    pub clause_update: Mlp,
    /// Clause-to-literal message MLP (32x32x32).
    pub literal_update: Mlp,
    pub eps_clause: f64,
    pub eps_literal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyParams {
    pub config: PolicyConfig,
    /// Shared initial literal embedding; absent when the score feature or the
    /// time-only ablation replaces it.
    pub h0_literal: Option<Vec<f64>>,
    /// Shared initial clause embedding; absent in time-only mode.
    pub h0_clause: Option<Vec<f64>>,
    pub rounds: Vec<RoundParams>,
    pub decision: Mlp,
    pub score_mlp: Option<Mlp>,
}

impl PolicyParams {
    /// All-zero parameters (every score comes out equal; useful as a neutral
    /// baseline and in tests).
    pub fn zeros(config: PolicyConfig) -> PolicyParams {
        config.assert_valid();
        let gnn = !config.time_only;
        PolicyParams {
            config,
            h0_literal: (gnn && !config.use_score_feature).then(|| vec![0.0; EMBED_DIM]),
            h0_clause: gnn.then(|| vec![0.0; EMBED_DIM]),
            rounds: if gnn {
                (0..config.iterations)
                    .map(|_| RoundParams {
                        clause_update: Mlp::zeros(&[2 * EMBED_DIM, MSG_HIDDEN, EMBED_DIM]),
                        literal_update: Mlp::zeros(&[EMBED_DIM, MSG_HIDDEN, EMBED_DIM]),
                        eps_clause: config.gin_epsilon_init,
                        eps_literal: config.gin_epsilon_init,
                    })
                    .collect()
            } else {
                Vec::new()
            },
            decision: Mlp::zeros(&config.decision_dims()),
            score_mlp: (gnn && config.use_score_feature)
                .then(|| Mlp::zeros(&[2, SCORE_HIDDEN, EMBED_DIM])),
        }
    }

    /// Random initialization: Glorot-uniform weight matrices, zero biases,
    /// uniform +-1/sqrt(dim) initial embeddings, epsilons from the config.
    /// Draws happen in flat layout order, so the result is reproducible.
    pub fn init(config: PolicyConfig, seed: u64) -> PolicyParams {
        let mut params = PolicyParams::zeros(config);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fill_h0 = |v: &mut Vec<f64>, rng: &mut ChaCha8Rng| {
            let limit = 1.0 / (v.len() as f64).sqrt();
            for x in v.iter_mut() {
                *x = rng.random_range(-limit..limit);
            }
        };
        fn fill_mlp(mlp: &mut Mlp, rng: &mut ChaCha8Rng) {
            for layer in &mut mlp.layers {
                let limit = (6.0 / (layer.in_dim + layer.out_dim) as f64).sqrt();
                for w in layer.w.iter_mut() {
                    *w = rng.random_range(-limit..limit);
                }
                // biases stay zero
            }
        }
        if let Some(h) = params.h0_literal.as_mut() {
            fill_h0(h, &mut rng);
        }
        if let Some(h) = params.h0_clause.as_mut() {
            fill_h0(h, &mut rng);
        }
        for round in &mut params.rounds {
            fill_mlp(&mut round.clause_update, &mut rng);
            fill_mlp(&mut round.literal_update, &mut rng);
        }
        fill_mlp(&mut params.decision, &mut rng);
        if let Some(s) = params.score_mlp.as_mut() {
            fill_mlp(s, &mut rng);
        }
        params
    }

    pub fn flat_len(&self) -> usize {
        self.config.flat_len()
    }

    /// Serializes every parameter into one vector: h0_literal, h0_clause,
    /// rounds (clause MLP, literal MLP, eps_clause, eps_literal), decision
    /// MLP, score MLP; matrices row-major, weights before biases per layer.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.flat_len());
        let push_mlp = |out: &mut Vec<f64>, mlp: &Mlp| {
            for layer in &mlp.layers {
                out.extend_from_slice(&layer.w);
                out.extend_from_slice(&layer.b);
            }
        };
        if let Some(h) = &self.h0_literal {
            out.extend_from_slice(h);
        }
        if let Some(h) = &self.h0_clause {
            out.extend_from_slice(h);
        }
        for round in &self.rounds {
            push_mlp(&mut out, &round.clause_update);
            push_mlp(&mut out, &round.literal_update);
            out.push(round.eps_clause);
            out.push(round.eps_literal);
        }
        push_mlp(&mut out, &self.decision);
        if let Some(s) = &self.score_mlp {
            push_mlp(&mut out, s);
        }
        debug_assert_eq!(out.len(), self.flat_len());
        out
    }

    pub fn unflatten(flat: &[f64], config: PolicyConfig) -> Result<PolicyParams, PolicyError> {
        let expected = config.flat_len();
        if flat.len() != expected {
            return Err(PolicyError::FlatLengthMismatch {
                got: flat.len(),
                expected,
            });
        }
        struct Cursor<'a> {
            flat: &'a [f64],
            pos: usize,
        }
        impl<'a> Cursor<'a> {
            fn take(&mut self, n: usize) -> &'a [f64] {
                let s = &self.flat[self.pos..self.pos + n];
                self.pos += n;
                s
            }
            fn read_mlp(&mut self, mlp: &mut Mlp) {
                for layer in &mut mlp.layers {
                    let (w, b) = (layer.w.len(), layer.b.len());
                    layer.w.copy_from_slice(self.take(w));
                    layer.b.copy_from_slice(self.take(b));
                }
            }
        }
        let mut params = PolicyParams::zeros(config);
        let mut cur = Cursor { flat, pos: 0 };
        if let Some(h) = params.h0_literal.as_mut() {
            h.copy_from_slice(cur.take(EMBED_DIM));
        }
        if let Some(h) = params.h0_clause.as_mut() {
            h.copy_from_slice(cur.take(EMBED_DIM));
        }
        for round in &mut params.rounds {
            cur.read_mlp(&mut round.clause_update);
            cur.read_mlp(&mut round.literal_update);
            round.eps_clause = cur.take(1)[0];
            round.eps_literal = cur.take(1)[0];
        }
        cur.read_mlp(&mut params.decision);
        if let Some(s) = params.score_mlp.as_mut() {
            cur.read_mlp(s);
        }
        debug_assert_eq!(cur.pos, expected);
        Ok(params)
    }
}
