//! The ES training loop.
//!
//! Each iteration draws a formula batch and mirrored Gaussian directions from
//! an iteration-indexed RNG stream (so iteration i's randomness depends only
//! on the seed and i, which is what makes checkpoint resume exact), evaluates
//! every offspring on the same batch, rank-normalizes the fitnesses, and
//! applies the estimated gradient with Adam. Offspring evaluations run in
//! parallel; everything they produce is reduced in offspring-index order, so
//! results do not depend on the worker count.

use super::adam::AdamState;
use super::episode::run_episode;
use super::es::{es_gradient, rank_normalize};
use crate::formula::CnfFormula;
use crate::policy::{read_params, write_params, ParamFileError, PolicyConfig, PolicyParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsConfig {
    pub sigma: f64,
    /// Directions per iteration; mirroring doubles this into the offspring
    /// count.
    pub n_directions: usize,
    /// Formulas drawn per fitness evaluation.
    pub batch_size: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub train_step_cap: u64,
    pub eval_step_cap: u64,
    pub r_penalty: f64,
    pub iterations: u64,
    pub seed: u64,
}

impl Default for EsConfig {
    fn default() -> Self {
        EsConfig {
            sigma: 0.02,
            n_directions: 48,
            batch_size: 8,
            lr: 0.01,
            weight_decay: 0.005,
            train_step_cap: 1_000,
            eval_step_cap: 100_000,
            r_penalty: -1e-4,
            iterations: 1_000,
            seed: 0,
        }
    }
}

impl EsConfig {
    fn assert_valid(&self) {
        assert!(self.sigma > 0.0, "sigma must be positive");
        assert!(self.n_directions >= 1);
        assert!(self.batch_size >= 1);
        assert!(self.train_step_cap >= 1 && self.eval_step_cap >= 1);
    }
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationLog {
    pub iter: u64,
    /// Mean and max offspring fitness.
    pub mean_fitness: f64,
    pub max_fitness: f64,
    /// Mean decisions per episode across all offspring episodes.
    pub mean_decisions: f64,
    pub solved_frac: f64,
    pub wall_seconds: f64,
}

pub struct Trainer {
    config: EsConfig,
    policy_config: PolicyConfig,
    theta: Vec<f64>,
    adam: AdamState,
    iter: u64,
}

impl Trainer {
    /// Fresh trainer; initial parameters are drawn from the ES seed.
    pub fn new(policy_config: PolicyConfig, config: EsConfig) -> Trainer {
        config.assert_valid();
        Trainer::from_params(PolicyParams::init(policy_config, config.seed), config)
    }

    pub fn from_params(params: PolicyParams, config: EsConfig) -> Trainer {
        config.assert_valid();
        let theta = params.flatten();
        let len = theta.len();
        Trainer {
            config,
            policy_config: params.config,
            theta,
            adam: AdamState::new(len),
            iter: 0,
        }
    }

    pub fn params(&self) -> PolicyParams {
        PolicyParams::unflatten(&self.theta, self.policy_config).expect("theta length is fixed")
    }

    pub fn config(&self) -> &EsConfig {
        &self.config
    }

    /// Completed iterations so far.
    pub fn iteration(&self) -> u64 {
        self.iter
    }

    fn iteration_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        // Stream 0 initialized the parameters; iterations get their own.
        rng.set_stream(self.iter + 1);
        rng
    }

    /// Runs one ES iteration against `dataset`.
    pub fn step(&mut self, dataset: &[CnfFormula]) -> IterationLog {
        assert!(!dataset.is_empty(), "training needs at least one formula");
        let start = Instant::now();
        let cfg = &self.config;
        let mut rng = self.iteration_rng();

        // Draw order is pinned: batch indices first, then the directions.
        let batch: Vec<&CnfFormula> =
            rand::seq::index::sample(&mut rng, dataset.len(), cfg.batch_size.min(dataset.len()))
                .into_iter()
                .map(|i| &dataset[i])
                .collect();
        let dim = self.theta.len();
        let directions: Vec<Vec<f64>> = (0..cfg.n_directions)
            .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();

        let theta = &self.theta;
        let policy_config = self.policy_config;
        let evals: Vec<(f64, u64, u64)> = (0..2 * cfg.n_directions)
            .into_par_iter()
            .map(|o| {
                let eps = &directions[o / 2];
                let sign = if o % 2 == 0 { 1.0 } else { -1.0 };
                let offspring: Vec<f64> = theta
                    .iter()
                    .zip(eps)
                    .map(|(t, e)| t + sign * cfg.sigma * e)
                    .collect();
                let params = PolicyParams::unflatten(&offspring, policy_config)
                    .expect("offspring length matches");
                let mut reward_sum = 0.0;
                let mut decisions = 0u64;
                let mut solved = 0u64;
                for f in &batch {
                    let trace = run_episode(f, &params, cfg.r_penalty, cfg.train_step_cap);
                    reward_sum += trace.reward;
                    decisions += trace.decisions;
                    solved += u64::from(trace.solved);
                }
                (reward_sum / batch.len() as f64, decisions, solved)
            })
            .collect();

        let fitnesses: Vec<f64> = evals.iter().map(|e| e.0).collect();
        let weights = rank_normalize(&fitnesses);
        let g = es_gradient(&directions, &weights, cfg.sigma);
        self.adam
            .step(&mut self.theta, &g, cfg.lr, cfg.weight_decay);

        let episodes = (evals.len() * batch.len()) as f64;
        let log = IterationLog {
            iter: self.iter,
            mean_fitness: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
            max_fitness: fitnesses.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
            mean_decisions: evals.iter().map(|e| e.1).sum::<u64>() as f64 / episodes,
            solved_frac: evals.iter().map(|e| e.2).sum::<u64>() as f64 / episodes,
            wall_seconds: start.elapsed().as_secs_f64(),
        };
        self.iter += 1;
        log
    }

    /// Runs the remaining iterations (up to `config.iterations`), invoking
    /// `on_iteration` after each one.
    pub fn train<F: FnMut(&Trainer, &IterationLog)>(
        &mut self,
        dataset: &[CnfFormula],
        mut on_iteration: F,
    ) -> Vec<IterationLog> {
        let mut logs = Vec::new();
        while self.iter < self.config.iterations {
            let log = self.step(dataset);
            on_iteration(self, &log);
            logs.push(log);
        }
        logs
    }

    /// Checkpoint: the parameter file with iteration counter and Adam state
    /// appended (same little-endian conventions).
    pub fn save_checkpoint(&self, path: &Path) -> Result<(), ParamFileError> {
        let mut w = BufWriter::new(File::create(path)?);
        write_params(&mut w, &self.params())?;
        w.write_all(&self.iter.to_le_bytes())?;
        w.write_all(&self.adam.t.to_le_bytes())?;
        for x in self.adam.m.iter().chain(&self.adam.v) {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load_checkpoint(path: &Path, config: EsConfig) -> Result<Trainer, ParamFileError> {
        config.assert_valid();
        let mut r = BufReader::new(File::open(path)?);
        let params = read_params(&mut r)?;
        let theta = params.flatten();
        let iter = read_u64(&mut r)?;
        let t = read_u64(&mut r)?;
        let mut read_vec = |n: usize| -> std::io::Result<Vec<f64>> {
            let mut buf = vec![0u8; n * 8];
            r.read_exact(&mut buf)?;
            Ok(buf
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect())
        };
        let m = read_vec(theta.len())?;
        let v = read_vec(theta.len())?;
        Ok(Trainer {
            config,
            policy_config: params.config,
            theta,
            adam: AdamState { m, v, t },
            iter,
        })
    }
}

fn read_u64<R: Read>(r: &mut R) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}
