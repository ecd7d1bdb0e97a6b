//! ES training over a manifest's train split.

use crate::manifest::{read_manifest, select_split};
use crate::solve::read_formula;
use anyhow::{bail, Context};
use clap::Args;
use countess::formula::CnfFormula;
use countess::policy::{save_params, PolicyConfig};
use countess::training::{EsConfig, IterationLog, Trainer};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 48)]
    pub directions: usize,
    #[arg(long, default_value_t = 8)]
    pub batch: usize,
    #[arg(long, default_value_t = 0.02)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.005)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 1000)]
    pub train_cap: u64,
    #[arg(long, default_value_t = -1e-4)]
    pub r_penalty: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// GNN message-passing rounds.
    #[arg(long, default_value_t = 2)]
    pub rounds: u32,
    /// Append the normalized time annotation to the decision features.
    #[arg(long)]
    pub use_time: bool,
    /// Score variables from the time annotation alone (implies --use-time).
    #[arg(long)]
    pub time_only: bool,
    /// Add the occurrence-profile score feature.
    #[arg(long)]
    pub score_feature: bool,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon_init: f64,
    /// Write a resumable checkpoint every this many iterations (0 = never).
    #[arg(long, default_value_t = 100)]
    pub checkpoint_every: u64,
    /// Record real wall-clock seconds in the log (off keeps logs
    /// byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

impl TrainArgs {
    pub fn policy_config(&self) -> PolicyConfig {
        PolicyConfig {
            iterations: self.rounds,
            use_time: self.use_time || self.time_only,
            use_score_feature: self.score_feature,
            time_only: self.time_only,
            gin_epsilon_init: self.epsilon_init,
        }
    }

    pub fn es_config(&self) -> EsConfig {
        EsConfig {
            sigma: self.sigma,
            n_directions: self.directions,
            batch_size: self.batch,
            lr: self.lr,
            weight_decay: self.weight_decay,
            train_step_cap: self.train_cap,
            r_penalty: self.r_penalty,
            iterations: self.iterations,
            seed: self.seed,
            ..EsConfig::default()
        }
    }
}

pub const TRAIN_LOG_HEADER: &str =
    "iter,mean_fitness,max_fitness,mean_decisions,solved_frac,wall_seconds";

pub fn train_log_row(log: &IterationLog, timing: bool) -> String {
    format!(
        "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
        log.iter,
        log.mean_fitness,
        log.max_fitness,
        log.mean_decisions,
        log.solved_frac,
        if timing { log.wall_seconds } else { 0.0 },
    )
}

/// Loads the formulas of a manifest split, resolving files against the
/// manifest's directory.
pub fn load_split(manifest: &Path, split: &str) -> anyhow::Result<Vec<(String, CnfFormula)>> {
    let rows = read_manifest(manifest)?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    select_split(&rows, split)
        .into_iter()
        .map(|row| Ok((row.file.clone(), read_formula(&dir.join(&row.file))?)))
        .collect()
}

pub fn cmd_train(args: &TrainArgs) -> anyhow::Result<i32> {
    let dataset: Vec<CnfFormula> = load_split(&args.manifest, "train")?
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    if dataset.is_empty() {
        bail!("manifest has no train split rows");
    }
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let mut trainer = Trainer::new(args.policy_config(), args.es_config());
    let mut log_file = fs::File::create(args.out.join("train_log.csv"))?;
    writeln!(log_file, "{TRAIN_LOG_HEADER}")?;
    let checkpoint_path = args.out.join("checkpoint.bin");
    let mut result: anyhow::Result<()> = Ok(());
    trainer.train(&dataset, |tr, log| {
        if result.is_err() {
            return;
        }
        result = (|| {
            writeln!(log_file, "{}", train_log_row(log, args.timing))?;
            if args.checkpoint_every > 0 && (log.iter + 1) % args.checkpoint_every == 0 {
                tr.save_checkpoint(&checkpoint_path)?;
            }
            Ok(())
        })();
    });
    result?;
    save_params(&args.out.join("params.bin"), &trainer.params())?;
    eprintln!(
        "trained {} iterations; params.bin and train_log.csv in {}",
        trainer.iteration(),
        args.out.display()
    );
    Ok(0)
}
