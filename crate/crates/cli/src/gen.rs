//! Instance generation: one DIMACS file per instance plus a manifest.

use crate::manifest::{family_params, write_manifest, ManifestRow};
use anyhow::{bail, Context};
use clap::{Args, Subcommand};
use countess::formula::serialize_dimacs;
use countess::generators::{
    arith_oracle_count, cell_oracle_count, gen_arith, gen_cell, gen_grid, gen_sudoku,
    reveals_of, sample_sentence, sudoku_oracle_count, CellRule, Instance,
};
use std::fs;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: GenFamily,
}

#[derive(Args, Debug)]
pub struct GenShared {
    /// Instances to generate; seeds run from --seed upward.
    #[arg(long, default_value_t = 10)]
    pub count: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Compute each instance's ground-truth count with the family oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Fraction of instances marked as the test split (the tail).
    #[arg(long, default_value_t = 0.1)]
    pub test_frac: f64,
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    Cell {
        #[arg(long)]
        rule: u8,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        shared: GenShared,
    },
    Grid {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        shared: GenShared,
    },
    Sudoku {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        shared: GenShared,
    },
    Arith {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        w: u32,
        #[command(flatten)]
        shared: GenShared,
    },
}

impl GenFamily {
    fn shared(&self) -> &GenShared {
        match self {
            GenFamily::Cell { shared, .. }
            | GenFamily::Grid { shared, .. }
            | GenFamily::Sudoku { shared, .. }
            | GenFamily::Arith { shared, .. } => shared,
        }
    }

    fn build(&self, seed: u64) -> anyhow::Result<Instance> {
        Ok(match *self {
            GenFamily::Cell { rule, n, r, .. } => gen_cell(CellRule(rule), n, r, seed),
            GenFamily::Grid { s, t, .. } => gen_grid(s, t, seed)?,
            GenFamily::Sudoku { n, k, .. } => gen_sudoku(n, k, seed),
            GenFamily::Arith { n, d, w, .. } => gen_arith(n, d, w, seed),
        })
    }

    /// Fills `oracle_count` from the family's domain oracle, enforcing the
    /// oracles' enumeration limits up front.
    fn attach_oracle(&self, instance: &mut Instance, seed: u64) -> anyhow::Result<()> {
        match *self {
            GenFamily::Cell { rule, n, r, .. } => {
                if n > 20 {
                    bail!("cell oracle enumerates 2^n initial states; n must be <= 20");
                }
                instance.oracle_count = Some(cell_oracle_count(CellRule(rule), n, r, seed));
            }
            GenFamily::Grid { .. } => {} // the DP oracle is attached at generation
            GenFamily::Sudoku { n, .. } => {
                if n > 9 {
                    bail!("sudoku oracle backtracks; n must be <= 9");
                }
                let revealed = reveals_of(&instance.formula, n);
                instance.oracle_count = Some(sudoku_oracle_count(&revealed));
            }
            GenFamily::Arith { n, d, w, .. } => {
                if n * w > 20 {
                    bail!("arith oracle enumerates 2^(n*w) inputs; n*w must be <= 20");
                }
                instance.oracle_count = Some(arith_oracle_count(&sample_sentence(n, d, w, seed)));
            }
        }
        Ok(())
    }
}

pub fn cmd_gen(args: &GenArgs) -> anyhow::Result<i32> {
    let shared = args.family.shared();
    if !(0.0..=1.0).contains(&shared.test_frac) {
        bail!("--test-frac must be within [0, 1]");
    }
    fs::create_dir_all(&shared.out)
        .with_context(|| format!("creating {}", shared.out.display()))?;
    let n_test = (f64::from(shared.count) * shared.test_frac).round() as u32;

    let mut rows = Vec::with_capacity(shared.count as usize);
    for i in 0..shared.count {
        let seed = shared.seed + u64::from(i);
        let mut instance = args.family.build(seed)?;
        if shared.oracle {
            args.family.attach_oracle(&mut instance, seed)?;
        }
        let file = format!("{}.cnf", instance.file_stem());
        fs::write(shared.out.join(&file), serialize_dimacs(&instance.formula))?;
        rows.push(ManifestRow {
            file,
            family: instance.family.name().to_string(),
            params: family_params(&instance.family),
            seed,
            split: if i < shared.count - n_test { "train" } else { "test" }.to_string(),
            oracle_count: instance.oracle_count.map(|c| c.to_str_radix(10)),
        });
    }
    write_manifest(&shared.out.join("manifest.jsonl"), &rows)?;
    eprintln!(
        "wrote {} instances and manifest.jsonl to {}",
        rows.len(),
        shared.out.display()
    );
    Ok(0)
}
