//! Engine x heuristic evaluation over a manifest split, emitting records,
//! summary, cactus and (for cell datasets) heatmap CSVs.

use crate::manifest::{read_manifest, select_split};
use crate::solve::{read_formula, run_engine, EngineKind, HeuristicSpec, LoadedHeuristic};
use anyhow::{bail, Context};
use clap::Args;
use countess::counting::{CountResult, SolveLimits};
use countess::formula::CnfFormula;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated engines (cdp, relsat, sharp).
    #[arg(long, default_value = "sharp", value_delimiter = ',')]
    pub engines: Vec<EngineKind>,
    /// Comma-separated heuristics (occ, random, policy:<file>).
    #[arg(long, default_value = "occ", value_delimiter = ',')]
    pub heuristics: Vec<HeuristicSpec>,
    /// Decision cap per instance.
    #[arg(long, default_value_t = 100_000)]
    pub cap: u64,
    /// Manifest split to evaluate: train, test or all.
    #[arg(long, default_value = "test")]
    pub split: String,
    /// Also write heatmap.csv (requires coord-annotated instances).
    #[arg(long)]
    pub heatmap: bool,
    /// Base seed for the random heuristic (instance index is added).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record real wall-clock seconds (off keeps outputs byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

pub struct EvalRecord {
    pub file: String,
    pub engine: String,
    pub heuristic: String,
    pub result: CountResult,
    pub wall_seconds: f64,
}

impl EvalRecord {
    fn config(&self) -> String {
        format!("{}+{}", self.engine, self.heuristic)
    }
}

pub const RECORDS_HEADER: &str =
    "file,engine,heuristic,count,decisions,conflicts,cache_lookups,cache_hits,aborted,wall_seconds";

pub fn records_csv(records: &[EvalRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.6}\n",
            r.file,
            r.engine,
            r.heuristic,
            r.result.count.to_str_radix(10),
            r.result.decisions,
            r.result.conflicts,
            r.result.cache_lookups,
            r.result.cache_hits,
            r.result.aborted,
            r.wall_seconds,
        ));
    }
    out
}

/// Per-configuration aggregates, in first-appearance order.
pub fn summary_csv(records: &[EvalRecord]) -> String {
    let mut order: Vec<String> = Vec::new();
    let mut acc: BTreeMap<String, (u64, u64, u64)> = BTreeMap::new();
    for r in records {
        let key = r.config();
        if !acc.contains_key(&key) {
            order.push(key.clone());
        }
        let slot = acc.entry(key).or_insert((0, 0, 0));
        slot.0 += r.result.decisions;
        slot.1 += u64::from(r.result.solved());
        slot.2 += 1;
    }
    let mut out = String::from("config,instances,mean_decisions,solved_frac\n");
    for key in order {
        let (dec, solved, n) = acc[&key];
        out.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            key,
            n,
            dec as f64 / n as f64,
            solved as f64 / n as f64,
        ));
    }
    out
}

/// Sorted per-instance decision counts per configuration; aborted runs sit
/// at the cap value with the flag set.
pub fn cactus_csv(records: &[EvalRecord]) -> String {
    let mut by_config: Vec<(String, Vec<(u64, bool)>)> = Vec::new();
    for r in records {
        let key = r.config();
        let entry = (r.result.decisions, r.result.aborted);
        match by_config.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(entry),
            None => by_config.push((key, vec![entry])),
        }
    }
    let mut out = String::from("config,solve_index,decisions,aborted\n");
    for (config, mut rows) in by_config {
        rows.sort();
        for (i, (decisions, aborted)) in rows.into_iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", config, i + 1, decisions, aborted));
        }
    }
    out
}

/// Normalized first-decision step per coord-annotated variable of one run:
/// step/decisions for branched variables, sentinel 1.0 for variables the
/// solver never branched on.
pub fn normalized_first_decisions(
    result: &CountResult,
    formula: &CnfFormula,
) -> Vec<((u32, u32), f64)> {
    let mut out = Vec::new();
    for v in 1..=formula.num_vars() {
        let Some(coord) = formula.coord(v) else {
            continue;
        };
        let value = match result.per_var_first_decision.get(&v) {
            Some(&step) => step as f64 / result.decisions as f64,
            None => 1.0,
        };
        out.push((coord, value));
    }
    out
}

/// Mean normalized first-decision step per (row, col), per configuration.
pub fn heatmap_csv(samples: &[(String, Vec<((u32, u32), f64)>)]) -> String {
    let mut out = String::from("config,row,col,mean_first_decision\n");
    let mut order: Vec<&str> = Vec::new();
    for (config, _) in samples {
        if !order.contains(&config.as_str()) {
            order.push(config);
        }
    }
    for config in order {
        let mut acc: BTreeMap<(u32, u32), (f64, u32)> = BTreeMap::new();
        for (_, values) in samples.iter().filter(|(c, _)| c == config) {
            for &(coord, value) in values {
                let slot = acc.entry(coord).or_insert((0.0, 0));
                slot.0 += value;
                slot.1 += 1;
            }
        }
        for ((row, col), (sum, n)) in acc {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                config,
                row,
                col,
                sum / f64::from(n)
            ));
        }
    }
    out
}

pub fn cmd_eval(args: &EvalArgs) -> anyhow::Result<i32> {
    let rows = read_manifest(&args.manifest)?;
    let selected = select_split(&rows, &args.split);
    if selected.is_empty() {
        bail!("manifest has no {} split rows", args.split);
    }
    if args.heatmap {
        if let Some(row) = selected.iter().find(|r| r.family != "cell") {
            bail!(
                "heatmap needs coord annotations, which only the cell family has (found {})",
                row.family
            );
        }
    }
    let dir = args.manifest.parent().unwrap_or(Path::new("."));
    let formulas: Vec<(String, CnfFormula)> = selected
        .iter()
        .map(|row| Ok((row.file.clone(), read_formula(&dir.join(&row.file))?)))
        .collect::<anyhow::Result<_>>()?;

    let limits = SolveLimits::capped(args.cap);
    let mut records: Vec<EvalRecord> = Vec::new();
    let mut heat_samples: Vec<(String, Vec<((u32, u32), f64)>)> = Vec::new();
    for &engine in &args.engines {
        for spec in &args.heuristics {
            let loaded = LoadedHeuristic::load(spec)?;
            let mut batch: Vec<EvalRecord> = formulas
                .par_iter()
                .enumerate()
                .map(|(i, (file, formula))| {
                    let mut h = loaded.instantiate(formula, args.seed + i as u64)?;
                    let start = Instant::now();
                    let result = run_engine(engine, formula, h.as_mut(), &limits, None);
                    Ok(EvalRecord {
                        file: file.clone(),
                        engine: engine.to_string(),
                        heuristic: spec.to_string(),
                        result,
                        wall_seconds: if args.timing {
                            start.elapsed().as_secs_f64()
                        } else {
                            0.0
                        },
                    })
                })
                .collect::<anyhow::Result<_>>()?;
            if args.heatmap {
                for (record, (_, formula)) in batch.iter().zip(&formulas) {
                    heat_samples.push((
                        record.config(),
                        normalized_first_decisions(&record.result, formula),
                    ));
                }
            }
            records.append(&mut batch);
        }
    }

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    fs::write(args.out.join("records.csv"), records_csv(&records))?;
    fs::write(args.out.join("summary.csv"), summary_csv(&records))?;
    fs::write(args.out.join("cactus.csv"), cactus_csv(&records))?;
    if args.heatmap {
        fs::write(args.out.join("heatmap.csv"), heatmap_csv(&heat_samples))?;
    }
    eprintln!(
        "evaluated {} runs over {} instances; CSVs in {}",
        records.len(),
        formulas.len(),
        args.out.display()
    );
    Ok(0)
}
