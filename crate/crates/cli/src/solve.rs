//! Single-file solving and the engine/heuristic wiring shared with eval.

use crate::{EXIT_ABORTED, EXIT_SOLVED};
use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use countess::counting::{
    count_cdp, count_relsat, count_sharp, BranchingHeuristic, ComponentCache, CountResult,
    OccurrenceHeuristic, RandomHeuristic, SolveLimits,
};
use countess::formula::{parse_dimacs, CnfFormula};
use countess::generators::oracle_count;
use countess::policy::{load_params, GnnPolicy, PolicyParams};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Cdp,
    Relsat,
    Sharp,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Cdp => "cdp",
            EngineKind::Relsat => "relsat",
            EngineKind::Sharp => "sharp",
        })
    }
}

impl FromStr for EngineKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<EngineKind> {
        match s {
            "cdp" => Ok(EngineKind::Cdp),
            "relsat" => Ok(EngineKind::Relsat),
            "sharp" => Ok(EngineKind::Sharp),
            _ => bail!("unknown engine {s:?} (expected cdp, relsat or sharp)"),
        }
    }
}

/// `occ`, `random`, or `policy:<param file>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeuristicSpec {
    Occ,
    Random,
    Policy(PathBuf),
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicSpec::Occ => f.write_str("occ"),
            HeuristicSpec::Random => f.write_str("random"),
            HeuristicSpec::Policy(p) => write!(f, "policy:{}", p.display()),
        }
    }
}

impl FromStr for HeuristicSpec {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> anyhow::Result<HeuristicSpec> {
        match s {
            "occ" => Ok(HeuristicSpec::Occ),
            "random" => Ok(HeuristicSpec::Random),
            _ => match s.strip_prefix("policy:") {
                Some(path) if !path.is_empty() => Ok(HeuristicSpec::Policy(path.into())),
                _ => bail!("unknown heuristic {s:?} (expected occ, random or policy:<file>)"),
            },
        }
    }
}

/// A heuristic spec with any parameter file already read, so eval can stamp
/// out per-instance heuristics without touching the disk again.
pub enum LoadedHeuristic {
    Occ,
    Random,
    Policy(PolicyParams),
}

impl LoadedHeuristic {
    pub fn load(spec: &HeuristicSpec) -> anyhow::Result<LoadedHeuristic> {
        Ok(match spec {
            HeuristicSpec::Occ => LoadedHeuristic::Occ,
            HeuristicSpec::Random => LoadedHeuristic::Random,
            HeuristicSpec::Policy(path) => LoadedHeuristic::Policy(
                load_params(path).with_context(|| format!("loading {}", path.display()))?,
            ),
        })
    }

    /// Instantiates the heuristic for one formula. `seed` feeds the random
    /// heuristic only.
    pub fn instantiate(
        &self,
        formula: &CnfFormula,
        seed: u64,
    ) -> anyhow::Result<Box<dyn BranchingHeuristic>> {
        Ok(match self {
            LoadedHeuristic::Occ => Box::new(OccurrenceHeuristic),
            LoadedHeuristic::Random => Box::new(RandomHeuristic::new(seed)),
            LoadedHeuristic::Policy(params) => {
                let policy = GnnPolicy::new(params.clone());
                policy.check_formula(formula)?;
                Box::new(policy)
            }
        })
    }
}

pub fn run_engine(
    engine: EngineKind,
    formula: &CnfFormula,
    heuristic: &mut dyn BranchingHeuristic,
    limits: &SolveLimits,
    cache_entries: Option<usize>,
) -> CountResult {
    match engine {
        EngineKind::Cdp => count_cdp(formula, heuristic, limits),
        EngineKind::Relsat => count_relsat(formula, heuristic, limits),
        EngineKind::Sharp => {
            let mut cache = ComponentCache::with_capacity(cache_entries);
            count_sharp(formula, heuristic, &mut cache, limits)
        }
    }
}

pub fn read_formula(path: &Path) -> anyhow::Result<CnfFormula> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// DIMACS CNF file.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = EngineKind::Sharp)]
    pub engine: EngineKind,
    /// occ, random, or policy:<param file>.
    #[arg(long, default_value = "occ")]
    pub heuristic: HeuristicSpec,
    /// Abort after this many decisions.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Component cache entry limit (sharp only; default unbounded).
    #[arg(long)]
    pub cache_entries: Option<usize>,
    /// Seed for the random heuristic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn cmd_solve(args: &SolveArgs) -> anyhow::Result<i32> {
    let formula = read_formula(&args.file)?;
    let loaded = LoadedHeuristic::load(&args.heuristic)?;
    let mut heuristic = loaded.instantiate(&formula, args.seed)?;
    let limits = match args.cap {
        Some(cap) => SolveLimits::capped(cap),
        None => SolveLimits::default(),
    };
    let start = Instant::now();
    let result = run_engine(
        args.engine,
        &formula,
        heuristic.as_mut(),
        &limits,
        args.cache_entries,
    );
    println!("{}", result.record_json(start.elapsed().as_secs_f64()));
    Ok(if result.solved() { EXIT_SOLVED } else { EXIT_ABORTED })
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// DIMACS CNF file (24 variables at most).
    pub file: PathBuf,
}

pub fn cmd_oracle(args: &OracleArgs) -> anyhow::Result<i32> {
    let formula = read_formula(&args.file)?;
    let count = oracle_count(&formula)?;
    println!("{{\"count\":\"{}\"}}", count.to_str_radix(10));
    Ok(EXIT_SOLVED)
}
