//! The JSON-lines manifest tying generated files to their parameters.

use anyhow::Context;
use countess::generators::Family;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRow {
    pub file: String,
    pub family: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub split: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<String>,
}

pub fn family_params(family: &Family) -> serde_json::Value {
    match *family {
        Family::Cell { rule, n, r } => json!({"rule": rule, "n": n, "r": r}),
        Family::Grid { s, t } => json!({"s": s, "t": t}),
        Family::Sudoku { n, k } => json!({"n": n, "k": k}),
        Family::Arith { n, d, w } => json!({"n": n, "d": d, "w": w}),
    }
}

pub fn write_manifest(path: &Path, rows: &[ManifestRow]) -> anyhow::Result<()> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row)?);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> anyhow::Result<Vec<ManifestRow>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).with_context(|| format!("bad manifest row: {l}")))
        .collect()
}

/// Rows belonging to a `--split` selection (train, test or all).
pub fn select_split<'a>(rows: &'a [ManifestRow], split: &str) -> Vec<&'a ManifestRow> {
    rows.iter()
        .filter(|r| split == "all" || r.split == split)
        .collect()
}
