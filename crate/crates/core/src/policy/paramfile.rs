//! Binary parameter files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic "NSHP" | version u32 | K u32 | flags u32 | n_dims u32 | dims u32 x n_dims
//! | flat_len u64 | flat data f64 x flat_len
//! ```
//!
//! Flags: bit 0 = use_time, bit 1 = use_score_feature, bit 2 = time_only.
//! The dims block pins the architecture widths (embedding, message hidden,
//! decision hidden 1 and 2, score hidden) so a file built against different
//! compiled-in sizes is rejected instead of silently misread. The flat data
//! is the `flatten` layout, which already contains the trained epsilons.

use super::params::{
    PolicyConfig, PolicyParams, DECISION_HIDDEN1, DECISION_HIDDEN2, EMBED_DIM, MSG_HIDDEN,
    SCORE_HIDDEN,
};
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

pub const PARAM_MAGIC: [u8; 4] = *b"NSHP";
pub const PARAM_VERSION: u32 = 1;

const FLAG_USE_TIME: u32 = 1;
const FLAG_SCORE_FEATURE: u32 = 2;
const FLAG_TIME_ONLY: u32 = 4;

const DIMS: [u32; 5] = [
    EMBED_DIM as u32,
    MSG_HIDDEN as u32,
    DECISION_HIDDEN1 as u32,
    DECISION_HIDDEN2 as u32,
    SCORE_HIDDEN as u32,
];

#[derive(Debug, Error)]
pub enum ParamFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a parameter file (bad magic)")]
    BadMagic,
    #[error("unsupported parameter file version {0}")]
    UnsupportedVersion(u32),
    #[error("parameter file architecture mismatch: {0}")]
    ArchitectureMismatch(String),
    #[error("invalid config flags {0:#x}")]
    BadFlags(u32),
    #[error("flat vector length {got} does not match config ({expected})")]
    LengthMismatch { got: u64, expected: u64 },
}

fn config_flags(config: &PolicyConfig) -> u32 {
    let mut flags = 0;
    if config.use_time {
        flags |= FLAG_USE_TIME;
    }
    if config.use_score_feature {
        flags |= FLAG_SCORE_FEATURE;
    }
    if config.time_only {
        flags |= FLAG_TIME_ONLY;
    }
    flags
}

pub fn write_params<W: Write>(w: &mut W, params: &PolicyParams) -> io::Result<()> {
    let config = &params.config;
    w.write_all(&PARAM_MAGIC)?;
    w.write_all(&PARAM_VERSION.to_le_bytes())?;
    w.write_all(&config.iterations.to_le_bytes())?;
    w.write_all(&config_flags(config).to_le_bytes())?;
    w.write_all(&(DIMS.len() as u32).to_le_bytes())?;
    for d in DIMS {
        w.write_all(&d.to_le_bytes())?;
    }
    let flat = params.flatten();
    w.write_all(&(flat.len() as u64).to_le_bytes())?;
    for x in flat {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_params<R: Read>(r: &mut R) -> Result<PolicyParams, ParamFileError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != PARAM_MAGIC {
        return Err(ParamFileError::BadMagic);
    }
    let version = read_u32(r)?;
    if version != PARAM_VERSION {
        return Err(ParamFileError::UnsupportedVersion(version));
    }
    let iterations = read_u32(r)?;
    let flags = read_u32(r)?;
    if flags & !(FLAG_USE_TIME | FLAG_SCORE_FEATURE | FLAG_TIME_ONLY) != 0 {
        return Err(ParamFileError::BadFlags(flags));
    }
    let n_dims = read_u32(r)?;
    if n_dims != DIMS.len() as u32 {
        return Err(ParamFileError::ArchitectureMismatch(format!(
            "{n_dims} dims in file, {} compiled in",
            DIMS.len()
        )));
    }
    for (i, expected) in DIMS.iter().enumerate() {
        let got = read_u32(r)?;
        if got != *expected {
            return Err(ParamFileError::ArchitectureMismatch(format!(
                "dim {i} is {got} in file, {expected} compiled in"
            )));
        }
    }
    let config = PolicyConfig {
        iterations,
        use_time: flags & FLAG_USE_TIME != 0,
        use_score_feature: flags & FLAG_SCORE_FEATURE != 0,
        time_only: flags & FLAG_TIME_ONLY != 0,
        gin_epsilon_init: 0.0, // only used at init; trained values are in the data
    };
    if config.time_only && !config.use_time {
        return Err(ParamFileError::BadFlags(flags));
    }
    let flat_len = read_u64(r)?;
    let expected = config.flat_len() as u64;
    if flat_len != expected {
        return Err(ParamFileError::LengthMismatch {
            got: flat_len,
            expected,
        });
    }
    let mut buf = vec![0u8; flat_len as usize * 8];
    r.read_exact(&mut buf)?;
    let flat: Vec<f64> = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(PolicyParams::unflatten(&flat, config).expect("length checked above"))
}

pub fn save_params(path: &Path, params: &PolicyParams) -> Result<(), ParamFileError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_params(&mut w, params)?;
    w.flush()?;
    Ok(())
}

pub fn load_params(path: &Path) -> Result<PolicyParams, ParamFileError> {
    read_params(&mut BufReader::new(File::open(path)?))
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}
