//! Batch driver: a JSON config in, a versioned JSON report and its text
//! rendering out.

mod commands;
pub mod config;
pub mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub use config::{Command, RunConfig};
pub use report::{Report, Status, Table, SCHEMA};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Config(String),
    Inconsistent(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 3,
            Failure::Inconsistent(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Inconsistent(m) => write!(f, "inconsistent: {m}"),
        }
    }
}

impl From<sseq_core::Error> for Failure {
    fn from(e: sseq_core::Error) -> Self {
        use sseq_core::Error::*;
        match e {
            InvalidInstance(_) | OutOfWindow(_) | WindowTooSmall(_) | Parse(_) => Failure::Config(e.to_string()),
            _ => Failure::Inconsistent(e.to_string()),
        }
    }
}

/// Cache key: engine version, schema, command and the canonical config.
pub fn config_hash(command: Command, cfg: &RunConfig) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update([0]);
    h.update(SCHEMA.as_bytes());
    h.update([0]);
    h.update(command.name().as_bytes());
    h.update([0]);
    h.update(cfg.canonical().as_bytes());
    format!("{:x}", h.finalize())
}

/// Runs a validated config in memory. An inconsistency becomes a report
/// with that status.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Report, Failure> {
    cfg.validate(command)?;
    let hash = config_hash(command, cfg);
    match commands::execute(command, cfg, &hash) {
        Ok(r) => Ok(r),
        Err(Failure::Inconsistent(why)) => {
            let mut r = Report::new(command.name(), &hash, "-");
            r.raise(Status::Inconsistent);
            r.note(why);
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub from_cache: bool,
    pub json_path: PathBuf,
    pub text_path: PathBuf,
}

fn io(what: &str, path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{what} {}: {e}", path.display()))
}

fn write(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| io("cannot write", path, e))
}

/// Reads the config, reuses `out/cache/<hash>` when present, and writes
/// `out/<command>.json` and `out/<command>.txt`.
pub fn run(command: Command, config: &Path, out: &Path) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(config).map_err(|e| io("cannot read", config, e))?;
    let cfg = RunConfig::parse(&text)?;
    cfg.validate(command)?;
    let hash = config_hash(command, &cfg);
    let cache = out.join("cache").join(&hash);
    let cached = cache.join("report.json");
    let hit = fs::read_to_string(&cached).ok().and_then(|s| Report::from_json(&s).ok()).filter(|r| r.config_hash == hash);
    let from_cache = hit.is_some();
    let report = match hit {
        Some(r) => r,
        None => execute(command, &cfg)?,
    };
    fs::create_dir_all(&cache).map_err(|e| io("cannot create", &cache, e))?;
    let json = report.to_json();
    if !from_cache {
        write(&cached, &json)?;
        write(&cache.join("config.json"), &(cfg.canonical() + "\n"))?;
    }
    let json_path = out.join(format!("{}.json", command.name()));
    let text_path = out.join(format!("{}.txt", command.name()));
    write(&json_path, &json)?;
    write(&text_path, &report.to_text())?;
    Ok(Outcome { report, from_cache, json_path, text_path })
}
