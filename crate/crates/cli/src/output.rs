use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use pennerlab::curves::CurveSystem;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// sha256 of the canonical JSON of a curve system.
pub fn system_hash(sys: &CurveSystem) -> Result<String> {
    let bytes = serde_json::to_vec(sys)?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

#[derive(Serialize)]
struct Envelope<'a, C, R> {
    config: &'a C,
    input_sha256: &'a str,
    status: &'a str,
    result: &'a R,
}

pub fn json_document<C: Serialize, R: Serialize>(config: &C, hash: &str, status: &str, result: &R) -> Result<String> {
    let env = Envelope { config, input_sha256: hash, status, result };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

/// CSV body preceded by `#` lines carrying the config and input hash.
pub fn csv_document<C: Serialize>(config: &C, hash: &str, csv: &str) -> Result<String> {
    Ok(format!("# config={}\n# input_sha256={hash}\n{csv}", serde_json::to_string(config)?))
}

/// Writes to `out` via a temporary file in the same directory, or to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let Some(path) = out else {
        std::io::stdout().write_all(text.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
