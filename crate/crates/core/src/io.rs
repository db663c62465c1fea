//! Deterministic data export: CSV tables and a JSON run manifest, written
//! atomically (temp file in the target directory, then rename). Numbers are
//! formatted with 17 significant digits so round-tripping is lossless and
//! byte-identical across runs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ResolvedConfig;
use crate::driver::EvolutionRecord;
use crate::error::{Error, Result};
use crate::quasiprob::QuasiprobGrid;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Record of one CLI run: the command, the fully resolved configuration,
/// and the artifacts it produced. Every CSV references this file, and the
/// manifest round-trips losslessly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: ResolvedConfig,
    pub artifacts: Vec<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, config: ResolvedConfig, artifacts: Vec<String>) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            artifacts,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InternalConsistency(format!("manifest serialization: {e}")))?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("manifest parse: {e}")))
    }
}

/// 17 significant digits, locale independent.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_optional(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_g17(x),
        None => "undefined".to_string(),
    }
}

/// Write `content` to `dir/name` atomically.
pub fn write_atomic(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, content.as_bytes())?;
    let target = dir.join(name);
    tmp.persist(&target).map_err(|e| Error::Io(e.error))?;
    Ok(target)
}

fn manifest_reference() -> String {
    format!("# manifest: {MANIFEST_NAME}\n")
}

/// evolution.csv: one diagnostics row per atom count, starting at N = 0.
/// A field with no photons has no Mandel Q; the column says "undefined".
pub fn evolution_csv(record: &EvolutionRecord) -> String {
    let mut out = manifest_reference();
    out.push_str("N,zeta,mean_n,mandel_q\n");
    for row in &record.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n_atoms,
            fmt_g17(row.purity_deficit),
            fmt_g17(row.mean_n),
            fmt_optional(row.mandel_q)
        ));
    }
    out
}

/// pn_N<k>.csv: photon-number distribution snapshot after k atoms.
pub fn snapshot_csv(probs: &[f64]) -> String {
    let mut out = manifest_reference();
    out.push_str("n,p_n\n");
    for (n, p) in probs.iter().enumerate() {
        out.push_str(&format!("{},{}\n", n, fmt_g17(*p)));
    }
    out
}

/// sweep.csv: final diagnostics per transit time, sorted by transit time.
pub fn sweep_csv(rows: &[crate::driver::SweepRow]) -> String {
    let mut out = manifest_reference();
    out.push_str("lambda_t,zeta_final,mean_n_final\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_g17(row.lambda_t),
            fmt_g17(row.zeta_final),
            fmt_g17(row.mean_n_final)
        ));
    }
    out
}

/// grid.csv: quasiprobability lattice in row-major order, real axis
/// outermost.
pub fn grid_csv(grid: &QuasiprobGrid) -> String {
    let mut out = manifest_reference();
    out.push_str("re_beta,im_beta,value\n");
    for i in 0..grid.spec.n_re {
        let re = grid.spec.re_point(i);
        for j in 0..grid.spec.n_im {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_g17(re),
                fmt_g17(grid.spec.im_point(j)),
                fmt_g17(grid.value(i, j))
            ));
        }
    }
    out
}
