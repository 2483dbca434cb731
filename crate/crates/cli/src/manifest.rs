//! JSON record of a run: everything needed to reproduce its CSV output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use dmm_core::capacity::Modulation;
use dmm_core::simkit::{System, SystemConfig, CSV_SCHEMA_VERSION};
use serde::{Deserialize, Serialize};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Dmm,
    DmmGenie,
    BpskBaseline,
    GenieCompare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunSpec {
    Capacity {
        modulation: Modulation,
        grid_db: Vec<f64>,
        bisect: Vec<f64>,
    },
    Sweep {
        mode: SweepMode,
        config: SystemConfig,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub manifest_schema: u32,
    pub csv_schema: u32,
    pub version: String,
    pub command_line: Vec<String>,
    pub run: RunSpec,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub eta: Option<f64>,
    /// SHA-256 of each parity-check matrix, keyed `inner` / `outer_base`.
    pub code_fingerprints: BTreeMap<String, String>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub outputs: Vec<PathBuf>,
}

pub fn now_unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

pub fn fingerprints(sys: &System) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("inner".to_string(), sys.inner().fingerprint()),
        ("outer_base".to_string(), sys.outer().base().fingerprint()),
    ])
}

impl RunManifest {
    pub fn new(run: RunSpec, workers: Option<usize>, started_unix_ms: u64) -> Self {
        let seed = match &run {
            RunSpec::Sweep { config, .. } => Some(config.seed),
            RunSpec::Capacity { .. } => None,
        };
        RunManifest {
            manifest_schema: MANIFEST_SCHEMA_VERSION,
            csv_schema: CSV_SCHEMA_VERSION,
            version: version(),
            command_line: std::env::args().collect(),
            run,
            seed,
            workers,
            eta: None,
            code_fingerprints: BTreeMap::new(),
            started_unix_ms,
            finished_unix_ms: started_unix_ms,
            outputs: Vec::new(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let m: RunManifest = serde_json::from_str(&text)
            .with_context(|| format!("parsing manifest {}", path.display()))?;
        if m.manifest_schema != MANIFEST_SCHEMA_VERSION {
            bail!(
                "manifest {} has schema {}, this build reads {}",
                path.display(),
                m.manifest_schema,
                MANIFEST_SCHEMA_VERSION
            );
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    /// Rejects a replay whose rebuilt codes differ from the recorded ones.
    pub fn check_fingerprints(&self, sys: &System) -> Result<()> {
        for (name, have) in fingerprints(sys) {
            if let Some(want) = self.code_fingerprints.get(&name) {
                if *want != have {
                    bail!("{name} code fingerprint {have} does not match the manifest's {want}");
                }
            }
        }
        Ok(())
    }
}
