use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ldpc::{LdpcCode, RandomCodeParams, RepetitionCode};
use crate::modem::Constellation;
use crate::{Error, Result};

/// Where a parity-check matrix comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSource {
    Generated {
        n: usize,
        m: usize,
        col_degree: usize,
        seed: u64,
    },
    Alist {
        path: PathBuf,
    },
}

impl CodeSource {
    pub fn build(&self, base_dir: &Path) -> Result<LdpcCode> {
        match self {
            CodeSource::Generated {
                n,
                m,
                col_degree,
                seed,
            } => LdpcCode::generate(&RandomCodeParams {
                n: *n,
                m: *m,
                col_degree: *col_degree,
                seed: *seed,
            }),
            CodeSource::Alist { path } => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full).map_err(|e| Error::Io {
                    path: full.display().to_string(),
                    message: e.to_string(),
                })?;
                LdpcCode::from_alist(&text)
            }
        }
    }

    /// Rewrites a relative alist path against `base_dir`.
    pub fn absolutize(&mut self, base_dir: &Path) {
        if let CodeSource::Alist { path } = self {
            if path.is_relative() {
                let joined = base_dir.join(&*path);
                *path = std::fs::canonicalize(&joined).unwrap_or(joined);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterCodeConfig {
    pub base: CodeSource,
    pub rep_factor: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    /// Stop a grid point once this many frames had an error on either stream.
    pub min_frame_errors: u64,
    /// Hard cap on frames per grid point.
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 50,
            max_frames: 1_000_000,
        }
    }
}

/// How the receiver forms the rotation estimate from the outer decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterRebuild {
    /// Re-encode the decoded info bits and repeat.
    Reencode,
    /// Use the decoder's hard decision on the base code bits directly.
    Direct,
}

/// Declarative description of one simulated system. Every field has a
/// default so config files only need to name what they change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub inner_code: CodeSource,
    pub outer_code: OuterCodeConfig,
    pub es: f64,
    pub esn0_grid_db: Vec<f64>,
    pub max_iter: usize,
    pub stop: StopRule,
    pub seed: u64,
    pub genie_beta: bool,
    pub outer_rebuild: OuterRebuild,
}

impl Default for SystemConfig {
    /// Desk-scale system: inner regular (3,6) code, n = 4032, rate 1/2;
    /// outer rate-1/3 code, n = 1008, repeated 4× (rate 1/12, n = 4032).
    fn default() -> Self {
        SystemConfig {
            inner_code: CodeSource::Generated {
                n: 4032,
                m: 2016,
                col_degree: 3,
                seed: 1,
            },
            outer_code: OuterCodeConfig {
                base: CodeSource::Generated {
                    n: 1008,
                    m: 672,
                    col_degree: 3,
                    seed: 2,
                },
                rep_factor: 4,
            },
            es: 1.0,
            esn0_grid_db: vec![-2.5, -2.0, -1.5, -1.0, -0.5, 0.0],
            max_iter: 50,
            stop: StopRule::default(),
            seed: 2024,
            genie_beta: false,
            outer_rebuild: OuterRebuild::Reencode,
        }
    }
}

impl SystemConfig {
    /// Field-level checks that do not need the codes built.
    pub fn validate(&self) -> Result<()> {
        if !(self.es > 0.0 && self.es.is_finite()) {
            return Err(Error::config(
                "es",
                format!("must be positive, got {}", self.es),
            ));
        }
        if self.esn0_grid_db.is_empty() {
            return Err(Error::config("esn0_grid_db", "must not be empty"));
        }
        if let Some(x) = self.esn0_grid_db.iter().find(|x| !x.is_finite()) {
            return Err(Error::config(
                "esn0_grid_db",
                format!("non-finite entry {x}"),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter", "must be at least 1"));
        }
        if self.stop.min_frame_errors == 0 {
            return Err(Error::config("stop.min_frame_errors", "must be at least 1"));
        }
        if self.stop.max_frames == 0 {
            return Err(Error::config("stop.max_frames", "must be at least 1"));
        }
        if self.outer_code.rep_factor == 0 {
            return Err(Error::config("outer_code.rep_factor", "must be at least 1"));
        }
        Ok(())
    }
}

/// A [`SystemConfig`] with its codes built and cross-checked.
#[derive(Clone, Debug)]
pub struct System {
    cfg: SystemConfig,
    inner: Arc<LdpcCode>,
    outer: RepetitionCode,
    cst: Constellation,
}

impl System {
    pub fn build(cfg: SystemConfig) -> Result<Self> {
        Self::build_in(cfg, Path::new("."))
    }

    /// Resolves relative alist paths against `base_dir`.
    pub fn build_in(cfg: SystemConfig, base_dir: &Path) -> Result<Self> {
        cfg.validate()?;
        let inner = Arc::new(
            cfg.inner_code
                .build(base_dir)
                .map_err(|e| Error::config("inner_code", e.to_string()))?,
        );
        let base = Arc::new(
            cfg.outer_code
                .base
                .build(base_dir)
                .map_err(|e| Error::config("outer_code.base", e.to_string()))?,
        );
        let outer = RepetitionCode::new(base, cfg.outer_code.rep_factor)?;
        if outer.n_encoded() != inner.n_code() {
            return Err(Error::config(
                "outer_code",
                format!(
                    "encoded length {} x {} = {} must equal the inner code length {}",
                    outer.base().n_code(),
                    outer.rep_factor(),
                    outer.n_encoded(),
                    inner.n_code()
                ),
            ));
        }
        let cst = Constellation::new(cfg.es);
        Ok(System {
            cfg,
            inner,
            outer,
            cst,
        })
    }

    /// Builds a system from already constructed codes, bypassing
    /// [`CodeSource`]. The config's code fields are kept only for reporting.
    pub fn from_codes(
        cfg: SystemConfig,
        inner: Arc<LdpcCode>,
        outer: RepetitionCode,
    ) -> Result<Self> {
        cfg.validate()?;
        if outer.n_encoded() != inner.n_code() {
            return Err(Error::config(
                "outer_code",
                format!(
                    "encoded length {} must equal the inner code length {}",
                    outer.n_encoded(),
                    inner.n_code()
                ),
            ));
        }
        let cst = Constellation::new(cfg.es);
        Ok(System {
            cfg,
            inner,
            outer,
            cst,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn inner(&self) -> &LdpcCode {
        &self.inner
    }

    pub fn outer(&self) -> &RepetitionCode {
        &self.outer
    }

    pub fn constellation(&self) -> &Constellation {
        &self.cst
    }

    /// Symbols per frame.
    pub fn frame_len(&self) -> usize {
        self.inner.n_code()
    }

    pub fn r1(&self) -> f64 {
        self.inner.rate()
    }

    pub fn r2(&self) -> f64 {
        self.outer.rate()
    }

    /// Spectral efficiency of the two-stream system.
    pub fn eta(&self) -> f64 {
        crate::capacity::eta_total(self.r1(), self.r2())
    }

    /// Spectral efficiency of BPSK with the inner code alone.
    pub fn eta_baseline(&self) -> f64 {
        self.r1()
    }

    /// With modified configuration fields that do not touch the codes.
    pub fn with_config(&self, f: impl FnOnce(&mut SystemConfig)) -> Result<Self> {
        let mut cfg = self.cfg.clone();
        f(&mut cfg);
        if cfg.inner_code != self.cfg.inner_code || cfg.outer_code != self.cfg.outer_code {
            return Err(Error::config(
                "inner_code",
                "codes cannot change in with_config",
            ));
        }
        Self::from_codes(cfg, self.inner.clone(), self.outer.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemConfig {
        SystemConfig {
            inner_code: CodeSource::Generated {
                n: 96,
                m: 48,
                col_degree: 3,
                seed: 1,
            },
            outer_code: OuterCodeConfig {
                base: CodeSource::Generated {
                    n: 24,
                    m: 16,
                    col_degree: 3,
                    seed: 2,
                },
                rep_factor: 4,
            },
            ..SystemConfig::default()
        }
    }

    #[test]
    fn validation_names_fields() {
        let mut cfg = small();
        cfg.es = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "es"));
        let mut cfg = small();
        cfg.esn0_grid_db.clear();
        assert!(
            matches!(System::build(cfg), Err(Error::Config { field, .. }) if field == "esn0_grid_db")
        );
        let mut cfg = small();
        cfg.stop.max_frames = 0;
        assert!(
            matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "stop.max_frames")
        );
    }

    #[test]
    fn length_mismatch_rejected() {
        let mut cfg = small();
        cfg.outer_code.rep_factor = 3;
        let err = System::build(cfg).unwrap_err();
        assert!(
            matches!(err, Error::Config { ref field, .. } if field == "outer_code"),
            "{err}"
        );
    }

    #[test]
    fn rates_and_eta() {
        let sys = System::build(small()).unwrap();
        assert_eq!(sys.r1(), 0.5);
        assert!((sys.r2() - 1.0 / 12.0).abs() < 1e-15);
        assert!((sys.eta() - 7.0 / 12.0).abs() < 1e-15);
        assert_eq!(sys.eta_baseline(), 0.5);
    }

    #[test]
    fn missing_alist_reports_path() {
        let mut cfg = small();
        cfg.inner_code = CodeSource::Alist {
            path: "does/not/exist.alist".into(),
        };
        let err = System::build(cfg).unwrap_err();
        assert!(err.to_string().contains("exist.alist"), "{err}");
    }
}
