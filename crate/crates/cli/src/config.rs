//! Run configuration: defaults, then the config file, then the environment,
//! then command-line flags. The merged configuration is echoed into every
//! report for provenance.

use crate::RunFlags;
use orliczkit_core::{Error, LogGrid};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Deserialize, Default)]
struct FileConfig {
    grid_points: Option<usize>,
    grid_lo: Option<f64>,
    grid_hi: Option<f64>,
    threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid_points: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub threads: usize,
}

impl RunConfig {
    pub fn assemble(flags: &RunFlags) -> Result<Self, Error> {
        let defaults = LogGrid::default();
        let mut cfg = RunConfig {
            grid_points: defaults.points,
            grid_lo: defaults.lo,
            grid_hi: defaults.hi,
            threads: 1,
        };
        if let Some(path) = &flags.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let file: FileConfig = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("malformed config {}: {e}", path.display())))?;
            if let Some(v) = file.grid_points {
                cfg.grid_points = v;
            }
            if let Some(v) = file.grid_lo {
                cfg.grid_lo = v;
            }
            if let Some(v) = file.grid_hi {
                cfg.grid_hi = v;
            }
            if let Some(v) = file.threads {
                cfg.threads = v;
            }
        }
        if let Ok(t) = std::env::var("ORLICZKIT_THREADS") {
            cfg.threads = t
                .parse()
                .map_err(|_| Error::Config(format!("ORLICZKIT_THREADS='{t}' is not a count")))?;
        }
        if let Some(v) = flags.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = flags.grid_lo {
            cfg.grid_lo = v;
        }
        if let Some(v) = flags.grid_hi {
            cfg.grid_hi = v;
        }
        if let Some(v) = flags.threads {
            cfg.threads = v;
        }
        if cfg.grid_points < 3 {
            return Err(Error::Config("grid needs at least 3 points".into()));
        }
        if !(cfg.grid_lo > 0.0 && cfg.grid_hi > cfg.grid_lo) {
            return Err(Error::Config(format!(
                "grid range must satisfy 0 < lo < hi, got [{}, {}]",
                cfg.grid_lo, cfg.grid_hi
            )));
        }
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<LogGrid, Error> {
        LogGrid::new(self.grid_lo, self.grid_hi, self.grid_points)
    }

    /// Result-relevant configuration only: the worker count cannot change
    /// any output byte and is deliberately left out, so serial and parallel
    /// runs compare byte-identical.
    pub fn echo(&self) -> Value {
        json!({
            "grid_points": self.grid_points,
            "grid_lo": self.grid_lo,
            "grid_hi": self.grid_hi,
        })
    }
}
