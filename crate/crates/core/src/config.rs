//! Run configuration shared by the library pipeline and the CLI.

use crate::error::{Error, Result};
use crate::wenum::{OuterConfig, SearchConfig, DEFAULT_GUARD_LIMIT};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Bumped whenever a default changes.
pub const CONFIG_VERSION: u32 = 1;

/// Every tunable of a run. Missing fields in a config file take the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Step of the `delta` scan.
    pub grid_step: f64,
    /// Right end of the scanned range.
    pub delta_upper: f64,
    pub bisect_tol: f64,
    /// Certificate threshold: some grid point must have `r < -tol_neg`.
    pub tol_neg: f64,
    /// Random starts of the outer search, on top of the structured ones.
    pub random_starts: usize,
    pub max_outer_iter: usize,
    pub lambda_max: usize,
    /// Leveling threshold on consecutive bounds.
    pub level_tol: f64,
    /// Cap on node-weight assignments for exact enumeration.
    pub guard_limit: u128,
    pub seed: u64,
    /// Admit cuts that leave a row of `P_l` empty (`xi_1 = 0`) in bound sweeps.
    pub allow_empty_lower_rows: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SearchConfig::default();
        Self {
            version: CONFIG_VERSION,
            grid_step: s.grid_step,
            delta_upper: s.upper,
            bisect_tol: s.bisect_tol,
            tol_neg: s.tol_neg,
            random_starts: s.outer.random_starts,
            max_outer_iter: s.outer.max_iter,
            lambda_max: 8,
            level_tol: 1e-3,
            guard_limit: DEFAULT_GUARD_LIMIT,
            seed: 7,
            allow_empty_lower_rows: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::InvalidArgument(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.lambda_max == 0 {
            return Err(Error::InvalidArgument("lambda_max must be positive".into()));
        }
        if !(self.level_tol > 0.0) {
            return Err(Error::InvalidArgument("level_tol must be positive".into()));
        }
        if self.guard_limit == 0 {
            return Err(Error::InvalidArgument(
                "guard_limit must be positive".into(),
            ));
        }
        self.search().validate()
    }

    pub fn search(&self) -> SearchConfig {
        let d = OuterConfig::default();
        SearchConfig {
            grid_step: self.grid_step,
            upper: self.delta_upper,
            bisect_tol: self.bisect_tol,
            tol_neg: self.tol_neg,
            outer: OuterConfig {
                random_starts: self.random_starts,
                seed: self.seed,
                max_iter: self.max_outer_iter,
                ..d
            },
        }
    }

    /// Reads a JSON config file; absent fields keep their defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
            Error::Parse(format!(
                "{}:{}:{}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}
