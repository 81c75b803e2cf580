//! Run configuration, read from a TOML key-value file.
//!
//! ```toml
//! M = 100
//! L = 200
//! dt = 0.01
//! T = 25.0
//! scheme = "upwind"        # upwind | fv | lf
//! center_law = "flow"      # flow | scaled | exact  (or "scaled:17/2")
//! lambda = "17/2"          # only for center_law = "scaled"
//! shape = "sphere"         # sphere | prolate | oblate
//! output_every = 25
//! output_dir = "out/testcase1"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::profile::{parse_lambda, CenterLaw, InitialShape};
use crate::schemes::SchemeKind;

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub m: usize,
    pub l: usize,
    pub dt: f64,
    pub t_final: f64,
    pub scheme: SchemeKind,
    pub center_law: CenterLaw,
    pub shape: InitialShape,
    /// Diagnostics are recorded every `output_every` steps (and at the end).
    pub output_every: usize,
    pub output_dir: PathBuf,
    /// Times at which profile snapshots and section curves are written.
    pub snapshot_times: Vec<f64>,
    /// Sample times of the summary table; `None` picks a default for the center law.
    pub table_times: Option<Vec<f64>>,
    pub parallel: bool,
    pub allow_cfl_violation: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 100,
            l: 200,
            dt: 0.01,
            t_final: 25.0,
            scheme: SchemeKind::Upwind,
            center_law: CenterLaw::TransportedByFlow,
            shape: InitialShape::UnitSphere,
            output_every: 25,
            output_dir: PathBuf::from("out"),
            snapshot_times: (0..=8).map(|k| 3.0 * k as f64).collect(),
            table_times: None,
            parallel: false,
            allow_cfl_violation: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<f64> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => parse_lambda(s),
        }
    }
}

/// On-disk layout; every key is optional and falls back to [`RunConfig::default`].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    dt: Option<f64>,
    #[serde(rename = "T")]
    t_final: Option<f64>,
    scheme: Option<String>,
    center_law: Option<String>,
    lambda: Option<Number>,
    shape: Option<String>,
    output_every: Option<usize>,
    output_dir: Option<PathBuf>,
    snapshot_times: Option<Vec<f64>>,
    table_times: Option<Vec<f64>>,
    parallel: Option<bool>,
    allow_cfl_violation: Option<bool>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let mut cfg = Self::default();
        if let Some(v) = file.m {
            cfg.m = v;
        }
        if let Some(v) = file.l {
            cfg.l = v;
        }
        if let Some(v) = file.dt {
            cfg.dt = v;
        }
        if let Some(v) = file.t_final {
            cfg.t_final = v;
        }
        if let Some(s) = file.scheme {
            cfg.scheme = s.parse()?;
        }
        let lambda = file.lambda.as_ref().map(Number::value).transpose()?;
        if let Some(s) = file.center_law {
            cfg.center_law = resolve_center_law(&s, lambda)?;
        } else if lambda.is_some() {
            return Err(Error::Config("lambda given without center_law = \"scaled\"".into()));
        }
        if let Some(s) = file.shape {
            cfg.shape = s.parse()?;
        }
        if let Some(v) = file.output_every {
            cfg.output_every = v;
        }
        if let Some(v) = file.output_dir {
            cfg.output_dir = v;
        }
        if let Some(v) = file.snapshot_times {
            cfg.snapshot_times = v;
        }
        cfg.table_times = file.table_times;
        if let Some(v) = file.parallel {
            cfg.parallel = v;
        }
        if let Some(v) = file.allow_cfl_violation {
            cfg.allow_cfl_violation = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        // Relative output directories are taken relative to the config file.
        if cfg.output_dir.is_relative() {
            if let Some(parent) = path.parent() {
                cfg.output_dir = parent.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.m, self.l, self.dt, self.t_final)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if self.output_every == 0 {
            return Err(Error::Config("output_every must be >= 1".into()));
        }
        if let CenterLaw::ScaledHR(lambda) = self.center_law {
            if !lambda.is_finite() {
                return Err(Error::Config(format!("lambda must be finite, got {lambda}")));
            }
        }
        let times = self.snapshot_times.iter().chain(self.table_times.iter().flatten());
        if let Some(t) = times.into_iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::Config(format!("invalid output time {t}")));
        }
        Ok(())
    }

    /// Table sample times: the explicit list, or `0, 2.5, …` up to `T`
    /// (for the scaled law, the fine list around the breakdown time).
    pub fn resolved_table_times(&self) -> Vec<f64> {
        if let Some(times) = &self.table_times {
            return times.clone();
        }
        match self.center_law {
            CenterLaw::ScaledHR(_) => vec![0.0, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.49, 0.5, 0.51],
            _ => {
                let n = (self.t_final / 2.5).floor() as usize;
                (0..=n).map(|k| 2.5 * k as f64).collect()
            }
        }
    }
}

/// `"scaled"` takes its factor from `lambda`; `"scaled:<λ>"` carries it inline.
pub fn resolve_center_law(name: &str, lambda: Option<f64>) -> Result<CenterLaw> {
    let lower = name.trim().to_ascii_lowercase();
    match (lower.as_str(), lambda) {
        ("scaled", Some(l)) => Ok(CenterLaw::ScaledHR(l)),
        ("scaled", None) => Err(Error::Config("center_law = \"scaled\" needs lambda".into())),
        (_, Some(_)) if !lower.starts_with("scaled") => Err(Error::Config(format!(
            "lambda is only meaningful with the scaled center law, not '{name}'"
        ))),
        _ => lower.parse(),
    }
}
