//! Run configuration: a TOML file with optional command-line overrides.

use std::path::{Path, PathBuf};

use qthermo::noise::NoiseConfig;
use qthermo::tpm::ProtocolKind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("cannot parse config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Hadamard drive on one thermal qubit.
    Jarzynski,
    /// R_Y(π/N) drive chain with N − 1 σ_x measurements.
    Intermediate,
    /// SWAP engine.
    Swap,
    /// Singlet-triplet measurement engine.
    Qmc,
    /// ⟨σ_z⟩ after R_Y(α) on |0⟩.
    Rotation,
    /// Theoretical SWAP-engine mode labels.
    PhaseDiagram,
}

impl Experiment {
    pub fn is_engine(self) -> bool {
        matches!(self, Experiment::Swap | Experiment::Qmc | Experiment::PhaseDiagram)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Aatpm,
    Tpm,
}

impl From<Protocol> for ProtocolKind {
    fn from(p: Protocol) -> Self {
        match p {
            Protocol::Aatpm => ProtocolKind::Aatpm,
            Protocol::Tpm => ProtocolKind::StandardTpm,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Evenly spaced points, or an explicit list when `values` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub min: f64,
    #[serde(default)]
    pub max: f64,
    #[serde(default)]
    pub points: usize,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn linspace(min: f64, max: f64, points: usize) -> Self {
        Self {
            min,
            max,
            points,
            values: None,
        }
    }

    pub fn list(values: Vec<f64>) -> Self {
        Self {
            min: 0.0,
            max: 0.0,
            points: 0,
            values: Some(values),
        }
    }

    /// Default grid for an experiment: 21 points on `[−2.5, 2.5]` for
    /// single-qubit sweeps, 17 points per axis on `[0, 2.5]` for engines,
    /// `βω = 1` for the intermediate-measurement sweep and 13 angles on
    /// `[0, 2π]` for the rotation curve.
    pub fn default_for(experiment: Experiment) -> Self {
        match experiment {
            Experiment::Jarzynski => Self::linspace(-2.5, 2.5, 21),
            Experiment::Intermediate => Self::list(vec![1.0]),
            Experiment::Swap | Experiment::Qmc | Experiment::PhaseDiagram => Self::linspace(0.0, 2.5, 17),
            Experiment::Rotation => Self::linspace(0.0, 2.0 * std::f64::consts::PI, 13),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        match self.points {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    /// `"min:max:points"` or a comma-separated list of values.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let bad = || invalid("grid", format!("expected `min:max:points` or `v1,v2,…`, got `{s}`"));
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let min = parts[0].trim().parse().map_err(|_| bad())?;
            let max = parts[1].trim().parse().map_err(|_| bad())?;
            let points = parts[2].trim().parse().map_err(|_| bad())?;
            Ok(Self::linspace(min, max, points))
        } else {
            let values = s
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            Ok(Self::list(values))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Report destination; standard output when unset.
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub protocol: Protocol,
    /// Drive steps `N` for the intermediate-measurement sweep.
    pub steps: Vec<u32>,
    pub omega1: f64,
    pub omega2: f64,
    pub shots: u64,
    /// Repetitions `k` used for the fluctuation-relation error bar.
    pub repetitions: usize,
    pub seed: u64,
    /// Replace sampling by exact density-matrix probabilities.
    pub exact: bool,
    pub grid: Option<GridSpec>,
    pub noise: NoiseConfig<f64>,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Jarzynski,
            protocol: Protocol::Aatpm,
            steps: vec![1, 2, 3, 5, 10, 25, 50],
            omega1: 5.25,
            omega2: 5.17,
            shots: 8192,
            repetitions: 25,
            seed: 1,
            exact: false,
            grid: None,
            noise: NoiseConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid.clone().unwrap_or_else(|| GridSpec::default_for(self.experiment))
    }

    pub fn format(&self) -> Format {
        if let Some(f) = self.output.format {
            return f;
        }
        match self.output.path.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext == "json" => Format::Json,
            _ => Format::Csv,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.shots == 0 {
            return Err(invalid("shots", "must be at least 1"));
        }
        for (field, w) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid(field, format!("must be positive and finite, got {w}")));
            }
        }
        let grid = self.grid();
        if grid.values.is_none() && grid.points == 0 {
            return Err(invalid("grid.points", "grid must contain at least one point"));
        }
        let values = grid.values();
        if values.is_empty() {
            return Err(invalid("grid.values", "grid must contain at least one point"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid("grid", format!("values must be finite, got {v}")));
        }
        if self.experiment == Experiment::Intermediate {
            if self.steps.is_empty() {
                return Err(invalid("steps", "at least one step count is required"));
            }
            if self.steps.contains(&0) {
                return Err(invalid("steps", "step counts must be at least 1"));
            }
        }
        self.noise.validate().map_err(|e| invalid("noise", e.to_string()))?;
        Ok(())
    }

    /// Whether the run has no imperfections, so deviations from the oracle
    /// are purely statistical.
    pub fn is_noiseless(&self) -> bool {
        self.noise.is_noiseless()
    }
}

/// Parses `key=value` pairs separated by commas: `heating`, `bias`,
/// `jitter`, `readout_flip`.
pub fn parse_noise(s: &str) -> Result<NoiseConfig<f64>, ConfigError> {
    let mut cfg = NoiseConfig::default();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| invalid("noise", format!("expected key=value, got `{pair}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| invalid("noise", format!("not a number: `{value}`")))?;
        match key.trim() {
            "heating" => cfg.heating = value,
            "bias" => cfg.rotation.bias = value,
            "jitter" => cfg.rotation.jitter = value,
            "readout_flip" => cfg.readout_flip = value,
            other => return Err(invalid("noise", format!("unknown parameter `{other}`"))),
        }
    }
    Ok(cfg)
}
