use std::fmt;
use std::path::{Path, PathBuf};

use dib_core::discrete::SolverConfig;
use dib_core::gaussian::{GaussianSource, Mat};
use dib_core::gaussian_dib::GaussianSolverConfig;
use dib_core::info::{ConditionalPmf, DiscreteSource, Pmf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Discrete,
    Gaussian,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    #[default]
    Nats,
    Bits,
}

impl Unit {
    /// Converts a value in nats into this unit.
    pub fn from_nats(self, v: f64) -> f64 {
        match self {
            Unit::Nats => v,
            Unit::Bits => v / std::f64::consts::LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Seeded random Gaussian instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomGaussian {
    pub x_dim: usize,
    pub y_dims: Vec<usize>,
    pub seed: u64,
}

/// Source tables or matrices, given inline or through `file` (a JSON document
/// with the same fields, resolved relative to the config file).
///
/// Discrete sources use `px` and row-stochastic `channels` (`|X| × |Y_k|`).
/// Gaussian sources use `sigma_x`, `h` and `sigma_n` as row-major nested
/// arrays, or `random`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub px: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_x: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_n: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomGaussian>,
}

/// Solver settings shared by both models; unset fields keep the solver defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `|U_k|` (discrete) or `D_k` (Gaussian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description_sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_jitter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update_order: Option<dib_core::gaussian_dib::UpdateOrder>,
}

/// File names inside the output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: String,
    pub json: String,
    /// Two-column `r_sum delta` plot data for the raw curve; the envelope
    /// goes next to it with an `_envelope` suffix.
    pub plot: Option<String>,
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths { csv: "curve.csv".into(), json: "curve.json".into(), plot: Some("curve.dat".into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub source: SourceSpec,
    pub s_grid: Vec<f64>,
    #[serde(default)]
    pub solver: SolverOverrides,
    #[serde(default)]
    pub unit: Unit,
    #[serde(default = "yes")]
    pub envelope: bool,
    #[serde(default)]
    pub outputs: OutputPaths,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResolvedSource {
    Discrete(DiscreteSource),
    Gaussian(GaussianSource<f64>),
}

impl ExperimentConfig {
    /// Reads and validates a config file. Inline sources are resolved later by
    /// [`ExperimentConfig::resolve_source`]; file sources are inlined here.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| e.in_file(path))
    }

    /// Parses a config document; relative source files resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut config: ExperimentConfig = from_json(text)?;
        if let Some(file) = config.source.file.take() {
            let file = if file.is_absolute() { file } else { base.join(file) };
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::io(&file, e))?;
            let inner: SourceSpec = from_json(&text).map_err(|e| e.in_file(&file))?;
            if inner.file.is_some() {
                return Err(CliError::config("source.file", "a source file cannot point to another file"));
            }
            config.source = inner;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.s_grid.is_empty() {
            return Err(CliError::config("s_grid", "must not be empty"));
        }
        for (i, &s) in self.s_grid.iter().enumerate() {
            if !(s.is_finite() && s > 0.0) {
                return Err(CliError::config(&format!("s_grid[{i}]"), &format!("{s} is not a positive number")));
            }
        }
        if let Some(i) = self.s_grid.windows(2).position(|w| w[1] <= w[0]) {
            return Err(CliError::config(&format!("s_grid[{}]", i + 1), "values must be strictly ascending"));
        }
        let src = &self.source;
        match self.model {
            ModelKind::Discrete => {
                for (name, set) in [
                    ("sigma_x", src.sigma_x.is_some()),
                    ("h", src.h.is_some()),
                    ("sigma_n", src.sigma_n.is_some()),
                    ("random", src.random.is_some()),
                ] {
                    if set {
                        return Err(CliError::config(&format!("source.{name}"), "not used by a discrete model"));
                    }
                }
                if src.px.is_none() {
                    return Err(CliError::config("source.px", "missing"));
                }
                if src.channels.is_none() {
                    return Err(CliError::config("source.channels", "missing"));
                }
            }
            ModelKind::Gaussian => {
                for (name, set) in [("px", src.px.is_some()), ("channels", src.channels.is_some())] {
                    if set {
                        return Err(CliError::config(&format!("source.{name}"), "not used by a Gaussian model"));
                    }
                }
                let explicit = [src.sigma_x.is_some(), src.h.is_some(), src.sigma_n.is_some()];
                match (src.random.is_some(), explicit) {
                    (true, [false, false, false]) | (false, [true, true, true]) => {}
                    (true, _) => {
                        return Err(CliError::config("source.random", "cannot be combined with explicit matrices"));
                    }
                    (false, _) => {
                        let missing = ["sigma_x", "h", "sigma_n"]
                            .iter()
                            .zip(explicit)
                            .find(|(_, set)| !set)
                            .map(|(n, _)| *n)
                            .unwrap_or("sigma_x");
                        return Err(CliError::config(&format!("source.{missing}"), "missing"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn resolve_source(&self) -> Result<ResolvedSource, CliError> {
        let src = &self.source;
        match self.model {
            ModelKind::Discrete => {
                let px = Pmf::new(src.px.clone().unwrap_or_default()).map_err(|e| CliError::config("source.px", &e.to_string()))?;
                let channels = src
                    .channels
                    .clone()
                    .unwrap_or_default()
                    .into_iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        ConditionalPmf::new(rows).map_err(|e| CliError::config(&format!("source.channels[{k}]"), &e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                DiscreteSource::new(px, channels)
                    .map(ResolvedSource::Discrete)
                    .map_err(|e| CliError::config("source", &e.to_string()))
            }
            ModelKind::Gaussian => {
                if let Some(r) = &src.random {
                    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
                    return GaussianSource::random(r.x_dim, &r.y_dims, &mut rng)
                        .map(ResolvedSource::Gaussian)
                        .map_err(|e| CliError::config("source.random", &e.to_string()));
                }
                let sigma_x = matrix("source.sigma_x", src.sigma_x.as_deref().unwrap_or_default())?;
                let h = matrices("source.h", src.h.as_deref().unwrap_or_default())?;
                let sigma_n = matrices("source.sigma_n", src.sigma_n.as_deref().unwrap_or_default())?;
                GaussianSource::new(sigma_x, h, sigma_n)
                    .map(ResolvedSource::Gaussian)
                    .map_err(|e| CliError::config("source", &e.to_string()))
            }
        }
    }

    pub fn discrete_solver(&self, s: f64) -> SolverConfig {
        let o = &self.solver;
        let d = SolverConfig::default();
        SolverConfig {
            s,
            max_iters: o.max_iters.unwrap_or(d.max_iters),
            tol: o.tol.unwrap_or(d.tol),
            restarts: o.restarts.unwrap_or(d.restarts),
            seed: o.seed.unwrap_or(d.seed),
            u_alphabet_sizes: o.description_sizes.clone(),
            init_jitter: o.init_jitter.unwrap_or(d.init_jitter),
        }
    }

    pub fn gaussian_solver(&self, s: f64) -> GaussianSolverConfig {
        let o = &self.solver;
        let d = GaussianSolverConfig::default();
        GaussianSolverConfig {
            s,
            max_iters: o.max_iters.unwrap_or(d.max_iters),
            tol: o.tol.unwrap_or(d.tol),
            restarts: o.restarts.unwrap_or(d.restarts),
            seed: o.seed.unwrap_or(d.seed),
            description_dims: o.description_sizes.clone(),
            init_scale: o.init_scale.unwrap_or(d.init_scale),
            update_order: o.update_order.unwrap_or(d.update_order),
        }
    }

    pub fn seed(&self) -> u64 {
        self.solver.seed.unwrap_or_default()
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Config {
            file: None,
            field: path,
            line: Some((inner.line(), inner.column())),
            message: inner.to_string(),
        }
    })
}

fn matrix(field: &str, rows: &[Vec<f64>]) -> Result<Mat<f64>, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(CliError::config(field, "matrix must be non-empty"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(CliError::config(&format!("{field}[{i}]"), &format!("expected {ncols} columns")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::config(field, "entries must be finite"));
    }
    Ok(Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn matrices(field: &str, list: &[Vec<Vec<f64>>]) -> Result<Vec<Mat<f64>>, CliError> {
    list.iter().enumerate().map(|(k, m)| matrix(&format!("{field}[{k}]"), m)).collect()
}
