use dib_core::discrete::{self, DiscreteSolution};
use dib_core::gaussian_dib::{self, GaussianSolution};
use dib_core::TradeoffPoint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ModelKind, ResolvedSource};
use crate::envelope::{upper_envelope, EnvelopePoint};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub crate_version: String,
    pub model: ModelKind,
    pub num_encoders: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
}

/// Everything a sweep produced. Values are in nats; the output unit is only
/// applied on emission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveArtifact {
    pub config: ExperimentConfig,
    pub metadata: Metadata,
    /// One point per `s`, ascending.
    pub rows: Vec<TradeoffPoint>,
    pub envelope: Option<Vec<EnvelopePoint>>,
}

impl CurveArtifact {
    pub fn points(&self) -> Vec<EnvelopePoint> {
        self.rows.iter().map(|p| EnvelopePoint { r_sum: p.r_sum, delta: p.delta }).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Solution {
    Discrete(DiscreteSolution),
    Gaussian(GaussianSolution<f64>),
}

impl Solution {
    pub fn point(&self) -> &TradeoffPoint {
        match self {
            Solution::Discrete(sol) => &sol.point,
            Solution::Gaussian(sol) => &sol.point,
        }
    }
}

/// Sweep output together with the encoders behind every row.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub source: ResolvedSource,
    pub artifact: CurveArtifact,
    pub solutions: Vec<Solution>,
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<CurveArtifact, CliError> {
    sweep(config).map(|s| s.artifact)
}

/// Solves every `s` of the grid (concurrently) and keeps the rows in grid order.
pub fn sweep(config: &ExperimentConfig) -> Result<Sweep, CliError> {
    config.validate()?;
    let source = config.resolve_source()?;
    let solutions: Vec<Solution> = match &source {
        ResolvedSource::Discrete(src) => {
            let cfg = config.discrete_solver(config.s_grid[0]);
            cfg.validate().map_err(|e| CliError::config("solver", &e.to_string()))?;
            cfg.u_sizes(src).map_err(|e| CliError::config("solver.description_sizes", &e.to_string()))?;
            config
                .s_grid
                .par_iter()
                .map(|&s| discrete::solve(src, &config.discrete_solver(s)).map(Solution::Discrete))
                .collect::<Result<_, _>>()?
        }
        ResolvedSource::Gaussian(src) => {
            let cfg = config.gaussian_solver(config.s_grid[0]);
            cfg.validate().map_err(|e| CliError::config("solver", &e.to_string()))?;
            cfg.dims(src).map_err(|e| CliError::config("solver.description_sizes", &e.to_string()))?;
            config
                .s_grid
                .par_iter()
                .map(|&s| gaussian_dib::solve(src, &config.gaussian_solver(s)).map(Solution::Gaussian))
                .collect::<Result<_, _>>()?
        }
    };

    let rows: Vec<TradeoffPoint> = solutions.iter().map(|s| s.point().clone()).collect();
    let (num_encoders, tol, max_iters, restarts) = match &source {
        ResolvedSource::Discrete(src) => {
            let c = config.discrete_solver(config.s_grid[0]);
            (src.num_encoders(), c.tol, c.max_iters, c.restarts)
        }
        ResolvedSource::Gaussian(src) => {
            let c = config.gaussian_solver(config.s_grid[0]);
            (src.num_encoders(), c.tol, c.max_iters, c.restarts)
        }
    };
    let metadata = Metadata {
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        model: config.model,
        num_encoders,
        seed: config.seed(),
        tol,
        max_iters,
        restarts,
    };
    let mut artifact = CurveArtifact { config: config.clone(), metadata, rows, envelope: None };
    if config.envelope {
        artifact.envelope = Some(upper_envelope(&artifact.points()));
    }
    Ok(Sweep { source, artifact, solutions })
}
