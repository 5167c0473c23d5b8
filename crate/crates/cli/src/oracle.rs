use dib_core::discrete::evaluate_point;
use dib_core::gaussian_dib::GaussianSolverConfig;
use dib_core::info::{ConditionalPmf, EncoderSet};
use dib_core::oracles::{
    centralized_bounds, discrete_grid_search, gaussian_scalar_curve, ib_reference_k1, IbReferenceConfig,
    ScalarCurveConfig,
};
use dib_core::{DibError, TradeoffPoint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ResolvedSource};
use crate::error::CliError;
use crate::sweep::CurveArtifact;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub s: f64,
    pub delta: f64,
    pub r_sum: f64,
}

/// Reference curve computed independently of the sweep, in nats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCurve {
    /// File stem of the emitted CSV.
    pub name: String,
    pub rows: Vec<OracleRow>,
    /// `I(X; Y_1..Y_K)` when the oracle has one.
    pub ceiling: Option<f64>,
}

fn row(p: &TradeoffPoint) -> OracleRow {
    OracleRow { s: p.s, delta: p.delta, r_sum: p.r_sum }
}

/// Oracle curves applicable to the sweep's source:
///
/// - discrete, one encoder: single-encoder IB reference at every `s`;
/// - discrete, small alphabets: best deterministic encoders at every `s`;
/// - Gaussian: joint encoder over all observations at every `s`, with `I(X; Y_1..Y_K)`;
/// - Gaussian with scalar observations and `K ≤ 2`: grid oracle at the sweep's rates.
pub fn oracle_curves(
    config: &ExperimentConfig,
    source: &ResolvedSource,
    artifact: &CurveArtifact,
) -> Result<Vec<OracleCurve>, CliError> {
    let mut curves = Vec::new();
    match source {
        ResolvedSource::Discrete(src) => {
            if src.num_encoders() == 1 {
                let cfg = config.discrete_solver(config.s_grid[0]);
                let ib = IbReferenceConfig {
                    u_size: cfg.u_alphabet_sizes.as_ref().map(|u| u[0]),
                    seed: cfg.seed,
                    ..Default::default()
                };
                let rows = config
                    .s_grid
                    .par_iter()
                    .map(|&s| ib_reference_k1(src, s, &ib).map(|p| row(&p)))
                    .collect::<Result<_, _>>()?;
                curves.push(OracleCurve { name: "ib_reference".into(), rows, ceiling: None });
            }
            let u_sizes = config.discrete_solver(config.s_grid[0]).u_sizes(src)?;
            let grid: Result<Vec<OracleRow>, DibError> = config
                .s_grid
                .par_iter()
                .map(|&s| {
                    let best = discrete_grid_search(src, &u_sizes, s)?;
                    let encoders = best
                        .maps
                        .iter()
                        .zip(&u_sizes)
                        .map(|(map, &nu)| ConditionalPmf::deterministic(map, nu))
                        .collect();
                    evaluate_point(src, &EncoderSet::new(encoders)?, s).map(|p| row(&p))
                })
                .collect();
            match grid {
                Ok(rows) => curves.push(OracleCurve { name: "deterministic_grid".into(), rows, ceiling: None }),
                Err(DibError::SearchTooLarge { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        ResolvedSource::Gaussian(src) => {
            let cfg = config.gaussian_solver(config.s_grid[0]);
            let points = config
                .s_grid
                .par_iter()
                .map(|&s| centralized_bounds(src, &[s], &GaussianSolverConfig { s, ..cfg.clone() }))
                .collect::<Result<Vec<_>, _>>()?;
            let ceiling = src.i_x_yall()?;
            let rows = points.iter().flat_map(|b| b.points.iter().map(row)).collect();
            curves.push(OracleCurve { name: "centralized".into(), rows, ceiling: Some(ceiling) });

            if src.x_dim() == 1 && src.num_encoders() <= 2 && src.y_dims().iter().all(|&m| m == 1) {
                let mut rates: Vec<f64> = artifact.rows.iter().map(|p| p.r_sum).collect();
                rates.sort_by(f64::total_cmp);
                rates.dedup();
                let curve = gaussian_scalar_curve(src, &rates, &ScalarCurveConfig::default())?;
                let rows = artifact
                    .rows
                    .iter()
                    .map(|p| {
                        let delta = curve.interpolate(p.r_sum).unwrap_or(f64::NAN);
                        OracleRow { s: p.s, delta, r_sum: p.r_sum }
                    })
                    .collect();
                curves.push(OracleCurve { name: "scalar_grid".into(), rows, ceiling: Some(ceiling) });
            }
        }
    }
    Ok(curves)
}
