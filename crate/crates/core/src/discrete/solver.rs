use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::{check_s, f_bar_s_from_joint, f_s_from_joint};
use super::point::evaluate_point;
use super::updates::{decoders_from_joint, update_encoders_flagged};
use crate::info::{ConditionalPmf, DecoderSet, DiscreteSource, EncoderSet, InducedJoint};
use crate::{DibError, Flag, Result, TradeoffPoint};

/// Slack allowed on the monotone-descent check of the objective.
pub const DESCENT_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub s: f64,
    pub max_iters: usize,
    /// Stop once both the objective change and the largest encoder-row
    /// total-variation step of one iteration fall below `tol`.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    /// `|U_k|` per encoder; `None` uses `|Y_k|`.
    pub u_alphabet_sizes: Option<Vec<usize>>,
    /// Magnitude of the multiplicative perturbation of the uniform start.
    pub init_jitter: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            s: 1.0,
            max_iters: 10_000,
            tol: 1e-9,
            restarts: 4,
            seed: 0,
            u_alphabet_sizes: None,
            init_jitter: 0.1,
        }
    }
}

impl SolverConfig {
    pub fn new(s: f64) -> Self {
        SolverConfig { s, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_s(self.s)?;
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(DibError::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(DibError::InvalidParameter(
                "max_iters and restarts must be positive".into(),
            ));
        }
        if !(self.init_jitter > 0.0 && self.init_jitter.is_finite()) {
            return Err(DibError::InvalidParameter("init_jitter must be positive".into()));
        }
        if let Some(sizes) = &self.u_alphabet_sizes {
            if sizes.contains(&0) {
                return Err(DibError::InvalidParameter("|U_k| must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn u_sizes(&self, source: &DiscreteSource) -> Result<Vec<usize>> {
        match &self.u_alphabet_sizes {
            Some(sizes) if sizes.len() != source.num_encoders() => Err(DibError::DimensionMismatch(
                format!("{} description sizes for {} encoders", sizes.len(), source.num_encoders()),
            )),
            Some(sizes) => Ok(sizes.clone()),
            None => Ok(source.y_sizes()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscreteSolution {
    pub encoders: EncoderSet,
    pub decoders: DecoderSet,
    pub point: TradeoffPoint,
}

/// Objective values along one restart.
///
/// `half_steps` alternates `F̄_s(P^t, Q^{t+1}) = F_s(P^t)` and
/// `F̄_s(P^{t+1}, Q^{t+1})`, starting from the initial encoders.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub restart_index: usize,
    pub half_steps: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_f_s: f64,
    /// Largest encoder-row step of the last iteration.
    pub last_step: f64,
}

impl RunTrace {
    /// Largest increase between consecutive half-steps (zero for a clean descent).
    pub fn worst_ascent(&self) -> f64 {
        self.half_steps.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Uniform test channels with multiplicative jitter `exp(jitter · ξ)`,
/// `ξ ~ U(-1, 1)`, renormalized per row.
pub fn initial_encoders<R: Rng + ?Sized>(
    source: &DiscreteSource,
    u_sizes: &[usize],
    jitter: f64,
    rng: &mut R,
) -> Result<EncoderSet> {
    if u_sizes.len() != source.num_encoders() {
        return Err(DibError::DimensionMismatch("one description size per encoder".into()));
    }
    let encoders = u_sizes
        .iter()
        .enumerate()
        .map(|(k, &nu)| {
            let ny = source.y_size(k);
            let mut data = Vec::with_capacity(ny * nu);
            for _ in 0..ny {
                let row: Vec<f64> =
                    (0..nu).map(|_| (jitter * rng.random_range(-1.0..1.0)).exp()).collect();
                let total: f64 = row.iter().sum();
                data.extend(row.into_iter().map(|v| v / total));
            }
            ConditionalPmf::from_flat_normalized(ny, nu, data)
        })
        .collect();
    EncoderSet::new(encoders)
}

/// Runs the alternating minimization from `config.restarts` jittered starts
/// and returns the run with the lowest final `F_s`.
pub fn solve(source: &DiscreteSource, config: &SolverConfig) -> Result<DiscreteSolution> {
    solve_traced(source, config).map(|(sol, _)| sol)
}

/// As [`solve`], also returning the objective trace of every restart.
pub fn solve_traced(
    source: &DiscreteSource,
    config: &SolverConfig,
) -> Result<(DiscreteSolution, Vec<RunTrace>)> {
    config.validate()?;
    let u_sizes = config.u_sizes(source)?;
    if config.s == 0.0 {
        return solve_unconstrained(source, &u_sizes).map(|sol| (sol, Vec::new()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(EncoderSet, RunTrace, bool)> = None;
    let mut traces = Vec::with_capacity(config.restarts);
    for restart in 0..config.restarts {
        let init = initial_encoders(source, &u_sizes, config.init_jitter, &mut rng)?;
        let (encoders, trace, stalled) = run(source, init, config, restart)?;
        let better = best.as_ref().is_none_or(|(_, t, _)| trace.final_f_s < t.final_f_s);
        traces.push(trace.clone());
        if better {
            best = Some((encoders, trace, stalled));
        }
    }
    let (encoders, trace, stalled) = best.expect("at least one restart");

    let mut point = evaluate_point(source, &encoders, config.s)?;
    point.iterations = trace.iterations;
    point.converged = trace.converged;
    point.restart_index = trace.restart_index;
    if !trace.converged {
        point.diagnostics.flag(Flag::NotConverged);
    }
    if trace.worst_ascent() > DESCENT_SLACK {
        point.diagnostics.flag(Flag::DescentViolation);
    }
    if stalled {
        point.diagnostics.flag(Flag::StalledRow);
    }
    let decoders = decoders_from_joint(&InducedJoint::new(source, &encoders)?);
    Ok((DiscreteSolution { encoders, decoders, point }, traces))
}

fn run(
    source: &DiscreteSource,
    mut encoders: EncoderSet,
    config: &SolverConfig,
    restart_index: usize,
) -> Result<(EncoderSet, RunTrace, bool)> {
    let s = config.s;
    let mut f_prev = f_s_from_joint(&InducedJoint::new(source, &encoders)?, s);
    let mut half_steps = vec![f_prev];
    let mut converged = false;
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;
    let mut stalled = false;

    for it in 1..=config.max_iters {
        let decoders = decoders_from_joint(&InducedJoint::new(source, &encoders)?);
        let (next, st) = update_encoders_flagged(source, &encoders, &decoders, s)?;
        stalled |= st;
        let joint = InducedJoint::new(source, &next)?;
        let f_mid = f_bar_s_from_joint(&joint, &decoders, s);
        let f_next = f_s_from_joint(&joint, s);
        half_steps.push(f_mid);
        half_steps.push(f_next);

        last_step = encoders.max_row_distance(&next);
        encoders = next;
        iterations = it;
        if (f_prev - f_next).abs() < config.tol && last_step < config.tol {
            converged = true;
            break;
        }
        f_prev = f_next;
    }
    let final_f_s = *half_steps.last().expect("initial value");
    let trace =
        RunTrace { restart_index, half_steps, iterations, converged, final_f_s, last_step };
    Ok((encoders, trace, stalled))
}

/// `s = 0` leaves only `H(X | U_K)`, minimized by lossless descriptions.
fn solve_unconstrained(source: &DiscreteSource, u_sizes: &[usize]) -> Result<DiscreteSolution> {
    let mut encoders = Vec::with_capacity(u_sizes.len());
    for (k, &nu) in u_sizes.iter().enumerate() {
        let ny = source.y_size(k);
        if nu < ny {
            return Err(DibError::InvalidParameter(format!(
                "s = 0 needs |U_{}| >= |Y_{}| = {ny}",
                k + 1,
                k + 1
            )));
        }
        encoders.push(ConditionalPmf::deterministic(&(0..ny).collect::<Vec<_>>(), nu));
    }
    let encoders = EncoderSet::new(encoders)?;
    let point = TradeoffPoint { converged: true, ..evaluate_point(source, &encoders, 0.0)? };
    let decoders = decoders_from_joint(&InducedJoint::new(source, &encoders)?);
    Ok(DiscreteSolution { encoders, decoders, point })
}
