use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::{gaussian_f_bar_s, gaussian_f_s, GaussianDecoders};
use super::point::evaluate_point_gaussian;
use super::updates::update_encoders;
use crate::gaussian::{b_from_encoders, GaussianJoint, GaussianSource, LinearEncoderSet, Scalar};
use crate::{DibError, Flag, Result, TradeoffPoint};

/// Relative slack before an objective increase is flagged.
pub const DESCENT_SLACK: f64 = 1e-7;

/// Block schedule within one iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    /// All blocks from the statistics at the start of the iteration.
    Parallel,
    /// Statistics refreshed after every block.
    #[default]
    Sequential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussianSolverConfig {
    pub s: f64,
    pub max_iters: usize,
    /// Threshold on the per-iteration change of every `B_k` (Frobenius norm)
    /// and of the objective.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Description dimensions `D_k`; `M_k` when absent.
    pub description_dims: Option<Vec<usize>>,
    pub init_scale: f64,
    pub update_order: UpdateOrder,
}

impl Default for GaussianSolverConfig {
    fn default() -> Self {
        GaussianSolverConfig {
            s: 1.0,
            max_iters: 20_000,
            tol: 1e-10,
            restarts: 2,
            seed: 0,
            description_dims: None,
            init_scale: 0.5,
            update_order: UpdateOrder::default(),
        }
    }
}

impl GaussianSolverConfig {
    pub fn new(s: f64) -> Self {
        GaussianSolverConfig { s, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(DibError::InvalidParameter(format!("s must be positive, got {}", self.s)));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(DibError::InvalidParameter("max_iters and restarts must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(DibError::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.init_scale.is_finite() && self.init_scale > 0.0) {
            return Err(DibError::InvalidParameter(format!(
                "init_scale must be positive, got {}",
                self.init_scale
            )));
        }
        Ok(())
    }

    pub fn dims<T: Scalar>(&self, source: &GaussianSource<T>) -> Result<Vec<usize>> {
        let dims = self.description_dims.clone().unwrap_or_else(|| source.y_dims());
        if dims.len() != source.num_encoders() || dims.contains(&0) {
            return Err(DibError::InvalidParameter(format!(
                "need {} positive description dimensions, got {dims:?}",
                source.num_encoders()
            )));
        }
        Ok(dims)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSolution<T: Scalar = f64> {
    pub encoders: LinearEncoderSet<T>,
    pub point: TradeoffPoint,
}

/// Objective trajectory of one restart: `F(P^0)`, then per iteration
/// `F̄(P^{t+1}, Q^{t+1})` and `F(P^{t+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianRunTrace {
    pub restart_index: usize,
    pub half_steps: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_f_s: f64,
    pub last_b_step: f64,
    pub floored: bool,
}

impl GaussianRunTrace {
    /// Largest increase between consecutive half-steps relative to `max(1, |F|)`.
    pub fn worst_ascent(&self) -> f64 {
        self.half_steps
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

pub fn solve<T: Scalar>(source: &GaussianSource<T>, config: &GaussianSolverConfig) -> Result<GaussianSolution<T>> {
    solve_with_observer(source, config, |_, _, _| {}).map(|(sol, _)| sol)
}

/// As [`solve`], calling `observer(restart, iteration, encoders)` on the
/// initial point (`iteration = 0`) and on every iterate, and returning all traces.
pub fn solve_with_observer<T: Scalar, F>(
    source: &GaussianSource<T>,
    config: &GaussianSolverConfig,
    mut observer: F,
) -> Result<(GaussianSolution<T>, Vec<GaussianRunTrace>)>
where
    F: FnMut(usize, usize, &LinearEncoderSet<T>),
{
    config.validate()?;
    let dims = config.dims(source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(LinearEncoderSet<T>, GaussianRunTrace)> = None;
    let mut traces = Vec::with_capacity(config.restarts);
    for restart in 0..config.restarts {
        let init = LinearEncoderSet::random(source, &dims, config.init_scale, &mut rng)?;
        observer(restart, 0, &init);
        let (encoders, trace) = run(source, init, config, restart, &mut observer)?;
        let better = best.as_ref().is_none_or(|(_, t)| trace.final_f_s < t.final_f_s);
        traces.push(trace.clone());
        if better {
            best = Some((encoders, trace));
        }
    }
    let (encoders, trace) = best.expect("at least one restart");
    let mut point = evaluate_point_gaussian(source, &encoders, config.s)?;
    point.iterations = trace.iterations;
    point.converged = trace.converged;
    point.restart_index = trace.restart_index;
    if !trace.converged {
        point.diagnostics.flag(Flag::NotConverged);
    }
    if trace.worst_ascent() > DESCENT_SLACK {
        point.diagnostics.flag(Flag::DescentViolation);
    }
    if trace.floored {
        point.diagnostics.flag(Flag::PdFloor);
    }
    Ok((GaussianSolution { encoders, point }, traces))
}

fn run<T: Scalar, F>(
    source: &GaussianSource<T>,
    mut encoders: LinearEncoderSet<T>,
    config: &GaussianSolverConfig,
    restart_index: usize,
    observer: &mut F,
) -> Result<(LinearEncoderSet<T>, GaussianRunTrace)>
where
    F: FnMut(usize, usize, &LinearEncoderSet<T>),
{
    let s = config.s;
    let mut f_prev = gaussian_f_s(&GaussianJoint::new(source, &encoders)?, s)?;
    let mut b_prev = b_from_encoders(source, &encoders)?;
    let mut half_steps = vec![f_prev];
    let mut converged = false;
    let mut iterations = 0;
    let mut last_b_step = f64::INFINITY;
    let mut floored = false;

    for it in 1..=config.max_iters {
        let decoders = GaussianDecoders::from_joint(&GaussianJoint::new(source, &encoders)?)?;
        let (next, fl) = update_encoders(source, &encoders, s, config.update_order)?;
        floored |= fl;
        let joint = GaussianJoint::new(source, &next)?;
        let f_mid = gaussian_f_bar_s(&joint, &decoders, s)?;
        let f_next = gaussian_f_s(&joint, s)?;
        half_steps.push(f_mid);
        half_steps.push(f_next);

        let b_next = b_from_encoders(source, &next)?;
        last_b_step = b_prev
            .matrices()
            .iter()
            .zip(b_next.matrices())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        observer(restart_index, it, &next);
        encoders = next;
        b_prev = b_next;
        iterations = it;
        if last_b_step < config.tol && (f_prev - f_next).abs() < config.tol {
            converged = true;
            break;
        }
        f_prev = f_next;
    }
    let final_f_s = *half_steps.last().expect("initial value");
    let trace = GaussianRunTrace {
        restart_index,
        half_steps,
        iterations,
        converged,
        final_f_s,
        last_b_step,
        floored,
    };
    Ok((encoders, trace))
}
