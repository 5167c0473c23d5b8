use serde::{Deserialize, Serialize};

/// Conditions worth surfacing next to a solver result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// `max_iters` reached before the stopping rule fired.
    NotConverged,
    /// An objective increase beyond slack was observed along the trajectory.
    DescentViolation,
    /// A noise-covariance update had to floor eigenvalues to stay positive definite.
    PdFloor,
    /// A log-determinant was taken over a singular covariance (eigenvalue floor).
    PseudoLogDet,
    /// An encoder row had no finite weight and was left unchanged.
    StalledRow,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::NotConverged => "not_converged",
            Flag::DescentViolation => "descent_violation",
            Flag::PdFloor => "pd_floor",
            Flag::PseudoLogDet => "pseudo_logdet",
            Flag::StalledRow => "stalled_row",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    /// `I(X; U_1..U_K)` evaluated directly.
    pub delta_direct: f64,
    /// Relevance recovered from the Lagrangian identity
    /// `(1+s) Δ = (1+sK) H(X) + s R - F_s`.
    pub delta_lagrangian: f64,
    /// `|delta_lagrangian - delta_direct|`.
    pub lagrangian_gap: f64,
    /// `I(Y_1..Y_K; U_1..U_K)` evaluated directly, as a cross-check of `r_sum`.
    pub r_sum_direct: f64,
    pub flags: Vec<Flag>,
}

impl PointDiagnostics {
    pub fn flag(&mut self, flag: Flag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
            self.flags.sort();
        }
    }
}

/// One point `(Δ_s, R_s)` of the information / sum-rate curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub s: f64,
    /// Relevance, nats.
    pub delta: f64,
    /// Sum-rate, nats.
    pub r_sum: f64,
    /// Value of the minimized objective at the returned encoders, nats.
    pub f_s_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restart_index: usize,
    pub diagnostics: PointDiagnostics,
}
