//! Sweeps of the distributed information bottleneck trade-off over a grid of
//! multipliers `s`, upper concave envelopes of the resulting `(R_sum, Δ)`
//! points, and CSV / JSON / plot-data emission.

pub mod config;
pub mod emit;
pub mod envelope;
pub mod error;
pub mod oracle;
pub mod sweep;
pub mod verify;

pub use config::{ExperimentConfig, ModelKind, ResolvedSource, SourceSpec, Unit};
pub use emit::{emit, Sidecar};
pub use envelope::{envelope_at, upper_envelope, EnvelopePoint};
pub use error::CliError;
pub use oracle::{oracle_curves, OracleCurve, OracleRow};
pub use sweep::{run_sweep, sweep, CurveArtifact, Metadata, Solution, Sweep};
pub use verify::{verify, Check, VerifyReport};
