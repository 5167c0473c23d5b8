use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Unit;
use crate::envelope::EnvelopePoint;
use crate::error::CliError;
use crate::oracle::OracleCurve;
use crate::sweep::CurveArtifact;

pub const CURVE_HEADER: [&str; 8] = ["s", "delta", "r_sum", "unit", "iterations", "converged", "restart", "flags"];

#[derive(Serialize)]
struct CurveRecord<'a> {
    s: f64,
    delta: f64,
    r_sum: f64,
    unit: &'a str,
    iterations: usize,
    converged: bool,
    restart: usize,
    flags: String,
}

#[derive(Serialize)]
struct EnvelopeRecord<'a> {
    r_sum: f64,
    delta: f64,
    unit: &'a str,
}

#[derive(Serialize)]
struct OracleRecord<'a> {
    s: f64,
    delta: f64,
    r_sum: f64,
    ceiling: Option<f64>,
    unit: &'a str,
}

/// The JSON sidecar: the artifact in nats plus any oracle curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    /// Unit of the CSV and plot files; the sidecar itself is always in nats.
    pub output_unit: Unit,
    pub artifact: CurveArtifact,
    #[serde(default)]
    pub oracles: Vec<OracleCurve>,
}

impl Sidecar {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn csv_bytes<T: Serialize>(records: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("in-memory csv write");
    }
    w.into_inner().expect("in-memory csv flush")
}

/// Curve CSV in `unit`, one row per `s`.
pub fn curve_csv(artifact: &CurveArtifact, unit: Unit) -> Vec<u8> {
    let rows = artifact.rows.iter().map(|p| CurveRecord {
        s: p.s,
        delta: unit.from_nats(p.delta),
        r_sum: unit.from_nats(p.r_sum),
        unit: unit.as_str(),
        iterations: p.iterations,
        converged: p.converged,
        restart: p.restart_index,
        flags: p.diagnostics.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";"),
    });
    let mut bytes = csv_bytes(rows);
    if artifact.rows.is_empty() {
        bytes = format!("{}\n", CURVE_HEADER.join(",")).into_bytes();
    }
    bytes
}

pub fn envelope_csv(envelope: &[EnvelopePoint], unit: Unit) -> Vec<u8> {
    csv_bytes(envelope.iter().map(|p| EnvelopeRecord {
        r_sum: unit.from_nats(p.r_sum),
        delta: unit.from_nats(p.delta),
        unit: unit.as_str(),
    }))
}

pub fn oracle_csv(curve: &OracleCurve, unit: Unit) -> Vec<u8> {
    csv_bytes(curve.rows.iter().map(|r| OracleRecord {
        s: r.s,
        delta: unit.from_nats(r.delta),
        r_sum: unit.from_nats(r.r_sum),
        ceiling: curve.ceiling.map(|c| unit.from_nats(c)),
        unit: unit.as_str(),
    }))
}

/// Two-column `r_sum delta` text for external plotting.
pub fn plot_data(points: impl IntoIterator<Item = (f64, f64)>, unit: Unit) -> Vec<u8> {
    let mut out = format!("# r_sum delta ({unit})\n");
    for (r, d) in points {
        writeln!(out, "{} {}", unit.from_nats(r), unit.from_nats(d)).expect("write to string");
    }
    out.into_bytes()
}

pub fn sidecar_json(artifact: &CurveArtifact, oracles: &[OracleCurve], unit: Unit) -> Vec<u8> {
    let sidecar = Sidecar { output_unit: unit, artifact: artifact.clone(), oracles: oracles.to_vec() };
    let mut text = serde_json::to_string_pretty(&sidecar).expect("artifact serializes");
    text.push('\n');
    text.into_bytes()
}

fn with_suffix(name: &str, suffix: &str) -> String {
    match name.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}{suffix}.{ext}"),
        None => format!("{name}{suffix}"),
    }
}

fn write(path: PathBuf, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Writes the curve CSV, JSON sidecar, envelope CSV, oracle CSVs and plot
/// files into `out_dir`, returning the paths written.
pub fn emit(
    artifact: &CurveArtifact,
    oracles: &[OracleCurve],
    unit: Unit,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let outputs = &artifact.config.outputs;
    let mut written = Vec::new();
    write(out_dir.join(&outputs.csv), &curve_csv(artifact, unit), &mut written)?;
    if let Some(env) = &artifact.envelope {
        write(out_dir.join(with_suffix(&outputs.csv, "_envelope")), &envelope_csv(env, unit), &mut written)?;
    }
    for curve in oracles {
        write(out_dir.join(format!("{}.csv", curve.name)), &oracle_csv(curve, unit), &mut written)?;
    }
    if let Some(plot) = &outputs.plot {
        let raw = artifact.rows.iter().map(|p| (p.r_sum, p.delta));
        write(out_dir.join(plot), &plot_data(raw, unit), &mut written)?;
        if let Some(env) = &artifact.envelope {
            let pts = env.iter().map(|p| (p.r_sum, p.delta));
            write(out_dir.join(with_suffix(plot, "_envelope")), &plot_data(pts, unit), &mut written)?;
        }
        for curve in oracles {
            let pts = curve.rows.iter().map(|r| (r.r_sum, r.delta));
            write(out_dir.join(format!("{}.dat", curve.name)), &plot_data(pts, unit), &mut written)?;
        }
    }
    write(out_dir.join(&outputs.json), &sidecar_json(artifact, oracles, unit), &mut written)?;
    Ok(written)
}
