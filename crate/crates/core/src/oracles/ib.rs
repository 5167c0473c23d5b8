use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::info::DiscreteSource;
use crate::{DibError, PointDiagnostics, Result, TradeoffPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IbReferenceConfig {
    /// `|U|`; `|Y|` when absent.
    pub u_size: Option<usize>,
    pub max_iters: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for IbReferenceConfig {
    fn default() -> Self {
        IbReferenceConfig { u_size: None, max_iters: 100_000, tol: 1e-12, restarts: 8, seed: 0 }
    }
}

fn plogp_sum(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum()
}

/// Single-encoder information bottleneck at multiplier `s`, by the classical
/// self-consistent iteration with `β = (1+s)/s`:
///
/// ```text
/// p(u|y) ∝ p(u) exp(-β D(p(x|y) || p(x|u)))
/// ```
///
/// Written against raw arrays; shares nothing with the distributed solver.
/// The returned point has `Δ = I(X;U)`, `R = I(Y;U)` and
/// `f_s_value = (1+s) H(X|U) + s I(Y;U)`.
pub fn ib_reference_k1(source: &DiscreteSource, s: f64, config: &IbReferenceConfig) -> Result<TradeoffPoint> {
    if source.num_encoders() != 1 {
        return Err(DibError::InvalidParameter("the reference handles a single encoder".into()));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(DibError::InvalidParameter(format!("s must be positive, got {s}")));
    }
    if config.restarts == 0 || config.max_iters == 0 || config.tol.is_nan() || config.tol <= 0.0 {
        return Err(DibError::InvalidParameter("invalid reference configuration".into()));
    }
    let px = source.px().probs();
    let ch = source.channel(0);
    let (nx, ny) = (px.len(), ch.n_out());
    let nu = config.u_size.unwrap_or(ny);
    if nu == 0 {
        return Err(DibError::InvalidParameter("|U| must be positive".into()));
    }
    let beta = (1.0 + s) / s;

    let mut pxy = vec![0.0; nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            pxy[x * ny + y] = px[x] * ch.get(x, y);
        }
    }
    let py: Vec<f64> = (0..ny).map(|y| (0..nx).map(|x| pxy[x * ny + y]).sum()).collect();
    let px_given_y: Vec<Vec<f64>> = (0..ny)
        .map(|y| (0..nx).map(|x| if py[y] > 0.0 { pxy[x * ny + y] / py[y] } else { px[x] }).collect())
        .collect();
    let h_x = -plogp_sum(px);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(f64, f64, f64, usize, bool, usize)> = None;
    for restart in 0..config.restarts {
        let mut enc: Vec<Vec<f64>> = (0..ny)
            .map(|_| {
                let row: Vec<f64> = (0..nu).map(|_| rng.random_range(0.5..1.5)).collect();
                let t: f64 = row.iter().sum();
                row.into_iter().map(|v| v / t).collect()
            })
            .collect();
        let mut iterations = 0;
        let mut converged = false;
        for it in 1..=config.max_iters {
            let pu: Vec<f64> = (0..nu).map(|u| (0..ny).map(|y| py[y] * enc[y][u]).sum()).collect();
            let px_given_u: Vec<Vec<f64>> = (0..nu)
                .map(|u| {
                    (0..nx)
                        .map(|x| {
                            if pu[u] > 0.0 {
                                (0..ny).map(|y| pxy[x * ny + y] * enc[y][u]).sum::<f64>() / pu[u]
                            } else {
                                px[x]
                            }
                        })
                        .collect()
                })
                .collect();
            let mut change = 0.0f64;
            for y in 0..ny {
                let logits: Vec<f64> = (0..nu)
                    .map(|u| {
                        let kl: f64 = (0..nx)
                            .filter(|&x| px_given_y[y][x] > 0.0)
                            .map(|x| {
                                let q = px_given_u[u][x];
                                if q > 0.0 {
                                    px_given_y[y][x] * (px_given_y[y][x] / q).ln()
                                } else {
                                    f64::INFINITY
                                }
                            })
                            .sum();
                        if pu[u] > 0.0 {
                            pu[u].ln() - beta * kl
                        } else {
                            f64::NEG_INFINITY
                        }
                    })
                    .collect();
                let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    continue;
                }
                let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
                let z: f64 = w.iter().sum();
                for u in 0..nu {
                    let v = w[u] / z;
                    change = change.max((v - enc[y][u]).abs());
                    enc[y][u] = v;
                }
            }
            iterations = it;
            if change < config.tol {
                converged = true;
                break;
            }
        }

        let pu: Vec<f64> = (0..nu).map(|u| (0..ny).map(|y| py[y] * enc[y][u]).sum()).collect();
        let mut pxu = vec![0.0; nx * nu];
        for x in 0..nx {
            for u in 0..nu {
                pxu[x * nu + u] = (0..ny).map(|y| pxy[x * ny + y] * enc[y][u]).sum();
            }
        }
        let h_u = -plogp_sum(&pu);
        let h_x_given_u = -(plogp_sum(&pxu) - plogp_sum(&pu));
        let h_u_given_y: f64 = (0..ny).map(|y| -py[y] * plogp_sum(&enc[y])).sum();
        let delta = (h_x - h_x_given_u).max(0.0);
        let rate = (h_u - h_u_given_y).max(0.0);
        let f = (1.0 + s) * h_x_given_u + s * rate;
        if best.is_none_or(|b| f < b.0) {
            best = Some((f, delta, rate, iterations, converged, restart));
        }
    }
    let (f, delta, rate, iterations, converged, restart_index) = best.expect("at least one restart");
    Ok(TradeoffPoint {
        s,
        delta,
        r_sum: rate,
        f_s_value: f,
        iterations,
        converged,
        restart_index,
        diagnostics: PointDiagnostics { delta_direct: delta, delta_lagrangian: delta, r_sum_direct: rate, ..Default::default() },
    })
}
