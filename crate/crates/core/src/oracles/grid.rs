use crate::info::DiscreteSource;
use crate::{DibError, Result};

/// Largest number of deterministic encoder tuples [`discrete_grid_search`] enumerates.
pub const GRID_SEARCH_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSearchResult {
    /// Smallest `F_s` found.
    pub f_s: f64,
    /// The minimizing maps `y_k -> u_k`, one per encoder.
    pub maps: Vec<Vec<usize>>,
    /// Number of tuples evaluated.
    pub candidates: u128,
}

/// Exhaustive minimum of `F_s = H(X|U_K) + s Σ_k [I(Y_k;U_k) + H(X|U_k)]`
/// over deterministic encoders, evaluated from scratch for each tuple.
pub fn discrete_grid_search(source: &DiscreteSource, u_sizes: &[usize], s: f64) -> Result<GridSearchResult> {
    let kk = source.num_encoders();
    if u_sizes.len() != kk || u_sizes.contains(&0) {
        return Err(DibError::InvalidParameter(format!("need {kk} positive description sizes")));
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(DibError::InvalidParameter(format!("s must be nonnegative, got {s}")));
    }
    let ny = source.y_sizes();
    let mut counts = Vec::with_capacity(kk);
    let mut size: u128 = 1;
    for k in 0..kk {
        let c = (u_sizes[k] as u128).checked_pow(ny[k] as u32).unwrap_or(u128::MAX);
        counts.push(c);
        size = size.saturating_mul(c);
    }
    if size > GRID_SEARCH_CAP {
        return Err(DibError::SearchTooLarge { size, cap: GRID_SEARCH_CAP });
    }

    let px = source.px().probs();
    let nx = px.len();
    let mut best = GridSearchResult { f_s: f64::INFINITY, maps: Vec::new(), candidates: size };
    let mut codes = vec![0u128; kk];
    for _ in 0..size {
        let maps: Vec<Vec<usize>> = (0..kk)
            .map(|k| {
                let mut c = codes[k];
                (0..ny[k])
                    .map(|_| {
                        let d = (c % u_sizes[k] as u128) as usize;
                        c /= u_sizes[k] as u128;
                        d
                    })
                    .collect()
            })
            .collect();
        // p(u_k | x) for a deterministic map
        let lik: Vec<Vec<f64>> = (0..kk)
            .map(|k| {
                let ch = source.channel(k);
                let mut t = vec![0.0; nx * u_sizes[k]];
                for x in 0..nx {
                    for y in 0..ny[k] {
                        t[x * u_sizes[k] + maps[k][y]] += ch.get(x, y);
                    }
                }
                t
            })
            .collect();
        let f = objective(px, &lik, u_sizes, s);
        if f < best.f_s {
            best.f_s = f;
            best.maps = maps;
        }
        for k in 0..kk {
            codes[k] += 1;
            if codes[k] < counts[k] {
                break;
            }
            codes[k] = 0;
        }
    }
    Ok(best)
}

fn xlogx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

fn objective(px: &[f64], lik: &[Vec<f64>], u_sizes: &[usize], s: f64) -> f64 {
    let nx = px.len();
    let tuples: usize = u_sizes.iter().product();
    // H(X|U_K) = H(X, U_K) - H(U_K)
    let mut h_joint = 0.0;
    let mut pu_all = vec![0.0; tuples];
    for x in 0..nx {
        for t in 0..tuples {
            let mut rem = t;
            let mut p = px[x];
            for k in (0..u_sizes.len()).rev() {
                p *= lik[k][x * u_sizes[k] + rem % u_sizes[k]];
                rem /= u_sizes[k];
            }
            h_joint -= xlogx(p);
            pu_all[t] += p;
        }
    }
    let h_u_all: f64 = -pu_all.iter().map(|&p| xlogx(p)).sum::<f64>();
    let mut value = h_joint - h_u_all;
    for (k, &nu) in u_sizes.iter().enumerate() {
        let mut pu = vec![0.0; nu];
        let mut h_xu = 0.0;
        for x in 0..nx {
            for u in 0..nu {
                let p = px[x] * lik[k][x * nu + u];
                pu[u] += p;
                h_xu -= xlogx(p);
            }
        }
        let h_u: f64 = -pu.iter().map(|&p| xlogx(p)).sum::<f64>();
        // a deterministic encoder has I(Y;U) = H(U)
        let i_y_u = h_u;
        let h_x_given_u = h_xu - h_u;
        value += s * (i_y_u + h_x_given_u);
    }
    value
}
