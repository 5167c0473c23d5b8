use std::sync::OnceLock;

use super::pmf::entropy_slice;
use super::{ConditionalPmf, DiscreteSource, EncoderSet};
use crate::{DibError, Result, Subset};

/// Default ceiling on the number of cells any single probability table may hold.
pub const DEFAULT_JOINT_CAP: u128 = 10_000_000;

/// Mixed-radix flattening of a tuple of symbols, first digit most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    sizes: Vec<usize>,
    strides: Vec<usize>,
}

impl MixedRadix {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        MixedRadix { sizes, strides }
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn digit(&self, index: usize, pos: usize) -> usize {
        index / self.strides[pos] % self.sizes[pos]
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.sizes.len()).map(|p| self.digit(index, p)).collect()
    }
}

/// Tables describing what encoder `k` sees of the other encoders.
#[derive(Debug)]
pub struct OthersGivenY {
    /// Radix of `u_{K\k}` (encoder order, `k` skipped).
    pub radix: MixedRadix,
    /// `full[rest * |U_k| + u_k]`: flat index of the full tuple.
    pub full: Vec<usize>,
    /// `p(u_{K\k} | y_k)`, layout `[y][rest]`.
    pub p_rest_given_y: Vec<f64>,
    /// `p(x | u_{K\k}, y_k)`, layout `[y][rest][x]`; falls back to `p(x | y_k)`
    /// where the conditioning event has zero probability.
    pub post_x: Vec<f64>,
}

/// The joint law of `(X, Y_1..Y_K, U_1..U_K)` induced by a source and an
/// encoder set, `p(x) Π p(y_k|x) Π p(u_k|y_k)`, held in factored form with
/// the marginals the solvers need.
#[derive(Debug)]
pub struct InducedJoint<'a> {
    source: &'a DiscreteSource,
    encoders: &'a EncoderSet,
    cap: u128,
    radix: MixedRadix,
    /// `p(u_k | x)`, layout `[x][u]`.
    u_given_x: Vec<Vec<f64>>,
    /// `p(x, u_k)`, layout `[x][u]`.
    xu: Vec<Vec<f64>>,
    pu: Vec<Vec<f64>>,
    /// `p(x, u_1..u_K)`, layout `[tuple][x]`.
    x_uall: Vec<f64>,
    others: Vec<OnceLock<OthersGivenY>>,
}

impl<'a> InducedJoint<'a> {
    pub fn new(source: &'a DiscreteSource, encoders: &'a EncoderSet) -> Result<Self> {
        Self::with_cap(source, encoders, DEFAULT_JOINT_CAP)
    }

    pub fn with_cap(source: &'a DiscreteSource, encoders: &'a EncoderSet, cap: u128) -> Result<Self> {
        encoders.check_compatible(source)?;
        let nx = source.x_size();
        let u_sizes = encoders.u_sizes();
        let max_y = source.y_sizes().into_iter().max().unwrap_or(1) as u128;
        let cells = nx as u128 * u_sizes.iter().map(|&n| n as u128).product::<u128>() * max_y;
        if cells > cap {
            return Err(DibError::JointTooLarge { cells, cap });
        }

        let kk = source.num_encoders();
        let mut u_given_x = Vec::with_capacity(kk);
        let mut xu = Vec::with_capacity(kk);
        let mut pu = Vec::with_capacity(kk);
        for k in 0..kk {
            let (ch, enc) = (source.channel(k), encoders.encoder(k));
            let nu = enc.n_out();
            let mut ux = vec![0.0; nx * nu];
            for x in 0..nx {
                for y in 0..ch.n_out() {
                    let pyx = ch.get(x, y);
                    if pyx == 0.0 {
                        continue;
                    }
                    for (u, q) in enc.row(y).iter().enumerate() {
                        ux[x * nu + u] += pyx * q;
                    }
                }
            }
            let joint: Vec<f64> = ux
                .iter()
                .enumerate()
                .map(|(i, p)| p * source.px().probs()[i / nu])
                .collect();
            let mut marg = vec![0.0; nu];
            for row in joint.chunks(nu) {
                marg.iter_mut().zip(row).for_each(|(m, p)| *m += p);
            }
            u_given_x.push(ux);
            xu.push(joint);
            pu.push(marg);
        }

        let radix = MixedRadix::new(u_sizes);
        let mut x_uall = vec![0.0; radix.len() * nx];
        for t in 0..radix.len() {
            let digits = radix.digits(t);
            for x in 0..nx {
                let mut p = source.px().probs()[x];
                for (k, &u) in digits.iter().enumerate() {
                    p *= u_given_x[k][x * radix.sizes()[k] + u];
                }
                x_uall[t * nx + x] = p;
            }
        }

        Ok(InducedJoint {
            source,
            encoders,
            cap,
            radix,
            u_given_x,
            xu,
            pu,
            x_uall,
            others: (0..kk).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn source(&self) -> &DiscreteSource {
        self.source
    }

    pub fn encoders(&self) -> &EncoderSet {
        self.encoders
    }

    pub fn num_encoders(&self) -> usize {
        self.source.num_encoders()
    }

    pub fn tuple_radix(&self) -> &MixedRadix {
        &self.radix
    }

    /// `p(u_k)`.
    pub fn pu(&self, k: usize) -> &[f64] {
        &self.pu[k]
    }

    /// `p(u_k | x)`, layout `[x][u]`.
    pub fn u_given_x(&self, k: usize) -> &[f64] {
        &self.u_given_x[k]
    }

    /// `p(x, u_k)`, layout `[x][u]`.
    pub fn xu(&self, k: usize) -> &[f64] {
        &self.xu[k]
    }

    /// `p(x, u_1..u_K)`, layout `[tuple][x]`.
    pub fn x_uall(&self) -> &[f64] {
        &self.x_uall
    }

    /// `p(u_1..u_K)`.
    pub fn p_uall(&self) -> Vec<f64> {
        self.x_uall.chunks(self.source.x_size()).map(|r| r.iter().sum()).collect()
    }

    /// `p(x | u_k)` with `p(x)` on zero-probability symbols.
    pub fn posterior_x_given_u(&self, k: usize) -> ConditionalPmf {
        let nx = self.source.x_size();
        let nu = self.pu[k].len();
        let mut data = vec![0.0; nu * nx];
        for u in 0..nu {
            let row = &mut data[u * nx..(u + 1) * nx];
            if self.pu[k][u] > 0.0 {
                for (x, v) in row.iter_mut().enumerate() {
                    *v = self.xu[k][x * nu + u] / self.pu[k][u];
                }
                renormalize(row);
            } else {
                row.copy_from_slice(self.source.px().probs());
            }
        }
        ConditionalPmf::from_flat_normalized(nu, nx, data)
    }

    /// `p(x | u_1..u_K)` with `p(x)` on zero-probability tuples.
    pub fn posterior_x_given_uall(&self) -> ConditionalPmf {
        let nx = self.source.x_size();
        let mut data = self.x_uall.clone();
        for row in data.chunks_mut(nx) {
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                row.iter_mut().for_each(|v| *v /= total);
            } else {
                row.copy_from_slice(self.source.px().probs());
            }
        }
        ConditionalPmf::from_flat_normalized(self.radix.len(), nx, data)
    }

    /// Conditional tables of the other descriptions given `y_k`.
    pub fn others_given_y(&self, k: usize) -> &OthersGivenY {
        self.others[k].get_or_init(|| self.build_others(k))
    }

    fn build_others(&self, k: usize) -> OthersGivenY {
        let nx = self.source.x_size();
        let sizes = self.radix.sizes();
        let rest_sizes: Vec<usize> =
            sizes.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &n)| n).collect();
        let radix = MixedRadix::new(rest_sizes);
        let (n_rest, nu) = (radix.len(), sizes[k]);

        let mut full = vec![0; n_rest * nu];
        let mut digits = vec![0; sizes.len()];
        for r in 0..n_rest {
            let rest = radix.digits(r);
            for (pos, j) in (0..sizes.len()).filter(|&j| j != k).enumerate() {
                digits[j] = rest[pos];
            }
            for u in 0..nu {
                digits[k] = u;
                full[r * nu + u] = self.radix.index(&digits);
            }
        }

        // p(u_rest | x) = Π_{j≠k} p(u_j | x)
        let mut rest_given_x = vec![1.0; nx * n_rest];
        for r in 0..n_rest {
            let rest = radix.digits(r);
            for x in 0..nx {
                let mut p = 1.0;
                for (pos, j) in (0..sizes.len()).filter(|&j| j != k).enumerate() {
                    p *= self.u_given_x[j][x * sizes[j] + rest[pos]];
                }
                rest_given_x[x * n_rest + r] = p;
            }
        }

        let post_y = self.source.posterior(k);
        let ny = post_y.n_in();
        let mut p_rest_given_y = vec![0.0; ny * n_rest];
        let mut post_x = vec![0.0; ny * n_rest * nx];
        for y in 0..ny {
            let pxy = post_y.row(y);
            for r in 0..n_rest {
                let cell = &mut post_x[(y * n_rest + r) * nx..(y * n_rest + r + 1) * nx];
                let mut total = 0.0;
                for x in 0..nx {
                    let v = pxy[x] * rest_given_x[x * n_rest + r];
                    cell[x] = v;
                    total += v;
                }
                p_rest_given_y[y * n_rest + r] = total;
                if total > 0.0 {
                    cell.iter_mut().for_each(|v| *v /= total);
                } else {
                    cell.copy_from_slice(pxy);
                }
            }
        }
        OthersGivenY { radix, full, p_rest_given_y, post_x }
    }

    pub fn h_x(&self) -> f64 {
        entropy_slice(self.source.px().probs())
    }

    /// `H(X | U_k)`.
    pub fn h_x_given_u(&self, k: usize) -> f64 {
        (entropy_slice(&self.xu[k]) - entropy_slice(&self.pu[k])).max(0.0)
    }

    /// `I(X; U_k)`.
    pub fn i_x_u(&self, k: usize) -> f64 {
        (self.h_x() - self.h_x_given_u(k)).max(0.0)
    }

    /// `H(X | U_1..U_K)`.
    pub fn h_x_given_uall(&self) -> f64 {
        (entropy_slice(&self.x_uall) - entropy_slice(&self.p_uall())).max(0.0)
    }

    /// `I(X; U_1..U_K)`.
    pub fn i_x_uall(&self) -> f64 {
        (self.h_x() - self.h_x_given_uall()).max(0.0)
    }

    /// `H(U_k | Y_k)`.
    pub fn h_u_given_y(&self, k: usize) -> f64 {
        let py = self.source.py(k);
        let enc = self.encoders.encoder(k);
        py.iter().zip(enc.rows()).map(|(p, row)| p * entropy_slice(row)).sum()
    }

    /// `I(Y_k; U_k)`.
    pub fn i_y_u(&self, k: usize) -> f64 {
        (entropy_slice(&self.pu[k]) - self.h_u_given_y(k)).max(0.0)
    }

    /// `I(Y_k; U_k | X) = H(U_k | X) - H(U_k | Y_k)`.
    pub fn i_y_u_given_x(&self, k: usize) -> f64 {
        let h_u_x = entropy_slice(&self.xu[k]) - self.h_x();
        (h_u_x - self.h_u_given_y(k)).max(0.0)
    }

    /// `I(Y_1..Y_K; U_1..U_K) = H(U_1..U_K) - Σ H(U_k | Y_k)`.
    pub fn i_yall_uall(&self) -> f64 {
        let h_cond: f64 = (0..self.num_encoders()).map(|k| self.h_u_given_y(k)).sum();
        (entropy_slice(&self.p_uall()) - h_cond).max(0.0)
    }

    /// `I(X; U_S)` for a subset of the descriptions; zero for the empty set.
    pub fn i_x_u_subset(&self, subset: Subset) -> f64 {
        if subset.is_empty() {
            return 0.0;
        }
        let members: Vec<usize> = subset.indices().collect();
        let sizes: Vec<usize> = members.iter().map(|&k| self.pu[k].len()).collect();
        let radix = MixedRadix::new(sizes.clone());
        let nx = self.source.x_size();
        let mut joint = vec![0.0; radix.len() * nx];
        let mut pus = vec![0.0; radix.len()];
        for t in 0..radix.len() {
            let digits = radix.digits(t);
            for x in 0..nx {
                let mut p = self.source.px().probs()[x];
                for (pos, &k) in members.iter().enumerate() {
                    p *= self.u_given_x[k][x * sizes[pos] + digits[pos]];
                }
                joint[t * nx + x] = p;
                pus[t] += p;
            }
        }
        (self.h_x() + entropy_slice(&pus) - entropy_slice(&joint)).max(0.0)
    }

    /// Materializes `p(x, y_1..y_K, u_1..u_K)` as a flat table indexed
    /// `[x][y_1..y_K][u_1..u_K]`. Bounded by the cap of this joint.
    pub fn full_joint(&self) -> Result<Vec<f64>> {
        let nx = self.source.x_size();
        let y_radix = MixedRadix::new(self.source.y_sizes());
        let cells = nx as u128 * y_radix.len() as u128 * self.radix.len() as u128;
        if cells > self.cap {
            return Err(DibError::JointTooLarge { cells, cap: self.cap });
        }
        let (ny, nu) = (y_radix.len(), self.radix.len());
        let mut table = vec![0.0; nx * ny * nu];
        for x in 0..nx {
            for yt in 0..ny {
                let ys = y_radix.digits(yt);
                let pxy = ys
                    .iter()
                    .enumerate()
                    .fold(self.source.px().probs()[x], |p, (k, &y)| p * self.source.channel(k).get(x, y));
                if pxy == 0.0 {
                    continue;
                }
                for ut in 0..nu {
                    let us = self.radix.digits(ut);
                    let p = us
                        .iter()
                        .enumerate()
                        .fold(pxy, |p, (k, &u)| p * self.encoders.encoder(k).get(ys[k], u));
                    table[(x * ny + yt) * nu + ut] = p;
                }
            }
        }
        Ok(table)
    }
}

fn renormalize(row: &mut [f64]) {
    let total: f64 = row.iter().sum();
    if total > 0.0 {
        row.iter_mut().for_each(|v| *v /= total);
    }
}
