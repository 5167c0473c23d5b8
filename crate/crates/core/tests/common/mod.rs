//! Test-only references that enumerate full joint tables from scratch.
#![allow(dead_code)]

pub mod gauss;

use dib_core::info::{ConditionalPmf, DiscreteSource, EncoderSet, Pmf};
use rand::Rng;

pub fn random_row<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn random_conditional<R: Rng>(rng: &mut R, n_in: usize, n_out: usize) -> ConditionalPmf {
    ConditionalPmf::new((0..n_in).map(|_| random_row(rng, n_out)).collect()).unwrap()
}

pub fn random_source<R: Rng>(rng: &mut R, nx: usize, ny: &[usize]) -> DiscreteSource {
    let px = Pmf::new(random_row(rng, nx)).unwrap();
    let channels = ny.iter().map(|&n| random_conditional(rng, nx, n)).collect();
    DiscreteSource::new(px, channels).unwrap()
}

pub fn random_encoders<R: Rng>(rng: &mut R, source: &DiscreteSource, nu: &[usize]) -> EncoderSet {
    EncoderSet::new(
        nu.iter()
            .enumerate()
            .map(|(k, &n)| random_conditional(rng, source.y_size(k), n))
            .collect(),
    )
    .unwrap()
}

/// Binary symmetric observation: `Y = X` flipped with probability `eps`.
pub fn bsc(eps: f64) -> ConditionalPmf {
    ConditionalPmf::new(vec![vec![1.0 - eps, eps], vec![eps, 1.0 - eps]]).unwrap()
}

/// Full table over `(X, Y_1..Y_K, U_1..U_K)`; variable `0` is `X`,
/// `1..=K` are the observations, `K+1..=2K` the descriptions.
pub struct Brute {
    pub k: usize,
    pub sizes: Vec<usize>,
    pub cells: Vec<(Vec<usize>, f64)>,
}

impl Brute {
    pub fn new(source: &DiscreteSource, encoders: &EncoderSet) -> Self {
        let k = source.num_encoders();
        let mut sizes = vec![source.x_size()];
        sizes.extend(source.y_sizes());
        sizes.extend(encoders.u_sizes());
        let total: usize = sizes.iter().product();
        let mut cells = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut vals = vec![0; sizes.len()];
            for i in (0..sizes.len()).rev() {
                vals[i] = rem % sizes[i];
                rem /= sizes[i];
            }
            let x = vals[0];
            let mut p = source.px().probs()[x];
            for j in 0..k {
                p *= source.channel(j).get(x, vals[1 + j]);
                p *= encoders.encoder(j).get(vals[1 + j], vals[1 + k + j]);
            }
            cells.push((vals, p));
        }
        Brute { k, sizes, cells }
    }

    pub fn x(&self) -> usize {
        0
    }
    pub fn y(&self, j: usize) -> usize {
        1 + j
    }
    pub fn u(&self, j: usize) -> usize {
        1 + self.k + j
    }
    pub fn ys(&self) -> Vec<usize> {
        (0..self.k).map(|j| self.y(j)).collect()
    }
    pub fn us(&self) -> Vec<usize> {
        (0..self.k).map(|j| self.u(j)).collect()
    }

    /// Marginal over `vars`, keyed by their values in the given order.
    pub fn marginal(&self, vars: &[usize]) -> std::collections::BTreeMap<Vec<usize>, f64> {
        let mut m = std::collections::BTreeMap::new();
        for (vals, p) in &self.cells {
            let key: Vec<usize> = vars.iter().map(|&v| vals[v]).collect();
            *m.entry(key).or_insert(0.0) += p;
        }
        m
    }

    pub fn h(&self, vars: &[usize]) -> f64 {
        self.marginal(vars)
            .values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// `I(A; B | C)`.
    pub fn mi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let cat = |xs: &[&[usize]]| xs.concat();
        self.h(&cat(&[a, c])) + self.h(&cat(&[b, c])) - self.h(&cat(&[a, b, c])) - self.h(c)
    }

    /// `H(A | C)`.
    pub fn h_cond(&self, a: &[usize], c: &[usize]) -> f64 {
        self.h(&[a, c].concat()) - self.h(c)
    }

    /// `p(a | c)` for a single target variable, keyed by the conditioning values.
    pub fn conditional(&self, a: usize, c: &[usize]) -> std::collections::BTreeMap<Vec<usize>, Vec<f64>> {
        let joint = self.marginal(&[c, &[a]].concat());
        let mut out: std::collections::BTreeMap<Vec<usize>, Vec<f64>> = Default::default();
        for (key, p) in joint {
            let (cond, target) = key.split_at(c.len());
            out.entry(cond.to_vec()).or_insert_with(|| vec![0.0; self.sizes[a]])[target[0]] += p;
        }
        for row in out.values_mut() {
            let t: f64 = row.iter().sum();
            if t > 0.0 {
                row.iter_mut().for_each(|v| *v /= t);
            }
        }
        out
    }
}

/// `Σ p ln(p/q)` written out independently of the crate.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| if *b > 0.0 { a * (a / b).ln() } else { f64::INFINITY })
        .sum()
}
