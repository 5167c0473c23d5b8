//! Gaussian references assembled from the full covariance of
//! `(X, Y_1..Y_K, U_1..U_K)` with explicit inverses and determinants.

use dib_core::gaussian::{GaussianSource, LinearEncoderSet, Scalar};
use nalgebra::DMatrix;
use rand::Rng;

pub type M<T> = DMatrix<T>;

pub fn rand_mat<T: Scalar, R: Rng>(rng: &mut R, r: usize, c: usize) -> M<T> {
    M::from_fn(r, c, |_, _| T::standard_normal(rng))
}

/// Well-conditioned random covariance.
pub fn rand_pd<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> M<T> {
    let a: M<T> = rand_mat(rng, n, n);
    let g = &a * a.adjoint() * T::from_real(1.0 / n as f64);
    g + M::identity(n, n) * T::from_real(0.3)
}

pub fn rand_source<T: Scalar, R: Rng>(rng: &mut R, n: usize, m: &[usize]) -> GaussianSource<T> {
    let sx = rand_pd(rng, n);
    let h = m.iter().map(|&mk| rand_mat(rng, mk, n)).collect();
    let sn = m.iter().map(|&mk| rand_pd(rng, mk)).collect();
    GaussianSource::new(sx, h, sn).unwrap()
}

pub fn rand_encoders<T: Scalar, R: Rng>(rng: &mut R, source: &GaussianSource<T>, d: &[usize]) -> LinearEncoderSet<T> {
    let a = d.iter().enumerate().map(|(k, &dk)| rand_mat(rng, dk, source.y_dim(k))).collect();
    let z = d.iter().map(|&dk| rand_pd(rng, dk)).collect();
    LinearEncoderSet::new(a, z).unwrap()
}

pub fn scalar_source(sx: f64, h: &[f64], sn: &[f64]) -> GaussianSource<f64> {
    GaussianSource::new(
        M::from_element(1, 1, sx),
        h.iter().map(|&v| M::from_element(1, 1, v)).collect(),
        sn.iter().map(|&v| M::from_element(1, 1, v)).collect(),
    )
    .unwrap()
}

pub fn scalar_encoders(a: &[f64], z: &[f64]) -> LinearEncoderSet<f64> {
    LinearEncoderSet::new(
        a.iter().map(|&v| M::from_element(1, 1, v)).collect(),
        z.iter().map(|&v| M::from_element(1, 1, v)).collect(),
    )
    .unwrap()
}

/// Which block of the stacked vector.
#[derive(Clone, Copy, Debug)]
pub enum V {
    X,
    Y(usize),
    U(usize),
}

pub struct Stacked<T: Scalar> {
    pub cov: M<T>,
    x: std::ops::Range<usize>,
    y: Vec<std::ops::Range<usize>>,
    u: Vec<std::ops::Range<usize>>,
}

impl<T: Scalar> Stacked<T> {
    /// Writes `(X, Y, U) = L (X, N_1..N_K, Z_1..Z_K)` and forms `L Σ_w L^H`.
    pub fn new(source: &GaussianSource<T>, enc: &LinearEncoderSet<T>) -> Self {
        let k = source.num_encoders();
        let n = source.x_dim();
        let m: Vec<usize> = source.y_dims();
        let d: Vec<usize> = enc.dims();
        let w_dim = n + m.iter().sum::<usize>() + d.iter().sum::<usize>();
        let mut sw = M::<T>::zeros(w_dim, w_dim);
        let mut off = 0;
        let put = |mat: &M<T>, off: &mut usize, sw: &mut M<T>| {
            sw.view_mut((*off, *off), mat.shape()).copy_from(mat);
            *off += mat.nrows();
        };
        put(source.sigma_x(), &mut off, &mut sw);
        let n_off: Vec<usize> = (0..k).map(|j| n + m[..j].iter().sum::<usize>()).collect();
        for j in 0..k {
            put(source.sigma_n(j), &mut off, &mut sw);
        }
        let z_off: Vec<usize> = (0..k).map(|j| off + d[..j].iter().sum::<usize>()).collect();
        for j in 0..k {
            put(enc.sigma_z(j), &mut off, &mut sw);
        }

        let total = n + m.iter().sum::<usize>() + d.iter().sum::<usize>();
        let mut l = M::<T>::zeros(total, w_dim);
        let x = 0..n;
        l.view_mut((0, 0), (n, n)).copy_from(&M::identity(n, n));
        let mut row = n;
        let mut y = Vec::new();
        for j in 0..k {
            l.view_mut((row, 0), (m[j], n)).copy_from(source.h(j));
            l.view_mut((row, n_off[j]), (m[j], m[j])).copy_from(&M::identity(m[j], m[j]));
            y.push(row..row + m[j]);
            row += m[j];
        }
        let mut u = Vec::new();
        for j in 0..k {
            let a = enc.a(j);
            l.view_mut((row, 0), (d[j], n)).copy_from(&(a * source.h(j)));
            l.view_mut((row, n_off[j]), (d[j], m[j])).copy_from(a);
            l.view_mut((row, z_off[j]), (d[j], d[j])).copy_from(&M::identity(d[j], d[j]));
            u.push(row..row + d[j]);
            row += d[j];
        }
        Stacked { cov: &l * sw * l.adjoint(), x, y, u }
    }

    fn idx(&self, vars: &[V]) -> Vec<usize> {
        vars.iter()
            .flat_map(|v| match *v {
                V::X => self.x.clone(),
                V::Y(j) => self.y[j].clone(),
                V::U(j) => self.u[j].clone(),
            })
            .collect()
    }

    pub fn cov_of(&self, a: &[V]) -> M<T> {
        let i = self.idx(a);
        self.cov.select_rows(&i).select_columns(&i)
    }

    pub fn cross(&self, a: &[V], b: &[V]) -> M<T> {
        self.cov.select_rows(&self.idx(a)).select_columns(&self.idx(b))
    }

    /// `Σ_{a|b}` with an explicit inverse.
    pub fn cond(&self, a: &[V], b: &[V]) -> M<T> {
        if b.is_empty() {
            return self.cov_of(a);
        }
        let inv = self.cov_of(b).try_inverse().unwrap();
        let c = self.cross(a, b);
        self.cov_of(a) - &c * inv * c.adjoint()
    }

    /// `I(A; B | C)` from determinants.
    pub fn mi(&self, a: &[V], b: &[V], c: &[V]) -> f64 {
        let bc: Vec<V> = b.iter().chain(c).copied().collect();
        T::MI_FACTOR * (logdet(&self.cond(a, c)) - logdet(&self.cond(a, &bc)))
    }
}

pub fn logdet<T: Scalar>(m: &M<T>) -> f64 {
    m.clone().determinant().real().ln()
}

pub fn max_diff<T: Scalar>(a: &M<T>, b: &M<T>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().map(|v| v.modulus()).fold(0.0, f64::max)
}
