use rand::Rng;

use super::linalg::{
    block_diag, check_pd, conditional_covariance, eigenvalues, gaussian_mi, is_hermitian, pd_inv_sqrt, psd_sqrt,
    vstack, Mat,
};
use super::Scalar;
use crate::{DibError, Result, Subset};

/// Source covariance `Σ_x`, channels `H_k` (`M_k × N`) and observation noise
/// covariances `Σ_{n_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSource<T: Scalar = f64> {
    sigma_x: Mat<T>,
    h: Vec<Mat<T>>,
    sigma_n: Vec<Mat<T>>,
    h_bar: Vec<Mat<T>>,
}

impl<T: Scalar> GaussianSource<T> {
    pub fn new(sigma_x: Mat<T>, h: Vec<Mat<T>>, sigma_n: Vec<Mat<T>>) -> Result<Self> {
        if h.is_empty() || h.len() > Subset::MAX_ENCODERS {
            return Err(DibError::InvalidParameter(format!(
                "need between 1 and {} encoders, got {}",
                Subset::MAX_ENCODERS,
                h.len()
            )));
        }
        if h.len() != sigma_n.len() {
            return Err(DibError::DimensionMismatch(format!(
                "{} channels but {} noise covariances",
                h.len(),
                sigma_n.len()
            )));
        }
        check_pd(&sigma_x, "source covariance")?;
        let n = sigma_x.nrows();
        for (k, (hk, nk)) in h.iter().zip(&sigma_n).enumerate() {
            if hk.ncols() != n || nk.nrows() != hk.nrows() || !nk.is_square() || hk.nrows() == 0 {
                return Err(DibError::DimensionMismatch(format!(
                    "encoder {}: H is {}x{}, noise covariance {}x{}, source dimension {n}",
                    k + 1,
                    hk.nrows(),
                    hk.ncols(),
                    nk.nrows(),
                    nk.ncols()
                )));
            }
            check_pd(nk, &format!("noise covariance {}", k + 1))?;
        }
        let sx_half = psd_sqrt(&sigma_x);
        let h_bar = h
            .iter()
            .zip(&sigma_n)
            .map(|(hk, nk)| Ok(pd_inv_sqrt(nk)? * hk * &sx_half))
            .collect::<Result<_>>()?;
        Ok(GaussianSource { sigma_x, h, sigma_n, h_bar })
    }

    /// Seeded random instance: `Σ_x = G G^H / N + 0.3 I`, standard normal
    /// `H_k`, and noise covariances drawn like `Σ_x`, in that order.
    pub fn random<R: Rng + ?Sized>(x_dim: usize, y_dims: &[usize], rng: &mut R) -> Result<Self> {
        if x_dim == 0 || y_dims.contains(&0) {
            return Err(DibError::InvalidParameter("dimensions must be positive".into()));
        }
        let sigma_x = random_pd(x_dim, rng);
        let h = y_dims.iter().map(|&m| random_mat(m, x_dim, rng)).collect();
        let sigma_n = y_dims.iter().map(|&m| random_pd(m, rng)).collect();
        Self::new(sigma_x, h, sigma_n)
    }

    pub fn complex_mode(&self) -> bool {
        T::COMPLEX
    }

    pub fn num_encoders(&self) -> usize {
        self.h.len()
    }

    pub fn x_dim(&self) -> usize {
        self.sigma_x.nrows()
    }

    pub fn y_dim(&self, k: usize) -> usize {
        self.h[k].nrows()
    }

    pub fn y_dims(&self) -> Vec<usize> {
        self.h.iter().map(|h| h.nrows()).collect()
    }

    pub fn sigma_x(&self) -> &Mat<T> {
        &self.sigma_x
    }

    pub fn h(&self, k: usize) -> &Mat<T> {
        &self.h[k]
    }

    pub fn sigma_n(&self, k: usize) -> &Mat<T> {
        &self.sigma_n[k]
    }

    /// `Σ_{n_k}^{-1/2} H_k Σ_x^{1/2}`.
    pub fn normalized_channel(&self, k: usize) -> &Mat<T> {
        &self.h_bar[k]
    }

    /// `H_k Σ_x H_k^H + Σ_{n_k}`.
    pub fn sigma_y(&self, k: usize) -> Mat<T> {
        &self.h[k] * &self.sigma_x * self.h[k].adjoint() + &self.sigma_n[k]
    }

    /// All observations stacked into one encoder: `H = [H_1; ..; H_K]` and
    /// block-diagonal noise.
    pub fn stacked(&self) -> Self {
        let h = vstack(&self.h);
        let n = block_diag(&self.sigma_n);
        GaussianSource::new(self.sigma_x.clone(), vec![h], vec![n]).expect("stacking preserves validity")
    }

    /// `I(X; Y_1..Y_K)`.
    pub fn i_x_yall(&self) -> Result<f64> {
        let st = self.stacked();
        let h = &st.h[0];
        let cross = &self.sigma_x * h.adjoint();
        let cond = conditional_covariance(&self.sigma_x, &cross, &st.sigma_y(0))?;
        gaussian_mi(&self.sigma_x, &cond)
    }
}

fn random_mat<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat<T> {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = T::standard_normal(rng);
        }
    }
    m
}

fn random_pd<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<T> {
    let g = random_mat::<T, R>(n, n, rng);
    let mut m = &g * g.adjoint() / T::from_real(n as f64);
    for i in 0..n {
        m[(i, i)] += T::from_real(0.3);
    }
    m
}

/// Linear Gaussian test channels `U_k = A_k Y_k + Z_k`, `Z_k ~ N(0, Σ_{z_k})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearEncoderSet<T: Scalar = f64> {
    a: Vec<Mat<T>>,
    sigma_z: Vec<Mat<T>>,
}

impl<T: Scalar> LinearEncoderSet<T> {
    pub fn new(a: Vec<Mat<T>>, sigma_z: Vec<Mat<T>>) -> Result<Self> {
        if a.len() != sigma_z.len() || a.is_empty() {
            return Err(DibError::DimensionMismatch(format!(
                "{} projections but {} noise covariances",
                a.len(),
                sigma_z.len()
            )));
        }
        for (k, (ak, zk)) in a.iter().zip(&sigma_z).enumerate() {
            if zk.nrows() != ak.nrows() || !zk.is_square() || ak.nrows() == 0 {
                return Err(DibError::DimensionMismatch(format!(
                    "encoder {}: A is {}x{}, Σ_z is {}x{}",
                    k + 1,
                    ak.nrows(),
                    ak.ncols(),
                    zk.nrows(),
                    zk.ncols()
                )));
            }
            check_pd(zk, &format!("description noise covariance {}", k + 1))?;
        }
        Ok(LinearEncoderSet { a, sigma_z })
    }

    /// `A_k = 0`, `Σ_{z_k} = I` with description dimensions `dims`.
    pub fn zeros(source: &GaussianSource<T>, dims: &[usize]) -> Result<Self> {
        check_dims(source, dims)?;
        let a = dims.iter().zip(source.y_dims()).map(|(&d, m)| Mat::zeros(d, m)).collect();
        let z = dims.iter().map(|&d| Mat::identity(d, d)).collect();
        Self::new(a, z)
    }

    /// Entries of `A_k` i.i.d. normal with standard deviation `scale`, `Σ_{z_k} = I`.
    pub fn random<R: Rng + ?Sized>(
        source: &GaussianSource<T>,
        dims: &[usize],
        scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        check_dims(source, dims)?;
        let mut a = Vec::with_capacity(dims.len());
        for (k, &d) in dims.iter().enumerate() {
            let m = source.y_dim(k);
            let mut ak = Mat::zeros(d, m);
            for i in 0..d {
                for j in 0..m {
                    ak[(i, j)] = T::standard_normal(rng) * T::from_real(scale);
                }
            }
            a.push(ak);
        }
        let z = dims.iter().map(|&d| Mat::identity(d, d)).collect();
        Self::new(a, z)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, k: usize) -> &Mat<T> {
        &self.a[k]
    }

    pub fn sigma_z(&self, k: usize) -> &Mat<T> {
        &self.sigma_z[k]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.a.iter().map(|a| a.nrows()).collect()
    }

    pub(crate) fn replace(&mut self, k: usize, a: Mat<T>, sigma_z: Mat<T>) {
        self.a[k] = a;
        self.sigma_z[k] = sigma_z;
    }

    pub fn check_compatible(&self, source: &GaussianSource<T>) -> Result<()> {
        if self.len() != source.num_encoders() {
            return Err(DibError::DimensionMismatch(format!(
                "{} encoders for a source with {}",
                self.len(),
                source.num_encoders()
            )));
        }
        for (k, a) in self.a.iter().enumerate() {
            if a.ncols() != source.y_dim(k) {
                return Err(DibError::DimensionMismatch(format!(
                    "encoder {}: A has {} columns, observation has dimension {}",
                    k + 1,
                    a.ncols(),
                    source.y_dim(k)
                )));
            }
        }
        Ok(())
    }
}

fn check_dims<T: Scalar>(source: &GaussianSource<T>, dims: &[usize]) -> Result<()> {
    if dims.len() != source.num_encoders() || dims.contains(&0) {
        return Err(DibError::InvalidParameter(format!(
            "need {} positive description dimensions, got {dims:?}",
            source.num_encoders()
        )));
    }
    Ok(())
}

/// Normalized MMSE matrices `0 ⪯ B_k ⪯ I`, one per encoder (`M_k × M_k`).
#[derive(Clone, Debug, PartialEq)]
pub struct BMatrixSet<T: Scalar = f64> {
    b: Vec<Mat<T>>,
}

/// Eigenvalue slack when validating `0 ⪯ B ⪯ I`.
pub const B_SLACK: f64 = 1e-9;

impl<T: Scalar> BMatrixSet<T> {
    pub fn new(b: Vec<Mat<T>>) -> Result<Self> {
        for (k, bk) in b.iter().enumerate() {
            if !is_hermitian(bk, 1e-10) {
                return Err(DibError::InvalidParameter(format!("B_{} is not Hermitian", k + 1)));
            }
            let ev = eigenvalues(bk);
            if ev.iter().any(|&v| !(-B_SLACK..=1.0 + B_SLACK).contains(&v)) {
                return Err(DibError::InvalidParameter(format!(
                    "B_{} has eigenvalues outside [0, 1]: {:?}",
                    k + 1,
                    ev.as_slice()
                )));
            }
        }
        Ok(BMatrixSet { b })
    }

    pub fn zeros(source: &GaussianSource<T>) -> Self {
        BMatrixSet { b: source.y_dims().into_iter().map(|m| Mat::zeros(m, m)).collect() }
    }

    pub fn identity(source: &GaussianSource<T>) -> Self {
        BMatrixSet { b: source.y_dims().into_iter().map(|m| Mat::identity(m, m)).collect() }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn b(&self, k: usize) -> &Mat<T> {
        &self.b[k]
    }

    pub fn matrices(&self) -> &[Mat<T>] {
        &self.b
    }

    pub fn check_compatible(&self, source: &GaussianSource<T>) -> Result<()> {
        if self.len() != source.num_encoders()
            || self.b.iter().zip(source.y_dims()).any(|(b, m)| b.nrows() != m)
        {
            return Err(DibError::DimensionMismatch("B matrices do not match the observations".into()));
        }
        Ok(())
    }
}
