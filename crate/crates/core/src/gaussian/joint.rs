use std::sync::atomic::{AtomicBool, Ordering};

use super::linalg::{conditional_covariance, gaussian_mi_flagged, hermitian_part, Mat};
use super::{GaussianSource, LinearEncoderSet, Scalar};
use crate::{Result, Subset};

/// Second-order statistics of `(X, Y_1..Y_K, U_1..U_K)` induced by linear
/// test channels.
#[derive(Debug)]
pub struct GaussianJoint<'a, T: Scalar = f64> {
    source: &'a GaussianSource<T>,
    encoders: &'a LinearEncoderSet<T>,
    offsets: Vec<usize>,
    sigma_y: Vec<Mat<T>>,
    sigma_uall: Mat<T>,
    sigma_x_uall: Mat<T>,
    sigma_u_given_x: Vec<Mat<T>>,
    sigma_y_given_rest: Vec<Mat<T>>,
    sigma_u_given_rest: Vec<Mat<T>>,
    pseudo: AtomicBool,
}

/// Covariances of the model under `encoders`.
pub fn induce_gaussian_joint<'a, T: Scalar>(
    source: &'a GaussianSource<T>,
    encoders: &'a LinearEncoderSet<T>,
) -> Result<GaussianJoint<'a, T>> {
    GaussianJoint::new(source, encoders)
}

impl<'a, T: Scalar> GaussianJoint<'a, T> {
    pub fn new(source: &'a GaussianSource<T>, encoders: &'a LinearEncoderSet<T>) -> Result<Self> {
        encoders.check_compatible(source)?;
        let kk = source.num_encoders();
        let sx = source.sigma_x();
        let dims = encoders.dims();
        let mut offsets = vec![0; kk + 1];
        for k in 0..kk {
            offsets[k + 1] = offsets[k] + dims[k];
        }
        let total = offsets[kk];

        let sigma_y: Vec<Mat<T>> = (0..kk).map(|k| source.sigma_y(k)).collect();
        // A_k H_k, so that U_k = (A_k H_k) X + A_k N_k + Z_k
        let ah: Vec<Mat<T>> = (0..kk).map(|k| encoders.a(k) * source.h(k)).collect();

        let mut sigma_uall = Mat::zeros(total, total);
        let mut sigma_x_uall = Mat::zeros(source.x_dim(), total);
        for j in 0..kk {
            let xj = sx * ah[j].adjoint();
            sigma_x_uall.view_mut((0, offsets[j]), (source.x_dim(), dims[j])).copy_from(&xj);
            for k in 0..kk {
                let block = if j == k {
                    encoders.a(k) * &sigma_y[k] * encoders.a(k).adjoint() + encoders.sigma_z(k)
                } else {
                    &ah[j] * sx * ah[k].adjoint()
                };
                sigma_uall.view_mut((offsets[j], offsets[k]), (dims[j], dims[k])).copy_from(&block);
            }
        }

        let sigma_u_given_x = (0..kk)
            .map(|k| {
                let a = encoders.a(k);
                a * source.sigma_n(k) * a.adjoint() + encoders.sigma_z(k)
            })
            .collect();

        let mut sigma_y_given_rest = Vec::with_capacity(kk);
        let mut sigma_u_given_rest = Vec::with_capacity(kk);
        for k in 0..kk {
            let rest: Vec<usize> = (0..kk)
                .filter(|&j| j != k)
                .flat_map(|j| offsets[j]..offsets[j + 1])
                .collect();
            let cond = if rest.is_empty() {
                sigma_y[k].clone()
            } else {
                // Σ_{y_k, u_j} = H_k Σ_x H_j^H A_j^H for j ≠ k
                let hx = source.h(k) * sx;
                let mut cross = Mat::zeros(source.y_dim(k), rest.len());
                let mut col = 0;
                for j in (0..kk).filter(|&j| j != k) {
                    let block = &hx * ah[j].adjoint();
                    cross.view_mut((0, col), (source.y_dim(k), dims[j])).copy_from(&block);
                    col += dims[j];
                }
                let s_rest = sigma_uall.select_rows(&rest).select_columns(&rest);
                conditional_covariance(&sigma_y[k], &cross, &s_rest)?
            };
            let a = encoders.a(k);
            sigma_u_given_rest.push(hermitian_part(
                &(a * &cond * a.adjoint() + encoders.sigma_z(k)),
            ));
            sigma_y_given_rest.push(cond);
        }

        Ok(GaussianJoint {
            source,
            encoders,
            offsets,
            sigma_y,
            sigma_uall: hermitian_part(&sigma_uall),
            sigma_x_uall,
            sigma_u_given_x,
            sigma_y_given_rest,
            sigma_u_given_rest,
            pseudo: AtomicBool::new(false),
        })
    }

    pub fn source(&self) -> &'a GaussianSource<T> {
        self.source
    }

    pub fn encoders(&self) -> &'a LinearEncoderSet<T> {
        self.encoders
    }

    pub fn num_encoders(&self) -> usize {
        self.sigma_y.len()
    }

    /// `Σ_{y_k}`.
    pub fn sigma_y(&self, k: usize) -> &Mat<T> {
        &self.sigma_y[k]
    }

    /// `Σ_{y_k|x} = Σ_{n_k}`.
    pub fn sigma_y_given_x(&self, k: usize) -> &Mat<T> {
        self.source.sigma_n(k)
    }

    /// `Σ_{u_k} = A_k Σ_{y_k} A_k^H + Σ_{z_k}`.
    pub fn sigma_u(&self, k: usize) -> Mat<T> {
        let r = self.offsets[k]..self.offsets[k + 1];
        self.sigma_uall.view((r.start, r.start), (r.len(), r.len())).into_owned()
    }

    /// `Σ_{u_k|x} = A_k Σ_{n_k} A_k^H + Σ_{z_k}`.
    pub fn sigma_u_given_x(&self, k: usize) -> &Mat<T> {
        &self.sigma_u_given_x[k]
    }

    /// `Σ_{y_k|u_{K\k}}`; equals `Σ_{y_k}` when `K = 1`.
    pub fn sigma_y_given_rest(&self, k: usize) -> &Mat<T> {
        &self.sigma_y_given_rest[k]
    }

    /// `Σ_{u_k|u_{K\k}} = A_k Σ_{y_k|u_{K\k}} A_k^H + Σ_{z_k}`.
    pub fn sigma_u_given_rest(&self, k: usize) -> &Mat<T> {
        &self.sigma_u_given_rest[k]
    }

    /// Covariance of the stacked descriptions `(U_1, .., U_K)`.
    pub fn sigma_uall(&self) -> &Mat<T> {
        &self.sigma_uall
    }

    /// Cross-covariance `Σ_{x, (u_1..u_K)}`.
    pub fn sigma_x_uall(&self) -> &Mat<T> {
        &self.sigma_x_uall
    }

    /// Row/column indices of `U_k` inside [`Self::sigma_uall`].
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    fn indices(&self, subset: Subset) -> Vec<usize> {
        subset.indices().flat_map(|k| self.block(k)).collect()
    }

    /// `Σ_{x|u_S}`; `Σ_x` for the empty set.
    pub fn sigma_x_given_u_subset(&self, subset: Subset) -> Result<Mat<T>> {
        let idx = self.indices(subset);
        let cross = self.sigma_x_uall.select_columns(&idx);
        let s_u = self.sigma_uall.select_rows(&idx).select_columns(&idx);
        conditional_covariance(self.source.sigma_x(), &cross, &s_u)
    }

    pub fn sigma_x_given_uall(&self) -> Result<Mat<T>> {
        self.sigma_x_given_u_subset(Subset::full(self.num_encoders()))
    }

    fn mi(&self, a: &Mat<T>, a_given_b: &Mat<T>) -> Result<f64> {
        let (v, pseudo) = gaussian_mi_flagged(a, a_given_b)?;
        if pseudo {
            self.pseudo.store(true, Ordering::Relaxed);
        }
        Ok(v)
    }

    /// Whether any information term so far needed a pseudo-log-det.
    pub fn used_pseudo_logdet(&self) -> bool {
        self.pseudo.load(Ordering::Relaxed)
    }

    /// `I(X; U_S)`.
    pub fn i_x_u_subset(&self, subset: Subset) -> Result<f64> {
        if subset.is_empty() {
            return Ok(0.0);
        }
        self.mi(self.source.sigma_x(), &self.sigma_x_given_u_subset(subset)?)
    }

    /// `I(X; U_1..U_K)`.
    pub fn i_x_uall(&self) -> Result<f64> {
        self.i_x_u_subset(Subset::full(self.num_encoders()))
    }

    /// `I(X; U_k) = I(U_k; X)` from the description side.
    pub fn i_x_u(&self, k: usize) -> Result<f64> {
        self.mi(&self.sigma_u(k), &self.sigma_u_given_x[k])
    }

    /// `I(Y_k; U_k)`.
    pub fn i_y_u(&self, k: usize) -> Result<f64> {
        self.mi(&self.sigma_u(k), self.encoders.sigma_z(k))
    }

    /// `I(Y_1..Y_K; U_1..U_K)`, using that the descriptions are independent
    /// given the observations.
    pub fn i_yall_uall(&self) -> Result<f64> {
        let kk = self.num_encoders();
        let noise = super::linalg::block_diag(&(0..kk).map(|k| self.encoders.sigma_z(k).clone()).collect::<Vec<_>>());
        self.mi(&self.sigma_uall, &noise)
    }
}
