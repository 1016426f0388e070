//! State estimation: the linear Kalman filter and the left-invariant
//! prediction/update recursion on Lie groups.
//!
//! Covariance updates use Joseph form everywhere, posteriors are symmetrized
//! and eigenvalue-floored after every operation, and innovation systems are
//! solved through a positive-definite factorization guarded by a condition
//! number limit.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use thiserror::Error;

use crate::lie::{LieError, MatrixLieGroup};
use crate::scalar::{real, Scalar};

/// Innovation systems with a condition number at or above this are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Posterior covariances must have eigenvalues above this after roundoff.
const EIGEN_TOLERANCE: f64 = -1e-10;

/// Fixed-point tolerance and iteration cap for the group mean.
const MEAN_STEP_TOLERANCE: f64 = 1e-10;
const MEAN_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EstimationError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("innovation covariance is singular or ill-conditioned (condition {condition:e})")]
    IllConditionedInnovation { condition: f64 },
    #[error("need at least two samples to estimate group moments, got {got}")]
    InsufficientSamples { got: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Symmetrize and clamp small negative eigenvalues introduced by roundoff.
pub(crate) fn sanitize_covariance<T: Scalar>(cov: &DMatrix<T>) -> DMatrix<T> {
    let half: T = real(0.5);
    let sym = (cov + cov.transpose()) * half;
    let eigen = sym.clone().symmetric_eigen();
    let min = eigen
        .eigenvalues
        .iter()
        .copied()
        .fold(T::zero(), |a, b| a.min(b));
    if min >= T::zero() {
        return sym;
    }
    debug_assert!(
        min >= real(EIGEN_TOLERANCE),
        "covariance lost positive semidefiniteness: min eigenvalue {}",
        min
    );
    let clamped = DMatrix::from_diagonal(&eigen.eigenvalues.map(|l| l.max(T::zero())));
    let rebuilt = &eigen.eigenvectors * clamped * eigen.eigenvectors.transpose();
    (&rebuilt + rebuilt.transpose()) * half
}

pub(crate) fn sanitize_covariance_static<T: Scalar, const D: usize>(
    cov: &SMatrix<T, D, D>,
) -> SMatrix<T, D, D> {
    let dynamic = DMatrix::from_iterator(D, D, cov.iter().copied());
    let clean = sanitize_covariance(&dynamic);
    SMatrix::from_iterator(clean.iter().copied())
}

/// Largest-to-smallest eigenvalue ratio of a symmetric matrix.
fn condition_number<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let eigen = m.clone().symmetric_eigen();
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for l in eigen.eigenvalues.iter() {
        let l = l.to_f64_lossy();
        min = min.min(l);
        max = max.max(l.abs());
    }
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn check_innovation<T: Scalar>(s: &DMatrix<T>) -> Result<(), EstimationError> {
    let condition = condition_number(s);
    if !condition.is_finite() || condition >= CONDITION_LIMIT {
        return Err(EstimationError::IllConditionedInnovation { condition });
    }
    Ok(())
}

/// Euclidean posterior: mean vector plus covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBelief<T: Scalar> {
    pub mean: DVector<T>,
    pub cov: DMatrix<T>,
}

impl<T: Scalar> GaussianBelief<T> {
    pub fn new(mean: DVector<T>, cov: DMatrix<T>) -> Result<Self, EstimationError> {
        if cov.nrows() != mean.len() || !cov.is_square() {
            return Err(EstimationError::DimensionMismatch {
                context: format!(
                    "mean has {} entries but covariance is {}x{}",
                    mean.len(),
                    cov.nrows(),
                    cov.ncols()
                ),
            });
        }
        Ok(GaussianBelief {
            mean,
            cov: sanitize_covariance(&cov),
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Discrete-time linear-Gaussian system `p' = A p + B u + eps`, `z = H p + nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T: Scalar> {
    pub a: DMatrix<T>,
    pub b: DMatrix<T>,
    pub h: DMatrix<T>,
    pub process_cov: DMatrix<T>,
    pub meas_cov: DMatrix<T>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(
        a: DMatrix<T>,
        b: DMatrix<T>,
        h: DMatrix<T>,
        process_cov: DMatrix<T>,
        meas_cov: DMatrix<T>,
    ) -> Result<Self, EstimationError> {
        let n = a.nrows();
        let d = h.nrows();
        let consistent = a.is_square()
            && b.nrows() == n
            && h.ncols() == n
            && process_cov.nrows() == n
            && process_cov.is_square()
            && meas_cov.nrows() == d
            && meas_cov.is_square();
        if !consistent {
            return Err(EstimationError::DimensionMismatch {
                context: "linear system blocks are dimensionally inconsistent".into(),
            });
        }
        if meas_cov.clone().cholesky().is_none() {
            return Err(EstimationError::IllConditionedInnovation {
                condition: f64::INFINITY,
            });
        }
        Ok(LinearSystem {
            a,
            b,
            h,
            process_cov,
            meas_cov,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn control_dim(&self) -> usize {
        self.b.ncols()
    }
}

/// Kalman prediction: `mean' = A mean + B u`, `cov' = A cov A^T + process_cov`.
pub fn kf_predict<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    control: &DVector<T>,
) -> Result<GaussianBelief<T>, EstimationError> {
    if belief.dim() != sys.state_dim() || control.len() != sys.control_dim() {
        return Err(EstimationError::DimensionMismatch {
            context: "belief or control does not match the system".into(),
        });
    }
    let mean = &sys.a * &belief.mean + &sys.b * control;
    let cov = &sys.a * &belief.cov * sys.a.transpose() + &sys.process_cov;
    Ok(GaussianBelief {
        mean,
        cov: sanitize_covariance(&cov),
    })
}

/// Kalman measurement update in Joseph form.
pub fn kf_update<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    measurement: &DVector<T>,
) -> Result<GaussianBelief<T>, EstimationError> {
    if measurement.len() != sys.h.nrows() || belief.dim() != sys.state_dim() {
        return Err(EstimationError::DimensionMismatch {
            context: "measurement does not match the observation model".into(),
        });
    }
    let h_cov = &sys.h * &belief.cov;
    let innovation_cov = {
        let s = &h_cov * sys.h.transpose() + &sys.meas_cov;
        (&s + s.transpose()) * real::<T>(0.5)
    };
    check_innovation(&innovation_cov)?;
    let chol = innovation_cov
        .clone()
        .cholesky()
        .ok_or(EstimationError::IllConditionedInnovation {
            condition: f64::INFINITY,
        })?;
    // K = cov H^T S^{-1} = (S^{-1} H cov)^T by symmetry of S and cov.
    let gain = chol.solve(&h_cov).transpose();
    let residual = measurement - &sys.h * &belief.mean;
    let mean = &belief.mean + &gain * residual;
    let identity = DMatrix::<T>::identity(belief.dim(), belief.dim());
    let i_kh = identity - &gain * &sys.h;
    let cov = &i_kh * &belief.cov * i_kh.transpose() + &gain * &sys.meas_cov * gain.transpose();
    Ok(GaussianBelief {
        mean,
        cov: sanitize_covariance(&cov),
    })
}

/// Group-valued mean plus covariance in left-invariant algebra coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LieBelief<T: Scalar, G, const D: usize> {
    pub mean: G,
    pub cov: SMatrix<T, D, D>,
}

impl<T: Scalar, G, const D: usize> LieBelief<T, G, D> {
    pub fn new(mean: G, cov: SMatrix<T, D, D>) -> Self {
        LieBelief {
            mean,
            cov: sanitize_covariance_static(&cov),
        }
    }
}

/// Prediction on the group: `mean' = mean U`,
/// `cov' = Ad(U^-1) cov Ad(U^-1)^T + process_cov`.
pub fn lie_predict<T, G, const D: usize, const P: usize>(
    belief: &LieBelief<T, G, D>,
    motion: &G,
    process_cov: &SMatrix<T, D, D>,
) -> LieBelief<T, G, D>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    let ad = motion.inverse().adjoint();
    let cov = ad * belief.cov * ad.transpose() + process_cov;
    LieBelief {
        mean: belief.mean.compose(motion),
        cov: sanitize_covariance_static(&cov),
    }
}

fn static_condition<T: Scalar, const P: usize>(
    s: &SMatrix<T, P, P>,
) -> Result<(), EstimationError> {
    let dynamic = DMatrix::from_iterator(P, P, s.iter().copied());
    check_innovation(&dynamic)
}

fn joseph_static<T: Scalar, const D: usize, const P: usize>(
    cov_prior: &SMatrix<T, D, D>,
    gain: &SMatrix<T, D, P>,
    h: &SMatrix<T, P, D>,
    meas_cov: &SMatrix<T, P, P>,
) -> SMatrix<T, D, D> {
    let i_kh = SMatrix::<T, D, D>::identity() - gain * h;
    let cov = i_kh * cov_prior * i_kh.transpose() + gain * meas_cov * gain.transpose();
    sanitize_covariance_static(&cov)
}

/// Update with a full pose measurement `z = g Exp(noise^)`.
///
/// Innovation `r = Log((mean^-)^-1 z)` with identity measurement matrix;
/// the corrected mean is `mean^- Exp((K r)^)`.
pub fn lie_update_pose<T, G, const D: usize, const P: usize>(
    belief: &LieBelief<T, G, D>,
    measurement: &G,
    meas_cov: &SMatrix<T, D, D>,
) -> Result<LieBelief<T, G, D>, EstimationError>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    let residual = belief.mean.inverse().compose(measurement).log()?;
    let innovation_cov = belief.cov + meas_cov;
    static_condition(&innovation_cov)?;
    let chol =
        innovation_cov
            .cholesky()
            .ok_or(EstimationError::IllConditionedInnovation {
                condition: f64::INFINITY,
            })?;
    let gain = chol.solve(&belief.cov).transpose();
    let mean = belief.mean.compose(&G::exp(&(gain * residual)));
    let cov = joseph_static(&belief.cov, &gain, &SMatrix::<T, D, D>::identity(), meas_cov);
    Ok(LieBelief { mean, cov })
}

/// Update with a position-only measurement `z = p + noise`.
///
/// The measurement matrix is `(0, R^-)`: only the translation block of the
/// body-frame error is observed, rotated into the world frame.
pub fn lie_update_position<T, G, const D: usize, const P: usize>(
    belief: &LieBelief<T, G, D>,
    measurement: &SVector<T, P>,
    meas_cov: &SMatrix<T, P, P>,
) -> Result<LieBelief<T, G, D>, EstimationError>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    let mut h = SMatrix::<T, P, D>::zeros();
    h.fixed_view_mut::<P, P>(0, D - P)
        .copy_from(&belief.mean.rotation());
    let residual = measurement - belief.mean.translation();
    let innovation_cov = {
        let s = h * belief.cov * h.transpose() + meas_cov;
        (s + s.transpose()) * real::<T>(0.5)
    };
    static_condition(&innovation_cov)?;
    let chol =
        innovation_cov
            .cholesky()
            .ok_or(EstimationError::IllConditionedInnovation {
                condition: f64::INFINITY,
            })?;
    let gain = chol.solve(&(h * belief.cov)).transpose();
    let mean = belief.mean.compose(&G::exp(&(gain * residual)));
    let cov = joseph_static(&belief.cov, &gain, &h, meas_cov);
    Ok(LieBelief { mean, cov })
}

/// Group mean and covariance of a sample set by fixed-point iteration.
///
/// The mean solves `sum_i Log(mean^-1 g_i) = 0`; the covariance is the sample
/// second moment of the left-invariant errors about it.
pub fn empirical_moments<T, G, const D: usize, const P: usize>(
    samples: &[G],
) -> Result<LieBelief<T, G, D>, EstimationError>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    if samples.len() < 2 {
        return Err(EstimationError::InsufficientSamples {
            got: samples.len(),
        });
    }
    let inv_n = T::one() / real(samples.len() as f64);
    let mut mean = samples[0].clone();
    let mut converged = false;
    for _ in 0..MEAN_MAX_ITERATIONS {
        let mut step = SVector::<T, D>::zeros();
        let mean_inv = mean.inverse();
        for g in samples {
            step += mean_inv.compose(g).log()?;
        }
        step *= inv_n;
        mean = mean.compose(&G::exp(&step));
        if step.norm() < real(MEAN_STEP_TOLERANCE) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(EstimationError::Lie(LieError::MeanNonConvergence {
            iterations: MEAN_MAX_ITERATIONS,
        }));
    }
    let mut cov = SMatrix::<T, D, D>::zeros();
    let mean_inv = mean.inverse();
    for g in samples {
        let err = mean_inv.compose(g).log()?;
        cov += err * err.transpose();
    }
    cov *= inv_n;
    Ok(LieBelief {
        mean,
        cov: sanitize_covariance_static(&cov),
    })
}
