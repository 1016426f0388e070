//! Barrier functions and their conditional moments under a group-valued
//! belief: numerical Lie derivatives along left-invariant flows, the
//! curvature-corrected expectation, and predicted mean/variance one step
//! ahead.

use nalgebra::{SMatrix, SVector};
use thiserror::Error;

use crate::estimation::{lie_predict, LieBelief};
use crate::lie::MatrixLieGroup;
use crate::scalar::{real, Scalar};

pub mod affine;
pub mod slit;

pub use affine::{AffineFacet, CorridorEnvironment, FacetId, Obstacle};
pub use slit::{SlitBarrier, SlitBarrierParams};

/// Default central-difference step for Lie derivatives.
pub const DEFAULT_DIFF_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BarrierError {
    #[error("invalid barrier or environment definition: {0}")]
    Invalid(String),
}

/// Scalar safety function over a state space; the safe set is `value >= 0`.
pub trait Barrier<T: Scalar, G>: Send + Sync {
    fn value(&self, state: &G) -> T;
}

impl<T: Scalar, G, F> Barrier<T, G> for F
where
    F: Fn(&G) -> T + Send + Sync,
{
    fn value(&self, state: &G) -> T {
        self(state)
    }
}

/// Lane-keeping barrier on SE(2): `h(g) = p_y + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneBarrier<T: Scalar> {
    pub offset: T,
}

impl<T: Scalar> Default for LaneBarrier<T> {
    fn default() -> Self {
        LaneBarrier { offset: real(2.0) }
    }
}

impl<T: Scalar> Barrier<T, crate::lie::Se2<T>> for LaneBarrier<T> {
    fn value(&self, state: &crate::lie::Se2<T>) -> T {
        state.matrix()[(1, 2)] + self.offset
    }
}

/// Options for the conditional-moment computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConfig<T: Scalar> {
    /// Include the `1/2 tr(hessian * cov)` curvature correction. Leave off
    /// for barriers that are affine along the relevant flows.
    pub curvature: bool,
    /// Central-difference step for the Lie derivatives.
    pub step: T,
}

impl<T: Scalar> Default for MomentConfig<T> {
    fn default() -> Self {
        MomentConfig {
            curvature: true,
            step: real(DEFAULT_DIFF_STEP),
        }
    }
}

impl<T: Scalar> MomentConfig<T> {
    pub fn without_curvature() -> Self {
        MomentConfig {
            curvature: false,
            ..Self::default()
        }
    }
}

fn basis_flow<T, G, const D: usize, const P: usize>(g: &G, index: usize, step: T) -> G
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    let mut xi = SVector::<T, D>::zeros();
    xi[index] = step;
    g.compose(&G::exp(&xi))
}

/// Gradient of `h` along the left-invariant basis flows by central
/// differences: entry `i` is `[h(g Exp(s E_i)) - h(g Exp(-s E_i))] / 2s`.
pub fn lie_gradient<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    g: &G,
    step: T,
) -> SVector<T, D>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let two_step = step + step;
    SVector::from_fn(|i, _| {
        let forward = barrier.value(&basis_flow(g, i, step));
        let backward = barrier.value(&basis_flow(g, i, -step));
        (forward - backward) / two_step
    })
}

/// Raw matrix of nested second differences; entry `(i, j)` approximates the
/// Lie derivative along `E_i` of the Lie derivative along `E_j`. Not
/// symmetric in general: the symmetry defect is the bracket term.
pub fn lie_second_differences<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    g: &G,
    step: T,
) -> SMatrix<T, D, D>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let denom = (step + step) * (step + step);
    SMatrix::from_fn(|i, j| {
        let pp = barrier.value(&basis_flow(&basis_flow(g, i, step), j, step));
        let pm = barrier.value(&basis_flow(&basis_flow(g, i, step), j, -step));
        let mp = barrier.value(&basis_flow(&basis_flow(g, i, -step), j, step));
        let mm = barrier.value(&basis_flow(&basis_flow(g, i, -step), j, -step));
        (pp - pm - mp + mm) / denom
    })
}

/// Symmetrized second-derivative matrix `(H + H^T) / 2` of the nested
/// central differences.
pub fn lie_hessian<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    g: &G,
    step: T,
) -> SMatrix<T, D, D>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let raw = lie_second_differences(barrier, g, step);
    (raw + raw.transpose()) * real::<T>(0.5)
}

fn curvature_correction<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    mean: &G,
    cov: &SMatrix<T, D, D>,
    step: T,
) -> T
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    (lie_hessian(barrier, mean, step) * cov).trace() * real::<T>(0.5)
}

/// Second-order approximation of `E[h | belief]`:
/// `h(mean) + 1/2 tr(hessian(mean) cov)` (the correction is dropped when
/// `cfg.curvature` is off).
pub fn expected_barrier<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    belief: &LieBelief<T, G, D>,
    cfg: &MomentConfig<T>,
) -> T
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let value = barrier.value(&belief.mean);
    if cfg.curvature {
        value + curvature_correction(barrier, &belief.mean, &belief.cov, cfg.step)
    } else {
        value
    }
}

/// Predicted mean and variance of the barrier one step ahead of the belief,
/// under motion increment `motion` and additive process noise.
///
/// The mean is the curvature-corrected expectation at the predicted belief;
/// the variance is the gradient quadratic form `grad Sigma^- grad^T`,
/// floored at zero.
pub fn predicted_barrier_moments<T, G, B, const D: usize, const P: usize>(
    barrier: &B,
    belief: &LieBelief<T, G, D>,
    motion: &G,
    process_cov: &SMatrix<T, D, D>,
    cfg: &MomentConfig<T>,
) -> (T, T)
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let predicted = lie_predict(belief, motion, process_cov);
    let mean = expected_barrier(barrier, &predicted, cfg);
    let grad = lie_gradient(barrier, &predicted.mean, cfg.step);
    let variance = (grad.transpose() * predicted.cov * grad)[0].max(T::zero());
    (mean, variance)
}
