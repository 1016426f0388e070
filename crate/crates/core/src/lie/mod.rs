//! Matrix Lie group primitives for SO(3), SE(2) and SE(3).
//!
//! Conventions: left-invariant throughout (errors and velocities live in the
//! body frame), twists are rotation-first, and the logarithm is restricted to
//! the principal branch. SE(2) is its own 3-parameter specialization with
//! twist coordinates `(omega, v_x, v_y)` rather than an embedding into SE(3).

use nalgebra::{SMatrix, SVector};
use thiserror::Error;

use crate::scalar::{real, Scalar};

pub mod se2;
pub mod se3;
pub mod so3;

pub use se2::Se2;
pub use se3::Se3;

/// Rotation angles this close to pi are rejected by the logarithm; the
/// principal branch is no longer unique there.
pub const LOG_BRANCH_MARGIN: f64 = 1e-6;

/// Below this angle the closed-form exp/log coefficients switch to their
/// fourth-order Taylor series to avoid 0/0.
pub const SMALL_ANGLE: f64 = 1e-6;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LieError {
    /// Rotation angle within [`LOG_BRANCH_MARGIN`] of pi; the principal
    /// logarithm is not unique.
    #[error("rotation angle {angle} rad is too close to pi for a principal logarithm")]
    LogBranch { angle: f64 },
    /// Fixed-point iteration for the group mean did not converge.
    #[error("group mean iteration did not converge after {iterations} iterations")]
    MeanNonConvergence { iterations: usize },
    /// Matrix does not satisfy the group-element invariants.
    #[error("matrix violates group-element invariants (defect {defect})")]
    InvalidElement { defect: f64 },
}

/// Common surface of the matrix Lie groups used here.
///
/// `D` is the dimension of the Lie algebra and `P` the dimension of the
/// translation part, so `(D, P)` is `(3, 2)` for SE(2) and `(6, 3)` for SE(3).
pub trait MatrixLieGroup<T: Scalar, const D: usize, const P: usize>:
    Clone + PartialEq + std::fmt::Debug + Send + Sync
{
    fn identity() -> Self;

    /// Exponential map from twist coordinates to the group.
    fn exp(xi: &SVector<T, D>) -> Self;

    /// Principal-branch logarithm.
    fn log(&self) -> Result<SVector<T, D>, LieError>;

    /// Matrix of the adjoint action on twist coordinates:
    /// `(g xi^ g^-1)^v = adjoint(g) * xi^v`.
    fn adjoint(&self) -> SMatrix<T, D, D>;

    fn compose(&self, rhs: &Self) -> Self;

    fn inverse(&self) -> Self;

    fn rotation(&self) -> SMatrix<T, P, P>;

    fn translation(&self) -> SVector<T, P>;

    /// Lie bracket in twist coordinates.
    fn bracket(a: &SVector<T, D>, b: &SVector<T, D>) -> SVector<T, D>;

    /// Project the rotation block back onto the orthogonal group (polar
    /// projection). Long composition chains call this periodically.
    fn renormalize(&mut self);

    /// Baker-Campbell-Hausdorff expansion through the double-bracket terms:
    /// `xi + zeta + [xi,zeta]/2 + [xi,[xi,zeta]]/12 + [zeta,[zeta,xi]]/12`.
    ///
    /// The remainder is fourth order in `||(xi, zeta)||`; intended for
    /// arguments of norm up to about 0.5.
    fn bch_truncated(xi: &SVector<T, D>, zeta: &SVector<T, D>) -> SVector<T, D> {
        let half: T = real(0.5);
        let twelfth: T = real(1.0 / 12.0);
        let b = Self::bracket(xi, zeta);
        let xi_b = Self::bracket(xi, &b);
        // [zeta, [zeta, xi]] = -[zeta, [xi, zeta]]
        let zeta_b = Self::bracket(zeta, &b);
        xi + zeta + b * half + xi_b * twelfth - zeta_b * twelfth
    }
}
