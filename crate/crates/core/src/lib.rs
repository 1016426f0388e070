//! Safety-filtered control of discrete-time stochastic systems under state
//! estimation, in Euclidean space and on SE(2)/SE(3).
//!
//! The crate provides:
//!
//! * [`lie`] — matrix Lie group primitives (SO(3), SE(2), SE(3));
//! * [`estimation`] — Kalman filtering in Euclidean space and on Lie groups;
//! * [`barriers`] — barrier functions with numerical Lie derivatives and
//!   curvature-corrected conditional moments;
//! * [`filters`] — safety-filter synthesis (closed-form half-space QP,
//!   linear-affine constraint builders, the Lie-group safety filter);
//! * [`certificates`] — offline finite-time exit-probability bounds for the
//!   linear-affine pipeline;
//! * [`sim`] — closed-loop trial execution and Monte Carlo campaigns;
//! * [`validation`] — seed-deterministic oracle checks for the above.
//!
//! All numerics are generic over [`scalar::Scalar`] (`f32` or `f64`); the
//! aliases at the crate root pin the default double-precision pipeline.

pub mod barriers;
pub mod certificates;
pub mod estimation;
pub mod filters;
pub mod lie;
pub mod scalar;
pub mod sim;
pub mod validation;

pub use scalar::Scalar;

/// Default scalar type of the experiment harness.
pub type Real = f64;

/// Double-precision aliases for the most common types.
pub type Se2F64 = lie::Se2<Real>;
pub type Se3F64 = lie::Se3<Real>;
pub type GaussianBeliefF64 = estimation::GaussianBelief<Real>;
pub type LinearSystemF64 = estimation::LinearSystem<Real>;
pub type Se2BeliefF64 = estimation::LieBelief<Real, Se2F64, 3>;
pub type Se3BeliefF64 = estimation::LieBelief<Real, Se3F64, 6>;
pub type FilterConfigF64 = filters::FilterConfig<Real>;
pub type ScenarioF64 = sim::Scenario<Real>;

