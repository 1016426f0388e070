//! Safety-filter synthesis: the closed-form half-space QP projection, the
//! linear-affine constraint builders (mean-based, uncertainty-scaled and
//! quantile-based variants), nominal controllers, and the nonlinear
//! Lie-group safety filter solved by sequential constraint linearization.

use nalgebra::{DVector, SMatrix, SVector};
use thiserror::Error;

use crate::barriers::{
    expected_barrier, predicted_barrier_moments, AffineFacet, Barrier, MomentConfig,
    DEFAULT_DIFF_STEP,
};
use crate::estimation::{GaussianBelief, LieBelief, LinearSystem};
use crate::lie::{LieError, MatrixLieGroup};
use crate::scalar::{real, Scalar};

/// Predicted barrier variance is floored here before the square root so the
/// constraint gradient stays finite when the variance vanishes.
pub const VARIANCE_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FilterError {
    /// The constraint normal vanishes on the free coordinates while the
    /// right-hand side is strictly positive: no control can satisfy it.
    #[error(
        "half-space constraint infeasible: free-coordinate normal is zero, \
         rhs {rhs} unreachable (violation {violation})"
    )]
    Infeasible { rhs: f64, violation: f64 },
}

/// Linear control constraint `normal . u >= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceConstraint<T: Scalar> {
    pub normal: DVector<T>,
    pub rhs: T,
}

/// Tolerances of the sequential-linearization solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T: Scalar> {
    /// Maximum step length per iteration.
    pub trust_radius: T,
    pub max_iterations: usize,
    /// Stationarity / boundary-slack tolerance.
    pub tolerance: T,
    /// A twist is accepted as feasible when the constraint exceeds minus
    /// this slack.
    pub feasibility_slack: T,
    /// Finite-difference step for the constraint gradient in twist space.
    pub diff_step: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            trust_radius: real(0.5),
            max_iterations: 30,
            tolerance: real(1e-6),
            feasibility_slack: real(1e-8),
            diff_step: real(1e-5),
        }
    }
}

/// Parameters shared by all safety-filter variants.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig<T: Scalar> {
    /// Decay rate of the barrier constraint, in (0, 1].
    pub alpha: T,
    /// Base coefficient of the uncertainty margin.
    pub beta_base: T,
    /// Decay rate of the beta schedule in the barrier estimate.
    pub beta_rate: T,
    /// Gaussian quantile used by the chance-constraint variant.
    pub pcbf_quantile: T,
    /// Control coordinates pinned to zero (nonholonomic directions).
    pub pinned: Vec<usize>,
    /// Apply curvature corrections in the group-valued moments.
    pub curvature: bool,
    pub solver: SolverConfig<T>,
}

impl<T: Scalar> Default for FilterConfig<T> {
    fn default() -> Self {
        FilterConfig {
            alpha: T::one(),
            beta_base: T::zero(),
            beta_rate: T::zero(),
            pcbf_quantile: T::zero(),
            pinned: Vec::new(),
            curvature: false,
            solver: SolverConfig::default(),
        }
    }
}

impl<T: Scalar> FilterConfig<T> {
    fn moment_config(&self) -> MomentConfig<T> {
        MomentConfig {
            curvature: self.curvature,
            step: real(DEFAULT_DIFF_STEP),
        }
    }
}

/// Uncertainty-margin coefficient `beta_base * exp(-beta_rate * estimate)`;
/// a function of the posterior barrier estimate only.
pub fn beta_schedule<T: Scalar>(cfg: &FilterConfig<T>, barrier_estimate: T) -> T {
    cfg.beta_base * (-cfg.beta_rate * barrier_estimate).exp()
}

/// Exact minimizer of `||u - nominal||^2` subject to `normal . u >= rhs`
/// with the pinned coordinates fixed to zero.
pub fn project_halfspace<T: Scalar>(
    nominal: &DVector<T>,
    constraint: &HalfspaceConstraint<T>,
    pinned: &[usize],
) -> Result<DVector<T>, FilterError> {
    let mut u = nominal.clone();
    let mut normal = constraint.normal.clone();
    for &i in pinned {
        u[i] = T::zero();
        normal[i] = T::zero();
    }
    let attained = normal.dot(&u);
    if attained >= constraint.rhs {
        return Ok(u);
    }
    let norm_sq = normal.norm_squared();
    if norm_sq <= real(1e-300) {
        return Err(FilterError::Infeasible {
            rhs: constraint.rhs.to_f64_lossy(),
            violation: (constraint.rhs - attained).to_f64_lossy(),
        });
    }
    Ok(&u + normal * ((constraint.rhs - attained) / norm_sq))
}

/// `m(mu) = (1 - alpha) b - c^T (A - alpha I) mu`, the mean part of the
/// linear-affine constraint right-hand side.
fn margin_term<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    facet: &AffineFacet<T>,
    alpha: T,
) -> T {
    let n = sys.state_dim();
    let shifted = &sys.a - nalgebra::DMatrix::<T>::identity(n, n) * alpha;
    (T::one() - alpha) * facet.offset - facet.normal.dot(&(&shifted * &belief.mean))
}

fn control_normal<T: Scalar>(sys: &LinearSystem<T>, facet: &AffineFacet<T>) -> DVector<T> {
    sys.b.transpose() * &facet.normal
}

/// Constraint of the uncertainty-adaptive filter:
/// `c^T B u >= m(mu) + beta_k sqrt(c^T (A Sigma A^T + process_cov) c)`
/// with `beta_k` evaluated at the posterior barrier estimate.
pub fn sea_scbf_constraint<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    facet: &AffineFacet<T>,
    cfg: &FilterConfig<T>,
) -> HalfspaceConstraint<T> {
    let estimate = facet.eval(&belief.mean);
    let beta_k = beta_schedule(cfg, estimate);
    let prior_cov = &sys.a * &belief.cov * sys.a.transpose() + &sys.process_cov;
    let spread = facet.normal.dot(&(&prior_cov * &facet.normal)).max(T::zero());
    HalfspaceConstraint {
        normal: control_normal(sys, facet),
        rhs: margin_term(belief, sys, facet, cfg.alpha) + beta_k * spread.sqrt(),
    }
}

/// Expectation-only constraint: `c^T B u >= m(mu)`.
pub fn sea_ed_constraint<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    facet: &AffineFacet<T>,
    cfg: &FilterConfig<T>,
) -> HalfspaceConstraint<T> {
    HalfspaceConstraint {
        normal: control_normal(sys, facet),
        rhs: margin_term(belief, sys, facet, cfg.alpha),
    }
}

/// Chance-constraint variant:
/// `c^T B u >= m(mu) + q sqrt(c^T ((A - alpha I) Sigma (A - alpha I)^T + process_cov) c)`
/// where `q` is the Gaussian quantile from the config.
pub fn sea_pcbf_constraint<T: Scalar>(
    belief: &GaussianBelief<T>,
    sys: &LinearSystem<T>,
    facet: &AffineFacet<T>,
    cfg: &FilterConfig<T>,
) -> HalfspaceConstraint<T> {
    let n = sys.state_dim();
    let shifted = &sys.a - nalgebra::DMatrix::<T>::identity(n, n) * cfg.alpha;
    let spread_cov = &shifted * &belief.cov * shifted.transpose() + &sys.process_cov;
    let spread = facet.normal.dot(&(&spread_cov * &facet.normal)).max(T::zero());
    HalfspaceConstraint {
        normal: control_normal(sys, facet),
        rhs: margin_term(belief, sys, facet, cfg.alpha) + cfg.pcbf_quantile * spread.sqrt(),
    }
}

/// Go-to-position nominal controller `u = goal - mean`.
pub fn nominal_goto_position<T: Scalar>(mean: &DVector<T>, goal: &DVector<T>) -> DVector<T> {
    goal - mean
}

/// Go-to-pose nominal controller `xi = Log(mean^-1 goal)`.
pub fn nominal_goto_pose<T, G, const D: usize, const P: usize>(
    mean: &G,
    goal: &G,
) -> Result<SVector<T, D>, LieError>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
{
    mean.inverse().compose(goal).log()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    /// Feasible twist returned; the iteration reached its tolerance.
    Converged,
    /// Feasible twist returned, but the iteration budget ran out first.
    NonConverged,
    /// No feasible iterate found; the least-violating one is returned.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieFilterOutcome<T: Scalar, const D: usize> {
    pub twist: SVector<T, D>,
    pub status: SolverStatus,
    /// Constraint value at the returned twist.
    pub constraint_value: T,
    pub iterations: usize,
}

impl<T: Scalar, const D: usize> LieFilterOutcome<T, D> {
    pub fn is_feasible(&self) -> bool {
        self.status != SolverStatus::Infeasible
    }
}

fn apply_mask<T: Scalar, const D: usize>(twist: &SVector<T, D>, pinned: &[usize]) -> SVector<T, D> {
    let mut out = *twist;
    for &i in pinned {
        out[i] = T::zero();
    }
    out
}

/// Safety filter on a matrix Lie group.
///
/// Minimizes `||xi - nominal||^2` subject to
/// `predicted_mean(xi) - beta_k sqrt(predicted_variance(xi)) >= alpha * estimate`,
/// where the predicted moments use the one-step motion `Exp(xi dt)` and the
/// estimate is the (curvature-corrected) expected barrier at the current
/// belief. Solved by projecting the nominal twist onto successive
/// linearizations of the constraint, with a trust radius halved on
/// non-improving steps. Never errors: infeasibility and non-convergence are
/// reported through the outcome status.
pub fn lie_safety_filter<T, G, B, const D: usize, const P: usize>(
    belief: &LieBelief<T, G, D>,
    nominal: &SVector<T, D>,
    barrier: &B,
    process_cov: &SMatrix<T, D, D>,
    dt: T,
    cfg: &FilterConfig<T>,
) -> LieFilterOutcome<T, D>
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    B: Barrier<T, G> + ?Sized,
{
    let moments = cfg.moment_config();
    let estimate = expected_barrier(barrier, belief, &moments);
    let beta_k = beta_schedule(cfg, estimate);
    let target = cfg.alpha * estimate;
    let floor: T = real(VARIANCE_FLOOR);

    let constraint = |xi: &SVector<T, D>| -> T {
        let motion = G::exp(&(xi * dt));
        let (mean, variance) =
            predicted_barrier_moments(barrier, belief, &motion, process_cov, &moments);
        mean - beta_k * variance.max(floor).sqrt() - target
    };

    let masked_nominal = apply_mask(nominal, &cfg.pinned);
    let c_nominal = constraint(&masked_nominal);
    if c_nominal >= T::zero() {
        return LieFilterOutcome {
            twist: masked_nominal,
            status: SolverStatus::Converged,
            constraint_value: c_nominal,
            iterations: 0,
        };
    }

    let penalty: T = real(1e4);
    let merit = |xi: &SVector<T, D>, c: T| -> T {
        (xi - masked_nominal).norm_squared() + penalty * (-c).max(T::zero())
    };

    let mut xi = masked_nominal;
    let mut c_val = c_nominal;
    let mut converged = false;
    let mut iterations = 0;
    // Best feasible iterate by distance to the nominal, and least-violating
    // fallback.
    let mut best_feasible: Option<(T, SVector<T, D>, T)> = None;
    let mut least_violating = (-c_nominal, masked_nominal, c_nominal);

    for iter in 1..=cfg.solver.max_iterations {
        iterations = iter;
        // Central-difference gradient of the constraint in twist space.
        let step = cfg.solver.diff_step;
        let grad = SVector::<T, D>::from_fn(|i, _| {
            let mut plus = xi;
            plus[i] += step;
            let mut minus = xi;
            minus[i] -= step;
            (constraint(&plus) - constraint(&minus)) / (step + step)
        });

        // Linear model c(x) ~ c_val + grad . (x - xi) >= 0.
        let linearized = HalfspaceConstraint {
            normal: DVector::from_iterator(D, grad.iter().copied()),
            rhs: grad.dot(&xi) - c_val,
        };
        let nominal_dyn = DVector::from_iterator(D, masked_nominal.iter().copied());
        let projected = match project_halfspace(&nominal_dyn, &linearized, &cfg.pinned) {
            Ok(u) => SVector::<T, D>::from_iterator(u.iter().copied()),
            // Vanishing free gradient with the constraint still violated:
            // the linear model cannot make progress from here.
            Err(_) => break,
        };

        // Try the exact projection step first; when it does not improve the
        // merit, damp it to the trust radius and keep halving.
        let full = projected - xi;
        let clipped = if full.norm() > cfg.solver.trust_radius {
            full * (cfg.solver.trust_radius / full.norm())
        } else {
            full
        };
        let mut accepted = false;
        let current_merit = merit(&xi, c_val);
        let mut candidates_done = false;
        let mut direction = full;
        while !candidates_done && direction.norm() >= real(1e-9) {
            let trial = xi + direction;
            let c_trial = constraint(&trial);
            if merit(&trial, c_trial) < current_merit - real::<T>(1e-15) {
                xi = trial;
                c_val = c_trial;
                accepted = true;
                break;
            }
            if direction == full && full != clipped {
                direction = clipped;
            } else {
                direction *= real::<T>(0.5);
                candidates_done = direction.norm() < real(1e-9);
            }
        }

        if -c_val < least_violating.0 {
            least_violating = (-c_val, xi, c_val);
        }
        if c_val >= -cfg.solver.feasibility_slack {
            let distance = (xi - masked_nominal).norm_squared();
            if best_feasible
                .as_ref()
                .map(|(d, _, _)| distance < *d)
                .unwrap_or(true)
            {
                best_feasible = Some((distance, xi, c_val));
            }
        }

        if !accepted {
            // Stalled: no step along the projection direction improves the
            // merit; the iterate is stationary for the linearized problem.
            converged = c_val >= -cfg.solver.feasibility_slack;
            break;
        }
        let step_norm = direction.norm();
        if c_val >= -cfg.solver.feasibility_slack
            && (c_val.abs() <= cfg.solver.tolerance || step_norm < cfg.solver.tolerance)
        {
            converged = true;
            break;
        }
    }

    match best_feasible {
        Some((_, twist, c)) => LieFilterOutcome {
            twist,
            status: if converged {
                SolverStatus::Converged
            } else {
                SolverStatus::NonConverged
            },
            constraint_value: c,
            iterations,
        },
        None => LieFilterOutcome {
            twist: least_violating.1,
            status: SolverStatus::Infeasible,
            constraint_value: least_violating.2,
            iterations,
        },
    }
}
