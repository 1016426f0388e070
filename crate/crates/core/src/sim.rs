//! Stochastic system stepping, closed-loop trial execution
//! (estimate, filter, act, measure) and Monte Carlo campaign orchestration.
//!
//! Reproducibility: a campaign is fully determined by (scenario, seed base,
//! trial count). Each trial gets an independent ChaCha12 stream seeded with
//! `seed_base + trial_index`, and aggregation runs in trial order, so thread
//! count cannot change any output.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix6, SMatrix, SVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::barriers::{
    expected_barrier, AffineFacet, Barrier, CorridorEnvironment, LaneBarrier, MomentConfig,
    SlitBarrier,
};
use crate::certificates::{linear_certificate, CertificateError, CertificateReport};
use crate::estimation::{
    kf_predict, kf_update, lie_predict, lie_update_pose, lie_update_position, GaussianBelief,
    LieBelief, LinearSystem,
};
use crate::filters::{
    lie_safety_filter, nominal_goto_position, nominal_goto_pose, project_halfspace,
    sea_ed_constraint, sea_pcbf_constraint, sea_scbf_constraint, FilterConfig, SolverStatus,
};
use crate::lie::{MatrixLieGroup, Se2, Se3};
use crate::scalar::{real, Scalar};

/// Rotation blocks are re-orthonormalized after this many compositions.
const RENORMALIZE_EVERY: usize = 100;

/// Which reference the active-facet selection uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentMode {
    /// Ground-truth state.
    Accurate,
    /// Estimated mean.
    Inaccurate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMethod {
    SeaScbf,
    SeaEd,
    SeaPcbf,
    /// Nominal controller applied raw.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearEnvironment<T: Scalar> {
    Facet(AffineFacet<T>),
    Corridor(CorridorEnvironment<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearNominal<T: Scalar> {
    OpenLoop(DVector<T>),
    GotoPosition(DVector<T>),
}

/// Initial belief policy for linear trials.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialBeliefSpec<T: Scalar> {
    /// The initial state is known exactly (it generates the filtration).
    Exact,
    /// Bootstrap from the first measurement: mean = z_0, cov = meas_cov.
    /// Assumes a full-state observation matrix.
    FirstMeasurement,
    Fixed { mean: DVector<T>, cov: DMatrix<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalSpec<T: Scalar> {
    pub position: DVector<T>,
    pub radius: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearScenario<T: Scalar> {
    pub system: LinearSystem<T>,
    pub environment: LinearEnvironment<T>,
    pub method: FilterMethod,
    pub filter: FilterConfig<T>,
    pub nominal: LinearNominal<T>,
    pub initial_state: DVector<T>,
    pub initial_belief: InitialBeliefSpec<T>,
    pub horizon: usize,
    pub mode: EnvironmentMode,
    pub goal: Option<GoalSpec<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Se2Scenario<T: Scalar> {
    pub dt: T,
    pub horizon: usize,
    pub process_cov: Matrix3<T>,
    pub position_noise_cov: Matrix2<T>,
    pub barrier: LaneBarrier<T>,
    pub filtered: bool,
    pub filter: FilterConfig<T>,
    pub nominal_twist: Vector3<T>,
    pub initial_pose: Se2<T>,
    pub initial_cov: Matrix3<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Se3Scenario<T: Scalar> {
    pub dt: T,
    pub horizon: usize,
    pub process_cov: Matrix6<T>,
    pub pose_noise_cov: Matrix6<T>,
    pub barrier: SlitBarrier<T>,
    pub filtered: bool,
    pub filter: FilterConfig<T>,
    pub goal_pose: Se3<T>,
    pub initial_pose: Se3<T>,
    pub initial_cov: Matrix6<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario<T: Scalar> {
    Linear(LinearScenario<T>),
    Se2(Se2Scenario<T>),
    Se3(Se3Scenario<T>),
}

/// One closed-loop trial record. All traces have `horizon + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult<T: Scalar> {
    pub seed: u64,
    /// True state coordinates per step (linear state, or translation part).
    pub states: Vec<DVector<T>>,
    pub belief_means: Vec<DVector<T>>,
    /// True barrier value per step.
    pub barrier_true: Vec<T>,
    /// Posterior barrier estimate per step.
    pub barrier_estimate: Vec<T>,
    /// First step with a negative true barrier, if any.
    pub first_exit: Option<usize>,
    pub goal_reached: bool,
    pub infeasible_steps: usize,
    pub nonconverged_steps: usize,
    /// Estimator updates skipped because of a logarithm branch fault.
    pub estimator_faults: usize,
}

impl<T: Scalar> TrialResult<T> {
    pub fn safe(&self) -> bool {
        self.first_exit.is_none()
    }
}

/// Campaign aggregates, deterministic in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignMetrics<T: Scalar> {
    pub trials: usize,
    /// Fraction of trials whose first exit happened at or before step t.
    pub exit_frequency: Vec<T>,
    /// Percentage of trials with no exit over the whole horizon.
    pub safety_rate: T,
    /// Percentage of trials that reached the goal (when one is defined).
    pub goal_reach_rate: Option<T>,
    /// Per-step mean of the true barrier over trials.
    pub barrier_mean: Vec<T>,
    /// Per-step population standard deviation of the true barrier.
    pub barrier_std: Vec<T>,
    pub infeasible_steps: usize,
    pub nonconverged_steps: usize,
    pub estimator_faults: usize,
}

/// Campaign metrics together with the per-trial records.
#[derive(Debug, Clone, PartialEq)]
pub struct Campaign<T: Scalar> {
    pub metrics: CampaignMetrics<T>,
    pub trials: Vec<TrialResult<T>>,
}

/// Covariance factor for sampling zero-mean Gaussian vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearNoise<T: Scalar> {
    process_factor: DMatrix<T>,
    measurement_factor: DMatrix<T>,
}

fn psd_factor<T: Scalar>(cov: &DMatrix<T>) -> DMatrix<T> {
    if cov.norm() == T::zero() {
        return cov.clone();
    }
    if let Some(chol) = cov.clone().cholesky() {
        return chol.l();
    }
    // Singular but PSD: eigenvalue square root.
    let eigen = cov.clone().symmetric_eigen();
    let sqrt = DMatrix::from_diagonal(&eigen.eigenvalues.map(|l| l.max(T::zero()).sqrt()));
    &eigen.eigenvectors * sqrt
}

fn sample_noise<T: Scalar, R: Rng>(factor: &DMatrix<T>, rng: &mut R) -> DVector<T> {
    let draws = DVector::from_fn(factor.ncols(), |_, _| T::standard_normal(rng));
    factor * draws
}

fn static_factor<T: Scalar, const D: usize>(cov: &SMatrix<T, D, D>) -> SMatrix<T, D, D> {
    let dynamic = DMatrix::from_iterator(D, D, cov.iter().copied());
    let factor = psd_factor(&dynamic);
    SMatrix::from_iterator(factor.iter().copied())
}

fn sample_noise_static<T: Scalar, R: Rng, const D: usize>(
    factor: &SMatrix<T, D, D>,
    rng: &mut R,
) -> SVector<T, D> {
    let draws = SVector::<T, D>::from_fn(|_, _| T::standard_normal(rng));
    factor * draws
}

impl<T: Scalar> LinearNoise<T> {
    pub fn from_system(sys: &LinearSystem<T>) -> Self {
        LinearNoise {
            process_factor: psd_factor(&sys.process_cov),
            measurement_factor: psd_factor(&sys.meas_cov),
        }
    }
}

/// Advance a linear system one step and emit the next measurement.
pub fn step_linear<T: Scalar, R: Rng>(
    state: &DVector<T>,
    control: &DVector<T>,
    sys: &LinearSystem<T>,
    noise: &LinearNoise<T>,
    rng: &mut R,
) -> (DVector<T>, DVector<T>) {
    let next = &sys.a * state + &sys.b * control + sample_noise(&noise.process_factor, rng);
    let measurement = &sys.h * &next + sample_noise(&noise.measurement_factor, rng);
    (next, measurement)
}

/// Measurement model for group-valued trials.
pub enum LieMeasurementSpec<T: Scalar, const D: usize, const P: usize> {
    /// Full pose corrupted by an exponential perturbation.
    Pose { noise_factor: SMatrix<T, D, D> },
    /// Translation part plus additive noise.
    Position { noise_factor: SMatrix<T, P, P> },
}

pub enum LieMeasurement<T: Scalar, G, const P: usize> {
    Pose(G),
    Position(SVector<T, P>),
}

/// Advance a group-valued system one step:
/// `g' = g Exp(twist dt) Exp(noise^)` plus a measurement per the model.
pub fn step_lie<T, G, R, const D: usize, const P: usize>(
    g: &G,
    twist: &SVector<T, D>,
    dt: T,
    process_factor: &SMatrix<T, D, D>,
    measurement: &LieMeasurementSpec<T, D, P>,
    rng: &mut R,
) -> (G, LieMeasurement<T, G, P>)
where
    T: Scalar,
    G: MatrixLieGroup<T, D, P>,
    R: Rng,
{
    let motion = G::exp(&(twist * dt));
    let noise = sample_noise_static(process_factor, rng);
    let next = g.compose(&motion).compose(&G::exp(&noise));
    let z = match measurement {
        LieMeasurementSpec::Pose { noise_factor } => {
            let eps = sample_noise_static(noise_factor, rng);
            LieMeasurement::Pose(next.compose(&G::exp(&eps)))
        }
        LieMeasurementSpec::Position { noise_factor } => {
            let eps = sample_noise_static(noise_factor, rng);
            LieMeasurement::Position(next.translation() + eps)
        }
    };
    (next, z)
}

fn first_exit_from<T: Scalar>(trace: &[T]) -> Option<usize> {
    trace.iter().position(|y| *y < T::zero())
}

impl<T: Scalar> LinearScenario<T> {
    fn true_barrier(&self, state: &DVector<T>) -> T {
        match &self.environment {
            LinearEnvironment::Facet(f) => f.eval(state),
            LinearEnvironment::Corridor(env) => env.composed_eval(state).0,
        }
    }

    fn active_facet(&self, reference: &DVector<T>) -> AffineFacet<T> {
        match &self.environment {
            LinearEnvironment::Facet(f) => f.clone(),
            LinearEnvironment::Corridor(env) => {
                env.facet(env.select_active_facet(reference)).clone()
            }
        }
    }

    fn run_trial(&self, seed: u64) -> TrialResult<T> {
        let sys = &self.system;
        let steps = self.horizon;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let noise = LinearNoise::from_system(sys);
        let n = sys.state_dim();

        let mut state = self.initial_state.clone();
        let mut belief = match &self.initial_belief {
            InitialBeliefSpec::Exact => {
                GaussianBelief::new(state.clone(), DMatrix::zeros(n, n)).expect("valid belief")
            }
            InitialBeliefSpec::FirstMeasurement => {
                let z0 = &sys.h * &state + sample_noise(&noise.measurement_factor, &mut rng);
                GaussianBelief::new(z0, sys.meas_cov.clone()).expect("valid belief")
            }
            InitialBeliefSpec::Fixed { mean, cov } => {
                GaussianBelief::new(mean.clone(), cov.clone()).expect("valid belief")
            }
        };

        let mut result = TrialResult {
            seed,
            states: Vec::with_capacity(steps + 1),
            belief_means: Vec::with_capacity(steps + 1),
            barrier_true: Vec::with_capacity(steps + 1),
            barrier_estimate: Vec::with_capacity(steps + 1),
            first_exit: None,
            goal_reached: false,
            infeasible_steps: 0,
            nonconverged_steps: 0,
            estimator_faults: 0,
        };

        for k in 0..=steps {
            result.states.push(state.clone());
            result.belief_means.push(belief.mean.clone());
            result.barrier_true.push(self.true_barrier(&state));
            let reference = match self.mode {
                EnvironmentMode::Accurate => state.clone(),
                EnvironmentMode::Inaccurate => belief.mean.clone(),
            };
            let facet = self.active_facet(&reference);
            result.barrier_estimate.push(facet.eval(&belief.mean));
            if let Some(goal) = &self.goal {
                if (&state - &goal.position).norm() <= goal.radius {
                    result.goal_reached = true;
                }
            }
            if k == steps {
                break;
            }

            let nominal = match &self.nominal {
                LinearNominal::OpenLoop(u) => u.clone(),
                LinearNominal::GotoPosition(goal) => nominal_goto_position(&belief.mean, goal),
            };
            let control = match self.method {
                FilterMethod::None => nominal,
                method => {
                    let constraint = match method {
                        FilterMethod::SeaScbf => {
                            sea_scbf_constraint(&belief, sys, &facet, &self.filter)
                        }
                        FilterMethod::SeaEd => sea_ed_constraint(&belief, sys, &facet, &self.filter),
                        FilterMethod::SeaPcbf => {
                            sea_pcbf_constraint(&belief, sys, &facet, &self.filter)
                        }
                        FilterMethod::None => unreachable!(),
                    };
                    match project_halfspace(&nominal, &constraint, &self.filter.pinned) {
                        Ok(u) => u,
                        Err(_) => {
                            result.infeasible_steps += 1;
                            nominal
                        }
                    }
                }
            };

            let (next, z) = step_linear(&state, &control, sys, &noise, &mut rng);
            state = next;
            let predicted = kf_predict(&belief, sys, &control).expect("consistent dimensions");
            belief = kf_update(&predicted, sys, &z).expect("well-conditioned innovation");
        }

        result.first_exit = first_exit_from(&result.barrier_true);
        result
    }
}

impl<T: Scalar> Se2Scenario<T> {
    fn run_trial(&self, seed: u64) -> TrialResult<T> {
        let steps = self.horizon;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let process_factor = static_factor(&self.process_cov);
        let measurement = LieMeasurementSpec::<T, 3, 2>::Position {
            noise_factor: static_factor(&self.position_noise_cov),
        };
        let moments = MomentConfig {
            curvature: self.filter.curvature,
            ..MomentConfig::default()
        };

        let mut g = self.initial_pose.clone();
        let mut belief = LieBelief::new(self.initial_pose.clone(), self.initial_cov);
        let mut result = TrialResult {
            seed,
            states: Vec::with_capacity(steps + 1),
            belief_means: Vec::with_capacity(steps + 1),
            barrier_true: Vec::with_capacity(steps + 1),
            barrier_estimate: Vec::with_capacity(steps + 1),
            first_exit: None,
            goal_reached: false,
            infeasible_steps: 0,
            nonconverged_steps: 0,
            estimator_faults: 0,
        };

        for k in 0..=steps {
            let p = g.translation();
            result.states.push(DVector::from_row_slice(&[p.x, p.y]));
            let mp = belief.mean.translation();
            result.belief_means.push(DVector::from_row_slice(&[mp.x, mp.y]));
            result.barrier_true.push(self.barrier.value(&g));
            result
                .barrier_estimate
                .push(expected_barrier(&self.barrier, &belief, &moments));
            if k == steps {
                break;
            }

            let twist = if self.filtered {
                let outcome = lie_safety_filter(
                    &belief,
                    &self.nominal_twist,
                    &self.barrier,
                    &self.process_cov,
                    self.dt,
                    &self.filter,
                );
                match outcome.status {
                    SolverStatus::Infeasible => result.infeasible_steps += 1,
                    SolverStatus::NonConverged => result.nonconverged_steps += 1,
                    SolverStatus::Converged => {}
                }
                outcome.twist
            } else {
                self.nominal_twist
            };

            let (next, z) = step_lie(&g, &twist, self.dt, &process_factor, &measurement, &mut rng);
            g = next;
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                g.renormalize();
            }
            let motion = Se2::exp(&(twist * self.dt));
            let predicted = lie_predict(&belief, &motion, &self.process_cov);
            belief = match z {
                LieMeasurement::Position(z) => {
                    match lie_update_position(&predicted, &z, &self.position_noise_cov) {
                        Ok(updated) => updated,
                        Err(_) => {
                            result.estimator_faults += 1;
                            predicted
                        }
                    }
                }
                LieMeasurement::Pose(_) => unreachable!("position-only model"),
            };
        }

        result.first_exit = first_exit_from(&result.barrier_true);
        result
    }
}

impl<T: Scalar> Se3Scenario<T> {
    fn run_trial(&self, seed: u64) -> TrialResult<T> {
        let steps = self.horizon;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let process_factor = static_factor(&self.process_cov);
        let measurement = LieMeasurementSpec::<T, 6, 3>::Pose {
            noise_factor: static_factor(&self.pose_noise_cov),
        };
        let moments = MomentConfig {
            curvature: self.filter.curvature,
            ..MomentConfig::default()
        };

        let mut g = self.initial_pose.clone();
        let mut belief = LieBelief::new(self.initial_pose.clone(), self.initial_cov);
        let mut result = TrialResult {
            seed,
            states: Vec::with_capacity(steps + 1),
            belief_means: Vec::with_capacity(steps + 1),
            barrier_true: Vec::with_capacity(steps + 1),
            barrier_estimate: Vec::with_capacity(steps + 1),
            first_exit: None,
            goal_reached: false,
            infeasible_steps: 0,
            nonconverged_steps: 0,
            estimator_faults: 0,
        };

        for k in 0..=steps {
            let p = g.translation();
            result.states.push(DVector::from_row_slice(&[p.x, p.y, p.z]));
            let mp = belief.mean.translation();
            result
                .belief_means
                .push(DVector::from_row_slice(&[mp.x, mp.y, mp.z]));
            result.barrier_true.push(self.barrier.value(&g));
            result
                .barrier_estimate
                .push(expected_barrier(&self.barrier, &belief, &moments));
            if k == steps {
                break;
            }

            let nominal = match nominal_goto_pose(&belief.mean, &self.goal_pose) {
                Ok(twist) => twist,
                Err(_) => {
                    result.estimator_faults += 1;
                    SVector::zeros()
                }
            };
            let twist = if self.filtered {
                let outcome = lie_safety_filter(
                    &belief,
                    &nominal,
                    &self.barrier,
                    &self.process_cov,
                    self.dt,
                    &self.filter,
                );
                match outcome.status {
                    SolverStatus::Infeasible => result.infeasible_steps += 1,
                    SolverStatus::NonConverged => result.nonconverged_steps += 1,
                    SolverStatus::Converged => {}
                }
                outcome.twist
            } else {
                nominal
            };

            let (next, z) = step_lie(&g, &twist, self.dt, &process_factor, &measurement, &mut rng);
            g = next;
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                g.renormalize();
            }
            let motion = Se3::exp(&(twist * self.dt));
            let predicted = lie_predict(&belief, &motion, &self.process_cov);
            belief = match z {
                LieMeasurement::Pose(z) => {
                    match lie_update_pose(&predicted, &z, &self.pose_noise_cov) {
                        Ok(updated) => updated,
                        Err(_) => {
                            result.estimator_faults += 1;
                            predicted
                        }
                    }
                }
                LieMeasurement::Position(_) => unreachable!("pose model"),
            };
        }

        result.first_exit = first_exit_from(&result.barrier_true);
        result
    }
}

impl<T: Scalar> Scenario<T> {
    pub fn horizon(&self) -> usize {
        match self {
            Scenario::Linear(s) => s.horizon,
            Scenario::Se2(s) => s.horizon,
            Scenario::Se3(s) => s.horizon,
        }
    }

    /// Execute one closed-loop trial. Solver and estimator faults are
    /// recorded in the result, never aborting the trial.
    pub fn run_trial(&self, seed: u64) -> TrialResult<T> {
        match self {
            Scenario::Linear(s) => s.run_trial(seed),
            Scenario::Se2(s) => s.run_trial(seed),
            Scenario::Se3(s) => s.run_trial(seed),
        }
    }

    /// Offline exit-probability certificate over `horizon` steps.
    ///
    /// Only the linear scenario with a single affine facet admits the
    /// closed-form proxies; everything else is reported as unsupported.
    /// The initial margin is the facet value at the initial state; for a
    /// bootstrapped belief this is the expectation of the realized margin.
    pub fn certificate(&self, horizon: usize) -> Result<CertificateReport<T>, CertificateError> {
        match self {
            Scenario::Linear(s) => match &s.environment {
                LinearEnvironment::Facet(facet) => {
                    let n = s.system.state_dim();
                    let initial_cov = match &s.initial_belief {
                        InitialBeliefSpec::Exact => DMatrix::zeros(n, n),
                        InitialBeliefSpec::FirstMeasurement => s.system.meas_cov.clone(),
                        InitialBeliefSpec::Fixed { cov, .. } => cov.clone(),
                    };
                    let margin = facet.eval(&s.initial_state);
                    linear_certificate(&s.system, &initial_cov, facet, s.filter.alpha, margin, horizon)
                }
                LinearEnvironment::Corridor(_) => Err(CertificateError::Unsupported {
                    kind: "linear corridor with a composed barrier".into(),
                }),
            },
            Scenario::Se2(_) => Err(CertificateError::Unsupported { kind: "se2".into() }),
            Scenario::Se3(_) => Err(CertificateError::Unsupported { kind: "se3".into() }),
        }
    }
}

/// Run `trials` independent trials and aggregate deterministically.
pub fn run_campaign<T: Scalar>(scenario: &Scenario<T>, trials: usize, seed_base: u64) -> Campaign<T> {
    assert!(trials >= 1, "need at least one trial");
    let results: Vec<TrialResult<T>> = (0..trials)
        .into_par_iter()
        .map(|i| scenario.run_trial(seed_base.wrapping_add(i as u64)))
        .collect();

    let steps = scenario.horizon();
    let count: T = real(trials as f64);
    let mut exit_frequency = vec![T::zero(); steps + 1];
    let mut barrier_mean = vec![T::zero(); steps + 1];
    let mut barrier_sq = vec![T::zero(); steps + 1];
    let mut goal_count = 0usize;
    let mut infeasible = 0usize;
    let mut nonconverged = 0usize;
    let mut faults = 0usize;
    for trial in &results {
        if let Some(exit) = trial.first_exit {
            for slot in exit_frequency.iter_mut().skip(exit) {
                *slot += T::one();
            }
        }
        for k in 0..=steps {
            barrier_mean[k] += trial.barrier_true[k];
            barrier_sq[k] += trial.barrier_true[k] * trial.barrier_true[k];
        }
        goal_count += usize::from(trial.goal_reached);
        infeasible += trial.infeasible_steps;
        nonconverged += trial.nonconverged_steps;
        faults += trial.estimator_faults;
    }
    for slot in exit_frequency.iter_mut() {
        *slot /= count;
    }
    let mut barrier_std = vec![T::zero(); steps + 1];
    for k in 0..=steps {
        barrier_mean[k] /= count;
        let variance = (barrier_sq[k] / count - barrier_mean[k] * barrier_mean[k]).max(T::zero());
        barrier_std[k] = variance.sqrt();
    }
    let hundred: T = real(100.0);
    let has_goal = matches!(scenario, Scenario::Linear(s) if s.goal.is_some());
    let metrics = CampaignMetrics {
        trials,
        safety_rate: hundred * (T::one() - exit_frequency[steps]),
        goal_reach_rate: has_goal.then(|| hundred * real::<T>(goal_count as f64) / count),
        exit_frequency,
        barrier_mean,
        barrier_std,
        infeasible_steps: infeasible,
        nonconverged_steps: nonconverged,
        estimator_faults: faults,
    };
    Campaign {
        metrics,
        trials: results,
    }
}

/// Campaign metrics only.
pub fn monte_carlo<T: Scalar>(
    scenario: &Scenario<T>,
    trials: usize,
    seed_base: u64,
) -> CampaignMetrics<T> {
    run_campaign(scenario, trials, seed_base).metrics
}
