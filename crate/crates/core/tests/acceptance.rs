//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Campaign seeds match the shipped experiment configs.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix6, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use sea_scbf_core::barriers::{
    expected_barrier, lie_gradient, predicted_barrier_moments, AffineFacet, CorridorEnvironment,
    LaneBarrier, MomentConfig, Obstacle, SlitBarrier, SlitBarrierParams,
};
use sea_scbf_core::estimation::{
    empirical_moments, kf_predict, kf_update, lie_predict, GaussianBelief, LieBelief, LinearSystem,
};
use sea_scbf_core::filters::{
    beta_schedule, lie_safety_filter, nominal_goto_pose, FilterConfig, SolverStatus,
    VARIANCE_FLOOR,
};
use sea_scbf_core::lie::{so3, MatrixLieGroup, Se2, Se3};
use sea_scbf_core::sim::{
    monte_carlo, run_campaign, EnvironmentMode, FilterMethod, GoalSpec, InitialBeliefSpec,
    LinearEnvironment, LinearNominal, LinearScenario, Scenario, Se2Scenario, Se3Scenario,
};
use sea_scbf_core::validation;
use sea_scbf_core::Scalar;

const TRIALS: usize = 500;

fn fig2_scenario(sigma_y: f64, beta: f64, horizon: usize) -> Scenario<f64> {
    let system = LinearSystem::new(
        DMatrix::identity(2, 2),
        DMatrix::identity(2, 2) * 0.1,
        DMatrix::identity(2, 2),
        DMatrix::from_diagonal(&DVector::from_row_slice(&[0.03f64.powi(2), sigma_y * sigma_y])),
        DMatrix::identity(2, 2) * 0.03f64.powi(2),
    )
    .unwrap();
    Scenario::Linear(LinearScenario {
        system,
        environment: LinearEnvironment::Facet(
            AffineFacet::new(DVector::from_row_slice(&[0.0, 1.0]), -0.5).unwrap(),
        ),
        method: FilterMethod::SeaScbf,
        filter: FilterConfig {
            alpha: 1.0,
            beta_base: beta,
            beta_rate: 7.0,
            ..FilterConfig::default()
        },
        nominal: LinearNominal::OpenLoop(DVector::from_row_slice(&[1.0, 0.0])),
        initial_state: DVector::from_row_slice(&[0.0, 0.0]),
        initial_belief: InitialBeliefSpec::Exact,
        horizon,
        mode: EnvironmentMode::Accurate,
        goal: None,
    })
}

const SWEEP_SIGMA: [f64; 4] = [0.05, 0.1, 0.15, 0.2];
const SWEEP_BETA: [f64; 2] = [1.0, 2.0];

fn horizon_grid() -> Vec<usize> {
    (1..=20).map(|k| 5 * k).collect()
}

/// Bound and empirical frequency for the whole sweep, one campaign (and one
/// certificate pipeline) per (beta, sigma) pair.
fn bound_and_frequency() -> Vec<(usize, f64, f64, f64, f64)> {
    let mut rows = Vec::new();
    for beta in SWEEP_BETA {
        for sigma_y in SWEEP_SIGMA {
            let scenario = fig2_scenario(sigma_y, beta, 100);
            let metrics = monte_carlo(&scenario, TRIALS, 20240);
            for horizon in horizon_grid() {
                let report = scenario.certificate(horizon).unwrap();
                rows.push((
                    horizon,
                    sigma_y,
                    beta,
                    report.bound,
                    metrics.exit_frequency[horizon],
                ));
            }
        }
    }
    rows
}

#[test]
fn criterion_1_bound_dominance() {
    let started = std::time::Instant::now();
    let rows = bound_and_frequency();
    let violations: Vec<_> = rows.iter().filter(|r| r.3 < r.4).collect();
    assert!(
        violations.is_empty(),
        "[FAIL] criterion 1: {} dominance violations, first {:?}",
        violations.len(),
        violations.first()
    );
    println!(
        "[PASS] criterion 1: bound >= empirical frequency on all {} sweep rows ({:?})",
        rows.len(),
        started.elapsed()
    );
}

#[test]
fn criterion_2_monotonicity() {
    let rows = bound_and_frequency();
    // Nondecreasing in T within each (beta, sigma) series.
    for beta in SWEEP_BETA {
        for sigma_y in SWEEP_SIGMA {
            let series: Vec<_> = rows
                .iter()
                .filter(|r| r.1 == sigma_y && r.2 == beta)
                .collect();
            for pair in series.windows(2) {
                assert!(
                    pair[1].3 >= pair[0].3 - 1e-12,
                    "[FAIL] criterion 2: bound not monotone in T at sigma={sigma_y} beta={beta}"
                );
                assert!(
                    pair[1].4 >= pair[0].4,
                    "[FAIL] criterion 2: frequency not monotone in T at sigma={sigma_y} beta={beta}"
                );
            }
        }
    }
    // Frequency nondecreasing in sigma at fixed T, within one binomial SE.
    for beta in SWEEP_BETA {
        for horizon in horizon_grid() {
            let series: Vec<f64> = SWEEP_SIGMA
                .iter()
                .map(|s| {
                    rows.iter()
                        .find(|r| r.0 == horizon && r.1 == *s && r.2 == beta)
                        .unwrap()
                        .4
                })
                .collect();
            for pair in series.windows(2) {
                let pooled = 0.5 * (pair[0] + pair[1]);
                let se = (pooled * (1.0 - pooled) / TRIALS as f64)
                    .sqrt()
                    .max(1.0 / TRIALS as f64);
                assert!(
                    pair[1] >= pair[0] - se,
                    "[FAIL] criterion 2: frequency decreased beyond one SE at T={horizon} beta={beta}: {} -> {}",
                    pair[0],
                    pair[1]
                );
            }
        }
    }
    println!("[PASS] criterion 2: bound/frequency monotone in T; frequency monotone in sigma");
}

/// The shipped default corridor: eleven dodecahedra staggered through a
/// 12 x 4 x 4 box, rotating among the four lateral quadrants.
fn default_corridor() -> CorridorEnvironment<f64> {
    let quadrants = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    let obstacles = (0..11)
        .map(|k| {
            let q = quadrants[k % 4];
            let center =
                DVector::from_row_slice(&[1.2 + 0.95 * k as f64, 1.3 * q[0], 1.3 * q[1]]);
            Obstacle::dodecahedron(&center, 0.9)
        })
        .collect();
    let walls = vec![
        AffineFacet::new(DVector::from_row_slice(&[0.0, 1.0, 0.0]), -2.0).unwrap(),
        AffineFacet::new(DVector::from_row_slice(&[0.0, -1.0, 0.0]), -2.0).unwrap(),
        AffineFacet::new(DVector::from_row_slice(&[0.0, 0.0, 1.0]), -2.0).unwrap(),
        AffineFacet::new(DVector::from_row_slice(&[0.0, 0.0, -1.0]), -2.0).unwrap(),
    ];
    CorridorEnvironment::new(obstacles, walls).unwrap()
}

fn corridor_scenario(method: FilterMethod, mode: EnvironmentMode) -> Scenario<f64> {
    let dt = 0.03;
    let system = LinearSystem::new(
        DMatrix::identity(3, 3),
        DMatrix::identity(3, 3) * dt,
        DMatrix::identity(3, 3),
        DMatrix::identity(3, 3) * 0.06f64.powi(2),
        DMatrix::identity(3, 3) * 0.2f64.powi(2),
    )
    .unwrap();
    Scenario::Linear(LinearScenario {
        system,
        environment: LinearEnvironment::Corridor(default_corridor()),
        method,
        filter: FilterConfig {
            alpha: 0.9,
            beta_base: 3.93,
            beta_rate: 7.0,
            pcbf_quantile: 3.93,
            ..FilterConfig::default()
        },
        nominal: LinearNominal::GotoPosition(DVector::from_row_slice(&[12.0, 0.0, 0.0])),
        initial_state: DVector::from_row_slice(&[0.0, 0.0, 0.0]),
        initial_belief: InitialBeliefSpec::FirstMeasurement,
        horizon: 240,
        mode,
        goal: Some(GoalSpec {
            position: DVector::from_row_slice(&[12.0, 0.0, 0.0]),
            radius: 0.15,
        }),
    })
}

#[test]
fn criterion_3_corridor_ordinal() {
    let started = std::time::Instant::now();
    let mut safety = std::collections::HashMap::new();
    let mut goal = std::collections::HashMap::new();
    for mode in [EnvironmentMode::Accurate, EnvironmentMode::Inaccurate] {
        for method in [
            FilterMethod::SeaScbf,
            FilterMethod::SeaEd,
            FilterMethod::SeaPcbf,
        ] {
            let metrics = monte_carlo(&corridor_scenario(method, mode), TRIALS, 31337);
            safety.insert((method, mode), metrics.safety_rate);
            goal.insert((method, mode), metrics.goal_reach_rate.unwrap());
        }
    }
    let acc = EnvironmentMode::Accurate;
    let inacc = EnvironmentMode::Inaccurate;
    // (a) strict safety ordering under accurate selection
    let (scbf, ed, pcbf) = (
        safety[&(FilterMethod::SeaScbf, acc)],
        safety[&(FilterMethod::SeaEd, acc)],
        safety[&(FilterMethod::SeaPcbf, acc)],
    );
    assert!(
        scbf > pcbf && pcbf > ed,
        "[FAIL] criterion 3a: safety ordering violated: scbf {scbf} pcbf {pcbf} ed {ed}"
    );
    // (b) the quantile method barely reaches the goal
    let pcbf_goal = goal[&(FilterMethod::SeaPcbf, acc)];
    assert!(
        pcbf_goal < 0.5 * goal[&(FilterMethod::SeaScbf, acc)]
            && pcbf_goal < 0.5 * goal[&(FilterMethod::SeaEd, acc)],
        "[FAIL] criterion 3b: pcbf goal reach {pcbf_goal} not below half of the others"
    );
    // (c) inaccurate selection never helps by more than 2 points
    for method in [
        FilterMethod::SeaScbf,
        FilterMethod::SeaEd,
        FilterMethod::SeaPcbf,
    ] {
        assert!(
            safety[&(method, inacc)] <= safety[&(method, acc)] + 2.0,
            "[FAIL] criterion 3c: safety of {method:?} improves under inaccurate selection"
        );
        assert!(
            goal[&(method, inacc)] <= goal[&(method, acc)] + 2.0,
            "[FAIL] criterion 3c: goal reach of {method:?} improves under inaccurate selection"
        );
    }
    println!(
        "[PASS] criterion 3: safety {scbf:.1} > {pcbf:.1} > {ed:.1}, pcbf goal {pcbf_goal:.1}%, \
         inaccurate within +2pp ({:?})",
        started.elapsed()
    );
}

fn se2_scenario(filtered: bool) -> Scenario<f64> {
    Scenario::Se2(Se2Scenario {
        dt: 0.1,
        horizon: 50,
        process_cov: Matrix3::from_diagonal(&Vector3::new(
            0.1f64.powi(2),
            0.03f64.powi(2),
            0.03f64.powi(2),
        )),
        position_noise_cov: Matrix2::identity() * 0.05f64.powi(2),
        barrier: LaneBarrier::default(),
        filtered,
        filter: FilterConfig {
            alpha: 0.9,
            beta_base: 2.0,
            beta_rate: 8.0,
            pinned: vec![Se2::<f64>::LINEAR_Y],
            ..FilterConfig::default()
        },
        nominal_twist: Vector3::new(0.0, 1.0, 0.0),
        initial_pose: Se2::identity(),
        initial_cov: Matrix3::identity() * 1e-4,
    })
}

#[test]
fn criterion_4_se2_safety() {
    let started = std::time::Instant::now();
    let filtered = run_campaign(&se2_scenario(true), TRIALS, 20240);
    let exits = filtered.trials.iter().filter(|t| !t.safe()).count();
    assert_eq!(
        exits, 0,
        "[FAIL] criterion 4: {exits} filtered trials left the lane"
    );
    assert_eq!(filtered.metrics.safety_rate, 100.0);
    let unfiltered = monte_carlo(&se2_scenario(false), TRIALS, 20240);
    assert!(
        unfiltered.safety_rate < 100.0,
        "[FAIL] criterion 4: unfiltered safety must be strictly lower"
    );
    println!(
        "[PASS] criterion 4: filtered 100.0% vs unfiltered {:.1}% over {TRIALS} trials ({:?})",
        unfiltered.safety_rate,
        started.elapsed()
    );
}

fn se3_scenario(filtered: bool) -> Scenario<f64> {
    let mut process = Matrix6::<f64>::zeros();
    for i in 0..3 {
        process[(i, i)] = 0.08f64.powi(2);
        process[(i + 3, i + 3)] = 0.03f64.powi(2);
    }
    Scenario::Se3(Se3Scenario {
        dt: 0.1,
        horizon: 70,
        process_cov: process,
        pose_noise_cov: Matrix6::identity() * 0.05f64.powi(2),
        barrier: SlitBarrier::new(SlitBarrierParams::default()).unwrap(),
        filtered,
        filter: FilterConfig {
            alpha: 0.9,
            beta_base: 2.0,
            beta_rate: 8.0,
            curvature: true,
            ..FilterConfig::default()
        },
        goal_pose: Se3::from_translation(Vector3::new(4.5, 0.0, 0.0)),
        initial_pose: Se3::identity(),
        initial_cov: Matrix6::identity() * 1e-4,
    })
}

#[test]
fn criterion_5_se3_slit() {
    let started = std::time::Instant::now();
    let campaign = run_campaign(&se3_scenario(true), TRIALS, 777);
    for trial in &campaign.trials {
        let min = trial
            .barrier_true
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(
            min >= 0.0,
            "[FAIL] criterion 5: trial {} dipped to barrier {min}",
            trial.seed
        );
    }
    let mean = &campaign.metrics.barrier_mean;
    let (min_step, min_value) = mean
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    assert!(
        min_step > 5 && min_step < 65,
        "[FAIL] criterion 5: mean-barrier minimum at step {min_step}, outside (5, 65)"
    );
    assert!(mean[min_step..].iter().any(|v| v > min_value));
    println!(
        "[PASS] criterion 5: all {TRIALS} trials nonnegative; mean barrier dips to {min_value:.3} \
         at step {min_step} and recovers ({:?})",
        started.elapsed()
    );
}

#[test]
fn criterion_6_qp_oracles() {
    let started = std::time::Instant::now();
    // Closed-form projection against the KKT solve on 1e4 instances.
    let report = validation::qp_projection_check(6021, 10_000);
    assert!(report.passed, "[FAIL] criterion 6: {}", report.detail);

    // Lie safety filter against a coarse grid oracle on 50 near-slit poses.
    let barrier = SlitBarrier::new(SlitBarrierParams::default()).unwrap();
    let goal = Se3::from_translation(Vector3::new(4.5, 0.0, 0.0));
    let mut process = Matrix6::<f64>::zeros();
    for i in 0..3 {
        process[(i, i)] = 0.08f64.powi(2);
        process[(i + 3, i + 3)] = 0.03f64.powi(2);
    }
    let cfg = FilterConfig {
        alpha: 0.9,
        beta_base: 2.0,
        beta_rate: 8.0,
        curvature: true,
        ..FilterConfig::default()
    };
    let moments = MomentConfig {
        curvature: true,
        ..MomentConfig::default()
    };
    let dt = 0.1;
    let mut checked = 0;
    for xi in 0..5 {
        let x = 1.0 + 0.3 * xi as f64;
        for yaw in [0.2, 0.5, 0.8, 1.1, 1.35] {
            for y in [-0.1, 0.1] {
                let pose = Se3::from_parts(
                    so3::exp(&Vector3::new(0.0, 0.0, yaw)),
                    Vector3::new(x, y, 0.0),
                );
                let belief = LieBelief::new(pose.clone(), Matrix6::identity() * 1.5e-3);
                let nominal = nominal_goto_pose(&pose, &goal).unwrap();
                let out = lie_safety_filter(&belief, &nominal, &barrier, &process, dt, &cfg);
                assert!(
                    out.status != SolverStatus::Infeasible,
                    "[FAIL] criterion 6: filter infeasible at x={x} yaw={yaw} y={y}"
                );
                assert!(out.constraint_value >= -1e-8);

                let estimate = expected_barrier(&barrier, &belief, &moments);
                let beta_k = beta_schedule(&cfg, estimate);
                let constraint = |twist: &Vector6<f64>| {
                    let motion = Se3::exp(&(twist * dt));
                    let (mean, variance) = predicted_barrier_moments(
                        &barrier, &belief, &motion, &process, &moments,
                    );
                    mean - beta_k * variance.max(VARIANCE_FLOOR).sqrt() - cfg.alpha * estimate
                };
                // 21 points per active dimension (yaw rate, forward, lateral).
                let mut best = f64::INFINITY;
                let span = 10.0;
                let n = 21;
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            let mut candidate = nominal;
                            candidate[2] += -span + 2.0 * span * (i as f64) / ((n - 1) as f64);
                            candidate[3] += -span + 2.0 * span * (j as f64) / ((n - 1) as f64);
                            candidate[4] += -span + 2.0 * span * (l as f64) / ((n - 1) as f64);
                            if constraint(&candidate) >= 0.0 {
                                best = best.min((candidate - nominal).norm());
                            }
                        }
                    }
                }
                if best.is_finite() {
                    let ours = (out.twist - nominal).norm();
                    assert!(
                        ours <= best + 1e-3,
                        "[FAIL] criterion 6: filter distance {ours:.4} vs grid {best:.4} \
                         at x={x} yaw={yaw} y={y}"
                    );
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 50);
    println!(
        "[PASS] criterion 6: projection matches KKT oracle on 1e4 instances; filter within \
         1e-3 of grid optimum on {checked} near-slit poses ({:?})",
        started.elapsed()
    );
}

#[test]
fn criterion_7_geometry_suite() {
    let started = std::time::Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(7007);

    // Exp/log roundtrip up to the branch margin.
    let mut worst_roundtrip = 0.0f64;
    for _ in 0..500 {
        let axis = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let axis = axis / axis.norm();
        let omega = axis * rng.random_range(0.0..std::f64::consts::PI - 1e-3);
        let v = Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let xi = Se3::<f64>::twist_from_parts(omega, v);
        let back = Se3::exp(&xi).log().unwrap();
        worst_roundtrip = worst_roundtrip.max((back - xi).norm());
    }
    assert!(
        worst_roundtrip < 1e-10,
        "[FAIL] criterion 7: roundtrip error {worst_roundtrip}"
    );

    let adjoint = validation::adjoint_conjugation_check(7008);
    assert!(adjoint.passed, "[FAIL] criterion 7: {}", adjoint.detail);
    let bch = validation::bch_order_check(7009);
    assert!(bch.passed, "[FAIL] criterion 7: {}", bch.detail);

    // Numerical gradients against analytic oracles.
    let lane = LaneBarrier::<f64>::default();
    for heading in [-1.2, 0.0, 0.4, 2.0] {
        let g = Se2::from_pose(0.7, -0.9, heading);
        let grad = lie_gradient(&lane, &g, 1e-5);
        let r = g.rotation();
        let analytic = Vector3::new(0.0, r[(1, 0)], r[(1, 1)]);
        assert!(
            (grad - analytic).norm() < 1e-5,
            "[FAIL] criterion 7: lane gradient off at heading {heading}"
        );
    }
    let quadratic = |g: &Se3<f64>| g.translation().norm_squared();
    let probe = Se3::from_parts(
        so3::exp(&Vector3::new(0.3, -0.2, 0.5)),
        Vector3::new(0.4, -1.0, 0.8),
    );
    let grad = lie_gradient(&quadratic, &probe, 1e-5);
    let analytic_linear = probe.rotation().transpose() * probe.translation() * 2.0;
    assert!(
        (grad.fixed_rows::<3>(3) - analytic_linear).norm() < 1e-5,
        "[FAIL] criterion 7: quadratic gradient off"
    );
    let richardson = validation::gradient_richardson_check(1e-5);
    assert!(richardson.passed, "[FAIL] criterion 7: {}", richardson.detail);

    // Curvature-corrected expectation against Monte Carlo on the slit.
    let barrier = SlitBarrier::new(SlitBarrierParams::default()).unwrap();
    let pose = Se3::from_parts(
        so3::exp(&Vector3::new(0.15, 0.25, 0.6)),
        Vector3::new(1.2, 0.05, -0.1),
    );
    let scale = 0.05;
    let belief = LieBelief::new(pose.clone(), Matrix6::identity() * scale * scale);
    let analytic = expected_barrier(&barrier, &belief, &MomentConfig::default());
    let samples = 100_000;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let delta = Vector6::from_fn(|_, _| scale * f64::standard_normal(&mut rng));
        let value = sea_scbf_core::barriers::Barrier::value(
            &barrier,
            &pose.compose(&Se3::exp(&delta)),
        );
        sum += value;
        sum_sq += value * value;
    }
    let mc_mean = sum / samples as f64;
    let mc_var = sum_sq / samples as f64 - mc_mean * mc_mean;
    let se = (mc_var / samples as f64).sqrt();
    assert!(
        (analytic - mc_mean).abs() <= 3.0 * se,
        "[FAIL] criterion 7: expected barrier {analytic:.6} vs MC {mc_mean:.6} (3 SE = {:.6})",
        3.0 * se
    );
    println!(
        "[PASS] criterion 7: roundtrip {worst_roundtrip:.2e}; adjoint/BCH/gradients/Richardson ok; \
         curvature expectation within {:.2} SE ({:?})",
        (analytic - mc_mean).abs() / se,
        started.elapsed()
    );
}

#[test]
fn criterion_8_estimator_consistency() {
    let started = std::time::Instant::now();
    // Two-step filter against batch Gaussian least squares.
    let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, -0.2, 1.0]);
    let meas_cov = DMatrix::from_row_slice(2, 2, &[0.05, 0.01, 0.01, 0.08]);
    let sys = LinearSystem::new(
        DMatrix::identity(2, 2),
        DMatrix::identity(2, 2),
        h.clone(),
        DMatrix::zeros(2, 2),
        meas_cov.clone(),
    )
    .unwrap();
    let prior_mean = DVector::from_row_slice(&[0.4, -0.7]);
    let prior_cov = DMatrix::from_row_slice(2, 2, &[0.3, 0.05, 0.05, 0.2]);
    let z1 = DVector::from_row_slice(&[0.5, -0.6]);
    let z2 = DVector::from_row_slice(&[0.3, -0.9]);
    let mut belief = GaussianBelief::new(prior_mean.clone(), prior_cov.clone()).unwrap();
    for z in [&z1, &z2] {
        belief = kf_update(
            &kf_predict(&belief, &sys, &DVector::zeros(2)).unwrap(),
            &sys,
            z,
        )
        .unwrap();
    }
    let prior_info = prior_cov.try_inverse().unwrap();
    let meas_info = meas_cov.try_inverse().unwrap();
    let info = &prior_info + h.transpose() * &meas_info * &h * 2.0;
    let cov = info.try_inverse().unwrap();
    let mean = &cov * (&prior_info * prior_mean + h.transpose() * &meas_info * (&z1 + &z2));
    assert!(
        (belief.mean - mean).norm() < 1e-10 && (belief.cov - cov).norm() < 1e-10,
        "[FAIL] criterion 8: filter does not match batch least squares"
    );

    // Predicted covariance against sampled group moments at noise 0.05.
    let scale = 0.05;
    let base = Se3::<f64>::from_parts(
        so3::exp(&Vector3::new(0.2, -0.1, 0.4)),
        Vector3::new(1.0, 0.5, -0.3),
    );
    let motion = Se3::exp(&Vector6::new(0.05, -0.1, 0.3, 0.6, 0.0, 0.1));
    let process = Matrix6::identity() * scale * scale;
    let belief = LieBelief::new(base.clone(), Matrix6::identity() * scale * scale);
    let predicted = lie_predict(&belief, &motion, &process);

    let mut rng = ChaCha12Rng::seed_from_u64(8008);
    let samples: Vec<Se3<f64>> = (0..100_000)
        .map(|_| {
            let delta = Vector6::from_fn(|_, _| scale * f64::standard_normal(&mut rng));
            let eps = Vector6::from_fn(|_, _| scale * f64::standard_normal(&mut rng));
            base.compose(&Se3::exp(&delta))
                .compose(&motion)
                .compose(&Se3::exp(&eps))
        })
        .collect();
    let empirical = empirical_moments(&samples).unwrap();
    let relative = (empirical.cov - predicted.cov).norm() / predicted.cov.norm();
    assert!(
        relative < 0.05,
        "[FAIL] criterion 8: predicted covariance off by {relative:.3} relative"
    );
    println!(
        "[PASS] criterion 8: batch least squares < 1e-10; sampled prediction covariance within \
         {relative:.3} relative ({:?})",
        started.elapsed()
    );
}
