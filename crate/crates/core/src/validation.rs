//! Seed-deterministic oracle checks: closed-form geometry against truncated
//! series, the half-space projection against a KKT solve, the truncated BCH
//! order fit, sampling checks for the group moments, and a Richardson test
//! of the numerical Lie derivatives. The command-line `validate` run prints
//! one line per check and fails if any of them does.

use nalgebra::{DMatrix, DVector, Matrix4, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::barriers::{lie_gradient, SlitBarrier, SlitBarrierParams};
use crate::filters::{project_halfspace, HalfspaceConstraint};
use crate::lie::{MatrixLieGroup, Se3};
use crate::scalar::Scalar;

/// Outcome of one validation check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckReport {
            name,
            passed,
            detail,
        }
    }
}

/// Run the full suite with the crate's default settings.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        qp_projection_check(seed, 10_000),
        exp_log_series_check(seed ^ 0x9e37_79b9_7f4a_7c15),
        bch_order_check(seed ^ 0x5851_f42d_4c95_7f2d),
        adjoint_conjugation_check(seed ^ 0xda94_2042_e4dd_58b5),
        moment_sampling_check(seed ^ 0x2545_f491_4f6c_dd1d, 100_000),
        gradient_richardson_check(1e-5),
    ]
}

/// Active-set KKT oracle for the half-space projection: solve the
/// unconstrained and boundary-active candidates through a dense LU
/// factorization (with pinned coordinates as equality rows) and keep the
/// best feasible one. Independent of the closed-form projection path.
pub fn kkt_halfspace_oracle(
    nominal: &DVector<f64>,
    constraint: &HalfspaceConstraint<f64>,
    pinned: &[usize],
) -> Option<DVector<f64>> {
    let m = nominal.len();
    let solve = |with_boundary: bool| -> Option<DVector<f64>> {
        let extra = pinned.len() + usize::from(with_boundary);
        let dim = m + extra;
        let mut kkt = DMatrix::<f64>::zeros(dim, dim);
        let mut rhs = DVector::<f64>::zeros(dim);
        for i in 0..m {
            kkt[(i, i)] = 2.0;
            rhs[i] = 2.0 * nominal[i];
        }
        let mut row = m;
        if with_boundary {
            for i in 0..m {
                kkt[(i, row)] = -constraint.normal[i];
                kkt[(row, i)] = constraint.normal[i];
            }
            rhs[row] = constraint.rhs;
            row += 1;
        }
        for &p in pinned {
            kkt[(p, row)] = -1.0;
            kkt[(row, p)] = 1.0;
            row += 1;
        }
        kkt.lu().solve(&rhs).map(|sol| sol.rows(0, m).into_owned())
    };
    let mut best: Option<DVector<f64>> = None;
    let mut best_objective = f64::INFINITY;
    for with_boundary in [false, true] {
        if let Some(u) = solve(with_boundary) {
            let feasible = constraint.normal.dot(&u) >= constraint.rhs - 1e-9
                && pinned.iter().all(|&p| u[p].abs() < 1e-9);
            if feasible {
                let objective = (&u - nominal).norm_squared();
                if objective < best_objective {
                    best_objective = objective;
                    best = Some(u);
                }
            }
        }
    }
    best
}

/// Closed-form projection against the KKT oracle on random instances.
pub fn qp_projection_check(seed: u64, cases: usize) -> CheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_gap = 0.0f64;
    let mut checked = 0usize;
    for case in 0..cases {
        let m = 1 + case % 3;
        let nominal = DVector::from_fn(m, |_, _| rng.random_range(-2.0..2.0));
        // Well-scaled normals keep the KKT oracle itself accurate.
        let mut normal = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
        while normal.norm() < 0.3 {
            normal = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
        }
        let constraint = HalfspaceConstraint {
            normal,
            rhs: rng.random_range(-1.0..1.0),
        };
        let pinned: &[usize] = if case % 7 == 0 && m > 1 { &[0] } else { &[] };
        let ours = match project_halfspace(&nominal, &constraint, pinned) {
            Ok(u) => u,
            Err(_) => continue,
        };
        if constraint.normal.dot(&ours) < constraint.rhs - 1e-12 {
            return CheckReport::new(
                "qp-projection",
                false,
                format!("constraint violated on case {case}"),
            );
        }
        if let Some(oracle) = kkt_halfspace_oracle(&nominal, &constraint, pinned) {
            let gap = ((&ours - &nominal).norm_squared() - (&oracle - &nominal).norm_squared())
                .abs();
            worst_gap = worst_gap.max(gap);
            checked += 1;
        }
    }
    CheckReport::new(
        "qp-projection",
        worst_gap <= 1e-8,
        format!("{checked} instances, worst objective gap {worst_gap:.3e}"),
    )
}

fn series_exp4(m: &Matrix4<f64>, terms: usize) -> Matrix4<f64> {
    let mut sum = Matrix4::identity();
    let mut power = Matrix4::identity();
    for n in 1..=terms {
        power = power * m / (n as f64);
        sum += power;
    }
    sum
}

fn random_twist<R: Rng>(rng: &mut R, angle_limit: f64, linear_limit: f64) -> Vector6<f64> {
    let omega = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let omega = if omega.norm() > 0.0 {
        omega * (rng.random_range(0.0..angle_limit) / omega.norm())
    } else {
        omega
    };
    let v = Vector3::from_fn(|_, _| rng.random_range(-linear_limit..linear_limit));
    Se3::<f64>::twist_from_parts(omega, v)
}

/// Closed-form exponential and its inverse against a 30-term series.
pub fn exp_log_series_check(seed: u64) -> CheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_exp = 0.0f64;
    let mut worst_roundtrip = 0.0f64;
    for _ in 0..200 {
        let xi = random_twist(&mut rng, 2.0, 2.0);
        let g = Se3::exp(&xi);
        let oracle = series_exp4(&Se3::hat(&xi), 30);
        worst_exp = worst_exp.max((g.matrix() - oracle).norm());
        match g.log() {
            Ok(back) => worst_roundtrip = worst_roundtrip.max((back - xi).norm()),
            Err(e) => {
                return CheckReport::new("exp-log-series", false, format!("log failed: {e}"))
            }
        }
    }
    CheckReport::new(
        "exp-log-series",
        worst_exp < 1e-10 && worst_roundtrip < 1e-10,
        format!("worst series gap {worst_exp:.3e}, worst roundtrip {worst_roundtrip:.3e}"),
    )
}

/// Order fit of the truncated BCH expansion: the residual against the exact
/// composition log must scale as the fourth power of the twist size.
pub fn bch_order_check(seed: u64) -> CheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let scales = [0.2, 0.1, 0.05];
    let mut worst_slope = f64::INFINITY;
    for _ in 0..20 {
        let xi = random_twist(&mut rng, 1.0, 1.0);
        let zeta = random_twist(&mut rng, 1.0, 1.0);
        let mut points = Vec::new();
        for &s in &scales {
            let a = xi * s;
            let b = zeta * s;
            let exact = Se3::exp(&a).compose(&Se3::exp(&b)).log().unwrap();
            let error = (Se3::bch_truncated(&a, &b) - exact).norm();
            if error < 1e-15 {
                // Commuting pair: the truncation is exact, nothing to fit.
                points.clear();
                break;
            }
            points.push((s.ln(), error.ln()));
        }
        if points.is_empty() {
            continue;
        }
        // Least-squares slope through the three log-log points.
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        worst_slope = worst_slope.min(slope);
    }
    CheckReport::new(
        "bch-order-fit",
        worst_slope >= 3.7,
        format!("worst fitted slope {worst_slope:.3}"),
    )
}

/// Adjoint action against direct conjugation in the algebra.
pub fn adjoint_conjugation_check(seed: u64) -> CheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let g = Se3::exp(&random_twist(&mut rng, 2.5, 2.0));
        let xi = random_twist(&mut rng, 1.0, 1.0);
        let conjugated = Se3::vee(&(g.matrix() * Se3::hat(&xi) * g.inverse().matrix()));
        worst = worst.max((g.adjoint() * xi - conjugated).norm());
    }
    CheckReport::new(
        "adjoint-conjugation",
        worst < 1e-10,
        format!("worst conjugation residual {worst:.3e}"),
    )
}

/// Group-moment estimation against the known sampling distribution.
pub fn moment_sampling_check(seed: u64, samples: usize) -> CheckReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let scale = 0.05;
    let draws: Vec<Se3<f64>> = (0..samples)
        .map(|_| {
            let eps = Vector6::from_fn(|_, _| scale * f64::standard_normal(&mut rng));
            Se3::exp(&eps)
        })
        .collect();
    match crate::estimation::empirical_moments(&draws) {
        Ok(belief) => {
            let target = nalgebra::Matrix6::<f64>::identity() * scale * scale;
            let relative = (belief.cov - target).norm() / target.norm();
            CheckReport::new(
                "moment-sampling",
                relative < 0.05,
                format!("{samples} samples, relative covariance error {relative:.4}"),
            )
        }
        Err(e) => CheckReport::new("moment-sampling", false, format!("estimation failed: {e}")),
    }
}

/// Richardson stability of the numerical Lie gradient on the slit barrier:
/// halving the step must barely move the result. Fails by design for badly
/// misconfigured steps, which is the negative control of the suite.
pub fn gradient_richardson_check(step: f64) -> CheckReport {
    let barrier = SlitBarrier::new(SlitBarrierParams::default()).expect("default slit barrier");
    let probe = Se3::from_parts(
        crate::lie::so3::exp(&Vector3::new(0.1, 0.2, 0.7)),
        Vector3::new(1.8, 0.1, -0.05),
    );
    let coarse = lie_gradient(&barrier, &probe, step);
    let fine = lie_gradient(&barrier, &probe, step / 2.0);
    let relative = (coarse - fine).norm() / fine.norm().max(1e-12);
    CheckReport::new(
        "gradient-richardson",
        relative < 1e-6,
        format!("step {step:.1e}, relative change {relative:.3e}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes_on_defaults() {
        for report in run_all(2024) {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }

    #[test]
    fn suite_is_seed_deterministic() {
        let a = run_all(7);
        let b = run_all(7);
        assert_eq!(a, b);
    }

    #[test]
    fn misconfigured_gradient_step_fails_richardson() {
        let report = gradient_richardson_check(1e-1);
        assert!(!report.passed, "negative control must fail: {}", report.detail);
    }
}
