//! SO(3) building blocks: hat/vee, Rodrigues exponential, principal-branch
//! logarithm and the left Jacobian. SE(3) is assembled from these.

use nalgebra::{Matrix3, Vector3};

use super::{LieError, LOG_BRANCH_MARGIN, SMALL_ANGLE};
use crate::scalar::{real, Scalar};

/// Skew-symmetric matrix of an angular-velocity vector.
#[rustfmt::skip]
pub fn hat<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3::new(
         z,   -w.z,  w.y,
         w.z,  z,   -w.x,
        -w.y,  w.x,  z,
    )
}

/// Inverse of [`hat`]. Reads the strictly lower triangle; the caller is
/// responsible for handing in a skew-symmetric matrix.
pub fn vee<T: Scalar>(m: &Matrix3<T>) -> Vector3<T> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// sin(t)/t with series fallback below [`SMALL_ANGLE`].
pub(crate) fn sinc<T: Scalar>(theta: T) -> T {
    if theta < real(SMALL_ANGLE) {
        let t2 = theta * theta;
        let (c1, c2): (T, T) = (real(6.0), real(120.0));
        T::one() - t2 / c1 + t2 * t2 / c2
    } else {
        theta.sin() / theta
    }
}

/// (1 - cos(t))/t^2 with series fallback.
pub(crate) fn one_minus_cos_over_sq<T: Scalar>(theta: T) -> T {
    if theta < real(SMALL_ANGLE) {
        let t2 = theta * theta;
        let (c0, c1, c2): (T, T, T) = (real(0.5), real(24.0), real(720.0));
        c0 - t2 / c1 + t2 * t2 / c2
    } else {
        (T::one() - theta.cos()) / (theta * theta)
    }
}

/// (t - sin(t))/t^3 with series fallback.
pub(crate) fn theta_minus_sin_over_cube<T: Scalar>(theta: T) -> T {
    if theta < real(SMALL_ANGLE) {
        let t2 = theta * theta;
        let (c0, c1, c2): (T, T, T) = (real(1.0 / 6.0), real(120.0), real(5040.0));
        c0 - t2 / c1 + t2 * t2 / c2
    } else {
        (theta - theta.sin()) / (theta * theta * theta)
    }
}

/// t/sin(t) with series fallback.
fn inverse_sinc<T: Scalar>(theta: T) -> T {
    if theta < real(SMALL_ANGLE) {
        let t2 = theta * theta;
        let (c1, c2): (T, T) = (real(6.0), real(7.0 / 360.0));
        T::one() + t2 / c1 + t2 * t2 * c2
    } else {
        theta / theta.sin()
    }
}

/// Rodrigues formula: `exp(w^) = I + sinc(t) w^ + (1-cos t)/t^2 (w^)^2`.
pub fn exp<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    let theta = w.norm();
    let w_hat = hat(w);
    Matrix3::identity() + w_hat * sinc(theta) + w_hat * w_hat * one_minus_cos_over_sq(theta)
}

/// Left Jacobian `J(w) = I + (1-cos t)/t^2 w^ + (t - sin t)/t^3 (w^)^2`.
pub fn left_jacobian<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    let theta = w.norm();
    let w_hat = hat(w);
    Matrix3::identity()
        + w_hat * one_minus_cos_over_sq(theta)
        + w_hat * w_hat * theta_minus_sin_over_cube(theta)
}

/// Principal-branch rotation logarithm.
///
/// The angle is recovered from `atan2(||(R - R^T)/2||, (tr R - 1)/2)`, which
/// stays accurate over the whole principal branch; angles within
/// [`LOG_BRANCH_MARGIN`] of pi are an error.
pub fn log<T: Scalar>(r: &Matrix3<T>) -> Result<Vector3<T>, LieError> {
    let half = real(0.5);
    let cos_theta = ((r.trace() - T::one()) * half).clamp(-T::one(), T::one());
    let skew = (r - r.transpose()) * half;
    let sin_vec = vee(&skew);
    let sin_theta = sin_vec.norm();
    let theta = sin_theta.atan2(cos_theta);
    if theta >= real(std::f64::consts::PI - LOG_BRANCH_MARGIN) {
        return Err(LieError::LogBranch {
            angle: theta.to_f64_lossy(),
        });
    }
    Ok(sin_vec * inverse_sinc(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    /// Truncated matrix-exponential series, the oracle for the closed forms.
    pub(crate) fn series_exp(m: &Matrix3<f64>, terms: usize) -> Matrix3<f64> {
        let mut sum = Matrix3::identity();
        let mut power = Matrix3::identity();
        for n in 1..=terms {
            power = power * m / (n as f64);
            sum += power;
        }
        sum
    }

    #[test]
    fn hat_of_zero_is_zero() {
        assert_eq!(hat(&Vector3::zeros()), Matrix3::<f64>::zeros());
    }

    #[test]
    fn hat_of_e3_matches_basis_skew() {
        let m = hat(&Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(1, 0)], 1.0);
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(m[(2, 2)], 0.0);
    }

    #[test]
    fn vee_inverts_hat() {
        let w = Vector3::new(0.3, -1.2, 0.77);
        assert_eq!(vee(&hat(&w)), w);
    }

    #[test]
    fn exp_matches_series_oracle() {
        let samples = [
            Vector3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2),
            Vector3::new(0.4, -0.3, 0.9),
            Vector3::new(-1.7, 0.2, 0.6),
            Vector3::new(1e-8, -2e-8, 3e-9),
        ];
        for w in samples {
            let oracle = series_exp(&hat(&w), 30);
            assert_relative_eq!(exp(&w), oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_inverts_exp_up_to_branch() {
        let samples = [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(0.1, 0.2, -0.3),
            Vector3::new(2.0, -1.5, 1.0),
            Vector3::new(0.0, 0.0, std::f64::consts::PI - 1e-3),
        ];
        for w in samples {
            let back = log(&exp(&w)).unwrap();
            assert_relative_eq!(back, w, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn log_rejects_angles_at_pi() {
        let w = Vector3::new(0.0, std::f64::consts::PI - 1e-8, 0.0);
        assert!(matches!(log(&exp(&w)), Err(LieError::LogBranch { .. })));
    }

    #[test]
    fn left_jacobian_matches_series() {
        // J(w) = sum_{n>=0} (w^)^n / (n+1)!
        let w = Vector3::new(0.6, -0.2, 0.35);
        let w_hat = hat(&w);
        let mut oracle = Matrix3::identity();
        let mut power = Matrix3::identity();
        let mut factorial = 1.0;
        for n in 1..30 {
            power *= w_hat;
            factorial *= (n + 1) as f64;
            oracle += power / factorial;
        }
        assert_relative_eq!(left_jacobian(&w), oracle, epsilon = 1e-12);
    }
}
