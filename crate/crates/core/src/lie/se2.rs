//! SE(2) as a 3-parameter group with twist coordinates `(omega, v_x, v_y)`.
//!
//! The rotation-first twist ordering is a fixed convention of this crate (see
//! the index constants); it mirrors the SE(3) basis ordering.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use super::{LieError, MatrixLieGroup, LOG_BRANCH_MARGIN, SMALL_ANGLE};
use crate::scalar::{real, Scalar};

/// Planar rigid transform stored as a 3x3 homogeneous matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Se2<T: Scalar> {
    matrix: Matrix3<T>,
}

impl<T: Scalar> Se2<T> {
    /// Twist index of the angular rate.
    pub const ANGULAR: usize = 0;
    /// Twist index of the longitudinal (body x) velocity.
    pub const LINEAR_X: usize = 1;
    /// Twist index of the lateral (body y) velocity.
    pub const LINEAR_Y: usize = 2;

    pub fn from_parts(rotation: Matrix2<T>, translation: Vector2<T>) -> Self {
        let mut m = Matrix3::identity();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&rotation);
        m.fixed_view_mut::<2, 1>(0, 2).copy_from(&translation);
        Se2 { matrix: m }
    }

    /// Build from heading angle and position.
    pub fn from_pose(x: T, y: T, heading: T) -> Self {
        let (s, c) = (heading.sin(), heading.cos());
        Se2::from_parts(Matrix2::new(c, -s, s, c), Vector2::new(x, y))
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.matrix
    }

    pub fn heading(&self) -> T {
        self.matrix[(1, 0)].atan2(self.matrix[(0, 0)])
    }

    /// Twist coordinates to algebra matrix.
    #[rustfmt::skip]
    pub fn hat(xi: &Vector3<T>) -> Matrix3<T> {
        let z = T::zero();
        let (w, vx, vy) = (xi[0], xi[1], xi[2]);
        Matrix3::new(
            z, -w, vx,
            w,  z, vy,
            z,  z, z,
        )
    }

    pub fn vee(m: &Matrix3<T>) -> Vector3<T> {
        Vector3::new(m[(1, 0)], m[(0, 2)], m[(1, 2)])
    }

    /// Frobenius defect of the group-element invariants, for validation.
    pub fn invariant_defect(&self) -> T {
        let r = self.rotation();
        let ortho = (r.transpose() * r - Matrix2::identity()).norm();
        let det = (r.determinant() - T::one()).abs();
        ortho + det
    }

    fn translation_coefficients(omega: T) -> Matrix2<T> {
        // V(w) such that p = V(w) v; V = [[sin w / w, -(1-cos w)/w], [(1-cos w)/w, sin w / w]]
        let a = super::so3::sinc(omega.abs());
        let b = if omega.abs() < real(SMALL_ANGLE) {
            let w2 = omega * omega;
            let (c0, c1, c2): (T, T, T) = (real(0.5), real(24.0), real(720.0));
            omega * (c0 - w2 / c1 + w2 * w2 / c2)
        } else {
            (T::one() - omega.cos()) / omega
        };
        Matrix2::new(a, -b, b, a)
    }
}

impl<T: Scalar> MatrixLieGroup<T, 3, 2> for Se2<T> {
    fn identity() -> Self {
        Se2 {
            matrix: Matrix3::identity(),
        }
    }

    fn exp(xi: &Vector3<T>) -> Self {
        let omega = xi[0];
        let v = Vector2::new(xi[1], xi[2]);
        let (s, c) = (omega.sin(), omega.cos());
        let rotation = Matrix2::new(c, -s, s, c);
        Se2::from_parts(rotation, Se2::translation_coefficients(omega) * v)
    }

    fn log(&self) -> Result<Vector3<T>, LieError> {
        let omega = self.heading();
        if omega.abs() >= real(std::f64::consts::PI - LOG_BRANCH_MARGIN) {
            return Err(LieError::LogBranch {
                angle: omega.to_f64_lossy(),
            });
        }
        let coeff = Se2::translation_coefficients(omega);
        // V is a scaled rotation, so the inverse is closed-form.
        let det = coeff[(0, 0)] * coeff[(0, 0)] + coeff[(1, 0)] * coeff[(1, 0)];
        let inv = Matrix2::new(coeff[(0, 0)], coeff[(1, 0)], -coeff[(1, 0)], coeff[(0, 0)]) / det;
        let v = inv * self.translation();
        Ok(Vector3::new(omega, v.x, v.y))
    }

    #[rustfmt::skip]
    fn adjoint(&self) -> Matrix3<T> {
        let r = self.rotation();
        let p = self.translation();
        let (z, one) = (T::zero(), T::one());
        Matrix3::new(
            one,  z,         z,
            p.y,  r[(0, 0)], r[(0, 1)],
           -p.x,  r[(1, 0)], r[(1, 1)],
        )
    }

    fn compose(&self, rhs: &Self) -> Self {
        let mut m = self.matrix * rhs.matrix;
        // The last row is (0, 0, 1) exactly under matrix products; re-pin to
        // keep the invariant testable bit-for-bit.
        m[(2, 0)] = T::zero();
        m[(2, 1)] = T::zero();
        m[(2, 2)] = T::one();
        Se2 { matrix: m }
    }

    fn inverse(&self) -> Self {
        let r_t = self.rotation().transpose();
        Se2::from_parts(r_t, -(r_t * self.translation()))
    }

    fn rotation(&self) -> Matrix2<T> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }

    fn translation(&self) -> Vector2<T> {
        self.matrix.fixed_view::<2, 1>(0, 2).into_owned()
    }

    fn bracket(a: &Vector3<T>, b: &Vector3<T>) -> Vector3<T> {
        let (ha, hb) = (Se2::hat(a), Se2::hat(b));
        Se2::vee(&(ha * hb - hb * ha))
    }

    fn renormalize(&mut self) {
        let svd = self.rotation().svd(true, true);
        let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
        let mut r = u * v_t;
        if r.determinant() < T::zero() {
            // Flip the smallest singular direction to stay in SO(2).
            let mut u = u;
            u.column_mut(1).neg_mut();
            r = u * v_t;
        }
        self.matrix.fixed_view_mut::<2, 2>(0, 0).copy_from(&r);
    }
}
