//! SE(3) with twist coordinates `(omega_1, omega_2, omega_3, v_1, v_2, v_3)`.

use nalgebra::{Matrix3, Matrix4, Matrix6, Vector3, Vector6};

use super::{so3, LieError, MatrixLieGroup};
use crate::scalar::Scalar;

/// Rigid transform stored as a 4x4 homogeneous matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Se3<T: Scalar> {
    matrix: Matrix4<T>,
}

impl<T: Scalar> Se3<T> {
    /// Twist indices of the angular block.
    pub const ANGULAR: std::ops::Range<usize> = 0..3;
    /// Twist indices of the linear block.
    pub const LINEAR: std::ops::Range<usize> = 3..6;

    pub fn from_parts(rotation: Matrix3<T>, translation: Vector3<T>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&translation);
        Se3 { matrix: m }
    }

    pub fn from_translation(translation: Vector3<T>) -> Self {
        Se3::from_parts(Matrix3::identity(), translation)
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.matrix
    }

    pub fn twist_from_parts(omega: Vector3<T>, v: Vector3<T>) -> Vector6<T> {
        Vector6::new(omega.x, omega.y, omega.z, v.x, v.y, v.z)
    }

    pub fn hat(xi: &Vector6<T>) -> Matrix4<T> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(&so3::hat(&xi.fixed_rows::<3>(0).into_owned()));
        m.fixed_view_mut::<3, 1>(0, 3)
            .copy_from(&xi.fixed_rows::<3>(3).into_owned());
        m
    }

    pub fn vee(m: &Matrix4<T>) -> Vector6<T> {
        Vector6::new(
            m[(2, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(0, 3)],
            m[(1, 3)],
            m[(2, 3)],
        )
    }

    /// Frobenius defect of the group-element invariants, for validation.
    pub fn invariant_defect(&self) -> T {
        let r = self.rotation();
        let ortho = (r.transpose() * r - Matrix3::identity()).norm();
        let det = (r.determinant() - T::one()).abs();
        ortho + det
    }
}

impl<T: Scalar> MatrixLieGroup<T, 6, 3> for Se3<T> {
    fn identity() -> Self {
        Se3 {
            matrix: Matrix4::identity(),
        }
    }

    fn exp(xi: &Vector6<T>) -> Self {
        let omega = xi.fixed_rows::<3>(0).into_owned();
        let v = xi.fixed_rows::<3>(3).into_owned();
        Se3::from_parts(so3::exp(&omega), so3::left_jacobian(&omega) * v)
    }

    fn log(&self) -> Result<Vector6<T>, LieError> {
        let omega = so3::log(&self.rotation())?;
        let v = so3::left_jacobian(&omega)
            .lu()
            .solve(&self.translation())
            .expect("left Jacobian is invertible on the principal branch");
        Ok(Se3::twist_from_parts(omega, v))
    }

    fn adjoint(&self) -> Matrix6<T> {
        let r = self.rotation();
        let p_hat_r = so3::hat(&self.translation()) * r;
        let mut ad = Matrix6::zeros();
        ad.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
        ad.fixed_view_mut::<3, 3>(3, 0).copy_from(&p_hat_r);
        ad.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
        ad
    }

    fn compose(&self, rhs: &Self) -> Self {
        let mut m = self.matrix * rhs.matrix;
        m[(3, 0)] = T::zero();
        m[(3, 1)] = T::zero();
        m[(3, 2)] = T::zero();
        m[(3, 3)] = T::one();
        Se3 { matrix: m }
    }

    fn inverse(&self) -> Self {
        let r_t = self.rotation().transpose();
        Se3::from_parts(r_t, -(r_t * self.translation()))
    }

    fn rotation(&self) -> Matrix3<T> {
        self.matrix.fixed_view::<3, 3>(0, 0).into_owned()
    }

    fn translation(&self) -> Vector3<T> {
        self.matrix.fixed_view::<3, 1>(0, 3).into_owned()
    }

    fn bracket(a: &Vector6<T>, b: &Vector6<T>) -> Vector6<T> {
        let (ha, hb) = (Se3::hat(a), Se3::hat(b));
        Se3::vee(&(ha * hb - hb * ha))
    }

    fn renormalize(&mut self) {
        let svd = self.rotation().svd(true, true);
        let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
        let mut r = u * v_t;
        if r.determinant() < T::zero() {
            let mut u = u;
            u.column_mut(2).neg_mut();
            r = u * v_t;
        }
        self.matrix.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
    }
}
