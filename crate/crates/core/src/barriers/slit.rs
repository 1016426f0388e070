//! Slit barrier on SE(3): a Gaussian gate blends a constant far-field value
//! with a softmin of two orientation-penalized plane distances, so a disk
//! must align with the slit to keep the barrier nonnegative while passing.

use nalgebra::{Matrix3, Vector3};

use super::{Barrier, BarrierError};
use crate::lie::{MatrixLieGroup, Se3};
use crate::scalar::{real, Scalar};

/// Parameters of the slit barrier. All geometry is configurable; the
/// defaults put a slit of half-gap 0.3 at x = 2.25 across the y axis for a
/// disk of radius 0.5 travelling along x.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitBarrierParams<T: Scalar> {
    /// Centers of the two wall pieces bounding the slit.
    pub wall_centers: [Vector3<T>; 2],
    /// Unit normal of the slit in the world frame (the direction across
    /// the gap).
    pub slit_normal: Vector3<T>,
    /// Unit normal of the disk in the body frame.
    pub disk_normal: Vector3<T>,
    /// Disk radius.
    pub disk_radius: T,
    /// Safety margin subtracted inside each plane term.
    pub margin: T,
    /// Far-field barrier value away from the gate.
    pub far_value: T,
    /// Softmin sharpness.
    pub sharpness: T,
    /// Covariance of the Gaussian gate (positive definite).
    pub gate_cov: Matrix3<T>,
    /// Offset added to the wall midpoint to place the gate center.
    pub gate_offset: Vector3<T>,
}

impl<T: Scalar> Default for SlitBarrierParams<T> {
    fn default() -> Self {
        SlitBarrierParams {
            wall_centers: [
                Vector3::new(real(2.25), real(-0.3), T::zero()),
                Vector3::new(real(2.25), real(0.3), T::zero()),
            ],
            slit_normal: Vector3::new(T::zero(), T::one(), T::zero()),
            disk_normal: Vector3::new(T::one(), T::zero(), T::zero()),
            disk_radius: real(0.5),
            margin: real(0.05),
            far_value: real(2.0),
            sharpness: real(10.0),
            gate_cov: Matrix3::identity(),
            gate_offset: Vector3::zeros(),
        }
    }
}

/// Validated slit barrier with precomputed gate quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitBarrier<T: Scalar> {
    params: SlitBarrierParams<T>,
    gate_center: Vector3<T>,
    gate_cov_inv: Matrix3<T>,
}

impl<T: Scalar> SlitBarrier<T> {
    /// Validates positivity and unit-norm requirements and fixes the wall
    /// ordering so that wall 1 sits at the lower slit-normal projection.
    pub fn new(mut params: SlitBarrierParams<T>) -> Result<Self, BarrierError> {
        let unit_tol: T = real(1e-6);
        for (name, v) in [
            ("slit_normal", &params.slit_normal),
            ("disk_normal", &params.disk_normal),
        ] {
            if (v.norm() - T::one()).abs() > unit_tol {
                return Err(BarrierError::Invalid(format!(
                    "{name} must be unit length, got norm {}",
                    v.norm()
                )));
            }
        }
        params.slit_normal /= params.slit_normal.norm();
        params.disk_normal /= params.disk_normal.norm();
        for (name, v) in [
            ("disk_radius", params.disk_radius),
            ("margin", params.margin),
            ("far_value", params.far_value),
            ("sharpness", params.sharpness),
        ] {
            if v <= T::zero() {
                return Err(BarrierError::Invalid(format!("{name} must be positive")));
            }
        }
        let gate_cov_inv = params
            .gate_cov
            .cholesky()
            .ok_or_else(|| {
                BarrierError::Invalid("gate covariance must be positive definite".into())
            })?
            .inverse();
        if params.slit_normal.dot(&params.wall_centers[0])
            > params.slit_normal.dot(&params.wall_centers[1])
        {
            params.wall_centers.swap(0, 1);
        }
        let half: T = real(0.5);
        let gate_center =
            (params.wall_centers[0] + params.wall_centers[1]) * half + params.gate_offset;
        Ok(SlitBarrier {
            params,
            gate_center,
            gate_cov_inv,
        })
    }

    pub fn params(&self) -> &SlitBarrierParams<T> {
        &self.params
    }

    pub fn gate_center(&self) -> &Vector3<T> {
        &self.gate_center
    }

    /// Half-width of the disk projected onto the slit normal:
    /// `r_d * sqrt(max(0, 1 - (n_s . R n_r)^2))`. The radicand is clamped so
    /// roundoff near perfect alignment cannot produce a NaN.
    pub fn projected_halfwidth(&self, g: &Se3<T>) -> T {
        let aligned = self.params.slit_normal.dot(&(g.rotation() * self.params.disk_normal));
        let radicand = (T::one() - aligned * aligned).max(T::zero());
        self.params.disk_radius * radicand.sqrt()
    }

    fn plane_terms(&self, g: &Se3<T>) -> (T, T) {
        let halfwidth = self.projected_halfwidth(g);
        let p = g.translation();
        let phi = |center: &Vector3<T>| {
            self.params.slit_normal.dot(&(p - center)) - halfwidth - self.params.margin
        };
        (
            phi(&self.params.wall_centers[0]),
            phi(&self.params.wall_centers[1]),
        )
    }

    /// Softmin of the two plane terms:
    /// `-(1/k) log(exp(-k phi_1) + exp(k phi_2))`, stabilized by shifting
    /// out the dominant exponent.
    pub fn softmin(&self, g: &Se3<T>) -> T {
        let (phi_1, phi_2) = self.plane_terms(g);
        let k = self.params.sharpness;
        let a = -k * phi_1;
        let b = k * phi_2;
        let shift = a.max(b);
        -(shift + ((a - shift).exp() + (b - shift).exp()).ln()) / k
    }

    /// Gaussian gate weight `exp(-1/2 ||p - c||^2_{gate_cov^-1})`.
    pub fn gate(&self, p: &Vector3<T>) -> T {
        let d = p - self.gate_center;
        (-(d.transpose() * self.gate_cov_inv * d)[0] * real::<T>(0.5)).exp()
    }
}

impl<T: Scalar> Barrier<T, Se3<T>> for SlitBarrier<T> {
    fn value(&self, g: &Se3<T>) -> T {
        let chi = self.gate(&g.translation());
        self.params.far_value * (T::one() - chi) + chi * self.softmin(g)
    }
}
