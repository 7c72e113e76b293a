use nalgebra::{Rotation3, Unit};

use super::{Mat3, Vec3};
use crate::constants::{MIN_NORM, PARALLEL_TOL, ROTATION_TOL};
use crate::{Error, Result};

/// A 3×3 special-orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Mat3);

impl RotationMatrix {
    /// Validates orthonormality and `det = +1` to [`ROTATION_TOL`].
    pub fn new(m: Mat3) -> Result<Self> {
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateInput("rotation has non-finite entries"));
        }
        let gram = m.transpose() * m;
        let off = (gram - Mat3::identity()).abs().max();
        if off > ROTATION_TOL || (m.determinant() - 1.0).abs() > ROTATION_TOL {
            return Err(Error::DegenerateInput("matrix is not a rotation"));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Mat3) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    /// Rotation by `angle` radians about `axis` (need not be normalized).
    pub fn from_axis_angle(axis: &Vec3, angle: f64) -> Result<Self> {
        if axis.norm() < MIN_NORM {
            return Err(Error::DegenerateInput("rotation axis is zero"));
        }
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
        Ok(Self(*r.matrix()))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn compose(&self, other: &RotationMatrix) -> Self {
        Self(self.0 * other.0)
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Rotation angle in radians, in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let m = &self.0;
        let axis = Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
        (0.5 * axis.norm()).atan2(0.5 * (m.trace() - 1.0))
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        std::array::from_fn(|i| m[(i / 3, i % 3)])
    }

    pub fn from_row_major(v: &[f64; 9]) -> Result<Self> {
        Self::new(Mat3::from_row_slice(v))
    }
}

/// Continuous 6D rotation representation: the first two columns of a
/// rotation matrix, or any non-degenerate pair of 3-vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation6D {
    pub a1: Vec3,
    pub a2: Vec3,
}

impl Rotation6D {
    pub fn new(a1: Vec3, a2: Vec3) -> Result<Self> {
        let r = Self { a1, a2 };
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        let n1 = self.a1.norm();
        let n2 = self.a2.norm();
        if !(n1 > MIN_NORM) || !n2.is_finite() {
            return Err(Error::DegenerateInput("first 6D column is zero"));
        }
        if !(self.a1.cross(&self.a2).norm() > PARALLEL_TOL * n1 * n2) {
            return Err(Error::DegenerateInput("6D columns are parallel"));
        }
        Ok(())
    }

    /// Weighted sum `w·self + (1 − w)·other`, taken componentwise.
    pub fn blend(&self, other: &Rotation6D, w: f64) -> Rotation6D {
        Rotation6D {
            a1: self.a1 * w + other.a1 * (1.0 - w),
            a2: self.a2 * w + other.a2 * (1.0 - w),
        }
    }
}

/// Maps a 6D representation back to SO(3) by Gram–Schmidt.
///
/// Columns of the result are `b1 = a1/‖a1‖`, `b2 = normalize(a2 − (a2·b1) b1)`
/// and `b3 = b1 × b2`.
pub fn gram_schmidt_to_rotation(r6: &Rotation6D) -> Result<RotationMatrix> {
    r6.check()?;
    let b1 = r6.a1.normalize();
    let u2 = r6.a2 - b1 * r6.a2.dot(&b1);
    let n2 = u2.norm();
    if !(n2 > MIN_NORM) {
        return Err(Error::DegenerateInput("6D columns are parallel"));
    }
    let b2 = u2 / n2;
    let b3 = b1.cross(&b2);
    Ok(RotationMatrix(Mat3::from_columns(&[b1, b2, b3])))
}

pub fn rotation_to_6d(r: &RotationMatrix) -> Rotation6D {
    Rotation6D {
        a1: r.0.column(0).into_owned(),
        a2: r.0.column(1).into_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn rot_z90() -> RotationMatrix {
        RotationMatrix::from_axis_angle(&Vec3::z(), FRAC_PI_2).unwrap()
    }

    #[test]
    fn orthonormal_pair_maps_to_identity() {
        let r = gram_schmidt_to_rotation(&Rotation6D::new(Vec3::x(), Vec3::y()).unwrap()).unwrap();
        assert_eq!(*r.matrix(), Mat3::identity());
    }

    #[test]
    fn scaled_pair_maps_to_identity() {
        let r6 = Rotation6D::new(Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 3.0, 0.0)).unwrap();
        let r = gram_schmidt_to_rotation(&r6).unwrap();
        assert_eq!(*r.matrix(), Mat3::identity());
    }

    #[test]
    fn degenerate_6d_inputs_are_rejected() {
        assert!(Rotation6D::new(Vec3::zeros(), Vec3::y()).is_err());
        assert!(Rotation6D::new(Vec3::x(), Vec3::new(-2.0, 0.0, 0.0)).is_err());
        let bad = Rotation6D { a1: Vec3::x(), a2: Vec3::x() * 5.0 };
        assert!(matches!(gram_schmidt_to_rotation(&bad), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn identity_and_z90_to_6d() {
        let i6 = rotation_to_6d(&RotationMatrix::identity());
        assert_eq!(i6.a1, Vec3::x());
        assert_eq!(i6.a2, Vec3::y());
        let z6 = rotation_to_6d(&rot_z90());
        assert!((z6.a1 - Vec3::y()).norm() < 1e-15);
        assert!((z6.a2 + Vec3::x()).norm() < 1e-15);
    }

    #[test]
    fn rotation_constructor_rejects_reflections() {
        let refl = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(RotationMatrix::new(refl).is_err());
        assert!(RotationMatrix::new(Mat3::identity() * 1.01).is_err());
    }

    #[test]
    fn angle_matches_construction() {
        let r = RotationMatrix::from_axis_angle(&Vec3::new(1.0, 2.0, -0.5), 1.234).unwrap();
        assert!((r.angle() - 1.234).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn gram_schmidt_output_is_a_rotation(
            a in prop::array::uniform3(-10.0f64..10.0),
            b in prop::array::uniform3(-10.0f64..10.0),
        ) {
            let a1 = Vec3::from(a);
            let a2 = Vec3::from(b);
            prop_assume!(a1.norm() > 1e-3 && a1.cross(&a2).norm() > 1e-3 * a1.norm() * a2.norm());
            let r = gram_schmidt_to_rotation(&Rotation6D::new(a1, a2).unwrap()).unwrap();
            prop_assert!(RotationMatrix::new(*r.matrix()).is_ok());
        }
    }
}
