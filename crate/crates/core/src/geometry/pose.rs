use super::{RotationMatrix, Vec3};
use crate::constants::MIN_NORM;
use crate::{Error, Result};

/// Rigid transform from the camera-1 frame to the camera-2 frame:
/// `x₂ = R x₁ + t`, translation in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose6DoF {
    pub rotation: RotationMatrix,
    pub translation: Vec3,
}

impl Pose6DoF {
    pub fn new(rotation: RotationMatrix, translation: Vec3) -> Result<Self> {
        if !translation.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateInput("translation is not finite"));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: RotationMatrix::identity(), translation: Vec3::zeros() }
    }

    pub fn transform_point(&self, x: &Vec3) -> Vec3 {
        self.rotation.rotate(x) + self.translation
    }

    /// Camera-2 center expressed in the camera-1 frame, `−Rᵀt`.
    pub fn camera_center(&self) -> Vec3 {
        -self.rotation.transpose().rotate(&self.translation)
    }

    /// Same rotation, translation rescaled to unit norm.
    pub fn unit(&self) -> Result<Self> {
        self.with_scale(1.0)
    }

    /// Same rotation, translation rescaled to norm `scale`.
    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        let n = self.translation.norm();
        if !(n > MIN_NORM) {
            return Err(Error::DegenerateInput("translation norm is zero"));
        }
        Ok(Self { rotation: self.rotation, translation: self.translation * (scale / n) })
    }
}
