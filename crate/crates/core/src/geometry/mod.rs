//! Two-view geometry.
//!
//! Pose convention: a point `x₁` in the camera-1 frame maps to
//! `x₂ = R x₁ + t` in the camera-2 frame, and `E = [t]× R` so that
//! `q̂ᵀ E p̂ = 0` for corresponding normalized homogeneous points.

mod camera;
mod essential;
mod metrics;
mod pose;
mod rotation;
mod triangulate;

pub use camera::{CameraIntrinsics, Correspondence, CorrespondenceSet};
pub use essential::{
    candidate_transforms, decompose_essential, essential_distance, essential_from_pose,
    epipolar_residual, sampson_error, skew, EssentialMatrix,
};
pub use metrics::{geodesic_rotation_error, translation_errors};
pub use pose::Pose6DoF;
pub use rotation::{gram_schmidt_to_rotation, rotation_to_6d, Rotation6D, RotationMatrix};
pub use triangulate::{triangulate, Triangulated};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

pub(crate) fn homogeneous(v: &Vec2) -> Vec3 {
    Vec3::new(v.x, v.y, 1.0)
}
