use nalgebra::{Matrix4, RowVector4};

use super::{homogeneous, Correspondence, Pose6DoF, Vec3};
use crate::constants::{MIN_NORM, PARALLEL_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangulated {
    /// Point in the camera-1 frame.
    pub point: Vec3,
    pub depth1: f64,
    pub depth2: f64,
}

/// Two-view linear (DLT) triangulation with cameras `[I | 0]` and `[R | t]`.
pub fn triangulate(c: &Correspondence, pose: &Pose6DoF) -> Result<Triangulated> {
    if !(pose.translation.norm() > MIN_NORM) {
        return Err(Error::DegenerateInput("zero baseline"));
    }
    let p = homogeneous(&c.p);
    let q = homogeneous(&c.q);
    let r = pose.rotation.matrix();
    let ray2 = r.tr_mul(&q);
    if !(p.cross(&ray2).norm() > PARALLEL_TOL * p.norm() * ray2.norm()) {
        return Err(Error::DegenerateInput("rays are parallel"));
    }

    let t = &pose.translation;
    let row2 = |i: usize| RowVector4::new(r[(i, 0)], r[(i, 1)], r[(i, 2)], t[i]);
    let (p1_0, p1_1, p1_2) = (RowVector4::new(1.0, 0.0, 0.0, 0.0), RowVector4::new(0.0, 1.0, 0.0, 0.0), RowVector4::new(0.0, 0.0, 1.0, 0.0));
    let a = Matrix4::from_rows(&[
        p1_2 * p.x - p1_0,
        p1_2 * p.y - p1_1,
        row2(2) * q.x - row2(0),
        row2(2) * q.y - row2(1),
    ]);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::DegenerateInput("SVD failed"))?;
    let h = v_t.row(3);
    if !(h[3].abs() > f64::EPSILON * h.norm()) {
        return Err(Error::DegenerateInput("point at infinity"));
    }
    let point = Vec3::new(h[0], h[1], h[2]) / h[3];
    let in2 = pose.transform_point(&point);
    Ok(Triangulated { point, depth1: point.z, depth2: in2.z })
}
