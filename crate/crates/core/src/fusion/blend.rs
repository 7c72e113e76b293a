use serde::{Deserialize, Serialize};

use crate::constants::{MIN_NORM, UNIT_NORM_TOL};
use crate::geometry::{gram_schmidt_to_rotation, rotation_to_6d, Pose6DoF};
use crate::{Error, Result};

/// Blend weights; 1 selects the regressed pose, 0 the solver pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionWeights {
    pub w_r: f64,
    pub w_t: f64,
}

impl FusionWeights {
    pub fn new(w_r: f64, w_t: f64) -> Result<Self> {
        let w = Self { w_r, w_t };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("w_r", self.w_r), ("w_t", self.w_t)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

/// Blends the regressed pose `t_t` with a unit-translation solver pose.
///
/// Rotation: Gram–Schmidt of `w_r·6d(R_t) + (1 − w_r)·6d(R_s)`, with the
/// endpoints returned exactly. Translation: `w_t·t_t + (1 − w_t)·‖t_t‖·t_s`.
pub fn fuse_poses(t_t: &Pose6DoF, solver_unit: &Pose6DoF, w: &FusionWeights) -> Result<Pose6DoF> {
    w.validate()?;
    if (solver_unit.translation.norm() - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::DegenerateInput("solver translation must have unit norm"));
    }
    let scale = t_t.translation.norm();
    if !(scale > MIN_NORM) {
        return Err(Error::DegenerateInput("regressed translation norm is zero"));
    }
    let rotation = if w.w_r == 1.0 {
        t_t.rotation
    } else if w.w_r == 0.0 {
        solver_unit.rotation
    } else {
        let blended = rotation_to_6d(&t_t.rotation).blend(&rotation_to_6d(&solver_unit.rotation), w.w_r);
        gram_schmidt_to_rotation(&blended)?
    };
    let translation = t_t.translation * w.w_t + solver_unit.translation * ((1.0 - w.w_t) * scale);
    Pose6DoF::new(rotation, translation)
}

/// Logistic map from solver inlier count to fusion weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogisticParams {
    pub midpoint: f64,
    pub steepness: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self { midpoint: 20.0, steepness: 0.5 }
    }
}

/// `w = 1/(1 + exp(steepness·(count − midpoint)))` for both rotation and
/// translation: many inliers shift trust to the solver.
pub fn inlier_logistic_weight(inlier_count: usize, params: &LogisticParams) -> FusionWeights {
    let w = 1.0 / (1.0 + (params.steepness * (inlier_count as f64 - params.midpoint)).exp());
    FusionWeights { w_r: w, w_t: w }
}
