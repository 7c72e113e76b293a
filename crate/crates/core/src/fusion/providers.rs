use std::path::PathBuf;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{inlier_logistic_weight, FusionWeights, LogisticParams};
use crate::constants::MIN_NORM;
use crate::geometry::{Pose6DoF, RotationMatrix, Vec3};
use crate::{rng, Error, Result};

/// On-disk pose: row-major rotation and translation in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseRecord {
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

impl From<&Pose6DoF> for PoseRecord {
    fn from(p: &Pose6DoF) -> Self {
        Self { rotation: p.rotation.to_row_major(), translation: p.translation.into() }
    }
}

impl TryFrom<&PoseRecord> for Pose6DoF {
    type Error = Error;

    fn try_from(r: &PoseRecord) -> Result<Self> {
        Pose6DoF::new(RotationMatrix::from_row_major(&r.rotation)?, Vec3::from(r.translation))
    }
}

pub type WeightsRecord = FusionWeights;

/// A file holds one record, or one record per input pair.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn read_record<T: for<'de> Deserialize<'de> + Clone>(path: &PathBuf, pair_index: usize) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str::<OneOrMany<T>>(&text)? {
        OneOrMany::One(r) => Ok(r),
        OneOrMany::Many(v) => v
            .get(pair_index)
            .cloned()
            .ok_or_else(|| Error::InvalidConfig(format!("{} has no record for pair {pair_index}", path.display()))),
    }
}

/// Per-pair information available to providers.
#[derive(Debug, Clone, Copy, Default)]
pub struct PriorContext {
    /// Required by [`PriorProvider::SyntheticOracle`].
    pub ground_truth: Option<Pose6DoF>,
    pub pair_index: usize,
}

/// Source of the regressed pose `T_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorProvider {
    /// Ground truth with random rotation, direction and scale errors.
    SyntheticOracle {
        rot_noise_deg: f64,
        trans_dir_noise_deg: f64,
        scale_noise_rel: f64,
        seed: u64,
    },
    FixedPose(Pose6DoF),
    FromFile(PathBuf),
}

impl PriorProvider {
    pub fn oracle(rot_noise_deg: f64, trans_dir_noise_deg: f64, scale_noise_rel: f64, seed: u64) -> Result<Self> {
        for (name, v) in [
            ("rotation noise", rot_noise_deg),
            ("translation direction noise", trans_dir_noise_deg),
            ("scale noise", scale_noise_rel),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be nonnegative, got {v}")));
            }
        }
        Ok(Self::SyntheticOracle { rot_noise_deg, trans_dir_noise_deg, scale_noise_rel, seed })
    }

    pub fn prior(&self, ctx: &PriorContext) -> Result<Pose6DoF> {
        let pose = match self {
            Self::SyntheticOracle { rot_noise_deg, trans_dir_noise_deg, scale_noise_rel, seed } => {
                let gt = ctx.ground_truth.ok_or(Error::MissingInput("ground truth pose for the oracle prior"))?;
                let mut stream = rng::stream(*seed, &[ctx.pair_index as u64]);
                perturb_pose(&gt, *rot_noise_deg, *trans_dir_noise_deg, *scale_noise_rel, &mut stream)?
            }
            Self::FixedPose(p) => *p,
            Self::FromFile(path) => Pose6DoF::try_from(&read_record::<PoseRecord>(path, ctx.pair_index)?)?,
        };
        if !(pose.translation.norm() > MIN_NORM) {
            return Err(Error::DegenerateInput("prior translation norm is zero"));
        }
        Ok(pose)
    }
}

fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-9 {
            return v / n;
        }
    }
}

/// Oracle error model. Always consumes the same number of draws.
fn perturb_pose(gt: &Pose6DoF, rot_deg: f64, dir_deg: f64, scale_rel: f64, rng: &mut impl Rng) -> Result<Pose6DoF> {
    let axis = random_unit(rng);
    let angle = (rng.sample::<f64, _>(StandardNormal) * rot_deg).abs().to_radians();
    let rotation = RotationMatrix::from_axis_angle(&axis, angle)?.compose(&gt.rotation);

    let norm = gt.translation.norm();
    if !(norm > MIN_NORM) {
        return Err(Error::DegenerateInput("ground-truth translation norm is zero"));
    }
    let dir = gt.translation / norm;
    let tilt_axis = loop {
        let c = dir.cross(&random_unit(rng));
        if c.norm() > 1e-6 {
            break c;
        }
    };
    let tilt = (rng.sample::<f64, _>(StandardNormal) * dir_deg).abs().to_radians();
    let dir = RotationMatrix::from_axis_angle(&tilt_axis, tilt)?.rotate(&dir);
    let scale = norm * (rng.sample::<f64, _>(StandardNormal) * scale_rel).exp();
    Pose6DoF::new(rotation, dir * scale)
}

/// Source of the fusion weights.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightProvider {
    Fixed(FusionWeights),
    InlierLogistic(LogisticParams),
    FromFile(PathBuf),
}

impl WeightProvider {
    /// Weights for a pair whose first-round solver found `inlier_count` inliers.
    pub fn weights(&self, inlier_count: usize, pair_index: usize) -> Result<FusionWeights> {
        let w = match self {
            Self::Fixed(w) => *w,
            Self::InlierLogistic(p) => inlier_logistic_weight(inlier_count, p),
            Self::FromFile(path) => read_record::<WeightsRecord>(path, pair_index)?,
        };
        w.validate()?;
        Ok(w)
    }
}
