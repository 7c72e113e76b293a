use serde::{Deserialize, Serialize};

use crate::geometry::{geodesic_rotation_error, Pose6DoF};
use crate::{Error, Result};

pub const ROTATION_THRESHOLD_DEG: f64 = 30.0;
pub const TRANSLATION_THRESHOLD_M: f64 = 1.0;

/// Aggregate pose errors over a set of pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub median_rot_deg: f64,
    pub mean_rot_deg: f64,
    pub pct_rot_le_30: f64,
    pub median_trans_m: f64,
    pub mean_trans_m: f64,
    pub pct_trans_le_1m: f64,
    pub n_pairs: usize,
}

/// Lower-middle order statistic.
pub fn lower_median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

fn summarize(errors: &[f64], threshold: f64) -> (f64, f64, f64) {
    let n = errors.len() as f64;
    let within = errors.iter().filter(|&&e| e <= threshold).count() as f64;
    (lower_median(errors), errors.iter().sum::<f64>() / n, 100.0 * within / n)
}

impl MetricsReport {
    /// Report from per-pair rotation errors (degrees) and translation errors
    /// (meters).
    pub fn from_errors(rot_deg: &[f64], trans_m: &[f64]) -> Result<Self> {
        if rot_deg.is_empty() || rot_deg.len() != trans_m.len() {
            return Err(Error::InvalidConfig("metrics need equally many, and at least one, error pairs".into()));
        }
        let (median_rot_deg, mean_rot_deg, pct_rot_le_30) = summarize(rot_deg, ROTATION_THRESHOLD_DEG);
        let (median_trans_m, mean_trans_m, pct_trans_le_1m) = summarize(trans_m, TRANSLATION_THRESHOLD_M);
        Ok(Self {
            median_rot_deg,
            mean_rot_deg,
            pct_rot_le_30,
            median_trans_m,
            mean_trans_m,
            pct_trans_le_1m,
            n_pairs: rot_deg.len(),
        })
    }
}

/// Geodesic rotation error and Euclidean translation error of each
/// `(predicted, ground truth)` pair.
pub fn compute_metrics(pairs: &[(Pose6DoF, Pose6DoF)]) -> Result<MetricsReport> {
    let rot: Vec<f64> = pairs.iter().map(|(p, g)| geodesic_rotation_error(&p.rotation, &g.rotation)).collect();
    let trans: Vec<f64> = pairs.iter().map(|(p, g)| (p.translation - g.translation).norm()).collect();
    MetricsReport::from_errors(&rot, &trans)
}
