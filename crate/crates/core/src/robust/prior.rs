use crate::constants::MIN_NORM;
use crate::geometry::{candidate_transforms, EssentialMatrix, Pose6DoF, Vec3};
use crate::{Error, Result};

/// Fixed 3D lattice used to compare two rigid transforms by their effect on
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorGrid {
    points: Vec<Vec3>,
}

impl PriorGrid {
    /// `per_axis³` points on `[−extent, extent]³`, evenly spaced per axis.
    pub fn new(extent: f64, per_axis: usize) -> Result<Self> {
        if !(extent > 0.0) || per_axis < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs positive extent and at least 2 points per axis, got {extent} and {per_axis}"
            )));
        }
        let step = 2.0 * extent / (per_axis - 1) as f64;
        let coord = |i: usize| -extent + step * i as f64;
        let mut points = Vec::with_capacity(per_axis.pow(3));
        for i in 0..per_axis {
            for j in 0..per_axis {
                for k in 0..per_axis {
                    points.push(Vec3::new(coord(i), coord(j), coord(k)));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }
}

/// Mean squared displacement `(1/L) Σ ‖(R_a g + t_a) − (R_b g + t_b)‖²`.
pub fn transform_discrepancy(ta: &Pose6DoF, tb: &Pose6DoF, grid: &PriorGrid) -> f64 {
    let dr = ta.rotation.matrix() - tb.rotation.matrix();
    let dt = ta.translation - tb.translation;
    let sum: f64 = grid.points.iter().map(|g| (dr * g + dt).norm_squared()).sum();
    sum / grid.points.len() as f64
}

/// Log-prior of hypothesis `e` under pose `t1`: the best (largest) negative
/// discrepancy over the four decompositions of `e`, each scaled to `‖t₁‖`.
/// The normalization constant is omitted.
pub fn beta_prior(e: &EssentialMatrix, t1: &Pose6DoF, grid: &PriorGrid) -> Result<f64> {
    let scale = t1.translation.norm();
    if !(scale > MIN_NORM) {
        return Err(Error::DegenerateInput("prior translation is zero"));
    }
    Ok(candidate_transforms(e, scale)?
        .iter()
        .map(|c| -transform_discrepancy(c, t1, grid))
        .fold(f64::NEG_INFINITY, f64::max))
}
