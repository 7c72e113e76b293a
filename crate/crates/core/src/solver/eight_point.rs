use nalgebra::{DMatrix, Matrix3};

use crate::constants::EIGHT_POINT_MIN;
use crate::geometry::{Correspondence, EssentialMatrix, Mat3, Vec2};
use crate::{Error, Result};

/// Similarity taking the points to zero mean and mean distance √2.
fn hartley_transform(points: impl Iterator<Item = Vec2> + Clone) -> Result<Mat3> {
    let n = points.clone().count() as f64;
    let centroid = points.clone().fold(Vec2::zeros(), |acc, p| acc + p) / n;
    let mean_dist = points.map(|p| (p - centroid).norm()).sum::<f64>() / n;
    if !(mean_dist > 0.0) {
        return Err(Error::DegenerateInput("all points coincide"));
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    Ok(Matrix3::new(s, 0.0, -s * centroid.x, 0.0, s, -s * centroid.y, 0.0, 0.0, 1.0))
}

pub(crate) struct LinearFit {
    /// Least-squares solution in the Hartley-normalized frame, unit norm.
    pub normalized: Mat3,
    #[cfg_attr(not(test), allow(dead_code))]
    pub design: DMatrix<f64>,
    pub t1: Mat3,
    pub t2: Mat3,
}

pub(crate) fn linear_fit(m: &[Correspondence]) -> Result<LinearFit> {
    if m.len() < EIGHT_POINT_MIN {
        return Err(Error::TooFewCorrespondences { needed: EIGHT_POINT_MIN, got: m.len() });
    }
    let t1 = hartley_transform(m.iter().map(|c| c.p))?;
    let t2 = hartley_transform(m.iter().map(|c| c.q))?;
    // pad to at least 9 rows so the full right singular basis is available
    let rows = m.len().max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (r, c) in m.iter().enumerate() {
        let p = t1 * c.p.push(1.0);
        let q = t2 * c.q.push(1.0);
        for i in 0..3 {
            for j in 0..3 {
                a[(r, 3 * i + j)] = q[i] * p[j];
            }
        }
    }
    let svd = a.clone().svd(false, true);
    let s = &svd.singular_values;
    if !(s[7] > 1e-10 * s[0]) {
        return Err(Error::DegenerateInput("eight-point design matrix is rank deficient"));
    }
    let v_t = svd.v_t.ok_or(Error::DegenerateInput("SVD failed"))?;
    let f = v_t.row(8);
    Ok(LinearFit { normalized: Mat3::from_fn(|i, j| f[3 * i + j]), design: a, t1, t2 })
}

/// Hartley-normalized linear estimate over `≥ 8` correspondences, projected
/// onto the essential manifold.
pub fn eight_point_normalized(m: &[Correspondence]) -> Result<EssentialMatrix> {
    let fit = linear_fit(m)?;
    EssentialMatrix::project(fit.t2.transpose() * fit.normalized * fit.t1)
}
