use super::{beta_prior, PriorGrid, RobustConfig};
use crate::geometry::{sampson_error, Correspondence, EssentialMatrix, Pose6DoF};
use crate::Result;

/// A hypothesis with its score breakdown:
/// `total_score = prior_term + inlier_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredHypothesis {
    pub essential: EssentialMatrix,
    pub inlier_count: usize,
    pub inlier_mask: Vec<bool>,
    /// `α·β(H | T₁)`; zero without a prior.
    pub prior_term: f64,
    pub total_score: f64,
}

fn is_inlier(c: &Correspondence, e: &EssentialMatrix, sigma: f64) -> bool {
    sampson_error(c, e).is_ok_and(|s| s < sigma)
}

/// Correspondences with squared Sampson error strictly below `sigma`.
pub fn count_inliers(e: &EssentialMatrix, m: &[Correspondence], sigma: f64) -> (usize, Vec<bool>) {
    let mask: Vec<bool> = m.iter().map(|c| is_inlier(c, e, sigma)).collect();
    (mask.iter().filter(|&&b| b).count(), mask)
}

pub(crate) fn inlier_count(e: &EssentialMatrix, m: &[Correspondence], sigma: f64) -> usize {
    m.iter().filter(|c| is_inlier(c, e, sigma)).count()
}

/// `α·β` for the hypothesis, or 0 when there is no prior or `α = 0`.
pub(crate) fn prior_term(e: &EssentialMatrix, prior: Option<&Pose6DoF>, alpha: f64, grid: &PriorGrid) -> Result<f64> {
    match prior {
        Some(t1) if alpha != 0.0 => Ok(alpha * beta_prior(e, t1, grid)?),
        _ => Ok(0.0),
    }
}

pub(crate) fn assemble(e: EssentialMatrix, m: &[Correspondence], prior_term: f64, sigma: f64) -> ScoredHypothesis {
    let (inlier_count, inlier_mask) = count_inliers(&e, m, sigma);
    ScoredHypothesis {
        essential: e,
        inlier_count,
        inlier_mask,
        prior_term,
        total_score: prior_term + inlier_count as f64,
    }
}

/// Scores `e` as `α·β(e | prior) + inliers`, or plain inlier count without a
/// prior.
pub fn score_hypothesis(
    e: &EssentialMatrix,
    m: &[Correspondence],
    prior: Option<&Pose6DoF>,
    cfg: &RobustConfig,
) -> Result<ScoredHypothesis> {
    let grid = PriorGrid::new(cfg.grid_extent, cfg.grid_per_axis)?;
    let term = prior_term(e, prior, cfg.alpha, &grid)?;
    Ok(assemble(*e, m, term, cfg.sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{essential_from_pose, RotationMatrix, Vec2, Vec3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scene(pose: &Pose6DoF, n: usize, rng: &mut impl Rng) -> Vec<Correspondence> {
        let mut out = Vec::new();
        while out.len() < n {
            let x = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(3.0..8.0));
            let x2 = pose.transform_point(&x);
            if x2.z > 0.5 {
                out.push(Correspondence::new(Vec2::new(x.x / x.z, x.y / x.z), Vec2::new(x2.x / x2.z, x2.y / x2.z)));
            }
        }
        out
    }

    fn pose() -> Pose6DoF {
        Pose6DoF::new(RotationMatrix::from_axis_angle(&Vec3::new(0.1, 1.0, 0.0), 0.5).unwrap(), Vec3::new(-1.0, 0.1, 0.3)).unwrap()
    }

    #[test]
    fn exact_scene_is_all_inliers() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = scene(&pose(), 80, &mut rng);
        let e = essential_from_pose(&pose()).unwrap();
        assert_eq!(count_inliers(&e, &m, 3e-7).0, 80);
        // strict inequality
        assert_eq!(count_inliers(&e, &m, 0.0).0, 0);
    }

    #[test]
    fn mask_matches_per_point_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut m = scene(&pose(), 100, &mut rng);
        for c in m.iter_mut().step_by(2) {
            c.q += Vec2::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05));
        }
        let e = essential_from_pose(&pose()).unwrap();
        let sigma = 3e-7;
        let (count, mask) = count_inliers(&e, &m, sigma);
        let mut oracle = 0;
        for (i, c) in m.iter().enumerate() {
            // direct formula, independent of sampson_error
            let p = Vec3::new(c.p.x, c.p.y, 1.0);
            let q = Vec3::new(c.q.x, c.q.y, 1.0);
            let em = e.matrix();
            let ep = em * p;
            let etq = em.transpose() * q;
            let r = q.dot(&ep);
            let s = r * r / (ep.x.powi(2) + ep.y.powi(2) + etq.x.powi(2) + etq.y.powi(2));
            assert_eq!(mask[i], s < sigma);
            oracle += usize::from(s < sigma);
        }
        assert_eq!(count, oracle);
        assert!(count >= 50 && count < 100);
    }

    #[test]
    fn alpha_zero_reduces_to_inlier_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = scene(&pose(), 30, &mut rng);
        let e = essential_from_pose(&pose()).unwrap();
        let far = Pose6DoF::new(RotationMatrix::identity(), Vec3::new(0.0, 3.0, 0.0)).unwrap();
        let cfg = RobustConfig { alpha: 0.0, ..Default::default() };
        let s = score_hypothesis(&e, &m, Some(&far), &cfg).unwrap();
        assert_eq!(s.total_score, s.inlier_count as f64);
        assert_eq!(s.prior_term, 0.0);
    }

    #[test]
    fn score_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = scene(&pose(), 30, &mut rng);
        let e = essential_from_pose(&pose()).unwrap();
        let prior = Pose6DoF::new(RotationMatrix::from_axis_angle(&Vec3::z(), 0.2).unwrap(), Vec3::new(-1.0, 0.0, 0.5)).unwrap();
        let s = score_hypothesis(&e, &m, Some(&prior), &RobustConfig::default()).unwrap();
        assert!(s.prior_term < 0.0);
        assert!((s.total_score - s.inlier_count as f64 - s.prior_term).abs() < 1e-9);
        assert_eq!(s.inlier_count, s.inlier_mask.iter().filter(|&&b| b).count());
    }

    #[test]
    fn arithmetic_ranking_example() {
        // inliers (100, 96), β (−0.1, 0), α = 3.33
        let alpha: f64 = 3.33;
        let a = alpha * -0.1 + 100.0;
        let b = alpha * 0.0 + 96.0;
        assert!((a - 99.667).abs() < 1e-12);
        assert_eq!(b, 96.0);
        assert!(a > b);
    }
}
