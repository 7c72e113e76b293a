use super::{fuse_poses, FusionWeights, PriorContext, PriorProvider, WeightProvider};
use crate::constants::MINIMAL_SAMPLE_SIZE;
use crate::geometry::{Correspondence, Pose6DoF};
use crate::robust::{prior_guided_ransac, ransac, RobustConfig, ScoredHypothesis};
use crate::{Error, Result};

/// Every intermediate pose of the two-round pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionOutput {
    /// Round-1 classic solver pose, unit translation; `None` if it failed.
    pub t_s: Option<Pose6DoF>,
    /// Regressed pose from the prior provider.
    pub t_t: Pose6DoF,
    /// Fused prior for round 2.
    pub t_1: Pose6DoF,
    /// Round-2 prior-guided solver pose, unit translation.
    pub t_u: Pose6DoF,
    pub t_final: Pose6DoF,
    pub weights: FusionWeights,
    pub round1: Option<ScoredHypothesis>,
    pub round2: ScoredHypothesis,
    /// Round 1 failed and `t_1 = t_t`.
    pub round1_fallback: bool,
}

/// Classic solve, fuse with the regressed pose, solve again guided by the
/// fused pose, fuse again.
pub fn fusion_pipeline(
    m: &[Correspondence],
    prior: &PriorProvider,
    weights: &WeightProvider,
    cfg: &RobustConfig,
    ctx: &PriorContext,
) -> Result<FusionOutput> {
    if m.len() < MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: m.len() });
    }
    let round1 = match ransac(m, cfg) {
        Ok(est) => Some(est),
        Err(Error::NoValidHypothesis | Error::ChiralityAmbiguous | Error::DegenerateInput(_)) => None,
        Err(e) => return Err(e),
    };
    let t_t = prior.prior(ctx)?;
    let count = round1.as_ref().map_or(0, |est| est.hypothesis.inlier_count);
    let w = weights.weights(count, ctx.pair_index)?;
    let t_1 = match &round1 {
        Some(est) => fuse_poses(&t_t, &est.pose, &w)?,
        None => t_t,
    };
    let updated = prior_guided_ransac(m, &t_1, cfg)?;
    let t_final = fuse_poses(&t_t, &updated.pose, &w)?;
    Ok(FusionOutput {
        t_s: round1.as_ref().map(|est| est.pose),
        t_t,
        t_1,
        t_u: updated.pose,
        t_final,
        weights: w,
        round1_fallback: round1.is_none(),
        round1: round1.map(|est| est.hypothesis),
        round2: updated.hypothesis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geodesic_rotation_error, RotationMatrix, Vec2, Vec3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gt() -> Pose6DoF {
        Pose6DoF::new(RotationMatrix::from_axis_angle(&Vec3::new(0.1, 1.0, 0.2), 0.6).unwrap(), Vec3::new(-1.5, 0.2, 0.6)).unwrap()
    }

    fn scene(n: usize, rng: &mut impl Rng) -> Vec<Correspondence> {
        let mut out = Vec::new();
        while out.len() < n {
            let x = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(3.0..8.0));
            let x2 = gt().transform_point(&x);
            if x2.z > 0.5 {
                out.push(Correspondence::new(Vec2::new(x.x / x.z, x.y / x.z), Vec2::new(x2.x / x2.z, x2.y / x2.z)));
            }
        }
        out
    }

    fn cfg() -> RobustConfig {
        RobustConfig { iterations: 100, seed: 3, ..Default::default() }
    }

    fn ctx() -> PriorContext {
        PriorContext { ground_truth: Some(gt()), pair_index: 0 }
    }

    fn fixed(w_r: f64, w_t: f64) -> WeightProvider {
        WeightProvider::Fixed(FusionWeights::new(w_r, w_t).unwrap())
    }

    #[test]
    fn unit_weights_return_the_prior() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = scene(60, &mut rng);
        let oracle = PriorProvider::oracle(10.0, 10.0, 0.1, 2).unwrap();
        let out = fusion_pipeline(&m, &oracle, &fixed(1.0, 1.0), &cfg(), &ctx()).unwrap();
        assert_eq!(out.t_final, out.t_t);
        assert_eq!(out.t_1, out.t_t);
    }

    #[test]
    fn zero_weights_on_clean_data_are_precise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = scene(100, &mut rng);
        let oracle = PriorProvider::oracle(10.0, 10.0, 0.1, 2).unwrap();
        let out = fusion_pipeline(&m, &oracle, &fixed(0.0, 0.0), &cfg(), &ctx()).unwrap();
        assert!(geodesic_rotation_error(&out.t_final.rotation, &gt().rotation) < 0.1);
        assert!((out.t_final.translation.norm() - out.t_t.translation.norm()).abs() < 1e-12);
    }

    #[test]
    fn output_is_internally_consistent_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = scene(80, &mut rng);
        let oracle = PriorProvider::oracle(10.0, 10.0, 0.1, 2).unwrap();
        let weights = WeightProvider::InlierLogistic(Default::default());
        let a = fusion_pipeline(&m, &oracle, &weights, &cfg(), &ctx()).unwrap();
        let b = fusion_pipeline(&m, &oracle, &weights, &cfg(), &ctx()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.t_final, fuse_poses(&a.t_t, &a.t_u.unit().unwrap(), &a.weights).unwrap());
        assert_eq!(a.t_1, fuse_poses(&a.t_t, &a.t_s.unwrap(), &a.weights).unwrap());
        assert_eq!(a.weights, super::super::inlier_logistic_weight(80, &Default::default()));
        assert!(!a.round1_fallback);
    }

    #[test]
    fn too_few_correspondences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = scene(4, &mut rng);
        let p = PriorProvider::FixedPose(gt());
        assert!(matches!(fusion_pipeline(&m, &p, &fixed(0.5, 0.5), &cfg(), &ctx()), Err(Error::TooFewCorrespondences { .. })));
    }

    #[test]
    fn unsolvable_input_propagates_solver_error() {
        // all-identical points: five-point yields nothing
        let c = Correspondence::new(Vec2::new(0.1, 0.0), Vec2::new(0.1, 0.0));
        let p = PriorProvider::FixedPose(gt());
        let out = fusion_pipeline(&[c; 10], &p, &fixed(0.5, 0.5), &cfg(), &ctx());
        // round 2 cannot succeed either; the error propagates
        assert!(matches!(out, Err(Error::NoValidHypothesis)));
    }
}
