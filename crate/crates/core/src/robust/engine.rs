use std::cmp::Ordering;

use rayon::prelude::*;

use super::sampling::{log_sampling_weights, sample_by_log_weights, uniform_minimal_sample};
use super::scoring::{assemble, inlier_count, prior_term};
use super::{PriorGrid, RobustConfig, ScoredHypothesis};
use crate::constants::{EIGHT_POINT_MIN, MINIMAL_SAMPLE_SIZE};
use crate::geometry::{decompose_essential, Correspondence, EssentialMatrix, Pose6DoF};
use crate::solver::{eight_point_normalized, five_point};
use crate::{rng, Error, Result};

/// One scored solution of one minimal sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisRecord {
    pub iteration: usize,
    /// Position among the five-point solver's solutions for this sample.
    pub solution: usize,
    pub biased: bool,
    pub essential: EssentialMatrix,
    pub inlier_count: usize,
    pub prior_term: f64,
    pub total_score: f64,
}

impl HypothesisRecord {
    /// Ranking used by both estimators: higher total, then higher prior term,
    /// then earlier iteration, then earlier solution.
    pub fn cmp_rank(&self, other: &Self) -> Ordering {
        self.total_score
            .total_cmp(&other.total_score)
            .then(self.prior_term.total_cmp(&other.prior_term))
            .then(other.iteration.cmp(&self.iteration))
            .then(other.solution.cmp(&self.solution))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustEstimate {
    /// Relative pose with unit translation.
    pub pose: Pose6DoF,
    pub hypothesis: ScoredHypothesis,
    /// Iteration that produced the winning hypothesis.
    pub iteration: usize,
}

/// Generates and scores every hypothesis of a run, in iteration order.
///
/// Without a prior every sample is uniform and `prior_term = 0`. With a prior,
/// iterations selected by [`RobustConfig::is_biased_iteration`] sample by
/// agreement with it. Iteration `i` draws from its own stream, so the result
/// does not depend on the thread count.
pub fn search_hypotheses(
    m: &[Correspondence],
    prior: Option<&Pose6DoF>,
    cfg: &RobustConfig,
) -> Result<Vec<HypothesisRecord>> {
    cfg.validate()?;
    if m.len() < MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: m.len() });
    }
    let grid = PriorGrid::new(cfg.grid_extent, cfg.grid_per_axis)?;
    let log_weights = match prior {
        Some(t1) if cfg.biased_fraction > 0.0 => Some(log_sampling_weights(m, t1, cfg.tau)?),
        Some(t1) => {
            // still reject a prior without direction
            t1.unit()?;
            None
        }
        None => None,
    };

    let per_iteration: Vec<Vec<HypothesisRecord>> = (0..cfg.iterations)
        .into_par_iter()
        .map(|iteration| {
            let mut stream = rng::stream(cfg.seed, &[iteration as u64]);
            let biased = log_weights.is_some() && cfg.is_biased_iteration(iteration);
            let sample = match (&log_weights, biased) {
                (Some(lw), true) => sample_by_log_weights(lw, &mut stream),
                _ => uniform_minimal_sample(m.len(), &mut stream),
            };
            let Ok(sample) = sample else { return Vec::new() };
            let points = sample.indices.map(|i| m[i]);
            let Ok(solutions) = five_point(&points) else { return Vec::new() };
            solutions
                .into_iter()
                .enumerate()
                .filter_map(|(solution, essential)| {
                    let term = prior_term(&essential, prior, cfg.alpha, &grid).ok()?;
                    let count = inlier_count(&essential, m, cfg.sigma);
                    Some(HypothesisRecord {
                        iteration,
                        solution,
                        biased,
                        essential,
                        inlier_count: count,
                        prior_term: term,
                        total_score: term + count as f64,
                    })
                })
                .collect()
        })
        .collect();
    Ok(per_iteration.into_iter().flatten().collect())
}

/// Classic RANSAC: uniform sampling, inlier-count scoring.
pub fn ransac(m: &[Correspondence], cfg: &RobustConfig) -> Result<RobustEstimate> {
    run(m, None, cfg)
}

/// RANSAC scored by `α·β(H | T₁) + inliers` with agreement-biased sampling.
pub fn prior_guided_ransac(m: &[Correspondence], t1: &Pose6DoF, cfg: &RobustConfig) -> Result<RobustEstimate> {
    run(m, Some(t1), cfg)
}

fn run(m: &[Correspondence], prior: Option<&Pose6DoF>, cfg: &RobustConfig) -> Result<RobustEstimate> {
    let records = search_hypotheses(m, prior, cfg)?;
    let best = records
        .iter()
        .max_by(|a, b| a.cmp_rank(b))
        .ok_or(Error::NoValidHypothesis)?;
    let mut hypothesis = assemble(best.essential, m, best.prior_term, cfg.sigma);
    if cfg.refit {
        if let Some(refit) = refit(&hypothesis, m, prior, cfg)? {
            hypothesis = refit;
        }
    }
    let pose = final_pose(&hypothesis, m)?;
    Ok(RobustEstimate { pose, hypothesis, iteration: best.iteration })
}

/// Eight-point refit over the inliers, kept only if it does not lower the score.
fn refit(
    winner: &ScoredHypothesis,
    m: &[Correspondence],
    prior: Option<&Pose6DoF>,
    cfg: &RobustConfig,
) -> Result<Option<ScoredHypothesis>> {
    if winner.inlier_count < EIGHT_POINT_MIN {
        return Ok(None);
    }
    let inliers: Vec<Correspondence> = m.iter().zip(&winner.inlier_mask).filter(|(_, &b)| b).map(|(c, _)| *c).collect();
    let Ok(e) = eight_point_normalized(&inliers) else { return Ok(None) };
    let grid = PriorGrid::new(cfg.grid_extent, cfg.grid_per_axis)?;
    let term = prior_term(&e, prior, cfg.alpha, &grid)?;
    let candidate = assemble(e, m, term, cfg.sigma);
    Ok((candidate.total_score >= winner.total_score).then_some(candidate))
}

/// Chirality on the inliers, falling back to all correspondences when the
/// inliers do not single out a candidate.
fn final_pose(h: &ScoredHypothesis, m: &[Correspondence]) -> Result<Pose6DoF> {
    let inliers: Vec<Correspondence> = m.iter().zip(&h.inlier_mask).filter(|(_, &b)| b).map(|(c, _)| *c).collect();
    match decompose_essential(&h.essential, &inliers) {
        Ok(pose) => Ok(pose),
        Err(Error::ChiralityAmbiguous | Error::TooFewCorrespondences { .. }) => decompose_essential(&h.essential, m),
        Err(e) => Err(e),
    }
}
