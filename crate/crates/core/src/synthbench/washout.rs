use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{ROLE_PERTURB, ROLE_PRIOR, ROLE_SCENE, ROLE_SOLVER};
use super::{generate_pair, perturb, OracleConfig, PerturbationConfig, SceneConfig};
use crate::fusion::PriorContext;
use crate::geometry::Correspondence;
use crate::robust::{search_hypotheses, HypothesisRecord, RobustConfig};
use crate::{rng, Error, Result};

/// How often the prior term overturns the inlier-count winner, by
/// correspondence count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WashoutConfig {
    pub sizes: Vec<usize>,
    pub trials: usize,
    /// Exact share of correspondences kept as (noisy) inliers.
    pub inlier_ratio: f64,
    pub noise_std_px: f64,
    pub seed: u64,
    pub robust: RobustConfig,
    pub prior: OracleConfig,
    pub scene: SceneConfig,
}

impl Default for WashoutConfig {
    fn default() -> Self {
        Self {
            sizes: vec![20, 200, 2000],
            trials: 100,
            inlier_ratio: 0.5,
            noise_std_px: 0.25,
            seed: 0,
            robust: RobustConfig { iterations: 500, biased_fraction: 0.0, ..Default::default() },
            prior: OracleConfig::default(),
            scene: SceneConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WashoutRow {
    pub size: usize,
    pub trials: usize,
    /// Trials whose winner by `α·β + inliers` differs from the winner by
    /// inliers alone.
    pub changed: usize,
}

impl WashoutRow {
    pub fn fraction(&self) -> f64 {
        self.changed as f64 / self.trials as f64
    }
}

fn by_count(a: &HypothesisRecord, b: &HypothesisRecord) -> std::cmp::Ordering {
    a.inlier_count
        .cmp(&b.inlier_count)
        .then(b.iteration.cmp(&a.iteration))
        .then(b.solution.cmp(&a.solution))
}

fn trial_changed(cfg: &WashoutConfig, size: usize, trial: usize) -> Result<bool> {
    let t = trial as u64;
    let s = size as u64;
    let scene = SceneConfig { num_points: size, ..cfg.scene.clone() };
    let pair = generate_pair(&scene, &mut rng::stream(cfg.seed, &[ROLE_SCENE, s, t]))?;
    let mut stream = rng::stream(cfg.seed, &[ROLE_PERTURB, s, t]);
    let noisy = perturb(&pair.correspondences, &PerturbationConfig { noise_std_px: cfg.noise_std_px, outlier_prob: 0.0 }, &scene, &mut stream)?;
    let n_outliers = size - (size as f64 * cfg.inlier_ratio).round() as usize;
    let k = &scene.intrinsics;
    // generated points are in random order, so the leading ones are a random subset
    let m: Vec<Correspondence> = noisy
        .correspondences
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i < n_outliers {
                Correspondence::new(k.normalize(&scene.random_pixel(&mut stream)), k.normalize(&scene.random_pixel(&mut stream)))
            } else {
                *c
            }
        })
        .collect();
    let provider = cfg.prior.provider(rng::derive_seed(cfg.seed, &[ROLE_PRIOR, s]))?;
    let t1 = provider.prior(&PriorContext { ground_truth: Some(pair.ground_truth), pair_index: trial })?;
    let robust = RobustConfig { seed: rng::derive_seed(cfg.seed, &[ROLE_SOLVER, s, t]), ..cfg.robust.clone() };
    let records = search_hypotheses(&m, Some(&t1), &robust)?;
    let plain = records.iter().max_by(|a, b| by_count(a, b)).ok_or(Error::NoValidHypothesis)?;
    let scored = records.iter().max_by(|a, b| a.cmp_rank(b)).ok_or(Error::NoValidHypothesis)?;
    Ok((plain.iteration, plain.solution) != (scored.iteration, scored.solution))
}

/// Both winners come from the same hypothesis stream, so any difference is
/// due to the prior term alone.
pub fn run_washout(cfg: &WashoutConfig) -> Result<Vec<WashoutRow>> {
    if cfg.trials < 1 || cfg.sizes.iter().any(|&s| s < 5) {
        return Err(Error::InvalidConfig("washout needs at least one trial and at least 5 correspondences".into()));
    }
    if !(0.0..=1.0).contains(&cfg.inlier_ratio) {
        return Err(Error::InvalidConfig(format!("inlier_ratio must lie in [0, 1], got {}", cfg.inlier_ratio)));
    }
    cfg.robust.validate()?;
    cfg.sizes
        .iter()
        .map(|&size| {
            let flags = (0..cfg.trials)
                .into_par_iter()
                .map(|k| trial_changed(cfg, size, k))
                .collect::<Result<Vec<bool>>>()?;
            Ok(WashoutRow { size, trials: cfg.trials, changed: flags.iter().filter(|&&c| c).count() })
        })
        .collect()
}
