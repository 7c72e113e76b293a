use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generate_pair, perturb, MetricsReport, PerturbationConfig, SceneConfig};
use crate::fusion::{fusion_pipeline, FusionWeights, LogisticParams, PriorContext, PriorProvider, WeightProvider};
use crate::geometry::{geodesic_rotation_error, Pose6DoF};
use crate::robust::{ransac, RobustConfig};
use crate::{rng, Error, Result};

/// Stream roles; each trial's streams are `(seed, role, trial)`.
pub(crate) const ROLE_SCENE: u64 = 0;
pub(crate) const ROLE_PERTURB: u64 = 1;
pub(crate) const ROLE_SOLVER: u64 = 2;
pub(crate) const ROLE_PRIOR: u64 = 3;

/// Pose reported by a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Round-1 classic solver, `T_s`.
    Solver,
    /// Regressed pose, `T_t`.
    Prior,
    /// Round-2 prior-guided solver, `T_u`.
    Updated,
    /// Fused output, `T`.
    Full,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Solver, Method::Prior, Method::Updated, Method::Full];

    pub fn name(self) -> &'static str {
        match self {
            Method::Solver => "solver",
            Method::Prior => "prior",
            Method::Updated => "updated",
            Method::Full => "full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}; expected solver, prior, updated or full")))
    }
}

/// Error model of the synthetic prior, see [`PriorProvider::SyntheticOracle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub rot_noise_deg: f64,
    pub trans_dir_noise_deg: f64,
    pub scale_noise_rel: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { rot_noise_deg: 10.0, trans_dir_noise_deg: 10.0, scale_noise_rel: 0.1 }
    }
}

impl OracleConfig {
    pub fn exact() -> Self {
        Self { rot_noise_deg: 0.0, trans_dir_noise_deg: 0.0, scale_noise_rel: 0.0 }
    }

    pub fn provider(&self, seed: u64) -> Result<PriorProvider> {
        PriorProvider::oracle(self.rot_noise_deg, self.trans_dir_noise_deg, self.scale_noise_rel, seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightsConfig {
    Fixed(FusionWeights),
    Logistic(LogisticParams),
}

impl Default for WeightsConfig {
    fn default() -> Self {
        WeightsConfig::Logistic(LogisticParams::default())
    }
}

impl WeightsConfig {
    pub fn provider(&self) -> WeightProvider {
        match self {
            WeightsConfig::Fixed(w) => WeightProvider::Fixed(*w),
            WeightsConfig::Logistic(p) => WeightProvider::InlierLogistic(*p),
        }
    }
}

/// A full benchmark: settings, methods, trial count and estimator parameters.
///
/// `robust.seed` is ignored; every random stream derives from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: usize,
    /// Swept at zero outliers.
    pub noise_levels: Vec<f64>,
    /// Swept at zero noise.
    pub outlier_levels: Vec<f64>,
    pub methods: Vec<Method>,
    pub scene: SceneConfig,
    pub robust: RobustConfig,
    pub prior: OracleConfig,
    pub weights: WeightsConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 50,
            noise_levels: vec![0.0, 8.0, 16.0, 32.0],
            outlier_levels: vec![0.0, 0.25, 0.5, 0.75, 0.875],
            methods: Method::ALL.to_vec(),
            scene: SceneConfig::default(),
            robust: RobustConfig::default(),
            prior: OracleConfig::default(),
            weights: WeightsConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("at least one method is required".into()));
        }
        for s in self.settings() {
            s.validate()?;
        }
        self.scene.validate()?;
        self.robust.validate()?;
        self.prior.provider(0)?;
        if let WeightsConfig::Fixed(w) = &self.weights {
            w.validate()?;
        }
        Ok(())
    }

    /// Noise axis at zero outliers, then outlier axis at zero noise.
    pub fn settings(&self) -> Vec<PerturbationConfig> {
        let noise = self.noise_levels.iter().map(|&n| PerturbationConfig { noise_std_px: n, outlier_prob: 0.0 });
        let outliers = self.outlier_levels.iter().map(|&o| PerturbationConfig { noise_std_px: 0.0, outlier_prob: o });
        noise.chain(outliers).collect()
    }
}

/// One output row: a method's metrics at one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub setting: PerturbationConfig,
    pub method: Method,
    pub n_failures: usize,
    pub report: MetricsReport,
}

/// `(rotation error °, translation error m)` per method, `None` on failure.
type TrialErrors = [Option<(f64, f64)>; 4];

fn errors(pred: &Pose6DoF, gt: &Pose6DoF) -> (f64, f64) {
    (geodesic_rotation_error(&pred.rotation, &gt.rotation), (pred.translation - gt.translation).norm())
}

fn run_trial(cfg: &SweepConfig, setting: &PerturbationConfig, trial: usize) -> Result<(TrialErrors, f64)> {
    let t = trial as u64;
    let pair = generate_pair(&cfg.scene, &mut rng::stream(cfg.seed, &[ROLE_SCENE, t]))?;
    let m = perturb(&pair.correspondences, setting, &cfg.scene, &mut rng::stream(cfg.seed, &[ROLE_PERTURB, t]))?;
    let robust = RobustConfig { seed: rng::derive_seed(cfg.seed, &[ROLE_SOLVER, t]), ..cfg.robust.clone() };
    let provider = cfg.prior.provider(rng::derive_seed(cfg.seed, &[ROLE_PRIOR]))?;
    let gt = pair.ground_truth;
    let ctx = PriorContext { ground_truth: Some(gt), pair_index: trial };
    let t_t = provider.prior(&ctx)?;
    let scale = t_t.translation.norm();
    let scaled = |p: &Pose6DoF| p.with_scale(scale).ok();

    let needs_pipeline = cfg.methods.iter().any(|m| matches!(m, Method::Updated | Method::Full));
    let solver_only = |m: &[crate::geometry::Correspondence]| ransac(m, &robust).ok().and_then(|e| scaled(&e.pose));
    let out: [Option<Pose6DoF>; 4] = if needs_pipeline {
        match fusion_pipeline(&m.correspondences, &provider, &cfg.weights.provider(), &robust, &ctx) {
            Ok(out) => [out.t_s.as_ref().and_then(scaled), Some(out.t_t), scaled(&out.t_u), Some(out.t_final)],
            Err(_) => [solver_only(&m.correspondences), Some(t_t), None, None],
        }
    } else if cfg.methods.contains(&Method::Solver) {
        [solver_only(&m.correspondences), Some(t_t), None, None]
    } else {
        [None, Some(t_t), None, None]
    };
    Ok((out.map(|p| p.map(|p| errors(&p, &gt))), gt.translation.norm() + scale))
}

/// Runs every setting and method. Trials of a setting run in parallel; the
/// output depends only on `cfg`.
///
/// Trial `k` uses the same scene, perturbation draws, solver seed and prior
/// draw in every setting. Failed estimates count as 180° and
/// `‖t_gt‖ + ‖t_t‖` meters.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let settings = cfg.settings();
    let mut cache: Vec<(PerturbationConfig, Vec<(TrialErrors, f64)>)> = Vec::new();
    let mut rows = Vec::with_capacity(settings.len() * cfg.methods.len());
    for setting in settings {
        let idx = match cache.iter().position(|(s, _)| *s == setting) {
            Some(i) => i,
            None => {
                let trials = (0..cfg.trials)
                    .into_par_iter()
                    .map(|k| run_trial(cfg, &setting, k))
                    .collect::<Result<Vec<_>>>()?;
                cache.push((setting, trials));
                cache.len() - 1
            }
        };
        let trials = &cache[idx].1;
        for &method in &cfg.methods {
            let slot = Method::ALL.iter().position(|&m| m == method).unwrap();
            let (mut rot, mut trans, mut failures) = (Vec::new(), Vec::new(), 0);
            for (errs, bound) in trials {
                let (r, t) = errs[slot].unwrap_or_else(|| {
                    failures += 1;
                    (180.0, *bound)
                });
                rot.push(r);
                trans.push(t);
            }
            rows.push(SweepRow { setting, method, n_failures: failures, report: MetricsReport::from_errors(&rot, &trans)? });
        }
    }
    Ok(rows)
}
