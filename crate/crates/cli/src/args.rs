use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use relpose::fusion::{FusionWeights, LogisticParams};
use relpose::synthbench::OracleConfig;
use relpose::RobustConfig;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "relpose", version, about = "Two-view relative pose estimation with pose priors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the relative pose of one image pair.
    Estimate(EstimateArgs),
    /// Run a synthetic noise/outlier sweep and write a CSV table.
    Bench(BenchArgs),
    /// Nine correspondences, five inliers: classic versus prior-guided selection.
    DemoTiebreak(DemoArgs),
}

/// Overrides for the robust estimator; unset flags keep their defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RobustFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Inlier threshold on the squared Sampson error, normalized coordinates.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Weight of the prior term in the hypothesis score.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Temperature of the agreement weights used for biased sampling.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub biased_fraction: Option<f64>,
    #[arg(long)]
    pub grid_extent: Option<f64>,
    #[arg(long)]
    pub grid_per_axis: Option<usize>,
}

impl RobustFlags {
    pub fn apply(&self, cfg: &mut RobustConfig) {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.iterations {
            cfg.iterations = v;
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.tau {
            cfg.tau = v;
        }
        if let Some(v) = self.biased_fraction {
            cfg.biased_fraction = v;
        }
        if let Some(v) = self.grid_extent {
            cfg.grid_extent = v;
        }
        if let Some(v) = self.grid_per_axis {
            cfg.grid_per_axis = v;
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with header x1_px,y1_px,x2_px,y2_px.
    pub correspondences: PathBuf,
    /// JSON {fx, fy, cx, cy}; alternative to the individual flags.
    #[arg(long, conflicts_with_all = ["fx", "fy", "cx", "cy"])]
    pub intrinsics: Option<PathBuf>,
    #[arg(long)]
    pub fx: Option<f64>,
    #[arg(long)]
    pub fy: Option<f64>,
    #[arg(long)]
    pub cx: Option<f64>,
    #[arg(long)]
    pub cy: Option<f64>,
    /// Pose JSON file, or oracle:ROT_DEG,DIR_DEG,SCALE_REL (needs --gt).
    #[arg(long)]
    pub prior: Option<String>,
    /// fixed:W_R,W_T, logistic:MIDPOINT,STEEPNESS, or a weights JSON file.
    #[arg(long)]
    pub weights: Option<String>,
    /// Ground-truth pose JSON for the oracle prior.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Refit winning hypotheses on their inliers.
    #[arg(long)]
    pub refit: bool,
    #[command(flatten)]
    pub robust: RobustFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sweep configuration JSON, or a manifest from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
    /// Manifest path; defaults to the CSV path with `.manifest.json` appended.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the configured trial count.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long)]
    pub trials: Option<usize>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub robust: RobustFlags,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    Oracle(OracleConfig),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightsSpec {
    Fixed(FusionWeights),
    Logistic(LogisticParams),
    File(PathBuf),
}

fn parse_reals<const N: usize>(flag: &str, s: &str) -> CliResult<[f64; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Input(format!("{flag}: expected {N} comma-separated numbers, got {s:?}"));
    if parts.len() != N {
        return Err(bad());
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

impl PriorSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s.strip_prefix("oracle:") {
            Some(rest) => {
                let [r, t, k] = parse_reals::<3>("--prior", rest)?;
                Ok(PriorSpec::Oracle(OracleConfig { rot_noise_deg: r, trans_dir_noise_deg: t, scale_noise_rel: k }))
            }
            None => Ok(PriorSpec::File(PathBuf::from(s))),
        }
    }
}

impl WeightsSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        if let Some(rest) = s.strip_prefix("fixed:") {
            let [w_r, w_t] = parse_reals::<2>("--weights", rest)?;
            return Ok(WeightsSpec::Fixed(FusionWeights::new(w_r, w_t)?));
        }
        if let Some(rest) = s.strip_prefix("logistic:") {
            let [midpoint, steepness] = parse_reals::<2>("--weights", rest)?;
            return Ok(WeightsSpec::Logistic(LogisticParams { midpoint, steepness }));
        }
        Ok(WeightsSpec::File(PathBuf::from(s)))
    }
}
