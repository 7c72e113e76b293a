use std::io::Write;
use std::path::{Path, PathBuf};

use relpose::fusion::{fusion_pipeline, FusionWeights, PoseRecord, PriorContext, PriorProvider, WeightProvider};
use relpose::synthbench::{run_sweep, run_tiebreak, SweepConfig, TiebreakConfig, TiebreakReport};
use relpose::{ransac, rng, CameraIntrinsics, CorrespondenceSet, Pose6DoF, RobustConfig};
use serde::Serialize;
use serde_json::json;

use crate::args::{BenchArgs, DemoArgs, EstimateArgs, PriorSpec, WeightsSpec};
use crate::error::{CliError, CliResult};
use crate::formats::{pose_record, read_correspondences, read_intrinsics, read_pose, write_bench_csv, RunManifest};

const MIN_CORRESPONDENCES: usize = 5;
/// Stream role of the oracle prior below the master seed.
const ROLE_ORACLE: u64 = 3;

#[derive(Debug, Serialize)]
pub struct InlierCounts {
    pub round1: Option<usize>,
    pub round2: Option<usize>,
}

/// JSON written by `estimate`. Poses absent from the run are null.
#[derive(Debug, Serialize)]
pub struct EstimateOutput {
    pub t_s: Option<PoseRecord>,
    pub t_t: Option<PoseRecord>,
    pub t_1: Option<PoseRecord>,
    pub t_u: Option<PoseRecord>,
    pub t_final: PoseRecord,
    pub weights: Option<FusionWeights>,
    pub inliers: InlierCounts,
    pub round1_fallback: bool,
    pub manifest: RunManifest,
}

fn intrinsics(args: &EstimateArgs) -> CliResult<CameraIntrinsics> {
    if let Some(path) = &args.intrinsics {
        return read_intrinsics(path);
    }
    match (args.fx, args.fy, args.cx, args.cy) {
        (Some(fx), Some(fy), Some(cx), Some(cy)) => Ok(CameraIntrinsics::new(fx, fy, cx, cy)?),
        _ => Err(CliError::Input("intrinsics required: pass --intrinsics FILE or all of --fx --fy --cx --cy".into())),
    }
}

fn readable(path: &Path) -> CliResult<PathBuf> {
    std::fs::metadata(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

pub fn estimate(args: &EstimateArgs, out: &mut dyn Write) -> CliResult<()> {
    let file = std::fs::File::open(&args.correspondences)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.correspondences.display())))?;
    let pixels = read_correspondences(std::io::BufReader::new(file))?;
    if pixels.len() < MIN_CORRESPONDENCES {
        return Err(CliError::Input(format!(
            "need at least {MIN_CORRESPONDENCES} correspondences, got {}",
            pixels.len()
        )));
    }
    let k = intrinsics(args)?;
    let m = CorrespondenceSet::from_pixels(pixels, &k)?;
    let mut cfg = RobustConfig { refit: args.refit, ..Default::default() };
    args.robust.apply(&mut cfg);
    cfg.validate()?;

    let prior = args.prior.as_deref().map(PriorSpec::parse).transpose()?;
    let weights = args.weights.as_deref().map(WeightsSpec::parse).transpose()?;
    let manifest = RunManifest::new(
        "estimate",
        cfg.seed,
        &json!({
            "correspondences": args.correspondences,
            "intrinsics": k,
            "robust": cfg,
            "prior": args.prior,
            "weights": args.weights,
            "gt": args.gt,
        }),
    )?;

    let output = match prior {
        None => {
            if weights.is_some() {
                return Err(CliError::Input("--weights needs --prior".into()));
            }
            let est = ransac(&m, &cfg)?;
            EstimateOutput {
                t_s: Some(pose_record(&est.pose)),
                t_t: None,
                t_1: None,
                t_u: None,
                t_final: pose_record(&est.pose),
                weights: None,
                inliers: InlierCounts { round1: Some(est.hypothesis.inlier_count), round2: None },
                round1_fallback: false,
                manifest,
            }
        }
        Some(source) => {
            let ground_truth: Option<Pose6DoF> = args.gt.as_deref().map(read_pose).transpose()?;
            let provider = match source {
                PriorSpec::Oracle(o) => {
                    if ground_truth.is_none() {
                        return Err(CliError::Input("an oracle prior needs --gt".into()));
                    }
                    o.provider(rng::derive_seed(cfg.seed, &[ROLE_ORACLE]))?
                }
                PriorSpec::File(path) => PriorProvider::FromFile(readable(&path)?),
            };
            let weight_provider = match weights {
                None => WeightProvider::InlierLogistic(Default::default()),
                Some(WeightsSpec::Fixed(w)) => WeightProvider::Fixed(w),
                Some(WeightsSpec::Logistic(p)) => WeightProvider::InlierLogistic(p),
                Some(WeightsSpec::File(path)) => WeightProvider::FromFile(readable(&path)?),
            };
            let ctx = PriorContext { ground_truth, pair_index: 0 };
            let fused = fusion_pipeline(&m, &provider, &weight_provider, &cfg, &ctx)?;
            EstimateOutput {
                t_s: fused.t_s.as_ref().map(pose_record),
                t_t: Some(pose_record(&fused.t_t)),
                t_1: Some(pose_record(&fused.t_1)),
                t_u: Some(pose_record(&fused.t_u)),
                t_final: pose_record(&fused.t_final),
                weights: Some(fused.weights),
                inliers: InlierCounts {
                    round1: fused.round1.as_ref().map(|h| h.inlier_count),
                    round2: Some(fused.round2.inlier_count),
                },
                round1_fallback: fused.round1_fallback,
                manifest,
            }
        }
    };
    serde_json::to_writer_pretty(&mut *out, &output).map_err(relpose::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// A sweep configuration, or the `config` of a manifest written by `bench`.
fn load_sweep_config(path: &Path) -> CliResult<SweepConfig> {
    let value: serde_json::Value = crate::formats::read_json(path)?;
    let value = match value.get("tool").and(value.get("config")) {
        Some(config) => config.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut cfg = match &args.config {
        Some(path) => load_sweep_config(path)?,
        None => SweepConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    cfg.validate()?;
    let manifest = RunManifest::new("bench", cfg.seed, &cfg)?;
    let rows = run_sweep(&cfg)?;

    let mut csv = Vec::new();
    write_bench_csv(&mut csv, &rows)?;
    std::fs::write(&args.out, &csv)?;
    let manifest_path = args.manifest.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".manifest.json");
        p.into()
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(relpose::Error::from)?;
    std::fs::write(&manifest_path, text + "\n")?;
    writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display())?;
    writeln!(out, "manifest: {}", manifest_path.display())?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct DemoOutput<'a> {
    report: &'a TiebreakReport,
    manifest: RunManifest,
}

pub fn demo_tiebreak(args: &DemoArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut cfg = TiebreakConfig::default();
    args.robust.apply(&mut cfg.robust);
    if let Some(seed) = args.robust.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    let report = run_tiebreak(&cfg)?;
    let manifest = RunManifest::new("demo-tiebreak", cfg.seed, &cfg)?;
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &DemoOutput { report: &report, manifest }).map_err(relpose::Error::from)?;
        writeln!(out)?;
        return Ok(());
    }
    write_demo_report(&cfg, &report, out)?;
    Ok(())
}

fn write_demo_report(cfg: &TiebreakConfig, report: &TiebreakReport, out: &mut dyn Write) -> std::io::Result<()> {
    let r = &cfg.robust;
    writeln!(out, "Tie-break scenario: 9 correspondences, 5 exact inliers, 4 random outliers")?;
    writeln!(
        out,
        "alpha = {}, sigma = {:e}, iterations = {}, biased_fraction = {}, trials = {}, seed = {}",
        r.alpha, r.sigma, r.iterations, r.biased_fraction, cfg.trials, cfg.seed
    )?;
    writeln!(out, "score = alpha*beta + inliers; GT-consistent = essential distance to ground truth < 1e-4")?;
    writeln!(out)?;
    writeln!(
        out,
        "{:>5}  {:>28}  {:>28}  {:>9}",
        "trial", "classic: inl  a*beta  total", "guided: inl  a*beta  total", "tied"
    )?;
    for (i, t) in report.trials.iter().enumerate() {
        let cell = |s: &relpose::synthbench::Selection| {
            format!(
                "{:>3} {:>9.3} {:>8.3} {}",
                s.inlier_count,
                s.prior_term,
                s.total_score,
                if s.gt_consistent { "GT" } else { "--" }
            )
        };
        writeln!(
            out,
            "{:>5}  {:>28}  {:>28}  {:>4}/{:<4}",
            i,
            cell(&t.classic),
            cell(&t.guided),
            t.tied_consistent,
            t.tied
        )?;
    }
    let n = report.trials.len();
    writeln!(out)?;
    writeln!(out, "classic GT-consistent:      {}/{n}", report.classic_consistent)?;
    writeln!(out, "prior-guided GT-consistent: {}/{n}", report.guided_consistent)?;
    writeln!(
        out,
        "chance among tied:          {:.2}/{n} (classic one-sided p = {:.3})",
        report.chance_expected, report.classic_p_value
    )?;
    Ok(())
}
