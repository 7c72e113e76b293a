//! File formats: correspondence CSV, pose and weight JSON, bench CSV and run
//! manifests.

use std::io::{Read, Write};
use std::path::Path;

use relpose::fusion::PoseRecord;
use relpose::geometry::{Vec2, Vec3};
use relpose::synthbench::SweepRow;
use relpose::{CameraIntrinsics, Correspondence, Pose6DoF, RotationMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CORRESPONDENCE_HEADER: [&str; 4] = ["x1_px", "y1_px", "x2_px", "y2_px"];
pub const BENCH_HEADER: [&str; 11] = [
    "noise_std_px",
    "outlier_prob",
    "method",
    "n_trials",
    "n_failures",
    "median_rot_deg",
    "mean_rot_deg",
    "pct_rot_le_30",
    "median_trans_m",
    "mean_trans_m",
    "pct_trans_le_1m",
];

/// Pixel correspondences from CSV with header `x1_px,y1_px,x2_px,y2_px`.
/// Errors name the offending line.
pub fn read_correspondences(reader: impl Read) -> CliResult<Vec<Correspondence>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| CliError::Input(format!("line 1: {e}")))?.clone();
    if header.iter().ne(CORRESPONDENCE_HEADER) {
        return Err(CliError::Input(format!(
            "line 1: expected header {}, got {}",
            CORRESPONDENCE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Input(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let mut v = [0.0; 4];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Input(format!("line {line}: {field:?} is not a finite number")))?;
        }
        out.push(Correspondence::new(Vec2::new(v[0], v[1]), Vec2::new(v[2], v[3])));
    }
    Ok(out)
}

pub fn write_correspondences(w: impl Write, pixels: &[Correspondence]) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.into());
    wtr.write_record(CORRESPONDENCE_HEADER).map_err(io)?;
    for c in pixels {
        wtr.serialize((c.p.x, c.p.y, c.q.x, c.q.y)).map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_pose(path: &Path) -> CliResult<Pose6DoF> {
    let record: PoseRecord = read_json(path)?;
    Pose6DoF::try_from(&record).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn pose_record(p: &Pose6DoF) -> PoseRecord {
    PoseRecord::from(p)
}

pub fn pose_from_parts(rotation: [f64; 9], translation: [f64; 3]) -> CliResult<Pose6DoF> {
    let r = RotationMatrix::from_row_major(&rotation)?;
    Ok(Pose6DoF::new(r, Vec3::from(translation))?)
}

pub fn read_intrinsics(path: &Path) -> CliResult<CameraIntrinsics> {
    let k: CameraIntrinsics = read_json(path)?;
    k.validate()?;
    Ok(k)
}

#[derive(Debug, Serialize)]
struct BenchCsvRow<'a> {
    noise_std_px: f64,
    outlier_prob: f64,
    method: &'a str,
    n_trials: usize,
    n_failures: usize,
    median_rot_deg: f64,
    mean_rot_deg: f64,
    pct_rot_le_30: f64,
    median_trans_m: f64,
    mean_trans_m: f64,
    pct_trans_le_1m: f64,
}

pub fn write_bench_csv(w: impl Write, rows: &[SweepRow]) -> CliResult<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.into());
    wtr.write_record(BENCH_HEADER).map_err(io)?;
    for r in rows {
        wtr.serialize(BenchCsvRow {
            noise_std_px: r.setting.noise_std_px,
            outlier_prob: r.setting.outlier_prob,
            method: r.method.name(),
            n_trials: r.report.n_pairs,
            n_failures: r.n_failures,
            median_rot_deg: r.report.median_rot_deg,
            mean_rot_deg: r.report.mean_rot_deg,
            pct_rot_le_30: r.report.pct_rot_le_30,
            median_trans_m: r.report.median_trans_m,
            mean_trans_m: r.report.mean_trans_m,
            pct_trans_le_1m: r.report.pct_trans_le_1m,
        })
        .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Provenance written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// Fully resolved configuration.
    pub config: serde_json::Value,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, config: &impl Serialize) -> CliResult<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            config: serde_json::to_value(config).map_err(relpose::Error::from)?,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }
}
