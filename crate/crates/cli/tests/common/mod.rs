#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use relpose::fusion::PoseRecord;
use relpose::synthbench::{generate_pair, GeneratedPair, SceneConfig};
use relpose_cli::formats::write_correspondences;

pub fn relpose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relpose")).args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub struct Fixture {
    pub pair: GeneratedPair,
    pub corr: PathBuf,
    pub gt: PathBuf,
}

/// An exact synthetic pair written as correspondence CSV and pose JSON.
pub fn fixture(dir: &Path, seed: u64, num_points: usize) -> Fixture {
    let scene = SceneConfig { num_points, ..Default::default() };
    let pair = generate_pair(&scene, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let corr = dir.join(format!("pair{seed}.csv"));
    write_correspondences(std::fs::File::create(&corr).unwrap(), pair.correspondences.pixels().unwrap()).unwrap();
    let gt = dir.join(format!("gt{seed}.json"));
    write_pose(&gt, &pair.ground_truth);
    Fixture { pair, corr, gt }
}

pub fn write_pose(path: &Path, pose: &relpose::Pose6DoF) {
    std::fs::write(path, serde_json::to_string(&PoseRecord::from(pose)).unwrap()).unwrap();
}

pub const INTRINSICS: [&str; 8] = ["--fx", "585", "--fy", "585", "--cx", "320", "--cy", "240"];

pub fn pose_of(v: &serde_json::Value) -> relpose::Pose6DoF {
    let record: PoseRecord = serde_json::from_value(v.clone()).unwrap();
    relpose::Pose6DoF::try_from(&record).unwrap()
}
