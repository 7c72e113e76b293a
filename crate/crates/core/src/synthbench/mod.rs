//! Synthetic benchmark: scene generation, pixel noise and outlier
//! perturbation, error metrics and parameter sweeps.

mod metrics;
mod perturb;
mod scene;
mod sweep;
mod tiebreak;
mod washout;

pub use metrics::{compute_metrics, lower_median, MetricsReport, ROTATION_THRESHOLD_DEG, TRANSLATION_THRESHOLD_M};
pub use perturb::{perturb, PerturbationConfig, Perturbed};
pub use scene::{generate_pair, GeneratedPair, SceneConfig};
pub use sweep::{run_sweep, Method, OracleConfig, SweepConfig, SweepRow, WeightsConfig};
pub use tiebreak::{
    binomial_upper_tail, run_tiebreak, tiebreak_scenario, Selection, TiebreakConfig, TiebreakReport, TIEBREAK_SIGMA,
    TiebreakScenario, TiebreakTrial, GT_CONSISTENT_TOL,
};
pub use washout::{run_washout, WashoutConfig, WashoutRow};
