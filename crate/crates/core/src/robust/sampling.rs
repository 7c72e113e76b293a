use rand::seq::index;
use rand::Rng;

use crate::constants::MINIMAL_SAMPLE_SIZE;
use crate::geometry::{essential_from_pose, sampson_error, Correspondence, Pose6DoF};
use crate::solver::MinimalSample;
use crate::{Error, Result};

/// Agreement weights `exp(−Sampson(p, q | T₁)/τ)`, clamped below at the
/// smallest positive double so every weight stays in `(0, 1]`.
pub fn sampling_weights(m: &[Correspondence], t1: &Pose6DoF, tau: f64) -> Result<Vec<f64>> {
    Ok(log_sampling_weights(m, t1, tau)?
        .into_iter()
        .map(|lw| lw.exp().max(f64::MIN_POSITIVE))
        .collect())
}

/// `−Sampson/τ`, the logarithm of [`sampling_weights`] without underflow.
pub(crate) fn log_sampling_weights(m: &[Correspondence], t1: &Pose6DoF, tau: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0) {
        return Err(Error::InvalidConfig(format!("tau must be positive, got {tau}")));
    }
    let e = essential_from_pose(t1)?;
    Ok(m.iter()
        .map(|c| match sampson_error(c, &e) {
            Ok(s) => -s / tau,
            Err(_) => f64::NEG_INFINITY,
        })
        .collect())
}

pub fn uniform_minimal_sample(n: usize, rng: &mut impl Rng) -> Result<MinimalSample> {
    if n < MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: n });
    }
    let picked = index::sample(rng, n, MINIMAL_SAMPLE_SIZE);
    MinimalSample::new(std::array::from_fn(|i| picked.index(i)), n)
}

/// Weighted draw of five distinct indices without replacement.
///
/// Uses exponential keys `u^(1/w)` and keeps the five largest. Keys are
/// compared through the monotone map `k ↦ −ln(−ln k)`, i.e.
/// `ln w − ln(−ln u)`, which avoids underflow for tiny weights.
pub fn weighted_minimal_sample(weights: &[f64], rng: &mut impl Rng) -> Result<MinimalSample> {
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::DegenerateInput("sampling weights must be finite and nonnegative"));
    }
    let logs: Vec<f64> = weights.iter().map(|w| w.ln()).collect();
    sample_by_log_weights(&logs, rng)
}

pub(crate) fn sample_by_log_weights(log_weights: &[f64], rng: &mut impl Rng) -> Result<MinimalSample> {
    let n = log_weights.len();
    if n < MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: n });
    }
    if log_weights.iter().filter(|lw| **lw > f64::NEG_INFINITY).count() < MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: n });
    }
    let mut best: [(f64, usize); MINIMAL_SAMPLE_SIZE] = [(f64::NEG_INFINITY, usize::MAX); MINIMAL_SAMPLE_SIZE];
    for (i, &lw) in log_weights.iter().enumerate() {
        // u in (0, 1)
        let u: f64 = loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break u;
            }
        };
        let key = lw - (-u.ln()).ln();
        if key > best[MINIMAL_SAMPLE_SIZE - 1].0 || best[MINIMAL_SAMPLE_SIZE - 1].1 == usize::MAX {
            let mut pos = MINIMAL_SAMPLE_SIZE - 1;
            while pos > 0 && (key > best[pos - 1].0 || best[pos - 1].1 == usize::MAX) {
                best[pos] = best[pos - 1];
                pos -= 1;
            }
            best[pos] = (key, i);
        }
    }
    MinimalSample::new(best.map(|(_, i)| i), n)
}
