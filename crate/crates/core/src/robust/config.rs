use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of the hypothesis search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobustConfig {
    /// Minimal samples drawn; there is no early stopping.
    pub iterations: usize,
    /// Inlier threshold on the squared Sampson error, normalized coordinates.
    pub sigma: f64,
    /// Weight of the prior log-likelihood term.
    pub alpha: f64,
    /// Temperature of the agreement weights, squared-Sampson units.
    pub tau: f64,
    /// Fraction of iterations that use agreement-weighted sampling.
    pub biased_fraction: f64,
    /// Half-width of the prior lattice, meters.
    pub grid_extent: f64,
    pub grid_per_axis: usize,
    pub seed: u64,
    /// Refit the winner on its inliers with the eight-point solver.
    pub refit: bool,
}

impl Default for RobustConfig {
    fn default() -> Self {
        Self {
            iterations: 2000,
            sigma: 3e-7,
            alpha: 3.33,
            tau: 0.1,
            biased_fraction: 0.5,
            grid_extent: 3.0,
            grid_per_axis: 3,
            seed: 0,
            refit: false,
        }
    }
}

impl RobustConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.iterations < 1 {
            return fail("iterations must be at least 1".into());
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return fail(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return fail(format!("tau must be positive, got {}", self.tau));
        }
        if !self.alpha.is_finite() {
            return fail("alpha must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.biased_fraction) {
            return fail(format!("biased_fraction must lie in [0, 1], got {}", self.biased_fraction));
        }
        if !(self.grid_extent > 0.0 && self.grid_extent.is_finite()) {
            return fail(format!("grid_extent must be positive, got {}", self.grid_extent));
        }
        if self.grid_per_axis < 2 {
            return fail(format!("grid_per_axis must be at least 2, got {}", self.grid_per_axis));
        }
        Ok(())
    }

    /// Whether iteration `i` draws its sample with agreement weights.
    ///
    /// Biased iterations are spread evenly: iteration `i` is biased when
    /// `⌊(i+1)f⌋ > ⌊if⌋`. For `f = 0.5` this is every odd iteration.
    pub fn is_biased_iteration(&self, i: usize) -> bool {
        let f = self.biased_fraction;
        ((i + 1) as f64 * f).floor() > (i as f64 * f).floor()
    }
}
