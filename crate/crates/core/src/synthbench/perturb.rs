use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::SceneConfig;
use crate::geometry::{Correspondence, CorrespondenceSet, Vec2};
use crate::{Error, Result};

/// Pixel noise and outlier replacement applied to exact correspondences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub noise_std_px: f64,
    pub outlier_prob: f64,
}

impl PerturbationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_std_px >= 0.0 && self.noise_std_px.is_finite()) {
            return Err(Error::InvalidConfig(format!("noise_std_px must be nonnegative, got {}", self.noise_std_px)));
        }
        if !(0.0..=1.0).contains(&self.outlier_prob) {
            return Err(Error::InvalidConfig(format!("outlier_prob must lie in [0, 1], got {}", self.outlier_prob)));
        }
        Ok(())
    }
}

/// Perturbed correspondences and which of them were replaced.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub correspondences: CorrespondenceSet,
    pub outlier: Vec<bool>,
}

/// Independently per correspondence: with probability `outlier_prob` both
/// endpoints are redrawn uniformly over the image, otherwise each pixel
/// coordinate gets Gaussian noise.
///
/// Every correspondence consumes the same draws whatever the branch, so runs
/// with the same stream and different settings share their randomness.
pub fn perturb(m: &CorrespondenceSet, cfg: &PerturbationConfig, scene: &SceneConfig, rng: &mut impl Rng) -> Result<Perturbed> {
    cfg.validate()?;
    let pixels = m.pixels().ok_or(Error::MissingInput("pixel coordinates"))?;
    let mut out = Vec::with_capacity(pixels.len());
    let mut outlier = Vec::with_capacity(pixels.len());
    for c in pixels {
        let u: f64 = rng.random();
        let (p_rand, q_rand) = (scene.random_pixel(rng), scene.random_pixel(rng));
        let noise: [f64; 4] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
        let replaced = u < cfg.outlier_prob;
        outlier.push(replaced);
        out.push(if replaced {
            Correspondence::new(p_rand, q_rand)
        } else if cfg.noise_std_px == 0.0 {
            *c
        } else {
            let s = cfg.noise_std_px;
            Correspondence::new(c.p + Vec2::new(noise[0], noise[1]) * s, c.q + Vec2::new(noise[2], noise[3]) * s)
        });
    }
    Ok(Perturbed {
        correspondences: CorrespondenceSet::from_pixels(out, &scene.intrinsics)?,
        outlier,
    })
}
