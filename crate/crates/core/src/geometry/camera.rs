use std::ops::Deref;

use super::Vec2;
use crate::{Error, Result};

/// Pinhole intrinsics in pixels.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self> {
        let k = Self { fx, fy, cx, cy };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0 && self.fx.is_finite() && self.fy.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        if !(self.cx.is_finite() && self.cy.is_finite()) {
            return Err(Error::InvalidConfig("principal point is not finite".into()));
        }
        Ok(())
    }

    /// Pixel to normalized camera coordinates.
    pub fn normalize(&self, px: &Vec2) -> Vec2 {
        Vec2::new((px.x - self.cx) / self.fx, (px.y - self.cy) / self.fy)
    }

    /// Normalized camera coordinates to pixels.
    pub fn denormalize(&self, n: &Vec2) -> Vec2 {
        Vec2::new(n.x * self.fx + self.cx, n.y * self.fy + self.cy)
    }
}

/// A point match `(p, q)`: `p` in image 1, `q` in image 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub p: Vec2,
    pub q: Vec2,
}

impl Correspondence {
    pub fn new(p: Vec2, q: Vec2) -> Self {
        Self { p, q }
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(self.q.iter()).all(|v| v.is_finite())
    }
}

/// Correspondences in normalized camera coordinates, optionally carrying the
/// pixel coordinates they were computed from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrespondenceSet {
    normalized: Vec<Correspondence>,
    pixels: Option<Vec<Correspondence>>,
}

impl CorrespondenceSet {
    pub fn from_normalized(normalized: Vec<Correspondence>) -> Result<Self> {
        if !normalized.iter().all(Correspondence::is_finite) {
            return Err(Error::DegenerateInput("correspondence has non-finite coordinates"));
        }
        Ok(Self { normalized, pixels: None })
    }

    /// Normalizes pixel matches through `k` and keeps the pixels alongside.
    pub fn from_pixels(pixels: Vec<Correspondence>, k: &CameraIntrinsics) -> Result<Self> {
        if !pixels.iter().all(Correspondence::is_finite) {
            return Err(Error::DegenerateInput("correspondence has non-finite coordinates"));
        }
        let normalized = pixels
            .iter()
            .map(|c| Correspondence::new(k.normalize(&c.p), k.normalize(&c.q)))
            .collect();
        Ok(Self { normalized, pixels: Some(pixels) })
    }

    pub fn pixels(&self) -> Option<&[Correspondence]> {
        self.pixels.as_deref()
    }

    pub fn as_slice(&self) -> &[Correspondence] {
        &self.normalized
    }

    /// Subset by index, keeping pixels when present.
    pub fn select(&self, indices: &[usize]) -> CorrespondenceSet {
        CorrespondenceSet {
            normalized: indices.iter().map(|&i| self.normalized[i]).collect(),
            pixels: self.pixels.as_ref().map(|px| indices.iter().map(|&i| px[i]).collect()),
        }
    }
}

impl Deref for CorrespondenceSet {
    type Target = [Correspondence];

    fn deref(&self) -> &[Correspondence] {
        &self.normalized
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> CameraIntrinsics {
        CameraIntrinsics::new(585.0, 590.0, 320.0, 240.0).unwrap()
    }

    #[test]
    fn principal_point_and_unit_offset() {
        let k = k();
        assert_eq!(k.normalize(&Vec2::new(320.0, 240.0)), Vec2::zeros());
        assert_eq!(k.normalize(&Vec2::new(320.0 + 585.0, 240.0)), Vec2::new(1.0, 0.0));
    }

    #[test]
    fn normalize_roundtrip() {
        let k = k();
        for &(u, v) in &[(0.0, 0.0), (639.5, 479.25), (-12.0, 1000.0), (123.456, 78.9)] {
            let px = Vec2::new(u, v);
            assert!((k.denormalize(&k.normalize(&px)) - px).abs().max() < 1e-12);
        }
    }

    #[test]
    fn invalid_intrinsics() {
        assert!(CameraIntrinsics::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(CameraIntrinsics::new(1.0, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn non_finite_correspondences_rejected() {
        let c = Correspondence::new(Vec2::new(f64::NAN, 0.0), Vec2::zeros());
        assert!(CorrespondenceSet::from_normalized(vec![c]).is_err());
        assert!(CorrespondenceSet::from_normalized(vec![]).unwrap().is_empty());
    }
}
