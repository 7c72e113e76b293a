use super::{homogeneous, triangulate, Correspondence, Mat3, Pose6DoF, RotationMatrix, Vec3};
use crate::constants::{ESSENTIAL_TOL, MIN_NORM, SAMPSON_DENOM_MIN};
use crate::{Error, Result};

/// A calibrated epipolar hypothesis, defined up to scale.
///
/// Invariants: `σ₃/σ₁ < 1e-6` and `(σ₁ − σ₂)/σ₁ < 1e-6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialMatrix(Mat3);

impl EssentialMatrix {
    /// Checks the singular value conditions. Scale and sign are kept.
    pub fn new(m: Mat3) -> Result<Self> {
        let e = Self::normalized(m)?;
        let s = e.0.singular_values();
        let (s1, s2, s3) = sorted3(s[0], s[1], s[2]);
        if s3 / s1 >= ESSENTIAL_TOL || (s1 - s2) / s1 >= ESSENTIAL_TOL {
            return Err(Error::DegenerateInput("matrix is not an essential matrix"));
        }
        Ok(Self(m))
    }

    /// Closest essential matrix in Frobenius norm: singular values are
    /// replaced by `(s, s, 0)` with `s = (σ₁ + σ₂)/2`.
    pub fn project(m: Mat3) -> Result<Self> {
        let m = Self::normalized(m)?.0;
        let svd = m.svd(true, true);
        let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
        let s = 0.5 * (svd.singular_values[0] + svd.singular_values[1]);
        if !(s > MIN_NORM) {
            return Err(Error::DegenerateInput("matrix has rank below two"));
        }
        let projected = u * Mat3::from_diagonal(&Vec3::new(s, s, 0.0)) * v_t;
        Ok(Self::normalized(projected)?)
    }

    fn normalized(m: Mat3) -> Result<Self> {
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateInput("essential matrix has non-finite entries"));
        }
        let n = m.norm();
        if !(n > MIN_NORM) {
            return Err(Error::DegenerateInput("essential matrix is zero"));
        }
        Ok(Self(m / n))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// Same hypothesis scaled to unit Frobenius norm.
    pub fn to_unit(&self) -> EssentialMatrix {
        Self(self.0 / self.0.norm())
    }
}

fn sorted3(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let mut v = [a, b, c];
    v.sort_by(|x, y| y.total_cmp(x));
    (v[0], v[1], v[2])
}

/// `[v]×`, the cross-product matrix.
pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// `E = [t̂]× R` with `t̂ = t/‖t‖`.
pub fn essential_from_pose(pose: &Pose6DoF) -> Result<EssentialMatrix> {
    let n = pose.translation.norm();
    if !(n > MIN_NORM) {
        return Err(Error::DegenerateInput("pose translation is zero"));
    }
    let t = pose.translation / n;
    Ok(EssentialMatrix(skew(&t) * pose.rotation.matrix()))
}

/// Algebraic epipolar residual `q̂ᵀ E p̂`.
pub fn epipolar_residual(c: &Correspondence, e: &EssentialMatrix) -> f64 {
    homogeneous(&c.q).dot(&(e.0 * homogeneous(&c.p)))
}

/// Squared first-order (Sampson) error in normalized coordinates:
/// `(q̂ᵀEp̂)² / ((Ep̂)₁² + (Ep̂)₂² + (Eᵀq̂)₁² + (Eᵀq̂)₂²)`.
pub fn sampson_error(c: &Correspondence, e: &EssentialMatrix) -> Result<f64> {
    let p = homogeneous(&c.p);
    let q = homogeneous(&c.q);
    let ep = e.0 * p;
    let etq = e.0.tr_mul(&q);
    let num = q.dot(&ep);
    let den = ep.x * ep.x + ep.y * ep.y + etq.x * etq.x + etq.y * etq.y;
    if !(den >= SAMPSON_DENOM_MIN) {
        return Err(Error::DegenerateInput("Sampson denominator vanishes"));
    }
    Ok(num * num / den)
}

/// Sign- and scale-invariant Frobenius distance, computed after normalizing
/// both matrices to unit norm.
pub fn essential_distance(a: &EssentialMatrix, b: &EssentialMatrix) -> f64 {
    let (a, b) = (a.to_unit().0, b.to_unit().0);
    (a - b).norm().min((a + b).norm())
}

/// The four decompositions `(R₁, +t), (R₁, −t), (R₂, +t), (R₂, −t)` of `e`,
/// translations scaled to `‖t‖ = scale`.
pub fn candidate_transforms(e: &EssentialMatrix, scale: f64) -> Result<[Pose6DoF; 4]> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::DegenerateInput("candidate scale must be positive"));
    }
    let svd = e.0.svd(true, true);
    let mut u = svd.u.ok_or(Error::DegenerateInput("SVD failed"))?;
    let mut v_t = svd.v_t.ok_or(Error::DegenerateInput("SVD failed"))?;
    if u.determinant() < 0.0 {
        u = -u;
    }
    if v_t.determinant() < 0.0 {
        v_t = -v_t;
    }
    let w = Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    let r1 = RotationMatrix::new_unchecked(u * w * v_t);
    let r2 = RotationMatrix::new_unchecked(u * w.transpose() * v_t);
    let t: Vec3 = u.column(2) * scale;
    let pose = |rotation, translation| Pose6DoF { rotation, translation };
    Ok([pose(r1, t), pose(r1, -t), pose(r2, t), pose(r2, -t)])
}

/// Picks the decomposition candidate placing the most correspondences in
/// front of both cameras. Returned translation has unit norm.
pub fn decompose_essential(e: &EssentialMatrix, m: &[Correspondence]) -> Result<Pose6DoF> {
    if m.is_empty() {
        return Err(Error::TooFewCorrespondences { needed: 1, got: 0 });
    }
    let candidates = candidate_transforms(e, 1.0)?;
    let counts = candidates.map(|pose| {
        m.iter()
            .filter(|c| {
                triangulate(c, &pose).is_ok_and(|tr| tr.depth1 > 0.0 && tr.depth2 > 0.0)
            })
            .count()
    });
    let best = *counts.iter().max().unwrap();
    let mut winners = (0..4).filter(|&i| counts[i] == best);
    let first = winners.next().unwrap();
    if winners.next().is_some() {
        return Err(Error::ChiralityAmbiguous);
    }
    Ok(candidates[first])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geodesic_rotation_error, translation_errors, Vec2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rotation(rng: &mut impl Rng, max_angle: f64) -> RotationMatrix {
        let axis = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        RotationMatrix::from_axis_angle(&axis, rng.random_range(0.0..max_angle)).unwrap()
    }

    /// Points in front of both cameras, projected to normalized coordinates.
    fn scene(pose: &Pose6DoF, n: usize, rng: &mut impl Rng) -> Vec<Correspondence> {
        let mut out = Vec::new();
        while out.len() < n {
            let x = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(2.0..8.0));
            let x2 = pose.transform_point(&x);
            if x2.z > 0.5 {
                out.push(Correspondence::new(Vec2::new(x.x / x.z, x.y / x.z), Vec2::new(x2.x / x2.z, x2.y / x2.z)));
            }
        }
        out
    }

    #[test]
    fn cross_product_matrix_examples() {
        let e = essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), Vec3::x()).unwrap()).unwrap();
        assert_eq!(*e.matrix(), Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0));
        let e = essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), Vec3::z()).unwrap()).unwrap();
        assert_eq!(*e.matrix(), Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_translation_is_degenerate() {
        let pose = Pose6DoF::new(RotationMatrix::identity(), Vec3::zeros()).unwrap();
        assert!(matches!(essential_from_pose(&pose), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn epipolar_identity_on_projected_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pose = Pose6DoF::new(random_rotation(&mut rng, 1.0), Vec3::new(0.7, -0.2, 0.3)).unwrap();
            let e = essential_from_pose(&pose).unwrap();
            let worst = scene(&pose, 50, &mut rng)
                .iter()
                .map(|c| epipolar_residual(c, &e).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-10, "{worst}");
        }
    }

    #[test]
    fn sampson_examples() {
        let e = essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), Vec3::x()).unwrap()).unwrap();
        // numerator 0.01, denominator 2
        let c = Correspondence::new(Vec2::zeros(), Vec2::new(0.0, 0.1));
        assert!((sampson_error(&c, &e).unwrap() - 5.0e-3).abs() < 1e-15);
        // pure translation, p = q
        let t = Vec3::new(0.3, -0.4, 0.8);
        let e = essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), t).unwrap()).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.0, 0.0)] {
            let c = Correspondence::new(Vec2::new(x, y), Vec2::new(x, y));
            assert!(sampson_error(&c, &e).unwrap() < 1e-30);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pose = Pose6DoF::new(random_rotation(&mut rng, 1.0), Vec3::new(0.2, 0.1, -1.0)).unwrap();
        let e = essential_from_pose(&pose).unwrap();
        for c in scene(&pose, 50, &mut rng) {
            assert!(sampson_error(&c, &e).unwrap() < 1e-20);
        }
    }

    #[test]
    fn sampson_rejects_vanishing_denominator() {
        // E = [z]×: Ep̂ = (-p_y, p_x, 0) vanishes at p = 0 and q = 0
        let e = essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), Vec3::z()).unwrap()).unwrap();
        let c = Correspondence::new(Vec2::zeros(), Vec2::zeros());
        assert!(sampson_error(&c, &e).is_err());
    }

    #[test]
    fn essential_invariants_checked() {
        assert!(EssentialMatrix::new(Mat3::identity()).is_err());
        assert!(EssentialMatrix::new(Mat3::zeros()).is_err());
        let e = EssentialMatrix::project(Mat3::new(1.0, 0.2, 0.0, 0.1, 2.0, 0.3, 0.0, 0.1, 0.5)).unwrap();
        assert!(EssentialMatrix::new(*e.matrix()).is_ok());
    }

    #[test]
    fn decompose_recovers_sideways_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pose = Pose6DoF::new(RotationMatrix::identity(), Vec3::x()).unwrap();
        let m = scene(&pose, 20, &mut rng);
        let e = essential_from_pose(&pose).unwrap();
        let got = decompose_essential(&e, &m).unwrap();
        assert!(geodesic_rotation_error(&got.rotation, &pose.rotation) < 1e-6);
        assert!(translation_errors(&got.translation, &pose.translation).1 < 1e-6);
        assert!((got.translation.norm() - 1.0).abs() < 1e-12);

        let neg = EssentialMatrix::new(-*e.matrix()).unwrap();
        let got_neg = decompose_essential(&neg, &m).unwrap();
        assert!(geodesic_rotation_error(&got_neg.rotation, &got.rotation) < 1e-9);
        assert!((got_neg.translation - got.translation).norm() < 1e-9);
    }

    #[test]
    fn mirrored_scene_flips_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pose = Pose6DoF::new(random_rotation(&mut rng, 0.5), Vec3::new(0.5, 0.1, 0.2)).unwrap();
        let mirrored = Pose6DoF::new(pose.rotation, -pose.translation).unwrap();
        // E(R, t) and E(R, −t) agree up to sign; the scene decides the sign of t.
        let e = essential_from_pose(&pose).unwrap();
        let got = decompose_essential(&e, &scene(&mirrored, 30, &mut rng)).unwrap();
        assert!(translation_errors(&got.translation, &mirrored.translation).1 < 1e-6);
        assert!(geodesic_rotation_error(&got.rotation, &pose.rotation) < 1e-6);
    }

    #[test]
    fn candidates_contain_pose_and_respect_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pose = Pose6DoF::new(random_rotation(&mut rng, 3.0), Vec3::new(rng.random_range(-2.0..2.0), 1.5, -0.3)).unwrap();
            let e = essential_from_pose(&pose).unwrap();
            let scale = pose.translation.norm();
            let cands = candidate_transforms(&e, scale).unwrap();
            assert_eq!(cands.len(), 4);
            assert!(cands.iter().all(|c| RotationMatrix::new(*c.rotation.matrix()).is_ok()));
            assert!(cands.iter().any(|c| {
                geodesic_rotation_error(&c.rotation, &pose.rotation) < 1e-6
                    && (c.translation - pose.translation).norm() < 1e-6
            }));
            for c in candidate_transforms(&e, 2.0).unwrap() {
                assert!((c.translation.norm() - 2.0).abs() < 1e-12);
            }
        }
        assert!(candidate_transforms(&essential_from_pose(&Pose6DoF::new(RotationMatrix::identity(), Vec3::x()).unwrap()).unwrap(), 0.0).is_err());
    }

    #[test]
    fn ambiguous_chirality_is_reported() {
        // A single correspondence at the epipole direction is in front for no candidate.
        let pose = Pose6DoF::new(RotationMatrix::identity(), Vec3::x()).unwrap();
        let e = essential_from_pose(&pose).unwrap();
        let c = Correspondence::new(Vec2::new(0.1, 0.1), Vec2::new(0.1, 0.1));
        assert!(matches!(decompose_essential(&e, &[c]), Err(Error::ChiralityAmbiguous)));
        assert!(matches!(decompose_essential(&e, &[]), Err(Error::TooFewCorrespondences { .. })));
    }
}
