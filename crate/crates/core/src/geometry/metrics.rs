use super::{RotationMatrix, Vec3};
use crate::constants::MIN_NORM;

/// Geodesic distance between two rotations, in degrees within `[0, 180]`.
///
/// Evaluated as `atan2(sin θ, cos θ)` on `R_aᵀ R_b`, which equals
/// `arccos((tr − 1)/2)` but keeps full precision near 0° and 180°.
pub fn geodesic_rotation_error(ra: &RotationMatrix, rb: &RotationMatrix) -> f64 {
    ra.transpose().compose(rb).angle().to_degrees()
}

/// `(‖t_pred − t_gt‖, angle between directions in degrees)`. The angle is 0
/// when either vector is shorter than 1e-12.
pub fn translation_errors(t_pred: &Vec3, t_gt: &Vec3) -> (f64, f64) {
    let euclidean = (t_pred - t_gt).norm();
    if t_pred.norm() < MIN_NORM || t_gt.norm() < MIN_NORM {
        return (euclidean, 0.0);
    }
    let angle = t_pred.cross(t_gt).norm().atan2(t_pred.dot(t_gt)).to_degrees();
    (euclidean, angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Quaternion, UnitQuaternion};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_axis(rng: &mut impl Rng) -> Vec3 {
        Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    #[test]
    fn basic_values() {
        let r = RotationMatrix::from_axis_angle(&Vec3::new(1.0, 1.0, 0.0), 0.7).unwrap();
        assert_eq!(geodesic_rotation_error(&r, &r), 0.0);
        let z90 = RotationMatrix::from_axis_angle(&Vec3::z(), std::f64::consts::FRAC_PI_2).unwrap();
        assert!((geodesic_rotation_error(&RotationMatrix::identity(), &z90) - 90.0).abs() < 1e-12);
    }

    /// Independent route: compose unit quaternions by hand and read the angle
    /// from the scalar part.
    fn quat_angle_deg(q: &Quaternion<f64>) -> f64 {
        let v = q.imag().norm();
        (2.0 * v.atan2(q.w.abs())).to_degrees()
    }

    #[test]
    fn matches_quaternion_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let (ax1, an1) = (random_axis(&mut rng), rng.random_range(0.0..3.1));
            let (ax2, an2) = (random_axis(&mut rng), rng.random_range(0.0..3.1));
            let half = |ax: &Vec3, an: f64| {
                let a = ax.normalize() * (an / 2.0).sin();
                Quaternion::new((an / 2.0).cos(), a.x, a.y, a.z)
            };
            let (q1, q2) = (half(&ax1, an1), half(&ax2, an2));
            // relative rotation q1⁻¹ q2
            let rel = q1.conjugate() * q2;
            let oracle = quat_angle_deg(&rel);
            let r1 = RotationMatrix::new(*UnitQuaternion::from_quaternion(q1).to_rotation_matrix().matrix()).unwrap();
            let r2 = RotationMatrix::new(*UnitQuaternion::from_quaternion(q2).to_rotation_matrix().matrix()).unwrap();
            let got = geodesic_rotation_error(&r1, &r2);
            assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
        }
    }

    #[test]
    fn symmetric_and_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut rot = || RotationMatrix::from_axis_angle(&random_axis(&mut rng), rng.random_range(0.0..3.14)).unwrap();
        for _ in 0..300 {
            let (a, b, c) = (rot(), rot(), rot());
            let ab = geodesic_rotation_error(&a, &b);
            assert!((ab - geodesic_rotation_error(&b, &a)).abs() < 1e-9);
            let ac = geodesic_rotation_error(&a, &c);
            let cb = geodesic_rotation_error(&c, &b);
            assert!(ab <= ac + cb + 1e-9);
            assert!((0.0..=180.0).contains(&ab));
        }
    }

    #[test]
    fn translation_examples() {
        let t = Vec3::new(0.6, 0.0, 0.8);
        assert_eq!(translation_errors(&t, &t), (0.0, 0.0));
        let (e, a) = translation_errors(&(t * 2.0), &t);
        assert!((e - 1.0).abs() < 1e-15 && a.abs() < 1e-12);
        assert_eq!(translation_errors(&Vec3::zeros(), &t).1, 0.0);
    }

    #[test]
    fn translation_matches_dot_product_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let a = random_axis(&mut rng) * 3.0;
            let b = random_axis(&mut rng) * 3.0;
            let cos = (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0);
            let oracle = cos.acos().to_degrees();
            let (e, ang) = translation_errors(&a, &b);
            let d = a - b;
            assert!((e - (d.x * d.x + d.y * d.y + d.z * d.z).sqrt()).abs() < 1e-12);
            // acos loses precision near 0° and 180°
            if cos.abs() < 0.999 {
                assert!((ang - oracle).abs() < 1e-9);
            }
        }
    }
}
