//! Five-point minimal solver for the essential matrix.
//!
//! The four-dimensional null space of the epipolar constraints is
//! parameterized as `E = xX + yY + zZ + W`. The cubic constraints
//! `det E = 0` and `2EEᵀE − tr(EEᵀ)E = 0` give ten equations in twenty
//! monomials; Gauss–Jordan elimination and hiding `z` reduce them to a 3×3
//! polynomial matrix whose determinant is a degree-10 polynomial in `z`.
//! Real roots come from the eigenvalues of its companion matrix.

use nalgebra::{DMatrix, SMatrix, SVector};

use super::poly::{add_scaled, mul11, mul21, Poly, DEG3, P1, P2, P3};
use crate::constants::{MINIMAL_RESIDUAL_TOL, MINIMAL_SAMPLE_SIZE, REAL_ROOT_TOL};
use crate::geometry::{epipolar_residual, Correspondence, EssentialMatrix, Mat3, Vec3};
use crate::{Error, Result};

/// Rank threshold on the 5×9 constraint matrix, relative to its largest
/// singular value.
const RANK_TOL: f64 = 1e-10;

const REFINE_STEPS: usize = 5;

/// Solves for all essential matrices consistent with exactly five
/// correspondences in normalized coordinates.
///
/// Degenerate samples (repeated points, rank-deficient constraints, no real
/// roots) yield an empty list. Solutions are sorted by ascending sum of
/// squared epipolar residuals over the sample, then lexicographically by
/// entries.
pub fn five_point(m: &[Correspondence]) -> Result<Vec<EssentialMatrix>> {
    if m.len() != MINIMAL_SAMPLE_SIZE {
        return Err(Error::TooFewCorrespondences { needed: MINIMAL_SAMPLE_SIZE, got: m.len() });
    }
    if !m.iter().all(Correspondence::is_finite) {
        return Err(Error::DegenerateInput("correspondence has non-finite coordinates"));
    }
    let Some(basis) = null_space(m) else {
        return Ok(Vec::new());
    };
    let constraints = constraint_matrix(&basis);
    let Some(action) = eliminate(&constraints) else {
        return Ok(Vec::new());
    };

    let (b, det) = hidden_variable_matrix(&action);
    let mut out: Vec<(f64, EssentialMatrix)> = Vec::new();
    for z in real_roots(&det) {
        let bz = Mat3::from_fn(|r, c| b[r][c].eval(z));
        let Some((x, y)) = solve_xy(&bz) else {
            continue;
        };
        let (x, y, z) = refine(&constraints, x, y, z);
        let e = basis[0] * x + basis[1] * y + basis[2] * z + basis[3];
        let Ok(e) = EssentialMatrix::new(e).map(|e| e.to_unit()) else {
            continue;
        };
        let residuals: Vec<f64> = m.iter().map(|c| epipolar_residual(c, &e)).collect();
        if residuals.iter().any(|r| !(r.abs() < MINIMAL_RESIDUAL_TOL)) {
            continue;
        }
        out.push((residuals.iter().map(|r| r * r).sum(), e));
    }
    out.sort_by(|(ra, ea), (rb, eb)| {
        ra.total_cmp(rb).then_with(|| {
            let (a, b) = (ea.matrix(), eb.matrix());
            (0..9)
                .map(|i| a[(i / 3, i % 3)].total_cmp(&b[(i / 3, i % 3)]))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

/// Orthonormal basis `[X, Y, Z, W]` of the solutions of `q̂ᵀEp̂ = 0`.
fn null_space(m: &[Correspondence]) -> Option<[Mat3; 4]> {
    let mut a = SMatrix::<f64, 9, 9>::zeros();
    for (row, c) in m.iter().enumerate() {
        let p = Vec3::new(c.p.x, c.p.y, 1.0);
        let q = Vec3::new(c.q.x, c.q.y, 1.0);
        for i in 0..3 {
            for j in 0..3 {
                a[(row, 3 * i + j)] = q[i] * p[j];
            }
        }
    }
    let svd = a.svd(false, true);
    let s = &svd.singular_values;
    if !(s[4] > RANK_TOL * s[0]) {
        return None;
    }
    let v_t = svd.v_t?;
    Some(std::array::from_fn(|k| {
        let row = v_t.row(5 + k);
        Mat3::from_fn(|i, j| row[3 * i + j])
    }))
}

/// 10×20 coefficient matrix of the cubic essential constraints.
fn constraint_matrix(basis: &[Mat3; 4]) -> SMatrix<f64, 10, 20> {
    let e: [[P1; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| [basis[0][(i, j)], basis[1][(i, j)], basis[2][(i, j)], basis[3][(i, j)]])
    });

    let mut rows: Vec<P3> = Vec::with_capacity(10);

    let minor = |a: (usize, usize), b: (usize, usize), c: (usize, usize), d: (usize, usize)| {
        let mut m = mul11(&e[a.0][a.1], &e[b.0][b.1]);
        add_scaled(&mut m, &mul11(&e[c.0][c.1], &e[d.0][d.1]), -1.0);
        m
    };
    let mut det = mul21(&minor((1, 1), (2, 2), (1, 2), (2, 1)), &e[0][0]);
    add_scaled(&mut det, &mul21(&minor((1, 0), (2, 2), (1, 2), (2, 0)), &e[0][1]), -1.0);
    add_scaled(&mut det, &mul21(&minor((1, 0), (2, 1), (1, 1), (2, 0)), &e[0][2]), 1.0);
    rows.push(det);

    let eet: [[P2; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = [0.0; 10];
            for k in 0..3 {
                add_scaled(&mut acc, &mul11(&e[i][k], &e[j][k]), 1.0);
            }
            acc
        })
    });
    let mut trace = [0.0; 10];
    for (i, row) in eet.iter().enumerate() {
        add_scaled(&mut trace, &row[i], 1.0);
    }
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = mul21(&trace, &e[i][j]);
            for v in acc.iter_mut() {
                *v = -*v;
            }
            for k in 0..3 {
                add_scaled(&mut acc, &mul21(&eet[i][k], &e[k][j]), 2.0);
            }
            rows.push(acc);
        }
    }

    SMatrix::<f64, 10, 20>::from_fn(|r, c| rows[r][c])
}

/// Gauss–Jordan elimination on the first ten columns with partial pivoting.
/// Returns the trailing 10×10 block, or `None` if a pivot vanishes.
fn eliminate(m: &SMatrix<f64, 10, 20>) -> Option<SMatrix<f64, 10, 10>> {
    let mut a = *m;
    let scale = a.amax();
    if !(scale > 0.0) {
        return None;
    }
    for col in 0..10 {
        let (pivot, value) = (col..10)
            .map(|r| (r, a[(r, col)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if !(value > 1e-12 * scale) {
            return None;
        }
        a.swap_rows(col, pivot);
        let inv = 1.0 / a[(col, col)];
        for c in col..20 {
            a[(col, c)] *= inv;
        }
        for r in 0..10 {
            if r != col {
                let f = a[(r, col)];
                if f != 0.0 {
                    for c in col..20 {
                        a[(r, c)] -= f * a[(col, c)];
                    }
                }
            }
        }
    }
    Some(a.fixed_view::<10, 10>(0, 10).into_owned())
}

/// Builds the 3×3 matrix `B(z)` with `B(z)·(x, y, 1)ᵀ = 0` and its
/// determinant.
///
/// Rows of the reduced system with leading monomials x²z, x², y²z, y², xyz and
/// xy are paired so that `row(·z) − z·row(·)` cancels the leading term.
fn hidden_variable_matrix(r: &SMatrix<f64, 10, 10>) -> ([[Poly; 3]; 3], Poly) {
    // Trailing columns: xz², xz, x, yz², yz, y, z³, z², z, 1.
    let parts = |row: usize| {
        let c = |k: usize| r[(row, k)];
        (
            Poly(vec![c(2), c(1), c(0)]),
            Poly(vec![c(5), c(4), c(3)]),
            Poly(vec![c(9), c(8), c(7), c(6)]),
        )
    };
    let reduce = |with_z: usize, without_z: usize| {
        let (ax, ay, a1) = parts(with_z);
        let (bx, by, b1) = parts(without_z);
        [ax.sub(&bx.shift()), ay.sub(&by.shift()), a1.sub(&b1.shift())]
    };
    let b = [reduce(4, 5), reduce(6, 7), reduce(8, 9)];
    let cof = |i: usize, j: usize, k: usize, l: usize| b[1][i].mul(&b[2][j]).sub(&b[1][k].mul(&b[2][l]));
    let det = b[0][0]
        .mul(&cof(1, 2, 2, 1))
        .sub(&b[0][1].mul(&cof(0, 2, 2, 0)))
        .add(&b[0][2].mul(&cof(0, 1, 1, 0)));
    (b, det)
}

/// One Newton step on `p` from `z`, kept only if it shrinks `|p|`.
fn polish(p: &Poly, z: f64) -> f64 {
    let (value, slope) = p.eval_with_derivative(z);
    if slope == 0.0 {
        return z;
    }
    let next = z - value / slope;
    if p.eval(next).abs() < value.abs() {
        next
    } else {
        z
    }
}

/// Real roots of `p` from companion-matrix eigenvalues, Newton-polished.
fn real_roots(p: &Poly) -> Vec<f64> {
    let scale = p.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return Vec::new();
    }
    let mut coeffs: Vec<f64> = p.0.iter().map(|c| c / scale).collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() < 1e-14) {
        coeffs.pop();
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let poly = Poly(coeffs);
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < REAL_ROOT_TOL * (1.0 + z.re.abs()))
        .map(|z| polish(&poly, z.re))
        .collect()
}

fn monomials(x: f64, y: f64, z: f64) -> SVector<f64, 20> {
    SVector::<f64, 20>::from_fn(|k, _| {
        let (a, b, c) = DEG3[k];
        x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32)
    })
}

fn monomial_jacobian(x: f64, y: f64, z: f64) -> SMatrix<f64, 20, 3> {
    let d = |v: f64, e: u8| if e == 0 { 0.0 } else { e as f64 * v.powi(e as i32 - 1) };
    SMatrix::<f64, 20, 3>::from_fn(|k, j| {
        let (a, b, c) = DEG3[k];
        let (px, py, pz) = (x.powi(a as i32), y.powi(b as i32), z.powi(c as i32));
        match j {
            0 => d(x, a) * py * pz,
            1 => px * d(y, b) * pz,
            _ => px * py * d(z, c),
        }
    })
}

/// Gauss–Newton on the ten cubic constraints in `(x, y, z)`.
///
/// The eliminated univariate polynomial inherits rounding from the
/// elimination, so roots of tight clusters can be off by 1e-4 even after
/// polishing on it; refining against the original constraints removes that
/// error.
fn refine(constraints: &SMatrix<f64, 10, 20>, x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let mut v = Vec3::new(x, y, z);
    let mut residual = constraints * monomials(v.x, v.y, v.z);
    for _ in 0..REFINE_STEPS {
        let jac = constraints * monomial_jacobian(v.x, v.y, v.z);
        let Some(step) = (jac.transpose() * jac).lu().solve(&(jac.transpose() * residual)) else {
            break;
        };
        let next = v - step;
        let r = constraints * monomials(next.x, next.y, next.z);
        if !(r.norm() < residual.norm()) {
            break;
        }
        (v, residual) = (next, r);
    }
    (v.x, v.y, v.z)
}

/// `(x, y)` from the null vector of `B(z)`, taken as the best-conditioned
/// cross product of two rows.
fn solve_xy(bz: &Mat3) -> Option<(f64, f64)> {
    let rows = [bz.row(0).transpose(), bz.row(1).transpose(), bz.row(2).transpose()];
    let v = [rows[0].cross(&rows[1]), rows[0].cross(&rows[2]), rows[1].cross(&rows[2])]
        .into_iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if !(v.z.abs() > 1e-14 * v.norm()) {
        return None;
    }
    Some((v.x / v.z, v.y / v.z))
}
