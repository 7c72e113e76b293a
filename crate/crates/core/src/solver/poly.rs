//! Small polynomial helpers for the five-point solver.
//!
//! Trivariate polynomials in `(x, y, z)` of total degree at most 3 are stored
//! densely. The degree-3 layout follows the column order of the elimination
//! template: x³, y³, x²y, xy², x²z, x², y²z, y², xyz, xy, xz², xz, x, yz², yz,
//! y, z³, z², z, 1.

pub(crate) type Exp = (u8, u8, u8);

/// Linear terms: x, y, z, 1.
pub(crate) const DEG1: [Exp; 4] = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)];

pub(crate) const DEG2: [Exp; 10] = [
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (0, 0, 0),
];

pub(crate) const DEG3: [Exp; 20] = [
    (3, 0, 0),
    (0, 3, 0),
    (2, 1, 0),
    (1, 2, 0),
    (2, 0, 1),
    (2, 0, 0),
    (0, 2, 1),
    (0, 2, 0),
    (1, 1, 1),
    (1, 1, 0),
    (1, 0, 2),
    (1, 0, 1),
    (1, 0, 0),
    (0, 1, 2),
    (0, 1, 1),
    (0, 1, 0),
    (0, 0, 3),
    (0, 0, 2),
    (0, 0, 1),
    (0, 0, 0),
];

const fn add(a: Exp, b: Exp) -> Exp {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2)
}

const fn index_of<const N: usize>(table: &[Exp; N], e: Exp) -> usize {
    let mut i = 0;
    while i < N {
        let t = table[i];
        if t.0 == e.0 && t.1 == e.1 && t.2 == e.2 {
            return i;
        }
        i += 1;
    }
    panic!("monomial not in table");
}

const fn product_table_11() -> [[usize; 4]; 4] {
    let mut out = [[0; 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            out[i][j] = index_of(&DEG2, add(DEG1[i], DEG1[j]));
            j += 1;
        }
        i += 1;
    }
    out
}

const fn product_table_21() -> [[usize; 4]; 10] {
    let mut out = [[0; 4]; 10];
    let mut i = 0;
    while i < 10 {
        let mut j = 0;
        while j < 4 {
            out[i][j] = index_of(&DEG3, add(DEG2[i], DEG1[j]));
            j += 1;
        }
        i += 1;
    }
    out
}

const MUL11: [[usize; 4]; 4] = product_table_11();
const MUL21: [[usize; 4]; 10] = product_table_21();

pub(crate) type P1 = [f64; 4];
pub(crate) type P2 = [f64; 10];
pub(crate) type P3 = [f64; 20];

pub(crate) fn mul11(a: &P1, b: &P1) -> P2 {
    let mut out = [0.0; 10];
    for i in 0..4 {
        for j in 0..4 {
            out[MUL11[i][j]] += a[i] * b[j];
        }
    }
    out
}

pub(crate) fn mul21(a: &P2, b: &P1) -> P3 {
    let mut out = [0.0; 20];
    for i in 0..10 {
        for j in 0..4 {
            out[MUL21[i][j]] += a[i] * b[j];
        }
    }
    out
}

pub(crate) fn add_scaled<const N: usize>(acc: &mut [f64; N], a: &[f64; N], s: f64) {
    for (o, v) in acc.iter_mut().zip(a) {
        *o += s * v;
    }
}

/// Univariate polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0.0) - other.0.get(i).copied().unwrap_or(0.0))
            .collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0))
            .collect())
    }

    /// Multiplies by `z`.
    pub fn shift(&self) -> Poly {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.0);
        Poly(v)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }

    pub fn eval_with_derivative(&self, z: f64) -> (f64, f64) {
        self.0.iter().rev().fold((0.0, 0.0), |(p, dp), c| (p * z + c, dp * z + p))
    }
}
