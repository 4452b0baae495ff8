//! Small dense linear algebra for the q×q and q×(q−1) systems used here.
//!
//! Everything is row-major `f64`. Sizes are tiny (q is the alphabet size),
//! so clarity wins over blocking or SIMD.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a least-squares column counts as
/// linearly dependent.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(alloc::format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `M x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Mᵀ x`, i.e. the row vector `xᵀ M` as a column.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &mij) in out.iter_mut().zip(self.row(i)) {
                *o += xi * mij;
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    /// Row sums, `M σ` with σ the all-ones vector.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Induced 1-norm: largest absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().copied()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn normalize_l1(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Left Perron vector of an entrywise-positive matrix by power iteration:
/// `v ← Mᵀv / ‖Mᵀv‖₁`, starting from uniform, until successive iterates
/// differ by at most `tol` in L1.
pub fn left_perron_vector(m: &Matrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let mut next = m.tr_mul_vec(&v);
        normalize_l1(&mut next);
        let diff = l1_distance(&next, &v);
        v = next;
        if diff <= tol {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        routine: "left Perron power iteration",
        iterations: max_iter,
    })
}

/// Householder QR factorization of a tall matrix, kept in factored form.
#[derive(Debug, Clone)]
pub struct Qr {
    r: Matrix,
    reflectors: Vec<(Vec<f64>, f64)>,
}

impl Qr {
    /// Factors `a` (rows ≥ cols). Fails with `RankDeficient` when a pivot
    /// falls below `RANK_TOL` relative to the largest one.
    pub fn new(a: &Matrix) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::ShapeMismatch(alloc::format!(
                "least squares needs rows >= cols, got {m}x{n}"
            )));
        }
        let mut r = a.clone();
        let mut reflectors = Vec::with_capacity(n);
        for k in 0..n {
            let norm = libm::sqrt((k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>());
            let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
            v[0] -= alpha;
            let vv = dot(&v, &v);
            if vv > 0.0 {
                for j in k..n {
                    let s: f64 = v.iter().enumerate().map(|(i, vi)| vi * r[(k + i, j)]).sum();
                    let f = 2.0 * s / vv;
                    for (i, vi) in v.iter().enumerate() {
                        r[(k + i, j)] -= f * vi;
                    }
                }
            }
            reflectors.push((v, vv));
        }
        let max_pivot = (0..n).map(|k| r[(k, k)].abs()).fold(0.0, f64::max);
        for k in 0..n {
            if max_pivot == 0.0 || r[(k, k)].abs() <= RANK_TOL * max_pivot {
                return Err(Error::RankDeficient { column: k });
            }
        }
        Ok(Qr { r, reflectors })
    }

    /// Minimizer of `‖A x − b‖₂`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.r.cols();
        let mut y = b.to_vec();
        for (k, (v, vv)) in self.reflectors.iter().enumerate() {
            if *vv == 0.0 {
                continue;
            }
            let s: f64 = v.iter().zip(&y[k..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * s / vv;
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= f * vi;
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..n {
                s -= self.r[(k, j)] * x[j];
            }
            x[k] = s / self.r[(k, k)];
        }
        x
    }
}

pub fn least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::ShapeMismatch(alloc::format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            a.rows()
        )));
    }
    Ok(Qr::new(a)?.solve(b))
}

/// Moore–Penrose pseudo-inverse of a full-column-rank matrix, built column
/// by column from least-squares solves against the unit vectors.
pub fn pseudo_inverse(a: &Matrix) -> Result<Matrix> {
    let qr = Qr::new(a)?;
    let (m, n) = (a.rows(), a.cols());
    let mut pinv = Matrix::zeros(n, m);
    let mut unit = vec![0.0; m];
    for i in 0..m {
        unit[i] = 1.0;
        for (j, x) in qr.solve(&unit).into_iter().enumerate() {
            pinv[(j, i)] = x;
        }
        unit[i] = 0.0;
    }
    Ok(pinv)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &Matrix) -> f64 {
    let n = a.rows();
    debug_assert_eq!(n, a.cols());
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap_or(k);
        if m[(piv, k)] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            det = -det;
        }
        det *= m[(k, k)];
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..n {
                m[(i, j)] -= f * m[(k, j)];
            }
        }
    }
    det
}

/// `|det A| / ∏ᵢ ‖rowᵢ‖₂`, in `[0, 1]` by Hadamard's inequality. Zero for a
/// singular matrix, one for orthogonal rows; insensitive to row scaling.
pub fn hadamard_ratio(a: &Matrix) -> f64 {
    let mut denom = 1.0;
    for i in 0..a.rows() {
        let n = libm::sqrt(dot(a.row(i), a.row(i)));
        if n == 0.0 {
            return 0.0;
        }
        denom *= n;
    }
    determinant(a).abs() / denom
}

const GELFAND_SQUARINGS: usize = 48;

/// Spectral radius by Gelfand's formula `ρ = lim ‖Mᵏ‖^{1/k}`, evaluated
/// with repeated normalized squaring (`k = 2^48`).
pub fn spectral_radius(m: &Matrix) -> f64 {
    radius_with(m, |x| x)
}

/// Spectral radius of `M` with the simple eigenvalue whose right/left
/// eigenvectors are `right`/`left` deflated out. The complementary
/// projector is re-applied after each squaring so rounding cannot leak the
/// dominant direction back in.
pub fn deflated_spectral_radius(m: &Matrix, right: &[f64], left: &[f64]) -> f64 {
    let n = m.rows();
    let scale = dot(left, right);
    let mut proj = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            proj[(i, j)] -= right[i] * left[j] / scale;
        }
    }
    let start = m.mul(&proj);
    radius_with(&start, |x| proj.mul(&x).mul(&proj))
}

fn radius_with(m: &Matrix, project: impl Fn(Matrix) -> Matrix) -> f64 {
    let n0 = m.norm1();
    if n0 == 0.0 {
        return 0.0;
    }
    let mut x = m.clone();
    x.scale(1.0 / n0);
    let mut log_rho = libm::log(n0);
    let mut k = 1.0f64;
    for _ in 0..GELFAND_SQUARINGS {
        let mut y = project(x.mul(&x));
        let n = y.norm1();
        if n == 0.0 || !n.is_finite() {
            return 0.0;
        }
        y.scale(1.0 / n);
        k *= 2.0;
        log_rho += libm::log(n) / k;
        x = y;
    }
    libm::exp(log_rho)
}
