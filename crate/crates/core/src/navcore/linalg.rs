//! Small dense row-major matrices.
//!
//! Sized for filter covariances, Jacobians and the MPC subproblem, so
//! everything is O(n^3) and allocation-happy. Anything beyond ~100x100 is out
//! of scope.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{NavError, Result};

#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Mat::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Builds a matrix from equal-length rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(NavError::invalid(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn column(v: &[f64]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)]).abs());
            }
        }
        worst
    }

    /// Replaces the matrix by (A + A^T) / 2.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                let m = 0.5 * (self[(r, c)] + self[(c, r)]);
                self[(r, c)] = m;
                self[(c, r)] = m;
            }
        }
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mat_vec");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Copies `block` into self with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut b = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                b[(r, c)] = self[(r0 + r, c0 + c)];
            }
        }
        b
    }

    /// Smallest eigenvalue of a symmetric matrix (cyclic Jacobi sweeps).
    ///
    /// Only the symmetric part is used. Intended for PSD diagnostics.
    pub fn min_symmetric_eigenvalue(&self) -> f64 {
        symmetric_eigenvalues(self)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
///
/// On a non-positive pivot the factorization is retried once with
/// `1e-10 * trace(a) / n` added to the diagonal.
pub fn cholesky(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(NavError::invalid(format!(
            "cholesky needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if !a.is_finite() {
        return Err(NavError::invalid("cholesky input has non-finite entries"));
    }
    if a.asymmetry() > 1e-9 * (1.0 + a.max_abs()) {
        return Err(NavError::invalid(format!(
            "cholesky input is not symmetric (asymmetry {:e})",
            a.asymmetry()
        )));
    }
    match cholesky_raw(a) {
        Ok(l) => Ok(l),
        Err(_) => {
            let n = a.rows.max(1) as f64;
            let jitter = 1e-10 * a.trace() / n;
            let mut shifted = a.clone();
            for i in 0..a.rows {
                shifted[(i, i)] += jitter;
            }
            cholesky_raw(&shifted)
        }
    }
}

fn cholesky_raw(a: &Mat) -> Result<Mat> {
    let n = a.rows;
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(NavError::NotPositiveDefinite { row: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Factor for sampling from a possibly singular covariance.
///
/// Behaves like Cholesky but zeroes columns whose pivot falls below a
/// relative floor instead of failing, so `mean + L z` works for PSD input.
pub fn psd_factor(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(NavError::invalid("psd_factor needs a square matrix"));
    }
    let n = a.rows;
    let floor = 1e-14 * (1.0 + a.max_abs());
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d < -1e-9 * (1.0 + a.max_abs()) {
            return Err(NavError::NotPositiveDefinite { row: j, pivot: d });
        }
        if d <= floor {
            continue;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves L L^T X = B given the lower factor L.
pub fn cholesky_solve(l: &Mat, b: &Mat) -> Mat {
    let n = l.rows;
    assert_eq!(b.rows, n);
    let mut x = b.clone();
    for c in 0..b.cols {
        // forward: L y = b
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in i + 1..n {
                s -= l[(k, i)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// Solves A X = B for symmetric positive definite A.
pub fn solve_spd(a: &Mat, b: &Mat) -> Result<Mat> {
    if b.rows != a.rows {
        return Err(NavError::invalid(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows, a.rows
        )));
    }
    let l = cholesky(a)?;
    Ok(cholesky_solve(&l, b))
}

/// Inverse of a symmetric positive definite matrix, symmetrized.
pub fn inverse_spd(a: &Mat) -> Result<Mat> {
    let mut inv = solve_spd(a, &Mat::identity(a.rows))?;
    inv.symmetrize();
    Ok(inv)
}

/// Eigenvalues of the symmetric part of `a`, by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &Mat) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows;
    let mut m = a.clone();
    m.symmetrize();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)] * m[(r, c)])
            .sum();
        if off <= 1e-30 * (1.0 + m.frobenius().powi(2)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[(i, i)]).collect()
}

/// Spectral radius estimate via the Gelfand limit ||M^(2^j)||^(1/2^j).
///
/// Repeated squaring with renormalization; after 24 squarings the bias from
/// the norm constant is below 1e-6 relative for the small systems here.
/// Diagnostic only.
pub fn spectral_radius(a: &Mat) -> f64 {
    assert!(a.is_square());
    let mut s = a.clone();
    let top = s.max_abs();
    if top == 0.0 {
        return 0.0;
    }
    s = s.scale(1.0 / top);
    // a^(2^j) = s * exp(log_scale)
    let mut log_scale = top.ln();
    let mut power = 1.0f64;
    for _ in 0..24 {
        let sq = &s * &s;
        let m = sq.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        s = sq.scale(1.0 / m);
        log_scale = 2.0 * log_scale + m.ln();
        power *= 2.0;
    }
    (log_scale / power).exp()
}
