//! Small dense linear algebra: a row-major matrix, a partially pivoted square
//! solve with an explicit singularity signal, Householder least squares and a
//! numerical rank.
//!
//! Everything here is sized for the candidate systems and subset fits of the
//! solver, i.e. `p` up to roughly ten columns.

#![allow(clippy::needless_range_loop)]

use crate::error::{LtsError, Result};

/// Default relative pivot threshold for [`solve_square`].
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;

/// Relative threshold on the Householder diagonal below which a least squares
/// problem is declared rank deficient.
const RANK_TOL: f64 = 1e-12;

/// Dense matrix stored row-major: `data[row * cols + col]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LtsError::invalid(format!("matrix data has {} entries, expected {rows} x {cols}", data.len())));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(LtsError::invalid(format!(
                "non-finite matrix entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LtsError::invalid("rows have differing lengths"));
        }
        Matrix::new(rows.len(), cols, rows.concat())
    }

    /// Single-column matrix.
    pub fn from_column(col: &[f64]) -> Result<Self> {
        Matrix::new(col.len(), 1, col.to_vec())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: indices.len(), cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// `self^T * self`.
    pub fn gram(&self) -> Matrix {
        let p = self.cols;
        let mut g = Matrix::zeros(p, p);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..p {
                for j in 0..p {
                    g.data[i * p + j] += row[i] * row[j];
                }
            }
        }
        g
    }

    /// `self^T * v`.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            for (o, x) in out.iter_mut().zip(self.row(r)) {
                *o += x * v[r];
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Result of a square solve.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Regular(Vec<f64>),
    Singular,
}

impl SolveOutcome {
    pub fn is_regular(&self) -> bool {
        matches!(self, SolveOutcome::Regular(_))
    }

    pub fn solution(&self) -> Option<&[f64]> {
        match self {
            SolveOutcome::Regular(x) => Some(x),
            SolveOutcome::Singular => None,
        }
    }

    pub fn into_solution(self) -> Option<Vec<f64>> {
        match self {
            SolveOutcome::Regular(x) => Some(x),
            SolveOutcome::Singular => None,
        }
    }
}

/// Solves `A x = b` by Gaussian elimination with partial row pivoting.
///
/// The system is `Singular` as soon as a pivot falls below
/// `pivot_tol * max|A_ij|`. Regular solutions get one step of iterative
/// refinement.
pub fn solve_square(a: &Matrix, b: &[f64], pivot_tol: f64) -> Result<SolveOutcome> {
    if a.rows != a.cols {
        return Err(LtsError::invalid(format!("matrix is {} x {}, not square", a.rows, a.cols)));
    }
    if b.len() != a.rows {
        return Err(LtsError::invalid("right-hand side length does not match the matrix"));
    }
    if !pivot_tol.is_finite() || pivot_tol <= 0.0 {
        return Err(LtsError::invalid("pivot tolerance must be positive and finite"));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(LtsError::invalid("non-finite right-hand side"));
    }
    let mut scratch = a.data.clone();
    let mut x = b.to_vec();
    Ok(if solve_in_place(&mut scratch, &a.data, &mut x, a.rows, pivot_tol) {
        SolveOutcome::Regular(x)
    } else {
        SolveOutcome::Singular
    })
}

/// LU factors `lu` (row-major `p x p`, overwritten) and solves for `rhs` in
/// place. `orig` is the unfactored matrix, used for one refinement step.
/// Returns `false` if a pivot is below `pivot_tol` times the largest entry.
pub(crate) fn solve_in_place(lu: &mut [f64], orig: &[f64], rhs: &mut [f64], p: usize, pivot_tol: f64) -> bool {
    let scale = orig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return false;
    }
    let threshold = pivot_tol * scale;
    let mut perm: Vec<usize> = (0..p).collect();

    for k in 0..p {
        let mut piv = k;
        let mut best = lu[k * p + k].abs();
        for r in k + 1..p {
            let v = lu[r * p + k].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_nan() || best < threshold {
            return false;
        }
        if piv != k {
            for c in 0..p {
                lu.swap(k * p + c, piv * p + c);
            }
            perm.swap(k, piv);
        }
        let d = lu[k * p + k];
        for r in k + 1..p {
            let f = lu[r * p + k] / d;
            lu[r * p + k] = f;
            if f != 0.0 {
                for c in k + 1..p {
                    lu[r * p + c] -= f * lu[k * p + c];
                }
            }
        }
    }

    let b: Vec<f64> = rhs.to_vec();
    let mut x = lu_apply(lu, &perm, &b, p);

    // one refinement step against the original matrix
    let resid: Vec<f64> = (0..p).map(|r| b[r] - dot(&orig[r * p..(r + 1) * p], &x)).collect();
    let corr = lu_apply(lu, &perm, &resid, p);
    for (xi, ci) in x.iter_mut().zip(&corr) {
        *xi += ci;
    }

    if x.iter().any(|v| !v.is_finite()) {
        return false;
    }
    rhs.copy_from_slice(&x);
    true
}

fn lu_apply(lu: &[f64], perm: &[usize], b: &[f64], p: usize) -> Vec<f64> {
    let mut y: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
    for r in 0..p {
        let mut s = y[r];
        for c in 0..r {
            s -= lu[r * p + c] * y[c];
        }
        y[r] = s;
    }
    for r in (0..p).rev() {
        let mut s = y[r];
        for c in r + 1..p {
            s -= lu[r * p + c] * y[c];
        }
        y[r] = s / lu[r * p + r];
    }
    y
}

/// Ordinary least squares `argmin |ys - xs * beta|^2` by Householder QR.
///
/// Fails with [`LtsError::RankDeficient`] when `xs` does not have full column
/// rank (or has fewer rows than columns).
pub fn least_squares(xs: &Matrix, ys: &[f64]) -> Result<Vec<f64>> {
    let (m, p) = (xs.rows, xs.cols);
    if ys.len() != m {
        return Err(LtsError::invalid("response length does not match the design rows"));
    }
    if ys.iter().any(|v| !v.is_finite()) {
        return Err(LtsError::invalid("non-finite response"));
    }
    if m < p || p == 0 {
        return Err(LtsError::RankDeficient);
    }

    // column-major copy, easier to reflect column by column
    let mut a = vec![0.0; m * p];
    for r in 0..m {
        for c in 0..p {
            a[c * m + r] = xs.get(r, c);
        }
    }
    let mut qty = ys.to_vec();
    let col_scale =
        (0..p).map(|c| a[c * m..(c + 1) * m].iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0_f64, f64::max);
    if col_scale == 0.0 {
        return Err(LtsError::RankDeficient);
    }

    let mut diag = vec![0.0; p];
    for k in 0..p {
        let norm = a[k * m + k..(k + 1) * m].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= RANK_TOL * col_scale {
            return Err(LtsError::RankDeficient);
        }
        let alpha = if a[k * m + k] > 0.0 { -norm } else { norm };
        // v = x - alpha e1, stored in place of column k
        a[k * m + k] -= alpha;
        let vnorm2: f64 = a[k * m + k..(k + 1) * m].iter().map(|v| v * v).sum();
        diag[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        for c in k + 1..p {
            let s: f64 = (k..m).map(|r| a[k * m + r] * a[c * m + r]).sum();
            let f = 2.0 * s / vnorm2;
            for r in k..m {
                a[c * m + r] -= f * a[k * m + r];
            }
        }
        let s: f64 = (k..m).map(|r| a[k * m + r] * qty[r]).sum();
        let f = 2.0 * s / vnorm2;
        for r in k..m {
            qty[r] -= f * a[k * m + r];
        }
    }

    let mut beta = vec![0.0; p];
    for k in (0..p).rev() {
        let mut s = qty[k];
        for c in k + 1..p {
            s -= a[c * m + k] * beta[c];
        }
        beta[k] = s / diag[k];
    }
    if beta.iter().any(|v| !v.is_finite()) {
        return Err(LtsError::RankDeficient);
    }
    Ok(beta)
}

/// Numerical rank by Gaussian elimination with complete pivoting; entries
/// below `tol * max|A_ij|` count as zero.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    let (m, n) = (a.rows, a.cols);
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut w = a.data.clone();
    let mut rank = 0;
    let mut rows_left: Vec<usize> = (0..m).collect();
    let mut cols_left: Vec<usize> = (0..n).collect();
    while !rows_left.is_empty() && !cols_left.is_empty() {
        let mut best = (0, 0, 0.0_f64);
        for (ri, &r) in rows_left.iter().enumerate() {
            for (ci, &c) in cols_left.iter().enumerate() {
                let v = w[r * n + c].abs();
                if v > best.2 {
                    best = (ri, ci, v);
                }
            }
        }
        if best.2 <= threshold {
            break;
        }
        let pr = rows_left.swap_remove(best.0);
        let pc = cols_left.swap_remove(best.1);
        let d = w[pr * n + pc];
        for &r in &rows_left {
            let f = w[r * n + pc] / d;
            if f != 0.0 {
                for &c in &cols_left {
                    w[r * n + c] -= f * w[pr * n + c];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_solve() {
        let out = solve_square(&Matrix::identity(2), &[3.0, -1.0], DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(out, SolveOutcome::Regular(vec![3.0, -1.0]));
    }

    #[test]
    fn rank_one_rows_are_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let out = solve_square(&a, &[1.0, 1.0], DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(out, SolveOutcome::Singular);
        assert!(out.solution().is_none());
    }

    #[test]
    fn two_by_two_by_substitution() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve_square(&a, &[5.0, 10.0], DEFAULT_PIVOT_TOL).unwrap().into_solution().unwrap();
        assert!(max_abs_diff(&x, &[1.0, 3.0]) < 1e-14);
    }

    #[test]
    fn zero_matrix_is_singular() {
        let out = solve_square(&Matrix::zeros(3, 3), &[0.0; 3], DEFAULT_PIVOT_TOL).unwrap();
        assert!(!out.is_regular());
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert!(Matrix::new(1, 1, vec![f64::NAN]).is_err());
        let err = solve_square(&Matrix::identity(1), &[f64::INFINITY], 1e-12).unwrap_err();
        assert!(matches!(err, LtsError::InvalidInput(_)));
        assert!(solve_square(&Matrix::identity(1), &[1.0], 0.0).is_err());
        assert!(solve_square(&Matrix::zeros(2, 1), &[1.0, 1.0], 1e-12).is_err());
    }

    #[test]
    fn least_squares_constant_regressor_is_mean() {
        let xs = Matrix::from_column(&[1.0, 1.0]).unwrap();
        let beta = least_squares(&xs, &[2.0, 4.0]).unwrap();
        assert!((beta[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn least_squares_example_subset() {
        // sum(xy) / sum(x^2) = -373.9628 / 483.144
        let xs = Matrix::from_column(&[1.39, -2.25, 10.87, 13.70, 13.05]).unwrap();
        let beta = least_squares(&xs, &[-0.90, -0.80, -3.79, -8.66, -16.45]).unwrap();
        assert!((beta[0] - (-373.9628 / 483.144)).abs() < 1e-12);
        assert!((beta[0] + 0.7740).abs() < 1e-4);
    }

    #[test]
    fn least_squares_padded_identity() {
        let mut rows = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        rows.push(vec![0.0; 3]);
        rows.push(vec![0.0; 3]);
        let xs = Matrix::from_rows(&rows).unwrap();
        let beta = least_squares(&xs, &[4.0, -2.0, 7.5, 0.0, 0.0]).unwrap();
        assert!(max_abs_diff(&beta, &[4.0, -2.0, 7.5]) < 1e-14);
    }

    #[test]
    fn least_squares_rank_deficient() {
        let xs = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![-1.0, -2.0]]).unwrap();
        assert_eq!(least_squares(&xs, &[1.0, 2.0, 3.0]), Err(LtsError::RankDeficient));
        let short = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert_eq!(least_squares(&short, &[1.0]), Err(LtsError::RankDeficient));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(4), 1e-12), 4);
        assert_eq!(rank(&Matrix::zeros(3, 2), 1e-12), 0);
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(rank(&a, 1e-12), 2);
        let tall = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]]).unwrap();
        assert_eq!(rank(&tall, 1e-12), 1);
    }

    #[test]
    fn gram_and_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(a.gram(), Matrix::from_rows(&[vec![35.0, 44.0], vec![44.0, 56.0]]).unwrap());
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose_mul_vec(&[1.0, 1.0, 1.0]), vec![9.0, 12.0]);
    }
}
