use std::fmt;

use rug::Float;

use super::poly::normalize_vector;
use super::prec::{kernel_tol, max_abs, pivot_tol, precision, zero, Real};
use crate::error::{Error, Result};

/// Dense row-major matrix of working-precision reals.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Real>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Real>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_f64(rows: &[&[f64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Float::with_val(precision(), x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Real) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Real] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Real>) -> Result<()> {
        if self.rows > 0 && row.len() != self.cols {
            return Err(Error::InvalidInput("row length mismatch".into()));
        }
        self.cols = row.len();
        self.data.extend(row);
        self.rows += 1;
        Ok(())
    }

    /// Copy without the last row.
    pub fn without_last_row(&self) -> Matrix {
        let rows = self.rows.saturating_sub(1);
        Matrix {
            rows,
            cols: self.cols,
            data: self.data[..rows * self.cols].to_vec(),
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> Real {
        (0..self.rows).fold(zero(), |acc, i| {
            let s = self
                .row(i)
                .iter()
                .fold(zero(), |s, x| s + Float::with_val(precision(), x.abs_ref()));
            if s > acc {
                s
            } else {
                acc
            }
        })
    }

    pub fn mul_vec(&self, v: &[Real]) -> Vec<Real> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(zero(), |acc, (a, b)| {
                    acc + Float::with_val(precision(), a * b)
                })
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<f64>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_f64()).collect())
            .collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

/// Basis of a numerical kernel.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// Each vector scaled so `max|v_i| = 1` with the first maximal entry positive.
    pub basis: Vec<Vec<Real>>,
    /// Rank found by elimination.
    pub rank: usize,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `‖Mv‖∞ / (‖M‖∞ ‖v‖∞)`.
pub fn relative_residual(m: &Matrix, v: &[Real]) -> Real {
    let r = max_abs(&m.mul_vec(v));
    let scale = Float::with_val(precision(), m.norm_inf() * max_abs(v));
    if scale.is_zero() {
        return zero();
    }
    Float::with_val(precision(), r / scale)
}

/// Numerical kernel by Gaussian elimination with full (row and column)
/// pivoting.
///
/// Rows are equilibrated before elimination; elimination stops once the
/// largest remaining entry drops below `pivot_tol()`. Every free column
/// yields a candidate vector, kept only if it passes
/// `‖Mv‖∞ <= kernel_tol() ‖M‖∞ ‖v‖∞` against the original matrix.
pub fn nullspace(m: &Matrix) -> Result<Kernel> {
    if m.rows() < 1 || m.cols() < 2 {
        return Err(Error::InvalidInput(format!(
            "nullspace needs at least one row and two columns, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Real>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    for row in a.iter_mut() {
        let s = max_abs(row);
        if !s.is_zero() {
            for x in row.iter_mut() {
                *x /= &s;
            }
        }
    }
    let mut perm: Vec<usize> = (0..cols).collect();
    let tol = pivot_tol();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best = zero();
        let (mut pi, mut pj) = (k, k);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                let ax = Float::with_val(precision(), x.abs_ref());
                if ax > best {
                    best = ax;
                    pi = i;
                    pj = j;
                }
            }
        }
        if best <= tol {
            break;
        }
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            perm.swap(k, pj);
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = Float::with_val(precision(), &row[k] / &pivot_row[k]);
            for j in k..cols {
                let t = Float::with_val(precision(), &factor * &pivot_row[j]);
                row[j] -= t;
            }
        }
        rank += 1;
    }

    let threshold = kernel_tol();
    let mut basis = Vec::new();
    for free in rank..cols {
        // Permuted coordinates: x_free = 1, other free entries 0.
        let mut x = vec![zero(); cols];
        x[free] = Float::with_val(precision(), 1);
        for i in (0..rank).rev() {
            let mut acc = Float::with_val(precision(), &a[i][free]);
            for j in (i + 1)..rank {
                acc += Float::with_val(precision(), &a[i][j] * &x[j]);
            }
            x[i] = Float::with_val(precision(), -acc / &a[i][i]);
        }
        let mut v = vec![zero(); cols];
        for (slot, value) in perm.iter().zip(x) {
            v[*slot] = value;
        }
        if !normalize_vector(&mut v) {
            continue;
        }
        if relative_residual(m, &v) <= threshold {
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return Err(Error::NoKernel);
    }
    Ok(Kernel { basis, rank })
}

/// Determinant by partial-pivot elimination.
pub fn determinant(m: &Matrix) -> Result<Real> {
    if m.rows() != m.cols() {
        return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a: Vec<Vec<Real>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Float::with_val(precision(), 1);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                a[i][k]
                    .clone()
                    .abs()
                    .partial_cmp(&a[j][k].clone().abs())
                    .expect("finite entries")
            })
            .expect("nonempty range");
        if a[p][k].is_zero() {
            return Ok(zero());
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        let (upper, lower) = a.split_at_mut(k + 1);
        for row in lower.iter_mut() {
            let factor = Float::with_val(precision(), &row[k] / &upper[k][k]);
            for j in k..n {
                let t = Float::with_val(precision(), &factor * &upper[k][j]);
                row[j] -= t;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_equation_two_unknowns() {
        let m = Matrix::from_f64(&[&[1.0, 1.0]]).unwrap();
        let k = nullspace(&m).unwrap();
        assert_eq!(k.dim(), 1);
        let v: Vec<f64> = k.basis[0].iter().map(|x| x.to_f64()).collect();
        assert_eq!(v, vec![1.0, -1.0]);
    }

    #[test]
    fn full_rank_has_no_kernel() {
        let m = Matrix::from_f64(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(nullspace(&m).unwrap_err(), Error::NoKernel);
    }

    #[test]
    fn rank_deficiency_gives_larger_kernel() {
        let m = Matrix::from_f64(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]).unwrap();
        let k = nullspace(&m).unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.rank, 1);
    }

    #[test]
    fn shape_preconditions() {
        let m = Matrix::from_f64(&[&[1.0]]).unwrap();
        assert!(matches!(nullspace(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn determinant_small() {
        let m = Matrix::from_f64(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        assert_eq!(determinant(&m).unwrap().to_f64(), 5.0);
    }
}
