//! Small dense linear algebra: row-major square matrices, a PSD-tolerant
//! Cholesky factorization and SPD solves.

use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from row-major data; `data.len()` must be a perfect square.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (self[(i, j)], self[(j, i)]);
                (a - b).abs() <= SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0)
            })
        })
    }

    /// Lower-triangular `L` with `L Lᵀ = self`. Zero pivots are accepted when
    /// the remaining column is also zero, so singular PSD inputs factor.
    pub fn cholesky_lower(&self) -> Result<Matrix> {
        if !self.is_symmetric() {
            return Err(Error::NumericDomain("matrix is not symmetric".into()));
        }
        let n = self.n;
        let scale = self.diagonal().iter().fold(1.0f64, |m, d| m.max(d.abs()));
        let tol = PIVOT_TOL * scale;
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let d = self[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
            if d < -tol {
                return Err(Error::NumericDomain("matrix is not positive semidefinite".into()));
            }
            if d <= tol {
                for i in j + 1..n {
                    let r = self[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
                    if r.abs() > 1e-8 * scale {
                        return Err(Error::NumericDomain("matrix is not positive semidefinite".into()));
                    }
                }
                continue;
            }
            let pivot = d.sqrt();
            l[(j, j)] = pivot;
            for i in j + 1..n {
                let r = self[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
                l[(i, j)] = r / pivot;
            }
        }
        Ok(l)
    }

    /// Solves `self x = b` for symmetric positive definite `self`.
    pub fn solve_spd(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: b.len() });
        }
        let l = self.cholesky_lower()?;
        if (0..self.n).any(|i| l[(i, i)] == 0.0) {
            return Err(Error::NumericDomain("matrix is singular".into()));
        }
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
            y[i] = (b[i] - s) / l[(i, i)];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| l[(k, i)] * x[k]).sum();
            x[i] = (y[i] - s) / l[(i, i)];
        }
        Ok(x)
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn inverse_spd(&self) -> Result<Matrix> {
        let n = self.n;
        let mut inv = Matrix::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve_spd(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd3() -> Matrix {
        Matrix::from_rows(3, vec![4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = spd3();
        let l = a.cholesky_lower().unwrap();
        let back = l.mul(&l.transpose());
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_psd_factors() {
        // rank one: v vᵀ with v = (1, 2)
        let a = Matrix::from_rows(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        let l = a.cholesky_lower().unwrap();
        let back = l.mul(&l.transpose());
        assert!((back[(1, 1)] - 4.0).abs() < 1e-12);
        assert!(a.solve_spd(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let indefinite = Matrix::from_rows(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(indefinite.cholesky_lower().is_err());
        let asym = Matrix::from_rows(2, vec![1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(asym.cholesky_lower().is_err());
    }

    #[test]
    fn solve_and_inverse() {
        let a = spd3();
        let x = a.solve_spd(&[1.0, 2.0, 3.0]).unwrap();
        let ax = a.mul_vec(&x);
        for (got, want) in ax.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let id = a.mul(&a.inverse_spd().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).abs() < 1e-12);
            }
        }
    }
}
