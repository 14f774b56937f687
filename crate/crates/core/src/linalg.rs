//! Small dense matrices over [`Rational`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::arith::Rational;
use crate::error::{invalid, Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("ragged matrix rows"));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn scale_row(&mut self, i: usize, factor: &Rational) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x *= factor;
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(invalid("matrix-vector dimension mismatch"));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Index of the entry of largest magnitude in column `col` among rows
    /// `from..`, skipping zeros.
    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self[(r, col)].is_zero())
            .max_by(|&a, &b| {
                self[(a, col)]
                    .abs()
                    .cmp(&self[(b, col)].abs())
                    .then(b.cmp(&a))
            })
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = m.pivot_row(col, col) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for j in col..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] -= t;
                }
            }
        }
        Ok(det)
    }

    /// Solves `self · x = b` exactly with partial pivoting.
    ///
    /// The residual `self · x - b` of the returned solution is identically zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        if !self.is_square() {
            return Err(invalid("solve needs a square matrix"));
        }
        let n = self.rows;
        if b.len() != n {
            return Err(invalid("right-hand side has the wrong length"));
        }
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let p = m
                .pivot_row(col, col)
                .ok_or_else(|| Error::Singular(alloc::format!("no pivot in column {col}")))?;
            m.swap_rows(p, col);
            rhs.swap(p, col);
            let pivot = m[(col, col)].clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for j in col..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc -= &m[(i, j)] * &x[j];
            }
            x[i] = acc / &m[(i, i)];
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| q(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn solves_symmetric_system() {
        let a = mat(&[&["4", "4/3"], &["4/3", "4"]]);
        let c = a.solve(&[q("1"), q("1")]).unwrap();
        assert_eq!(c, vec![q("3/16"), q("3/16")]);
    }

    #[test]
    fn identity_solve_is_identity() {
        let b = vec![q("-2/7"), q("5"), q("1/3")];
        assert_eq!(Matrix::identity(3).solve(&b).unwrap(), b);
    }

    #[test]
    fn singular_is_reported() {
        let a = mat(&[&["1", "2"], &["2", "4"]]);
        assert!(matches!(
            a.solve(&[q("1"), q("1")]),
            Err(Error::Singular(_))
        ));
        assert_eq!(a.determinant().unwrap(), q("0"));
    }

    #[test]
    fn needs_pivoting() {
        let a = mat(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(a.solve(&[q("2"), q("3")]).unwrap(), vec![q("3"), q("2")]);
        assert_eq!(a.determinant().unwrap(), q("-1"));
    }

    #[test]
    fn residual_is_zero() {
        let a = mat(&[&["2", "-1/3", "5"], &["7/2", "0", "1"], &["1", "1", "-4/9"]]);
        let b = vec![q("1"), q("-2/5"), q("3")];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
    }
}
