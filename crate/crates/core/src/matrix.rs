//! Dense row-major matrices over [`Scalar`].

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Leading `rows x cols` block.
    pub fn leading(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self[(i, j)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Inverse of a lower- or upper-triangular matrix with nonzero diagonal.
    /// Returns `None` on a zero diagonal entry.
    pub fn triangular_inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let lower = (0..n).all(|i| (i + 1..n).all(|j| self[(i, j)].is_zero()));
        if !lower {
            return self.transpose().triangular_inverse().map(|m| m.transpose());
        }
        if (0..n).any(|i| self[(i, i)].is_zero()) {
            return None;
        }
        // forward substitution, column by column
        let mut inv = Matrix::zeros(n, n);
        for c in 0..n {
            for i in c..n {
                let mut acc = if i == c {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
                for p in c..i {
                    acc -= &self[(i, p)] * &inv[(p, c)];
                }
                inv[(i, c)] = acc / &self[(i, i)];
            }
        }
        Some(inv)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled to integers by the lcm of its denominators;
    /// elimination then runs entirely in `BigInt`.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut scale = BigInt::one();
        let mut work: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let det = bareiss(&mut work);
        Scalar::new(det, scale)
    }
}

/// Bareiss elimination in place; returns the determinant.
fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for p in 0..self.cols {
                let a = &self[(i, p)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(p, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn hilbert(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| frac(1, (i + j + 1) as i64))
    }

    // Laplace expansion along the first row.
    fn laplace(m: &Matrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return int(1);
        }
        let mut acc = int(0);
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = &m[(0, j)] * laplace(&m.select(&rows, &cols));
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn hilbert_determinants() {
        // det H_n = 1, 1/12, 1/2160, 1/6048000
        assert_eq!(hilbert(1).determinant(), int(1));
        assert_eq!(hilbert(2).determinant(), frac(1, 12));
        assert_eq!(hilbert(3).determinant(), frac(1, 2160));
        assert_eq!(hilbert(4).determinant(), frac(1, 6_048_000));
    }

    #[test]
    fn determinant_needs_row_swap() {
        let m = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(m.determinant(), int(-1));
        let s = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert_eq!(s.determinant(), int(0));
        assert_eq!(Matrix::zeros(0, 0).determinant(), int(1));
    }

    #[test]
    fn triangular_inverses() {
        let l = Matrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![frac(1, 2), int(1), int(0)],
            vec![int(3), frac(-2, 3), int(1)],
        ]);
        let li = l.triangular_inverse().unwrap();
        assert_eq!(&l * &li, Matrix::identity(3));
        let u = l.transpose();
        let ui = u.triangular_inverse().unwrap();
        assert_eq!(&ui * &u, Matrix::identity(3));
        let mut z = Matrix::identity(2);
        z[(1, 1)] = int(0);
        assert!(z.triangular_inverse().is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(
            n in 1usize..5,
            entries in prop::collection::vec((-6i64..7, 1i64..5), 16),
        ) {
            let m = Matrix::from_fn(n, n, |i, j| {
                let (p, q) = entries[i * 4 + j];
                frac(p, q)
            });
            prop_assert_eq!(m.determinant(), laplace(&m));
        }
    }
}
