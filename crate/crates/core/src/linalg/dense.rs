use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Small dense matrix, row-major. Used for module operators and basis
/// changes, where dimensions are tiny.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(DenseMatrix { rows: r, cols: c, field, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        DenseMatrix { rows, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dense shape mismatch");
        let mut out = DenseMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let t = &out.data[i * other.cols + j] + &(a * b);
                        out.data[i * other.cols + j] = t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &DenseMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            if !y.is_zero() {
                *x = &*x + &(c * y);
            }
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    a.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let s = a.get(row, col).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let x = a.get(row, j) * &s;
                a.set(row, j, x);
            }
            for r in 0..self.rows {
                let factor = a.get(r, col).clone();
                if r == row || factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let x = a.get(r, j) - &(&factor * a.get(row, j));
                    a.set(r, j, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(self.field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let s = a.get(col, col).inv().ok()?;
            for j in 0..n {
                let x = a.get(col, j) * &s;
                a.set(col, j, x);
                let y = inv.get(col, j) * &s;
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let f = FieldSpec::Rationals;
        let m = DenseMatrix::from_fn(f, 3, 3, |r, c| f.from_i64([[2, 1, 0], [0, 1, 3], [1, 0, 1]][r][c]));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = DenseMatrix::from_fn(f, 2, 2, |_, _| f.one());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn rref_pivots() {
        let f = FieldSpec::prime(7).unwrap();
        let m = DenseMatrix::from_fn(f, 3, 4, |r, c| f.from_i64([[0, 2, 4, 1], [0, 1, 2, 3], [0, 0, 0, 0]][r][c]));
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![1, 3]);
        assert!(r.get(0, 1).is_one() && r.get(0, 3).is_zero() && r.get(1, 3).is_one());
    }
}
