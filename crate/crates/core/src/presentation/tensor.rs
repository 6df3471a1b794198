use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{FieldSpec, Scalar};

/// Structure constants `t[i][j][k]`: the product of basis elements `i` and
/// `j` has coefficient `t[i][j][k]` on output basis element `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    field: FieldSpec,
    dims: [usize; 3],
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(field: FieldSpec, dims: [usize; 3]) -> Self {
        Tensor3 { field, dims, data: vec![field.zero(); dims[0] * dims[1] * dims[2]] }
    }

    pub fn from_fn(field: FieldSpec, dims: [usize; 3], f: impl Fn(usize, usize, usize) -> i64) -> Self {
        let mut t = Self::zero(field, dims);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    t.set(i, j, k, field.from_i64(f(i, j, k)));
                }
            }
        }
        t
    }

    /// From nested arrays, checking the expected shape.
    pub fn from_nested(field: FieldSpec, nested: Vec<Vec<Vec<Scalar>>>, dims: [usize; 3], what: &str) -> Result<Self> {
        if nested.len() != dims[0] {
            return Err(Error::Shape(format!("{what}: expected {} outer entries, got {}", dims[0], nested.len())));
        }
        let mut data = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for (i, row) in nested.into_iter().enumerate() {
            if row.len() != dims[1] {
                return Err(Error::Shape(format!("{what}[{i}]: expected {} entries, got {}", dims[1], row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != dims[2] {
                    return Err(Error::Shape(format!(
                        "{what}[{i}][{j}]: expected {} coefficients, got {}",
                        dims[2],
                        v.len()
                    )));
                }
                data.extend(v);
            }
        }
        Ok(Tensor3 { field, dims, data })
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<String>>> {
        (0..self.dims[0])
            .map(|i| (0..self.dims[1]).map(|j| self.slice(i, j).iter().map(|x| x.to_string()).collect()).collect())
            .collect()
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let idx = (i * self.dims[1] + j) * self.dims[2] + k;
        self.data[idx] = v;
    }

    /// Output coefficients of the product of basis elements `i` and `j`.
    pub fn slice(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dims[1] + j) * self.dims[2];
        &self.data[start..start + self.dims[2]]
    }

    /// Bilinear extension to coordinate vectors.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(x.len(), self.dims[0]);
        debug_assert_eq!(y.len(), self.dims[1]);
        let field = self.field();
        let mut out = vec![field.zero(); self.dims[2]];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in self.slice(i, j).iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &(&c * t);
                    }
                }
            }
        }
        out
    }

    /// The operator `y -> x * y` for a fixed left argument, as a dense matrix.
    pub fn left_operator(&self, x: &[Scalar]) -> DenseMatrix {
        let field = self.field();
        let mut m = DenseMatrix::zero(field, self.dims[2], self.dims[1]);
        for j in 0..self.dims[1] {
            let col = self.apply(x, &unit_vec(field, self.dims[1], j));
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    /// The operator `x -> x * y` for a fixed right argument.
    pub fn right_operator(&self, y: &[Scalar]) -> DenseMatrix {
        let field = self.field();
        let mut m = DenseMatrix::zero(field, self.dims[2], self.dims[0]);
        for i in 0..self.dims[0] {
            let col = self.apply(&unit_vec(field, self.dims[0], i), y);
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, i, v);
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Re-express in new bases: `first` and `second` map new input basis
    /// vectors to old coordinates (columns), `out_inv` maps old output
    /// coordinates to new ones.
    pub fn transform(&self, first: &DenseMatrix, second: &DenseMatrix, out_inv: &DenseMatrix) -> Tensor3 {
        let field = first.field();
        let dims = [first.cols(), second.cols(), out_inv.rows()];
        let mut t = Tensor3::zero(field, dims);
        for i in 0..dims[0] {
            let x = first.column(i);
            for j in 0..dims[1] {
                let y = second.column(j);
                let v = out_inv.mul_vec(&self.apply(&x, &y));
                for (k, c) in v.into_iter().enumerate() {
                    t.set(i, j, k, c);
                }
            }
        }
        t
    }
}

pub fn unit_vec(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub fn vec_add(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(c: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|a| c * a).collect()
}

pub fn vec_is_zero(x: &[Scalar]) -> bool {
    x.iter().all(Scalar::is_zero)
}
