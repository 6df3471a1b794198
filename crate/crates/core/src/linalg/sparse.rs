use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Sparse vector: `(index, value)` pairs, sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Sort, merge duplicates and drop zeros.
pub fn canonicalize_vec(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize, field: FieldSpec) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a*x + b*y` for sparse vectors.
pub fn sparse_combine(a: &Scalar, x: &SparseVec, b: &Scalar, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b * &y[j].1));
            j += 1;
        } else {
            out.push((x[i].0, &(a * &x[i].1) + &(b * &y[j].1)));
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Exact sparse matrix with canonical triplet storage (row-major, no
/// duplicates, no explicit zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, field, entries: Vec::new() }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, field, entries: (0..n).map(|i| (i, i, field.one())).collect() }
    }

    /// Build from arbitrary triplets; duplicates are summed.
    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, Scalar)>,
    ) -> Result<Self> {
        for (r, c, x) in &entries {
            if *r >= rows || *c >= cols {
                return Err(Error::IndexOutOfRange(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            if x.field() != field {
                return Err(Error::FieldMismatch(x.field(), field));
            }
        }
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        let mut out: Vec<(usize, usize, Scalar)> = Vec::with_capacity(entries.len());
        for (r, c, x) in entries {
            match out.last_mut() {
                Some((r0, c0, y)) if *r0 == r && *c0 == c => *y = &*y + &x,
                _ => out.push((r, c, x)),
            }
        }
        out.retain(|(_, _, x)| !x.is_zero());
        Ok(SparseMatrix { rows, cols, field, entries: out })
    }

    /// Caller guarantees canonical order, ranges and nonzero values.
    pub(crate) fn from_canonical(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, Scalar)>,
    ) -> Self {
        debug_assert!(entries.windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        debug_assert!(entries.iter().all(|(r, c, x)| *r < rows && *c < cols && !x.is_zero()));
        SparseMatrix { rows, cols, field, entries }
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[SparseVec]) -> Result<Self> {
        let entries =
            columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x.clone()))).collect();
        Self::from_triplets(field, rows, columns.len(), entries)
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

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    /// `c * self`.
    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zero(self.field, self.rows, self.cols);
        }
        let entries = self.entries.iter().map(|(r, k, v)| (*r, *k, v * c)).collect();
        SparseMatrix { entries, ..self.clone() }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.entries.binary_search_by_key(&(r, c), |(a, b, _)| (*a, *b)) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, c, x) in &self.entries {
            cols[*c].push((*r, x.clone()));
        }
        cols
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (r, c, x) in &self.entries {
            rows[*r].push((*c, x.clone()));
        }
        rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, x)| (*c, *r, x.clone())).collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        SparseMatrix::from_canonical(self.field, self.cols, self.rows, entries)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let other_rows = other.row_vectors();
        let mut entries = Vec::new();
        let mut start = 0;
        while start < self.entries.len() {
            let r = self.entries[start].0;
            let mut end = start;
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            while end < self.entries.len() && self.entries[end].0 == r {
                let (_, k, a) = &self.entries[end];
                for (j, b) in &other_rows[*k] {
                    let t = a * b;
                    acc.entry(*j).and_modify(|v| *v = &*v + &t).or_insert(t);
                }
                end += 1;
            }
            entries.extend(acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (r, j, v)));
            start = end;
        }
        Ok(SparseMatrix::from_canonical(self.field, self.rows, other.cols, entries))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        SparseMatrix::from_triplets(self.field, self.rows, self.cols, entries)
    }

    pub fn neg(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(|(r, c, x)| (*r, *c, -x)).collect(),
        }
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut dense: BTreeMap<usize, Scalar> = BTreeMap::new();
        if v.is_empty() {
            return Vec::new();
        }
        let lookup: std::collections::HashMap<usize, &Scalar> = v.iter().map(|(i, x)| (*i, x)).collect();
        for (r, c, a) in &self.entries {
            if let Some(x) = lookup.get(c) {
                let t = a * *x;
                dense.entry(*r).and_modify(|y| *y = &*y + &t).or_insert(t);
            }
        }
        dense.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// Copy this matrix into a larger one at the given offsets.
    pub(crate) fn shifted_entries(
        &self,
        row_off: usize,
        col_off: usize,
    ) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        self.entries.iter().map(move |(r, c, x)| (r + row_off, c + col_off, x.clone()))
    }

    /// MatrixMarket coordinate text (1-based), values as exact scalar strings.
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "%%MatrixMarket matrix coordinate exact general");
        let _ = writeln!(s, "% field {}", self.field);
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.entries.len());
        for (r, c, x) in &self.entries {
            let _ = writeln!(s, "{} {} {}", r + 1, c + 1, x);
        }
        s
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(r, c, x)| (*r, *c, x.to_string())).collect(),
        }
    }

    pub fn from_json(m: &MatrixJson) -> Result<SparseMatrix> {
        let entries =
            m.entries.iter().map(|(r, c, s)| Ok((*r, *c, Scalar::parse(s, m.field)?))).collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_triplets(m.field, m.rows, m.cols, entries)
    }
}

/// Triplet-list serialization of a [`SparseMatrix`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        FieldSpec::Rationals.from_i64(v)
    }

    #[test]
    fn canonical_triplets() {
        let f = FieldSpec::Rationals;
        let m = SparseMatrix::from_triplets(f, 2, 2, vec![(1, 0, q(2)), (0, 1, q(1)), (1, 0, q(-2)), (0, 1, q(3))])
            .unwrap();
        assert_eq!(m.entries(), &[(0, 1, q(4))]);
        assert!(SparseMatrix::from_triplets(f, 2, 2, vec![(2, 0, q(1))]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let f = FieldSpec::Rationals;
        let a = SparseMatrix::from_triplets(f, 2, 3, vec![(0, 0, q(1)), (0, 2, q(2)), (1, 1, q(3))]).unwrap();
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.get(0, 0), q(5));
        assert_eq!(p.get(1, 1), q(9));
        assert_eq!(p.get(0, 1), q(0));
        assert!(a.mul(&a).is_err());
        assert_eq!(a.apply(&vec![(2, q(1))]), vec![(0, q(2))]);
    }

    #[test]
    fn json_roundtrip() {
        let f = FieldSpec::prime(7).unwrap();
        let m = SparseMatrix::from_triplets(f, 2, 2, vec![(0, 0, f.from_i64(3)), (1, 1, f.from_i64(6))]).unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SparseMatrix::from_json(&back).unwrap(), m);
        assert!(m.to_matrix_market().contains("2 2 6"));
    }
}
