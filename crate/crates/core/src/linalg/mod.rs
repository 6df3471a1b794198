//! Exact linear algebra over the supported ground fields.

mod dense;
mod echelon;
mod sparse;

pub use dense::DenseMatrix;
pub use echelon::Echelon;
pub use sparse::{
    canonicalize_vec, dense_to_sparse, sparse_combine, sparse_to_dense, MatrixJson, SparseMatrix, SparseVec,
};

use crate::scalar::FieldSpec;

/// Rank and a kernel basis of `mat`.
///
/// Columns are inserted in order into a tracking echelon form; each column
/// that depends on earlier ones yields one kernel vector.
pub fn rank_kernel(mat: &SparseMatrix) -> (usize, Vec<SparseVec>) {
    let mut ech = Echelon::tracking(mat.field(), mat.rows());
    let mut kernel = Vec::new();
    for col in mat.columns() {
        if let Some(rel) = ech.insert_with_relation(&col) {
            kernel.push(rel);
        }
    }
    (ech.rank(), kernel)
}

pub fn rank(mat: &SparseMatrix) -> usize {
    let mut ech = Echelon::new(mat.field(), mat.rows());
    for col in mat.columns() {
        ech.insert(&col);
    }
    ech.rank()
}

/// Some `x` with `mat * x = b`, or `None` if the system is inconsistent.
pub fn solve(mat: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let mut ech = Echelon::tracking(mat.field(), mat.rows());
    for col in mat.columns() {
        ech.insert(&col);
    }
    ech.express(b)
}

/// Dimension of the span of a family of vectors.
pub fn span_dim(field: FieldSpec, ambient: usize, vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new(field, ambient);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Echelon form of the column space of `mat`.
pub fn column_space(mat: &SparseMatrix) -> Echelon {
    let mut ech = Echelon::new(mat.field(), mat.rows());
    for col in mat.columns() {
        ech.insert(&col);
    }
    ech
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        let f = FieldSpec::Rationals;
        let (r, k) = rank_kernel(&SparseMatrix::identity(f, 3));
        assert_eq!((r, k.len()), (3, 0));
        let (r, k) = rank_kernel(&SparseMatrix::zero(f, 2, 5));
        assert_eq!((r, k.len()), (0, 5));
        let (r, k) = rank_kernel(&SparseMatrix::zero(f, 0, 0));
        assert_eq!((r, k.len()), (0, 0));
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            let m = SparseMatrix::from_triplets(
                f,
                2,
                4,
                vec![
                    (0, 0, f.from_i64(1)),
                    (0, 1, f.from_i64(2)),
                    (1, 2, f.from_i64(3)),
                    (1, 3, f.from_i64(1)),
                    (0, 3, f.from_i64(-1)),
                ],
            )
            .unwrap();
            let (r, ker) = rank_kernel(&m);
            assert_eq!(r, 2);
            assert_eq!(ker.len(), 2);
            for k in &ker {
                assert!(m.apply(k).is_empty());
            }
            let b = vec![(0, f.from_i64(4)), (1, f.from_i64(2))];
            let x = solve(&m, &b).unwrap();
            assert_eq!(m.apply(&x), b);
        }
    }
}
