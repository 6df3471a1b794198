//! Fixed workloads shared by the benchmarks.

use algcohom::presentation::builtins::bundle;
use algcohom::presentation::{AssocTriple, LieTriple};
use algcohom::{FieldSpec, Result, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fields() -> [FieldSpec; 2] {
    [FieldSpec::Rationals, FieldSpec::PrimeField(5)]
}

/// Named associative triples of increasing size.
pub fn assoc_workloads(field: FieldSpec) -> Result<Vec<(&'static str, AssocTriple)>> {
    ["dual_numbers", "r_equals_a", "k_times_k", "quotient_point"]
        .into_iter()
        .map(|name| Ok((name, bundle(name, field, &[])?.expect_assoc()?)))
        .collect()
}

pub fn lie_workloads(field: FieldSpec) -> Result<Vec<(&'static str, LieTriple)>> {
    ["sl2", "projective_lie", "dual_lie"]
        .into_iter()
        .map(|name| Ok((name, bundle(name, field, &[])?.expect_lie()?)))
        .collect()
}

/// A seeded random `n x n` matrix of rank at most `rank`.
pub fn low_rank_matrix(field: FieldSpec, n: usize, rank: usize, seed: u64) -> Result<SparseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<Vec<i64>> = (0..n).map(|_| (0..rank).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let v: Vec<Vec<i64>> = (0..rank).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let mut entries = Vec::new();
    for (r, row) in u.iter().enumerate() {
        for c in 0..n {
            let x: i64 = row.iter().zip(&v).map(|(a, w)| a * w[c]).sum();
            if x != 0 {
                entries.push((r, c, field.from_i64(x)));
            }
        }
    }
    SparseMatrix::from_triplets(field, n, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build() {
        for f in fields() {
            assert_eq!(assoc_workloads(f).unwrap().len(), 4);
            assert_eq!(lie_workloads(f).unwrap().len(), 3);
            let m = low_rank_matrix(f, 20, 5, 1).unwrap();
            assert!(algcohom::linalg::rank(&m) <= 5);
        }
    }
}
