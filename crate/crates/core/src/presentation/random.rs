//! Seeded random valid triples: catalog structures seen through random
//! unitriangular changes of basis.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builtins::{
    abelian_lie, adjoint_lie_module, affine_lie, algebra_role, base_field, character_lie, characters, commutative,
    dual_numbers, first_character, k_times_k, module_role, quotient_by_character, sl2, trivial_lie_module, trunc_poly,
};
use super::{AssocAlgebra, AssocTriple, CommutativeAlgebra, LieTriple, Tensor3};
use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::scalar::{FieldSpec, Scalar};

/// Unitriangular matrix with small random entries above the diagonal,
/// conjugated by a random permutation.
pub fn random_basis_change(rng: &mut impl Rng, field: FieldSpec, n: usize) -> DenseMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut u = DenseMatrix::identity(field, n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, field.from_i64(rng.gen_range(-2..=2)));
        }
    }
    DenseMatrix::from_fn(field, n, n, |r, c| u.get(perm[r], perm[c]).clone())
}

/// `R` with `A` acting through a character of `A`.
pub fn algebra_via_character(a: &CommutativeAlgebra, r: &CommutativeAlgebra, chi: &[Scalar]) -> Result<AssocAlgebra> {
    let field = a.field;
    let n = r.dim();
    let mut act = Tensor3::zero(field, [a.dim(), n, n]);
    for (i, c) in chi.iter().enumerate() {
        for j in 0..n {
            act.set(i, j, j, c.clone());
        }
    }
    AssocAlgebra::new(field, r.labels.clone(), r.mult.clone(), r.unit.clone(), act)
}

/// Apply bases changes to all three members; the columns of each matrix are
/// the new basis vectors in old coordinates.
pub fn transform_triple(t: &AssocTriple, pa: &DenseMatrix, pr: &DenseMatrix, pm: &DenseMatrix) -> Result<AssocTriple> {
    let a = t.a.change_basis(pa)?;
    let r = t.r.change_base_basis(pa)?.change_basis(pr)?;
    let m = t.m.change_algebra_basis(pr)?.change_basis(pm)?;
    Ok(AssocTriple { a, r, m })
}

/// Number of structurally distinct triples [`catalog_triple`] knows.
pub const CATALOG_SIZE: usize = 16;

/// Small triples with every dimension at most 3.
pub fn catalog_triple(field: FieldSpec, idx: usize) -> Result<AssocTriple> {
    let k = commutative("base_field", field, &[])?;
    let d = dual_numbers(field);
    let kk = k_times_k(field);
    let std = |a: &CommutativeAlgebra, r: &str, params: &[i64], m: &str| -> Result<AssocTriple> {
        let r = algebra_role(r, field, params, a)?;
        let m = module_role(m, &r)?;
        Ok(AssocTriple { a: a.clone(), r, m })
    };
    let t = match idx % CATALOG_SIZE {
        0 => std(&k, "base_field", &[], "regular")?,
        1 => std(&k, "dual_numbers", &[], "regular")?,
        2 => std(&k, "dual_numbers", &[], "trivial_module")?,
        3 => std(&k, "k_times_k", &[], "regular")?,
        4 => {
            let r = algebra_role("k_times_k", field, &[], &k)?;
            let one = field.one();
            let zero = field.zero();
            let m = super::builtins::character_bimodule(&r, &[one.clone(), zero.clone()], &[zero, one])?;
            AssocTriple { a: k.clone(), r, m }
        }
        5 => std(&k, "trunc_poly", &[3], "trivial_module")?,
        6 => std(&d, "quotient_k", &[], "trivial_module")?,
        7 => std(&d, "r_equals_a", &[], "regular")?,
        8 => std(&d, "r_equals_a", &[], "trivial_module")?,
        9 => std(&kk, "quotient_point", &[], "regular")?,
        10 => std(&kk, "regular", &[], "regular")?,
        11 => std(&kk, "regular", &[], "trivial_module")?,
        12 => {
            // e acts on K[t]/(t^3) as t^2
            let t3 = trunc_poly(field, 3)?;
            let mut act = Tensor3::zero(field, [2, 3, 3]);
            for j in 0..3 {
                act.set(0, j, j, field.one());
                if j == 0 {
                    act.set(1, 0, 2, field.one());
                }
            }
            let r = AssocAlgebra::new(field, t3.labels.clone(), t3.mult.clone(), t3.unit.clone(), act)?;
            let m = module_role("trivial_module", &r)?;
            AssocTriple { a: d.clone(), r, m }
        }
        13 => {
            let t3 = trunc_poly(field, 3)?;
            let r = quotient_by_character(&t3, &first_character(&t3.mult, &t3.unit).expect("augmentation"))?;
            let m = module_role("regular", &r)?;
            AssocTriple { a: t3, r, m }
        }
        14 => {
            let chi = first_character(&d.mult, &d.unit).expect("augmentation");
            let r = algebra_via_character(&d, &dual_numbers(field), &chi)?;
            let m = module_role("regular", &r)?;
            AssocTriple { a: d.clone(), r, m }
        }
        _ => {
            let chi = vec![field.zero(), field.one()];
            let r = algebra_via_character(&kk, &dual_numbers(field), &chi)?;
            let m = module_role("trivial_module", &r)?;
            AssocTriple { a: kk.clone(), r, m }
        }
    };
    Ok(t)
}

/// A catalog triple in random bases.
pub fn random_triple(rng: &mut impl Rng, field: FieldSpec) -> Result<AssocTriple> {
    let idx = rng.gen_range(0..CATALOG_SIZE);
    randomized_catalog_triple(rng, field, idx)
}

pub fn randomized_catalog_triple(rng: &mut impl Rng, field: FieldSpec, idx: usize) -> Result<AssocTriple> {
    let t = catalog_triple(field, idx)?;
    let (na, nr, nm) = t.dims();
    let pa = random_basis_change(rng, field, na);
    let pr = random_basis_change(rng, field, nr);
    let pm = random_basis_change(rng, field, nm);
    transform_triple(&t, &pa, &pr, &pm)
}

/// `count` random triples, cycling through the catalog so every structure
/// appears, each in a fresh random basis.
pub fn random_suite(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<AssocTriple>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| randomized_catalog_triple(&mut rng, field, i)).collect()
}

/// Small Lie triples: `A` in {K, dual numbers, K x K}; `L` abelian,
/// `[x, y] = y`, `K` through a character of `A`, or `sl2` (over `K` only);
/// `M` trivial through a character of `A` or adjoint.
pub fn random_lie_triple(rng: &mut impl Rng, field: FieldSpec) -> Result<LieTriple> {
    let a = match rng.gen_range(0..3) {
        0 => base_field(field),
        1 => dual_numbers(field),
        _ => k_times_k(field),
    };
    let chis = characters(&a.mult, &a.unit, 8);
    let chi = chis.choose(rng).expect("every catalog A has a character").clone();
    let l = match rng.gen_range(0..if a.dim() == 1 { 5 } else { 4 }) {
        0 => abelian_lie(&a, 1),
        1 => abelian_lie(&a, 2),
        2 => affine_lie(&a),
        3 => character_lie(&a, &chi)?,
        _ => sl2(field, &a),
    };
    let m = if rng.gen_bool(0.5) { trivial_lie_module(&a, &l, &chi)? } else { adjoint_lie_module(&l)? };
    LieTriple { a, l, m }.checked()
}

pub fn random_lie_suite(field: FieldSpec, seed: u64, count: usize) -> Result<Vec<LieTriple>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_lie_triple(&mut rng, field)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid_and_small() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            for i in 0..CATALOG_SIZE {
                let t = catalog_triple(f, i).unwrap();
                let (a, r, m) = t.dims();
                assert!(a <= 3 && r <= 3 && m <= 3);
                assert!(t.validate().is_valid(), "catalog {i} over {f}: {:?}", t.validate());
            }
        }
    }

    #[test]
    fn random_lie_triples_are_valid() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            assert_eq!(random_lie_suite(f, 3, 20).unwrap().len(), 20);
        }
    }

    #[test]
    fn random_bases_preserve_validity() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            for t in random_suite(f, 7, 2 * CATALOG_SIZE).unwrap() {
                assert!(t.validate().is_valid());
            }
        }
    }

    #[test]
    fn deterministic() {
        let f = FieldSpec::Rationals;
        assert_eq!(random_suite(f, 3, 5).unwrap(), random_suite(f, 3, 5).unwrap());
    }
}
