mod common;

use algcohom::cochain::{BiDegree, DEFAULT_CAP};
use algcohom::extension::ExtensionContext;
use algcohom::homology::{cohomology, total_complex};
use algcohom::lie::lie_cohomology;
use algcohom::linalg::{rank, SparseMatrix};
use algcohom::presentation::random::{catalog_triple, random_lie_triple, randomized_catalog_triple, CATALOG_SIZE};
use algcohom::{FieldSpec, Scalar};
use common::{dense_rank, F};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(prime: bool) -> FieldSpec {
    if prime {
        FieldSpec::prime(5).unwrap()
    } else {
        FieldSpec::Rationals
    }
}

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sparse_rank_matches_dense((rows, cols, data) in matrix(), prime in any::<bool>()) {
        let k = field(prime);
        let f = F::of(k);
        let mut dense = vec![vec![BigRational::zero(); cols]; rows];
        let mut entries = Vec::new();
        for (i, &x) in data.iter().enumerate() {
            dense[i / cols][i % cols] = f.int(x);
            entries.push((i / cols, i % cols, k.from_i64(x)));
        }
        let sparse = SparseMatrix::from_triplets(k, rows, cols, entries).unwrap();
        prop_assert_eq!(rank(&sparse), dense_rank(f, &dense));
    }

    #[test]
    fn scalar_text_roundtrip(num in -1000i64..1000, den in 1i64..50, prime in any::<bool>()) {
        prop_assume!(!prime || den % 5 != 0);
        let k = field(prime);
        let s = Scalar::parse(&format!("{num}/{den}"), k).unwrap();
        prop_assert_eq!(Scalar::parse(&s.render(), k).unwrap(), s);
    }

    #[test]
    fn zero_denominator_is_rejected(num in -1000i64..1000, prime in any::<bool>()) {
        let den = if prime { 5 } else { 0 };
        let text = format!("{num}/{den}");
        prop_assert!(Scalar::parse(&text, field(prime)).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cohomology_is_basis_independent(idx in 0..CATALOG_SIZE, seed in any::<u64>(), prime in any::<bool>()) {
        let k = field(prime);
        let base = catalog_triple(k, idx).unwrap();
        let moved = randomized_catalog_triple(&mut ChaCha8Rng::seed_from_u64(seed), k, idx).unwrap();
        let dims = |t| cohomology(&total_complex(t, 3, DEFAULT_CAP).unwrap()).dims();
        prop_assert_eq!(dims(&base), dims(&moved));
    }

    #[test]
    fn coboundaries_are_cocycles(idx in 0..CATALOG_SIZE, seed in any::<u64>(), prime in any::<bool>()) {
        let k = field(prime);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = randomized_catalog_triple(&mut rng, k, idx).unwrap();
        let ctx = ExtensionContext::new(&t).unwrap();
        let h = ctx.random_cochain(&mut rng, BiDegree { p: 0, q: 1 });
        let b = ctx.coboundary2(&h).unwrap();
        prop_assert!(ctx.check_z2(&b).unwrap().is_cocycle);
        prop_assert!(ctx.is_coboundary2(&b).unwrap().is_some());
    }

    #[test]
    fn lie_over_base_field_matches_ce(seed in any::<u64>(), prime in any::<bool>()) {
        let k = field(prime);
        let t = random_lie_triple(&mut ChaCha8Rng::seed_from_u64(seed), k).unwrap();
        prop_assume!(t.a.dim() == 1);
        prop_assert_eq!(lie_cohomology(&t, 4, DEFAULT_CAP).unwrap().dims(), common::chevalley_eilenberg(&t.l, &t.m, 3));
    }
}
