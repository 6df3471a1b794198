//! One line per acceptance criterion; the test fails if any line fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use algcohom::bicomplex::{assemble, totalize};
use algcohom::cochain::DEFAULT_CAP;
use algcohom::extension::{AbelianExtension, ExtensionContext, SectionRule};
use algcohom::homology::{cohomology, hochschild_over_a, total_complex, Comparison};
use algcohom::lie::{lie_alpha, lie_cohomology};
use algcohom::linalg::{rank, DenseMatrix, SparseMatrix};
use algcohom::presentation::builtins::{
    adjoint_lie_module, affine_lie, algebra_role, base_field, bundle, commutative, lie_role, module_role,
    regular_algebra, trivial_lie_module,
};
use algcohom::presentation::random::{random_lie_suite, random_suite};
use algcohom::presentation::{AssocTriple, LieTriple};
use algcohom::{FieldSpec, Result};
use common::{dense_rank, Mat, F};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

fn fields() -> [FieldSpec; 2] {
    [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()]
}

fn suite() -> Vec<AssocTriple> {
    let mut out = random_suite(fields()[0], SEED, 10).unwrap();
    out.extend(random_suite(fields()[1], SEED + 1, 10).unwrap());
    out
}

fn triple(a: &str, r: &str, m: &str, field: FieldSpec) -> Result<AssocTriple> {
    let a = commutative(a, field, &[])?;
    let r = algebra_role(r, field, &[], &a)?;
    let m = module_role(m, &r)?;
    AssocTriple { a, r, m }.checked()
}

fn to_dense(m: &SparseMatrix) -> Mat {
    let f = F::of(m.field());
    let mut d = vec![vec![BigRational::zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        d[*r][*c] = f.lift(v);
    }
    d
}

fn dense_product_is_zero(f: F, a: &Mat, b: &Mat) -> bool {
    let inner = b.len();
    a.iter().all(|row| {
        (0..b.first().map_or(0, Vec::len)).all(|j| {
            let mut acc = BigRational::zero();
            for k in 0..inner {
                if !row[k].is_zero() && !b[k][j].is_zero() {
                    acc = f.add(&acc, &f.mul(&row[k], &b[k][j]));
                }
            }
            acc.is_zero()
        })
    })
}

type Verdict = Result<(bool, String)>;

fn c1_bicomplex_identities() -> Verdict {
    let triples = suite();
    let mut max_dim = 0;
    for (i, t) in triples.iter().enumerate() {
        let (a, r, m) = t.dims();
        max_dim = max_dim.max(a).max(r).max(m);
        for reduced in [true, false] {
            let bc = assemble(t, 3, reduced, DEFAULT_CAP)?;
            let c = &bc.checks;
            if c.dd == 0 || c.delta_delta == 0 || c.anticommute == 0 {
                return Ok((false, format!("triple {i}: empty identity check {c:?}")));
            }
            let tc = totalize(&bc)?;
            let f = F::of(tc.field);
            for n in 0..tc.diffs.len() - 1 {
                if !dense_product_is_zero(f, &to_dense(&tc.diffs[n + 1]), &to_dense(&tc.diffs[n])) {
                    return Ok((false, format!("triple {i}: D^{} D^{n} != 0", n + 1)));
                }
            }
        }
    }
    Ok((true, format!("{} triples, dims <= {max_dim}, p + q <= 4", triples.len())))
}

fn c2_low_degree_alpha() -> Verdict {
    for (i, t) in suite().iter().enumerate() {
        let c = Comparison::new(t, 3, DEFAULT_CAP)?;
        let (a0, a1, a2) = (c.alpha(0)?, c.alpha(1)?, c.alpha(2)?);
        if !(a0.iso && a1.iso && a2.mono && a2.rank == a2.source_dim) {
            return Ok((false, format!("triple {i}: {a0:?} {a1:?} {a2:?}")));
        }
    }
    Ok((true, "alpha^0, alpha^1 iso and alpha^2 injective on 20 triples".into()))
}

fn c3_projective() -> Verdict {
    let mut rows = Vec::new();
    for field in fields() {
        for m in ["regular", "trivial_module"] {
            let t = triple("k_times_k", "quotient_point", m, field)?;
            let v = Comparison::new(&t, 4, DEFAULT_CAP)?.verdict()?;
            let ok = v.entries.len() == 4 && v.entries.iter().all(|e| e.iso && e.source_dim == e.target_dim);
            if !ok {
                return Ok((false, format!("M = {m} over {field}: {:?}", v.entries)));
            }
            rows.push(format!("{m}/{field} {:?}", v.entries.iter().map(|e| e.target_dim).collect::<Vec<_>>()));
        }
    }
    Ok((true, rows.join("; ")))
}

fn c4_base_field() -> Verdict {
    let mut rows = Vec::new();
    for field in fields() {
        for r in ["base_field", "dual_numbers", "k_times_k"] {
            let t = triple("base_field", r, "regular", field)?;
            let ours = cohomology(&total_complex(&t, 4, DEFAULT_CAP)?).dims();
            let oracle = common::hochschild(&t.r, &t.m, 3);
            if ours != oracle {
                return Ok((false, format!("R = {r} over {field}: {ours:?} vs oracle {oracle:?}")));
            }
            rows.push(format!("{r}/{field} {ours:?}"));
        }
    }
    Ok((true, rows.join("; ")))
}

fn c5_free_vanishing() -> Verdict {
    for field in fields() {
        for a in ["dual_numbers", "k_times_k"] {
            for m in ["regular", "trivial_module", "zero_module"] {
                let t = triple(a, "r_equals_a", m, field)?;
                let dims = cohomology(&total_complex(&t, 5, DEFAULT_CAP)?).dims();
                if dims[2..=4].iter().any(|&d| d != 0) {
                    return Ok((false, format!("A = {a}, M = {m} over {field}: {dims:?}")));
                }
            }
        }
    }
    Ok((true, "H^2 = H^3 = H^4 = 0 for 12 cases".into()))
}

fn c6_discrepancy() -> Verdict {
    let field = FieldSpec::Rationals;
    let t = bundle("dual_numbers", field, &[])?.expect_assoc()?;
    let ctx = ExtensionContext::new(&t)?;
    let ext = AbelianExtension {
        s: regular_algebra(&t.a),
        projection: DenseMatrix::from_rows(field, vec![vec![field.one(), field.zero()]])?,
        inclusion: DenseMatrix::from_rows(field, vec![vec![field.zero()], vec![field.one()]])?,
    };
    ctx.validate_extension(&ext)?;
    let z = ctx.extract_cocycle2(&ext, SectionRule::First)?;
    let in_z2 = ctx.check_z2(&z)?.is_cocycle;
    let witness = ctx.is_coboundary2(&z)?.is_some();
    let h2 = cohomology(&ctx.total).dim(2);
    let h2_a = hochschild_over_a(&t, 3, DEFAULT_CAP)?.dim(2);
    let ok = in_z2 && !witness && h2 >= 1 && h2_a == 0;
    Ok((ok, format!("cocycle {in_z2}, witness {witness}, dim H^2 = {h2}, dim H^2_A = {h2_a}")))
}

fn c7_bruteforce() -> Verdict {
    let f2 = FieldSpec::prime(2)?;
    let cases = [
        ("base_field", "base_field", "regular"),
        ("base_field", "dual_numbers", "regular"),
        ("base_field", "dual_numbers", "trivial_module"),
        ("base_field", "k_times_k", "trivial_module"),
        ("dual_numbers", "quotient_k", "trivial_module"),
        ("dual_numbers", "r_equals_a", "trivial_module"),
        ("k_times_k", "quotient_point", "regular"),
    ];
    let mut rows = Vec::new();
    for (a, r, m) in cases {
        let t = triple(a, r, m, f2)?;
        let (da, dr, dm) = t.dims();
        assert!(da.max(dr).max(dm) <= 2);
        let ctx = ExtensionContext::new(&t)?;
        let c = ctx.classify_bruteforce()?;
        let h2 = cohomology(&ctx.total).dim(2);
        if c.classes != 1usize << h2 {
            return Ok((false, format!("({a}, {r}, {m}): {} classes, dim H^2 = {h2}", c.classes)));
        }
        rows.push(format!("{}=2^{h2}", c.classes));
    }
    Ok((true, rows.join(", ")))
}

fn c8_roundtrips() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut triples = random_suite(fields()[0], SEED + 2, 10)?;
    triples.extend(random_suite(fields()[1], SEED + 3, 10)?);
    let mut nonzero = 0;
    for (i, t) in triples.iter().enumerate() {
        let ctx = ExtensionContext::new(t)?;
        let z = ctx.random_cocycle2(&mut rng);
        if z != ctx.zero2() {
            nonzero += 1;
        }
        let ext = ctx.build_extension(&z)?;
        ctx.validate_extension(&ext)?;
        for rule in [SectionRule::First, SectionRule::Last] {
            if !ctx.cohomologous2(&z, &ctx.extract_cocycle2(&ext, rule)?)? {
                return Ok((false, format!("degree 2, triple {i}")));
            }
        }
        let ce = ctx.crossed_from_extension(&ext)?;
        ctx.validate_crossed(&ce)?;
        let w = ctx.crossed_to_cocycle(&ce, SectionRule::First)?;
        if !ctx.check_z3(&w)?.is_cocycle || ctx.is_coboundary3(&w)?.is_none() {
            return Ok((false, format!("degree 3, triple {i}")));
        }
    }
    Ok((true, format!("20 cocycles ({nonzero} nonzero), crossed classes in B^3")))
}

fn c9_explicit_formulas() -> Verdict {
    let mut checks = 0;
    for (i, t) in suite().iter().enumerate() {
        let ctx = ExtensionContext::new(t)?;
        for c in [ctx.z_consistency(3), ctx.b_consistency(3), ctx.z_consistency(2), ctx.b_consistency(2)] {
            if !c.agrees() {
                return Ok((false, format!("triple {i}: {c:?}")));
            }
            checks += 1;
        }
    }
    Ok((true, format!("{checks} subspace comparisons")))
}

fn lie_cases(field: FieldSpec) -> Result<Vec<LieTriple>> {
    let k = base_field(field);
    let one = [field.one()];
    let mut out = Vec::new();
    for l in [lie_role("sl2", field, &[], &k)?, lie_role("abelian_lie", field, &[2], &k)?, affine_lie(&k)] {
        out.push(LieTriple { a: k.clone(), m: trivial_lie_module(&k, &l, &one)?, l: l.clone() }.checked()?);
        out.push(LieTriple { a: k.clone(), m: adjoint_lie_module(&l)?, l }.checked()?);
    }
    out.extend(random_lie_suite(field, SEED, 10)?.into_iter().filter(|t| t.a.dim() == 1));
    Ok(out)
}

fn c10_lie() -> Verdict {
    let mut compared = 0;
    for field in fields() {
        for t in lie_cases(field)? {
            let ours = lie_cohomology(&t, 4, DEFAULT_CAP)?.dims();
            let oracle = common::chevalley_eilenberg(&t.l, &t.m, 3);
            if ours != oracle {
                return Ok((false, format!("{:?} over {field}: {ours:?} vs oracle {oracle:?}", t.l.labels)));
            }
            compared += 1;
        }
    }
    let q = FieldSpec::Rationals;
    let sl2 = lie_cohomology(&bundle("sl2", q, &[])?.expect_lie()?, 4, DEFAULT_CAP)?.dims();
    if sl2[1..=3] != [0, 0, 1] {
        return Ok((false, format!("sl2 trivial coefficients: {sl2:?}")));
    }
    for field in fields() {
        let v = lie_alpha(&bundle("projective_lie", field, &[])?.expect_lie()?, 4, DEFAULT_CAP)?;
        if v.entries.len() != 4 || !v.all_iso() {
            return Ok((false, format!("projective L over {field}: {:?}", v.entries)));
        }
    }
    Ok((true, format!("{compared} CE comparisons, sl2 H^1..3 = {:?}, projective iso", &sl2[1..=3])))
}

fn c11_rank_cross_check() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut deficient = 0;
    for i in 0..100 {
        let field = fields()[i % 2];
        let f = F::of(field);
        let rows = rng.gen_range(1..=80);
        let cols = rng.gen_range(1..=80);
        let density: f64 = rng.gen_range(0.02..0.3);
        let mut entries = Vec::new();
        if i % 4 < 2 {
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(density) {
                        entries.push((r, c, rng.gen_range(-9i64..=9)));
                    }
                }
            }
        } else {
            let k = rng.gen_range(0..=rows.min(cols));
            let u: Vec<Vec<i64>> = (0..rows).map(|_| (0..k).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let v: Vec<Vec<i64>> = (0..k).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            for r in 0..rows {
                for c in 0..cols {
                    let x: i64 = (0..k).map(|j| u[r][j] * v[j][c]).sum();
                    if x != 0 {
                        entries.push((r, c, x));
                    }
                }
            }
        }
        let mut dense = vec![vec![BigRational::zero(); cols]; rows];
        for (r, c, x) in &entries {
            dense[*r][*c] = f.int(*x);
        }
        let sparse = SparseMatrix::from_triplets(
            field,
            rows,
            cols,
            entries.iter().map(|&(r, c, x)| (r, c, field.from_i64(x))).collect(),
        )?;
        let (ours, oracle) = (rank(&sparse), dense_rank(f, &dense));
        if ours != oracle {
            return Ok((false, format!("matrix {i} ({rows}x{cols} over {field}): {ours} vs {oracle}")));
        }
        if ours < rows.min(cols) {
            deficient += 1;
        }
    }
    Ok((true, format!("100 matrices, {deficient} rank-deficient")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict, Option<Duration>); 11] = [
        ("bicomplex identities", c1_bicomplex_identities, Some(Duration::from_secs(60))),
        ("low-degree comparison maps", c2_low_degree_alpha, None),
        ("projective comparison iso", c3_projective, None),
        ("A = K matches Hochschild oracle", c4_base_field, Some(Duration::from_secs(30))),
        ("vanishing for R = A", c5_free_vanishing, None),
        ("nonsplit square-zero extension", c6_discrepancy, None),
        ("extension classes by enumeration", c7_bruteforce, Some(Duration::from_secs(300))),
        ("cocycle roundtrips", c8_roundtrips, None),
        ("explicit cocycle formulas", c9_explicit_formulas, None),
        ("Lie pipeline", c10_lie, Some(Duration::from_secs(60))),
        ("sparse rank against dense oracle", c11_rank_cross_check, None),
    ];
    let mut failed = Vec::new();
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let elapsed = start.elapsed();
        let (mut ok, detail) = match res {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let over = budget.is_some_and(|b| elapsed > b);
        ok &= !over;
        let line = format!(
            "criterion {:>2} {} {name} ({:.1}s){}: {detail}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if over { ", over budget" } else { "" },
        );
        writeln!(std::io::stderr().lock(), "{line}").unwrap();
        if !ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
