//! The full invariant suite at desk scale, seeded and deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cochain::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::extension::{ExtensionContext, SectionRule};
use crate::homology::{cohomology, hochschild_over_a, hochschild_over_k, total_complex, Comparison};
use crate::lie::{ce_cohomology, lie_alpha, lie_cohomology};
use crate::linalg::{rank, DenseMatrix, SparseMatrix};
use crate::presentation::builtins::{algebra_role, bundle, commutative, module_role};
use crate::presentation::random::{random_lie_suite, random_suite};
use crate::presentation::{AssocTriple, CommutativeAlgebra};
use crate::report::{Render, Table};
use crate::scalar::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Set when the failure is an internal consistency error.
    pub internal: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn internal_failure(&self) -> bool {
        self.checks.iter().any(|c| c.internal)
    }
}

impl Render for SelftestReport {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new(format!("selftest, seed {}", self.seed), &["check", "result", "detail"]);
        for c in &self.checks {
            t.push(vec![c.name.clone(), if c.passed { "pass" } else { "FAIL" }.to_string(), c.detail.clone()]);
        }
        vec![t]
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

/// Named checks in execution order.
pub const CHECKS: &[(&str, Check)] = &[
    ("bicomplex identities", bicomplex_identities),
    ("alpha^0, alpha^1 iso, alpha^2 mono", alpha_low_degrees),
    ("projective case: alpha^n iso", projective_iso),
    ("A = K matches classical Hochschild", base_field_degeneration),
    ("vanishing for R = A", free_vanishing),
    ("nonsplit extension of K by K", dual_numbers_discrepancy),
    ("extension classes over F_2", extension_classes),
    ("cocycle roundtrips", roundtrips),
    ("explicit Z^3 and B^3 formulas", z3_b3_consistency),
    ("Lie pipeline", lie_pipeline),
    ("sparse rank against dense elimination", rank_cross_check),
];

fn outcome(name: &str, res: Result<(bool, String)>) -> CheckOutcome {
    match res {
        Ok((passed, detail)) => CheckOutcome { name: name.into(), passed, internal: false, detail },
        Err(e) => CheckOutcome { name: name.into(), passed: false, internal: e.is_internal(), detail: e.to_string() },
    }
}

pub fn run(seed: u64) -> SelftestReport {
    let checks = CHECKS.iter().map(|(name, f)| outcome(name, f(seed))).collect();
    SelftestReport { seed, checks }
}

fn fields() -> [FieldSpec; 2] {
    [FieldSpec::Rationals, FieldSpec::prime(5).expect("prime")]
}

fn suite(seed: u64) -> Result<Vec<AssocTriple>> {
    let mut out = Vec::new();
    for (i, f) in fields().into_iter().enumerate() {
        out.extend(random_suite(f, seed.wrapping_add(i as u64), 10)?);
    }
    Ok(out)
}

fn triple(a: CommutativeAlgebra, r: &str, m: &str) -> Result<AssocTriple> {
    let r = algebra_role(r, a.field, &[], &a)?;
    let m = module_role(m, &r)?;
    AssocTriple { a, r, m }.checked()
}

fn bicomplex_identities(seed: u64) -> Result<(bool, String)> {
    let mut checked = 0;
    for t in suite(seed)? {
        let bc = crate::bicomplex::assemble(&t, 3, true, DEFAULT_CAP)?;
        crate::bicomplex::totalize(&bc)?;
        checked += bc.checks.dd;
    }
    Ok((true, format!("20 triples, {checked} bidegrees per identity, D^2 = 0")))
}

fn alpha_low_degrees(seed: u64) -> Result<(bool, String)> {
    for (i, t) in suite(seed)?.iter().enumerate() {
        let c = Comparison::new(t, 3, DEFAULT_CAP)?;
        let (a0, a1, a2) = (c.alpha(0)?, c.alpha(1)?, c.alpha(2)?);
        if !(a0.iso && a1.iso && a2.mono) {
            return Ok((false, format!("triple {i}: {a0:?} {a1:?} {a2:?}")));
        }
    }
    Ok((true, "20 triples".into()))
}

fn projective_iso(_: u64) -> Result<(bool, String)> {
    for f in fields() {
        for m in ["regular", "trivial_module"] {
            let t = triple(commutative("k_times_k", f, &[])?, "quotient_point", m)?;
            let v = Comparison::new(&t, 4, DEFAULT_CAP)?.verdict()?;
            if !v.all_iso() {
                return Ok((false, format!("M = {m} over {f}: {:?}", v.entries)));
            }
        }
    }
    Ok((true, "n = 0..3, M in {R, K}".into()))
}

fn base_field_degeneration(_: u64) -> Result<(bool, String)> {
    for f in fields() {
        for r in ["base_field", "dual_numbers", "k_times_k"] {
            let t = triple(commutative("base_field", f, &[])?, r, "regular")?;
            let ours = cohomology(&total_complex(&t, 4, DEFAULT_CAP)?).dims();
            let oracle = hochschild_over_k(&t.r, &t.m, 4, DEFAULT_CAP)?.dims();
            if ours != oracle {
                return Ok((false, format!("R = {r} over {f}: {ours:?} vs {oracle:?}")));
            }
        }
    }
    Ok((true, "n = 0..3".into()))
}

fn free_vanishing(_: u64) -> Result<(bool, String)> {
    for f in fields() {
        for a in ["dual_numbers", "k_times_k"] {
            for m in ["regular", "trivial_module"] {
                let alg = commutative(a, f, &[])?;
                let t = triple(alg, "r_equals_a", m)?;
                let dims = cohomology(&total_complex(&t, 5, DEFAULT_CAP)?).dims();
                if dims[2..=4].iter().any(|&d| d != 0) {
                    return Ok((false, format!("A = {a}, M = {m} over {f}: {dims:?}")));
                }
            }
        }
    }
    Ok((true, "H^2..H^4 = 0".into()))
}

fn dual_numbers_discrepancy(_: u64) -> Result<(bool, String)> {
    let f = FieldSpec::Rationals;
    let t = bundle("dual_numbers", f, &[])?.expect_assoc()?;
    let ctx = ExtensionContext::new(&t)?;
    let s = crate::presentation::builtins::regular_algebra(&t.a);
    let ext = crate::extension::AbelianExtension {
        s,
        projection: DenseMatrix::from_rows(f, vec![vec![f.one(), f.zero()]])?,
        inclusion: DenseMatrix::from_rows(f, vec![vec![f.zero()], vec![f.one()]])?,
    };
    let z = ctx.extract_cocycle2(&ext, SectionRule::First)?;
    let in_z2 = ctx.check_z2(&z)?.is_cocycle;
    let witness = ctx.is_coboundary2(&z)?;
    let h2 = cohomology(&ctx.total).dim(2);
    let h2_a = hochschild_over_a(&t, 3, DEFAULT_CAP)?.dim(2);
    let ok = in_z2 && witness.is_none() && h2 >= 1 && h2_a == 0;
    Ok((ok, format!("dim H^2 = {h2}, dim H^2_A = {h2_a}")))
}

fn extension_classes(_: u64) -> Result<(bool, String)> {
    let f2 = FieldSpec::prime(2)?;
    let cases = [
        ("base_field", "base_field", "regular"),
        ("dual_numbers", "quotient_k", "trivial_module"),
        ("base_field", "dual_numbers", "trivial_module"),
        ("k_times_k", "quotient_point", "regular"),
    ];
    let mut detail = Vec::new();
    for (a, r, m) in cases {
        let t = triple(commutative(a, f2, &[])?, r, m)?;
        let c = ExtensionContext::new(&t)?.classify_bruteforce()?;
        if !c.consistent() {
            return Ok((false, format!("({a}, {r}, {m}): {c:?}")));
        }
        detail.push(format!("{}", c.classes));
    }
    Ok((true, format!("classes {}", detail.join(", "))))
}

fn roundtrips(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples = random_suite(FieldSpec::prime(5)?, seed, 20)?;
    for (i, t) in triples.iter().enumerate() {
        let ctx = ExtensionContext::new(t)?;
        let z = ctx.random_cocycle2(&mut rng);
        let ext = ctx.build_extension(&z)?;
        let back = ctx.extract_cocycle2(&ext, SectionRule::First)?;
        if !ctx.cohomologous2(&z, &back)? {
            return Ok((false, format!("degree 2, triple {i}")));
        }
        let ce = ctx.crossed_from_extension(&ext)?;
        let w = ctx.crossed_to_cocycle(&ce, SectionRule::First)?;
        if ctx.is_coboundary3(&w)?.is_none() {
            return Ok((false, format!("degree 3, triple {i}")));
        }
    }
    Ok((true, "20 cocycles in degree 2 and 3".into()))
}

fn z3_b3_consistency(seed: u64) -> Result<(bool, String)> {
    for (i, t) in suite(seed)?.iter().enumerate() {
        let ctx = ExtensionContext::new(t)?;
        for n in [2, 3] {
            for c in [ctx.z_consistency(n), ctx.b_consistency(n)] {
                if !c.agrees() {
                    return Ok((false, format!("triple {i}: {c:?}")));
                }
            }
        }
    }
    Ok((true, "Z^2, B^2, Z^3, B^3 on 20 triples".into()))
}

fn lie_pipeline(seed: u64) -> Result<(bool, String)> {
    let q = FieldSpec::Rationals;
    let sl2 = bundle("sl2", q, &[])?.expect_lie()?;
    let dims = lie_cohomology(&sl2, 4, DEFAULT_CAP)?.dims();
    if dims[1..] != [0, 0, 1] {
        return Ok((false, format!("sl2: {dims:?}")));
    }
    let proj = bundle("projective_lie", q, &[])?.expect_lie()?;
    if !lie_alpha(&proj, 4, DEFAULT_CAP)?.all_iso() {
        return Ok((false, "projective L: alpha not iso".into()));
    }
    for t in random_lie_suite(q, seed, 10)? {
        if t.a.dim() == 1 && lie_cohomology(&t, 4, DEFAULT_CAP)?.dims() != ce_cohomology(&t, 4, DEFAULT_CAP)?.dims() {
            return Ok((false, "A = K differs from CE".into()));
        }
    }
    Ok((true, "sl2 H^1..H^3 = 0, 0, 1; projective iso; A = K is CE".into()))
}

fn dense_rank(m: &SparseMatrix) -> usize {
    let mut d = DenseMatrix::zero(m.field(), m.rows(), m.cols());
    for (r, c, v) in m.entries() {
        d.set(*r, *c, v.clone());
    }
    d.rref().1.len()
}

fn rank_cross_check(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..40 {
        let f = fields()[i % 2];
        let (rows, cols) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
        let density = rng.gen_range(0.05..0.5);
        let mut entries = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    entries.push((r, c, f.from_i64(rng.gen_range(-9..=9))));
                }
            }
        }
        let m = SparseMatrix::from_triplets(f, rows, cols, entries)?;
        let (a, b) = (rank(&m), dense_rank(&m));
        if a != b {
            return Err(Error::InconsistentWithMatrixKernel(format!("matrix {i}: sparse {a}, dense {b}")));
        }
    }
    Ok((true, "40 random matrices".into()))
}
