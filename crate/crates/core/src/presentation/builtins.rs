//! Builtin example library.
//!
//! Builtins are resolved by role. An algebra name used for `A` gives a
//! commutative algebra; used for `R` over a given `A` it gives an
//! `A`-algebra (scalar action over `A = K`, regular action when the tables
//! agree). Module names are resolved against `R` (or `A` and `L`).

use super::json::default_a_action;
use super::{
    labels_with_prefix, AssocAlgebra, AssocTriple, Bimodule, CommutativeAlgebra, LieAlgebra, LieModule, LieTriple,
    Tensor3,
};
use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Where a builtin can be used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Algebra,
    OverAlgebra,
    Module,
    Lie,
    LieModule,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Algebra => "A or R",
            Role::OverAlgebra => "R",
            Role::Module => "M",
            Role::Lie => "L",
            Role::LieModule => "M (Lie)",
        }
    }
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub roles: &'static [Role],
    pub params: &'static str,
    pub summary: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "base_field", roles: &[Role::Algebra], params: "", summary: "K itself; bundle (K, K, K)" },
    CatalogEntry {
        name: "dual_numbers",
        roles: &[Role::Algebra],
        params: "",
        summary: "K[e]/(e^2), basis 1, e; bundle (K[e]/(e^2), K, K)",
    },
    CatalogEntry {
        name: "k_times_k",
        roles: &[Role::Algebra],
        params: "",
        summary: "K x K with idempotents e1, e2; bundle (K x K, K x K, K x K)",
    },
    CatalogEntry {
        name: "trunc_poly",
        roles: &[Role::Algebra],
        params: "n (default 2)",
        summary: "K[t]/(t^n), basis 1, t, .., t^(n-1); bundle (K, K[t]/(t^n), K[t]/(t^n))",
    },
    CatalogEntry {
        name: "r_equals_a",
        roles: &[Role::OverAlgebra],
        params: "",
        summary: "R = A with the regular action; bundle (K[e]/(e^2), same, same)",
    },
    CatalogEntry {
        name: "quotient_point",
        roles: &[Role::OverAlgebra],
        params: "",
        summary: "R = K x 0 = A/(e2) over A = K x K, projective over A; bundle (K x K, K x 0, K x 0)",
    },
    CatalogEntry {
        name: "quotient_k",
        roles: &[Role::OverAlgebra],
        params: "",
        summary: "R = K with A acting through the first character of A found",
    },
    CatalogEntry {
        name: "regular",
        roles: &[Role::Module],
        params: "",
        summary: "M = R with left and right multiplication",
    },
    CatalogEntry {
        name: "trivial_module",
        roles: &[Role::Module, Role::LieModule],
        params: "",
        summary: "M = K through a character of R (Lie: L acts by 0, A through a character)",
    },
    CatalogEntry { name: "zero_module", roles: &[Role::Module, Role::LieModule], params: "", summary: "M = 0" },
    CatalogEntry {
        name: "sl2",
        roles: &[Role::Lie],
        params: "",
        summary: "A (x) sl2, basis e, f, h; bundle (K, sl2, K)",
    },
    CatalogEntry {
        name: "abelian_lie",
        roles: &[Role::Lie],
        params: "n (default 1)",
        summary: "abelian A^n; bundle (K, K^n, K)",
    },
    CatalogEntry {
        name: "projective_lie",
        roles: &[Role::Lie],
        params: "",
        summary: "L = (K x 0) x over A = K x K, abelian and projective; bundle (K x K, L, K)",
    },
    CatalogEntry {
        name: "dual_lie",
        roles: &[Role::Lie],
        params: "",
        summary: "L = K over K[e]/(e^2) with e acting by 0; bundle (K[e]/(e^2), L, K)",
    },
];

fn int(field: FieldSpec, v: i64) -> Scalar {
    field.from_i64(v)
}

pub fn base_field(field: FieldSpec) -> CommutativeAlgebra {
    CommutativeAlgebra::new(field, vec!["1".into()], Tensor3::from_fn(field, [1, 1, 1], |_, _, _| 1), vec![field.one()])
        .expect("static shape")
}

/// `K[t]/(t^n)` in the monomial basis.
pub fn trunc_poly(field: FieldSpec, n: usize) -> Result<CommutativeAlgebra> {
    if n == 0 {
        return Err(Error::BadParams("trunc_poly needs n >= 1".into()));
    }
    let mult = Tensor3::from_fn(field, [n, n, n], |i, j, k| (i + j == k) as i64);
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect();
    let mut unit = vec![field.zero(); n];
    unit[0] = field.one();
    CommutativeAlgebra::new(field, labels, mult, unit)
}

pub fn dual_numbers(field: FieldSpec) -> CommutativeAlgebra {
    let mut a = trunc_poly(field, 2).expect("n = 2");
    a.labels = vec!["1".into(), "e".into()];
    a
}

pub fn k_times_k(field: FieldSpec) -> CommutativeAlgebra {
    CommutativeAlgebra::new(
        field,
        vec!["e1".into(), "e2".into()],
        Tensor3::from_fn(field, [2, 2, 2], |i, j, k| (i == j && j == k) as i64),
        vec![field.one(), field.one()],
    )
    .expect("static shape")
}

fn param(params: &[i64], idx: usize, default: i64) -> i64 {
    params.get(idx).copied().unwrap_or(default)
}

fn no_params(name: &str, params: &[i64]) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} takes no parameters")))
    }
}

/// Commutative algebras by name.
pub fn commutative(name: &str, field: FieldSpec, params: &[i64]) -> Result<CommutativeAlgebra> {
    match name {
        "base_field" => no_params(name, params).map(|_| base_field(field)),
        "dual_numbers" => no_params(name, params).map(|_| dual_numbers(field)),
        "k_times_k" => no_params(name, params).map(|_| k_times_k(field)),
        "trunc_poly" => {
            let n = param(params, 0, 2);
            if !(1..=16).contains(&n) || params.len() > 1 {
                return Err(Error::BadParams(format!("trunc_poly: n must be in 1..=16, got {params:?}")));
            }
            trunc_poly(field, n as usize)
        }
        _ if CATALOG.iter().any(|e| e.name == name) => {
            Err(Error::BadParams(format!("{name} is not a commutative algebra builtin")))
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// `K` as an `A`-algebra through the character `chi` of `A`.
pub fn quotient_by_character(a: &CommutativeAlgebra, chi: &[Scalar]) -> Result<AssocAlgebra> {
    let field = a.field;
    let mut act = Tensor3::zero(field, [a.dim(), 1, 1]);
    for (i, c) in chi.iter().enumerate() {
        act.set(i, 0, 0, c.clone());
    }
    AssocAlgebra::new(field, vec!["1".into()], Tensor3::from_fn(field, [1, 1, 1], |_, _, _| 1), vec![field.one()], act)
}

/// `A` as an algebra over itself.
pub fn regular_algebra(a: &CommutativeAlgebra) -> AssocAlgebra {
    AssocAlgebra::new(a.field, a.labels.clone(), a.mult.clone(), a.unit.clone(), a.mult.clone()).expect("same shapes")
}

/// Resolve `name` in the role of `R` over `a`.
pub fn algebra_role(name: &str, field: FieldSpec, params: &[i64], a: &CommutativeAlgebra) -> Result<AssocAlgebra> {
    match name {
        "r_equals_a" | "regular" => {
            no_params(name, params)?;
            Ok(regular_algebra(a))
        }
        "quotient_point" => {
            no_params(name, params)?;
            if *a != k_times_k(field) {
                return Err(Error::BadParams("quotient_point needs A = k_times_k".into()));
            }
            let mut r = quotient_by_character(a, &[field.one(), field.zero()])?;
            r.labels = vec!["e1".into()];
            Ok(r)
        }
        "quotient_k" => {
            no_params(name, params)?;
            let chi = first_character(&a.mult, &a.unit)
                .ok_or_else(|| Error::BadParams("quotient_k: no character of A found".into()))?;
            quotient_by_character(a, &chi)
        }
        _ => {
            let c = commutative(name, field, params)?;
            let act = default_a_action(a, c.dim(), Some(&c.mult))
                .map_err(|_| Error::BadParams(format!("{name}: no default A-action over this A")))?;
            AssocAlgebra::new(field, c.labels, c.mult, c.unit, act)
        }
    }
}

/// `K` as an `R`-bimodule through characters `left` and `right` of `R`.
pub fn character_bimodule(r: &AssocAlgebra, left: &[Scalar], right: &[Scalar]) -> Result<Bimodule> {
    let field = r.field;
    let mut l = Tensor3::zero(field, [r.dim(), 1, 1]);
    let mut rt = Tensor3::zero(field, [1, r.dim(), 1]);
    for i in 0..r.dim() {
        l.set(i, 0, 0, left[i].clone());
        rt.set(0, i, 0, right[i].clone());
    }
    Bimodule::new(field, vec!["m".into()], l, rt)
}

pub fn regular_bimodule(r: &AssocAlgebra) -> Bimodule {
    Bimodule::new(r.field, r.labels.clone(), r.mult.clone(), r.mult.clone()).expect("same shapes")
}

pub fn zero_bimodule(r: &AssocAlgebra) -> Bimodule {
    Bimodule::new(r.field, vec![], Tensor3::zero(r.field, [r.dim(), 0, 0]), Tensor3::zero(r.field, [0, r.dim(), 0]))
        .expect("empty shapes")
}

/// Resolve `name` in the role of `M` over `r`.
pub fn module_role(name: &str, r: &AssocAlgebra) -> Result<Bimodule> {
    match name {
        "regular" => Ok(regular_bimodule(r)),
        "trivial_module" => {
            let chi = first_character(&r.mult, &r.unit)
                .ok_or_else(|| Error::BadParams("trivial_module: R has no character".into()))?;
            character_bimodule(r, &chi, &chi)
        }
        "zero_module" => Ok(zero_bimodule(r)),
        _ if CATALOG.iter().any(|e| e.name == name) => {
            Err(Error::BadParams(format!("{name} is not a bimodule builtin")))
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// `A (x) g` for a Lie algebra `g` over `K` given by its bracket constants.
pub fn extend_scalars(a: &CommutativeAlgebra, labels: &[&str], bracket: &Tensor3) -> Result<LieAlgebra> {
    let field = a.field;
    let (na, ng) = (a.dim(), bracket.dims()[0]);
    let n = na * ng;
    let mut br = Tensor3::zero(field, [n, n, n]);
    let mut act = Tensor3::zero(field, [na, n, n]);
    for i in 0..na {
        for j in 0..ng {
            for k in 0..na {
                for l in 0..ng {
                    for s in 0..na {
                        let c = a.mult.get(i, k, s);
                        if c.is_zero() {
                            continue;
                        }
                        for t in 0..ng {
                            let b = bracket.get(j, l, t);
                            if !b.is_zero() {
                                let idx = s * ng + t;
                                let v = br.get(i * ng + j, k * ng + l, idx) + &(c * b);
                                br.set(i * ng + j, k * ng + l, idx, v);
                            }
                        }
                        if l == 0 {
                            // a_k (e_i (x) x_j) = (a_k e_i) (x) x_j
                            let v = act.get(k, i * ng + j, s * ng + j) + c;
                            act.set(k, i * ng + j, s * ng + j, v);
                        }
                    }
                }
            }
        }
    }
    let names = if na == 1 {
        labels.iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|idx| format!("{}*{}", a.labels[idx / ng], labels[idx % ng])).collect()
    };
    LieAlgebra::new(field, names, br, act)
}

pub fn sl2(field: FieldSpec, a: &CommutativeAlgebra) -> LieAlgebra {
    // basis e, f, h: [e,f] = h, [h,e] = 2e, [h,f] = -2f
    let mut b = Tensor3::zero(field, [3, 3, 3]);
    let mut put = |i: usize, j: usize, k: usize, v: i64| {
        b.set(i, j, k, int(field, v));
        b.set(j, i, k, int(field, -v));
    };
    put(0, 1, 2, 1);
    put(2, 0, 0, 2);
    put(2, 1, 1, -2);
    extend_scalars(a, &["e", "f", "h"], &b).expect("consistent shapes")
}

pub fn abelian_lie(a: &CommutativeAlgebra, n: usize) -> LieAlgebra {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    extend_scalars(a, &refs, &Tensor3::zero(a.field, [n, n, n])).expect("consistent shapes")
}

/// One-dimensional abelian Lie algebra with `A` acting through `chi`.
pub fn character_lie(a: &CommutativeAlgebra, chi: &[Scalar]) -> Result<LieAlgebra> {
    let field = a.field;
    let mut act = Tensor3::zero(field, [a.dim(), 1, 1]);
    for (i, c) in chi.iter().enumerate() {
        act.set(i, 0, 0, c.clone());
    }
    LieAlgebra::new(field, vec!["x".into()], Tensor3::zero(field, [1, 1, 1]), act)
}

pub fn lie_role(name: &str, field: FieldSpec, params: &[i64], a: &CommutativeAlgebra) -> Result<LieAlgebra> {
    match name {
        "sl2" => no_params(name, params).map(|_| sl2(field, a)),
        "abelian_lie" => {
            let n = param(params, 0, 1);
            if !(0..=8).contains(&n) || params.len() > 1 {
                return Err(Error::BadParams(format!("abelian_lie: n must be in 0..=8, got {params:?}")));
            }
            Ok(abelian_lie(a, n as usize))
        }
        "projective_lie" => {
            no_params(name, params)?;
            if *a != k_times_k(field) {
                return Err(Error::BadParams("projective_lie needs A = k_times_k".into()));
            }
            character_lie(a, &[field.one(), field.zero()])
        }
        "dual_lie" => {
            no_params(name, params)?;
            if *a != dual_numbers(field) {
                return Err(Error::BadParams("dual_lie needs A = dual_numbers".into()));
            }
            character_lie(a, &[field.one(), field.zero()])
        }
        _ if CATALOG.iter().any(|e| e.name == name) => {
            Err(Error::BadParams(format!("{name} is not a Lie algebra builtin")))
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Trivial `L`-module `K` with `A` acting through `chi`.
pub fn trivial_lie_module(a: &CommutativeAlgebra, l: &LieAlgebra, chi: &[Scalar]) -> Result<LieModule> {
    let field = a.field;
    let mut act = Tensor3::zero(field, [a.dim(), 1, 1]);
    for (i, c) in chi.iter().enumerate() {
        act.set(i, 0, 0, c.clone());
    }
    LieModule::new(field, vec!["m".into()], Tensor3::zero(field, [l.dim(), 1, 1]), act)
}

/// `L` acting on itself by the bracket.
pub fn adjoint_lie_module(l: &LieAlgebra) -> Result<LieModule> {
    LieModule::new(l.field, l.labels.clone(), l.bracket.clone(), l.a_action.clone())
}

/// Two-dimensional non-abelian Lie algebra `[x, y] = y` over `A`.
pub fn affine_lie(a: &CommutativeAlgebra) -> LieAlgebra {
    let field = a.field;
    let mut b = Tensor3::zero(field, [2, 2, 2]);
    b.set(0, 1, 1, field.one());
    b.set(1, 0, 1, int(field, -1));
    extend_scalars(a, &["x", "y"], &b).expect("consistent shapes")
}

pub fn lie_module_role(name: &str, a: &CommutativeAlgebra, l: &LieAlgebra) -> Result<LieModule> {
    let field = a.field;
    match name {
        "trivial_module" => {
            let chi = first_character(&a.mult, &a.unit)
                .ok_or_else(|| Error::BadParams("trivial_module: A has no character".into()))?;
            trivial_lie_module(a, l, &chi)
        }
        "zero_module" => {
            LieModule::new(field, vec![], Tensor3::zero(field, [l.dim(), 0, 0]), Tensor3::zero(field, [a.dim(), 0, 0]))
        }
        _ if CATALOG.iter().any(|e| e.name == name) => {
            Err(Error::BadParams(format!("{name} is not a Lie module builtin")))
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

fn candidate_values(field: FieldSpec, dim: usize) -> Vec<Scalar> {
    let mut vals = vec![field.one(), field.zero()];
    match field {
        FieldSpec::PrimeField(p) if (p as f64).powi(dim as i32) <= 1e4 => {
            vals.extend((2..p).map(|v| field.from_i64(v as i64)));
        }
        _ => {
            for v in [-1i64, 2, -2] {
                let s = field.from_i64(v);
                if !vals.contains(&s) {
                    vals.push(s);
                }
            }
        }
    }
    vals
}

fn is_character(mult: &Tensor3, unit: &[Scalar], chi: &[Scalar]) -> bool {
    let n = chi.len();
    let field = mult.field();
    let eval = |v: &[Scalar]| v.iter().zip(chi).fold(field.zero(), |acc, (x, c)| &acc + &(x * c));
    if !eval(unit).is_one() {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if eval(mult.slice(i, j)) != &chi[i] * &chi[j] {
                return false;
            }
        }
    }
    true
}

/// Algebra maps `X -> K` found by bounded search, in a fixed order.
pub fn characters(mult: &Tensor3, unit: &[Scalar], limit: usize) -> Vec<Vec<Scalar>> {
    let n = unit.len();
    let field = mult.field();
    let vals = candidate_values(field, n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let chi: Vec<Scalar> = idx.iter().map(|&i| vals[i].clone()).collect();
        if is_character(mult, unit, &chi) {
            out.push(chi);
            if out.len() >= limit {
                return out;
            }
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vals.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

pub fn first_character(mult: &Tensor3, unit: &[Scalar]) -> Option<Vec<Scalar>> {
    characters(mult, unit, 1).into_iter().next()
}

/// A resolved builtin bundle.
#[derive(Clone, Debug)]
pub enum Bundle {
    Assoc(AssocTriple),
    Lie(LieTriple),
}

impl Bundle {
    pub fn expect_assoc(self) -> Result<AssocTriple> {
        match self {
            Bundle::Assoc(t) => Ok(t),
            Bundle::Lie(_) => Err(Error::BadParams("expected an associative bundle".into())),
        }
    }

    pub fn expect_lie(self) -> Result<LieTriple> {
        match self {
            Bundle::Lie(t) => Ok(t),
            Bundle::Assoc(_) => Err(Error::BadParams("expected a Lie bundle".into())),
        }
    }
}

/// The standard triple attached to each catalog name.
pub fn bundle(name: &str, field: FieldSpec, params: &[i64]) -> Result<Bundle> {
    let assoc = |a: CommutativeAlgebra, r_name: &str, r_params: &[i64], m_name: &str| -> Result<Bundle> {
        let r = algebra_role(r_name, field, r_params, &a)?;
        let m = module_role(m_name, &r)?;
        Ok(Bundle::Assoc(AssocTriple { a, r, m }.checked()?))
    };
    let lie = |a: CommutativeAlgebra, l_name: &str, l_params: &[i64]| -> Result<Bundle> {
        let l = lie_role(l_name, field, l_params, &a)?;
        let m = lie_module_role("trivial_module", &a, &l)?;
        Ok(Bundle::Lie(LieTriple { a, l, m }.checked()?))
    };
    match name {
        "base_field" => {
            no_params(name, params)?;
            assoc(base_field(field), "base_field", &[], "regular")
        }
        "dual_numbers" => {
            no_params(name, params)?;
            assoc(dual_numbers(field), "quotient_k", &[], "trivial_module")
        }
        "k_times_k" => {
            no_params(name, params)?;
            assoc(k_times_k(field), "regular", &[], "regular")
        }
        "trunc_poly" => assoc(base_field(field), "trunc_poly", params, "regular"),
        "r_equals_a" => {
            no_params(name, params)?;
            assoc(dual_numbers(field), "r_equals_a", &[], "regular")
        }
        "quotient_point" | "quotient_k" => {
            no_params(name, params)?;
            assoc(k_times_k(field), name, &[], "regular")
        }
        "sl2" | "abelian_lie" => lie(base_field(field), name, params),
        "projective_lie" => lie(k_times_k(field), name, params),
        "dual_lie" => lie(dual_numbers(field), name, params),
        "regular" | "trivial_module" | "zero_module" => {
            Err(Error::BadParams(format!("{name} is a module builtin; use it in the M position")))
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Labels for generic presentations.
pub fn generic_labels(prefix: &str, n: usize) -> Vec<String> {
    labels_with_prefix(prefix, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> [FieldSpec; 2] {
        [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()]
    }

    #[test]
    fn every_bundle_validates() {
        for f in fields() {
            for e in CATALOG {
                if e.roles.contains(&Role::Module) {
                    continue;
                }
                let b = bundle(e.name, f, &[]).unwrap_or_else(|err| panic!("{}: {err}", e.name));
                let report = match &b {
                    Bundle::Assoc(t) => t.validate(),
                    Bundle::Lie(t) => t.validate(),
                };
                assert!(report.is_valid(), "{} over {f}: {:?}", e.name, report);
            }
        }
    }

    #[test]
    fn catalog_dimensions() {
        let f = FieldSpec::Rationals;
        assert_eq!(commutative("base_field", f, &[]).unwrap().dim(), 1);
        let d = commutative("dual_numbers", f, &[]).unwrap();
        assert_eq!(d.dim(), 2);
        assert!(d.mul(&[f.zero(), f.one()], &[f.zero(), f.one()]).iter().all(Scalar::is_zero));
        let t = bundle("quotient_point", f, &[]).unwrap().expect_assoc().unwrap();
        assert_eq!(t.r.dim(), 1);
        assert_eq!(t.r.a_action.get(0, 0, 0), &f.one());
        assert_eq!(t.r.a_action.get(1, 0, 0), &f.zero());
        assert_eq!(commutative("trunc_poly", f, &[4]).unwrap().dim(), 4);
    }

    #[test]
    fn errors() {
        let f = FieldSpec::Rationals;
        assert!(matches!(bundle("nope", f, &[]), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(commutative("trunc_poly", f, &[0]), Err(Error::BadParams(_))));
        assert!(matches!(bundle("dual_numbers", f, &[3]), Err(Error::BadParams(_))));
        let d = dual_numbers(f);
        assert!(matches!(algebra_role("quotient_point", f, &[], &d), Err(Error::BadParams(_))));
    }

    #[test]
    fn characters_of_k_times_k() {
        let f = FieldSpec::prime(7).unwrap();
        let a = k_times_k(f);
        let chis = characters(&a.mult, &a.unit, 10);
        assert_eq!(chis, vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]]);
        let d = dual_numbers(f);
        assert_eq!(characters(&d.mult, &d.unit, 10), vec![vec![f.one(), f.zero()]]);
    }

    #[test]
    fn sl2_over_k_times_k() {
        let f = FieldSpec::Rationals;
        let a = k_times_k(f);
        let l = sl2(f, &a);
        assert_eq!(l.dim(), 6);
        assert!(l.validate(&a).is_valid());
    }
}
