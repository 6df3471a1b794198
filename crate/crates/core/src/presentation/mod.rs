//! Structure-constant presentations of the algebraic inputs and their
//! axiom checks.
//!
//! Conventions for the constant arrays:
//! - algebra `mult[i][j][k]`: `e_i * e_j = sum_k mult[i][j][k] e_k`
//! - A-action `a_action[i][j][k]`: `a_i . x_j = sum_k a_action[i][j][k] x_k`
//! - bimodule `left[i][j][k]`: `r_i m_j`, `right[i][j][k]`: `m_i r_j`
//! - Lie `bracket[i][j][k]`: `[x_i, x_j]`; Lie module `action[i][j][k]`: `x_i . m_j`

pub mod builtins;
mod json;
pub mod random;
mod tensor;

use serde::{Deserialize, Serialize};

pub use json::{load_presentation_file, PresentationFile};
pub use tensor::{unit_vec, vec_add, vec_is_zero, vec_scale, vec_sub, Tensor3};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{FieldSpec, Scalar};

/// One violated identity with the witnessing basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub identity: String,
    pub indices: Vec<usize>,
}

/// Outcome of [`validate`]-style checks; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, identity: &str, indices: &[usize]) {
        if !ok {
            self.violations.push(Violation { identity: identity.to_string(), indices: indices.to_vec() });
        }
    }

    fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn into_result(self, what: &str) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let first = &self.violations[0];
            Err(Error::ValidationFailure(format!(
                "{what}: {} violation(s), first: {} at {:?}",
                self.violations.len(),
                first.identity,
                first.indices
            )))
        }
    }
}

pub(crate) fn labels_with_prefix(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_vec(v: &[Scalar], dim: usize, what: &str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::Shape(format!("{what}: expected length {dim}, got {}", v.len())));
    }
    Ok(())
}

fn check_dims(t: &Tensor3, dims: [usize; 3], what: &str) -> Result<()> {
    if t.dims() != dims {
        return Err(Error::Shape(format!("{what}: expected shape {dims:?}, got {:?}", t.dims())));
    }
    Ok(())
}

fn check_field(t: &Tensor3, field: FieldSpec) -> Result<()> {
    if t.field() != field {
        return Err(Error::FieldMismatch(t.field(), field));
    }
    Ok(())
}

/// Associativity and two-sided unit for a multiplication table.
fn validate_unital_associative(mult: &Tensor3, unit: &[Scalar], report: &mut ValidationReport) {
    let n = mult.dims()[0];
    let field = mult.field();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let left = mult.apply(mult.slice(i, j), &unit_vec(field, n, k));
                let right = mult.apply(&unit_vec(field, n, i), mult.slice(j, k));
                report.check(left == right, "associativity (e_i e_j) e_k = e_i (e_j e_k)", &[i, j, k]);
            }
        }
    }
    for i in 0..n {
        let e = unit_vec(field, n, i);
        report.check(mult.apply(unit, &e) == e, "left unit 1*e_i = e_i", &[i]);
        report.check(mult.apply(&e, unit) == e, "right unit e_i*1 = e_i", &[i]);
    }
}

/// Unital A-module axioms for an action table `a_i . x_j`.
fn validate_module_over(a: &CommutativeAlgebra, action: &Tensor3, report: &mut ValidationReport, what: &str) {
    let n = action.dims()[1];
    let field = a.field;
    for j in 0..n {
        let x = unit_vec(field, n, j);
        report.check(action.apply(&a.unit, &x) == x, &format!("{what}: 1_A . x = x"), &[j]);
    }
    for i in 0..a.dim() {
        for k in 0..a.dim() {
            for j in 0..n {
                let lhs = action.apply(&unit_vec(field, a.dim(), i), action.slice(k, j));
                let rhs = action.apply(a.mult.slice(i, k), &unit_vec(field, n, j));
                report.check(lhs == rhs, &format!("{what}: a(b.x) = (ab).x"), &[i, k, j]);
            }
        }
    }
}

/// Commutative unital associative algebra `A` over the ground field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativeAlgebra {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    pub mult: Tensor3,
    pub unit: Vec<Scalar>,
}

impl CommutativeAlgebra {
    pub fn new(field: FieldSpec, labels: Vec<String>, mult: Tensor3, unit: Vec<Scalar>) -> Result<Self> {
        let n = labels.len();
        check_dims(&mult, [n, n, n], "mult")?;
        check_field(&mult, field)?;
        check_vec(&unit, n, "unit")?;
        Ok(CommutativeAlgebra { field, labels, mult, unit })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mult.apply(x, y)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        validate_unital_associative(&self.mult, &self.unit, &mut report);
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                report.check(
                    self.mult.slice(i, j) == self.mult.slice(j, i),
                    "commutativity e_i e_j = e_j e_i",
                    &[i, j],
                );
            }
        }
        report
    }

    /// Re-express in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &DenseMatrix) -> Result<Self> {
        let inv = p.inverse().ok_or_else(|| Error::BadParams("singular basis change".into()))?;
        let mult = self.mult.transform(p, p, &inv);
        let unit = inv.mul_vec(&self.unit);
        CommutativeAlgebra::new(self.field, self.labels.clone(), mult, unit)
    }
}

/// Associative unital `A`-algebra `R`; `A` acts through the centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    pub mult: Tensor3,
    pub unit: Vec<Scalar>,
    pub a_action: Tensor3,
}

impl AssocAlgebra {
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        mult: Tensor3,
        unit: Vec<Scalar>,
        a_action: Tensor3,
    ) -> Result<Self> {
        let n = labels.len();
        check_dims(&mult, [n, n, n], "mult")?;
        check_field(&mult, field)?;
        check_vec(&unit, n, "unit")?;
        if a_action.dims()[1] != n || a_action.dims()[2] != n {
            return Err(Error::Shape(format!("a_action: shape {:?} does not act on dimension {n}", a_action.dims())));
        }
        check_field(&a_action, field)?;
        Ok(AssocAlgebra { field, labels, mult, unit, a_action })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mult.apply(x, y)
    }

    /// `a . r`
    pub fn act(&self, a: &[Scalar], r: &[Scalar]) -> Vec<Scalar> {
        self.a_action.apply(a, r)
    }

    /// Image of `a` under `A -> R`, `a -> a . 1_R`.
    pub fn structure_map(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.act(a, &self.unit)
    }

    pub fn validate(&self, a: &CommutativeAlgebra) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.a_action.dims()[0] != a.dim() {
            report.check(false, "a_action outer dimension matches dim A", &[self.a_action.dims()[0], a.dim()]);
            return report;
        }
        validate_unital_associative(&self.mult, &self.unit, &mut report);
        validate_module_over(a, &self.a_action, &mut report, "A-action on R");
        let n = self.dim();
        let field = self.field;
        for i in 0..a.dim() {
            let ai = unit_vec(field, a.dim(), i);
            for j in 0..n {
                for k in 0..n {
                    let rs = self.mult.slice(j, k);
                    let lhs = self.act(&ai, rs);
                    let mid = self.mul(self.a_action.slice(i, j), &unit_vec(field, n, k));
                    let rhs = self.mul(&unit_vec(field, n, j), self.a_action.slice(i, k));
                    report.check(lhs == mid, "central action a(rs) = (ar)s", &[i, j, k]);
                    report.check(mid == rhs, "central action (ar)s = r(as)", &[i, j, k]);
                }
            }
        }
        report
    }

    /// Change the basis of `R` (columns of `p`).
    pub fn change_basis(&self, p: &DenseMatrix) -> Result<Self> {
        let inv = p.inverse().ok_or_else(|| Error::BadParams("singular basis change".into()))?;
        let na = self.a_action.dims()[0];
        let id_a = DenseMatrix::identity(self.field, na);
        AssocAlgebra::new(
            self.field,
            self.labels.clone(),
            self.mult.transform(p, p, &inv),
            inv.mul_vec(&self.unit),
            self.a_action.transform(&id_a, p, &inv),
        )
    }

    /// Follow a basis change of `A` (columns of `q` in old `A` coordinates).
    pub fn change_base_basis(&self, q: &DenseMatrix) -> Result<Self> {
        let id = DenseMatrix::identity(self.field, self.dim());
        AssocAlgebra::new(
            self.field,
            self.labels.clone(),
            self.mult.clone(),
            self.unit.clone(),
            self.a_action.transform(q, &id, &id),
        )
    }
}

/// `R`-`R`-bimodule `M`. The `A`-action is derived: `a.m = (a.1_R) m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    /// `left[i][j][k]`: coefficient of `m_k` in `r_i m_j`.
    pub left: Tensor3,
    /// `right[i][j][k]`: coefficient of `m_k` in `m_i r_j`.
    pub right: Tensor3,
}

impl Bimodule {
    pub fn new(field: FieldSpec, labels: Vec<String>, left: Tensor3, right: Tensor3) -> Result<Self> {
        let n = labels.len();
        let nr = left.dims()[0];
        check_dims(&left, [nr, n, n], "left")?;
        check_dims(&right, [n, nr, n], "right")?;
        check_field(&left, field)?;
        check_field(&right, field)?;
        Ok(Bimodule { field, labels, left, right })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn left_act(&self, r: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.left.apply(r, m)
    }

    pub fn right_act(&self, m: &[Scalar], r: &[Scalar]) -> Vec<Scalar> {
        self.right.apply(m, r)
    }

    /// Operator `m -> r m` on coordinates.
    pub fn left_operator(&self, r: &[Scalar]) -> DenseMatrix {
        self.left.left_operator(r)
    }

    /// Operator `m -> m r` on coordinates.
    pub fn right_operator(&self, r: &[Scalar]) -> DenseMatrix {
        self.right.right_operator(r)
    }

    pub fn validate(&self, r: &AssocAlgebra) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.left.dims()[0] != r.dim() {
            report.check(false, "bimodule acting algebra dimension matches dim R", &[self.left.dims()[0], r.dim()]);
            return report;
        }
        let n = self.dim();
        let nr = r.dim();
        let field = self.field;
        for i in 0..nr {
            for j in 0..nr {
                for k in 0..n {
                    let ri = unit_vec(field, nr, i);
                    let rj = unit_vec(field, nr, j);
                    let m = unit_vec(field, n, k);
                    let rs = r.mult.slice(i, j);
                    report.check(
                        self.left_act(rs, &m) == self.left_act(&ri, &self.left_act(&rj, &m)),
                        "(rs)m = r(sm)",
                        &[i, j, k],
                    );
                    report.check(
                        self.right_act(&m, rs) == self.right_act(&self.right_act(&m, &ri), &rj),
                        "m(rs) = (mr)s",
                        &[k, i, j],
                    );
                    report.check(
                        self.right_act(&self.left_act(&ri, &m), &rj) == self.left_act(&ri, &self.right_act(&m, &rj)),
                        "(rm)s = r(ms)",
                        &[i, k, j],
                    );
                }
            }
        }
        for k in 0..n {
            let m = unit_vec(field, n, k);
            report.check(self.left_act(&r.unit, &m) == m, "1_R m = m", &[k]);
            report.check(self.right_act(&m, &r.unit) == m, "m 1_R = m", &[k]);
        }
        let na = r.a_action.dims()[0];
        for i in 0..na {
            let phi = r.structure_map(&unit_vec(field, na, i));
            for k in 0..n {
                let m = unit_vec(field, n, k);
                report.check(
                    self.left_act(&phi, &m) == self.right_act(&m, &phi),
                    "A acts symmetrically: a.m = m.a",
                    &[i, k],
                );
            }
        }
        report
    }

    pub fn change_basis(&self, s: &DenseMatrix) -> Result<Self> {
        let inv = s.inverse().ok_or_else(|| Error::BadParams("singular basis change".into()))?;
        let nr = self.left.dims()[0];
        let id_r = DenseMatrix::identity(self.field, nr);
        Bimodule::new(
            self.field,
            self.labels.clone(),
            self.left.transform(&id_r, s, &inv),
            self.right.transform(s, &id_r, &inv),
        )
    }

    /// Follow a basis change of `R` (columns of `p`).
    pub fn change_algebra_basis(&self, p: &DenseMatrix) -> Result<Self> {
        let id = DenseMatrix::identity(self.field, self.dim());
        Bimodule::new(
            self.field,
            self.labels.clone(),
            self.left.transform(p, &id, &id),
            self.right.transform(&id, p, &id),
        )
    }
}

/// Lie algebra over `A` (bracket `A`-bilinear).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    pub bracket: Tensor3,
    pub a_action: Tensor3,
}

impl LieAlgebra {
    pub fn new(field: FieldSpec, labels: Vec<String>, bracket: Tensor3, a_action: Tensor3) -> Result<Self> {
        let n = labels.len();
        check_dims(&bracket, [n, n, n], "bracket")?;
        check_field(&bracket, field)?;
        if a_action.dims()[1] != n || a_action.dims()[2] != n {
            return Err(Error::Shape(format!("a_action: shape {:?} does not act on dimension {n}", a_action.dims())));
        }
        check_field(&a_action, field)?;
        Ok(LieAlgebra { field, labels, bracket, a_action })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.bracket.apply(x, y)
    }

    pub fn act(&self, a: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        self.a_action.apply(a, x)
    }

    pub fn validate(&self, a: &CommutativeAlgebra) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.a_action.dims()[0] != a.dim() {
            report.check(false, "a_action outer dimension matches dim A", &[self.a_action.dims()[0], a.dim()]);
            return report;
        }
        let n = self.dim();
        let field = self.field;
        for i in 0..n {
            report.check(vec_is_zero(self.bracket.slice(i, i)), "[x,x] = 0", &[i]);
            for j in 0..n {
                let s = vec_add(self.bracket.slice(i, j), self.bracket.slice(j, i));
                report.check(vec_is_zero(&s), "antisymmetry [x,y] = -[y,x]", &[i, j]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (unit_vec(field, n, i), unit_vec(field, n, j), unit_vec(field, n, k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    report.check(vec_is_zero(&vec_add(&vec_add(&t1, &t2), &t3)), "Jacobi identity", &[i, j, k]);
                }
            }
        }
        validate_module_over(a, &self.a_action, &mut report, "A-action on L");
        for ai in 0..a.dim() {
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.bracket(self.a_action.slice(ai, i), &unit_vec(field, n, j));
                    let rhs = self.act(&unit_vec(field, a.dim(), ai), self.bracket.slice(i, j));
                    report.check(lhs == rhs, "A-bilinear bracket [a x, y] = a [x, y]", &[ai, i, j]);
                }
            }
        }
        report
    }
}

/// Module over a Lie `A`-algebra: an `A`-module on which `L` acts `A`-linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieModule {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    /// `action[i][j][k]`: coefficient of `m_k` in `x_i . m_j`.
    pub action: Tensor3,
    /// `a_action[i][j][k]`: coefficient of `m_k` in `a_i . m_j`.
    pub a_action: Tensor3,
}

impl LieModule {
    pub fn new(field: FieldSpec, labels: Vec<String>, action: Tensor3, a_action: Tensor3) -> Result<Self> {
        let n = labels.len();
        if action.dims()[1] != n || action.dims()[2] != n {
            return Err(Error::Shape(format!("action: shape {:?} does not act on dimension {n}", action.dims())));
        }
        if a_action.dims()[1] != n || a_action.dims()[2] != n {
            return Err(Error::Shape(format!("a_action: shape {:?} does not act on dimension {n}", a_action.dims())));
        }
        check_field(&action, field)?;
        check_field(&a_action, field)?;
        Ok(LieModule { field, labels, action, a_action })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn act(&self, x: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.action.apply(x, m)
    }

    pub fn a_act(&self, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.a_action.apply(a, m)
    }

    pub fn validate(&self, a: &CommutativeAlgebra, l: &LieAlgebra) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.action.dims()[0] != l.dim() || self.a_action.dims()[0] != a.dim() {
            report.check(
                false,
                "acting dimensions match dim L and dim A",
                &[self.action.dims()[0], self.a_action.dims()[0]],
            );
            return report;
        }
        let n = self.dim();
        let nl = l.dim();
        let field = self.field;
        for i in 0..nl {
            for j in 0..nl {
                for k in 0..n {
                    let (x, y, m) = (unit_vec(field, nl, i), unit_vec(field, nl, j), unit_vec(field, n, k));
                    let lhs = self.act(l.bracket.slice(i, j), &m);
                    let rhs = vec_sub(&self.act(&x, &self.act(&y, &m)), &self.act(&y, &self.act(&x, &m)));
                    report.check(lhs == rhs, "[x,y]m = x(ym) - y(xm)", &[i, j, k]);
                }
            }
        }
        validate_module_over(a, &self.a_action, &mut report, "A-action on M");
        for ai in 0..a.dim() {
            let av = unit_vec(field, a.dim(), ai);
            for i in 0..nl {
                let x = unit_vec(field, nl, i);
                for k in 0..n {
                    let m = unit_vec(field, n, k);
                    let ax_m = self.act(l.a_action.slice(ai, i), &m);
                    let a_xm = self.a_act(&av, &self.act(&x, &m));
                    let x_am = self.act(&x, &self.a_act(&av, &m));
                    report.check(ax_m == a_xm, "(a x) m = a (x m)", &[ai, i, k]);
                    report.check(x_am == a_xm, "x (a m) = a (x m)", &[ai, i, k]);
                }
            }
        }
        report
    }
}

/// `(A, R, M)` for the associative pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocTriple {
    pub a: CommutativeAlgebra,
    pub r: AssocAlgebra,
    pub m: Bimodule,
}

impl AssocTriple {
    pub fn field(&self) -> FieldSpec {
        self.a.field
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.a.validate();
        report.merge(self.r.validate(&self.a));
        report.merge(self.m.validate(&self.r));
        report
    }

    /// Field-consistency and axiom check, as an error.
    pub fn checked(self) -> Result<Self> {
        if self.a.field != self.r.field || self.r.field != self.m.field {
            return Err(Error::FieldMismatch(self.a.field, self.m.field));
        }
        self.validate().into_result("(A, R, M)")?;
        Ok(self)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.dim(), self.r.dim(), self.m.dim())
    }
}

/// `(A, L, M)` for the Lie pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieTriple {
    pub a: CommutativeAlgebra,
    pub l: LieAlgebra,
    pub m: LieModule,
}

impl LieTriple {
    pub fn field(&self) -> FieldSpec {
        self.a.field
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.a.validate();
        report.merge(self.l.validate(&self.a));
        report.merge(self.m.validate(&self.a, &self.l));
        report
    }

    pub fn checked(self) -> Result<Self> {
        if self.a.field != self.l.field || self.l.field != self.m.field {
            return Err(Error::FieldMismatch(self.a.field, self.m.field));
        }
        self.validate().into_result("(A, L, M)")?;
        Ok(self)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.dim(), self.l.dim(), self.m.dim())
    }
}

/// Any single presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Commutative(CommutativeAlgebra),
    Algebra(AssocAlgebra),
    Bimodule(Bimodule),
    Lie(LieAlgebra),
    LieModule(LieModule),
}

impl Presentation {
    pub fn kind(&self) -> &'static str {
        match self {
            Presentation::Commutative(_) => "commutative_algebra",
            Presentation::Algebra(_) => "algebra",
            Presentation::Bimodule(_) => "bimodule",
            Presentation::Lie(_) => "lie_algebra",
            Presentation::LieModule(_) => "lie_module",
        }
    }
}

/// Validate a presentation against the presentations it depends on.
///
/// `context` supplies `A` (for algebras and Lie algebras), `R` (for
/// bimodules) or `A` and `L` (for Lie modules). Missing context is a shape
/// error; mathematically inconsistent tables are reported, never rejected.
pub fn validate(pres: &Presentation, context: &[&Presentation]) -> Result<ValidationReport> {
    let find_a = || {
        context.iter().find_map(|p| match p {
            Presentation::Commutative(a) => Some(a),
            _ => None,
        })
    };
    match pres {
        Presentation::Commutative(a) => Ok(a.validate()),
        Presentation::Algebra(r) => {
            let a = find_a().ok_or_else(|| Error::Shape("validating an A-algebra needs A".into()))?;
            if r.a_action.dims()[0] != a.dim() {
                return Err(Error::Shape("a_action does not match dim A".into()));
            }
            Ok(r.validate(a))
        }
        Presentation::Bimodule(m) => {
            let r = context
                .iter()
                .find_map(|p| match p {
                    Presentation::Algebra(r) => Some(r),
                    _ => None,
                })
                .ok_or_else(|| Error::Shape("validating a bimodule needs R".into()))?;
            if m.left.dims()[0] != r.dim() {
                return Err(Error::Shape("bimodule does not match dim R".into()));
            }
            Ok(m.validate(r))
        }
        Presentation::Lie(l) => {
            let a = find_a().ok_or_else(|| Error::Shape("validating a Lie A-algebra needs A".into()))?;
            if l.a_action.dims()[0] != a.dim() {
                return Err(Error::Shape("a_action does not match dim A".into()));
            }
            Ok(l.validate(a))
        }
        Presentation::LieModule(m) => {
            let a = find_a().ok_or_else(|| Error::Shape("validating a Lie module needs A".into()))?;
            let l = context
                .iter()
                .find_map(|p| match p {
                    Presentation::Lie(l) => Some(l),
                    _ => None,
                })
                .ok_or_else(|| Error::Shape("validating a Lie module needs L".into()))?;
            if m.action.dims()[0] != l.dim() || m.a_action.dims()[0] != a.dim() {
                return Err(Error::Shape("Lie module does not match dim L / dim A".into()));
            }
            Ok(m.validate(a, l))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::builtins;
    use super::*;

    #[test]
    fn dual_numbers_valid() {
        let a = builtins::dual_numbers(FieldSpec::Rationals);
        assert!(a.validate().is_valid());
    }

    #[test]
    fn broken_unit_is_reported() {
        let f = FieldSpec::Rationals;
        // e1 e1 = e2, everything else zero, unit claimed to be e1.
        let mult = Tensor3::from_fn(f, [2, 2, 2], |i, j, k| (i == 0 && j == 0 && k == 1) as i64);
        let a = CommutativeAlgebra::new(f, labels_with_prefix("e", 2), mult, vec![f.one(), f.zero()]).unwrap();
        let report = a.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.identity.contains("unit")));
    }

    #[test]
    fn shape_errors() {
        let f = FieldSpec::Rationals;
        let mult = Tensor3::zero(f, [2, 2, 1]);
        assert!(matches!(
            CommutativeAlgebra::new(f, labels_with_prefix("e", 2), mult, vec![f.one(), f.zero()]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn sl2_is_lie() {
        let f = FieldSpec::Rationals;
        let k = builtins::base_field(f);
        let l = builtins::sl2(f, &k);
        assert!(l.validate(&k).is_valid());
        // Break Jacobi by scaling one structure constant.
        let mut bad = l.clone();
        bad.bracket.set(2, 0, 0, f.from_i64(3));
        bad.bracket.set(0, 2, 0, f.from_i64(-3));
        let report = bad.validate(&k);
        assert!(report.violations.iter().any(|v| v.identity == "Jacobi identity"));
    }

    #[test]
    fn validate_requires_context() {
        let f = FieldSpec::Rationals;
        let b = builtins::bundle("dual_numbers", f, &[]).unwrap();
        let t = b.expect_assoc().unwrap();
        assert!(matches!(validate(&Presentation::Algebra(t.r.clone()), &[]), Err(Error::Shape(_))));
    }
}
