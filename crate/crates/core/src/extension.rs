//! Degree 2 and 3 cocycle calculus: membership tests for `Z^2, B^2, Z^3,
//! B^3`, abelian extensions from 2-cocycles and back, crossed extensions to
//! 3-cocycles, and a brute-force classification of extensions over `F_2`.
//!
//! The matrices of the reduced total complex are normative. The explicit
//! identities are assembled as independent linear functionals and must cut
//! out the same subspaces.
//!
//! Cocycle components in total degree 2 are `f` at `(0,2)` and `g` at
//! `(1,1)`; in degree 3 they are `f` at `(0,3)`, `g` at `(1,2)` with
//! arguments `(a, b, r, s)` and `h` at `(2,1)` with arguments `(a, b, r)`.

use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{assemble_with, totalize, AssocContext, Block, TotalComplex};
use crate::cochain::{arg_count, decode_args, radices, BiDegree, Cochain, CochainJson, Dims, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::homology::cohomology;
use crate::linalg::{
    canonicalize_vec, dense_to_sparse, rank_kernel, solve, span_dim, DenseMatrix, Echelon, SparseMatrix, SparseVec,
};
use crate::presentation::{
    unit_vec, vec_add, vec_is_zero, vec_scale, vec_sub, AssocAlgebra, AssocTriple, Bimodule, Presentation,
    PresentationFile, Tensor3, Violation,
};
use crate::scalar::{FieldSpec, Scalar};

/// `(f, g)` in total degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    pub f: Cochain,
    pub g: Cochain,
}

/// `(f, g, h)` in total degree 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeCocycle {
    pub f: Cochain,
    pub g: Cochain,
    pub h: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCocycleJson {
    pub f: CochainJson,
    pub g: CochainJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeCocycleJson {
    pub f: CochainJson,
    pub g: CochainJson,
    pub h: CochainJson,
}

impl TwoCocycle {
    pub fn to_json(&self) -> TwoCocycleJson {
        TwoCocycleJson { f: self.f.to_json(), g: self.g.to_json() }
    }

    pub fn from_json(j: &TwoCocycleJson) -> Result<Self> {
        Ok(TwoCocycle { f: Cochain::from_json(&j.f)?, g: Cochain::from_json(&j.g)? })
    }
}

impl ThreeCocycle {
    pub fn to_json(&self) -> ThreeCocycleJson {
        ThreeCocycleJson { f: self.f.to_json(), g: self.g.to_json(), h: self.h.to_json() }
    }

    pub fn from_json(j: &ThreeCocycleJson) -> Result<Self> {
        Ok(ThreeCocycle { f: Cochain::from_json(&j.f)?, g: Cochain::from_json(&j.g)?, h: Cochain::from_json(&j.h)? })
    }
}

/// `0 -> M -> S -> R -> 0` with `M^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianExtension {
    pub s: AssocAlgebra,
    /// `dim R x dim S`.
    pub projection: DenseMatrix,
    /// `dim S x dim M`.
    pub inclusion: DenseMatrix,
}

/// `0 -> M -> C1 -> C0 -> R -> 0` on a crossed bimodule `C1 -> C0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedExtension {
    pub c0: AssocAlgebra,
    pub c1: Bimodule,
    /// `dim C0 x dim C1`.
    pub boundary: DenseMatrix,
    /// `dim R x dim C0`.
    pub pi: DenseMatrix,
    /// `dim C1 x dim M`.
    pub iota: DenseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionJson {
    pub algebra: PresentationFile,
    pub projection: Vec<Vec<String>>,
    pub inclusion: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedJson {
    pub c0: PresentationFile,
    pub c1: PresentationFile,
    pub boundary: Vec<Vec<String>>,
    pub pi: Vec<Vec<String>>,
    pub iota: Vec<Vec<String>>,
}

pub fn matrix_to_strings(m: &DenseMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

pub fn matrix_from_strings(field: FieldSpec, rows: usize, cols: usize, data: &[Vec<String>]) -> Result<DenseMatrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("expected a {rows}x{cols} matrix")));
    }
    let parsed = data
        .iter()
        .map(|r| r.iter().map(|s| Scalar::parse(s, field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows == 0 {
        return Ok(DenseMatrix::zero(field, 0, cols));
    }
    DenseMatrix::from_rows(field, parsed)
}

impl AbelianExtension {
    pub fn to_json(&self) -> ExtensionJson {
        ExtensionJson {
            algebra: PresentationFile::from_presentation(&Presentation::Algebra(self.s.clone())),
            projection: matrix_to_strings(&self.projection),
            inclusion: matrix_to_strings(&self.inclusion),
        }
    }
}

impl CrossedExtension {
    pub fn to_json(&self) -> CrossedJson {
        CrossedJson {
            c0: PresentationFile::from_presentation(&Presentation::Algebra(self.c0.clone())),
            c1: PresentationFile::from_presentation(&Presentation::Bimodule(self.c1.clone())),
            boundary: matrix_to_strings(&self.boundary),
            pi: matrix_to_strings(&self.pi),
            iota: matrix_to_strings(&self.iota),
        }
    }
}

/// Which independent columns a deterministic section is supported on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionRule {
    /// First independent columns in basis order.
    #[default]
    First,
    /// First independent columns in reverse basis order.
    Last,
}

fn independent_columns(mat: &DenseMatrix, rule: SectionRule) -> Vec<usize> {
    let mut ech = Echelon::new(mat.field(), mat.rows());
    let order: Vec<usize> = match rule {
        SectionRule::First => (0..mat.cols()).collect(),
        SectionRule::Last => (0..mat.cols()).rev().collect(),
    };
    let mut out: Vec<usize> = order.into_iter().filter(|&j| ech.insert(&dense_to_sparse(&mat.column(j)))).collect();
    out.sort_unstable();
    out
}

fn matrix_rank(mat: &DenseMatrix) -> usize {
    independent_columns(mat, SectionRule::First).len()
}

/// Right inverse of a surjective matrix supported on independent columns.
fn right_inverse(mat: &DenseMatrix, rule: SectionRule) -> Option<DenseMatrix> {
    let field = mat.field();
    let k = mat.rows();
    let cols = independent_columns(mat, rule);
    if cols.len() != k {
        return None;
    }
    let inv = DenseMatrix::from_fn(field, k, k, |i, j| mat.get(i, cols[j]).clone()).inverse()?;
    let mut out = DenseMatrix::zero(field, mat.cols(), k);
    for (jj, &c) in cols.iter().enumerate() {
        for i in 0..k {
            out.set(c, i, inv.get(jj, i).clone());
        }
    }
    Some(out)
}

/// Left inverse of an injective matrix.
fn left_inverse(mat: &DenseMatrix, rule: SectionRule) -> Option<DenseMatrix> {
    right_inverse(&mat.transpose(), rule).map(|m| m.transpose())
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    vec_is_zero(v)
}

/// Coordinates of the product of supports of `args` in mixed radix.
fn expand(field: FieldSpec, args: &[SparseVec], rad: &[usize]) -> Vec<(usize, Scalar)> {
    let mut acc = vec![(0usize, field.one())];
    for (v, &r) in args.iter().zip(rad) {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for (x, c) in &acc {
            for (i, d) in v {
                next.push((x * r + i, c * d));
            }
        }
        acc = next;
    }
    acc
}

/// A vector of linear functionals, one per coordinate of `M`, on a total
/// degree laid out by `blocks`.
struct Functional<'a> {
    ctx: &'a AssocContext,
    blocks: &'a [Block],
    coords: Vec<Vec<(usize, Scalar)>>,
}

impl<'a> Functional<'a> {
    fn new(ctx: &'a AssocContext, blocks: &'a [Block]) -> Self {
        Functional { ctx, blocks, coords: vec![Vec::new(); ctx.dims.m] }
    }

    /// Add `c * op(x(a; r))` where `x` is the component at `deg`.
    fn add(&mut self, c: i64, op: Option<&DenseMatrix>, deg: BiDegree, a: &[SparseVec], r: &[SparseVec]) {
        let Some(block) = self.blocks.iter().find(|b| b.degree == deg) else { return };
        if block.dim == 0 {
            return;
        }
        let field = self.ctx.field;
        let nm = self.ctx.dims.m;
        let rad = radices(deg, self.ctx.dims);
        let mut args = a.to_vec();
        args.extend(r.iter().cloned());
        let c = field.from_i64(c);
        for (x, w) in expand(field, &args, &rad) {
            let w = &w * &c;
            let base = block.offset + x * nm;
            match op {
                None => {
                    for mo in 0..nm {
                        self.coords[mo].push((base + mo, w.clone()));
                    }
                }
                Some(op) => {
                    for mo in 0..nm {
                        for mi in 0..nm {
                            let v = op.get(mo, mi);
                            if !v.is_zero() {
                                self.coords[mo].push((base + mi, &w * v));
                            }
                        }
                    }
                }
            }
        }
    }

    fn finish(self) -> Vec<SparseVec> {
        self.coords.into_iter().map(canonicalize_vec).collect()
    }
}

/// Explicit identities as rows of a matrix on a total degree.
#[derive(Clone, Debug)]
pub struct IdentitySystem {
    pub names: Vec<&'static str>,
    /// `(identity, basis indices)` for each row.
    pub labels: Vec<(usize, Vec<usize>)>,
    pub matrix: SparseMatrix,
}

impl IdentitySystem {
    fn build(
        field: FieldSpec,
        cols: usize,
        names: Vec<&'static str>,
        rows: Vec<(usize, Vec<usize>, Vec<SparseVec>)>,
    ) -> Self {
        let mut labels = Vec::new();
        let mut entries = Vec::new();
        for (id, idx, funcs) in rows {
            for f in funcs {
                let r = labels.len();
                entries.extend(f.into_iter().map(|(c, v)| (r, c, v)));
                labels.push((id, idx.clone()));
            }
        }
        let matrix = SparseMatrix::from_triplets(field, labels.len(), cols, entries).expect("in range");
        IdentitySystem { names, labels, matrix }
    }

    pub fn violations(&self, v: &SparseVec) -> Vec<Violation> {
        let mut out: Vec<Violation> = Vec::new();
        for (r, _) in self.matrix.apply(v) {
            let (id, idx) = &self.labels[r];
            let viol = Violation { identity: self.names[*id].to_string(), indices: idx.clone() };
            if out.last() != Some(&viol) {
                out.push(viol);
            }
        }
        out
    }
}

/// Outcome of a cocycle membership test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleVerdict {
    pub degree: usize,
    pub is_cocycle: bool,
    pub violations: Vec<Violation>,
}

/// Comparison of an explicitly described subspace with its matrix version.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceCheck {
    pub what: String,
    pub explicit_dim: usize,
    pub matrix_dim: usize,
    pub explicit_in_matrix: bool,
    pub matrix_in_explicit: bool,
}

impl SubspaceCheck {
    pub fn agrees(&self) -> bool {
        self.explicit_dim == self.matrix_dim && self.explicit_in_matrix && self.matrix_in_explicit
    }
}

/// Result of the exhaustive enumeration over `F_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub search_bits: usize,
    pub cocycles: u64,
    pub coboundaries: u64,
    pub h2_size: u64,
    pub classes: usize,
    pub h2_dim: usize,
}

impl Classification {
    pub fn consistent(&self) -> bool {
        self.h2_size == 1u64 << self.h2_dim && self.classes as u64 == self.h2_size
    }
}

/// Largest search space `classify_bruteforce` accepts, in bits.
pub const MAX_SEARCH_BITS: usize = 24;

/// A triple with its reduced total complex through degree 4.
pub struct ExtensionContext {
    pub triple: AssocTriple,
    pub ctx: AssocContext,
    pub total: TotalComplex,
    z2: OnceLock<IdentitySystem>,
    z3: OnceLock<IdentitySystem>,
    b2: OnceLock<SparseMatrix>,
    b3: OnceLock<SparseMatrix>,
    kernels: [OnceLock<Vec<SparseVec>>; 2],
}

fn u(field: FieldSpec, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

fn dense_vec(field: FieldSpec, v: &SparseVec, n: usize) -> Vec<Scalar> {
    crate::linalg::sparse_to_dense(v, n, field)
}

impl ExtensionContext {
    pub fn new(triple: &AssocTriple) -> Result<Self> {
        Self::with_cap(triple, DEFAULT_CAP)
    }

    pub fn with_cap(triple: &AssocTriple, cap: usize) -> Result<Self> {
        let ctx = AssocContext::new(triple);
        let total = totalize(&assemble_with(&ctx, 3, true, cap)?)?;
        Ok(ExtensionContext {
            triple: triple.clone(),
            ctx,
            total,
            z2: OnceLock::new(),
            z3: OnceLock::new(),
            b2: OnceLock::new(),
            b3: OnceLock::new(),
            kernels: [OnceLock::new(), OnceLock::new()],
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.ctx.field
    }

    pub fn dims(&self) -> Dims {
        self.ctx.dims
    }

    fn parts(n: usize) -> Vec<BiDegree> {
        (0..n).map(|p| BiDegree::new(p, n - p)).collect()
    }

    fn to_total(&self, n: usize, parts: &[&Cochain]) -> Result<SparseVec> {
        let mut v = Vec::new();
        for (c, deg) in parts.iter().zip(Self::parts(n)) {
            if c.degree != deg || c.dims != self.dims() {
                return Err(Error::Shape(format!("expected a {deg} cochain for dims {:?}", self.dims())));
            }
            if c.field != self.field() {
                return Err(Error::FieldMismatch(c.field, self.field()));
            }
            v.extend(self.total.embed(deg, &c.coeffs));
        }
        Ok(v)
    }

    fn from_total(&self, n: usize, v: &SparseVec) -> Vec<Cochain> {
        Self::parts(n)
            .into_iter()
            .map(|deg| Cochain::from_sparse(self.field(), deg, self.dims(), self.total.component(deg, v)))
            .collect()
    }

    pub fn two_to_total(&self, z: &TwoCocycle) -> Result<SparseVec> {
        self.to_total(2, &[&z.f, &z.g])
    }

    pub fn two_from_total(&self, v: &SparseVec) -> TwoCocycle {
        let mut c = self.from_total(2, v).into_iter();
        TwoCocycle { f: c.next().expect("f"), g: c.next().expect("g") }
    }

    pub fn three_to_total(&self, z: &ThreeCocycle) -> Result<SparseVec> {
        self.to_total(3, &[&z.f, &z.g, &z.h])
    }

    pub fn three_from_total(&self, v: &SparseVec) -> ThreeCocycle {
        let mut c = self.from_total(3, v).into_iter();
        ThreeCocycle { f: c.next().expect("f"), g: c.next().expect("g"), h: c.next().expect("h") }
    }

    pub fn zero2(&self) -> TwoCocycle {
        self.two_from_total(&Vec::new())
    }

    pub fn zero3(&self) -> ThreeCocycle {
        self.three_from_total(&Vec::new())
    }

    /// `D(h)` for `h` at `(0,1)`.
    pub fn coboundary2(&self, h: &Cochain) -> Result<TwoCocycle> {
        let v = self.to_total(1, &[h])?;
        Ok(self.two_from_total(&self.total.diffs[1].apply(&v)))
    }

    /// `D(m, n)` for `m` at `(0,2)` and `n` at `(1,1)`.
    pub fn coboundary3(&self, m: &Cochain, n: &Cochain) -> Result<ThreeCocycle> {
        let v = self.to_total(2, &[m, n])?;
        Ok(self.three_from_total(&self.total.diffs[2].apply(&v)))
    }

    fn kernel(&self, n: usize) -> &Vec<SparseVec> {
        self.kernels[n - 2].get_or_init(|| rank_kernel(&self.total.diffs[n]).1)
    }

    fn random_combination(&self, rng: &mut impl Rng, basis: &[SparseVec]) -> SparseVec {
        let field = self.field();
        let one = field.one();
        basis.iter().fold(Vec::new(), |acc, b| {
            let c = field.from_i64(rng.gen_range(-3..=3));
            crate::linalg::sparse_combine(&one, &acc, &c, b)
        })
    }

    /// A random element of `Z^2`.
    pub fn random_cocycle2(&self, rng: &mut impl Rng) -> TwoCocycle {
        let v = self.random_combination(rng, self.kernel(2));
        self.two_from_total(&v)
    }

    /// A random element of `Z^3`.
    pub fn random_cocycle3(&self, rng: &mut impl Rng) -> ThreeCocycle {
        let v = self.random_combination(rng, self.kernel(3));
        self.three_from_total(&v)
    }

    /// A random cochain at `deg` with entries in `-3..=3`.
    pub fn random_cochain(&self, rng: &mut impl Rng, deg: BiDegree) -> Cochain {
        let field = self.field();
        let n = crate::cochain::space_dim(deg, self.dims(), usize::MAX).expect("uncapped");
        let coeffs = (0..n).map(|i| (i, field.from_i64(rng.gen_range(-3..=3)))).collect();
        Cochain::from_sparse(field, deg, self.dims(), coeffs)
    }

    pub fn z2_system(&self) -> &IdentitySystem {
        self.z2.get_or_init(|| self.build_z2())
    }

    pub fn z3_system(&self) -> &IdentitySystem {
        self.z3.get_or_init(|| self.build_z3())
    }

    /// Explicit `h -> (f, g)`.
    pub fn b2_matrix(&self) -> &SparseMatrix {
        self.b2.get_or_init(|| self.build_b2())
    }

    /// Explicit `(m, n) -> (f, g, h)`.
    pub fn b3_matrix(&self) -> &SparseMatrix {
        self.b3.get_or_init(|| self.build_b3())
    }

    fn build_z2(&self) -> IdentitySystem {
        let c = &self.ctx;
        let field = c.field;
        let Dims { a: na, r: nr, .. } = c.dims;
        let blocks = &self.total.blocks[2];
        let u = |i| u(field, i);
        let (f, g) = (BiDegree::new(0, 2), BiDegree::new(1, 1));
        let mut rows = Vec::new();
        for a in 0..na {
            for b in 0..na {
                for r in 0..nr {
                    let mut e = Functional::new(c, blocks);
                    e.add(1, Some(&c.left_a_op(&u(a))), g, &[u(b)], &[u(r)]);
                    e.add(-1, None, g, &[c.a_mul(a, b).clone()], &[u(r)]);
                    e.add(1, None, g, &[u(a)], &[c.act(&u(b), r)]);
                    rows.push((0, vec![a, b, r], e.finish()));
                }
            }
        }
        for a in 0..na {
            for b in 0..na {
                for r in 0..nr {
                    for s in 0..nr {
                        let (ar, bs) = (c.act(&u(a), r), c.act(&u(b), s));
                        let mut e = Functional::new(c, blocks);
                        e.add(1, Some(&c.left_a_op(c.a_mul(a, b))), f, &[], &[u(r), u(s)]);
                        e.add(-1, None, f, &[], &[ar.clone(), bs.clone()]);
                        e.add(-1, Some(&c.left_r_op(&ar)), g, &[u(b)], &[u(s)]);
                        e.add(1, None, g, &[c.a_mul(a, b).clone()], &[c.r_mul(r, s).clone()]);
                        e.add(-1, Some(&c.right_r_op(&bs)), g, &[u(a)], &[u(r)]);
                        rows.push((1, vec![a, b, r, s], e.finish()));
                    }
                }
            }
        }
        for r in 0..nr {
            for s in 0..nr {
                for t in 0..nr {
                    let mut e = Functional::new(c, blocks);
                    e.add(1, Some(&c.left_r_op(&u(r))), f, &[], &[u(s), u(t)]);
                    e.add(-1, None, f, &[], &[c.r_mul(r, s).clone(), u(t)]);
                    e.add(1, None, f, &[], &[u(r), c.r_mul(s, t).clone()]);
                    e.add(-1, Some(&c.right_r_op(&u(t))), f, &[], &[u(r), u(s)]);
                    rows.push((2, vec![r, s, t], e.finish()));
                }
            }
        }
        let names = vec![
            "ag(b,r)-g(ab,r)+g(a,br)=0",
            "abf(r,s)-f(ar,bs)=arg(b,s)-g(ab,rs)+g(a,r)bs",
            "rf(s,t)-f(rs,t)+f(r,st)-f(r,s)t=0",
        ];
        IdentitySystem::build(field, self.total.dim(2), names, rows)
    }

    fn build_z3(&self) -> IdentitySystem {
        let c = &self.ctx;
        let field = c.field;
        let Dims { a: na, r: nr, .. } = c.dims;
        let blocks = &self.total.blocks[3];
        let u = |i| u(field, i);
        let (f, g, h) = (BiDegree::new(0, 3), BiDegree::new(1, 2), BiDegree::new(2, 1));
        let mut rows = Vec::new();
        for r1 in 0..nr {
            for r2 in 0..nr {
                for r3 in 0..nr {
                    for r4 in 0..nr {
                        let mut e = Functional::new(c, blocks);
                        e.add(1, Some(&c.left_r_op(&u(r1))), f, &[], &[u(r2), u(r3), u(r4)]);
                        e.add(-1, None, f, &[], &[c.r_mul(r1, r2).clone(), u(r3), u(r4)]);
                        e.add(1, None, f, &[], &[u(r1), c.r_mul(r2, r3).clone(), u(r4)]);
                        e.add(-1, None, f, &[], &[u(r1), u(r2), c.r_mul(r3, r4).clone()]);
                        e.add(1, Some(&c.right_r_op(&u(r4))), f, &[], &[u(r1), u(r2), u(r3)]);
                        rows.push((0, vec![r1, r2, r3, r4], e.finish()));
                    }
                }
            }
        }
        for a in 0..na {
            for b in 0..na {
                for cc in 0..na {
                    let abc = c.a_product(&[a, b, cc]);
                    for r in 0..nr {
                        for s in 0..nr {
                            for t in 0..nr {
                                let (ar, bs, ct) = (c.act(&u(a), r), c.act(&u(b), s), c.act(&u(cc), t));
                                let mut e = Functional::new(c, blocks);
                                e.add(1, Some(&c.left_a_op(&abc)), f, &[], &[u(r), u(s), u(t)]);
                                e.add(-1, None, f, &[], &[ar.clone(), bs, ct.clone()]);
                                e.add(-1, Some(&c.left_r_op(&ar)), g, &[u(b), u(cc)], &[u(s), u(t)]);
                                e.add(1, None, g, &[c.a_mul(a, b).clone(), u(cc)], &[c.r_mul(r, s).clone(), u(t)]);
                                e.add(-1, None, g, &[u(a), c.a_mul(b, cc).clone()], &[u(r), c.r_mul(s, t).clone()]);
                                e.add(1, Some(&c.right_r_op(&ct)), g, &[u(a), u(b)], &[u(r), u(s)]);
                                rows.push((1, vec![a, b, cc, r, s, t], e.finish()));
                            }
                        }
                    }
                }
            }
        }
        for a in 0..na {
            for b in 0..na {
                for cc in 0..na {
                    for d in 0..na {
                        for x in 0..nr {
                            for y in 0..nr {
                                let acx = c.act(c.a_mul(a, cc), x);
                                let bdy = c.act(c.a_mul(b, d), y);
                                let mut e = Functional::new(c, blocks);
                                e.add(1, Some(&c.left_a_op(c.a_mul(a, b))), g, &[u(cc), u(d)], &[u(x), u(y)]);
                                e.add(-1, None, g, &[c.a_mul(a, cc).clone(), c.a_mul(b, d).clone()], &[u(x), u(y)]);
                                e.add(1, None, g, &[u(a), u(b)], &[c.act(&u(cc), x), c.act(&u(d), y)]);
                                e.add(1, Some(&c.left_r_op(&acx)), h, &[u(b), u(d)], &[u(y)]);
                                e.add(
                                    -1,
                                    None,
                                    h,
                                    &[c.a_mul(a, b).clone(), c.a_mul(cc, d).clone()],
                                    &[c.r_mul(x, y).clone()],
                                );
                                e.add(1, Some(&c.right_r_op(&bdy)), h, &[u(a), u(cc)], &[u(x)]);
                                rows.push((2, vec![a, b, cc, d, x, y], e.finish()));
                            }
                        }
                    }
                }
            }
        }
        for a in 0..na {
            for b in 0..na {
                for cc in 0..na {
                    for x in 0..nr {
                        let mut e = Functional::new(c, blocks);
                        e.add(1, Some(&c.left_a_op(&u(a))), h, &[u(b), u(cc)], &[u(x)]);
                        e.add(-1, None, h, &[c.a_mul(a, b).clone(), u(cc)], &[u(x)]);
                        e.add(1, None, h, &[u(a), c.a_mul(b, cc).clone()], &[u(x)]);
                        e.add(-1, None, h, &[u(a), u(b)], &[c.act(&u(cc), x)]);
                        rows.push((3, vec![a, b, cc, x], e.finish()));
                    }
                }
            }
        }
        let names = vec![
            "r1f(r2,r3,r4)-f(r1r2,r3,r4)+f(r1,r2r3,r4)-f(r1,r2,r3r4)+f(r1,r2,r3)r4=0",
            "abcf(r,s,t)-f(ar,bs,ct)=arg(b,c,s,t)-g(ab,c,rs,t)+g(a,bc,r,st)-g(a,b,r,s)ct",
            "abg(c,d,x,y)-g(ac,bd,x,y)+g(a,b,cx,dy)=-(acxh(b,d,y)-h(ab,cd,xy)+h(a,c,x)bdy)",
            "ah(b,c,x)-h(ab,c,x)+h(a,bc,x)-h(a,b,cx)=0",
        ];
        IdentitySystem::build(field, self.total.dim(3), names, rows)
    }

    /// Matrix whose rows at the target coordinates of `deg` in total degree
    /// `n` are the given functionals.
    fn place(&self, n: usize, parts: Vec<(BiDegree, Vec<Vec<SparseVec>>)>) -> SparseMatrix {
        let nm = self.dims().m;
        let mut entries = Vec::new();
        for (deg, rows) in parts {
            let block = self.total.block(n, deg).expect("block");
            for (x, funcs) in rows.into_iter().enumerate() {
                for (mo, f) in funcs.into_iter().enumerate() {
                    let row = block.offset + x * nm + mo;
                    entries.extend(f.into_iter().map(|(c, v)| (row, c, v)));
                }
            }
        }
        SparseMatrix::from_triplets(self.field(), self.total.dim(n), self.total.dim(n - 1), entries).expect("in range")
    }

    fn args(&self, deg: BiDegree) -> Vec<Vec<usize>> {
        let n = arg_count(deg, self.dims(), usize::MAX).expect("uncapped");
        let rad = radices(deg, self.dims());
        (0..n).map(|x| decode_args(x, &rad)).collect()
    }

    fn build_b2(&self) -> SparseMatrix {
        let c = &self.ctx;
        let field = c.field;
        let blocks = &self.total.blocks[1];
        let u = |i| u(field, i);
        let hd = BiDegree::new(0, 1);
        let f_rows = self
            .args(BiDegree::new(0, 2))
            .into_iter()
            .map(|t| {
                let (r, s) = (t[0], t[1]);
                let mut e = Functional::new(c, blocks);
                e.add(1, Some(&c.left_r_op(&u(r))), hd, &[], &[u(s)]);
                e.add(-1, None, hd, &[], &[c.r_mul(r, s).clone()]);
                e.add(1, Some(&c.right_r_op(&u(s))), hd, &[], &[u(r)]);
                e.finish()
            })
            .collect();
        let g_rows = self
            .args(BiDegree::new(1, 1))
            .into_iter()
            .map(|t| {
                let (a, r) = (t[0], t[1]);
                let mut e = Functional::new(c, blocks);
                e.add(1, Some(&c.left_a_op(&u(a))), hd, &[], &[u(r)]);
                e.add(-1, None, hd, &[], &[c.act(&u(a), r)]);
                e.finish()
            })
            .collect();
        self.place(2, vec![(BiDegree::new(0, 2), f_rows), (BiDegree::new(1, 1), g_rows)])
    }

    fn build_b3(&self) -> SparseMatrix {
        let c = &self.ctx;
        let field = c.field;
        let blocks = &self.total.blocks[2];
        let u = |i| u(field, i);
        let (md, nd) = (BiDegree::new(0, 2), BiDegree::new(1, 1));
        let f_rows = self
            .args(BiDegree::new(0, 3))
            .into_iter()
            .map(|t| {
                let (r, s, w) = (t[0], t[1], t[2]);
                let mut e = Functional::new(c, blocks);
                e.add(1, Some(&c.left_r_op(&u(r))), md, &[], &[u(s), u(w)]);
                e.add(-1, None, md, &[], &[c.r_mul(r, s).clone(), u(w)]);
                e.add(1, None, md, &[], &[u(r), c.r_mul(s, w).clone()]);
                e.add(-1, Some(&c.right_r_op(&u(w))), md, &[], &[u(r), u(s)]);
                e.finish()
            })
            .collect();
        let g_rows = self
            .args(BiDegree::new(1, 2))
            .into_iter()
            .map(|t| {
                let (a, b, r, s) = (t[0], t[1], t[2], t[3]);
                let (ar, bs) = (c.act(&u(a), r), c.act(&u(b), s));
                let mut e = Functional::new(c, blocks);
                e.add(1, Some(&c.left_a_op(c.a_mul(a, b))), md, &[], &[u(r), u(s)]);
                e.add(-1, None, md, &[], &[ar.clone(), bs.clone()]);
                e.add(-1, Some(&c.left_r_op(&ar)), nd, &[u(b)], &[u(s)]);
                e.add(1, None, nd, &[c.a_mul(a, b).clone()], &[c.r_mul(r, s).clone()]);
                e.add(-1, Some(&c.right_r_op(&bs)), nd, &[u(a)], &[u(r)]);
                e.finish()
            })
            .collect();
        let h_rows = self
            .args(BiDegree::new(2, 1))
            .into_iter()
            .map(|t| {
                let (a, b, r) = (t[0], t[1], t[2]);
                let mut e = Functional::new(c, blocks);
                e.add(1, Some(&c.left_a_op(&u(a))), nd, &[u(b)], &[u(r)]);
                e.add(-1, None, nd, &[c.a_mul(a, b).clone()], &[u(r)]);
                e.add(1, None, nd, &[u(a)], &[c.act(&u(b), r)]);
                e.finish()
            })
            .collect();
        self.place(3, vec![(BiDegree::new(0, 3), f_rows), (BiDegree::new(1, 2), g_rows), (BiDegree::new(2, 1), h_rows)])
    }

    fn verdict(&self, n: usize, v: &SparseVec) -> Result<CocycleVerdict> {
        let in_kernel = self.total.diffs[n].apply(v).is_empty();
        let system = if n == 2 { self.z2_system() } else { self.z3_system() };
        let violations = system.violations(v);
        if in_kernel != violations.is_empty() {
            return Err(Error::InconsistentWithMatrixKernel(format!(
                "degree {n}: matrix says {in_kernel}, explicit identities report {} violation(s)",
                violations.len()
            )));
        }
        Ok(CocycleVerdict { degree: n, is_cocycle: in_kernel, violations })
    }

    pub fn check_z2(&self, z: &TwoCocycle) -> Result<CocycleVerdict> {
        self.verdict(2, &self.two_to_total(z)?)
    }

    pub fn check_z3(&self, z: &ThreeCocycle) -> Result<CocycleVerdict> {
        self.verdict(3, &self.three_to_total(z)?)
    }

    fn witness(&self, n: usize, v: &SparseVec) -> Result<Option<SparseVec>> {
        if !self.total.diffs[n].apply(v).is_empty() {
            return Err(Error::NotACocycle(format!("degree {n} datum is not in ker D^{n}")));
        }
        let Some(x) = solve(&self.total.diffs[n - 1], v) else { return Ok(None) };
        let explicit = if n == 2 { self.b2_matrix() } else { self.b3_matrix() };
        if explicit.apply(&x) != *v {
            return Err(Error::InconsistentWithMatrixKernel(format!(
                "degree {n} witness does not satisfy the explicit coboundary formulas"
            )));
        }
        Ok(Some(x))
    }

    /// A witness `h` with `(f, g) = D h`, or `None` if the class is nonzero.
    pub fn is_coboundary2(&self, z: &TwoCocycle) -> Result<Option<Cochain>> {
        let v = self.two_to_total(z)?;
        Ok(self.witness(2, &v)?.map(|x| self.from_total(1, &x).remove(0)))
    }

    /// A witness `(m, n)` with `(f, g, h) = D(m, n)`, or `None`.
    pub fn is_coboundary3(&self, z: &ThreeCocycle) -> Result<Option<(Cochain, Cochain)>> {
        let v = self.three_to_total(z)?;
        Ok(self.witness(3, &v)?.map(|x| {
            let mut parts = self.from_total(2, &x).into_iter();
            (parts.next().expect("m"), parts.next().expect("n"))
        }))
    }

    pub fn cohomologous2(&self, x: &TwoCocycle, y: &TwoCocycle) -> Result<bool> {
        let one = self.field().one();
        let d = crate::linalg::sparse_combine(&one, &self.two_to_total(x)?, &-&one, &self.two_to_total(y)?);
        Ok(self.witness(2, &d)?.is_some())
    }

    pub fn cohomologous3(&self, x: &ThreeCocycle, y: &ThreeCocycle) -> Result<bool> {
        let one = self.field().one();
        let d = crate::linalg::sparse_combine(&one, &self.three_to_total(x)?, &-&one, &self.three_to_total(y)?);
        Ok(self.witness(3, &d)?.is_some())
    }

    /// `ker` of the explicit identities against `ker D^n`, `n = 2, 3`.
    pub fn z_consistency(&self, n: usize) -> SubspaceCheck {
        let system = if n == 2 { self.z2_system() } else { self.z3_system() };
        let explicit = rank_kernel(&system.matrix).1;
        let matrix = self.kernel(n);
        SubspaceCheck {
            what: format!("Z^{n}"),
            explicit_dim: explicit.len(),
            matrix_dim: matrix.len(),
            explicit_in_matrix: explicit.iter().all(|v| self.total.diffs[n].apply(v).is_empty()),
            matrix_in_explicit: matrix.iter().all(|v| system.matrix.apply(v).is_empty()),
        }
    }

    /// Image of the explicit coboundary formulas against `im D^{n-1}`.
    pub fn b_consistency(&self, n: usize) -> SubspaceCheck {
        let field = self.field();
        let explicit = if n == 2 { self.b2_matrix() } else { self.b3_matrix() }.columns();
        let matrix = self.total.diffs[n - 1].columns();
        let amb = self.total.dim(n);
        let (de, dm) = (span_dim(field, amb, &explicit), span_dim(field, amb, &matrix));
        let mut both = explicit.clone();
        both.extend(matrix.iter().cloned());
        let joint = span_dim(field, amb, &both);
        SubspaceCheck {
            what: format!("B^{n}"),
            explicit_dim: de,
            matrix_dim: dm,
            explicit_in_matrix: joint == dm,
            matrix_in_explicit: joint == de,
        }
    }

    /// `S = M (+) R` with `a(m,r) = (am + g(a,r), ar)` and
    /// `(m,r)(n,s) = (ms + rn + f(r,s), rs)`.
    pub fn build_extension(&self, z: &TwoCocycle) -> Result<AbelianExtension> {
        let v = self.two_to_total(z)?;
        if !self.total.diffs[2].apply(&v).is_empty() {
            return Err(Error::NotACocycle("datum is not in Z^2".into()));
        }
        let ext = self.build_unchecked(z);
        self.validate_extension(&ext)?;
        Ok(ext)
    }

    fn build_unchecked(&self, z: &TwoCocycle) -> AbelianExtension {
        let t = &self.triple;
        let field = self.field();
        let Dims { a: na, r: nr, m: nm } = self.dims();
        let ns = nm + nr;
        let mut mult = Tensor3::zero(field, [ns, ns, ns]);
        for i in 0..ns {
            for j in 0..ns {
                let mut out = vec![field.zero(); ns];
                match (i < nm, j < nm) {
                    (true, true) => {}
                    (true, false) => out[..nm]
                        .clone_from_slice(&t.m.right_act(&unit_vec(field, nm, i), &unit_vec(field, nr, j - nm))),
                    (false, true) => {
                        out[..nm].clone_from_slice(&t.m.left_act(&unit_vec(field, nr, i - nm), &unit_vec(field, nm, j)))
                    }
                    (false, false) => {
                        out[..nm].clone_from_slice(&z.f.eval(&[], &[i - nm, j - nm]));
                        out[nm..].clone_from_slice(t.r.mult.slice(i - nm, j - nm));
                    }
                }
                for (k, x) in out.into_iter().enumerate() {
                    mult.set(i, j, k, x);
                }
            }
        }
        let mut f11 = vec![field.zero(); nm];
        for (i, ci) in t.r.unit.iter().enumerate() {
            for (j, cj) in t.r.unit.iter().enumerate() {
                if !ci.is_zero() && !cj.is_zero() {
                    f11 = vec_add(&f11, &vec_scale(&(ci * cj), &z.f.eval(&[], &[i, j])));
                }
            }
        }
        let mut unit: Vec<Scalar> = f11.iter().map(|x| -x).collect();
        unit.extend(t.r.unit.iter().cloned());
        let mut act = Tensor3::zero(field, [na, ns, ns]);
        for a in 0..na {
            let phi = t.r.structure_map(&unit_vec(field, na, a));
            for j in 0..ns {
                let mut out = vec![field.zero(); ns];
                if j < nm {
                    out[..nm].clone_from_slice(&t.m.left_act(&phi, &unit_vec(field, nm, j)));
                } else {
                    out[..nm].clone_from_slice(&z.g.eval(&[a], &[j - nm]));
                    out[nm..].clone_from_slice(t.r.a_action.slice(a, j - nm));
                }
                for (k, x) in out.into_iter().enumerate() {
                    act.set(a, j, k, x);
                }
            }
        }
        let mut labels: Vec<String> = t.m.labels.iter().map(|l| format!("({l},0)")).collect();
        labels.extend(t.r.labels.iter().map(|l| format!("(0,{l})")));
        let s = AssocAlgebra::new(field, labels, mult, unit, act).expect("shapes match");
        let projection =
            DenseMatrix::from_fn(field, nr, ns, |i, j| if j == nm + i { field.one() } else { field.zero() });
        let inclusion = DenseMatrix::from_fn(field, ns, nm, |i, j| if i == j { field.one() } else { field.zero() });
        AbelianExtension { s, projection, inclusion }
    }

    /// Exactness, square-zero kernel, `A`-algebra projection and the induced
    /// bimodule structure on `M`.
    pub fn validate_extension(&self, ext: &AbelianExtension) -> Result<()> {
        let t = &self.triple;
        let field = self.field();
        let Dims { a: na, r: nr, m: nm } = self.dims();
        let ns = ext.s.dim();
        if ext.s.field != field {
            return Err(Error::FieldMismatch(ext.s.field, field));
        }
        if ext.projection.rows() != nr
            || ext.projection.cols() != ns
            || ext.inclusion.rows() != ns
            || ext.inclusion.cols() != nm
            || ext.s.a_action.dims()[0] != na
        {
            return Err(Error::Shape("extension matrices do not match dim R, dim S, dim M".into()));
        }
        ext.s.validate(&t.a).into_result("extension algebra")?;
        if matrix_rank(&ext.inclusion) != nm
            || matrix_rank(&ext.projection) != nr
            || nm + nr != ns
            || !ext.projection.mul(&ext.inclusion).is_zero()
        {
            return Err(Error::NotExact("0 -> M -> S -> R -> 0".into()));
        }
        let pi = |x: &[Scalar]| ext.projection.mul_vec(x);
        let incl = |x: &[Scalar]| ext.inclusion.mul_vec(x);
        let e = |i| unit_vec(field, ns, i);
        for i in 0..ns {
            for j in 0..ns {
                if pi(&ext.s.mul(&e(i), &e(j))) != t.r.mul(&pi(&e(i)), &pi(&e(j))) {
                    return Err(Error::ValidationFailure(format!("projection is not multiplicative at {:?}", [i, j])));
                }
            }
            for a in 0..na {
                let av = unit_vec(field, na, a);
                if pi(&ext.s.act(&av, &e(i))) != t.r.act(&av, &pi(&e(i))) {
                    return Err(Error::ValidationFailure(format!("projection is not A-linear at {:?}", [a, i])));
                }
            }
        }
        if pi(&ext.s.unit) != t.r.unit {
            return Err(Error::ValidationFailure("projection is not unital".into()));
        }
        for i in 0..nm {
            let mi = incl(&unit_vec(field, nm, i));
            for j in 0..nm {
                if !is_zero_vec(&ext.s.mul(&mi, &incl(&unit_vec(field, nm, j)))) {
                    return Err(Error::ValidationFailure(format!("M.M != 0 at {:?}", [i, j])));
                }
            }
            for s in 0..ns {
                let r = pi(&e(s));
                let m = unit_vec(field, nm, i);
                if ext.s.mul(&e(s), &mi) != incl(&t.m.left_act(&r, &m))
                    || ext.s.mul(&mi, &e(s)) != incl(&t.m.right_act(&m, &r))
                {
                    return Err(Error::ValidationFailure(format!(
                        "induced bimodule structure differs from M at {:?}",
                        [s, i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn cochain_from_values(&self, deg: BiDegree, values: Vec<Vec<Scalar>>) -> Cochain {
        let nm = self.dims().m;
        let coeffs = values
            .into_iter()
            .enumerate()
            .flat_map(|(x, v)| v.into_iter().enumerate().map(move |(m, c)| (x * nm + m, c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Cochain::from_sparse(self.field(), deg, self.dims(), coeffs)
    }

    /// `f(r,s) = h(r)h(s) - h(rs)`, `g(a,r) = ah(r) - h(ar)` for the
    /// deterministic section `h` of the projection.
    pub fn extract_cocycle2(&self, ext: &AbelianExtension, rule: SectionRule) -> Result<TwoCocycle> {
        self.validate_extension(ext)?;
        let t = &self.triple;
        let field = self.field();
        let Dims { a: na, r: nr, .. } = self.dims();
        let h = right_inverse(&ext.projection, rule).ok_or_else(|| Error::NotExact("projection not onto".into()))?;
        let l = left_inverse(&ext.inclusion, rule).ok_or_else(|| Error::NotExact("inclusion not injective".into()))?;
        let pull = |v: Vec<Scalar>| -> Result<Vec<Scalar>> {
            let m = l.mul_vec(&v);
            if ext.inclusion.mul_vec(&m) != v {
                return Err(Error::SectionFailure("defect does not lie in M".into()));
            }
            Ok(m)
        };
        let hc = |i| h.column(i);
        let f_vals = self
            .args(BiDegree::new(0, 2))
            .into_iter()
            .map(|x| pull(vec_sub(&ext.s.mul(&hc(x[0]), &hc(x[1])), &h.mul_vec(t.r.mult.slice(x[0], x[1])))))
            .collect::<Result<Vec<_>>>()?;
        let g_vals = self
            .args(BiDegree::new(1, 1))
            .into_iter()
            .map(|x| {
                let av = unit_vec(field, na, x[0]);
                pull(vec_sub(&ext.s.act(&av, &hc(x[1])), &h.mul_vec(t.r.a_action.slice(x[0], x[1]))))
            })
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(g_vals.len(), na * nr);
        let z = TwoCocycle {
            f: self.cochain_from_values(BiDegree::new(0, 2), f_vals),
            g: self.cochain_from_values(BiDegree::new(1, 1), g_vals),
        };
        if !self.check_z2(&z)?.is_cocycle {
            return Err(Error::InconsistentWithMatrixKernel("extracted datum is not a cocycle".into()));
        }
        Ok(z)
    }

    /// An `A`-linear algebra map `S -> S'` compatible with inclusions and
    /// projections, if one exists.
    pub fn equivalence(&self, x: &AbelianExtension, y: &AbelianExtension) -> Result<Option<DenseMatrix>> {
        self.validate_extension(x)?;
        self.validate_extension(y)?;
        self.equivalence_unchecked(x, y)
    }

    /// Every compatible map is `phi_0 + i' D p` for `D: R -> M`; because
    /// `M.M = 0` the constraints are affine in `D`.
    fn equivalence_unchecked(&self, x: &AbelianExtension, y: &AbelianExtension) -> Result<Option<DenseMatrix>> {
        let field = self.field();
        let Dims { a: na, r: nr, m: nm } = self.dims();
        let ns = nm + nr;
        let rule = SectionRule::First;
        let h1 = right_inverse(&x.projection, rule).ok_or_else(|| Error::NotExact("projection".into()))?;
        let l1 = left_inverse(&x.inclusion, rule).ok_or_else(|| Error::NotExact("inclusion".into()))?;
        let h2 = right_inverse(&y.projection, rule).ok_or_else(|| Error::NotExact("projection".into()))?;
        let mut split = DenseMatrix::identity(field, ns);
        split.add_scaled(&-field.one(), &h1.mul(&x.projection));
        let mut base = y.inclusion.mul(&l1).mul(&split);
        base.add_scaled(&field.one(), &h2.mul(&x.projection));
        let phi_of = |d: &DenseMatrix| {
            let mut p = base.clone();
            p.add_scaled(&field.one(), &y.inclusion.mul(d).mul(&x.projection));
            p
        };
        let defects = |phi: &DenseMatrix| -> Vec<Scalar> {
            let mut out = Vec::new();
            let e = |i| unit_vec(field, ns, i);
            let img: Vec<Vec<Scalar>> = (0..ns).map(|i| phi.column(i)).collect();
            for i in 0..ns {
                for j in 0..ns {
                    out.extend(vec_sub(&phi.mul_vec(x.s.mult.slice(i, j)), &y.s.mul(&img[i], &img[j])));
                }
                for a in 0..na {
                    let av = unit_vec(field, na, a);
                    out.extend(vec_sub(&phi.mul_vec(&x.s.act(&av, &e(i))), &y.s.act(&av, &img[i])));
                }
            }
            out.extend(vec_sub(&phi.mul_vec(&x.s.unit), &y.s.unit));
            out
        };
        let c0 = defects(&base);
        let mut entries = Vec::new();
        for k in 0..nm {
            for j in 0..nr {
                let mut d = DenseMatrix::zero(field, nm, nr);
                d.set(k, j, field.one());
                let col = k * nr + j;
                for (row, (v, w)) in defects(&phi_of(&d)).iter().zip(&c0).enumerate() {
                    let diff = v - w;
                    if !diff.is_zero() {
                        entries.push((row, col, diff));
                    }
                }
            }
        }
        let jac = SparseMatrix::from_triplets(field, c0.len(), nm * nr, entries)?;
        let rhs: SparseVec = dense_to_sparse(&c0).into_iter().map(|(i, v)| (i, -v)).collect();
        let Some(sol) = solve(&jac, &rhs) else { return Ok(None) };
        let sol = dense_vec(field, &sol, nm * nr);
        let d = DenseMatrix::from_fn(field, nm, nr, |k, j| sol[k * nr + j].clone());
        let phi = phi_of(&d);
        if !is_zero_vec(&defects(&phi)) {
            return Err(Error::ValidationFailure("equivalence map fails multiplicativity".into()));
        }
        Ok(Some(phi))
    }

    /// `C1 = M`, `C0 = R`, zero boundary.
    pub fn trivial_crossed(&self) -> CrossedExtension {
        let field = self.field();
        let Dims { r: nr, m: nm, .. } = self.dims();
        CrossedExtension {
            c0: self.triple.r.clone(),
            c1: self.triple.m.clone(),
            boundary: DenseMatrix::zero(field, nr, nm),
            pi: DenseMatrix::identity(field, nr),
            iota: DenseMatrix::identity(field, nm),
        }
    }

    /// `C1 = M (+) M`, `C0 = S`, boundary `(m1, m2) -> incl(m2)`, with `S`
    /// acting on `C1` through the projection.
    pub fn crossed_from_extension(&self, ext: &AbelianExtension) -> Result<CrossedExtension> {
        self.validate_extension(ext)?;
        let t = &self.triple;
        let field = self.field();
        let nm = self.dims().m;
        let ns = ext.s.dim();
        let n1 = 2 * nm;
        let mut left = Tensor3::zero(field, [ns, n1, n1]);
        let mut right = Tensor3::zero(field, [n1, ns, n1]);
        for s in 0..ns {
            let r = ext.projection.column(s);
            let lo = t.m.left_operator(&r);
            let ro = t.m.right_operator(&r);
            for half in 0..2 {
                for j in 0..nm {
                    for k in 0..nm {
                        left.set(s, half * nm + j, half * nm + k, lo.get(k, j).clone());
                        right.set(half * nm + j, s, half * nm + k, ro.get(k, j).clone());
                    }
                }
            }
        }
        let mut labels: Vec<String> = t.m.labels.iter().map(|l| format!("({l},0)")).collect();
        labels.extend(t.m.labels.iter().map(|l| format!("(0,{l})")));
        let c1 = Bimodule::new(field, labels, left, right)?;
        let boundary = DenseMatrix::from_fn(field, ns, n1, |i, j| {
            if j >= nm {
                ext.inclusion.get(i, j - nm).clone()
            } else {
                field.zero()
            }
        });
        let iota = DenseMatrix::from_fn(field, n1, nm, |i, j| if i == j { field.one() } else { field.zero() });
        let ce = CrossedExtension { c0: ext.s.clone(), c1, boundary, pi: ext.projection.clone(), iota };
        self.validate_crossed(&ce)?;
        Ok(ce)
    }

    /// Crossed bimodule axioms, exactness, the `A`-algebra map `C0 -> R` and
    /// the induced bimodule on `M`.
    pub fn validate_crossed(&self, ce: &CrossedExtension) -> Result<()> {
        let t = &self.triple;
        let field = self.field();
        let Dims { a: na, r: nr, m: nm } = self.dims();
        let (n0, n1) = (ce.c0.dim(), ce.c1.dim());
        if ce.c0.field != field || ce.c1.field != field {
            return Err(Error::FieldMismatch(ce.c0.field, field));
        }
        if ce.boundary.rows() != n0
            || ce.boundary.cols() != n1
            || ce.pi.rows() != nr
            || ce.pi.cols() != n0
            || ce.iota.rows() != n1
            || ce.iota.cols() != nm
            || ce.c1.left.dims()[0] != n0
            || ce.c0.a_action.dims()[0] != na
        {
            return Err(Error::Shape("crossed extension matrices do not match the dimensions".into()));
        }
        ce.c0.validate(&t.a).into_result("C0")?;
        ce.c1.validate(&ce.c0).into_result("C1")?;
        let rank_d = matrix_rank(&ce.boundary);
        if matrix_rank(&ce.iota) != nm
            || !ce.boundary.mul(&ce.iota).is_zero()
            || rank_d + nm != n1
            || !ce.pi.mul(&ce.boundary).is_zero()
            || matrix_rank(&ce.pi) != nr
            || rank_d + nr != n0
        {
            return Err(Error::NotExact("0 -> M -> C1 -> C0 -> R -> 0".into()));
        }
        let d = |c: &[Scalar]| ce.boundary.mul_vec(c);
        let e0 = |i| unit_vec(field, n0, i);
        let e1 = |i| unit_vec(field, n1, i);
        for x in 0..n0 {
            for c in 0..n1 {
                if d(&ce.c1.left_act(&e0(x), &e1(c))) != ce.c0.mul(&e0(x), &d(&e1(c)))
                    || d(&ce.c1.right_act(&e1(c), &e0(x))) != ce.c0.mul(&d(&e1(c)), &e0(x))
                {
                    return Err(Error::ValidationFailure(format!("boundary is not a bimodule map at {:?}", [x, c])));
                }
            }
        }
        for c in 0..n1 {
            for c2 in 0..n1 {
                if ce.c1.left_act(&d(&e1(c)), &e1(c2)) != ce.c1.right_act(&e1(c), &d(&e1(c2))) {
                    return Err(Error::ValidationFailure(format!("Peiffer identity fails at {:?}", [c, c2])));
                }
            }
        }
        let pi = |x: &[Scalar]| ce.pi.mul_vec(x);
        for i in 0..n0 {
            for j in 0..n0 {
                if pi(&ce.c0.mul(&e0(i), &e0(j))) != t.r.mul(&pi(&e0(i)), &pi(&e0(j))) {
                    return Err(Error::ValidationFailure(format!("C0 -> R is not multiplicative at {:?}", [i, j])));
                }
            }
            for a in 0..na {
                let av = unit_vec(field, na, a);
                if pi(&ce.c0.act(&av, &e0(i))) != t.r.act(&av, &pi(&e0(i))) {
                    return Err(Error::ValidationFailure(format!("C0 -> R is not A-linear at {:?}", [a, i])));
                }
            }
        }
        if pi(&ce.c0.unit) != t.r.unit {
            return Err(Error::ValidationFailure("C0 -> R is not unital".into()));
        }
        for x in 0..n0 {
            let r = pi(&e0(x));
            for i in 0..nm {
                let m = unit_vec(field, nm, i);
                let im = ce.iota.mul_vec(&m);
                if ce.c1.left_act(&e0(x), &im) != ce.iota.mul_vec(&t.m.left_act(&r, &m))
                    || ce.c1.right_act(&im, &e0(x)) != ce.iota.mul_vec(&t.m.right_act(&m, &r))
                {
                    return Err(Error::ValidationFailure(format!(
                        "induced bimodule structure differs from M at {:?}",
                        [x, i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The 3-cocycle of a crossed extension from sections `p` of `C0 -> R`
    /// and `q` of `C1 -> im(boundary)`.
    pub fn crossed_to_cocycle(&self, ce: &CrossedExtension, rule: SectionRule) -> Result<ThreeCocycle> {
        self.validate_crossed(ce)?;
        let t = &self.triple;
        let field = self.field();
        let Dims { a: na, r: nr, .. } = self.dims();
        let n1 = ce.c1.dim();
        let p = right_inverse(&ce.pi, rule).ok_or_else(|| Error::SectionFailure("C0 -> R".into()))?;
        let cols = independent_columns(&ce.boundary, rule);
        let dj = DenseMatrix::from_fn(field, ce.c0.dim(), cols.len(), |i, j| ce.boundary.get(i, cols[j]).clone());
        let dj_inv = left_inverse(&dj, rule).ok_or_else(|| Error::SectionFailure("image of the boundary".into()))?;
        let q = |v: Vec<Scalar>| -> Result<Vec<Scalar>> {
            let c = dj_inv.mul_vec(&v);
            if dj.mul_vec(&c) != v {
                return Err(Error::SectionFailure("defect outside the image of the boundary".into()));
            }
            let mut out = vec![field.zero(); n1];
            for (k, &j) in cols.iter().enumerate() {
                out[j] = c[k].clone();
            }
            Ok(out)
        };
        let pv = |r: &[Scalar]| p.mul_vec(r);
        let pc: Vec<Vec<Scalar>> = (0..nr).map(|i| p.column(i)).collect();
        let lift_a = |a: &[Scalar]| ce.c0.structure_map(a);
        let ua = |i| unit_vec(field, na, i);
        let ur = |i| unit_vec(field, nr, i);
        let mut m_tab = vec![vec![Vec::new(); nr]; nr];
        for i in 0..nr {
            for j in 0..nr {
                m_tab[i][j] = q(vec_sub(&ce.c0.mul(&pc[i], &pc[j]), &pv(t.r.mult.slice(i, j))))?;
            }
        }
        let mut n_tab = vec![vec![Vec::new(); nr]; na];
        for a in 0..na {
            for j in 0..nr {
                n_tab[a][j] = q(vec_sub(&ce.c0.act(&ua(a), &pc[j]), &pv(t.r.a_action.slice(a, j))))?;
            }
        }
        let bilinear = |tab: &Vec<Vec<Vec<Scalar>>>, x: &[Scalar], y: &[Scalar]| {
            let mut out = vec![field.zero(); n1];
            for (i, cx) in x.iter().enumerate() {
                for (j, cy) in y.iter().enumerate() {
                    if !cx.is_zero() && !cy.is_zero() {
                        out = vec_add(&out, &vec_scale(&(cx * cy), &tab[i][j]));
                    }
                }
            }
            out
        };
        let mm = |x: &[Scalar], y: &[Scalar]| bilinear(&m_tab, x, y);
        let nn = |x: &[Scalar], y: &[Scalar]| bilinear(&n_tab, x, y);
        let rmul = |x: &[Scalar], y: &[Scalar]| t.r.mul(x, y);
        let ract = |a: &[Scalar], r: &[Scalar]| t.r.act(a, r);
        let amul = |a: &[Scalar], b: &[Scalar]| t.a.mul(a, b);
        let l = left_inverse(&ce.iota, rule).ok_or_else(|| Error::NotExact("M -> C1".into()))?;
        let pull = |v: Vec<Scalar>| -> Result<Vec<Scalar>> {
            let m = l.mul_vec(&v);
            if ce.iota.mul_vec(&m) != v {
                return Err(Error::SectionFailure("defect does not lie in M".into()));
            }
            Ok(m)
        };
        let f_vals = self
            .args(BiDegree::new(0, 3))
            .into_iter()
            .map(|x| {
                let (r, s, w) = (ur(x[0]), ur(x[1]), ur(x[2]));
                let mut v = ce.c1.left_act(&pv(&r), &mm(&s, &w));
                v = vec_sub(&v, &mm(&rmul(&r, &s), &w));
                v = vec_add(&v, &mm(&r, &rmul(&s, &w)));
                v = vec_sub(&v, &ce.c1.right_act(&mm(&r, &s), &pv(&w)));
                pull(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let g_vals = self
            .args(BiDegree::new(1, 2))
            .into_iter()
            .map(|x| {
                let (a, b, r, s) = (ua(x[0]), ua(x[1]), ur(x[2]), ur(x[3]));
                let (ar, bs) = (ract(&a, &r), ract(&b, &s));
                let mut v = ce.c1.left_act(&lift_a(&amul(&a, &b)), &mm(&r, &s));
                v = vec_sub(&v, &mm(&ar, &bs));
                v = vec_sub(&v, &ce.c1.left_act(&pv(&ar), &nn(&b, &s)));
                v = vec_add(&v, &nn(&amul(&a, &b), &rmul(&r, &s)));
                v = vec_sub(&v, &ce.c1.right_act(&nn(&a, &r), &ce.c0.act(&b, &pv(&s))));
                pull(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let h_vals = self
            .args(BiDegree::new(2, 1))
            .into_iter()
            .map(|x| {
                let (a, b, r) = (ua(x[0]), ua(x[1]), ur(x[2]));
                let mut v = ce.c1.left_act(&lift_a(&a), &nn(&b, &r));
                v = vec_sub(&v, &nn(&amul(&a, &b), &r));
                v = vec_add(&v, &nn(&a, &ract(&b, &r)));
                pull(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let z = ThreeCocycle {
            f: self.cochain_from_values(BiDegree::new(0, 3), f_vals),
            g: self.cochain_from_values(BiDegree::new(1, 2), g_vals),
            h: self.cochain_from_values(BiDegree::new(2, 1), h_vals),
        };
        if !self.check_z3(&z)?.is_cocycle {
            return Err(Error::InconsistentWithMatrixKernel("crossed-extension datum is not in ker D^3".into()));
        }
        Ok(z)
    }

    /// Exhaustive enumeration of `Z^2` over `F_2` and grouping of the built
    /// extensions into equivalence classes.
    pub fn classify_bruteforce(&self) -> Result<Classification> {
        let field = self.field();
        if field.characteristic() != 2 {
            return Err(Error::BadParams("brute-force classification runs over F_2 only".into()));
        }
        let bits = self.total.dim(2);
        if bits > MAX_SEARCH_BITS {
            return Err(Error::SearchSpaceTooLarge(1u128 << bits.min(127)));
        }
        let rows = self.total.dim(3);
        let words = rows.div_ceil(64).max(1);
        let mut columns = vec![vec![0u64; words]; bits];
        for (r, c, _) in self.total.diffs[2].entries() {
            columns[*c][r / 64] ^= 1 << (r % 64);
        }
        let mut acc = vec![0u64; words];
        let mut cocycles: Vec<u64> = vec![0];
        let mut code = 0u64;
        for step in 1u64..(1u64 << bits) {
            let flip = step.trailing_zeros() as usize;
            code ^= 1 << flip;
            for (w, c) in acc.iter_mut().zip(&columns[flip]) {
                *w ^= c;
            }
            if acc.iter().all(|&w| w == 0) {
                cocycles.push(code);
            }
        }
        let b_rank = crate::linalg::rank(&self.total.diffs[1]);
        let coboundaries = 1u64 << b_rank;
        let z = cocycles.len() as u64;
        let mut reps: Vec<AbelianExtension> = Vec::new();
        for code in &cocycles {
            let v: SparseVec = (0..bits).filter(|i| code >> i & 1 == 1).map(|i| (i, field.one())).collect();
            let ext = self.build_unchecked(&self.two_from_total(&v));
            let mut known = false;
            for r in &reps {
                if self.equivalence_unchecked(&ext, r)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                self.validate_extension(&ext)?;
                reps.push(ext);
            }
        }
        let h2_dim = cohomology(&self.total).dim(2);
        Ok(Classification {
            search_bits: bits,
            cocycles: z,
            coboundaries,
            h2_size: z / coboundaries,
            classes: reps.len(),
            h2_dim,
        })
    }

    pub fn load_extension(&self, j: &ExtensionJson) -> Result<AbelianExtension> {
        let s = j.algebra.to_algebra(&self.triple.a)?;
        let Dims { r: nr, m: nm, .. } = self.dims();
        let ns = s.dim();
        Ok(AbelianExtension {
            projection: matrix_from_strings(self.field(), nr, ns, &j.projection)?,
            inclusion: matrix_from_strings(self.field(), ns, nm, &j.inclusion)?,
            s,
        })
    }

    pub fn load_crossed(&self, j: &CrossedJson) -> Result<CrossedExtension> {
        let c0 = j.c0.to_algebra(&self.triple.a)?;
        let c1 = j.c1.to_bimodule(&c0)?;
        let Dims { r: nr, m: nm, .. } = self.dims();
        let (n0, n1) = (c0.dim(), c1.dim());
        Ok(CrossedExtension {
            boundary: matrix_from_strings(self.field(), n0, n1, &j.boundary)?,
            pi: matrix_from_strings(self.field(), nr, n0, &j.pi)?,
            iota: matrix_from_strings(self.field(), n1, nm, &j.iota)?,
            c0,
            c1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::hochschild_over_a;
    use crate::presentation::builtins::bundle;
    use crate::presentation::random::random_suite;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(name: &str, field: FieldSpec) -> ExtensionContext {
        ExtensionContext::new(&bundle(name, field, &[]).unwrap().expect_assoc().unwrap()).unwrap()
    }

    #[test]
    fn zero_data() {
        let e = ctx("dual_numbers", FieldSpec::Rationals);
        assert!(e.check_z2(&e.zero2()).unwrap().is_cocycle);
        assert!(e.check_z3(&e.zero3()).unwrap().is_cocycle);
        assert!(e.is_coboundary2(&e.zero2()).unwrap().unwrap().is_zero());
        let (m, n) = e.is_coboundary3(&e.zero3()).unwrap().unwrap();
        assert!(m.is_zero() && n.is_zero());
    }

    #[test]
    fn explicit_formulas_match_matrices() {
        for t in random_suite(FieldSpec::prime(5).unwrap(), 11, 16).unwrap() {
            let e = ExtensionContext::new(&t).unwrap();
            for n in [2, 3] {
                assert!(e.z_consistency(n).agrees(), "{:?}", e.z_consistency(n));
                assert!(e.b_consistency(n).agrees());
            }
            assert_eq!(e.b2_matrix(), &e.total.diffs[1]);
            assert_eq!(e.b3_matrix(), &e.total.diffs[2]);
        }
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in random_suite(FieldSpec::Rationals, 2, 8).unwrap() {
            let e = ExtensionContext::new(&t).unwrap();
            let h = e.random_cochain(&mut rng, BiDegree::new(0, 1));
            let z = e.coboundary2(&h).unwrap();
            assert!(e.check_z2(&z).unwrap().is_cocycle);
            let w = e.is_coboundary2(&z).unwrap().unwrap();
            assert_eq!(e.coboundary2(&w).unwrap(), z);
        }
    }

    #[test]
    fn non_cocycle_names_identity() {
        let f2 = FieldSpec::prime(2).unwrap();
        let e = ctx("trunc_poly", f2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = 0;
        for _ in 0..20 {
            let z = TwoCocycle {
                f: e.random_cochain(&mut rng, BiDegree::new(0, 2)),
                g: e.random_cochain(&mut rng, BiDegree::new(1, 1)),
            };
            let v = e.check_z2(&z).unwrap();
            if !v.is_cocycle {
                assert!(!v.violations.is_empty());
                assert!(e.z2_system().names.contains(&v.violations[0].identity.as_str()));
                seen += 1;
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn dual_numbers_extension() {
        let f = FieldSpec::Rationals;
        let e = ctx("dual_numbers", f);
        let t = &e.triple;
        // S = A, projection by the augmentation, M = (e)
        let s = crate::presentation::builtins::regular_algebra(&t.a);
        let ext = AbelianExtension {
            s,
            projection: DenseMatrix::from_rows(f, vec![vec![f.one(), f.zero()]]).unwrap(),
            inclusion: DenseMatrix::from_rows(f, vec![vec![f.zero()], vec![f.one()]]).unwrap(),
        };
        let z = e.extract_cocycle2(&ext, SectionRule::First).unwrap();
        assert!(z.f.is_zero());
        assert_eq!(z.g.eval(&[1], &[0]), vec![f.one()]);
        assert!(e.is_coboundary2(&z).unwrap().is_none());
        assert_eq!(hochschild_over_a(t, 3, DEFAULT_CAP).unwrap().dim(2), 0);
        let built = e.build_extension(&z).unwrap();
        assert!(e.equivalence(&built, &ext).unwrap().is_some());
        let split = e.build_extension(&e.zero2()).unwrap();
        assert!(e.equivalence(&split, &ext).unwrap().is_none());
    }

    #[test]
    fn roundtrip_degree_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for t in random_suite(FieldSpec::Rationals, 4, 16).unwrap() {
            let e = ExtensionContext::new(&t).unwrap();
            let z = e.random_cocycle2(&mut rng);
            let ext = e.build_extension(&z).unwrap();
            for rule in [SectionRule::First, SectionRule::Last] {
                let back = e.extract_cocycle2(&ext, rule).unwrap();
                assert!(e.cohomologous2(&z, &back).unwrap());
                let again = e.build_extension(&back).unwrap();
                assert!(e.equivalence(&again, &ext).unwrap().is_some());
            }
        }
    }

    #[test]
    fn crossed_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in random_suite(FieldSpec::prime(5).unwrap(), 6, 16).unwrap() {
            let e = ExtensionContext::new(&t).unwrap();
            let triv = e.crossed_to_cocycle(&e.trivial_crossed(), SectionRule::First).unwrap();
            assert!(triv.f.is_zero() && triv.g.is_zero() && triv.h.is_zero());
            let ext = e.build_extension(&e.random_cocycle2(&mut rng)).unwrap();
            let ce = e.crossed_from_extension(&ext).unwrap();
            let a = e.crossed_to_cocycle(&ce, SectionRule::First).unwrap();
            let b = e.crossed_to_cocycle(&ce, SectionRule::Last).unwrap();
            assert!(e.is_coboundary3(&a).unwrap().is_some());
            assert!(e.cohomologous3(&a, &b).unwrap());
        }
    }

    #[test]
    fn classify_small() {
        let f2 = FieldSpec::prime(2).unwrap();
        for name in ["base_field", "dual_numbers"] {
            let c = ctx(name, f2).classify_bruteforce().unwrap();
            assert!(c.consistent(), "{name}: {c:?}");
        }
        assert_eq!(ctx("base_field", f2).classify_bruteforce().unwrap().classes, 1);
        assert!(matches!(ctx("base_field", FieldSpec::Rationals).classify_bruteforce(), Err(Error::BadParams(_))));
    }
}
