//! The bicomplex `K^{**}(A,R,M)`, its reduced subcomplex and the total
//! complex.
//!
//! Horizontal `d: K^{pq} -> K^{p+1,q}` is the Hochschild coboundary of the
//! commutative algebra `A^{(x)q}` (rows of the argument matrix) with values
//! in `Hom(R^{(x)q}, M)`; row `q = 0` alternates `0, id, 0, ..`. Vertical
//! `delta: K^{pq} -> K^{p,q+1}` is `(-1)^p` times the Hochschild coboundary
//! of `A^{(x)p} (x) R` acting on columns. With these signs `d` and `delta`
//! anticommute and the total differential is `D = d + delta`.
//!
//! Total degree `n` is laid out as the blocks `(0,n), (1,n-1), .., (n,0)` in
//! that order.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::cochain::{arg_count, decode_args, encode_args, radices, space_dim, BiDegree, Dims};
use crate::error::{Error, Result};
use crate::linalg::{canonicalize_vec, DenseMatrix, SparseMatrix, SparseVec};
use crate::presentation::{AssocTriple, LieTriple};
use crate::scalar::{FieldSpec, Scalar};

/// Structure constants of a triple in the sparse form used by assembly.
#[derive(Clone, Debug)]
pub struct AssocContext {
    pub field: FieldSpec,
    pub dims: Dims,
    pub a_unit: SparseVec,
    a_mul: Vec<Vec<SparseVec>>,
    r_mul: Vec<Vec<SparseVec>>,
    act: Vec<Vec<SparseVec>>,
    left_a: Vec<DenseMatrix>,
    left_r: Vec<DenseMatrix>,
    right_r: Vec<DenseMatrix>,
}

fn sparse_table(t: &crate::presentation::Tensor3) -> Vec<Vec<SparseVec>> {
    let [n0, n1, _] = t.dims();
    (0..n0).map(|i| (0..n1).map(|j| crate::linalg::dense_to_sparse(t.slice(i, j))).collect()).collect()
}

fn unit_sparse(field: FieldSpec, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

/// Product of two sparse vectors through a table of basis products.
fn mul_sparse(table: &[Vec<SparseVec>], x: &SparseVec, y: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    for (i, a) in x {
        for (j, b) in y {
            let c = a * b;
            out.extend(table[*i][*j].iter().map(|(k, t)| (*k, &c * t)));
        }
    }
    canonicalize_vec(out)
}

fn operator(ops: &[DenseMatrix], v: &SparseVec, field: FieldSpec, n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zero(field, n, n);
    for (k, c) in v {
        m.add_scaled(c, &ops[*k]);
    }
    m
}

impl AssocContext {
    pub fn new(t: &AssocTriple) -> Self {
        let field = t.field();
        let (na, nr, nm) = t.dims();
        let phi: Vec<Vec<Scalar>> =
            (0..na).map(|i| t.r.structure_map(&crate::presentation::unit_vec(field, na, i))).collect();
        let left_r: Vec<DenseMatrix> =
            (0..nr).map(|i| t.m.left_operator(&crate::presentation::unit_vec(field, nr, i))).collect();
        let right_r: Vec<DenseMatrix> =
            (0..nr).map(|i| t.m.right_operator(&crate::presentation::unit_vec(field, nr, i))).collect();
        let left_a = phi.iter().map(|v| t.m.left_operator(v)).collect();
        AssocContext {
            field,
            dims: Dims::new(na, nr, nm),
            a_unit: crate::linalg::dense_to_sparse(&t.a.unit),
            a_mul: sparse_table(&t.a.mult),
            r_mul: sparse_table(&t.r.mult),
            act: sparse_table(&t.r.a_action),
            left_a,
            left_r,
            right_r,
        }
    }

    /// Context for the horizontal `d` of a Lie triple: `L` takes the place of
    /// `R` (only its `A`-module structure enters) and `A` acts on `M`
    /// directly.
    pub fn for_lie(t: &LieTriple) -> Self {
        let field = t.field();
        let (na, nl, nm) = t.dims();
        let left_a =
            (0..na).map(|i| t.m.a_action.left_operator(&crate::presentation::unit_vec(field, na, i))).collect();
        AssocContext {
            field,
            dims: Dims::new(na, nl, nm),
            a_unit: crate::linalg::dense_to_sparse(&t.a.unit),
            a_mul: sparse_table(&t.a.mult),
            r_mul: vec![vec![Vec::new(); nl]; nl],
            act: sparse_table(&t.l.a_action),
            left_a,
            left_r: Vec::new(),
            right_r: Vec::new(),
        }
    }

    /// Product of basis elements of `A`; the empty product is `1_A`.
    pub fn a_product(&self, idx: &[usize]) -> SparseVec {
        let mut acc = self.a_unit.clone();
        for &i in idx {
            acc = mul_sparse(&self.a_mul, &acc, &unit_sparse(self.field, i));
        }
        acc
    }

    pub fn a_mul(&self, i: usize, j: usize) -> &SparseVec {
        &self.a_mul[i][j]
    }

    pub fn r_mul(&self, i: usize, j: usize) -> &SparseVec {
        &self.r_mul[i][j]
    }

    /// `x . r_j` for an `A`-vector `x`.
    pub fn act(&self, x: &SparseVec, j: usize) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in x {
            out.extend(self.act[*i][j].iter().map(|(k, t)| (*k, c * t)));
        }
        canonicalize_vec(out)
    }

    /// Operator `m -> x m` for an `A`-vector `x`.
    pub fn left_a_op(&self, x: &SparseVec) -> DenseMatrix {
        operator(&self.left_a, x, self.field, self.dims.m)
    }

    pub fn left_r_op(&self, x: &SparseVec) -> DenseMatrix {
        operator(&self.left_r, x, self.field, self.dims.m)
    }

    pub fn right_r_op(&self, x: &SparseVec) -> DenseMatrix {
        operator(&self.right_r, x, self.field, self.dims.m)
    }
}

/// Linear operator on `M` attached to one term of a differential.
#[derive(Clone, Debug)]
pub(crate) enum Op {
    Scalar(Scalar),
    Dense(DenseMatrix),
}

impl Op {
    fn scaled(&self, c: &Scalar) -> Op {
        match self {
            Op::Scalar(s) => Op::Scalar(s * c),
            Op::Dense(m) => {
                let mut z = DenseMatrix::zero(m.field(), m.rows(), m.cols());
                z.add_scaled(c, m);
                Op::Dense(z)
            }
        }
    }

    fn add(self, other: Op, n: usize) -> Op {
        match (self, other) {
            (Op::Scalar(a), Op::Scalar(b)) => Op::Scalar(&a + &b),
            (Op::Dense(mut m), Op::Scalar(b)) | (Op::Scalar(b), Op::Dense(mut m)) => {
                for i in 0..n {
                    let v = m.get(i, i) + &b;
                    m.set(i, i, v);
                }
                Op::Dense(m)
            }
            (Op::Dense(mut m), Op::Dense(o)) => {
                let one = m.field().one();
                m.add_scaled(&one, &o);
                Op::Dense(m)
            }
        }
    }

    fn entry(&self, r: usize, c: usize) -> Option<Scalar> {
        match self {
            Op::Scalar(s) if r == c && !s.is_zero() => Some(s.clone()),
            Op::Scalar(_) => None,
            Op::Dense(m) => {
                let v = m.get(r, c);
                (!v.is_zero()).then(|| v.clone())
            }
        }
    }
}

/// Accumulates the terms of one row block `(df)(y)` of a differential.
pub(crate) struct RowBlock {
    n: usize,
    terms: HashMap<usize, Op>,
}

impl RowBlock {
    pub(crate) fn new(n: usize) -> Self {
        RowBlock { n, terms: HashMap::new() }
    }

    /// Add `op . f(x)` summed over the expansion of the given factors into
    /// basis tuples. Each factor is a sparse vector over the basis at its
    /// argument position.
    pub(crate) fn add_expanded(&mut self, op: &Op, factors: &[SparseVec], radices: &[usize]) {
        let field_one = match op {
            Op::Scalar(s) => s.field().one(),
            Op::Dense(m) => m.field().one(),
        };
        let mut stack: Vec<(usize, usize, Scalar)> = vec![(0, 0, field_one)];
        while let Some((pos, acc, c)) = stack.pop() {
            if pos == factors.len() {
                self.add_term(acc, op.scaled(&c));
                continue;
            }
            for (i, x) in &factors[pos] {
                stack.push((pos + 1, acc * radices[pos] + i, &c * x));
            }
        }
    }

    pub(crate) fn add_term(&mut self, x: usize, op: Op) {
        let n = self.n;
        match self.terms.remove(&x) {
            Some(prev) => {
                self.terms.insert(x, prev.add(op, n));
            }
            None => {
                self.terms.insert(x, op);
            }
        }
    }

    /// Canonical triplets for target argument index `y`.
    pub(crate) fn emit(self, y: usize) -> Vec<(usize, usize, Scalar)> {
        let n = self.n;
        let mut terms: Vec<(usize, Op)> = self.terms.into_iter().collect();
        terms.sort_by_key(|(x, _)| *x);
        let mut out = Vec::new();
        for mo in 0..n {
            for (x, op) in &terms {
                for mi in 0..n {
                    if let Some(v) = op.entry(mo, mi) {
                        out.push((y * n + mo, x * n + mi, v));
                    }
                }
            }
        }
        out
    }
}

/// Build a matrix by evaluating `block(y)` for every target argument tuple.
pub(crate) fn assemble_rows(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    n_targets: usize,
    block: impl Fn(usize) -> RowBlock + Sync,
) -> SparseMatrix {
    let parts: Vec<Vec<(usize, usize, Scalar)>> = (0..n_targets).into_par_iter().map(|y| block(y).emit(y)).collect();
    SparseMatrix::from_canonical(field, rows, cols, parts.into_iter().flatten().collect())
}

fn sign(neg: bool, field: FieldSpec) -> Scalar {
    if neg {
        field.from_i64(-1)
    } else {
        field.one()
    }
}

/// Dimension of `K^{pq}` or of the reduced `K-bar^{pq}`.
pub fn bidegree_dim(deg: BiDegree, dims: Dims, reduced: bool, cap: usize) -> Result<usize> {
    if reduced && deg.q == 0 && deg.p > 0 {
        return Ok(0);
    }
    space_dim(deg, dims, cap)
}

/// Matrix of `d: K^{pq} -> K^{p+1,q}`.
pub fn horizontal_d(ctx: &AssocContext, p: usize, q: usize, reduced: bool, cap: usize) -> Result<SparseMatrix> {
    let field = ctx.field;
    let dims = ctx.dims;
    let src = bidegree_dim(BiDegree::new(p, q), dims, reduced, cap)?;
    let tgt = bidegree_dim(BiDegree::new(p + 1, q), dims, reduced, cap)?;
    if q == 0 {
        return Ok(if p % 2 == 1 && src > 0 && tgt > 0 {
            SparseMatrix::identity(field, dims.m)
        } else {
            SparseMatrix::zero(field, tgt, src)
        });
    }
    let src_rad = radices(BiDegree::new(p, q), dims);
    let tgt_rad = radices(BiDegree::new(p + 1, q), dims);
    let n_targets = arg_count(BiDegree::new(p + 1, q), dims, cap)?;
    let row_off = (p + 1) * q;
    let unit = |i: usize| unit_sparse(field, i);
    Ok(assemble_rows(field, tgt, src, n_targets, |y| {
        let t = decode_args(y, &tgt_rad);
        let a = |i: usize, j: usize| t[i * q + j];
        let r = |j: usize| t[row_off + j];
        let mut block = RowBlock::new(dims.m);
        // a_01 .. a_0q . f(rows 1..p, r)
        let row0: Vec<usize> = (0..q).map(|j| a(0, j)).collect();
        let mut factors: Vec<SparseVec> = Vec::with_capacity(p * q + q);
        for i in 1..=p {
            factors.extend((0..q).map(|j| unit(a(i, j))));
        }
        factors.extend((0..q).map(|j| unit(r(j))));
        block.add_expanded(&Op::Dense(ctx.left_a_op(&ctx.a_product(&row0))), &factors, &src_rad);
        // merged rows i, i+1
        for i in 0..p {
            let mut factors = Vec::with_capacity(p * q + q);
            for k in 0..p {
                for j in 0..q {
                    factors.push(match k.cmp(&i) {
                        std::cmp::Ordering::Less => unit(a(k, j)),
                        std::cmp::Ordering::Equal => ctx.a_mul(a(i, j), a(i + 1, j)).clone(),
                        std::cmp::Ordering::Greater => unit(a(k + 1, j)),
                    });
                }
            }
            factors.extend((0..q).map(|j| unit(r(j))));
            block.add_expanded(&Op::Scalar(sign(i % 2 == 0, field)), &factors, &src_rad);
        }
        // f(rows 0..p-1, a_p1 r_1, .., a_pq r_q)
        let mut factors = Vec::with_capacity(p * q + q);
        for i in 0..p {
            factors.extend((0..q).map(|j| unit(a(i, j))));
        }
        factors.extend((0..q).map(|j| ctx.act(&unit(a(p, j)), r(j))));
        block.add_expanded(&Op::Scalar(sign(p.is_multiple_of(2), field)), &factors, &src_rad);
        block
    }))
}

/// Matrix of `delta: K^{pq} -> K^{p,q+1}`.
pub fn vertical_delta(ctx: &AssocContext, p: usize, q: usize, reduced: bool, cap: usize) -> Result<SparseMatrix> {
    let field = ctx.field;
    let dims = ctx.dims;
    let src = bidegree_dim(BiDegree::new(p, q), dims, reduced, cap)?;
    let tgt = bidegree_dim(BiDegree::new(p, q + 1), dims, reduced, cap)?;
    if src == 0 {
        return Ok(SparseMatrix::zero(field, tgt, 0));
    }
    let src_rad = radices(BiDegree::new(p, q), dims);
    let tgt_rad = radices(BiDegree::new(p, q + 1), dims);
    let n_targets = arg_count(BiDegree::new(p, q + 1), dims, cap)?;
    let w = q + 1;
    let row_off = p * w;
    let unit = |i: usize| unit_sparse(field, i);
    let outer = sign(p % 2 == 1, field);
    Ok(assemble_rows(field, tgt, src, n_targets, |y| {
        let t = decode_args(y, &tgt_rad);
        let a = |i: usize, j: usize| t[i * w + j];
        let r = |j: usize| t[row_off + j];
        let column_elem = |j: usize| {
            let col: Vec<usize> = (0..p).map(|i| a(i, j)).collect();
            ctx.act(&ctx.a_product(&col), r(j))
        };
        let mut block = RowBlock::new(dims.m);
        let columns = |skip: usize| {
            let mut factors: Vec<SparseVec> = Vec::with_capacity(p * q + q);
            for i in 0..p {
                factors.extend((0..w).filter(|&j| j != skip).map(|j| unit(a(i, j))));
            }
            factors.extend((0..w).filter(|&j| j != skip).map(|j| unit(r(j))));
            factors
        };
        // y_0 . f(y_1, .., y_q)
        let mut op = ctx.left_r_op(&column_elem(0));
        if p % 2 == 1 {
            let mut z = DenseMatrix::zero(field, dims.m, dims.m);
            z.add_scaled(&outer, &op);
            op = z;
        }
        block.add_expanded(&Op::Dense(op), &columns(0), &src_rad);
        // merged columns i, i+1
        for i in 0..q {
            let mut factors = Vec::with_capacity(p * q + q);
            for row in 0..p {
                for j in 0..w {
                    if j == i {
                        factors.push(ctx.a_mul(a(row, i), a(row, i + 1)).clone());
                    } else if j != i + 1 {
                        factors.push(unit(a(row, j)));
                    }
                }
            }
            for j in 0..w {
                if j == i {
                    factors.push(ctx.r_mul(r(i), r(i + 1)).clone());
                } else if j != i + 1 {
                    factors.push(unit(r(j)));
                }
            }
            block.add_expanded(&Op::Scalar(&outer * &sign(i % 2 == 0, field)), &factors, &src_rad);
        }
        // f(y_0, .., y_{q-1}) . y_q
        let mut op = DenseMatrix::zero(field, dims.m, dims.m);
        op.add_scaled(&(&outer * &sign(q.is_multiple_of(2), field)), &ctx.right_r_op(&column_elem(q)));
        block.add_expanded(&Op::Dense(op), &columns(q), &src_rad);
        block
    }))
}

/// Counts of exact identities verified on a bigraded complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IdentityChecks {
    pub dd: usize,
    pub delta_delta: usize,
    pub anticommute: usize,
}

/// A truncated bigraded complex: spaces for `p+q <= N+1`, horizontal and
/// vertical matrices out of every space with `p+q <= N`.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub field: FieldSpec,
    pub truncation: usize,
    pub reduced: bool,
    pub spaces: BTreeMap<BiDegree, usize>,
    pub d: BTreeMap<BiDegree, SparseMatrix>,
    pub delta: BTreeMap<BiDegree, SparseMatrix>,
    pub checks: IdentityChecks,
}

fn zero_product(a: &SparseMatrix, b: &SparseMatrix) -> Result<bool> {
    Ok(a.mul(b)?.is_zero())
}

impl BigradedComplex {
    /// Collect matrices from `build(p, q, horizontal)` and verify identities.
    pub(crate) fn build(
        field: FieldSpec,
        truncation: usize,
        reduced: bool,
        space: impl Fn(BiDegree) -> Result<usize> + Sync,
        matrix: impl Fn(BiDegree, bool) -> Result<SparseMatrix> + Sync,
    ) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::BadParams("truncation must be at least 1".into()));
        }
        let mut spaces = BTreeMap::new();
        for n in 0..=truncation + 1 {
            for p in 0..=n {
                let deg = BiDegree::new(p, n - p);
                spaces.insert(deg, space(deg)?);
            }
        }
        let jobs: Vec<(BiDegree, bool)> =
            spaces.keys().filter(|d| d.total() <= truncation).flat_map(|&d| [(d, true), (d, false)]).collect();
        let mats: Vec<Result<SparseMatrix>> = jobs.par_iter().map(|&(d, h)| matrix(d, h)).collect();
        let mut d = BTreeMap::new();
        let mut delta = BTreeMap::new();
        for ((deg, h), m) in jobs.into_iter().zip(mats) {
            let m = m?;
            let target = if h { BiDegree::new(deg.p + 1, deg.q) } else { BiDegree::new(deg.p, deg.q + 1) };
            if m.cols() != spaces[&deg] || m.rows() != spaces[&target] {
                return Err(Error::BicomplexIdentityFailure(format!(
                    "matrix at {deg} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    spaces[&target],
                    spaces[&deg]
                )));
            }
            if h {
                d.insert(deg, m);
            } else {
                delta.insert(deg, m);
            }
        }
        let mut bc =
            BigradedComplex { field, truncation, reduced, spaces, d, delta, checks: IdentityChecks::default() };
        bc.checks = bc.verify()?;
        Ok(bc)
    }

    /// Check `d d = 0`, `delta delta = 0` and `d delta + delta d = 0`
    /// wherever both composites lie within the truncation.
    pub fn verify(&self) -> Result<IdentityChecks> {
        let degs: Vec<BiDegree> =
            self.spaces.keys().filter(|d| d.total() + 2 <= self.truncation + 1).copied().collect();
        let results: Vec<Result<(bool, bool, bool)>> = degs
            .par_iter()
            .map(|&deg| {
                let (p, q) = (deg.p, deg.q);
                let dd = zero_product(&self.d[&BiDegree::new(p + 1, q)], &self.d[&deg])?;
                let vv = zero_product(&self.delta[&BiDegree::new(p, q + 1)], &self.delta[&deg])?;
                let one = self.delta[&BiDegree::new(p + 1, q)].mul(&self.d[&deg])?;
                let two = self.d[&BiDegree::new(p, q + 1)].mul(&self.delta[&deg])?;
                Ok((dd, vv, one.add(&two)?.is_zero()))
            })
            .collect();
        let mut checks = IdentityChecks::default();
        for (deg, r) in degs.iter().zip(results) {
            let (dd, vv, ac) = r?;
            if !dd {
                return Err(Error::BicomplexIdentityFailure(format!("d d != 0 at {deg}")));
            }
            if !vv {
                return Err(Error::BicomplexIdentityFailure(format!("delta delta != 0 at {deg}")));
            }
            if !ac {
                return Err(Error::BicomplexIdentityFailure(format!("d delta + delta d != 0 at {deg}")));
            }
            checks.dd += 1;
            checks.delta_delta += 1;
            checks.anticommute += 1;
        }
        Ok(checks)
    }

    pub fn space(&self, p: usize, q: usize) -> usize {
        self.spaces.get(&BiDegree::new(p, q)).copied().unwrap_or(0)
    }
}

/// Assemble the (reduced) bicomplex of a validated triple.
pub fn assemble(t: &AssocTriple, truncation: usize, reduced: bool, cap: usize) -> Result<BigradedComplex> {
    let ctx = AssocContext::new(t);
    assemble_with(&ctx, truncation, reduced, cap)
}

pub fn assemble_with(ctx: &AssocContext, truncation: usize, reduced: bool, cap: usize) -> Result<BigradedComplex> {
    BigradedComplex::build(
        ctx.field,
        truncation,
        reduced,
        |deg| bidegree_dim(deg, ctx.dims, reduced, cap),
        |deg, h| {
            if h {
                horizontal_d(ctx, deg.p, deg.q, reduced, cap)
            } else {
                vertical_delta(ctx, deg.p, deg.q, reduced, cap)
            }
        },
    )
}

/// One block of a total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub degree: BiDegree,
    pub offset: usize,
    pub dim: usize,
}

/// Total complex `Tot^n = (+)_{p+q=n}` with `D = d + delta`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub field: FieldSpec,
    pub truncation: usize,
    /// Blocks of each degree `0..=N+1`.
    pub blocks: Vec<Vec<Block>>,
    /// `D^n` for `n = 0..=N`.
    pub diffs: Vec<SparseMatrix>,
}

impl TotalComplex {
    pub fn dim(&self, n: usize) -> usize {
        self.blocks.get(n).map_or(0, |b| b.iter().map(|x| x.dim).sum())
    }

    pub fn block(&self, n: usize, deg: BiDegree) -> Option<Block> {
        self.blocks.get(n)?.iter().find(|b| b.degree == deg).copied()
    }

    /// Include a vector of `K^{pq}` into `Tot^{p+q}`.
    pub fn embed(&self, deg: BiDegree, v: &SparseVec) -> SparseVec {
        let b = self.block(deg.total(), deg).expect("degree within truncation");
        v.iter().map(|(i, x)| (i + b.offset, x.clone())).collect()
    }

    /// The `K^{pq}` component of a vector of `Tot^{p+q}`.
    pub fn component(&self, deg: BiDegree, v: &SparseVec) -> SparseVec {
        let b = self.block(deg.total(), deg).expect("degree within truncation");
        v.iter()
            .filter(|(i, _)| *i >= b.offset && *i < b.offset + b.dim)
            .map(|(i, x)| (i - b.offset, x.clone()))
            .collect()
    }
}

/// Assemble `D^n` blockwise and check `D^{n+1} D^n = 0`.
pub fn totalize(bc: &BigradedComplex) -> Result<TotalComplex> {
    let n_max = bc.truncation;
    let blocks: Vec<Vec<Block>> = (0..=n_max + 1)
        .map(|n| {
            let mut off = 0;
            (0..=n)
                .map(|p| {
                    let degree = BiDegree::new(p, n - p);
                    let dim = bc.space(p, n - p);
                    let b = Block { degree, offset: off, dim };
                    off += dim;
                    b
                })
                .collect()
        })
        .collect();
    let dim = |n: usize| blocks[n].iter().map(|b| b.dim).sum::<usize>();
    let find = |n: usize, deg: BiDegree| blocks[n].iter().find(|b| b.degree == deg).copied().expect("block");
    let diffs: Vec<SparseMatrix> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut entries = Vec::new();
            for b in &blocks[n] {
                let (p, q) = (b.degree.p, b.degree.q);
                let th = find(n + 1, BiDegree::new(p + 1, q));
                let tv = find(n + 1, BiDegree::new(p, q + 1));
                entries.extend(bc.d[&b.degree].shifted_entries(th.offset, b.offset));
                entries.extend(bc.delta[&b.degree].shifted_entries(tv.offset, b.offset));
            }
            SparseMatrix::from_triplets(bc.field, dim(n + 1), dim(n), entries).expect("in range")
        })
        .collect();
    for n in 0..n_max {
        if !diffs[n + 1].mul(&diffs[n])?.is_zero() {
            return Err(Error::TotalizationSignFailure(format!("D^{} D^{} != 0", n + 1, n)));
        }
    }
    Ok(TotalComplex { field: bc.field, truncation: n_max, blocks, diffs })
}

/// Check that every vector of `ker(d: K^{0q} -> K^{1q})` is
/// `A^{(x)q}`-equivariant by direct evaluation on basis tuples:
/// `a_1 .. a_q f(r_1, .., r_q) = f(a_1 r_1, .., a_q r_q)`.
pub fn kernel_column_equivariant(ctx: &AssocContext, q: usize, kernel: &[SparseVec]) -> bool {
    let dims = ctx.dims;
    let field = ctx.field;
    let deg = BiDegree::new(0, q);
    let rad_r = radices(deg, dims);
    let n_a = dims.a.pow(q as u32);
    let n_r = dims.r.pow(q as u32);
    let a_rad = vec![dims.a; q];
    kernel.iter().all(|f| {
        let dense = crate::linalg::sparse_to_dense(f, dims.r.pow(q as u32) * dims.m, field);
        let value = |x: usize| -> Vec<Scalar> { dense[x * dims.m..(x + 1) * dims.m].to_vec() };
        (0..n_a).all(|ai| {
            let a = decode_args(ai, &a_rad);
            let op = ctx.left_a_op(&ctx.a_product(&a));
            (0..n_r).all(|ri| {
                let r = decode_args(ri, &rad_r);
                let lhs = op.mul_vec(&value(ri));
                // expand f(a_1 r_1, ..) through the basis
                let mut rhs = vec![field.zero(); dims.m];
                let factors: Vec<SparseVec> = (0..q).map(|j| ctx.act(&unit_sparse(field, a[j]), r[j])).collect();
                let mut stack = vec![(0usize, Vec::<usize>::new(), field.one())];
                while let Some((pos, digits, c)) = stack.pop() {
                    if pos == q {
                        let v = value(encode_args(&digits, &rad_r));
                        for (k, x) in v.iter().enumerate() {
                            rhs[k] = &rhs[k] + &(&c * x);
                        }
                        continue;
                    }
                    for (i, x) in &factors[pos] {
                        let mut d = digits.clone();
                        d.push(*i);
                        stack.push((pos + 1, d, &c * x));
                    }
                }
                lhs == rhs
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::DEFAULT_CAP;
    use crate::presentation::builtins;
    use crate::presentation::random::random_suite;

    fn dual_k_k(f: FieldSpec) -> AssocTriple {
        builtins::bundle("dual_numbers", f, &[]).unwrap().expect_assoc().unwrap()
    }

    #[test]
    fn row_zero_alternates() {
        let f = FieldSpec::Rationals;
        let t = builtins::bundle("k_times_k", f, &[]).unwrap().expect_assoc().unwrap();
        let ctx = AssocContext::new(&t);
        for p in 0..4 {
            let m = horizontal_d(&ctx, p, 0, false, DEFAULT_CAP).unwrap();
            if p % 2 == 0 {
                assert!(m.is_zero());
            } else {
                assert_eq!(m, SparseMatrix::identity(f, 2));
            }
        }
    }

    #[test]
    fn base_field_rows_alternate() {
        let f = FieldSpec::prime(5).unwrap();
        let t = builtins::bundle("trunc_poly", f, &[]).unwrap().expect_assoc().unwrap();
        let ctx = AssocContext::new(&t);
        for q in 1..3 {
            for p in 0..3 {
                let m = horizontal_d(&ctx, p, q, false, DEFAULT_CAP).unwrap();
                if p % 2 == 0 {
                    assert!(m.is_zero(), "p={p} q={q}");
                } else {
                    assert_eq!(m, SparseMatrix::identity(f, m.rows()));
                }
            }
        }
    }

    #[test]
    fn dual_numbers_d01() {
        // (df)(a, 1) = a.f(1) - f(a.1) with e acting by 0 on R = K and M = K:
        // row a = 1 gives 0, row a = e gives e.f(1) - f(e.1) = 0.
        let f = FieldSpec::Rationals;
        let ctx = AssocContext::new(&dual_k_k(f));
        let m = horizontal_d(&ctx, 0, 1, false, DEFAULT_CAP).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert!(m.is_zero());
    }

    #[test]
    fn delta_00_is_commutator() {
        let f = FieldSpec::Rationals;
        let t = builtins::bundle("trunc_poly", f, &[]).unwrap().expect_assoc().unwrap();
        let ctx = AssocContext::new(&t);
        let m = vertical_delta(&ctx, 0, 0, false, DEFAULT_CAP).unwrap();
        // M = R commutative: r m - m r = 0
        assert!(m.is_zero());
        let t = random_suite(f, 1, 5).unwrap().remove(4);
        let ctx = AssocContext::new(&t);
        let m = vertical_delta(&ctx, 0, 0, false, DEFAULT_CAP).unwrap();
        assert!(!m.is_zero());
    }

    #[test]
    fn reduced_row_zero() {
        let f = FieldSpec::Rationals;
        let bc = assemble(&dual_k_k(f), 3, true, DEFAULT_CAP).unwrap();
        assert_eq!(bc.space(0, 0), 1);
        for p in 1..=4 {
            assert_eq!(bc.space(p, 0), 0);
        }
        let full = assemble(&dual_k_k(f), 3, false, DEFAULT_CAP).unwrap();
        for (deg, dim) in &full.spaces {
            if deg.q > 0 || deg.p == 0 {
                assert_eq!(bc.spaces[deg], *dim);
                if deg.total() <= 3 && deg.q > 0 {
                    assert_eq!(bc.d[deg], full.d[deg]);
                    assert_eq!(bc.delta[deg], full.delta[deg]);
                }
            }
        }
    }

    #[test]
    fn identities_on_random_triples() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            for t in random_suite(f, 11, 6).unwrap() {
                for reduced in [false, true] {
                    let bc = assemble(&t, 3, reduced, DEFAULT_CAP).unwrap();
                    assert!(bc.checks.dd > 0);
                    totalize(&bc).unwrap();
                }
            }
        }
    }

    #[test]
    fn deterministic_assembly() {
        let f = FieldSpec::Rationals;
        let t = random_suite(f, 5, 8).unwrap().remove(7);
        let a = assemble(&t, 2, true, DEFAULT_CAP).unwrap();
        let b = assemble(&t, 2, true, DEFAULT_CAP).unwrap();
        assert_eq!(a.d, b.d);
        assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn kernel_column_is_equivariant() {
        let f = FieldSpec::Rationals;
        for t in random_suite(f, 2, 12).unwrap() {
            let ctx = AssocContext::new(&t);
            for q in 0..3 {
                let d = horizontal_d(&ctx, 0, q, false, DEFAULT_CAP).unwrap();
                let (_, ker) = crate::linalg::rank_kernel(&d);
                assert!(kernel_column_equivariant(&ctx, q, &ker));
            }
        }
    }

    #[test]
    fn size_cap() {
        let f = FieldSpec::Rationals;
        let t = random_suite(f, 2, 14).unwrap().remove(13);
        assert!(matches!(assemble(&t, 4, true, 100), Err(Error::SizeCapExceeded { .. })));
    }
}
