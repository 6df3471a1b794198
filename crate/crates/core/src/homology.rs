//! Cohomology of the total complex, the classical Hochschild complexes over
//! `K` and over `A`, and the comparison maps `alpha^n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{assemble_with, horizontal_d, totalize, vertical_delta, AssocContext, TotalComplex};
use crate::cochain::{arg_count, decode_args, encode_args, BiDegree};
use crate::error::{Error, Result};
use crate::linalg::{rank, rank_kernel, span_dim, sparse_combine, DenseMatrix, Echelon, SparseMatrix, SparseVec};
use crate::presentation::{unit_vec, AssocAlgebra, AssocTriple, Bimodule};
use crate::scalar::{FieldSpec, Scalar};

/// One degree of a cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub cochain_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub dim: usize,
    /// Cocycles spanning a complement of the coboundaries, as sparse
    /// `(index, scalar)` lists in cochain coordinates.
    pub representatives: Vec<Vec<(usize, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub title: String,
    pub field: FieldSpec,
    pub truncation: usize,
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.degrees[n].dim
    }

    pub fn representatives(&self, n: usize) -> Result<Vec<SparseVec>> {
        self.degrees[n]
            .representatives
            .iter()
            .map(|v| v.iter().map(|(i, s)| Ok((*i, Scalar::parse(s, self.field)?))).collect())
            .collect()
    }
}

fn render_vec(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(i, x)| (*i, x.to_string())).collect()
}

/// Cohomology at one degree from a kernel basis and generators of the image.
pub fn degree_report(
    field: FieldSpec,
    degree: usize,
    cochain_dim: usize,
    kernel: &[SparseVec],
    image_gens: &[SparseVec],
) -> DegreeReport {
    let mut ech = Echelon::new(field, cochain_dim);
    for v in image_gens {
        ech.insert(v);
    }
    let image_dim = ech.rank();
    let mut reps = Vec::new();
    for v in kernel {
        if ech.insert(v) {
            reps.push(render_vec(v));
        }
    }
    debug_assert_eq!(reps.len() + image_dim, kernel.len());
    DegreeReport { degree, cochain_dim, kernel_dim: kernel.len(), image_dim, dim: reps.len(), representatives: reps }
}

/// Cohomology of a cochain complex given by `dims[0..]` and differentials
/// `diffs[n]: C^n -> C^{n+1}`, for degrees `0..degrees`.
pub fn complex_cohomology(
    title: &str,
    field: FieldSpec,
    truncation: usize,
    dims: &[usize],
    diffs: &[SparseMatrix],
    degrees: usize,
) -> CohomologyReport {
    let kernels: Vec<Vec<SparseVec>> = (0..degrees).into_par_iter().map(|n| rank_kernel(&diffs[n]).1).collect();
    let degrees = (0..degrees)
        .into_par_iter()
        .map(|n| {
            let image = if n == 0 { Vec::new() } else { diffs[n - 1].columns() };
            degree_report(field, n, dims[n], &kernels[n], &image)
        })
        .collect();
    CohomologyReport { title: title.to_string(), field, truncation, degrees }
}

/// `H^n` of the total complex for `n = 0..N-1`.
pub fn cohomology(tc: &TotalComplex) -> CohomologyReport {
    let dims: Vec<usize> = (0..=tc.truncation + 1).map(|n| tc.dim(n)).collect();
    complex_cohomology("H^n(A,R,M)", tc.field, tc.truncation, &dims, &tc.diffs, tc.truncation)
}

/// Reduced total complex of a triple.
pub fn total_complex(t: &AssocTriple, truncation: usize, cap: usize) -> Result<TotalComplex> {
    let ctx = AssocContext::new(t);
    totalize(&assemble_with(&ctx, truncation, true, cap)?)
}

/// Matrices of the classical Hochschild coboundary
/// `C^n(R,M) -> C^{n+1}(R,M)` for `n < count`, built column by column
/// from the defining formula.
pub fn hochschild_matrices(r: &AssocAlgebra, m: &Bimodule, count: usize, cap: usize) -> Result<Vec<SparseMatrix>> {
    let field = r.field;
    let (nr, nm) = (r.dim(), m.dim());
    let dims = crate::cochain::Dims::new(1, nr, nm);
    (0..count)
        .map(|n| {
            let src_args = arg_count(BiDegree::new(0, n), dims, cap)?;
            let tgt_args = arg_count(BiDegree::new(0, n + 1), dims, cap)?;
            let src_rad = vec![nr; n];
            let tgt_rad = vec![nr; n + 1];
            let mut entries = Vec::new();
            for y in 0..tgt_args {
                let ys = decode_args(y, &tgt_rad);
                let mut acc: Vec<(usize, DenseMatrix)> = Vec::new();
                let mut push = |x: usize, op: DenseMatrix| acc.push((x, op));
                // r_0 f(r_1..r_n)
                push(encode_args(&ys[1..], &src_rad), m.left_operator(&unit_vec(field, nr, ys[0])));
                for i in 0..n {
                    let prod = r.mult.slice(ys[i], ys[i + 1]);
                    for (k, c) in prod.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut xs: Vec<usize> = ys[..i].to_vec();
                        xs.push(k);
                        xs.extend_from_slice(&ys[i + 2..]);
                        let mut op = DenseMatrix::zero(field, nm, nm);
                        let s = if i % 2 == 0 { -c } else { c.clone() };
                        op.add_scaled(&s, &DenseMatrix::identity(field, nm));
                        push(encode_args(&xs, &src_rad), op);
                    }
                }
                let mut op = DenseMatrix::zero(field, nm, nm);
                let s = if n % 2 == 0 { field.from_i64(-1) } else { field.one() };
                op.add_scaled(&s, &m.right_operator(&unit_vec(field, nr, ys[n])));
                push(encode_args(&ys[..n], &src_rad), op);
                for (x, op) in acc {
                    for mo in 0..nm {
                        for mi in 0..nm {
                            let v = op.get(mo, mi);
                            if !v.is_zero() {
                                entries.push((y * nm + mo, x * nm + mi, v.clone()));
                            }
                        }
                    }
                }
            }
            SparseMatrix::from_triplets(field, tgt_args * nm, src_args * nm, entries)
        })
        .collect()
}

/// Classical Hochschild cohomology `HH^n(R,M)` over the ground field for
/// `n = 0..N-1`, independent of the bicomplex.
pub fn hochschild_over_k(r: &AssocAlgebra, m: &Bimodule, truncation: usize, cap: usize) -> Result<CohomologyReport> {
    let diffs = hochschild_matrices(r, m, truncation, cap)?;
    let mut dims: Vec<usize> = diffs.iter().map(|d| d.cols()).collect();
    dims.push(diffs.last().map_or(m.dim(), |d| d.rows()));
    Ok(complex_cohomology("HH^n_K(R,M)", r.field, truncation, &dims, &diffs, truncation))
}

/// `C^*_A(R,M)` realised as `ker(d: K^{0q} -> K^{1q})` with the induced
/// vertical differential.
#[derive(Clone, Debug)]
pub struct KernelColumn {
    pub field: FieldSpec,
    /// Basis of `C^q_A` inside `K^{0q}`, for `q = 0..=N`.
    pub bases: Vec<Vec<SparseVec>>,
    /// `delta` restricted to `C^q_A`, as columns in `K^{0,q+1}`.
    pub images: Vec<Vec<SparseVec>>,
    pub ambient: Vec<usize>,
}

impl KernelColumn {
    pub fn new(ctx: &AssocContext, truncation: usize, cap: usize) -> Result<Self> {
        let mats = (0..=truncation)
            .into_par_iter()
            .map(|q| Ok((horizontal_d(ctx, 0, q, false, cap)?, vertical_delta(ctx, 0, q, false, cap)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_matrices(ctx.field, &mats))
    }

    /// Kernel column from `(d, delta)` out of `K^{0q}`, `q = 0..=N`.
    pub fn from_matrices(field: FieldSpec, mats: &[(SparseMatrix, SparseMatrix)]) -> Self {
        let rows: Vec<(Vec<SparseVec>, Vec<SparseVec>, usize)> = mats
            .par_iter()
            .map(|(d, delta)| {
                let basis = rank_kernel(d).1;
                let images = basis.iter().map(|b| delta.apply(b)).collect();
                (basis, images, d.cols())
            })
            .collect();
        let mut bases = Vec::new();
        let mut images = Vec::new();
        let mut ambient = Vec::new();
        for (b, i, a) in rows {
            bases.push(b);
            images.push(i);
            ambient.push(a);
        }
        KernelColumn { field, bases, images, ambient }
    }

    /// Cocycles of `C^q_A` in `K^{0q}` coordinates.
    pub fn cocycles(&self, q: usize) -> Vec<SparseVec> {
        let mat = SparseMatrix::from_columns(self.field, self.ambient[q + 1], &self.images[q]).expect("in range");
        let one = self.field.one();
        rank_kernel(&mat)
            .1
            .into_iter()
            .map(|c| c.iter().fold(Vec::new(), |acc, (i, x)| sparse_combine(&one, &acc, x, &self.bases[q][*i])))
            .collect()
    }

    pub fn report(&self, truncation: usize) -> CohomologyReport {
        let degrees = (0..truncation)
            .into_par_iter()
            .map(|q| {
                let image = if q == 0 { Vec::new() } else { self.images[q - 1].clone() };
                let mut r = degree_report(self.field, q, self.ambient[q], &self.cocycles(q), &image);
                r.cochain_dim = self.bases[q].len();
                r
            })
            .collect();
        CohomologyReport { title: "H^n_A(R,M)".into(), field: self.field, truncation, degrees }
    }
}

/// `R^{(x)_A k}` as a quotient of `R^{(x)k}`.
#[derive(Clone, Debug)]
pub struct TensorOverA {
    pub k: usize,
    pub dim: usize,
    /// `dim x (dim R)^k` matrix of the quotient map.
    pub projection: SparseMatrix,
    /// Basis tuples of `R^{(x)k}` whose images form the quotient basis.
    pub basis: Vec<usize>,
}

/// Quotient of `field^ambient` by the span of `relations`: its dimension,
/// the projection and the lifted basis.
fn quotient(field: FieldSpec, ambient: usize, relations: &[SparseVec]) -> (usize, SparseMatrix, Vec<usize>) {
    let rows: Vec<Vec<Scalar>> = relations.iter().map(|v| crate::linalg::sparse_to_dense(v, ambient, field)).collect();
    let (rref, pivots) = if rows.is_empty() {
        (DenseMatrix::zero(field, 0, ambient), Vec::new())
    } else {
        DenseMatrix::from_rows(field, rows).expect("equal lengths").rref()
    };
    let free: Vec<usize> = (0..ambient).filter(|j| !pivots.contains(j)).collect();
    let pos = |j: usize| free.binary_search(&j).ok();
    let mut entries = Vec::new();
    for j in 0..ambient {
        if let Some(k) = pos(j) {
            entries.push((k, j, field.one()));
        } else {
            let row = pivots.iter().position(|&c| c == j).expect("pivot");
            for (k, &l) in free.iter().enumerate() {
                let v = rref.get(row, l);
                if !v.is_zero() {
                    entries.push((k, j, -v));
                }
            }
        }
    }
    let proj = SparseMatrix::from_triplets(field, free.len(), ambient, entries).expect("in range");
    (free.len(), proj, free)
}

pub fn tensor_over_a(r: &AssocAlgebra, k: usize, cap: usize) -> Result<TensorOverA> {
    if k == 0 {
        return Err(Error::BadParams("tensor_over_A needs k >= 1".into()));
    }
    let field = r.field;
    let nr = r.dim();
    let na = r.a_action.dims()[0];
    let dims = crate::cochain::Dims::new(1, nr, 1);
    let n = arg_count(BiDegree::new(0, k), dims, cap)?;
    let rad = vec![nr; k];
    let mut relations = Vec::new();
    for x in 0..n {
        let xs = decode_args(x, &rad);
        for i in 0..k.saturating_sub(1) {
            for a in 0..na {
                let mut v = Vec::new();
                for (s, sign) in [(i, field.one()), (i + 1, field.from_i64(-1))] {
                    for (j, c) in r.a_action.slice(a, xs[s]).iter().enumerate() {
                        if !c.is_zero() {
                            let mut ys = xs.clone();
                            ys[s] = j;
                            v.push((encode_args(&ys, &rad), &sign * c));
                        }
                    }
                }
                let v = crate::linalg::canonicalize_vec(v);
                if !v.is_empty() {
                    relations.push(v);
                }
            }
        }
    }
    let (dim, projection, basis) = quotient(field, n, &relations);
    Ok(TensorOverA { k, dim, projection, basis })
}

/// `dim Hom_A(R^{(x)_A k}, M)`; `A` acts on the tensor power through the
/// first factor and on `M` through `a.1_R`.
pub fn hom_a_dim(t: &AssocTriple, k: usize, cap: usize) -> Result<usize> {
    let field = t.field();
    let (na, nr, nm) = t.dims();
    if k == 0 {
        return Ok(nm);
    }
    let tens = tensor_over_a(&t.r, k, cap)?;
    let d = tens.dim;
    let rad = vec![nr; k];
    // unknown F(t_s)_m at index s * nm + m
    let mut entries = Vec::new();
    let mut row = 0;
    for a in 0..na {
        let phi = t.r.structure_map(&unit_vec(field, na, a));
        let la = t.m.left_operator(&phi);
        for (s, &lift) in tens.basis.iter().enumerate() {
            let xs = decode_args(lift, &rad);
            // a . t_s in quotient coordinates
            let mut image: SparseVec = Vec::new();
            for (j, c) in t.r.a_action.slice(a, xs[0]).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut ys = xs.clone();
                ys[0] = j;
                let col = tens.projection.apply(&vec![(encode_args(&ys, &rad), field.one())]);
                image = sparse_combine(&field.one(), &image, c, &col);
            }
            for mo in 0..nm {
                for (u, c) in &image {
                    entries.push((row + mo, u * nm + mo, c.clone()));
                }
                for mi in 0..nm {
                    let v = la.get(mo, mi);
                    if !v.is_zero() {
                        entries.push((row + mo, s * nm + mi, -v));
                    }
                }
            }
            row += nm;
        }
    }
    let mat = SparseMatrix::from_triplets(field, row, d * nm, entries)?;
    Ok(d * nm - rank(&mat))
}

/// Hochschild cohomology over `A` from the kernel column, cross-checked
/// against `Hom_A(R^{(x)_A n}, M)` built from explicit tensor quotients.
pub fn hochschild_over_a(t: &AssocTriple, truncation: usize, cap: usize) -> Result<CohomologyReport> {
    let ctx = AssocContext::new(t);
    let kc = KernelColumn::new(&ctx, truncation, cap)?;
    for q in 0..=truncation {
        let via_tensor = hom_a_dim(t, q, cap)?;
        if via_tensor != kc.bases[q].len() {
            return Err(Error::InconsistentWithMatrixKernel(format!(
                "C^{q}_A: kernel column has dimension {}, Hom_A(R^(x)_A {q}, M) has {via_tensor}",
                kc.bases[q].len()
            )));
        }
    }
    Ok(kc.report(truncation))
}

/// Verdict for `alpha^n: H^n_A(R,M) -> H^n(A,R,M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub degree: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub mono: bool,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub field: FieldSpec,
    pub truncation: usize,
    pub entries: Vec<AlphaEntry>,
}

impl ComparisonVerdict {
    pub fn all_iso(&self) -> bool {
        self.entries.iter().all(|e| e.iso)
    }
}

/// Everything needed to evaluate `alpha^n`.
pub struct Comparison {
    pub total: TotalComplex,
    pub derived: CohomologyReport,
    pub column: KernelColumn,
    pub hochschild: CohomologyReport,
}

impl Comparison {
    pub fn new(t: &AssocTriple, truncation: usize, cap: usize) -> Result<Self> {
        let ctx = AssocContext::new(t);
        let total = totalize(&assemble_with(&ctx, truncation, true, cap)?)?;
        let column = KernelColumn::new(&ctx, truncation, cap)?;
        Ok(Self::from_parts(total, column))
    }

    pub fn from_parts(total: TotalComplex, column: KernelColumn) -> Self {
        let derived = cohomology(&total);
        let hochschild = column.report(total.truncation);
        Comparison { total, derived, column, hochschild }
    }

    /// Rank of the map induced on cohomology by the inclusion of the
    /// kernel column into total degree `n`.
    pub fn alpha(&self, n: usize) -> Result<AlphaEntry> {
        let truncation = self.total.truncation;
        if n + 1 > truncation {
            return Err(Error::TruncationTooSmall { degree: n, truncation });
        }
        let field = self.total.field;
        let ambient = self.total.dim(n);
        let boundaries = if n == 0 { Vec::new() } else { self.total.diffs[n - 1].columns() };
        let b_rank = span_dim(field, ambient, &boundaries);
        let mut gens: Vec<SparseVec> =
            self.column.cocycles(n).iter().map(|z| self.total.embed(BiDegree::new(0, n), z)).collect();
        for z in &gens {
            if !self.total.diffs[n].apply(z).is_empty() {
                return Err(Error::BicomplexIdentityFailure(format!("embedded C^{n}_A cocycle is not a D-cocycle")));
            }
        }
        gens.extend(boundaries);
        let rank = span_dim(field, ambient, &gens) - b_rank;
        let source_dim = self.hochschild.dim(n);
        let target_dim = self.derived.dim(n);
        let mono = rank == source_dim;
        Ok(AlphaEntry { degree: n, source_dim, target_dim, rank, mono, iso: mono && rank == target_dim })
    }

    pub fn verdict(&self) -> Result<ComparisonVerdict> {
        let entries = (0..self.total.truncation).map(|n| self.alpha(n)).collect::<Result<Vec<_>>>()?;
        Ok(ComparisonVerdict { field: self.total.field, truncation: self.total.truncation, entries })
    }
}

pub fn alpha(t: &AssocTriple, n: usize, truncation: usize, cap: usize) -> Result<AlphaEntry> {
    if n + 1 > truncation {
        return Err(Error::TruncationTooSmall { degree: n, truncation });
    }
    Comparison::new(t, truncation, cap)?.alpha(n)
}

/// `A`-linear derivations `R -> M` as the kernel of the linear system
/// `D(rs) = r D(s) + D(r) s`, `D(a.r) = a.D(r)`. Basis vectors list
/// `D(r_j)_k` at index `j * dim M + k`.
pub fn derivations(t: &AssocTriple) -> (usize, Vec<SparseVec>) {
    let field = t.field();
    let (na, nr, nm) = t.dims();
    let mut entries = Vec::new();
    let mut row = 0;
    let var = |j: usize, k: usize| j * nm + k;
    for i in 0..nr {
        for j in 0..nr {
            let li = t.m.left_operator(&unit_vec(field, nr, i));
            let rj = t.m.right_operator(&unit_vec(field, nr, j));
            for mo in 0..nm {
                for (s, c) in t.r.mult.slice(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((row + mo, var(s, mo), c.clone()));
                    }
                }
                for mi in 0..nm {
                    let a = li.get(mo, mi);
                    if !a.is_zero() {
                        entries.push((row + mo, var(j, mi), -a));
                    }
                    let b = rj.get(mo, mi);
                    if !b.is_zero() {
                        entries.push((row + mo, var(i, mi), -b));
                    }
                }
            }
            row += nm;
        }
    }
    for a in 0..na {
        let la = t.m.left_operator(&t.r.structure_map(&unit_vec(field, na, a)));
        for j in 0..nr {
            for mo in 0..nm {
                for (s, c) in t.r.a_action.slice(a, j).iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((row + mo, var(s, mo), c.clone()));
                    }
                }
                for mi in 0..nm {
                    let v = la.get(mo, mi);
                    if !v.is_zero() {
                        entries.push((row + mo, var(j, mi), -v));
                    }
                }
            }
            row += nm;
        }
    }
    let mat = SparseMatrix::from_triplets(field, row, nr * nm, entries).expect("in range");
    let (_, ker) = rank_kernel(&mat);
    (ker.len(), ker)
}

/// Dense coordinates of a derivation basis vector as a map `R -> M`.
pub fn derivation_matrix(t: &AssocTriple, v: &SparseVec) -> DenseMatrix {
    let field = t.field();
    let (_, nr, nm) = t.dims();
    let dense = crate::linalg::sparse_to_dense(v, nr * nm, field);
    DenseMatrix::from_fn(field, nm, nr, |k, j| dense[j * nm + k].clone())
}
