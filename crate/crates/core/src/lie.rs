//! The bicomplex `K^{pq}(A,L,M) = Hom(Lambda^q(A^{(x)p} (x) L), M)`.
//!
//! Column `p` is the Chevalley-Eilenberg complex of the Lie algebra
//! `g_p = A^{(x)p} (x) L` with `[u (x) x, v (x) y] = uv (x) [x, y]`
//! (componentwise product in `A^{(x)p}`) acting on `M` by
//! `(u (x) x) m = (mu(u) x) m`. A basis element of `g_p` is `(u, x)` with
//! flat index `enc(u) * dim L + x`.
//!
//! The horizontal `d` is the associative one on
//! `Hom(A^{(x)pq} (x) L^{(x)q}, M)` restricted to alternating maps. Vertical
//! `delta` is `(-1)^p` times the CE coboundary, so `D = d + delta`. Like the
//! associative pipeline the complex is reduced: `(p, 0)` is zero for `p > 0`.

use rayon::prelude::*;

use crate::bicomplex::{horizontal_d, totalize, AssocContext, BigradedComplex, TotalComplex};
use crate::cochain::{
    decode_args, encode_args, lie_space_dim, radices, sort_with_sign, space_dim, BiDegree, Dims, ExteriorBasis,
};
use crate::error::{Error, Result};
use crate::homology::{complex_cohomology, CohomologyReport, Comparison, ComparisonVerdict, KernelColumn};
use crate::linalg::{canonicalize_vec, dense_to_sparse, DenseMatrix, SparseMatrix, SparseVec};
use crate::presentation::{unit_vec, LieTriple};
use crate::scalar::{FieldSpec, Scalar};

/// Structure constants of `g_p` and its action on `M`.
#[derive(Clone, Debug)]
pub struct LieColumn {
    pub p: usize,
    pub dim: usize,
    /// `bracket[i][j]` over the basis of `g_p`.
    pub bracket: Vec<Vec<SparseVec>>,
    /// Action of each basis element of `g_p` on `M`.
    pub rho: Vec<DenseMatrix>,
}

/// A Lie triple prepared for assembly.
pub struct LieContext {
    pub triple: LieTriple,
    pub field: FieldSpec,
    pub dims: Dims,
    pub assoc: AssocContext,
    l_bracket: Vec<Vec<SparseVec>>,
    l_rho: Vec<DenseMatrix>,
}

fn tensor_expand(field: FieldSpec, factors: &[SparseVec], radix: usize) -> SparseVec {
    let mut acc: SparseVec = vec![(0, field.one())];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for (x, c) in &acc {
            for (i, d) in f {
                next.push((x * radix + i, c * d));
            }
        }
        acc = next;
    }
    canonicalize_vec(acc)
}

impl LieContext {
    pub fn new(t: &LieTriple) -> Self {
        let field = t.field();
        let (na, nl, nm) = t.dims();
        let l_bracket = (0..nl).map(|i| (0..nl).map(|j| dense_to_sparse(t.l.bracket.slice(i, j))).collect()).collect();
        let l_rho = (0..nl).map(|i| t.m.action.left_operator(&unit_vec(field, nl, i))).collect();
        LieContext {
            triple: t.clone(),
            field,
            dims: Dims::new(na, nl, nm),
            assoc: AssocContext::for_lie(t),
            l_bracket,
            l_rho,
        }
    }

    /// `dim g_p`.
    pub fn column_dim(&self, p: usize, cap: usize) -> Result<usize> {
        lie_space_dim(p, 1, Dims::new(self.dims.a, self.dims.r, 1), cap)
    }

    /// Materialize `g_p` on the product basis.
    pub fn column(&self, p: usize, cap: usize) -> Result<LieColumn> {
        let field = self.field;
        let Dims { a: na, r: nl, m: nm } = self.dims;
        let dim = self.column_dim(p, cap)?;
        let a_rad = vec![na; p];
        let split = |k: usize| (decode_args(k / nl, &a_rad), k % nl);
        let bracket = (0..dim)
            .into_par_iter()
            .map(|i| {
                let (u, x) = split(i);
                (0..dim)
                    .map(|j| {
                        let (v, y) = split(j);
                        let br = &self.l_bracket[x][y];
                        if br.is_empty() {
                            return Vec::new();
                        }
                        let factors: Vec<SparseVec> = (0..p).map(|k| self.assoc.a_mul(u[k], v[k]).clone()).collect();
                        let head = tensor_expand(field, &factors, na);
                        let mut out = Vec::new();
                        for (h, c) in &head {
                            for (z, d) in br {
                                out.push((h * nl + z, c * d));
                            }
                        }
                        canonicalize_vec(out)
                    })
                    .collect()
            })
            .collect();
        let rho = (0..dim)
            .map(|k| {
                let (u, x) = split(k);
                let ux = self.assoc.act(&self.assoc.a_product(&u), x);
                let mut op = DenseMatrix::zero(field, nm, nm);
                for (z, c) in &ux {
                    op.add_scaled(c, &self.l_rho[*z]);
                }
                op
            })
            .collect();
        Ok(LieColumn { p, dim, bracket, rho })
    }

    pub fn space(&self, deg: BiDegree, cap: usize) -> Result<usize> {
        if deg.q == 0 && deg.p > 0 {
            return Ok(0);
        }
        lie_space_dim(deg.p, deg.q, self.dims, cap)
    }
}

/// CE coboundary `C^q(g, M) -> C^{q+1}(g, M)` on exterior bases:
/// `(df)(y_0..y_q) = sum (-1)^i y_i f(..^i..) + sum_{i<j} (-1)^{i+j} f([y_i,y_j], ..^i..^j..)`.
pub fn ce_differential(field: FieldSpec, col: &LieColumn, nm: usize, q: usize) -> SparseMatrix {
    let src = ExteriorBasis::new(col.dim, q);
    let tgt = ExteriorBasis::new(col.dim, q + 1);
    let rows = tgt.len() * nm;
    let cols = src.len() * nm;
    let sign = |neg: bool| if neg { field.from_i64(-1) } else { field.one() };
    let parts: Vec<Vec<(usize, usize, Scalar)>> = (0..tgt.len())
        .into_par_iter()
        .map(|ti| {
            let s = tgt.unrank(ti);
            let mut out = Vec::new();
            for i in 0..=q {
                let rest: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                let c = src.rank(&rest);
                let sg = sign(i % 2 == 1);
                let op = &col.rho[s[i]];
                for mo in 0..nm {
                    for mi in 0..nm {
                        let v = op.get(mo, mi);
                        if !v.is_zero() {
                            out.push((ti * nm + mo, c * nm + mi, &sg * v));
                        }
                    }
                }
            }
            for i in 0..=q {
                for j in i + 1..=q {
                    let rest: Vec<usize> =
                        s.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).collect();
                    for (z, b) in &col.bracket[s[i]][s[j]] {
                        let mut t = vec![*z];
                        t.extend(rest.iter().copied());
                        let Some(neg) = sort_with_sign(&mut t) else { continue };
                        let c = src.rank(&t);
                        let v = &sign(neg ^ ((i + j) % 2 == 1)) * b;
                        for m in 0..nm {
                            out.push((ti * nm + m, c * nm + m, v.clone()));
                        }
                    }
                }
            }
            out
        })
        .collect();
    SparseMatrix::from_triplets(field, rows, cols, parts.into_iter().flatten().collect()).expect("in range")
}

/// CE matrices of column `p` for `q = 0..=N`.
pub fn lie_column(ctx: &LieContext, p: usize, truncation: usize, cap: usize) -> Result<Vec<SparseMatrix>> {
    let col = ctx.column(p, cap)?;
    (0..=truncation)
        .map(|q| {
            lie_space_dim(p, q + 1, ctx.dims, cap)?;
            Ok(ce_differential(ctx.field, &col, ctx.dims.m, q))
        })
        .collect()
}

/// Basis index of `g_p` for column `j` of a flat multilinear argument.
fn column_index(args: &[usize], p: usize, q: usize, j: usize, na: usize, nl: usize) -> usize {
    let u: Vec<usize> = (0..p).map(|i| args[i * q + j]).collect();
    encode_args(&u, &vec![na; p]) * nl + args[p * q + j]
}

/// Alternation embedding `Hom(Lambda^q g_p, M) -> Hom(A^{(x)pq} (x) L^{(x)q}, M)`.
pub fn alternation_embedding(ctx: &LieContext, p: usize, q: usize, cap: usize) -> Result<SparseMatrix> {
    let field = ctx.field;
    let Dims { a: na, r: nl, m: nm } = ctx.dims;
    let deg = BiDegree::new(p, q);
    let rows = space_dim(deg, ctx.dims, cap)?;
    let gdim = ctx.column_dim(p, cap)?;
    let ext = ExteriorBasis::new(gdim, q);
    let rad = radices(deg, ctx.dims);
    let a_rad = vec![na; p];
    let perms = permutations(q);
    let mut entries = Vec::new();
    for c in 0..ext.len() {
        let t = ext.unrank(c);
        for (perm, neg) in &perms {
            let mut args = vec![0; p * q + q];
            for j in 0..q {
                let k = t[perm[j]];
                let u = decode_args(k / nl, &a_rad);
                for i in 0..p {
                    args[i * q + j] = u[i];
                }
                args[p * q + j] = k % nl;
            }
            let x = encode_args(&args, &rad);
            let v = if *neg { field.from_i64(-1) } else { field.one() };
            for m in 0..nm {
                entries.push((x * nm + m, c * nm + m, v.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(field, rows, ext.len() * nm, entries)
}

fn permutations(q: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..q).collect();
    heap(q, &mut cur, &mut out);
    out.into_iter()
        .map(|p| {
            let mut s = p.clone();
            let neg = sort_with_sign(&mut s).expect("distinct");
            (p, neg)
        })
        .collect()
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap(k - 1, cur, out);
}

/// `d: K^{pq} -> K^{p+1,q}` through the alternation embedding. Fails with
/// `ImageNotAlternating` if some image leaves the alternating subspace.
pub fn lie_horizontal_d(ctx: &LieContext, p: usize, q: usize, cap: usize) -> Result<SparseMatrix> {
    if q == 0 {
        return horizontal_d(&ctx.assoc, p, 0, true, cap);
    }
    let Dims { a: na, r: nl, m: nm } = ctx.dims;
    let embed = alternation_embedding(ctx, p, q, cap)?;
    let embed_next = alternation_embedding(ctx, p + 1, q, cap)?;
    let d = horizontal_d(&ctx.assoc, p, q, false, cap)?;
    let image = d.mul(&embed)?;
    let tgt_ext = ExteriorBasis::new(ctx.column_dim(p + 1, cap)?, q);
    let rad = radices(BiDegree::new(p + 1, q), ctx.dims);
    let columns = image.columns();
    let restricted: Vec<Result<SparseVec>> = columns
        .par_iter()
        .enumerate()
        .map(|(c, col)| {
            let mut out = Vec::new();
            for (row, v) in col {
                let args = decode_args(row / nm, &rad);
                let t: Vec<usize> = (0..q).map(|j| column_index(&args, p + 1, q, j, na, nl)).collect();
                if t.windows(2).all(|w| w[0] < w[1]) {
                    out.push((tgt_ext.rank(&t) * nm + row % nm, v.clone()));
                }
            }
            let out = canonicalize_vec(out);
            if embed_next.apply(&out) != *col {
                return Err(Error::ImageNotAlternating(format!("d at ({p},{q}), source column {c}")));
            }
            Ok(out)
        })
        .collect();
    let restricted = restricted.into_iter().collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_columns(ctx.field, tgt_ext.len() * nm, &restricted)
}

/// `(-1)^p` times the CE coboundary out of `K^{pq}`.
pub fn lie_vertical_delta(ctx: &LieContext, col: &LieColumn, q: usize, cap: usize) -> Result<SparseMatrix> {
    let p = col.p;
    let tgt = ctx.space(BiDegree::new(p, q + 1), cap)?;
    let src = ctx.space(BiDegree::new(p, q), cap)?;
    if src == 0 {
        return Ok(SparseMatrix::zero(ctx.field, tgt, 0));
    }
    let m = ce_differential(ctx.field, col, ctx.dims.m, q);
    Ok(if p % 2 == 1 { m.scaled(&ctx.field.from_i64(-1)) } else { m })
}

/// The reduced Lie bicomplex with identities verified.
pub fn lie_bicomplex(ctx: &LieContext, truncation: usize, cap: usize) -> Result<BigradedComplex> {
    let columns = (0..=truncation).map(|p| ctx.column(p, cap)).collect::<Result<Vec<_>>>()?;
    BigradedComplex::build(
        ctx.field,
        truncation,
        true,
        |deg| ctx.space(deg, cap),
        |deg, h| {
            if h {
                lie_horizontal_d(ctx, deg.p, deg.q, cap)
            } else {
                lie_vertical_delta(ctx, &columns[deg.p], deg.q, cap)
            }
        },
    )
}

pub fn lie_total_complex(t: &LieTriple, truncation: usize, cap: usize) -> Result<TotalComplex> {
    totalize(&lie_bicomplex(&LieContext::new(t), truncation, cap)?)
}

/// `H^n(A,L,M)` for `n = 0..N-1`.
pub fn lie_cohomology(t: &LieTriple, truncation: usize, cap: usize) -> Result<CohomologyReport> {
    let tc = lie_total_complex(t, truncation, cap)?;
    let dims: Vec<usize> = (0..=truncation + 1).map(|n| tc.dim(n)).collect();
    Ok(complex_cohomology("H^n(A,L,M)", tc.field, truncation, &dims, &tc.diffs, truncation))
}

/// CE cohomology of `L` over `K`, i.e. column `p = 0` alone.
pub fn ce_cohomology(t: &LieTriple, truncation: usize, cap: usize) -> Result<CohomologyReport> {
    let ctx = LieContext::new(t);
    let mats = lie_column(&ctx, 0, truncation, cap)?;
    let dims: Vec<usize> = (0..=truncation + 1).map(|q| lie_space_dim(0, q, ctx.dims, cap)).collect::<Result<_>>()?;
    Ok(complex_cohomology("H^n(L,M)", ctx.field, truncation, &dims, &mats, truncation))
}

/// Total complex, cohomology and the kernel column `C^*_A(L,M)`.
pub fn lie_comparison(t: &LieTriple, truncation: usize, cap: usize) -> Result<Comparison> {
    let ctx = LieContext::new(t);
    let total = totalize(&lie_bicomplex(&ctx, truncation, cap)?)?;
    let col0 = ctx.column(0, cap)?;
    let mats = (0..=truncation)
        .map(|q| {
            let d = lie_horizontal_d(&ctx, 0, q, cap)?;
            let delta = lie_vertical_delta(&ctx, &col0, q, cap)?;
            Ok((d, delta))
        })
        .collect::<Result<Vec<_>>>()?;
    let column = KernelColumn::from_matrices(ctx.field, &mats);
    let mut cmp = Comparison::from_parts(total, column);
    cmp.derived.title = "H^n(A,L,M)".into();
    cmp.hochschild.title = "H^n_A(L,M)".into();
    Ok(cmp)
}

/// `alpha^n: H^n_A(L,M) -> H^n(A,L,M)` for `n = 0..N-1`.
pub fn lie_alpha(t: &LieTriple, truncation: usize, cap: usize) -> Result<ComparisonVerdict> {
    lie_comparison(t, truncation, cap)?.verdict()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::DEFAULT_CAP;
    use crate::presentation::builtins::bundle;

    fn triple(name: &str, field: FieldSpec) -> LieTriple {
        bundle(name, field, &[]).unwrap().expect_lie().unwrap()
    }

    #[test]
    fn sl2_trivial_coefficients() {
        let t = triple("sl2", FieldSpec::Rationals);
        let ce = ce_cohomology(&t, 4, DEFAULT_CAP).unwrap();
        assert_eq!(ce.dims(), vec![1, 0, 0, 1]);
        assert_eq!(lie_cohomology(&t, 4, DEFAULT_CAP).unwrap().dims(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn ce_squares_to_zero() {
        for name in ["sl2", "abelian_lie", "projective_lie", "dual_lie"] {
            let ctx = LieContext::new(&triple(name, FieldSpec::prime(5).unwrap()));
            for p in 0..3 {
                let mats = lie_column(&ctx, p, 3, DEFAULT_CAP).unwrap();
                for q in 0..3 {
                    assert!(mats[q + 1].mul(&mats[q]).unwrap().is_zero(), "{name} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn abelian_trivial_differential_vanishes() {
        let t = bundle("abelian_lie", FieldSpec::Rationals, &[2]).unwrap().expect_lie().unwrap();
        let ctx = LieContext::new(&t);
        for m in lie_column(&ctx, 0, 3, DEFAULT_CAP).unwrap() {
            assert!(m.is_zero());
        }
    }

    #[test]
    fn projective_comparison_is_iso() {
        let t = triple("projective_lie", FieldSpec::Rationals);
        let v = lie_alpha(&t, 4, DEFAULT_CAP).unwrap();
        assert!(v.all_iso(), "{v:?}");
    }

    #[test]
    fn base_field_reduces_to_ce() {
        for name in ["sl2", "abelian_lie"] {
            let t = triple(name, FieldSpec::prime(5).unwrap());
            assert_eq!(
                lie_cohomology(&t, 4, DEFAULT_CAP).unwrap().dims(),
                ce_cohomology(&t, 4, DEFAULT_CAP).unwrap().dims()
            );
        }
    }

    #[test]
    fn alternation_embedding_injective() {
        let ctx = LieContext::new(&triple("projective_lie", FieldSpec::Rationals));
        for (p, q) in [(0, 1), (1, 2), (2, 2)] {
            let e = alternation_embedding(&ctx, p, q, DEFAULT_CAP).unwrap();
            assert_eq!(crate::linalg::rank(&e), e.cols());
        }
    }

    #[test]
    fn closure_on_random_inputs() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(5).unwrap()] {
            for t in crate::presentation::random::random_lie_suite(f, 10, 10).unwrap() {
                let ctx = LieContext::new(&t);
                let bc = lie_bicomplex(&ctx, 3, DEFAULT_CAP).unwrap();
                assert!(bc.checks.anticommute > 0);
                let cmp = lie_comparison(&t, 3, DEFAULT_CAP).unwrap();
                assert!(cmp.alpha(0).unwrap().iso);
            }
        }
    }

    #[test]
    fn dual_numbers_regression() {
        let t = triple("dual_lie", FieldSpec::Rationals);
        let v = lie_alpha(&t, 4, DEFAULT_CAP).unwrap();
        let got: Vec<(usize, usize, usize, bool)> =
            v.entries.iter().map(|e| (e.source_dim, e.target_dim, e.rank, e.iso)).collect();
        assert_eq!(got, vec![(1, 1, 1, true), (1, 1, 1, true), (0, 1, 0, false), (0, 2, 0, false)]);
    }

    #[test]
    fn zero_module() {
        let f = FieldSpec::Rationals;
        let mut t = triple("sl2", f);
        t.m = crate::presentation::builtins::lie_module_role("zero_module", &t.a, &t.l).unwrap();
        assert!(lie_cohomology(&t, 3, DEFAULT_CAP).unwrap().dims().iter().all(|&d| d == 0));
    }
}
