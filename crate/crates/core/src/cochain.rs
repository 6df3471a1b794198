//! Bases and flat indexing for `K^{pq} = Hom(A^{(x)pq} (x) R^{(x)q}, M)` and
//! for the exterior-power cochain spaces of the Lie variant.
//!
//! A basis cochain is addressed by the argument tuple
//! `(a_11, .., a_1q, a_21, .., a_pq, r_1, .., r_q)` followed by an output index
//! `m`, read as a mixed-radix number with the leftmost digit most
//! significant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{canonicalize_vec, SparseVec};
use crate::scalar::{FieldSpec, Scalar};

pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiDegree {
    pub p: usize,
    pub q: usize,
}

impl BiDegree {
    pub fn new(p: usize, q: usize) -> Self {
        BiDegree { p, q }
    }

    pub fn total(&self) -> usize {
        self.p + self.q
    }
}

impl std::fmt::Display for BiDegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// `(dim A, dim R, dim M)`; for the Lie variant `r` is `dim L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub r: usize,
    pub m: usize,
}

impl Dims {
    pub fn new(a: usize, r: usize, m: usize) -> Self {
        Dims { a, r, m }
    }
}

fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

fn within_cap(n: u128, cap: usize) -> Result<usize> {
    if n > cap as u128 {
        Err(Error::SizeCapExceeded { requested: n, cap })
    } else {
        Ok(n as usize)
    }
}

/// Number of argument tuples at `deg` (the dimension divided by `dim M`).
pub fn arg_count(deg: BiDegree, dims: Dims, cap: usize) -> Result<usize> {
    let n = checked_pow(dims.a, deg.p * deg.q).saturating_mul(checked_pow(dims.r, deg.q));
    within_cap(n, cap)
}

/// `(dim A)^{pq} (dim R)^q (dim M)`.
pub fn space_dim(deg: BiDegree, dims: Dims, cap: usize) -> Result<usize> {
    let n =
        checked_pow(dims.a, deg.p * deg.q).saturating_mul(checked_pow(dims.r, deg.q)).saturating_mul(dims.m as u128);
    within_cap(n, cap)
}

/// Digit radices of an argument tuple at `deg`.
pub fn radices(deg: BiDegree, dims: Dims) -> Vec<usize> {
    let mut r = vec![dims.a; deg.p * deg.q];
    r.extend(std::iter::repeat_n(dims.r, deg.q));
    r
}

pub fn encode_args(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

pub fn decode_args(mut flat: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, r) in digits.iter_mut().zip(radices).rev() {
        *d = flat % r;
        flat /= r;
    }
    digits
}

pub fn encode_index(
    a_indices: &[usize],
    r_indices: &[usize],
    m_index: usize,
    deg: BiDegree,
    dims: Dims,
) -> Result<usize> {
    if a_indices.len() != deg.p * deg.q || r_indices.len() != deg.q {
        return Err(Error::IndexOutOfRange(format!(
            "expected {} A-indices and {} R-indices at {deg}",
            deg.p * deg.q,
            deg.q
        )));
    }
    if let Some(a) = a_indices.iter().find(|&&a| a >= dims.a) {
        return Err(Error::IndexOutOfRange(format!("A-index {a} >= {}", dims.a)));
    }
    if let Some(r) = r_indices.iter().find(|&&r| r >= dims.r) {
        return Err(Error::IndexOutOfRange(format!("R-index {r} >= {}", dims.r)));
    }
    if m_index >= dims.m {
        return Err(Error::IndexOutOfRange(format!("M-index {m_index} >= {}", dims.m)));
    }
    let mut digits = a_indices.to_vec();
    digits.extend_from_slice(r_indices);
    Ok(encode_args(&digits, &radices(deg, dims)) * dims.m + m_index)
}

/// Inverse of [`encode_index`]: `(a_indices, r_indices, m_index)`.
pub fn decode_index(flat: usize, deg: BiDegree, dims: Dims) -> Result<(Vec<usize>, Vec<usize>, usize)> {
    let total = space_dim(deg, dims, usize::MAX)?;
    if flat >= total {
        return Err(Error::IndexOutOfRange(format!("flat index {flat} >= {total}")));
    }
    let mut digits = decode_args(flat / dims.m, &radices(deg, dims));
    let r = digits.split_off(deg.p * deg.q);
    Ok((digits, r, flat % dims.m))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `C((dim A)^p dim L, q) dim M`.
pub fn lie_space_dim(p: usize, q: usize, dims: Dims, cap: usize) -> Result<usize> {
    let g = checked_pow(dims.a, p).saturating_mul(dims.r as u128);
    let g = within_cap(g, cap)?;
    within_cap(binomial(g, q).saturating_mul(dims.m as u128), cap)
}

/// Strictly increasing `q`-tuples from `0..n`, in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExteriorBasis {
    pub n: usize,
    pub q: usize,
}

impl ExteriorBasis {
    pub fn new(n: usize, q: usize) -> Self {
        ExteriorBasis { n, q }
    }

    pub fn len(&self) -> usize {
        binomial(self.n, self.q) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `t` (assumed strictly increasing) in the basis.
    pub fn rank(&self, t: &[usize]) -> usize {
        let mut r = 0u128;
        let mut start = 0;
        for (i, &v) in t.iter().enumerate() {
            for u in start..v {
                r += binomial(self.n - 1 - u, self.q - 1 - i);
            }
            start = v + 1;
        }
        r as usize
    }

    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.q);
        let mut v = 0;
        for i in 0..self.q {
            loop {
                let c = binomial(self.n - 1 - v, self.q - 1 - i) as usize;
                if r < c {
                    break;
                }
                r -= c;
                v += 1;
            }
            t.push(v);
            v += 1;
        }
        t
    }
}

/// Sort `t` in place and return the permutation sign, or `None` if an entry
/// repeats.
pub fn sort_with_sign(t: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// An element of `K^{pq}` as a sparse coefficient vector over the flat basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: BiDegree,
    pub dims: Dims,
    pub field: FieldSpec,
    pub coeffs: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub degree: BiDegree,
    pub dims: Dims,
    pub field: FieldSpec,
    pub entries: Vec<(usize, String)>,
}

impl Cochain {
    pub fn zero(field: FieldSpec, degree: BiDegree, dims: Dims) -> Self {
        Cochain { degree, dims, field, coeffs: Vec::new() }
    }

    pub fn from_sparse(field: FieldSpec, degree: BiDegree, dims: Dims, coeffs: SparseVec) -> Self {
        Cochain { degree, dims, field, coeffs: canonicalize_vec(coeffs) }
    }

    /// Build from values on basis argument tuples: `f(a, r)` returns the
    /// coordinates in `M` of the value.
    pub fn from_fn(
        field: FieldSpec,
        degree: BiDegree,
        dims: Dims,
        f: impl Fn(&[usize], &[usize]) -> Vec<Scalar>,
    ) -> Result<Self> {
        let rad = radices(degree, dims);
        let n = arg_count(degree, dims, DEFAULT_CAP)?;
        let split = degree.p * degree.q;
        let mut coeffs = Vec::new();
        for x in 0..n {
            let digits = decode_args(x, &rad);
            let v = f(&digits[..split], &digits[split..]);
            for (m, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    coeffs.push((x * dims.m + m, c));
                }
            }
        }
        Ok(Cochain { degree, dims, field, coeffs })
    }

    /// Value on a basis argument tuple, as coordinates in `M`.
    pub fn eval(&self, a: &[usize], r: &[usize]) -> Vec<Scalar> {
        let mut digits = a.to_vec();
        digits.extend_from_slice(r);
        let base = encode_args(&digits, &radices(self.degree, self.dims)) * self.dims.m;
        let mut out = vec![self.field.zero(); self.dims.m];
        let start = self.coeffs.partition_point(|(i, _)| *i < base);
        for (i, c) in &self.coeffs[start..] {
            if *i >= base + self.dims.m {
                break;
            }
            out[i - base] = c.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        space_dim(self.degree, self.dims, usize::MAX).expect("uncapped")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_json(&self) -> CochainJson {
        CochainJson {
            degree: self.degree,
            dims: self.dims,
            field: self.field,
            entries: self.coeffs.iter().map(|(i, c)| (*i, c.to_string())).collect(),
        }
    }

    pub fn from_json(j: &CochainJson) -> Result<Self> {
        let total = space_dim(j.degree, j.dims, usize::MAX)?;
        let mut coeffs = Vec::with_capacity(j.entries.len());
        for (i, s) in &j.entries {
            if *i >= total {
                return Err(Error::IndexOutOfRange(format!("cochain entry {i} >= {total}")));
            }
            coeffs.push((*i, Scalar::parse(s, j.field)?));
        }
        Ok(Cochain::from_sparse(j.field, j.degree, j.dims, coeffs))
    }
}
