//! Independent oracles: plain dense elimination and textbook complexes built
//! only from the public multiplication maps.

#![allow(dead_code)]

use algcohom::presentation::{AssocAlgebra, Bimodule, LieAlgebra, LieModule};
use algcohom::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field arithmetic on `BigRational`, reduced mod `p` when `p` is set.
#[derive(Clone, Copy, Debug)]
pub struct F {
    pub p: Option<u64>,
}

impl F {
    pub fn of(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => F { p: None },
            FieldSpec::PrimeField(p) => F { p: Some(p) },
        }
    }

    pub fn norm(&self, x: BigRational) -> BigRational {
        match self.p {
            None => x,
            Some(p) => {
                let p = BigInt::from(p);
                let num = ((x.numer() % &p) + &p) % &p;
                let den = ((x.denom() % &p) + &p) % &p;
                let inv = den.modpow(&(&p - 2u32), &p);
                BigRational::from_integer((num * inv) % &p)
            }
        }
    }

    pub fn int(&self, v: i64) -> BigRational {
        self.norm(BigRational::from_integer(v.into()))
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a + b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a * b)
    }

    pub fn inv(&self, a: &BigRational) -> BigRational {
        self.norm(BigRational::one() / a)
    }

    pub fn lift(&self, s: &Scalar) -> BigRational {
        let text = s.render();
        let q: BigRational = match text.split_once('/') {
            Some((n, d)) => BigRational::new(n.parse().unwrap(), d.parse().unwrap()),
            None => BigRational::from_integer(text.parse().unwrap()),
        };
        self.norm(q)
    }

    pub fn lower(&self, field: FieldSpec, x: &BigRational) -> Scalar {
        Scalar::parse(&x.to_string(), field).unwrap()
    }
}

pub type Mat = Vec<Vec<BigRational>>;

/// Row reduction on a dense copy; returns the rank.
pub fn dense_rank(f: F, m: &Mat) -> usize {
    let mut a: Mat = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let inv = f.inv(&a[rank][c]);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let factor = f.mul(&a[r][c], &inv);
                for k in c..cols {
                    let t = f.mul(&factor, &a[rank][k]);
                    a[r][k] = f.add(&a[r][k], &-t);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn basis(f: F, field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| f.lower(field, &if k == i { BigRational::one() } else { BigRational::zero() })).collect()
}

fn lift_vec(f: F, v: &[Scalar]) -> Vec<BigRational> {
    v.iter().map(|s| f.lift(s)).collect()
}

/// `t[i][j]` is the coordinate vector of `op(e_i, e_j)`.
fn table(
    f: F,
    field: FieldSpec,
    n1: usize,
    n2: usize,
    op: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
) -> Vec<Vec<Vec<BigRational>>> {
    (0..n1)
        .map(|i| (0..n2).map(|j| lift_vec(f, &op(&basis(f, field, n1, i), &basis(f, field, n2, j)))).collect())
        .collect()
}

fn digits(mut x: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for k in (0..len).rev() {
        d[k] = x % base;
        x /= base;
    }
    d
}

fn undigits(d: &[usize], base: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * base + x)
}

/// Betti numbers of a cochain complex with the given dimensions and
/// differentials `d[n]: C^n -> C^{n+1}`, in degrees `0..d.len()`.
pub fn betti(f: F, dims: &[usize], d: &[Mat]) -> Vec<usize> {
    let ranks: Vec<usize> = d.iter().map(|m| dense_rank(f, m)).collect();
    (0..d.len()).map(|n| dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
}

/// Classical Hochschild cohomology of `r` with coefficients in `m`, degrees `0..=top`.
pub fn hochschild(r: &AssocAlgebra, m: &Bimodule, top: usize) -> Vec<usize> {
    let field = r.field;
    let f = F::of(field);
    let (nr, nm) = (r.dim(), m.dim());
    let mul = table(f, field, nr, nr, |x, y| r.mul(x, y));
    let left = table(f, field, nr, nm, |x, v| m.left_act(x, v));
    let right = table(f, field, nm, nr, |v, x| m.right_act(v, x));
    let dim = |n: usize| nr.pow(n as u32) * nm;
    let dims: Vec<usize> = (0..=top + 1).map(dim).collect();
    let mut diffs = Vec::new();
    for n in 0..=top {
        let mut mat = vec![vec![BigRational::zero(); dim(n)]; dim(n + 1)];
        for row in 0..nr.pow(n as u32 + 1) {
            let args = digits(row, nr, n + 1);
            let mut add = |src_args: &[usize], coeffs: &[BigRational], out: usize, sign: i64| {
                let base = undigits(src_args, nr) * nm;
                for (k, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let cell = &mut mat[row * nm + out][base + k];
                        *cell = f.add(cell, &f.mul(c, &f.int(sign)));
                    }
                }
            };
            for out in 0..nm {
                let col: Vec<BigRational> = (0..nm).map(|k| left[args[0]][k][out].clone()).collect();
                add(&args[1..], &col, out, 1);
                for i in 0..n {
                    let prod = &mul[args[i]][args[i + 1]];
                    for (s, c) in prod.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut src = args[..i].to_vec();
                        src.push(s);
                        src.extend_from_slice(&args[i + 2..]);
                        let coeffs: Vec<BigRational> =
                            (0..nm).map(|k| if k == out { c.clone() } else { BigRational::zero() }).collect();
                        add(&src, &coeffs, out, if (i + 1) % 2 == 0 { 1 } else { -1 });
                    }
                }
                let col: Vec<BigRational> = (0..nm).map(|k| right[k][args[n]][out].clone()).collect();
                add(&args[..n], &col, out, if (n + 1) % 2 == 0 { 1 } else { -1 });
            }
        }
        diffs.push(mat);
    }
    betti(f, &dims, &diffs)
}

fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts a tuple by bubble sort; returns the sign, or `None` on a repeat.
fn sort_sign(t: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..t.len() {
        for j in 0..t.len() - 1 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    t.windows(2).all(|w| w[0] != w[1]).then_some(sign)
}

/// Chevalley-Eilenberg cohomology of `l` over the ground field with values in `m`, degrees `0..=top`.
pub fn chevalley_eilenberg(l: &LieAlgebra, m: &LieModule, top: usize) -> Vec<usize> {
    let field = l.field;
    let f = F::of(field);
    let (nl, nm) = (l.dim(), m.dim());
    let br = table(f, field, nl, nl, |x, y| l.bracket(x, y));
    let act = table(f, field, nl, nm, |x, v| m.act(x, v));
    let tuples: Vec<Vec<Vec<usize>>> = (0..=top + 1).map(|k| increasing(nl, k)).collect();
    let index = |t: &[usize]| tuples[t.len()].iter().position(|u| u == t).unwrap();
    let dims: Vec<usize> = tuples.iter().map(|t| t.len() * nm).collect();
    let mut diffs = Vec::new();
    for n in 0..=top {
        let mut mat = vec![vec![BigRational::zero(); dims[n]]; dims[n + 1]];
        for (ri, xs) in tuples[n + 1].iter().enumerate() {
            for out in 0..nm {
                let row = ri * nm + out;
                for i in 0..=n {
                    let rest: Vec<usize> = xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
                    let base = index(&rest) * nm;
                    let sign = f.int(if i % 2 == 0 { 1 } else { -1 });
                    for k in 0..nm {
                        let c = &act[xs[i]][k][out];
                        if !c.is_zero() {
                            let cell = &mut mat[row][base + k];
                            *cell = f.add(cell, &f.mul(c, &sign));
                        }
                    }
                }
                for i in 0..=n {
                    for j in i + 1..=n {
                        for (z, c) in br[xs[i]][xs[j]].iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut t = vec![z];
                            t.extend(xs.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x));
                            let Some(s) = sort_sign(&mut t) else { continue };
                            let sign = if (i + j) % 2 == 0 { s } else { -s };
                            let cell = &mut mat[row][index(&t) * nm + out];
                            *cell = f.add(cell, &f.mul(c, &f.int(sign)));
                        }
                    }
                }
            }
        }
        diffs.push(mat);
    }
    betti(f, &dims, &diffs)
}
