//! Incremental sparse echelon forms.
//!
//! Over a prime field rows are kept with leading coefficient 1 and reduced by
//! plain elimination. Over the rationals every row is scaled to a primitive
//! integer vector and reduced fraction-free (`v <- w_c*v - v_c*w`, then divided
//! by its content), so no rational arithmetic happens during elimination.
//!
//! Optionally each stored row carries a tracker: the coordinates of the row
//! in terms of the inserted generators. Trackers live in the same sparse row
//! at column offset `ambient`, so they are updated by the same elimination
//! steps for free.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseVec;
use crate::scalar::{denominator_lcm, inv_mod, mul_mod, sub_mod, FieldSpec, Scalar};

type Row<E> = Vec<(usize, E)>;

trait Domain {
    type E: Clone;
    /// Scale a scalar vector to domain elements; returns the scale factor
    /// applied (so `row = factor * v`).
    fn lift(&self, v: &SparseVec) -> (Row<Self::E>, Self::E);
    /// Combination of `v` and pivot row `w` that clears their common leading column.
    fn eliminate(&self, v: &Row<Self::E>, w: &Row<Self::E>) -> Row<Self::E>;
    fn normalize(&self, v: &mut Row<Self::E>, ambient: usize);
    fn lower(&self, e: &Self::E) -> Scalar;
    /// `-a / b` as a field scalar.
    fn neg_ratio(&self, a: &Self::E, b: &Self::E) -> Scalar;
}

struct ModP {
    p: u64,
}

impl Domain for ModP {
    type E = u64;

    fn lift(&self, v: &SparseVec) -> (Row<u64>, u64) {
        let row = v
            .iter()
            .map(|(i, x)| match x {
                Scalar::Residue { value, .. } => (*i, *value),
                Scalar::Rational(_) => panic!("rational scalar in prime-field elimination"),
            })
            .collect();
        (row, 1)
    }

    fn eliminate(&self, v: &Row<u64>, w: &Row<u64>) -> Row<u64> {
        // w has leading coefficient 1; subtract v_lead * w.
        let factor = v[0].1;
        let p = self.p;
        let mut out = Vec::with_capacity(v.len() + w.len());
        let (mut i, mut j) = (0, 0);
        while i < v.len() || j < w.len() {
            if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
                out.push(v[i]);
                i += 1;
            } else if i >= v.len() || w[j].0 < v[i].0 {
                let t = mul_mod(factor, w[j].1, p);
                out.push((w[j].0, sub_mod(0, t, p)));
                j += 1;
            } else {
                let t = sub_mod(v[i].1, mul_mod(factor, w[j].1, p), p);
                if t != 0 {
                    out.push((v[i].0, t));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn normalize(&self, v: &mut Row<u64>, ambient: usize) {
        if let Some(&(c, lead)) = v.first() {
            if c < ambient && lead != 1 {
                let inv = inv_mod(lead, self.p);
                for (_, x) in v.iter_mut() {
                    *x = mul_mod(*x, inv, self.p);
                }
            }
        }
    }

    fn lower(&self, e: &u64) -> Scalar {
        Scalar::Residue { value: *e, modulus: self.p }
    }

    fn neg_ratio(&self, a: &u64, b: &u64) -> Scalar {
        let t = mul_mod(*a, inv_mod(*b, self.p), self.p);
        Scalar::Residue { value: sub_mod(0, t, self.p), modulus: self.p }
    }
}

struct Integers;

impl Domain for Integers {
    type E = BigInt;

    fn lift(&self, v: &SparseVec) -> (Row<BigInt>, BigInt) {
        let lcm = denominator_lcm(v.iter().map(|(_, x)| x.as_rational().expect("rational scalar")));
        let row = v
            .iter()
            .map(|(i, x)| {
                let q = x.as_rational().unwrap();
                (*i, q.numer() * (&lcm / q.denom()))
            })
            .collect();
        (row, lcm)
    }

    fn eliminate(&self, v: &Row<BigInt>, w: &Row<BigInt>) -> Row<BigInt> {
        let a = &w[0].1;
        let b = &v[0].1;
        let g = a.gcd(b);
        let a = a / &g;
        let b = b / &g;
        let mut out = Vec::with_capacity(v.len() + w.len());
        let (mut i, mut j) = (0, 0);
        while i < v.len() || j < w.len() {
            if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
                out.push((v[i].0, &a * &v[i].1));
                i += 1;
            } else if i >= v.len() || w[j].0 < v[i].0 {
                out.push((w[j].0, -(&b * &w[j].1)));
                j += 1;
            } else {
                let t = &a * &v[i].1 - &b * &w[j].1;
                if !t.is_zero() {
                    out.push((v[i].0, t));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn normalize(&self, v: &mut Row<BigInt>, _ambient: usize) {
        let mut g = BigInt::zero();
        for (_, x) in v.iter() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return;
        }
        if v[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, x) in v.iter_mut() {
                *x = &*x / &g;
            }
        }
    }

    fn lower(&self, e: &BigInt) -> Scalar {
        Scalar::Rational(BigRational::from_integer(e.clone()))
    }

    fn neg_ratio(&self, a: &BigInt, b: &BigInt) -> Scalar {
        Scalar::Rational(BigRational::new(-a.clone(), b.clone()))
    }
}

struct Reducer<D: Domain> {
    dom: D,
    ambient: usize,
    rows: Vec<Row<D::E>>,
    pivots: HashMap<usize, usize>,
}

impl<D: Domain> Reducer<D> {
    fn new(dom: D, ambient: usize) -> Self {
        Reducer { dom, ambient, rows: Vec::new(), pivots: HashMap::new() }
    }

    fn reduce(&self, mut v: Row<D::E>) -> Row<D::E> {
        while let Some(&(c, _)) = v.first() {
            if c >= self.ambient {
                break;
            }
            match self.pivots.get(&c) {
                Some(&k) => {
                    v = self.dom.eliminate(&v, &self.rows[k]);
                    self.dom.normalize(&mut v, self.ambient);
                }
                None => break,
            }
        }
        v
    }

    fn leads_ambient(&self, v: &Row<D::E>) -> bool {
        v.first().is_some_and(|(c, _)| *c < self.ambient)
    }

    /// Returns the reduced row; inserted when its ambient part is nonzero.
    fn insert(&mut self, v: Row<D::E>) -> Option<Row<D::E>> {
        let mut r = self.reduce(v);
        if self.leads_ambient(&r) {
            self.dom.normalize(&mut r, self.ambient);
            self.pivots.insert(r[0].0, self.rows.len());
            self.rows.push(r);
            None
        } else {
            Some(r)
        }
    }

    fn tracked(&self, v: &SparseVec, slot: usize) -> Row<D::E> {
        let (mut row, factor) = self.dom.lift(v);
        row.push((self.ambient + slot, factor));
        row
    }

    fn ambient_part(&self, row: &Row<D::E>) -> SparseVec {
        row.iter().take_while(|(c, _)| *c < self.ambient).map(|(c, e)| (*c, self.dom.lower(e))).collect()
    }

    /// From a reduced tracked row with zero ambient part and tracker
    /// coefficient `t_slot` at `slot`, express the slot generator as a
    /// combination of the other generators.
    fn solve_from_relation(&self, row: &Row<D::E>, slot: usize) -> SparseVec {
        let key = self.ambient + slot;
        let pivot = &row.iter().find(|(c, _)| *c == key).expect("tracker entry").1;
        row.iter().filter(|(c, _)| *c != key).map(|(c, e)| (c - self.ambient, self.dom.neg_ratio(e, pivot))).collect()
    }

    fn relation(&self, row: &Row<D::E>) -> SparseVec {
        row.iter().map(|(c, e)| (c - self.ambient, self.dom.lower(e))).collect()
    }
}

enum Inner {
    Prime(Reducer<ModP>),
    Int(Reducer<Integers>),
}

macro_rules! dispatch {
    ($self:expr, $r:ident => $body:expr) => {
        match $self {
            Inner::Prime($r) => $body,
            Inner::Int($r) => $body,
        }
    };
}

/// Incremental echelon basis of a subspace of `field^ambient`.
pub struct Echelon {
    field: FieldSpec,
    ambient: usize,
    tracking: bool,
    generators: usize,
    inner: Inner,
}

impl Echelon {
    /// Plain echelon form (no generator tracking).
    pub fn new(field: FieldSpec, ambient: usize) -> Self {
        Self::build(field, ambient, false)
    }

    /// Echelon form that records how each row arose from the inserted vectors.
    pub fn tracking(field: FieldSpec, ambient: usize) -> Self {
        Self::build(field, ambient, true)
    }

    fn build(field: FieldSpec, ambient: usize, tracking: bool) -> Self {
        let inner = match field {
            FieldSpec::Rationals => Inner::Int(Reducer::new(Integers, ambient)),
            FieldSpec::PrimeField(p) => Inner::Prime(Reducer::new(ModP { p }, ambient)),
        };
        Echelon { field, ambient, tracking, generators: 0, inner }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        dispatch!(&self.inner, r => r.rows.len())
    }

    /// Number of vectors inserted so far.
    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Insert a vector; returns `true` if it was independent of the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.insert_with_relation(v).is_none()
    }

    /// Insert a vector. If it is dependent and tracking is on, returns the
    /// linear relation among generators (coefficient of the new generator
    /// is nonzero). Without tracking a dependent insert returns an empty relation.
    pub fn insert_with_relation(&mut self, v: &SparseVec) -> Option<SparseVec> {
        debug_assert!(v.iter().all(|(i, _)| *i < self.ambient));
        let slot = self.generators;
        self.generators += 1;
        let tracking = self.tracking;
        dispatch!(&mut self.inner, r => {
            let row = if tracking { r.tracked(v, slot) } else { r.dom.lift(v).0 };
            r.insert(row).map(|rest| if tracking { r.relation(&rest) } else { Vec::new() })
        })
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        dispatch!(&self.inner, r => {
            let row = r.dom.lift(v).0;
            !r.leads_ambient(&r.reduce(row))
        })
    }

    /// Residual of `v` after reduction against the basis (zero iff contained),
    /// up to a nonzero scale factor.
    pub fn residual(&self, v: &SparseVec) -> SparseVec {
        dispatch!(&self.inner, r => {
            let row = r.dom.lift(v).0;
            r.ambient_part(&r.reduce(row))
        })
    }

    /// Coefficients `c` with `v = sum_g c_g * generator_g`, if `v` is in the span.
    /// Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.tracking, "express requires a tracking echelon");
        let slot = self.generators;
        dispatch!(&self.inner, r => {
            let row = r.tracked(v, slot);
            let red = r.reduce(row);
            if r.leads_ambient(&red) {
                None
            } else {
                Some(r.solve_from_relation(&red, slot))
            }
        })
    }

    /// Echelon basis vectors (ambient parts of the stored rows).
    pub fn basis(&self) -> Vec<SparseVec> {
        dispatch!(&self.inner, r => r.rows.iter().map(|row| r.ambient_part(row)).collect())
    }

    /// Pivot columns of the stored rows, in insertion order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        dispatch!(&self.inner, r => r.rows.iter().map(|row| row[0].0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(field: FieldSpec, xs: &[i64]) -> SparseVec {
        xs.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, field.from_i64(*x))).collect()
    }

    #[test]
    fn rank_and_relation() {
        for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
            let mut e = Echelon::tracking(field, 3);
            assert!(e.insert_with_relation(&v(field, &[1, 2, 0])).is_none());
            assert!(e.insert_with_relation(&v(field, &[0, 1, 1])).is_none());
            let rel = e.insert_with_relation(&v(field, &[2, 5, 1])).expect("dependent");
            // rel . generators = 0
            let gens = [v(field, &[1, 2, 0]), v(field, &[0, 1, 1]), v(field, &[2, 5, 1])];
            let mut acc = vec![field.zero(); 3];
            for (g, c) in &rel {
                for (i, x) in &gens[*g] {
                    acc[*i] = &acc[*i] + &(c * x);
                }
            }
            assert!(acc.iter().all(|x| x.is_zero()));
            assert_eq!(e.rank(), 2);
            let x = e.express(&v(field, &[3, 7, 1])).unwrap();
            let mut acc = vec![field.zero(); 3];
            for (g, c) in &x {
                for (i, y) in &gens[*g] {
                    acc[*i] = &acc[*i] + &(c * y);
                }
            }
            assert_eq!(acc, vec![field.from_i64(3), field.from_i64(7), field.from_i64(1)]);
            assert!(e.express(&v(field, &[0, 0, 1])).is_none());
            assert!(!e.contains(&v(field, &[0, 0, 1])));
        }
    }

    #[test]
    fn rational_inputs_scale_correctly() {
        let q = FieldSpec::Rationals;
        let half = Scalar::parse("1/2", q).unwrap();
        let mut e = Echelon::tracking(q, 2);
        e.insert(&vec![(0, half.clone())]);
        let x = e.express(&vec![(0, q.one())]).unwrap();
        assert_eq!(x, vec![(0, q.from_i64(2))]);
    }
}
