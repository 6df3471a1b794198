//! Exact ground-field arithmetic: the rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field all structure constants live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Prime field of order `p`; `p` is checked by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::BadParams(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: (v as i128).rem_euclid(p as i128) as u64, modulus: p },
        }
    }

    /// Image of an arbitrary integer.
    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: reduce_bigint(v, p), modulus: p },
        }
    }

    /// Image of `num/den`; fails when the denominator vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match *self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::PrimeField(p) => {
                let d = reduce_bigint(den, p);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                let n = reduce_bigint(num, p);
                Ok(Scalar::Residue { value: mul_mod(n, inv_mod(d, p), p), modulus: p })
            }
        }
    }

    /// Every element of the field, if finite.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some((0..p).map(|value| Scalar::Residue { value, modulus: p }).collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.parse().map_err(|_| Error::Parse(format!("bad prime in field spec {s:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::Parse(format!("unknown field {s:?} (expected \"Q\" or \"Fp:<prime>\")")))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue fits in u64")
}

/// An exact field element tagged with its field.
///
/// Rationals are kept reduced with a positive denominator (guaranteed by
/// `BigRational`); residues are kept in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// Binary or unary field operation, for the checked entry point [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

/// Checked arithmetic: `FieldMismatch` on mixed fields, `DivisionByZero` on `inv(0)`.
pub fn scalar_arith(op: ArithOp, x: &Scalar, y: Option<&Scalar>) -> Result<Scalar> {
    match op {
        ArithOp::Neg => Ok(-x),
        ArithOp::Inv => x.inv(),
        ArithOp::Add | ArithOp::Sub | ArithOp::Mul => {
            let y = y.ok_or_else(|| Error::BadParams("binary operation needs two operands".into()))?;
            match op {
                ArithOp::Add => x.checked_add(y),
                ArithOp::Sub => x.checked_sub(y),
                _ => x.checked_mul(y),
            }
        }
    }
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: add_mod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: sub_mod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: inv_mod(*value, *modulus), modulus: *modulus }
            }
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inv()?)
    }

    /// Parse `[+-]digits[/digits]` into the given field.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let t = text.trim();
        let (num_txt, den_txt) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num = parse_signed_digits(num_txt, text)?;
        let den = match den_txt {
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad denominator in scalar {text:?}")));
                }
                d.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad denominator in scalar {text:?}")))?
            }
            None => BigInt::one(),
        };
        field.from_fraction(&num, &den)
    }

    /// Canonical text form, inverse of [`Scalar::parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// The value as a rational number, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }
}

fn parse_signed_digits(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad scalar {whole:?}")));
    }
    let v: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad scalar {whole:?}")))?;
    Ok(if s.starts_with('-') { -v } else { v })
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// Operator impls panic on mixed fields; every structure in this crate is
// built over a single field, so a mismatch is a programming error.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect("scalar field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Least common multiple of the denominators of a rational slice.
pub(crate) fn denominator_lcm<'a>(vals: impl Iterator<Item = &'a BigRational>) -> BigInt {
    vals.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn modular_examples() {
        let f = f5();
        let s = scalar_arith(ArithOp::Add, &f.from_i64(3), Some(&f.from_i64(4))).unwrap();
        assert_eq!(s, f.from_i64(2));
        assert_eq!(f.from_i64(2).inv().unwrap(), f.from_i64(3));
    }

    #[test]
    fn rational_sum() {
        let q = FieldSpec::Rationals;
        let a = Scalar::parse("1/2", q).unwrap();
        let b = Scalar::parse("1/3", q).unwrap();
        assert_eq!((&a + &b).render(), "5/6");
    }

    #[test]
    fn parsing() {
        assert_eq!(Scalar::parse("7", f5()).unwrap(), f5().from_i64(2));
        assert_eq!(Scalar::parse("-2/4", FieldSpec::Rationals).unwrap().render(), "-1/2");
        assert!(matches!(Scalar::parse("1/0", FieldSpec::Rationals), Err(Error::DivisionByZero)));
        assert!(matches!(Scalar::parse("1/5", f5()), Err(Error::DivisionByZero)));
        assert!(matches!(Scalar::parse("1.5", FieldSpec::Rationals), Err(Error::Parse(_))));
        assert!(matches!(Scalar::parse("", FieldSpec::Rationals), Err(Error::Parse(_))));
        assert!(matches!(Scalar::parse("2/-3", FieldSpec::Rationals), Err(Error::Parse(_))));
        assert_eq!(Scalar::parse("-3", f5()).unwrap(), f5().from_i64(2));
        assert_eq!(Scalar::parse("3/2", f5()).unwrap(), f5().from_i64(4));
    }

    #[test]
    fn field_spec_syntax() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:101".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(101));
        assert!("Fp:100".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
    }

    #[test]
    fn errors() {
        let f = f5();
        assert!(matches!(f.zero().inv(), Err(Error::DivisionByZero)));
        let q = FieldSpec::Rationals.one();
        assert!(matches!(q.checked_add(&f.one()), Err(Error::FieldMismatch(..))));
        assert!(matches!(scalar_arith(ArithOp::Mul, &q, Some(&f.one())), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn negative_from_i64() {
        assert_eq!(f5().from_i64(-1), f5().from_i64(4));
        assert_eq!(f5().from_i64(-10), f5().zero());
    }
}
