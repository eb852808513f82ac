//! Exact scalars over the base field: rationals (default) or a prime field.
//!
//! Rationals keep an `i64` fast path and promote to big integers on
//! overflow, so ranks of `±1` matrices never touch the allocator while
//! still staying exact on pathological inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default characteristic used when a prime field is selected without a modulus.
pub const DEFAULT_PRIME: u64 = 1_000_003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("scalar mode mismatch: {0} vs {1}")]
    ModeMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar or field from {0:?}")]
    Parse(String),
}

/// The coefficient field of every chain and matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(Rational::from_int(n)),
            Field::Prime(p) => Scalar::Mod {
                value: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// Sign `(-1)^k` as a scalar.
    pub fn sign(self, k: usize) -> Scalar {
        self.from_i64(if k.is_multiple_of(2) { 1 } else { -1 })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "gfp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `rational`, `gfp` (default prime) and `gfp:P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "rational" | "q" | "Q" => Ok(Field::Rational),
            "gfp" => Ok(Field::Prime(DEFAULT_PRIME)),
            _ => {
                let p = s
                    .strip_prefix("gfp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| FieldError::Parse(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
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

/// Exact rational number, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Result<Self, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational::Small(0, 1);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rational::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Self::from_i128(a * d + c * b, b * d);
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Rational::Big(-self.to_big()),
            },
            Rational::Big(r) => Self::from_big(-r.clone()),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Rational::Small(p, 1);
                }
            }
            return Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Self::from_big(r.recip()),
        })
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

/// A field element tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, FieldError> {
        Rational::new(num, den).map(Scalar::Rat)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => *r == Rational::Small(1, 1),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::ModeMismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add(b)),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.mul(b)),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        match self {
            Scalar::Rat(r) => r.recip().map(Scalar::Rat).ok_or(FieldError::DivisionByZero),
            Scalar::Mod { value, modulus } => {
                if *value == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar::Mod {
                    value: pow_mod(*value, *modulus - 2, *modulus),
                    modulus: *modulus,
                })
            }
        }
    }

    fn neg_ref(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.neg()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// JSON form: `"num/den"` (or `"num"`) for rationals, the integer residue otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rat(r) => serde_json::Value::String(r.to_string()),
            Scalar::Mod { value, .. } => serde_json::Value::from(*value),
        }
    }

    pub fn from_json(v: &serde_json::Value, field: Field) -> Result<Self, FieldError> {
        let bad = || FieldError::Parse(v.to_string());
        match field {
            Field::Rational => match v {
                serde_json::Value::String(s) => s.parse().map(Scalar::Rat),
                serde_json::Value::Number(n) => n.as_i64().map(|n| field.from_i64(n)).ok_or_else(bad),
                _ => Err(bad()),
            },
            Field::Prime(p) => match v {
                serde_json::Value::Number(n) => {
                    let n = n.as_i64().ok_or_else(bad)?;
                    Ok(Field::Prime(p).from_i64(n))
                }
                serde_json::Value::String(s) => {
                    let n: i64 = s.trim().parse().map_err(|_| bad())?;
                    Ok(Field::Prime(p).from_i64(n))
                }
                _ => Err(bad()),
            },
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Operator forms panic on mode mismatch; every scalar inside one engine
// comes from the same `Field`, so a mismatch there is a programming error.
macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("scalar ", stringify!($m)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rat(r) => s.serialize_str(&r.to_string()),
            Scalar::Mod { value, .. } => s.serialize_u64(*value),
        }
    }
}

/// Deserializes into the rational field; residues need [`Scalar::from_json`].
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Scalar::from_json(&v, Field::Rational).map_err(serde::de::Error::custom)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Rational {
    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small(n, _) => n.signum() as i32,
            Rational::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(r) => r.denom().is_one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(7, 3) + Field::Rational.zero(), q(7, 3));
        assert_eq!(q(2, -4), q(-1, 2));
        assert_eq!(q(0, 5).to_string(), "0");
    }

    #[test]
    fn prime_product() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(3) * f.from_i64(5), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.from_i64(3).inverse().unwrap(), f.from_i64(5));
    }

    #[test]
    fn errors() {
        let f = Field::prime(7).unwrap();
        assert_eq!(
            q(1, 2).checked_add(&f.one()),
            Err(FieldError::ModeMismatch(Field::Rational, Field::Prime(7)))
        );
        assert_eq!(q(1, 2).checked_div(&q(0, 1)), Err(FieldError::DivisionByZero));
        assert_eq!(f.one().checked_div(&f.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(Field::prime(9), Err(FieldError::NotPrime(9)));
        assert!(Scalar::rational(1, 0).is_err());
    }

    #[test]
    fn overflow_promotes() {
        let big = q(i64::MAX, 1);
        let s = &big + &big;
        assert_eq!(s.to_string(), "18446744073709551614");
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Rat(Rational::Small(..))));
        let tiny = q(1, i64::MAX);
        let p = &tiny * &tiny;
        assert_eq!(&p * &(&big * &big), Field::Rational.one());
    }

    #[test]
    fn parse_and_json() {
        assert_eq!("gfp:13".parse::<Field>().unwrap(), Field::Prime(13));
        assert_eq!("gfp".parse::<Field>().unwrap(), Field::Prime(DEFAULT_PRIME));
        assert!("gfp:12".parse::<Field>().is_err());
        let s = q(-3, 2);
        assert_eq!(s.to_json(), serde_json::json!("-3/2"));
        assert_eq!(Scalar::from_json(&s.to_json(), Field::Rational).unwrap(), s);
        let f = Field::Prime(11);
        assert_eq!(f.from_i64(4).to_json(), serde_json::json!(4));
    }

    fn small_rat() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Scalar::rational(n, d).unwrap())
    }

    fn residue() -> impl Strategy<Value = Scalar> {
        (0i64..1_000_003).prop_map(|n| Field::Prime(DEFAULT_PRIME).from_i64(n))
    }

    proptest! {
        #[test]
        fn rational_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a / &a).is_one());
            }
        }

        #[test]
        fn prime_axioms(a in residue(), b in residue(), c in residue()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }
    }
}
