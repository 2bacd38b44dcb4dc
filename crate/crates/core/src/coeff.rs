//! Exact scalars over Q and prime fields F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field: Q when the characteristic is 0, F_p otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::InvalidCharacteristic(characteristic))
        }
    }

    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_prime_field(&self) -> bool {
        self.characteristic != 0
    }

    pub fn zero(&self) -> Coefficient {
        Coefficient::from_i64(0, *self)
    }

    pub fn one(&self) -> Coefficient {
        Coefficient::from_i64(1, *self)
    }

    /// Every element of F_p, or `None` over Q.
    pub fn elements(&self) -> Option<impl Iterator<Item = Coefficient> + '_> {
        let p = self.characteristic;
        (p != 0).then(move || (0..p).map(move |v| Coefficient::Residue { value: v, modulus: p }))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "Q")
        } else {
            write!(f, "F_{}", self.characteristic)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Residues are kept in `0..modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Coefficient {
    pub fn from_i64(n: i64, field: FieldSpec) -> Self {
        Self::from_bigint(&BigInt::from(n), field)
    }

    pub fn from_bigint(n: &BigInt, field: FieldSpec) -> Self {
        match field.characteristic {
            0 => Coefficient::Rational(BigRational::from_integer(n.clone())),
            p => {
                let r = n.mod_floor(&BigInt::from(p));
                Coefficient::Residue { value: r.to_u64().unwrap(), modulus: p }
            }
        }
    }

    /// `num/den` mapped into the field; fails when `den` vanishes there.
    pub fn from_ratio(num: &BigInt, den: &BigInt, field: FieldSpec) -> Result<Self> {
        let n = Self::from_bigint(num, field);
        let d = Self::from_bigint(den, field);
        n.checked_div(&d)
    }

    pub fn from_rational(q: &BigRational, field: FieldSpec) -> Result<Self> {
        Self::from_ratio(q.numer(), q.denom(), field)
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Coefficient::Rational(_) => FieldSpec { characteristic: 0 },
            Coefficient::Residue { modulus, .. } => FieldSpec { characteristic: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_zero(),
            Coefficient::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_one(),
            Coefficient::Residue { value, .. } => *value == 1,
        }
    }

    /// True for a negative rational; residues have no sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Coefficient::Rational(q) if q.is_negative())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coefficient::Rational(q) => Some(q),
            Coefficient::Residue { .. } => None,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(Error::MixedField(a.characteristic, b.characteristic))
        }
    }

    pub fn field_op(&self, other: &Self, op: FieldOp) -> Result<Self> {
        match op {
            FieldOp::Add => self.checked_add(other),
            FieldOp::Sub => self.checked_sub(other),
            FieldOp::Mul => self.checked_mul(other),
            FieldOp::Div => self.checked_div(other),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a + b),
            (Coefficient::Residue { value: a, modulus: p }, Coefficient::Residue { value: b, .. }) => {
                Coefficient::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a * b),
            (Coefficient::Residue { value: a, modulus: p }, Coefficient::Residue { value: b, .. }) => {
                Coefficient::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Coefficient::Rational(q) => Coefficient::Rational(q.recip()),
            Coefficient::Residue { value, modulus } => {
                // Fermat: a^(p-2)
                let v = BigUint::from(*value).modpow(&BigUint::from(modulus - 2), &BigUint::from(*modulus));
                Coefficient::Residue { value: v.to_u64().unwrap(), modulus: *modulus }
            }
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(-q),
            Coefficient::Residue { value, modulus } => {
                Coefficient::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents on nonzero values.
    pub fn powi(&self, exp: i32) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            Ok(self.inverse()?.pow(exp.unsigned_abs()))
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        self.checked_add(rhs).expect("coefficient field mismatch")
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self.checked_sub(rhs).expect("coefficient field mismatch")
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        self.checked_mul(rhs).expect("coefficient field mismatch")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.neg_ref()
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coefficient::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// C(n, k) as an element of `field`; base-p digitwise (Lucas) in characteristic p.
pub fn binom_residue(n: u64, k: u64, field: FieldSpec) -> Result<Coefficient> {
    if k > n {
        return Err(Error::InvalidArgs(format!("binomial C({n}, {k}) needs k <= n")));
    }
    let p = field.characteristic;
    if p == 0 {
        return Ok(Coefficient::Rational(BigRational::from_integer(BigInt::from(binomial(n, k)))));
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return Ok(field.zero());
        }
        let digit = binomial(nd, kd) % BigUint::from(p);
        acc = ((acc as u128 * digit.to_u64().unwrap() as u128) % p as u128) as u64;
        n /= p;
        k /= p;
    }
    Ok(Coefficient::Residue { value: acc, modulus: p })
}
