use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Identifies the base field: GF(p) for a small prime p, or the rationals.
///
/// Two descriptors are interoperable iff they are equal; mixed-field
/// arithmetic panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Prime(u32),
    Rationals,
}

impl FieldDescriptor {
    /// GF(p). The modulus is checked for primality by trial division and
    /// must satisfy 2 <= p < 2^16.
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p >= (1 << 16) {
            return Err(Error::ModulusOutOfRange(p));
        }
        let mut d = 2u32;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(FieldDescriptor::Prime(p))
    }

    pub fn rationals() -> Self {
        FieldDescriptor::Rationals
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldDescriptor::Prime(_))
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            FieldDescriptor::Prime(p) => Some(*p),
            FieldDescriptor::Rationals => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "gf{p}"),
            FieldDescriptor::Rationals => write!(f, "q"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
enum Value {
    Fp(u32),
    Rat(BigRational),
}

/// An exact field element. Prime-field values are residues in [0, p);
/// rationals are kept in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Scalar {
    desc: FieldDescriptor,
    value: Value,
}

impl Scalar {
    pub fn zero(desc: FieldDescriptor) -> Self {
        Self::from_int(desc, 0)
    }

    pub fn one(desc: FieldDescriptor) -> Self {
        Self::from_int(desc, 1)
    }

    pub fn from_int(desc: FieldDescriptor, n: i64) -> Self {
        match desc {
            FieldDescriptor::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u32;
                Scalar { desc, value: Value::Fp(r) }
            }
            FieldDescriptor::Rationals => Scalar {
                desc,
                value: Value::Rat(BigRational::from_integer(BigInt::from(n))),
            },
        }
    }

    /// Residue constructor for prime fields.
    pub fn from_residue(desc: FieldDescriptor, r: u64) -> Result<Self> {
        match desc {
            FieldDescriptor::Prime(p) => Ok(Scalar {
                desc,
                value: Value::Fp((r % p as u64) as u32),
            }),
            FieldDescriptor::Rationals => Err(Error::UnsupportedField),
        }
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::BadArgument("zero denominator".into()));
        }
        Ok(Scalar {
            desc: FieldDescriptor::Rationals,
            value: Value::Rat(BigRational::new(num, den)),
        })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Fp(r) => *r == 0,
            Value::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Fp(r) => *r == 1,
            Value::Rat(q) => q.is_one(),
        }
    }

    /// The residue for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match &self.value {
            Value::Fp(r) => Some(*r),
            Value::Rat(_) => None,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rat(q) => Some(q),
            Value::Fp(_) => None,
        }
    }

    /// Absolute value of the numerator, used for the rational pivoting rule.
    pub(crate) fn numer_abs(&self) -> Option<BigInt> {
        self.rational().map(|q| q.numer().abs())
    }

    fn check(&self, other: &Scalar) {
        if self.desc != other.desc {
            panic!(
                "mixed-field arithmetic: {} vs {}",
                self.desc, other.desc
            );
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match (&self.value, self.desc) {
            (Value::Fp(r), FieldDescriptor::Prime(p)) => {
                // Fermat: r^(p-2) mod p
                let mut base = *r as u64;
                let mut exp = p as u64 - 2;
                let m = p as u64;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Some(Scalar { desc: self.desc, value: Value::Fp(acc as u32) })
            }
            (Value::Rat(q), _) => Some(Scalar {
                desc: self.desc,
                value: Value::Rat(q.recip()),
            }),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Fp(r) => write!(f, "{r}"),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let value = match (&self.value, &rhs.value) {
            (Value::Fp(a), Value::Fp(b)) => {
                let p = self.desc.modulus().unwrap() as u64;
                Value::Fp(((*a as u64 + *b as u64) % p) as u32)
            }
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            _ => unreachable!(),
        };
        Scalar { desc: self.desc, value }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let value = match (&self.value, &rhs.value) {
            (Value::Fp(a), Value::Fp(b)) => {
                let p = self.desc.modulus().unwrap() as u64;
                Value::Fp((*a as u64 * *b as u64 % p) as u32)
            }
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            _ => unreachable!(),
        };
        Scalar { desc: self.desc, value }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let value = match &self.value {
            Value::Fp(r) => {
                let p = self.desc.modulus().unwrap();
                Value::Fp(if *r == 0 { 0 } else { p - r })
            }
            Value::Rat(q) => Value::Rat(-q),
        };
        Scalar { desc: self.desc, value }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
