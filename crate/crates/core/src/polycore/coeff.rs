//! Exact scalars: rationals and residues modulo a prime below 2^31.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Default modulus for randomized runs.
pub const DEFAULT_PRIME: u32 = 32003;

/// The coefficient field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Validates `p` as a prime below 2^31.
    pub fn prime(p: u32) -> Result<Self, PolyError> {
        if p < (1 << 31) && is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(PolyError::BadField(format!("{p} is not a prime below 2^31")))
        }
    }

    pub fn default_prime() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }

    pub fn zero(&self) -> Coefficient {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coefficient {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coefficient {
        match *self {
            Field::Rational => Coefficient::Rational(Box::new(BigRational::from_integer(v.into()))),
            Field::Prime(p) => Coefficient::Residue {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coefficient {
        match *self {
            Field::Rational => Coefficient::Rational(Box::new(BigRational::from_integer(v.clone()))),
            Field::Prime(p) => Coefficient::Residue {
                value: reduce_bigint(v, p),
                modulus: p,
            },
        }
    }

    /// `num / den`, failing when the denominator vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Coefficient, PolyError> {
        match *self {
            Field::Rational => {
                if den.is_zero() {
                    return Err(PolyError::NotInField(format!("{num}/{den}")));
                }
                Ok(Coefficient::Rational(Box::new(BigRational::new(
                    num.clone(),
                    den.clone(),
                ))))
            }
            Field::Prime(p) => {
                let d = reduce_bigint(den, p);
                if d == 0 {
                    return Err(PolyError::NotInField(format!(
                        "{num}/{den} (denominator divisible by {p})"
                    )));
                }
                let n = self.from_bigint(num);
                let inv = Coefficient::Residue { value: d, modulus: p }
                    .inverse()
                    .expect("nonzero residue is invertible");
                Ok(&n * &inv)
            }
        }
    }

    /// Uniform residue for prime fields, small integer in [-100, 100] over the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Coefficient {
        match *self {
            Field::Rational => self.from_i64(rng.random_range(-100..=100)),
            Field::Prime(p) => Coefficient::Residue {
                value: rng.random_range(0..p),
                modulus: p,
            },
        }
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "QQ" {
            return Ok(Field::Rational);
        }
        match s.strip_prefix("Fp:") {
            Some(p) => {
                let p: u32 = p
                    .parse()
                    .map_err(|_| PolyError::BadField(format!("bad modulus in {s:?}")))?;
                Field::prime(p)
            }
            None => Err(PolyError::BadField(format!(
                "unknown field {s:?}, expected QQ or Fp:<p>"
            ))),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p as u64 {
        if (p as u64).is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn reduce_bigint(v: &BigInt, p: u32) -> u32 {
    v.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits")
}

/// A field element. Rationals are boxed so residues stay small.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(Box<BigRational>),
    Residue { value: u32, modulus: u32 },
}

impl Coefficient {
    pub fn field(&self) -> Field {
        match self {
            Coefficient::Rational(_) => Field::Rational,
            Coefficient::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_zero(),
            Coefficient::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_one(),
            Coefficient::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Coefficient> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coefficient::Rational(r) => Coefficient::Rational(Box::new(r.recip())),
            Coefficient::Residue { value, modulus } => Coefficient::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Signed representative: rationals as-is, residues in (-p/2, p/2].
    pub fn to_rational(&self) -> BigRational {
        match self {
            Coefficient::Rational(r) => (**r).clone(),
            Coefficient::Residue { value, modulus } => {
                let v = *value as i64;
                let m = *modulus as i64;
                let s = if v > m / 2 { v - m } else { v };
                BigRational::from_integer(s.into())
            }
        }
    }

    /// Whether the printed form starts with a minus sign.
    pub fn is_negative_repr(&self) -> bool {
        self.to_rational().is_negative()
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus must be prime");
    t.rem_euclid(p as i64) as u32
}

fn kind_mismatch(a: &Coefficient, b: &Coefficient) -> ! {
    panic!(
        "coefficient field mismatch: {} vs {}",
        a.field(),
        b.field()
    )
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => {
                Coefficient::Rational(Box::new(&**a + &**b))
            }
            (
                Coefficient::Residue { value: a, modulus: p },
                Coefficient::Residue { value: b, modulus: q },
            ) if p == q => {
                let s = *a as u64 + *b as u64;
                Coefficient::Residue {
                    value: (s % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => kind_mismatch(self, rhs),
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => {
                Coefficient::Rational(Box::new(&**a - &**b))
            }
            (
                Coefficient::Residue { value: a, modulus: p },
                Coefficient::Residue { value: b, modulus: q },
            ) if p == q => {
                let s = *a as u64 + *p as u64 - *b as u64;
                Coefficient::Residue {
                    value: (s % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => kind_mismatch(self, rhs),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => {
                Coefficient::Rational(Box::new(&**a * &**b))
            }
            (
                Coefficient::Residue { value: a, modulus: p },
                Coefficient::Residue { value: b, modulus: q },
            ) if p == q => Coefficient::Residue {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => kind_mismatch(self, rhs),
        }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(Box::new(-&**a)),
            Coefficient::Residue { value, modulus } => Coefficient::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}
