use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Univariate polynomial in `q` with exact rational coefficients.
/// `coeffs[i]` is the coefficient of `q^i`; trailing zeros are stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// The polynomial `q`.
    pub fn q() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_int(&self, q: i64) -> BigRational {
        self.eval(&BigRational::from_integer(q.into()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `C(a q + b, k) = (a q + b)(a q + b - 1)...(a q + b - k + 1) / k!`,
    /// the binomial as a polynomial in `q`.
    pub fn binomial_in_q(a: i64, b: i64, k: u32) -> Self {
        let mut p = Self::from_int(1);
        let mut fact = BigInt::one();
        for j in 0..k as i64 {
            let lin = Self::from_coeffs(vec![
                BigRational::from_integer((b - j).into()),
                BigRational::from_integer(a.into()),
            ]);
            p = &p * &lin;
            fact *= j + 1;
        }
        p.scale(&BigRational::new(BigInt::one(), fact))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|i| self.coefficient(i) + rhs.coefficient(i)).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        self + &-rhs
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(out)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let mon = match i {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{i}"),
            };
            if mon.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mon}")?;
            } else if abs.is_integer() {
                write!(f, "{abs}{mon}")?;
            } else {
                write!(f, "{abs}*{mon}")?;
            }
        }
        Ok(())
    }
}

/// Serialized as a list of coefficient strings, constant term first.
impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPolynomial::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomials_match_integers() {
        // C(q+2, 2) = (q^2 + 3q + 2)/2
        let p = QPolynomial::binomial_in_q(1, 2, 2);
        assert_eq!(p.coeffs(), &[r(1, 1), r(3, 2), r(1, 2)]);
        for q in 0..10i64 {
            assert_eq!(p.eval_int(q), r((q + 2) * (q + 1) / 2, 1));
        }
        // C(2q+2, 2) = 2q^2 + 3q + 1
        assert_eq!(QPolynomial::binomial_in_q(2, 2, 2).to_string(), "2q^2 + 3q + 1");
        assert_eq!(QPolynomial::binomial_in_q(1, 5, 0), QPolynomial::from_int(1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(QPolynomial::zero().to_string(), "0");
        let p = QPolynomial::from_coeffs(vec![r(-1, 1), r(0, 1), r(-1, 2)]);
        assert_eq!(p.to_string(), "-1/2*q^2 - 1");
        assert_eq!(QPolynomial::q().to_string(), "q");
    }

    #[test]
    fn ring_ops_and_serde() {
        let a = QPolynomial::binomial_in_q(1, 1, 1);
        let b = &a * &a;
        assert_eq!(b.to_string(), "q^2 + 2q + 1");
        assert!((&b - &b).is_zero());
        assert_eq!(b.degree(), Some(2));
        let json = serde_json::to_string(&b.scale(&r(1, 3))).unwrap();
        assert_eq!(json, r#"["1/3","2/3","1/3"]"#);
        let back: QPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b.scale(&r(1, 3)));
    }
}
