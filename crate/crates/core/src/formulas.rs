//! Closed forms for height-three Gorenstein ideals presented by an `n × n`
//! alternating matrix with entries of degree `D` in `d` variables: Betti
//! numbers and shape of the symmetric-power complexes, the multiplicity of
//! the saturated special fiber ring, the j-multiplicity, and the asymptotic
//! Hilbert expression whose leading term carries that multiplicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::QPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{0}")]
    InvalidParameters(String),
}

fn invalid(msg: impl Into<String>) -> FormulaError {
    FormulaError::InvalidParameters(msg.into())
}

/// Binomial coefficient, zero unless `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || a < b {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut r = BigInt::one();
    for j in 0..b {
        r = r * (a - j) / (j + 1);
    }
    r
}

fn check_n(n: i64) -> Result<(), FormulaError> {
    if n < 3 {
        return Err(invalid("n must be at least 3"));
    }
    if n % 2 == 0 {
        return Err(invalid("n must be odd"));
    }
    Ok(())
}

/// Validates `d >= 3`, odd `n >= d`, `D >= 1`.
pub fn check_params(d: i64, n: i64, big_d: i64) -> Result<(), FormulaError> {
    if d < 3 {
        return Err(invalid("d must be at least 3"));
    }
    check_n(n)?;
    if n < d {
        return Err(invalid("n must be at least d"));
    }
    if big_d < 1 {
        return Err(invalid("D must be at least 1"));
    }
    Ok(())
}

/// `β_r^q = C(n+q-r, n+q-2r) · C(n+q-2r-1, n-r-1)`.
pub fn betti_number(n: i64, q: i64, r: i64) -> Result<BigInt, FormulaError> {
    check_n(n)?;
    if q < 1 {
        return Err(invalid("q must be at least 1"));
    }
    if r < 0 || r > q.min(n - 1) {
        return Err(invalid(format!("r out of range: need 0 <= r <= {}", q.min(n - 1))));
    }
    Ok(binomial(n + q - r, n + q - 2 * r) * binomial(n + q - 2 * r - 1, n - r - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeTermKind {
    /// `R(-rD)^{β_r^q}`.
    Free,
    /// The extra rank-one term present for odd `q` when `q + 1 <= n - 1`.
    Extra,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeTerm {
    pub r: i64,
    #[serde(with = "crate::serde_str")]
    pub rank: BigInt,
    pub twist: i64,
    pub kind: ShapeTermKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexShape {
    pub n: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub q: i64,
    pub terms: Vec<ShapeTerm>,
}

impl ComplexShape {
    /// `Σ_r (-1)^r rank`.
    pub fn euler_characteristic(&self) -> BigInt {
        self.terms
            .iter()
            .map(|t| if t.r % 2 == 0 { t.rank.clone() } else { -t.rank.clone() })
            .sum()
    }
}

pub fn complex_shape(n: i64, big_d: i64, q: i64) -> Result<ComplexShape, FormulaError> {
    check_n(n)?;
    if big_d < 1 {
        return Err(invalid("D must be at least 1"));
    }
    if q < 1 {
        return Err(invalid("q must be at least 1"));
    }
    let mut terms = Vec::new();
    for r in 0..=q.min(n - 1) {
        terms.push(ShapeTerm {
            r,
            rank: betti_number(n, q, r)?,
            twist: -r * big_d,
            kind: ShapeTermKind::Free,
        });
    }
    let r = q + 1;
    if q % 2 == 1 && r < n {
        // n odd and r even make (n - r + 1) D even
        terms.push(ShapeTerm {
            r,
            rank: BigInt::one(),
            twist: -((r - 1) * big_d + (n - r + 1) * big_d / 2),
            kind: ShapeTermKind::Extra,
        });
    }
    Ok(ComplexShape { n, big_d, q, terms })
}

/// `Σ_{i=0}^{⌊(n-d)/2⌋} C(n-2-2i, d-2)`.
pub fn image_degree_sum(d: i64, n: i64) -> BigInt {
    (0..=(n - d) / 2).map(|i| binomial(n - 2 - 2 * i, d - 2)).sum()
}

/// `e = D^{d-1} Σ_{i=0}^{⌊(n-d)/2⌋} C(n-2-2i, d-2)`.
pub fn thm_a_multiplicity(d: i64, n: i64, big_d: i64) -> Result<BigInt, FormulaError> {
    check_params(d, n, big_d)?;
    Ok(BigInt::from(big_d).pow((d - 1) as u32) * image_degree_sum(d, n))
}

/// `j = ½ (n-1) D^d Σ C(n-2-2i, d-2)`, evaluated directly rather than as `δ e`.
pub fn jmultiplicity(d: i64, n: i64, big_d: i64) -> Result<BigInt, FormulaError> {
    check_params(d, n, big_d)?;
    let twice = BigInt::from(n - 1) * BigInt::from(big_d).pow(d as u32) * image_degree_sum(d, n);
    debug_assert!((&twice % 2u32).is_zero());
    Ok(twice / 2)
}

/// Generator degree `δ = (n-1) D / 2`.
pub fn delta(n: i64, big_d: i64) -> i64 {
    (n - 1) * big_d / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertExpression {
    pub polynomial: QPolynomial,
    /// Every binomial in `q` is a polynomial from this `q` on.
    pub valid_from: i64,
}

/// `C(q+n-1, n-1) + (-1)^{d-1} Σ_{r=0}^{n-1} (-1)^r C(rD-1, d-1) β_r^q` as a polynomial in `q`.
pub fn hilbert_expression(d: i64, n: i64, big_d: i64) -> Result<HilbertExpression, FormulaError> {
    check_params(d, n, big_d)?;
    let mut sum = QPolynomial::zero();
    for r in 0..n {
        let c = binomial(r * big_d - 1, d - 1);
        if c.is_zero() {
            continue;
        }
        // β_r^q = C(q + n - r, r) · C(q + n - 2r - 1, n - r - 1)
        let beta = &QPolynomial::binomial_in_q(1, n - r, r as u32)
            * &QPolynomial::binomial_in_q(1, n - 2 * r - 1, (n - r - 1) as u32);
        let sign = if r % 2 == 0 { c } else { -c };
        sum = &sum + &beta.scale(&BigRational::from_integer(sign));
    }
    if (d - 1) % 2 == 1 {
        sum = -&sum;
    }
    let polynomial = &QPolynomial::binomial_in_q(1, n - 1, (n - 1) as u32) + &sum;
    Ok(HilbertExpression {
        polynomial,
        valid_from: n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub d: i64,
    pub n: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub degree: Option<usize>,
    #[serde(with = "crate::serde_str")]
    pub leading_coefficient: BigRational,
    /// Coefficients of `q^d, ..., q^{n-1}` all vanish.
    pub high_terms_vanish: bool,
    /// `(d-1)!` times the leading coefficient.
    #[serde(with = "crate::serde_str")]
    pub normalized_leading: BigRational,
    #[serde(with = "crate::serde_str")]
    pub multiplicity: BigInt,
    pub multiplicity_match: bool,
}

pub fn cancellation_check(d: i64, n: i64, big_d: i64) -> Result<CancellationReport, FormulaError> {
    let expr = hilbert_expression(d, n, big_d)?.polynomial;
    let e = thm_a_multiplicity(d, n, big_d)?;
    let degree = expr.degree();
    let leading = expr.leading_coefficient();
    let fact: BigInt = (1..d).map(BigInt::from).product();
    let normalized = &leading * BigRational::from_integer(fact);
    let high_terms_vanish = (d..n).all(|i| expr.coefficient(i as usize).is_zero());
    let multiplicity_match = degree == Some((d - 1) as usize)
        && high_terms_vanish
        && normalized == BigRational::from_integer(e.clone());
    Ok(CancellationReport {
        d,
        n,
        big_d,
        degree,
        leading_coefficient: leading,
        high_terms_vanish,
        normalized_leading: normalized,
        multiplicity: e,
        multiplicity_match,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: i64,
    pub n: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    #[serde(with = "crate::serde_str")]
    pub e: BigInt,
    #[serde(with = "crate::serde_str")]
    pub j: BigInt,
    pub degree: Option<usize>,
    #[serde(with = "crate::serde_str")]
    pub leading: BigRational,
    pub high_terms_vanish: bool,
    /// `j = δ e` between the two independent code paths.
    pub j_consistent: bool,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// All triples with `3 <= d <= d_max`, odd `n` in `d..=n_max`, `1 <= D <= big_d_max`,
/// ordered by `(d, n, D)`.
pub fn sweep_triples(d_max: i64, n_max: i64, big_d_max: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for d in 3..=d_max {
        for n in (d..=n_max).filter(|n| n % 2 == 1) {
            for big_d in 1..=big_d_max {
                out.push((d, n, big_d));
            }
        }
    }
    out
}

/// Runs [`cancellation_check`] and the j-multiplicity cross-check over the grid in parallel.
pub fn sweep(d_max: i64, n_max: i64, big_d_max: i64) -> Result<Vec<SweepRow>, FormulaError> {
    sweep_triples(d_max, n_max, big_d_max)
        .into_par_iter()
        .map(|(d, n, big_d)| {
            let c = cancellation_check(d, n, big_d)?;
            let j = jmultiplicity(d, n, big_d)?;
            let j_consistent = j == BigInt::from(delta(n, big_d)) * &c.multiplicity;
            Ok(SweepRow {
                d,
                n,
                big_d,
                e: c.multiplicity.clone(),
                j,
                degree: c.degree,
                leading: c.leading_coefficient.clone(),
                high_terms_vanish: c.high_terms_vanish,
                j_consistent,
                matches: c.multiplicity_match && j_consistent,
            })
        })
        .collect()
}
