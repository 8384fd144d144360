//! Hilbert series, Hilbert functions and polynomials, dimension, height and
//! degree of graded quotients `R/I`, all through monomial initial ideals.

mod qpoly;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use qpoly::QPolynomial;

use crate::groebner::{initial_ideal, GroebnerError, Ideal};
use crate::polycore::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("generator {0} is not a monomial")]
    NonMonomial(String),
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
    #[error("the unit ideal has an empty quotient")]
    UnitIdeal,
    #[error("quotient is zero-dimensional as a cone")]
    ZeroDimensional,
    #[error("Hilbert polynomial did not stabilize by degree {0}")]
    Unstable(u64),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// `numerator(t) / (1 - t)^denominator_exp`, with every common `(1 - t)`
/// factor cancelled. The unit ideal has the zero numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub numerator: Vec<i128>,
    pub denominator_exp: usize,
}

impl HilbertSeries {
    fn from_kpoly(mut num: Vec<i128>, nvars: usize) -> Self {
        trim(&mut num);
        if num.is_empty() {
            return HilbertSeries {
                numerator: num,
                denominator_exp: 0,
            };
        }
        let mut k = nvars;
        while k > 0 && num.iter().sum::<i128>() == 0 {
            num = divide_one_minus_t(&num);
            k -= 1;
        }
        HilbertSeries {
            numerator: num,
            denominator_exp: k,
        }
    }

    /// Krull dimension of the quotient; −1 for the unit ideal.
    pub fn dimension(&self) -> i64 {
        if self.numerator.is_empty() {
            -1
        } else {
            self.denominator_exp as i64
        }
    }

    /// Coefficient of `t^deg` in the expanded series.
    pub fn hilbert_function(&self, deg: u64) -> i128 {
        let k = self.denominator_exp as i128;
        let mut total = 0i128;
        for (i, &c) in self.numerator.iter().enumerate() {
            let i = i as u64;
            if i > deg || c == 0 {
                continue;
            }
            let m = (deg - i) as i128;
            total += c * if k == 0 {
                (m == 0) as i128
            } else {
                binomial_i128(m + k - 1, k - 1)
            };
        }
        total
    }

    /// Value of the numerator at `t = 1`, the degree when the dimension is positive.
    pub fn numerator_at_one(&self) -> i128 {
        self.numerator.iter().sum()
    }
}

fn trim(p: &mut Vec<i128>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn divide_one_minus_t(p: &[i128]) -> Vec<i128> {
    // p = (1 - t) s  ⇔  s_i = s_{i-1} + p_i
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    let mut acc = 0i128;
    for &c in &p[..p.len() - 1] {
        acc += c;
        out.push(acc);
    }
    out
}

fn binomial_i128(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1i128;
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

type Gens = Vec<Vec<u32>>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Minimal generators in a canonical order.
fn minimalize(mut gens: Gens) -> Gens {
    gens.sort_by_key(|g| (g.iter().map(|&e| e as u64).sum::<u64>(), g.clone()));
    gens.dedup();
    let mut out: Gens = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_minus_t_pow(e: usize) -> Vec<i128> {
    let mut p = vec![0i128; e + 1];
    p[0] += 1;
    p[e] -= 1;
    p
}

/// Numerator of the series of `R/I` over `(1 - t)^nvars`, by splitting on a
/// pivot `x_v^e`: `N(I) = N(I + (x_v^e)) + t^e N(I : x_v^e)`.
fn kpoly(gens: Gens, memo: &mut HashMap<Gens, Vec<i128>>) -> Vec<i128> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Vec::new();
    }
    let nvars = gens[0].len();
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for (v, &e) in g.iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let (pivot_var, &max_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nvars > 0");
    if max_count <= 1 {
        // pairwise coprime generators form a regular sequence
        let mut p = vec![1i128];
        for g in &gens {
            let deg: u32 = g.iter().sum();
            p = poly_mul(&p, &one_minus_t_pow(deg as usize));
        }
        return p;
    }
    if let Some(p) = memo.get(&gens) {
        return p.clone();
    }

    // a pure power of the pivot variable has the strictly largest exponent,
    // so the lower median is attained by a mixed generator
    let mut exps: Vec<u32> = gens.iter().map(|g| g[pivot_var]).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];

    let mut pivot = vec![0u32; nvars];
    pivot[pivot_var] = e;
    let mut sum = gens.clone();
    sum.push(pivot);
    let quotient: Gens = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[pivot_var] = h[pivot_var].saturating_sub(e);
            h
        })
        .collect();

    let a = kpoly(sum, memo);
    let b = kpoly(quotient, memo);
    let mut out = vec![0i128; a.len().max(b.len() + e as usize)];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + e as usize] += c;
    }
    trim(&mut out);
    memo.insert(gens, out.clone());
    out
}

/// Series of `R/I` for a monomial ideal `I`, from exponent vectors.
pub fn hilbert_series_from_exponents(nvars: usize, gens: &[Vec<u32>]) -> HilbertSeries {
    let mut memo = HashMap::new();
    let num = kpoly(gens.to_vec(), &mut memo);
    HilbertSeries::from_kpoly(num, nvars)
}

/// Series of `R/I` for an ideal generated by monomials (coefficients ignored).
pub fn hilbert_series_monomial(ideal: &Ideal) -> Result<HilbertSeries, HilbertError> {
    let mut gens = Vec::with_capacity(ideal.gens().len());
    for g in ideal.gens() {
        if !g.is_monomial() {
            return Err(HilbertError::NonMonomial(g.to_string()));
        }
        gens.push(g.leading_monomial().unwrap().exponents().to_vec());
    }
    Ok(hilbert_series_from_exponents(ideal.ring().nvars(), &gens))
}

/// Series of `R/I` through the grevlex initial ideal.
pub fn hilbert_series(ideal: &Ideal) -> Result<HilbertSeries, HilbertError> {
    let init = initial_ideal(ideal, MonomialOrder::Grevlex)?;
    hilbert_series_monomial(&init)
}

pub fn hilbert_function(ideal: &Ideal, deg: u64) -> Result<i128, HilbertError> {
    Ok(hilbert_series(ideal)?.hilbert_function(deg))
}

/// Krull dimension of `R/I`; −1 for the unit ideal.
pub fn dimension(ideal: &Ideal) -> Result<i64, HilbertError> {
    Ok(hilbert_series(ideal)?.dimension())
}

/// `d − dim(R/I)`.
pub fn height(ideal: &Ideal) -> Result<i64, HilbertError> {
    let dim = dimension(ideal)?;
    if dim < 0 {
        return Err(HilbertError::UnitIdeal);
    }
    Ok(ideal.ring().nvars() as i64 - dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    pub polynomial: QPolynomial,
    /// The Hilbert function agrees with `polynomial` from this degree on.
    pub stability_bound: u64,
}

fn hilbert_polynomial_from(
    series: &HilbertSeries,
    max_gen_degree: u64,
    nvars: usize,
) -> Result<HilbertPolynomial, HilbertError> {
    let k = series.denominator_exp;
    let num_deg = series.numerator.len().saturating_sub(1) as i64;
    let s = (max_gen_degree + nvars as u64).max((num_deg - k as i64 + 1).max(0) as u64);
    let values: Vec<BigInt> = (0..k as u64 + 2)
        .map(|j| BigInt::from(series.hilbert_function(s + j)))
        .collect();
    // Newton forward differences at s: P(t) = Σ_j Δ^j(s) C(t - s, j)
    let mut diffs = values[..k.max(1)].to_vec();
    let mut poly = QPolynomial::zero();
    for j in 0..k.max(1) {
        let term = QPolynomial::binomial_in_q(1, -(s as i64), j as u32)
            .scale(&BigRational::from_integer(diffs[0].clone()));
        poly = &poly + &term;
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    for (j, v) in values.iter().enumerate() {
        if poly.eval_int((s + j as u64) as i64) != BigRational::from_integer(v.clone()) {
            return Err(HilbertError::Unstable(s));
        }
    }
    Ok(HilbertPolynomial {
        polynomial: poly,
        stability_bound: s,
    })
}

/// Hilbert polynomial of `R/I` by finite differences past the stability bound,
/// confirmed on two further values.
pub fn hilbert_polynomial(ideal: &Ideal) -> Result<HilbertPolynomial, HilbertError> {
    if !ideal.is_homogeneous() {
        return Err(HilbertError::NotHomogeneous);
    }
    let init = initial_ideal(ideal, MonomialOrder::Grevlex)?;
    let series = hilbert_series_monomial(&init)?;
    if series.dimension() < 0 {
        return Err(HilbertError::UnitIdeal);
    }
    let max_deg = init.gens().iter().filter_map(|g| g.total_degree()).max().unwrap_or(0);
    hilbert_polynomial_from(&series, max_deg, ideal.ring().nvars())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDegree {
    pub degree: u64,
    /// Krull dimension of `R/I`.
    pub cone_dimension: usize,
    /// Dimension of the projective scheme, `cone_dimension − 1`.
    pub projective_dimension: usize,
    pub convention: String,
}

/// `(dim − 1)!` times the leading coefficient of the Hilbert polynomial.
pub fn degree_of_quotient(ideal: &Ideal) -> Result<QuotientDegree, HilbertError> {
    let hp = hilbert_polynomial(ideal)?;
    let series = hilbert_series(ideal)?;
    let k = series.denominator_exp;
    if k == 0 {
        return Err(HilbertError::ZeroDimensional);
    }
    let fact: BigInt = (1..k as u64).map(BigInt::from).product();
    let lead = hp.polynomial.leading_coefficient() * BigRational::from_integer(fact);
    debug_assert_eq!(hp.polynomial.degree(), Some(k - 1));
    debug_assert!(lead.is_integer() && !lead.is_zero());
    let degree = lead.to_integer();
    assert_eq!(
        degree,
        BigInt::from(series.numerator_at_one()),
        "degree disagrees with the series numerator at 1"
    );
    Ok(QuotientDegree {
        degree: degree.to_u64().expect("positive degree"),
        cone_dimension: k,
        projective_dimension: k - 1,
        convention: "projective: (dim R/I - 1)! * leading coefficient".into(),
    })
}
