//! Special fiber and saturated special fiber dimensions, the image of the
//! rational map given by the generators, and the end-to-end check of the
//! multiplicity formula on certified examples.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::{binomial, hilbert_expression, image_degree_sum, thm_a_multiplicity};
use crate::gorenstein::{GorensteinError, GorensteinExample};
use crate::groebner::{eliminate, ideal_power, saturate, Budget, GroebnerError, Ideal};
use crate::hilbert::{degree_of_quotient, hilbert_function, HilbertError};
use crate::linalg::polynomial_rank;
use crate::polycore::{Polynomial, Ring};

pub const FIBER_REPORT_SCHEMA: &str = "gfl.fiber-report/1";

/// Largest number of products `special_fiber_hf` will put in one matrix.
pub const DEFAULT_ROW_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("generators must be nonzero, homogeneous, of one common degree")]
    NotEquigenerated,
    #[error("no generators")]
    Empty,
    #[error("{rows} products exceed the row cap {cap}")]
    RowCap { rows: usize, cap: usize },
    #[error("image has projective dimension {got}, expected {expected}")]
    DimensionMismatch { expected: i64, got: i64 },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Gorenstein(#[from] GorensteinError),
}

impl FiberError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            FiberError::RowCap { .. }
                | FiberError::Groebner(GroebnerError::Budget(_))
                | FiberError::Hilbert(HilbertError::Groebner(GroebnerError::Budget(_)))
        )
    }
}

fn common_degree(gens: &[Polynomial]) -> Result<u64, FiberError> {
    let first = gens.first().ok_or(FiberError::Empty)?;
    let delta = first.homogeneous_degree().ok_or(FiberError::NotEquigenerated)?;
    if gens.iter().any(|g| g.is_zero() || g.homogeneous_degree() != Some(delta)) {
        return Err(FiberError::NotEquigenerated);
    }
    Ok(delta)
}

/// `dim_k k[f_1, ..., f_n]_q`: the rank of all degree-`q` monomials in the `f_i`.
pub fn special_fiber_hf(gens: &[Polynomial], q: u32, row_cap: usize) -> Result<usize, FiberError> {
    common_degree(gens)?;
    if q == 0 {
        return Ok(1);
    }
    let n = gens.len() as i64;
    let rows = binomial(q as i64 + n - 1, n - 1).to_usize().unwrap_or(usize::MAX);
    if rows > row_cap {
        return Err(FiberError::RowCap { rows, cap: row_cap });
    }
    let mut products = Vec::with_capacity(rows);
    let mut stack = vec![(0usize, 0u32, Polynomial::one(gens[0].ring()))];
    while let Some((start, depth, acc)) = stack.pop() {
        if depth == q {
            products.push(acc);
            continue;
        }
        for i in (start..gens.len()).rev() {
            stack.push((i, depth + 1, &acc * &gens[i]));
        }
    }
    Ok(polynomial_rank(&products))
}

/// Ring `k[y_1, ..., y_n]` for the image, with names kept apart from `ring`'s.
fn target_ring(ring: &Arc<Ring>, n: usize) -> Arc<Ring> {
    let prefix = if (1..=n).any(|i| ring.var_index(&format!("y{i}")).is_some()) {
        ring.fresh_name("y")
    } else {
        "y".to_string()
    };
    Ring::with_prefix(&prefix, n, ring.field())
}

/// Kernel of `y_i ↦ f_i`, by eliminating the `x` from `(y_i - f_i)` in `k[x, y]`.
pub fn image_ideal(gens: &[Polynomial], budget: Budget) -> Result<Ideal, FiberError> {
    common_degree(gens)?;
    let source = gens[0].ring().clone();
    let d = source.nvars();
    let n = gens.len();
    let target = target_ring(&source, n);

    let mut vars = source.vars().to_vec();
    vars.extend(target.vars().iter().cloned());
    let graph_ring = Ring::new(vars, source.field()).expect("distinct names");
    let x_map: Vec<usize> = (0..d).collect();
    let graph: Vec<Polynomial> = gens
        .iter()
        .enumerate()
        .map(|(i, f)| &Polynomial::var(&graph_ring, d + i, 1) - &f.embed(&graph_ring, &x_map))
        .collect();
    let graph = Ideal::new(&graph_ring, graph)?.with_budget(budget);
    let elim = eliminate(&graph, d)?;

    let back: Vec<Option<usize>> = (0..d).map(|_| None).chain((0..n).map(Some)).collect();
    let kernel = elim
        .gens()
        .iter()
        .map(|g| g.restrict(&target, &back).expect("free of x"))
        .collect();
    Ok(Ideal::new(&target, kernel)?.with_budget(budget))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageSummary {
    pub generators: usize,
    pub degrees: Vec<u64>,
    pub projective_dimension: i64,
    pub degree: u64,
}

fn summarize_image(image: &Ideal, expected_dim: i64) -> Result<ImageSummary, FiberError> {
    let mut degrees: Vec<u64> = image.gens().iter().filter_map(Polynomial::total_degree).collect();
    degrees.sort_unstable();
    let deg = degree_of_quotient(image)?;
    let got = deg.projective_dimension as i64;
    if got != expected_dim {
        return Err(FiberError::DimensionMismatch {
            expected: expected_dim,
            got,
        });
    }
    Ok(ImageSummary {
        generators: image.gens().len(),
        degrees,
        projective_dimension: got,
        degree: deg.degree,
    })
}

/// Degree of the closure of the image in `P^{n-1}`, which must have dimension `d - 1`.
pub fn image_degree(gens: &[Polynomial], budget: Budget) -> Result<u64, FiberError> {
    let d = gens.first().ok_or(FiberError::Empty)?.ring().nvars() as i64;
    let image = image_ideal(gens, budget)?;
    Ok(summarize_image(&image, d - 1)?.degree)
}

/// `dim_k [I^q : m^∞]_{qδ} = C(qδ + d - 1, d - 1) - HF(R / (I^q : m^∞), qδ)`.
pub fn saturated_fiber_dim(ideal: &Ideal, q: u32, budget: Budget) -> Result<BigInt, FiberError> {
    let delta = common_degree(ideal.gens())?;
    let d = ideal.ring().nvars() as i64;
    let ideal = ideal.clone().with_budget(budget);
    let power = ideal_power(&ideal, q)?;
    let m = Ideal::maximal(ideal.ring()).with_budget(budget);
    let sat = saturate(&power, &m)?;
    let deg = q as u64 * delta;
    let quotient = hilbert_function(&sat, deg)?;
    Ok(binomial(deg as i64 + d - 1, d - 1) - BigInt::from(quotient))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRef {
    pub d: i64,
    pub n: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub seed: u64,
    pub attempt: u64,
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberRow {
    pub q: u32,
    pub special: usize,
    #[serde(with = "crate::serde_str")]
    pub saturated: BigInt,
    pub saturated_ge_special: bool,
    /// The asymptotic expression at `q`, asserted equal only when `d = n = 3`.
    #[serde(with = "crate::serde_str")]
    pub expression: BigInt,
    pub expression_match: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedValue {
    pub value: u64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub schema: String,
    pub example: ExampleRef,
    pub rows: Vec<FiberRow>,
    pub image: Option<ImageSummary>,
    pub image_degree: Option<u64>,
    #[serde(with = "crate::serde_str")]
    pub expected_image_degree: BigInt,
    pub map_degree: CitedValue,
    #[serde(with = "crate::serde_str")]
    pub formula_value: BigInt,
    /// `deg(F) · deg(Y)` from the cited map degree and the measured image degree.
    pub product_value: Option<u64>,
    pub birational: Option<bool>,
    pub failures: Vec<String>,
    pub budget_stops: Vec<String>,
    pub verdict: Verdict,
}

impl FiberReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub q_max: u32,
    pub budget: Budget,
    pub row_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            q_max: 2,
            budget: Budget::default(),
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

/// Measures the image degree and the fiber table of a certified example
/// and compares them with the closed forms.
pub fn verify_theorem_a(ex: &GorensteinExample, opts: VerifyOptions) -> Result<FiberReport, FiberError> {
    let gens = ex.generator_polys()?;
    let ideal = ex.ideal()?;
    let (d, n, big_d) = (ex.d, ex.n, ex.big_d);
    let e = thm_a_multiplicity(d, n, big_d).map_err(GorensteinError::from)?;
    let expected_image = image_degree_sum(d, n);
    let map_degree = BigInt::from(big_d).pow((d - 1) as u32).to_u64().expect("small");
    let expression = hilbert_expression(d, n, big_d).map_err(GorensteinError::from)?.polynomial;
    let exact_family = d == 3 && n == 3;

    let mut failures = Vec::new();
    let mut budget_stops = Vec::new();

    let image = image_ideal(&gens, opts.budget).and_then(|i| summarize_image(&i, d - 1));
    let image = match image {
        Ok(s) => Some(s),
        Err(err) if err.is_budget() => {
            budget_stops.push(format!("image: {err}"));
            None
        }
        Err(err @ FiberError::DimensionMismatch { .. }) => {
            failures.push(format!("image: {err}"));
            None
        }
        Err(err) => return Err(err),
    };
    let image_degree = image.as_ref().map(|s| s.degree);
    if let Some(deg) = image_degree {
        if BigInt::from(deg) != expected_image {
            failures.push(format!("image degree {deg}, formula gives {expected_image}"));
        }
    }

    let computed: Vec<(u32, Result<FiberRow, FiberError>)> = (1..=opts.q_max)
        .into_par_iter()
        .map(|q| {
            let row = (|| {
                let special = special_fiber_hf(&gens, q, opts.row_cap)?;
                let saturated = saturated_fiber_dim(&ideal, q, opts.budget)?;
                let value = expression.eval_int(q as i64).to_integer();
                Ok(FiberRow {
                    q,
                    special,
                    saturated_ge_special: saturated >= BigInt::from(special),
                    expression_match: exact_family.then(|| saturated == value),
                    saturated,
                    expression: value,
                })
            })();
            (q, row)
        })
        .collect();
    let mut rows = Vec::new();
    for (q, row) in computed {
        match row {
            Ok(r) => {
                if !r.saturated_ge_special {
                    failures.push(format!("q = {q}: saturated {} < special {}", r.saturated, r.special));
                }
                if r.expression_match == Some(false) {
                    failures.push(format!("q = {q}: saturated {} != expression {}", r.saturated, r.expression));
                }
                rows.push(r);
            }
            Err(err) if err.is_budget() => {
                budget_stops.push(format!("q = {q}: {err}"));
                break;
            }
            Err(err) => return Err(err),
        }
    }

    let verdict = if !failures.is_empty() {
        Verdict::Fail
    } else if !budget_stops.is_empty() || image_degree.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };

    Ok(FiberReport {
        schema: FIBER_REPORT_SCHEMA.into(),
        example: ExampleRef {
            d,
            n,
            big_d,
            seed: ex.seed,
            attempt: ex.attempt,
            field: ex.field.to_string(),
        },
        rows,
        image,
        image_degree,
        expected_image_degree: expected_image,
        map_degree: CitedValue {
            value: map_degree,
            status: "assumed (cited)".into(),
        },
        formula_value: e.clone(),
        product_value: image_degree.map(|deg| deg * map_degree),
        birational: image_degree.map(|deg| BigInt::from(deg) == e),
        failures,
        budget_stops,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gorenstein::build_example;
    use crate::polycore::{parse_polynomial, Field};

    fn polys(ring: &Arc<Ring>, items: &[&str]) -> Vec<Polynomial> {
        items.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect()
    }

    #[test]
    fn veronese_conic() {
        let r = Ring::new(vec!["x".into(), "y".into()], Field::Rational).unwrap();
        let f = polys(&r, &["x^2", "x*y", "y^2"]);
        let image = image_ideal(&f, Budget::default()).unwrap();
        let s = image.ring().clone();
        let conic = Ideal::from_strings(&s, &["y1*y3 - y2^2"]).unwrap();
        assert!(image.same_ideal(&conic).unwrap());
        assert_eq!(image_degree(&f, Budget::default()).unwrap(), 2);
        // [k[f]]_q = k[x, y]_{2q}
        for q in 0..5 {
            assert_eq!(special_fiber_hf(&f, q, DEFAULT_ROW_CAP).unwrap(), 2 * q as usize + 1);
        }
    }

    #[test]
    fn identity_map_has_zero_kernel() {
        let r = Ring::standard(3, Field::default_prime());
        let f = polys(&r, &["x1", "x2", "x3"]);
        assert!(image_ideal(&f, Budget::default()).unwrap().is_zero());
        assert_eq!(image_degree(&f, Budget::default()).unwrap(), 1);
    }

    #[test]
    fn input_validation() {
        let r = Ring::standard(2, Field::Rational);
        let f = polys(&r, &["x1^2", "x2"]);
        assert_eq!(special_fiber_hf(&f, 1, 10).unwrap_err(), FiberError::NotEquigenerated);
        assert_eq!(special_fiber_hf(&[], 1, 10).unwrap_err(), FiberError::Empty);
        let g = polys(&r, &["x1", "x2"]);
        assert!(matches!(special_fiber_hf(&g, 40, 10), Err(FiberError::RowCap { .. })));
        assert!(special_fiber_hf(&g, 40, 10).unwrap_err().is_budget());
    }

    #[test]
    fn three_generic_forms() {
        for big_d in 1..=2 {
            let ex = build_example(3, 3, big_d, 9, Field::default_prime(), 5, Budget::default()).unwrap();
            let gens = ex.generator_polys().unwrap();
            assert_eq!(special_fiber_hf(&gens, 0, DEFAULT_ROW_CAP).unwrap(), 1);
            assert_eq!(special_fiber_hf(&gens, 1, DEFAULT_ROW_CAP).unwrap(), 3);
            assert_eq!(special_fiber_hf(&gens, 2, DEFAULT_ROW_CAP).unwrap(), 6);
            assert_eq!(image_degree(&gens, Budget::default()).unwrap(), 1);
            let delta = ex.delta;
            let sat = saturated_fiber_dim(&ex.ideal().unwrap(), 1, Budget::default()).unwrap();
            assert_eq!(sat, binomial(delta + 2, 2));
        }
    }

    #[test]
    fn report_round_trips() {
        let ex = build_example(3, 3, 1, 2, Field::default_prime(), 5, Budget::default()).unwrap();
        let report = verify_theorem_a(&ex, VerifyOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        let back: FiberReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
