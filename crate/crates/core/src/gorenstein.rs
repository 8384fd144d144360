//! Random height-three Gorenstein ideals from alternating matrices whose
//! entries are combinations of `x_k^D`, with a direct certificate of every
//! hypothesis the multiplicity formulas need.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::{check_params, delta, FormulaError};
use crate::groebner::{Budget, GroebnerError, Ideal};
use crate::hilbert::{height, HilbertError};
use crate::linalg::polynomial_rank;
use crate::polycore::{Field, Monomial, MonomialOrder, Polynomial, Ring};
use crate::polymat::{minors, submaximal_pfaffians, AlternatingMatrix, MatrixError, PolyMatrix};

pub const RNG_NAME: &str = "ChaCha8Rng";
pub const EXAMPLE_SCHEMA: &str = "gfl.example/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GorensteinError {
    #[error(transparent)]
    Params(#[from] FormulaError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("no certified example after {} attempts", .0.len())]
    Exhausted(Vec<AttemptReport>),
    #[error("every one of {} attempts was inconclusive under the budget", .0.len())]
    Inconclusive(Vec<AttemptReport>),
    #[error("bad example bundle: {0}")]
    Bundle(String),
}

/// Alternating matrix with `(i, j)` entry `Σ_k α_{ijk} x_k^D` for `i < j`,
/// drawing the `α` in `(i, j, k)` order from a ChaCha8 stream.
pub fn generic_alternating_matrix(
    d: i64,
    n: i64,
    big_d: i64,
    seed: u64,
    field: Field,
) -> Result<AlternatingMatrix, GorensteinError> {
    generic_alternating_matrix_attempt(d, n, big_d, seed, field, 0)
}

/// As [`generic_alternating_matrix`], on stream `attempt` of the seeded generator.
pub fn generic_alternating_matrix_attempt(
    d: i64,
    n: i64,
    big_d: i64,
    seed: u64,
    field: Field,
    attempt: u64,
) -> Result<AlternatingMatrix, GorensteinError> {
    check_params(d, n, big_d)?;
    let ring = Ring::standard(d as usize, field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    let powers: Vec<Monomial> = (0..d as usize)
        .map(|k| Monomial::var(d as usize, k, big_d as u32))
        .collect();
    Ok(AlternatingMatrix::from_upper(&ring, n as usize, |_, _| {
        let terms = powers.iter().map(|m| (m.clone(), field.random(&mut rng))).collect();
        Polynomial::from_terms(&ring, MonomialOrder::Grevlex, terms)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdRow {
    pub i: usize,
    /// Size of the minors, `n - i`.
    pub t: usize,
    /// `None` when the computation ran out of budget.
    pub height: Option<i64>,
    /// The row passes when `height > required_greater_than`.
    pub required_greater_than: usize,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub height: Option<i64>,
    pub height3: bool,
    pub gd_table: Vec<GdRow>,
    pub degrees_ok: bool,
    pub syzygy_ok: bool,
    /// The generators are linearly independent, so `μ(I) = n`.
    pub generators_independent: bool,
    pub budget_failures: Vec<String>,
}

impl CertReport {
    pub fn status(&self) -> CertStatus {
        let flags = self.degrees_ok && self.syzygy_ok && self.generators_independent;
        let definite_fail = !flags
            || self.height.is_some_and(|h| h != 3)
            || self.gd_table.iter().any(|r| r.height.is_some() && !r.pass);
        if definite_fail {
            CertStatus::Failed
        } else if !self.budget_failures.is_empty() {
            CertStatus::Inconclusive
        } else {
            CertStatus::Certified
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status() == CertStatus::Certified
    }
}

fn height_within(ideal: &Ideal, label: &str, failures: &mut Vec<String>) -> Option<i64> {
    match height(ideal) {
        Ok(h) => Some(h),
        Err(HilbertError::Groebner(e @ GroebnerError::Budget(_))) => {
            failures.push(format!("{label}: {e}"));
            None
        }
        // the unit ideal: larger than any requirement
        Err(HilbertError::UnitIdeal) => Some(ideal.ring().nvars() as i64 + 1),
        Err(e) => {
            failures.push(format!("{label}: {e}"));
            None
        }
    }
}

/// Checks homogeneity of degree `delta`, `φ f = 0`, independence of the
/// generators, `ht(I) = 3`, and `ht(I_{n-i}(φ)) > i` for `1 <= i < d`.
pub fn certify(
    phi: &AlternatingMatrix,
    gens: &[Polynomial],
    delta: Option<u64>,
    budget: Budget,
) -> Result<CertReport, GorensteinError> {
    let ring = phi.matrix().ring().clone();
    let n = phi.size();
    let d = ring.nvars();
    let mut failures = Vec::new();

    let degrees_ok = delta.is_some()
        && gens.len() == n
        && gens.iter().all(|g| !g.is_zero() && g.homogeneous_degree() == delta);
    let syzygy_ok = phi.matrix().mul_vector(gens)?.iter().all(Polynomial::is_zero);
    let generators_independent = polynomial_rank(gens) == n;

    let ideal = Ideal::new(&ring, gens.to_vec())
        .map_err(|e| GorensteinError::Bundle(e.to_string()))?
        .with_budget(budget);
    let h = height_within(&ideal, "ht(I)", &mut failures);

    let mut gd_table = Vec::new();
    for i in 1..d.min(n) {
        let t = n - i;
        let fitting = Ideal::new(&ring, minors(phi.matrix(), t)?)
            .map_err(|e| GorensteinError::Bundle(e.to_string()))?
            .with_budget(budget);
        let fh = height_within(&fitting, &format!("ht(I_{t}(phi))"), &mut failures);
        gd_table.push(GdRow {
            i,
            t,
            height: fh,
            required_greater_than: i,
            pass: fh.is_some_and(|v| v > i as i64),
        });
    }

    Ok(CertReport {
        height: h,
        height3: h == Some(3),
        gd_table,
        degrees_ok,
        syzygy_ok,
        generators_independent,
        budget_failures: failures,
    })
}

/// Generators of a user-supplied alternating matrix and their certificate.
/// The generator degree is read off the first generator.
pub fn certify_matrix(
    phi: &AlternatingMatrix,
    budget: Budget,
) -> Result<(Vec<Polynomial>, CertReport), GorensteinError> {
    let gens = submaximal_pfaffians(phi)?;
    let delta = gens.first().and_then(Polynomial::homogeneous_degree);
    let report = certify(phi, &gens, delta, budget)?;
    Ok((gens, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub attempt: u64,
    pub status: CertStatus,
    pub certificate: CertReport,
}

/// A certified example, in the on-disk bundle layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinExample {
    pub schema: String,
    pub version: String,
    pub d: i64,
    pub n: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    pub seed: u64,
    pub attempt: u64,
    pub rng: String,
    pub field: Field,
    pub vars: Vec<String>,
    pub phi: Vec<Vec<String>>,
    pub generators: Vec<String>,
    pub delta: i64,
    pub certificate: CertReport,
    /// Earlier attempts that did not certify.
    pub rejected_attempts: Vec<AttemptReport>,
}

impl GorensteinExample {
    pub fn ring(&self) -> Result<Arc<Ring>, GorensteinError> {
        Ring::new(self.vars.clone(), self.field).map_err(|e| GorensteinError::Bundle(e.to_string()))
    }

    pub fn matrix(&self) -> Result<AlternatingMatrix, GorensteinError> {
        let ring = self.ring()?;
        Ok(AlternatingMatrix::new(PolyMatrix::from_strings(&ring, &self.phi)?)?)
    }

    pub fn generator_polys(&self) -> Result<Vec<Polynomial>, GorensteinError> {
        let ring = self.ring()?;
        self.generators
            .iter()
            .map(|s| {
                crate::polycore::parse_polynomial(s, &ring).map_err(|e| GorensteinError::Bundle(e.to_string()))
            })
            .collect()
    }

    pub fn ideal(&self) -> Result<Ideal, GorensteinError> {
        let ring = self.ring()?;
        Ideal::new(&ring, self.generator_polys()?).map_err(|e| GorensteinError::Bundle(e.to_string()))
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_certified()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, GorensteinError> {
        let ex: GorensteinExample =
            serde_json::from_str(text).map_err(|e| GorensteinError::Bundle(e.to_string()))?;
        if ex.schema != EXAMPLE_SCHEMA {
            return Err(GorensteinError::Bundle(format!("unknown schema {:?}", ex.schema)));
        }
        Ok(ex)
    }
}

/// Samples and certifies up to `attempts` matrices on successive streams of `seed`.
pub fn build_example(
    d: i64,
    n: i64,
    big_d: i64,
    seed: u64,
    field: Field,
    attempts: u64,
    budget: Budget,
) -> Result<GorensteinExample, GorensteinError> {
    check_params(d, n, big_d)?;
    let dl = delta(n, big_d);
    let mut rejected = Vec::new();
    for attempt in 0..attempts.max(1) {
        let phi = generic_alternating_matrix_attempt(d, n, big_d, seed, field, attempt)?;
        let gens = submaximal_pfaffians(&phi)?;
        let certificate = certify(&phi, &gens, Some(dl as u64), budget)?;
        let status = certificate.status();
        if status == CertStatus::Certified {
            return Ok(GorensteinExample {
                schema: EXAMPLE_SCHEMA.into(),
                version: env!("CARGO_PKG_VERSION").into(),
                d,
                n,
                big_d,
                seed,
                attempt,
                rng: RNG_NAME.into(),
                field,
                vars: phi.matrix().ring().vars().to_vec(),
                phi: phi.matrix().to_strings(),
                generators: gens.iter().map(|g| g.to_string()).collect(),
                delta: dl,
                certificate,
                rejected_attempts: rejected,
            });
        }
        rejected.push(AttemptReport {
            attempt,
            status,
            certificate,
        });
    }
    if rejected.iter().all(|a| a.status == CertStatus::Inconclusive) {
        Err(GorensteinError::Inconclusive(rejected))
    } else {
        Err(GorensteinError::Exhausted(rejected))
    }
}

/// Independent `(d, n, D, seed)` jobs in parallel, results in input order.
pub fn build_examples(
    jobs: &[(i64, i64, i64, u64)],
    field: Field,
    attempts: u64,
    budget: Budget,
) -> Vec<Result<GorensteinExample, GorensteinError>> {
    jobs.par_iter()
        .map(|&(d, n, big_d, seed)| build_example(d, n, big_d, seed, field, attempts, budget))
        .collect()
}
