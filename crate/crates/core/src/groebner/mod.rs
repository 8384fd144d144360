//! Ideals, Gröbner bases, and the ideal operations built on them.

mod buchberger;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use buchberger::{reduce, s_polynomial};

use crate::polycore::{parse_polynomial, Field, MonomialOrder, PolyError, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("colon by the zero polynomial")]
    ZeroDivisor,
    #[error("ideal power must be at least 1, got {0}")]
    PowerOutOfRange(u32),
    #[error("cannot eliminate {k} of {nvars} variables")]
    EliminationRange { k: usize, nvars: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl GroebnerError {
    pub fn is_budget(&self) -> bool {
        matches!(self, GroebnerError::Budget(_))
    }
}

/// Resource caps for Gröbner computations. Exceeding one aborts with
/// [`GroebnerError::Budget`], never with a wrong answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// S-pairs processed per basis computation.
    pub max_pairs: usize,
    /// Terms in any intermediate polynomial.
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_terms: 200_000,
        }
    }
}

/// An ideal given by generators, with reduced Gröbner bases cached per order.
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    budget: Budget,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            budget: self.budget,
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("vars", &self.ring.vars())
            .field("field", &self.ring.field())
            .field("gens", &self.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

impl Ideal {
    /// Zero generators are dropped; all generators must live in `ring`.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Self, GroebnerError> {
        if gens.iter().any(|g| **g.ring() != **ring) {
            return Err(PolyError::RingMismatch.into());
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            budget: Budget::default(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_strings(ring: &Arc<Ring>, gens: &[&str]) -> Result<Self, GroebnerError> {
        let gens = gens
            .iter()
            .map(|s| parse_polynomial(s, ring))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, gens)
    }

    /// The irrelevant ideal `(x_1, ..., x_d)`.
    pub fn maximal(ring: &Arc<Ring>) -> Self {
        let gens = (0..ring.nvars()).map(|i| Polynomial::var(ring, i, 1)).collect();
        Self::new(ring, gens).expect("same ring")
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// An ideal over the same ring and budget with other generators.
    fn sibling(&self, gens: Vec<Polynomial>) -> Ideal {
        Ideal {
            ring: self.ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            budget: self.budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// Reduced Gröbner basis in `order`, computed once and cached.
    pub fn groebner_basis(&self, order: MonomialOrder) -> Result<Arc<Vec<Polynomial>>, GroebnerError> {
        if let Some(b) = self.cache.lock().expect("cache lock").get(&order) {
            return Ok(b.clone());
        }
        let basis = Arc::new(buchberger::groebner(&self.gens, order, &self.budget)?);
        self.cache
            .lock()
            .expect("cache lock")
            .entry(order)
            .or_insert_with(|| basis.clone());
        Ok(basis)
    }

    pub fn normal_form(&self, f: &Polynomial, order: MonomialOrder) -> Result<Polynomial, GroebnerError> {
        if **f.ring() != *self.ring {
            return Err(PolyError::RingMismatch.into());
        }
        let basis = self.groebner_basis(order)?;
        reduce(f, &basis, order, &self.budget)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f, MonomialOrder::Grevlex)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same ideal, tested by mutual containment.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool, GroebnerError> {
        let b = self.groebner_basis(MonomialOrder::Grevlex)?;
        Ok(b.len() == 1 && b[0].is_constant())
    }
}

pub fn groebner_basis(
    ideal: &Ideal,
    order: MonomialOrder,
) -> Result<Arc<Vec<Polynomial>>, GroebnerError> {
    ideal.groebner_basis(order)
}

pub fn normal_form(
    f: &Polynomial,
    ideal: &Ideal,
    order: MonomialOrder,
) -> Result<Polynomial, GroebnerError> {
    ideal.normal_form(f, order)
}

/// `I^q`, generated by all products of `q` generators (repetition allowed).
pub fn ideal_power(ideal: &Ideal, q: u32) -> Result<Ideal, GroebnerError> {
    if q < 1 {
        return Err(GroebnerError::PowerOutOfRange(q));
    }
    let n = ideal.gens.len();
    let mut products = Vec::new();
    let mut stack = vec![(0usize, 0u32, Polynomial::one(&ideal.ring))];
    while let Some((start, depth, acc)) = stack.pop() {
        if depth == q {
            products.push(acc);
            continue;
        }
        for i in (start..n).rev() {
            stack.push((i, depth + 1, &acc * &ideal.gens[i]));
        }
    }
    let mut gens: Vec<Polynomial> = Vec::with_capacity(products.len());
    for p in products {
        if !gens.contains(&p) {
            gens.push(p);
        }
    }
    Ok(ideal.sibling(gens))
}

pub fn product(a: &Ideal, b: &Ideal) -> Result<Ideal, GroebnerError> {
    let mut gens = Vec::with_capacity(a.gens.len() * b.gens.len());
    for f in &a.gens {
        for g in &b.gens {
            gens.push(f.checked_mul(g)?);
        }
    }
    Ok(a.sibling(gens))
}

/// Adjoins a fresh variable `t` in front, returning the extended ring and
/// the index map from old to new variables.
fn with_aux_var(ring: &Arc<Ring>) -> (Arc<Ring>, Vec<usize>) {
    let mut vars = vec![ring.fresh_name("t")];
    vars.extend(ring.vars().iter().cloned());
    let ext = Ring::new(vars, ring.field()).expect("fresh name is valid");
    (ext, (1..=ring.nvars()).collect())
}

/// `I ∩ J` as the `t`-free part of `t I + (1 - t) J`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Result<Ideal, GroebnerError> {
    if **a.ring() != **b.ring() {
        return Err(PolyError::RingMismatch.into());
    }
    if a.is_zero() || b.is_zero() {
        return Ok(a.sibling(Vec::new()));
    }
    let (ext, map) = with_aux_var(&a.ring);
    let t = Polynomial::var(&ext, 0, 1);
    let one_minus_t = &Polynomial::one(&ext) - &t;
    let mut gens = Vec::with_capacity(a.gens.len() + b.gens.len());
    gens.extend(a.gens.iter().map(|f| &t * &f.embed(&ext, &map)));
    gens.extend(b.gens.iter().map(|g| &one_minus_t * &g.embed(&ext, &map)));
    let big = Ideal::new(&ext, gens)?.with_budget(a.budget);
    let elim = eliminate(&big, 1)?;
    let back: Vec<Option<usize>> = std::iter::once(None)
        .chain((0..a.ring.nvars()).map(Some))
        .collect();
    let gens = elim
        .gens
        .iter()
        .map(|g| g.restrict(&a.ring, &back).expect("eliminated t"))
        .collect();
    Ok(a.sibling(gens))
}

/// `I : g = { f : f g ∈ I }`, via `(I ∩ (g)) / g`.
pub fn colon(ideal: &Ideal, g: &Polynomial) -> Result<Ideal, GroebnerError> {
    if g.is_zero() {
        return Err(GroebnerError::ZeroDivisor);
    }
    if **g.ring() != *ideal.ring {
        return Err(PolyError::RingMismatch.into());
    }
    if g.is_constant() {
        return Ok(ideal.sibling(ideal.gens.clone()));
    }
    let principal = ideal.sibling(vec![g.clone()]);
    let inter = intersect(ideal, &principal)?;
    let gens = inter
        .gens
        .iter()
        .map(|h| h.div_exact(g).expect("elements of (g) are divisible by g"))
        .collect();
    Ok(ideal.sibling(gens))
}

/// `I : J`, the intersection of the colons by the generators of `J`.
pub fn colon_ideal(ideal: &Ideal, by: &Ideal) -> Result<Ideal, GroebnerError> {
    let mut result: Option<Ideal> = None;
    for g in &by.gens {
        let c = colon(ideal, g)?;
        result = Some(match result {
            None => c,
            Some(r) => intersect(&r, &c)?,
        });
    }
    // colon by the zero ideal is the whole ring
    Ok(result.unwrap_or_else(|| ideal.sibling(vec![Polynomial::one(&ideal.ring)])))
}

/// `I : J^∞` by iterating `I : J` until the ideal stops growing.
pub fn saturate(ideal: &Ideal, by: &Ideal) -> Result<Ideal, GroebnerError> {
    if by.is_zero() {
        return Err(GroebnerError::ZeroDivisor);
    }
    let mut current = ideal.clone();
    loop {
        if current.is_unit()? {
            return Ok(current);
        }
        let next = colon_ideal(&current, by)?;
        // current ⊆ next always holds
        if current.contains_ideal(&next)? {
            return Ok(current);
        }
        current = next;
    }
}

/// `I ∩ k[x_{k+1}, ..., x_n]` from a block-elimination basis. The result
/// stays in the same ring.
pub fn eliminate(ideal: &Ideal, k: usize) -> Result<Ideal, GroebnerError> {
    let nvars = ideal.ring.nvars();
    if k == 0 || k >= nvars {
        return Err(GroebnerError::EliminationRange { k, nvars });
    }
    let basis = ideal.groebner_basis(MonomialOrder::BlockElim(k))?;
    let gens = basis
        .iter()
        .filter(|g| !g.involves_any(0..k))
        .map(|g| g.with_order(MonomialOrder::Grevlex))
        .collect();
    Ok(ideal.sibling(gens))
}

/// Monomial ideal of leading monomials of the reduced basis.
pub fn initial_ideal(ideal: &Ideal, order: MonomialOrder) -> Result<Ideal, GroebnerError> {
    let basis = ideal.groebner_basis(order)?;
    let one = ideal.ring.field().one();
    let gens = basis
        .iter()
        .map(|g| Polynomial::monomial(&ideal.ring, g.leading_monomial().unwrap().clone(), one.clone()))
        .collect();
    Ok(ideal.sibling(gens))
}

/// On-disk ideal description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub vars: Vec<String>,
    pub field: Field,
    pub gens: Vec<String>,
}

impl IdealFile {
    pub fn from_ideal(ideal: &Ideal) -> Self {
        IdealFile {
            vars: ideal.ring.vars().to_vec(),
            field: ideal.ring.field(),
            gens: ideal.gens.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<Ideal, GroebnerError> {
        let ring = Ring::new(self.vars.clone(), self.field)?;
        let gens: Vec<&str> = self.gens.iter().map(String::as_str).collect();
        Ideal::from_strings(&ring, &gens)
    }
}
