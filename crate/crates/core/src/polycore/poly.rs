use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Coefficient, Field, Monomial, MonomialOrder, PolyError};

/// Variable names and coefficient field of a polynomial ring.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new(vars: Vec<String>, field: Field) -> Result<Arc<Ring>, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            let mut chars = v.chars();
            let ok = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(PolyError::BadVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::BadVariable(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(Ring { vars, field }))
    }

    /// `x1, ..., xd` over `field`.
    pub fn standard(d: usize, field: Field) -> Arc<Ring> {
        Self::with_prefix("x", d, field)
    }

    pub fn with_prefix(prefix: &str, count: usize, field: Field) -> Arc<Ring> {
        Ring::new((1..=count).map(|i| format!("{prefix}{i}")).collect(), field)
            .expect("generated names are valid")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// A variable name not already used, starting from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.var_index(&name).is_some() {
            name.push('_');
        }
        name
    }
}

/// Sparse polynomial: nonzero terms strictly decreasing in `order`.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    order: MonomialOrder,
    terms: Vec<(Monomial, Coefficient)>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            order: MonomialOrder::Grevlex,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Coefficient) -> Self {
        Self::from_terms(ring, MonomialOrder::Grevlex, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    /// The variable `x_index` raised to `exp`.
    pub fn var(ring: &Arc<Ring>, index: usize, exp: u32) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, exp), ring.field().one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Coefficient) -> Self {
        Self::from_terms(ring, MonomialOrder::Grevlex, vec![(m, c)])
    }

    /// Canonicalizes an arbitrary term list: sorts, merges like terms, drops zeros.
    pub fn from_terms(
        ring: &Arc<Ring>,
        order: MonomialOrder,
        mut terms: Vec<(Monomial, Coefficient)>,
    ) -> Self {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coefficient)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        Polynomial {
            ring: ring.clone(),
            order,
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, Coefficient)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Coefficient> {
        self.terms.first().map(|t| &t.1)
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms
            .binary_search_by(|(t, _)| self.order.cmp(m, t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.ring.field().zero())
    }

    /// Highest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Common degree of all terms, `None` if zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Whether any term involves one of the variables in `range`.
    pub fn involves_any(&self, range: std::ops::Range<usize>) -> bool {
        self.terms.iter().any(|(m, _)| m.partial_degree(range.clone()) > 0)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring.clone(),
            order,
            terms,
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let other = other.with_order(self.order);
        Ok(self.merge(&other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let other = other.with_order(self.order);
        Ok(self.merge(&other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial {
                ring: self.ring.clone(),
                order: self.order,
                terms: Vec::new(),
            });
        }
        let (small, large) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let large = large.with_order(self.order);
        let mut acc = Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms: Vec::new(),
        };
        for (m, c) in &small.terms {
            acc = acc.sub_mul_term_from(0, &-c, m, &large);
        }
        Ok(acc)
    }

    fn merge(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        let mut terms = Vec::with_capacity(self.num_terms() + other.num_terms());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match self.order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push((b.0.clone(), if subtract { -&b.1 } else { b.1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { &a.1 - &b.1 } else { &a.1 + &b.1 };
                    if !c.is_zero() {
                        terms.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        for b in &other.terms[j..] {
            terms.push((b.0.clone(), if subtract { -&b.1 } else { b.1.clone() }));
        }
        Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms,
        }
    }

    /// `self[start..] - c * m * g` for `g` sorted in the same order.
    pub(crate) fn sub_mul_term_from(
        &self,
        start: usize,
        c: &Coefficient,
        m: &Monomial,
        g: &Polynomial,
    ) -> Polynomial {
        debug_assert_eq!(self.order, g.order);
        let mut terms = Vec::with_capacity(self.num_terms() - start + g.num_terms());
        let mut i = start;
        let mut gi = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc)).peekable();
        while i < self.terms.len() {
            let Some((gm, gc)) = gi.peek() else { break };
            let a = &self.terms[i];
            match self.order.cmp(&a.0, gm) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (gm, gc) = gi.next().unwrap();
                    terms.push((gm, -&(c * gc)));
                }
                Ordering::Equal => {
                    let v = &a.1 - &(c * *gc);
                    if !v.is_zero() {
                        terms.push((a.0.clone(), v));
                    }
                    gi.next();
                    i += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        for (gm, gc) in gi {
            terms.push((gm, -&(c * gc)));
        }
        Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms,
        }
    }

    /// `self - c * m * g`; orders and rings are reconciled.
    pub fn sub_mul_term(&self, c: &Coefficient, m: &Monomial, g: &Polynomial) -> Polynomial {
        let g = g.with_order(self.order);
        self.sub_mul_term_from(0, c, m, &g)
    }

    pub fn scale(&self, c: &Coefficient) -> Polynomial {
        if c.is_zero() {
            return Polynomial {
                ring: self.ring.clone(),
                order: self.order,
                terms: Vec::new(),
            };
        }
        Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.inverse().expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring).with_order(self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        let g = g.with_order(self.order);
        let (gm, gc) = g.terms.first()?;
        let ginv = gc.inverse().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let qm = m.div(gm)?;
            let qc = c * &ginv;
            rem = rem.sub_mul_term_from(0, &qc, &qm, &g);
            quot.push((qm, qc));
        }
        Some(Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms: quot,
        })
    }

    /// Substitutes `images[i]` for variable `i`; all images share one target ring.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::LengthMismatch(images.len(), self.ring.nvars()));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.checked_mul(&images[i].pow(e))?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Moves into `target`, sending variable `i` to `mapping[i]`.
    pub fn embed(&self, target: &Arc<Ring>, mapping: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.embed(n, mapping), c.clone()))
            .collect();
        Polynomial::from_terms(target, self.order, terms)
    }

    /// Moves into `target`, keeping variable `i` as `mapping[i]`; fails if a dropped
    /// variable (`None`) occurs.
    pub fn restrict(&self, target: &Arc<Ring>, mapping: &[Option<usize>]) -> Option<Polynomial> {
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.num_terms());
        for (m, c) in &self.terms {
            let mut out = Monomial::one(n);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    out.set_exponent(mapping[i]?, e);
                }
            }
            terms.push((out, c.clone()));
        }
        Some(Polynomial::from_terms(target, self.order, terms))
    }

    pub(crate) fn from_sorted_terms(
        ring: &Arc<Ring>,
        order: MonomialOrder,
        terms: Vec<(Monomial, Coefficient)>,
    ) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            order,
            terms,
        }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.num_terms() != other.num_terms() {
            return false;
        }
        if self.order == other.order {
            self.terms == other.terms
        } else {
            self.terms == other.with_order(self.order).terms
        }
    }
}

impl Eq for Polynomial {}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// `a op b` with ring checking, the `poly_arith` entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}
