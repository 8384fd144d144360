//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of the product and chain criteria.

use std::cmp::Ordering;

use super::{Budget, GroebnerError};
use crate::polycore::{Monomial, MonomialOrder, Polynomial};

/// Bit `i` set iff variable `i` occurs; a cheap divisibility prefilter.
fn support_mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | (1 << (i % 64)))
}

struct Reducer<'a> {
    poly: &'a Polynomial,
    lm: &'a Monomial,
    mask: u64,
}

fn find_reducer<'a, 'b>(reducers: &'b [Reducer<'a>], m: &Monomial) -> Option<&'b Reducer<'a>> {
    let mask = support_mask(m);
    reducers
        .iter()
        .find(|r| r.mask & !mask == 0 && r.lm.divides(m))
}

/// Full reduction of `f` by monic `reducers`, all in `f`'s order.
fn reduce_with(
    f: &Polynomial,
    reducers: &[Reducer<'_>],
    budget: &Budget,
) -> Result<Polynomial, GroebnerError> {
    let order = f.order();
    let mut p = f.clone();
    let mut start = 0;
    let mut rem = Vec::new();
    while start < p.num_terms() {
        let (m, c) = &p.terms()[start];
        match find_reducer(reducers, m) {
            Some(r) => {
                let q = m.div(r.lm).expect("divisible");
                let c = c.clone();
                p = p.sub_mul_term_from(start, &c, &q, r.poly);
                start = 0;
                if p.num_terms() > budget.max_terms {
                    return Err(GroebnerError::Budget(format!(
                        "intermediate polynomial exceeds {} terms",
                        budget.max_terms
                    )));
                }
            }
            None => {
                rem.push(p.terms()[start].clone());
                start += 1;
            }
        }
    }
    Ok(Polynomial::from_sorted_terms(f.ring(), order, rem))
}

/// Remainder of `f` modulo `basis` (any order; `basis` need not be monic).
pub fn reduce(
    f: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Polynomial, GroebnerError> {
    let monic: Vec<Polynomial> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).monic())
        .collect();
    let reducers: Vec<Reducer<'_>> = monic
        .iter()
        .map(|g| {
            let lm = g.leading_monomial().expect("nonzero");
            Reducer {
                poly: g,
                lm,
                mask: support_mask(lm),
            }
        })
        .collect();
    reduce_with(&f.with_order(order), &reducers, budget)
}

/// `lcm/lm(f) * f / lc(f) - lcm/lm(g) * g / lc(g)`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let order = f.order();
    let f = f.monic();
    let g = g.with_order(order).monic();
    let (fm, gm) = match (f.leading_monomial(), g.leading_monomial()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Polynomial::zero(f.ring()).with_order(order),
    };
    let l = fm.lcm(&gm);
    let one = f.ring().field().one();
    f.mul_monomial(&l.div(&fm).unwrap())
        .sub_mul_term(&one, &l.div(&gm).unwrap(), &g)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State {
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().expect("basis elements are nonzero")
    }

    fn reducers(&self) -> Vec<Reducer<'_>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| {
                let lm = p.leading_monomial().expect("nonzero");
                Reducer {
                    poly: p,
                    lm,
                    mask: support_mask(lm),
                }
            })
            .collect()
    }

    fn update(&mut self, h: Polynomial) {
        let t = self.polys.len();
        let lm_h = h.leading_monomial().expect("nonzero").clone();
        self.polys.push(h);
        self.active.push(true);

        let mut c: Vec<(usize, Monomial, bool)> = (0..t)
            .filter(|&i| self.active[i])
            .map(|i| {
                let lm = self.lm(i);
                (i, lm.lcm(&lm_h), lm.is_coprime(&lm_h))
            })
            .collect();
        let mut d: Vec<(usize, Monomial, bool)> = Vec::new();
        while !c.is_empty() {
            let (i, l, coprime) = c.remove(0);
            let dominated = c.iter().chain(d.iter()).any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                d.push((i, l, coprime));
            }
        }

        let lms: Vec<Monomial> = self.polys.iter().map(|p| p.leading_monomial().unwrap().clone()).collect();
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || lms[p.i].lcm(&lm_h) == p.lcm
                || lms[p.j].lcm(&lm_h) == p.lcm
        });
        self.pairs.extend(
            d.into_iter()
                .filter(|(_, _, coprime)| !coprime)
                .map(|(i, lcm, _)| Pair { i, j: t, lcm }),
        );

        for (active, lm) in self.active.iter_mut().zip(&lms).take(t) {
            if *active && lm_h.divides(lm) {
                *active = false;
            }
        }
    }

    fn take_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (p, q) = (&self.pairs[a], &self.pairs[b]);
            p.lcm
                .degree()
                .cmp(&q.lcm.degree())
                .then_with(|| order.cmp(&p.lcm, &q.lcm))
                .then_with(|| (p.j, p.i).cmp(&(q.j, q.i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Gröbner basis of `gens` in `order`, sorted by increasing leading monomial.
pub fn groebner(
    gens: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let mut st = State {
        order,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens {
        let g = g.with_order(order);
        let h = reduce_with(&g, &st.reducers(), budget)?;
        if !h.is_zero() {
            if h.is_constant() {
                return Ok(vec![h.monic()]);
            }
            st.update(h.monic());
        }
    }

    let mut processed = 0usize;
    while let Some(pair) = st.take_pair() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(GroebnerError::Budget(format!(
                "more than {} S-pairs",
                budget.max_pairs
            )));
        }
        let s = s_polynomial(&st.polys[pair.i], &st.polys[pair.j]);
        let h = reduce_with(&s, &st.reducers(), budget)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![h.monic()]);
        }
        st.update(h.monic());
    }

    // minimal basis: active elements already have pairwise non-dividing leading monomials,
    // except for duplicates of equal leading monomials which `update` also deactivates
    let mut basis: Vec<Polynomial> = st
        .polys
        .into_iter()
        .zip(st.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    let mut reduced = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<Reducer<'_>> = basis
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, p)| {
                let lm = p.leading_monomial().unwrap();
                Reducer {
                    poly: p,
                    lm,
                    mask: support_mask(lm),
                }
            })
            .collect();
        let r = reduce_with(&basis[k], &others, budget)?;
        reduced.push(r);
    }
    basis = reduced;
    basis.sort_by(|a, b| {
        order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    debug_assert!(basis
        .windows(2)
        .all(|w| order.cmp(w[0].leading_monomial().unwrap(), w[1].leading_monomial().unwrap())
            == Ordering::Less));
    Ok(basis)
}
