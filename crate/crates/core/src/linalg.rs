//! Exact rank computations over the coefficient field.

use std::collections::HashMap;

use crate::polycore::{Coefficient, Monomial, Polynomial};

/// Rank of a dense matrix by Gaussian elimination. All entries share one field.
pub fn rank(mut rows: Vec<Vec<Coefficient>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        let pivot: Vec<Coefficient> = rows[rank].iter().map(|c| c * &inv).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pc) in row.iter_mut().zip(&pivot).skip(col) {
                if !pc.is_zero() {
                    *c = &*c - &(&factor * pc);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dimension of the span of `polys` as a vector space over the coefficient field.
pub fn polynomial_rank(polys: &[Polynomial]) -> usize {
    let Some(first) = polys.first() else {
        return 0;
    };
    let zero = first.ring().field().zero();
    let mut index: HashMap<&Monomial, usize> = HashMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let rows = polys
        .iter()
        .map(|p| {
            let mut row = vec![zero.clone(); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect();
    rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_polynomial, Field, Ring};

    #[test]
    fn ranks_over_q_and_fp() {
        for field in [Field::Rational, Field::prime(5).unwrap()] {
            let r = Ring::standard(2, field);
            let p = |s: &str| parse_polynomial(s, &r).unwrap();
            assert_eq!(polynomial_rank(&[]), 0);
            assert_eq!(polynomial_rank(&[p("0")]), 0);
            assert_eq!(polynomial_rank(&[p("x1 + x2"), p("x1 - x2"), p("x1")]), 2);
            assert_eq!(polynomial_rank(&[p("x1^2"), p("x1*x2"), p("x2^2"), p("x1^2 + x2^2")]), 3);
        }
        // -4 = 1 in F5, so all three rows are proportional
        let r = Ring::standard(2, Field::prime(5).unwrap());
        let p = |s: &str| parse_polynomial(s, &r).unwrap();
        assert_eq!(polynomial_rank(&[p("x1 + x2"), p("x1 - 4*x2"), p("2*x1 + 2*x2")]), 1);
        assert_eq!(polynomial_rank(&[p("x1 + x2"), p("x1 + 6*x2")]), 1);
    }

    #[test]
    fn vandermonde_is_full_rank() {
        let f = Field::Rational;
        let rows = (1..=5)
            .map(|a: i64| (0..5).map(|k| f.from_i64(a.pow(k))).collect())
            .collect();
        assert_eq!(rank(rows), 5);
    }
}
