//! Polynomial matrices: determinants, minors, pfaffians.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycore::{parse_polynomial, Field, PolyError, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("pfaffian needs even size, got {0}")]
    OddSize(usize),
    #[error("sub-maximal pfaffians need odd size >= 3, got {0}")]
    EvenSize(usize),
    #[error("minor size {t} out of range 1..={max}")]
    MinorOutOfRange { t: usize, max: usize },
    #[error("matrix is not alternating at ({0}, {1})")]
    NotAlternating(usize, usize),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dense row-major matrix over a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(
        ring: &Arc<Ring>,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| **e.ring() != **ring) {
            return Err(PolyError::RingMismatch.into());
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        ring: &Arc<Ring>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Parses a matrix of polynomial strings.
    pub fn from_strings(ring: &Arc<Ring>, rows: &[Vec<String>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|s| parse_polynomial(s, ring))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, r, c, entries)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// `M * v` for a column vector `v`.
    pub fn mul_vector(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = Polynomial::zero(&self.ring);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.checked_add(&self.get(i, j).checked_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

/// Square skew-symmetric matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingMatrix(PolyMatrix);

impl AlternatingMatrix {
    pub fn new(m: PolyMatrix) -> Result<Self, MatrixError> {
        if m.rows != m.cols {
            return Err(MatrixError::NotSquare(m.rows, m.cols));
        }
        for i in 0..m.rows {
            if !m.get(i, i).is_zero() {
                return Err(MatrixError::NotAlternating(i, i));
            }
            for j in i + 1..m.cols {
                if *m.get(i, j) != -m.get(j, i) {
                    return Err(MatrixError::NotAlternating(i, j));
                }
            }
        }
        Ok(AlternatingMatrix(m))
    }

    /// Builds the matrix from its strict upper triangle.
    pub fn from_upper(
        ring: &Arc<Ring>,
        n: usize,
        mut upper: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = vec![Polynomial::zero(ring); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let p = upper(i, j);
                entries[j * n + i] = -&p;
                entries[i * n + j] = p;
            }
        }
        AlternatingMatrix(PolyMatrix {
            ring: ring.clone(),
            rows: n,
            cols: n,
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        self.0.get(i, j)
    }

    /// Principal submatrix on `keep`.
    pub fn principal(&self, keep: &[usize]) -> AlternatingMatrix {
        AlternatingMatrix(self.0.submatrix(keep, keep))
    }

    /// Simultaneous row and column permutation swapping `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> AlternatingMatrix {
        let mut perm: Vec<usize> = (0..self.size()).collect();
        perm.swap(i, j);
        self.principal(&perm)
    }
}

/// Determinant: fraction-free Bareiss up to size 8, memoized cofactor expansion above.
pub fn determinant(m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare(m.rows, m.cols));
    }
    if m.rows <= 8 {
        Ok(bareiss(m))
    } else {
        Ok(cofactor_determinant(m))
    }
}

fn bareiss(m: &PolyMatrix) -> Polynomial {
    let n = m.rows;
    if n == 0 {
        return Polynomial::one(&m.ring);
    }
    let mut a: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut negate = false;
    let mut prev = Polynomial::one(&m.ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Polynomial::zero(&m.ring);
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Laplace expansion along successive rows, memoized on the set of remaining columns.
fn cofactor_determinant(m: &PolyMatrix) -> Polynomial {
    let rows: Vec<usize> = (0..m.rows).collect();
    let mut memo = HashMap::new();
    minor_memo(m, &rows, (1u64 << m.cols) - 1, &mut memo)
}

/// Determinant of rows `rows[rows.len() - |cols|..]` against the column set `cols`.
fn minor_memo(
    m: &PolyMatrix,
    rows: &[usize],
    cols: u64,
    memo: &mut HashMap<u64, Polynomial>,
) -> Polynomial {
    let k = cols.count_ones() as usize;
    if k == 0 {
        return Polynomial::one(&m.ring);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let row = rows[rows.len() - k];
    let mut acc = Polynomial::zero(&m.ring);
    let mut pos = 0;
    for j in 0..m.cols {
        if cols & (1 << j) == 0 {
            continue;
        }
        let a = m.get(row, j);
        if !a.is_zero() {
            let sub = minor_memo(m, rows, cols & !(1 << j), memo);
            let term = a * &sub;
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        pos += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// All `t`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < t - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    rec(0, n, t, &mut cur, &mut out);
    out
}

/// All `t x t` minors, row subsets outer and column subsets inner, both lexicographic.
///
/// Column-subset determinants are shared through one memo per row subset.
pub fn minors(m: &PolyMatrix, t: usize) -> Result<Vec<Polynomial>, MatrixError> {
    let max = m.rows.min(m.cols);
    if t == 0 || t > max {
        return Err(MatrixError::MinorOutOfRange { t, max });
    }
    if m.cols > 63 {
        return Err(MatrixError::Shape("more than 63 columns".into()));
    }
    let col_sets = subsets(m.cols, t);
    let mut out = Vec::with_capacity(col_sets.len() * col_sets.len());
    for rows in subsets(m.rows, t) {
        let mut memo = HashMap::new();
        for cols in &col_sets {
            let mask = cols.iter().fold(0u64, |acc, &c| acc | (1 << c));
            out.push(minor_memo(m, &rows, mask, &mut memo));
        }
    }
    Ok(out)
}

/// Pfaffian by expansion along the first remaining row, memoized on index subsets.
pub fn pfaffian(m: &AlternatingMatrix) -> Result<Polynomial, MatrixError> {
    let n = m.size();
    if n % 2 == 1 {
        return Err(MatrixError::OddSize(n));
    }
    let mut memo = HashMap::new();
    Ok(pfaffian_memo(m, full_mask(n), &mut memo))
}

fn full_mask(n: usize) -> u64 {
    assert!(n < 64, "matrix too large");
    (1u64 << n) - 1
}

fn pfaffian_memo(m: &AlternatingMatrix, set: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    let ring = m.matrix().ring();
    if set == 0 {
        return Polynomial::one(ring);
    }
    if let Some(p) = memo.get(&set) {
        return p.clone();
    }
    let first = set.trailing_zeros() as usize;
    let rest = set & !(1 << first);
    let mut acc = Polynomial::zero(ring);
    let mut pos = 0;
    for j in first + 1..m.size() {
        if rest & (1 << j) == 0 {
            continue;
        }
        let a = m.get(first, j);
        if !a.is_zero() {
            let sub = pfaffian_memo(m, rest & !(1 << j), memo);
            let term = a * &sub;
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        pos += 1;
    }
    memo.insert(set, acc.clone());
    acc
}

/// Signed sub-maximal pfaffians `f_i = (-1)^(i+1) Pf(M without row/column i)` (1-based `i`),
/// so that `M * f = 0`.
pub fn submaximal_pfaffians(m: &AlternatingMatrix) -> Result<Vec<Polynomial>, MatrixError> {
    let n = m.size();
    if n.is_multiple_of(2) || n < 3 {
        return Err(MatrixError::EvenSize(n));
    }
    let mut memo = HashMap::new();
    let full = full_mask(n);
    Ok((0..n)
        .map(|i| {
            let pf = pfaffian_memo(m, full & !(1 << i), &mut memo);
            if i % 2 == 0 {
                pf
            } else {
                -&pf
            }
        })
        .collect())
}

/// On-disk matrix description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub vars: Vec<String>,
    pub field: Field,
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &PolyMatrix) -> Self {
        MatrixFile {
            vars: m.ring.vars().to_vec(),
            field: m.ring.field(),
            entries: m.to_strings(),
        }
    }

    pub fn to_matrix(&self) -> Result<PolyMatrix, MatrixError> {
        let ring = Ring::new(self.vars.clone(), self.field)?;
        PolyMatrix::from_strings(&ring, &self.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str]) -> Arc<Ring> {
        Ring::new(names.iter().map(|s| s.to_string()).collect(), Field::Rational).unwrap()
    }

    fn p(s: &str, r: &Arc<Ring>) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    fn mat(r: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(|s| s.to_string()).collect())
            .collect();
        PolyMatrix::from_strings(r, &rows).unwrap()
    }

    #[test]
    fn small_determinants() {
        let r = ring(&["a", "b", "c", "d"]);
        assert_eq!(determinant(&mat(&r, &[&["a"]])).unwrap(), p("a", &r));
        assert_eq!(determinant(&mat(&r, &[&["a", "b"], &["c", "d"]])).unwrap(), p("a*d - b*c", &r));
        assert_eq!(
            determinant(&mat(&r, &[&["a", "b"]])),
            Err(MatrixError::NotSquare(1, 2))
        );
    }

    #[test]
    fn zero_pivot_swaps() {
        let r = ring(&["a", "b"]);
        let m = mat(&r, &[&["0", "a"], &["b", "0"]]);
        assert_eq!(determinant(&m).unwrap(), p("-a*b", &r));
    }

    #[test]
    fn minors_of_2x2() {
        let r = ring(&["a", "b", "c", "d"]);
        let m = mat(&r, &[&["a", "b"], &["c", "d"]]);
        let ones: Vec<String> = minors(&m, 1).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(ones, ["a", "b", "c", "d"]);
        assert_eq!(minors(&m, 2).unwrap(), vec![p("a*d - b*c", &r)]);
        assert!(matches!(minors(&m, 3), Err(MatrixError::MinorOutOfRange { .. })));
        assert!(matches!(minors(&m, 0), Err(MatrixError::MinorOutOfRange { .. })));
    }

    #[test]
    fn pfaffian_small() {
        let r = ring(&["a"]);
        let m = AlternatingMatrix::new(mat(&r, &[&["0", "a"], &["-a", "0"]])).unwrap();
        assert_eq!(pfaffian(&m).unwrap(), p("a", &r));
        let odd = AlternatingMatrix::from_upper(&r, 3, |_, _| p("a", &r));
        assert_eq!(pfaffian(&odd), Err(MatrixError::OddSize(3)));
    }

    #[test]
    fn zero_row_kills_pfaffian() {
        let r = ring(&["a", "b"]);
        let m = AlternatingMatrix::from_upper(&r, 6, |i, j| {
            if i == 2 || j == 2 {
                Polynomial::zero(&r)
            } else {
                p(&format!("{}*a + b", i + j), &r)
            }
        });
        assert!(pfaffian(&m).unwrap().is_zero());
    }

    #[test]
    fn three_by_three_submaximal() {
        let r = ring(&["a", "b", "c"]);
        let m = AlternatingMatrix::new(mat(
            &r,
            &[&["0", "a", "b"], &["-a", "0", "c"], &["-b", "-c", "0"]],
        ))
        .unwrap();
        let f = submaximal_pfaffians(&m).unwrap();
        assert_eq!(f, vec![p("c", &r), p("-b", &r), p("a", &r)]);
        assert!(m.matrix().mul_vector(&f).unwrap().iter().all(|x| x.is_zero()));
        let even = AlternatingMatrix::from_upper(&r, 4, |_, _| p("a", &r));
        assert_eq!(submaximal_pfaffians(&even), Err(MatrixError::EvenSize(4)));
    }

    #[test]
    fn rejects_non_alternating() {
        let r = ring(&["a"]);
        assert!(AlternatingMatrix::new(mat(&r, &[&["0", "a"], &["a", "0"]])).is_err());
        assert!(AlternatingMatrix::new(mat(&r, &[&["a", "a"], &["-a", "0"]])).is_err());
    }

    #[test]
    fn matrix_file_round_trip() {
        let r = ring(&["a", "b"]);
        let m = mat(&r, &[&["a + b", "0"], &["-3*a^2", "1/2*b"]]);
        let file = MatrixFile::from_matrix(&m);
        let json = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
        assert!(json.contains("\"field\":\"QQ\""));
    }
}
