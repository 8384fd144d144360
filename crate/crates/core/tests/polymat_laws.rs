use std::sync::Arc;

use gfl_core::polycore::{Field, Monomial, MonomialOrder, Polynomial, Ring};
use gfl_core::polymat::{
    determinant, minors, pfaffian, submaximal_pfaffians, AlternatingMatrix, PolyMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp() -> Field {
    Field::default_prime()
}

fn random_linear(ring: &Arc<Ring>, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = ring.nvars();
    let terms = (0..n)
        .map(|k| (Monomial::var(n, k, 1), ring.field().random(rng)))
        .collect();
    Polynomial::from_terms(ring, MonomialOrder::Grevlex, terms)
}

fn random_alternating(ring: &Arc<Ring>, n: usize, rng: &mut ChaCha8Rng) -> AlternatingMatrix {
    AlternatingMatrix::from_upper(ring, n, |_, _| {
        if ring.nvars() == 0 {
            Polynomial::constant(ring, ring.field().random(rng))
        } else {
            random_linear(ring, rng)
        }
    })
}

/// Pfaffian as a signed sum over perfect matchings.
fn pfaffian_oracle(m: &AlternatingMatrix) -> Polynomial {
    fn rec(m: &AlternatingMatrix, left: Vec<usize>) -> Polynomial {
        let ring = m.matrix().ring();
        if left.is_empty() {
            return Polynomial::one(ring);
        }
        let first = left[0];
        let mut acc = Polynomial::zero(ring);
        for (pos, &j) in left.iter().enumerate().skip(1) {
            let rest: Vec<usize> = left.iter().copied().filter(|&k| k != first && k != j).collect();
            let term = m.get(first, j) * &rec(m, rest);
            // partner in position pos of the remaining list contributes (-1)^(pos-1)
            acc = if pos % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    rec(m, (0..m.size()).collect())
}

/// Determinant as a signed sum over permutations.
fn determinant_oracle(m: &PolyMatrix) -> Polynomial {
    let n = m.rows();
    let ring = m.ring();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Polynomial::zero(ring);
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = Polynomial::one(ring);
        for (i, &p) in perm.iter().enumerate() {
            term = &term * m.get(i, p);
        }
        acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    acc
}

#[test]
fn pfaffian_squared_is_determinant_on_scalars() {
    let ring = Ring::new(vec![], fp()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut count = 0;
    for _ in 0..25 {
        for n in [2usize, 4, 6, 8, 10] {
            let m = random_alternating(&ring, n, &mut rng);
            let pf = pfaffian(&m).unwrap();
            assert_eq!(&pf * &pf, determinant(m.matrix()).unwrap(), "size {n}");
            count += 1;
        }
    }
    assert!(count >= 100);
}

#[test]
fn pfaffian_and_determinant_match_oracles() {
    let ring = Ring::standard(3, fp());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2usize, 4, 6] {
        let m = random_alternating(&ring, n, &mut rng);
        let pf = pfaffian(&m).unwrap();
        assert_eq!(pf, pfaffian_oracle(&m));
        assert_eq!(&pf * &pf, determinant(m.matrix()).unwrap());
    }
    for n in 1..=5usize {
        let m = PolyMatrix::from_fn(&ring, n, n, |_, _| random_linear(&ring, &mut rng));
        assert_eq!(determinant(&m).unwrap(), determinant_oracle(&m), "size {n}");
    }
}

#[test]
fn swapping_indices_negates_pfaffian() {
    let ring = Ring::standard(2, fp());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [4usize, 6] {
        let m = random_alternating(&ring, n, &mut rng);
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        assert_eq!(pfaffian(&m.swap(i, j)).unwrap(), -&pfaffian(&m).unwrap());
    }
}

#[test]
fn submaximal_pfaffians_are_syzygies() {
    let ring = Ring::standard(3, fp());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [3usize, 5, 7, 9] {
        let m = random_alternating(&ring, n, &mut rng);
        let f = submaximal_pfaffians(&m).unwrap();
        assert_eq!(f.len(), n);
        assert!(m.matrix().mul_vector(&f).unwrap().iter().all(Polynomial::is_zero), "size {n}");
        for g in &f {
            assert_eq!(g.homogeneous_degree(), Some((n as u64 - 1) / 2));
        }
    }
}

#[test]
fn maximal_minors_of_odd_alternating_vanish() {
    // odd alternating matrices are singular; their (n-1)-minors are products of pfaffians
    let ring = Ring::standard(3, fp());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_alternating(&ring, 5, &mut rng);
    assert!(determinant(m.matrix()).unwrap().is_zero());
    let f = submaximal_pfaffians(&m).unwrap();
    let fours = minors(m.matrix(), 4).unwrap();
    // minor deleting row i and column i is f_i^2
    for i in 0..5 {
        assert_eq!(fours[i * 5 + i], &f[4 - i] * &f[4 - i]);
    }
}
