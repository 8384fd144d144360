use gfl_core::fiber::{
    image_degree, image_ideal, special_fiber_hf, verify_theorem_a, Verdict, VerifyOptions, DEFAULT_ROW_CAP,
};
use gfl_core::formulas::{binomial, hilbert_expression};
use gfl_core::gorenstein::build_example;
use gfl_core::groebner::Budget;
use gfl_core::hilbert::{degree_of_quotient, hilbert_function};
use gfl_core::polycore::{Field, Polynomial};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp() -> Field {
    Field::default_prime()
}

#[test]
fn generic_351_pipeline() {
    let ex = build_example(3, 5, 1, 42, fp(), 5, Budget::default()).unwrap();
    let gens = ex.generator_polys().unwrap();
    let image = image_ideal(&gens, Budget::default()).unwrap();
    let deg = degree_of_quotient(&image).unwrap();
    assert_eq!((deg.projective_dimension, deg.degree), (2, 4));

    // two independent routes to [F(I)]_q
    for q in 0..=4u32 {
        let special = special_fiber_hf(&gens, q, DEFAULT_ROW_CAP).unwrap() as i128;
        assert_eq!(special, hilbert_function(&image, q as u64).unwrap(), "q = {q}");
    }

    let report = verify_theorem_a(&ex, VerifyOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
    assert_eq!(report.image_degree, Some(4));
    assert_eq!(report.formula_value, BigInt::from(4));
    assert_eq!(report.birational, Some(true));
    for row in &report.rows {
        assert!(row.saturated >= BigInt::from(row.special));
    }
}

#[test]
fn image_degree_survives_linear_change_of_generators() {
    let ex = build_example(3, 5, 1, 42, fp(), 5, Budget::default()).unwrap();
    let gens = ex.generator_polys().unwrap();
    let ring = gens[0].ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    // unitriangular, hence invertible
    let mixed: Vec<Polynomial> = (0..gens.len())
        .map(|i| {
            let mut acc = gens[i].clone();
            for g in &gens[i + 1..] {
                let c = fp().from_i64(rng.random_range(1..1000));
                acc = &acc + &g.scale(&c);
            }
            assert_eq!(acc.ring(), &ring);
            acc
        })
        .collect();
    assert_eq!(image_degree(&mixed, Budget::default()).unwrap(), 4);
}

#[test]
fn three_by_three_fiber_tables() {
    for big_d in 1..=2i64 {
        let ex = build_example(3, 3, big_d, 7, fp(), 5, Budget::default()).unwrap();
        let opts = VerifyOptions {
            q_max: 3,
            ..VerifyOptions::default()
        };
        let report = verify_theorem_a(&ex, opts).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
        assert_eq!(report.image_degree, Some(1));
        assert_eq!(report.formula_value, BigInt::from(big_d * big_d));
        let expr = hilbert_expression(3, 3, big_d).unwrap().polynomial;
        let sat: Vec<BigInt> = report.rows.iter().map(|r| r.saturated.clone()).collect();
        let want: Vec<BigInt> = (1..=3).map(|q| binomial(q * big_d + 2, 2)).collect();
        assert_eq!(sat, want);
        for (q, s) in (1..=3).zip(&sat) {
            assert_eq!(expr.eval_int(q).to_integer(), *s);
        }
        if big_d == 2 {
            assert_eq!(want, [6, 15, 28].map(BigInt::from));
        }
    }
}

#[test]
fn heavier_examples() {
    // (d, n, D, image degree, multiplicity)
    for (d, n, big_d, image, e) in [(3, 5, 2, 4u64, 16), (4, 5, 1, 3, 3)] {
        let ex = build_example(d, n, big_d, 42, fp(), 5, Budget::default()).unwrap();
        let report = verify_theorem_a(&ex, VerifyOptions { q_max: 1, ..VerifyOptions::default() }).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{report:?}");
        assert_eq!(report.image_degree, Some(image));
        assert_eq!(report.formula_value, BigInt::from(e));
        assert_eq!(report.product_value, Some(e as u64));
        assert_eq!(report.birational, Some(big_d == 1));
    }
}
