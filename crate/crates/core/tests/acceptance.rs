//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gfl_core::fiber::{image_ideal, saturated_fiber_dim, special_fiber_hf, DEFAULT_ROW_CAP};
use gfl_core::formulas::{
    binomial, cancellation_check, complex_shape, delta, hilbert_expression, jmultiplicity, sweep,
    sweep_triples, thm_a_multiplicity,
};
use gfl_core::gorenstein::build_example;
use gfl_core::groebner::Budget;
use gfl_core::hilbert::{degree_of_quotient, hilbert_function, hilbert_series_from_exponents};
use gfl_core::polycore::{Field, Monomial, MonomialOrder, Polynomial, Ring};
use gfl_core::polymat::{determinant, pfaffian, submaximal_pfaffians, AlternatingMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn identity_sweep() -> Outcome {
    let triples = sweep_triples(6, 13, 3);
    for &(d, n, big_d) in &triples {
        let c = cancellation_check(d, n, big_d).map_err(|e| e.to_string())?;
        ensure(c.degree == Some((d - 1) as usize), || format!("({d},{n},{big_d}): degree {:?}", c.degree))?;
        ensure(c.high_terms_vanish, || format!("({d},{n},{big_d}): q^{d}..q^{} do not vanish", n - 1))?;
        let sum: BigInt = (0..=(n - d) / 2).map(|i| binomial(n - 2 - 2 * i, d - 2)).sum();
        let e = BigInt::from(big_d).pow((d - 1) as u32) * sum;
        ensure(c.normalized_leading == BigRational::from_integer(e.clone()), || {
            format!("({d},{n},{big_d}): (d-1)! lead = {} but e = {e}", c.normalized_leading)
        })?;
    }
    Ok(format!("{} triples", triples.len()))
}

fn spot_values() -> Outcome {
    let p = hilbert_expression(3, 3, 2).map_err(|e| e.to_string())?.polynomial;
    let want: Vec<BigRational> = [1, 3, 2].iter().map(|&v| rat(v, 1)).collect();
    ensure(p.coeffs() == want.as_slice(), || format!("hilbert_expression(3,3,2) = {p}"))?;
    let p = hilbert_expression(3, 5, 1).map_err(|e| e.to_string())?.polynomial;
    ensure(p.degree() == Some(2) && p.leading_coefficient() == rat(2, 1), || {
        format!("hilbert_expression(3,5,1) = {p}")
    })?;
    ensure(p.coefficient(4).is_zero() && p.coefficient(3).is_zero(), || "q^4 or q^3 survives".into())?;
    ensure(rat(1, 24) - rat(1, 6) + rat(1, 8) == rat(0, 1), || "q^4 arithmetic".into())?;
    ensure(rat(5, 12) - rat(1, 6) - rat(1, 4) == rat(0, 1), || "q^3 arithmetic".into())?;
    let e = thm_a_multiplicity(3, 5, 1).map_err(|e| e.to_string())?;
    ensure(e == BigInt::from(4), || format!("e(3,5,1) = {e}"))?;
    let j = jmultiplicity(3, 5, 1).map_err(|e| e.to_string())?;
    ensure(j == BigInt::from(8), || format!("j(3,5,1) = {j}"))?;
    Ok(format!("expr(3,3,2) = {}, e = {e}, j = {j}", hilbert_expression(3, 3, 2).unwrap().polynomial))
}

fn euler() -> Outcome {
    let mut count = 0;
    for n in (3..=11).step_by(2) {
        for big_d in 1..=3 {
            for q in 1..=12 {
                let s = complex_shape(n, big_d, q).map_err(|e| e.to_string())?;
                let chi = s.euler_characteristic();
                ensure(chi == BigInt::one(), || format!("(n,D,q) = ({n},{big_d},{q}): chi = {chi}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} shapes"))
}

fn random_alternating(ring: &std::sync::Arc<Ring>, n: usize, rng: &mut ChaCha8Rng) -> AlternatingMatrix {
    let nv = ring.nvars();
    AlternatingMatrix::from_upper(ring, n, |_, _| {
        if nv == 0 {
            return Polynomial::constant(ring, ring.field().random(rng));
        }
        let terms = (0..nv).map(|k| (Monomial::var(nv, k, 1), ring.field().random(rng))).collect();
        Polynomial::from_terms(ring, MonomialOrder::Grevlex, terms)
    })
}

fn pfaffian_laws() -> Outcome {
    let field = Field::default_prime();
    let scalars = Ring::new(vec![], field).map_err(|e| e.to_string())?;
    let linear = Ring::standard(2, field);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for round in 0..22 {
        for n in (2..=10).step_by(2) {
            // scalar entries at every size, linear forms up to size 6
            let ring = if round % 2 == 1 && n <= 6 { &linear } else { &scalars };
            let m = random_alternating(ring, n, &mut rng);
            let pf = pfaffian(&m).map_err(|e| e.to_string())?;
            let det = determinant(m.matrix()).map_err(|e| e.to_string())?;
            ensure(&pf * &pf == det, || format!("Pf^2 != det at size {n}"))?;
            checked += 1;
        }
    }
    let ring = Ring::standard(3, field);
    for n in (3..=9).step_by(2) {
        let m = random_alternating(&ring, n, &mut rng);
        let f = submaximal_pfaffians(&m).map_err(|e| e.to_string())?;
        let prod = m.matrix().mul_vector(&f).map_err(|e| e.to_string())?;
        ensure(prod.iter().all(Polynomial::is_zero), || format!("phi f != 0 at size {n}"))?;
    }
    Ok(format!("{checked} Pf^2 = det checks, phi f = 0 for n = 3,5,7,9"))
}

const SEED_351: u64 = 42;

fn end_to_end_351() -> Outcome {
    let field = Field::default_prime();
    let ex = build_example(3, 5, 1, SEED_351, field, 10, Budget::default()).map_err(|e| e.to_string())?;
    let cert = &ex.certificate;
    ensure(ex.delta == 2, || format!("delta = {}", ex.delta))?;
    ensure(cert.height == Some(3), || format!("ht(I) = {:?}", cert.height))?;
    ensure(cert.gd_table.iter().all(|r| r.pass) && cert.gd_table.len() == 2, || {
        format!("G_3 table {:?}", cert.gd_table)
    })?;
    ensure(ex.is_certified(), || "certificate incomplete".into())?;
    let image = image_ideal(&ex.generator_polys().map_err(|e| e.to_string())?, Budget::default())
        .map_err(|e| e.to_string())?;
    let deg = degree_of_quotient(&image).map_err(|e| e.to_string())?;
    let e = thm_a_multiplicity(3, 5, 1).map_err(|e| e.to_string())?;
    ensure(deg.projective_dimension == 2, || format!("image dimension {}", deg.projective_dimension))?;
    ensure(BigInt::from(deg.degree) == e, || format!("image degree {} vs e = {e}", deg.degree))?;
    Ok(format!("seed {SEED_351} attempt {} over {field}, image degree {} = e", ex.attempt, deg.degree))
}

fn end_to_end_33d() -> Outcome {
    let field = Field::default_prime();
    let mut summary = Vec::new();
    for big_d in 1..=2i64 {
        let ex = build_example(3, 3, big_d, 7, field, 10, Budget::default()).map_err(|e| e.to_string())?;
        let ideal = ex.ideal().map_err(|e| e.to_string())?;
        let expr = hilbert_expression(3, 3, big_d).map_err(|e| e.to_string())?.polynomial;
        let dl = delta(3, big_d);
        let mut values = Vec::new();
        for q in 1..=3u32 {
            let sat = saturated_fiber_dim(&ideal, q, Budget::default()).map_err(|e| e.to_string())?;
            let closed = binomial(q as i64 * dl + 2, 2);
            let at_q = expr.eval_int(q as i64);
            ensure(sat == closed, || format!("D={big_d} q={q}: {sat} != C(q delta + 2, 2) = {closed}"))?;
            ensure(at_q == BigRational::from_integer(sat.clone()), || {
                format!("D={big_d} q={q}: expression gives {at_q}")
            })?;
            values.push(sat.to_string());
        }
        if big_d == 2 {
            ensure(values == ["6", "15", "28"], || format!("D=2 values {values:?}"))?;
        }
        summary.push(format!("D={big_d}: {}", values.join(",")));
    }
    Ok(summary.join("; "))
}

/// Standard monomials of each degree, counted directly.
fn brute_force(nvars: usize, gens: &[Vec<u32>], max_deg: u32) -> Vec<i128> {
    let mut counts = vec![0i128; max_deg as usize + 1];
    let mut cur = vec![0u32; nvars];
    loop {
        let deg: u32 = cur.iter().sum();
        if deg <= max_deg && !gens.iter().any(|g| g.iter().zip(&cur).all(|(a, b)| a <= b)) {
            counts[deg as usize] += 1;
        }
        // odometer over exponents 0..=max_deg
        let mut k = 0;
        loop {
            if k == nvars {
                return counts;
            }
            cur[k] += 1;
            if cur[k] <= max_deg {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

fn oracle_equivalences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ideals = 60;
    for trial in 0..ideals {
        let nvars = rng.random_range(1..=4usize);
        let ngens = rng.random_range(0..=6usize);
        let gens: Vec<Vec<u32>> = (0..ngens)
            .map(|_| loop {
                let g: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=5)).collect();
                let s: u32 = g.iter().sum();
                if (1..=5).contains(&s) {
                    break g;
                }
            })
            .collect();
        let series = hilbert_series_from_exponents(nvars, &gens);
        let got: Vec<i128> = (0..=8).map(|t| series.hilbert_function(t)).collect();
        let want = brute_force(nvars, &gens, 8);
        ensure(got == want, || format!("ideal #{trial} {gens:?}: {got:?} vs {want:?}"))?;
    }

    let ex = build_example(3, 5, 1, SEED_351, Field::default_prime(), 10, Budget::default())
        .map_err(|e| e.to_string())?;
    let gens = ex.generator_polys().map_err(|e| e.to_string())?;
    let image = image_ideal(&gens, Budget::default()).map_err(|e| e.to_string())?;
    let mut table = Vec::new();
    for q in 0..=4u32 {
        let special = special_fiber_hf(&gens, q, DEFAULT_ROW_CAP).map_err(|e| e.to_string())? as i128;
        let hf = hilbert_function(&image, q as u64).map_err(|e| e.to_string())?;
        ensure(special == hf, || format!("q = {q}: rank {special} vs HF(S/image) {hf}"))?;
        table.push(special.to_string());
    }
    Ok(format!("{ideals} monomial ideals; [F(I)]_q for q=0..4: {}", table.join(",")))
}

fn j_equals_delta_e() -> Outcome {
    let rows = sweep(6, 13, 3).map_err(|e| e.to_string())?;
    for r in &rows {
        let expected = BigInt::from(delta(r.n, r.big_d)) * &r.e;
        ensure(r.j == expected, || format!("({},{},{}): j = {} vs delta e = {expected}", r.d, r.n, r.big_d, r.j))?;
    }
    Ok(format!("{} triples", rows.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 identity sweep", identity_sweep, Duration::from_secs(10)),
        ("2 spot values", spot_values, Duration::MAX),
        ("3 Euler characteristic", euler, Duration::from_secs(1)),
        ("4 pfaffian laws", pfaffian_laws, Duration::MAX),
        ("5 end-to-end (3,5,1)", end_to_end_351, Duration::from_secs(120)),
        ("6 end-to-end (3,3,D)", end_to_end_33d, Duration::from_secs(60)),
        ("7 oracle equivalences", oracle_equivalences, Duration::MAX),
        ("8 j = delta * e", j_equals_delta_e, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:.0?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
