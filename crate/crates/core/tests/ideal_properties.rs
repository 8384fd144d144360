use std::sync::Arc;

use gfl_core::groebner::{colon, eliminate, initial_ideal, saturate, Ideal};
use gfl_core::hilbert::{hilbert_series_monomial, HilbertSeries};
use gfl_core::polycore::{Field, Monomial, MonomialOrder, Polynomial, Ring};
use proptest::prelude::*;

fn ring() -> Arc<Ring> {
    Ring::standard(3, Field::prime(101).unwrap())
}

fn poly(r: &Arc<Ring>, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    let terms = terms
        .iter()
        .map(|(e, c)| (Monomial::from_exponents(e), r.field().from_i64(*c)))
        .collect();
    Polynomial::from_terms(r, MonomialOrder::Grevlex, terms)
}

fn homogeneous(deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    proptest::collection::vec(((0..=deg), (0..=deg), -5i64..6), 1..4).prop_map(move |raw| {
        raw.into_iter()
            .filter(|&(a, b, _)| a + b <= deg)
            .map(|(a, b, c)| (vec![a, b, deg - a - b], c))
            .collect()
    })
}

fn series(i: &Ideal, order: MonomialOrder) -> HilbertSeries {
    hilbert_series_monomial(&initial_ideal(i, order).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hilbert_function_is_order_independent(
        gens in proptest::collection::vec((1u32..4).prop_flat_map(homogeneous), 1..4)
    ) {
        let r = ring();
        let i = Ideal::new(&r, gens.iter().map(|g| poly(&r, g)).collect()).unwrap();
        let a = series(&i, MonomialOrder::Grevlex);
        let b = series(&i, MonomialOrder::Lex);
        for t in 0..10 {
            prop_assert_eq!(a.hilbert_function(t), b.hilbert_function(t));
        }
        prop_assert_eq!(a, b);
    }

    #[test]
    fn colon_and_saturation_by_membership(
        f in (1u32..3).prop_flat_map(homogeneous),
        mono in proptest::collection::vec(0u32..3, 3),
    ) {
        // I = f * (x1, x2, x3)^k monomial part: f*m*x_i for all i
        let r = ring();
        let f = poly(&r, &f);
        prop_assume!(!f.is_zero());
        let m = Polynomial::monomial(&r, Monomial::from_exponents(&mono), r.field().one());
        let fm = &f * &m;
        let gens: Vec<Polynomial> = (0..3).map(|k| &fm * &Polynomial::var(&r, k, 1)).collect();
        let i = Ideal::new(&r, gens).unwrap();

        // I : m = (f) exactly; (f) · m ⊆ I and the colon is no bigger
        let c = colon(&i, &m).unwrap();
        let expected = Ideal::new(&r, (0..3).map(|k| &f * &Polynomial::var(&r, k, 1)).collect()).unwrap();
        prop_assert!(c.same_ideal(&expected).unwrap());
        for g in c.gens() {
            prop_assert!(i.contains(&(g * &m)).unwrap());
        }

        // saturation by the maximal ideal recovers (f m)
        let s = saturate(&i, &Ideal::maximal(&r)).unwrap();
        let principal = Ideal::new(&r, vec![fm.clone()]).unwrap();
        prop_assert!(s.same_ideal(&principal).unwrap());
        prop_assert!(saturate(&s, &Ideal::maximal(&r)).unwrap().same_ideal(&s).unwrap());
    }

    #[test]
    fn elimination_is_contained_and_variable_free(
        a in proptest::collection::vec(-4i64..5, 3),
        b in proptest::collection::vec(-4i64..5, 3),
    ) {
        // parametrized curve: y_k = a_k t + b_k t^2
        let r = Ring::with_prefix("v", 4, Field::prime(101).unwrap());
        let gens: Vec<Polynomial> = (0..3)
            .map(|k| {
                let mut e1 = vec![0u32; 4];
                e1[0] = 1;
                let mut e2 = vec![0u32; 4];
                e2[0] = 2;
                let mut ey = vec![0u32; 4];
                ey[k + 1] = 1;
                poly(&r, &[(ey, 1), (e1, -a[k]), (e2, -b[k])])
            })
            .collect();
        let i = Ideal::new(&r, gens).unwrap();
        let e = eliminate(&i, 1).unwrap();
        for g in e.gens() {
            prop_assert!(!g.involves_any(0..1));
            prop_assert!(i.contains(g).unwrap());
        }
    }
}
