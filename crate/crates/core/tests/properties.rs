use proptest::prelude::*;
use quasimodular::numkernel::ratio;
use quasimodular::spaces::decompose;
use quasimodular::{GradedPoly, Monomial, QuasiForm};

/// A random combination of monomials of weight `w` and depth at most `s`.
fn arb_form(max_weight: u32) -> impl Strategy<Value = QuasiForm> {
    (1..=max_weight / 2)
        .prop_flat_map(|h| {
            let w = 2 * h;
            (Just(w), 0..=h)
        })
        .prop_flat_map(|(w, s)| {
            let basis = Monomial::of_weight(w, s);
            let n = basis.len();
            (Just(w), Just(s), Just(basis), proptest::collection::vec((-30i64..30, 1i64..7), n))
        })
        .prop_map(|(w, s, basis, cs)| {
            let poly = GradedPoly::from_terms(basis.into_iter().zip(cs.into_iter().map(|(p, q)| ratio(p, q))));
            QuasiForm::new(poly, w, s).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reassembles(f in arb_form(24)) {
        let d = decompose(&f).unwrap();
        prop_assert_eq!(&d.reassemble(), f.poly());
        for (j, m) in &d.parts {
            prop_assert_eq!(m.depth_of().unwrap_or(0), 0);
            prop_assert!(m.is_homogeneous_of(f.weight() - 2 * j));
        }
        if f.exact_depth() != Some(f.weight() / 2) {
            prop_assert!(d.line.is_none());
        }
    }

    #[test]
    fn expansion_is_a_homomorphism(f in arb_form(12), g in arb_form(12)) {
        let order = 30;
        let prod = f.mul(&g).to_qseries(order);
        prop_assert_eq!(prod, &f.to_qseries(order) * &g.to_qseries(order));
        if f.weight() == g.weight() {
            let sum = f.add(&g).unwrap().to_qseries(order);
            prop_assert_eq!(sum, &f.to_qseries(order) + &g.to_qseries(order));
        }
    }

    #[test]
    fn derivation_commutes_with_expansion(f in arb_form(16)) {
        let order = 30;
        prop_assert_eq!(f.derive().to_qseries(order), f.to_qseries(order).derive());
    }
}

#[test]
fn top_depth_uses_the_line() {
    for w in [2u32, 4, 8, 24] {
        let f = QuasiForm::e2().pow(w / 2);
        let d = decompose(&f).unwrap();
        assert!(d.line.is_some(), "weight {w}");
        assert_eq!(&d.reassemble(), f.poly());
    }
}
