//! Property tests over random braid words.

use proptest::prelude::*;
use soergel::braid::{BraidWord, Crossing};
use soergel::complexes::ChainComplex;
use soergel::hecke::braid_class;
use soergel::polyring::Letter;
use soergel::serre::homology_series;
use soergel::trace::{trace_complex, Sign};

fn braid(max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((any::<bool>(), any::<bool>()), 0..=max_len).prop_map(|v| {
        BraidWord::new(
            v.into_iter()
                .map(|(s, positive)| Crossing { letter: if s { Letter::S } else { Letter::T }, positive })
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn d_squared_vanishes(m in 2u8..=4, b in braid(5)) {
        let raw = ChainComplex::rouquier_braid(m, &b, false);
        let min = raw.minimal_form();
        prop_assert!(raw.check_d_squared().is_ok());
        prop_assert!(min.check_d_squared().is_ok());
        prop_assert!(min.is_minimal());
        for sign in [Sign::Plus, Sign::Minus] {
            let t = trace_complex(&min, Letter::T, sign).unwrap();
            prop_assert!(t.check_d_squared().is_ok());
        }
    }

    #[test]
    fn elimination_preserves_homology(m in 2u8..=4, b in braid(4)) {
        let raw = ChainComplex::rouquier_braid(m, &b, false);
        prop_assert_eq!(homology_series(&raw).unwrap(), homology_series(&raw.minimal_form()).unwrap());
    }

    #[test]
    fn class_is_the_hecke_product(m in 2u8..=5, b in braid(6)) {
        let c = ChainComplex::rouquier_braid(m, &b, true);
        prop_assert_eq!(c.class(), braid_class(m, &b));
    }

    #[test]
    fn inverse_cancels(m in 2u8..=4, b in braid(3)) {
        let c = ChainComplex::rouquier_braid(m, &b.concat(&b.inverse()), true);
        prop_assert_eq!(c.to_string(), "[R]");
    }

    #[test]
    fn json_round_trip(m in 2u8..=4, b in braid(4)) {
        let c = ChainComplex::rouquier_braid(m, &b, true);
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back.to_dump(), c.to_dump());
    }
}

#[test]
fn braid_relation_holds_on_complexes() {
    for m in 2..=5u8 {
        let a = ChainComplex::rouquier_braid(m, &BraidWord::alternating(Letter::S, m as usize), true);
        let b = ChainComplex::rouquier_braid(m, &BraidWord::alternating(Letter::T, m as usize), true);
        assert_eq!(a.atom_multiset(), b.atom_multiset(), "m={m}");
    }
}
