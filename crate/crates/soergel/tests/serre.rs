use soergel::braid::BraidWord;
use soergel::complexes::{ChainComplex, Factor};
use soergel::groebner::HilbertSeries;
use soergel::hecke::braid_class;
use soergel::polyring::Letter;
use soergel::serre::{
    check_pift, check_relative_serre, check_serre, check_vanishing, ft_over_t, ft_over_t_word, full_twist,
    full_twist_inverse, full_twist_word, hom_complex, module_homology_series, sample_complexes, suite_status, Status,
};

#[test]
fn full_twists() {
    for m in 2..=4u8 {
        assert_eq!(full_twist(m).class(), braid_class(m, &full_twist_word(m)));
    }
    for m in 2..=3u8 {
        let ft = full_twist(m);
        assert_eq!(ft.tensor(&full_twist_inverse(m)).minimal_form().to_string(), "[R]", "m={m}");
        let f = ft_over_t(m);
        let inv = ChainComplex::rouquier_braid(m, &ft_over_t_word(m).inverse(), true);
        assert_eq!(f.tensor(&inv).minimal_form().to_string(), "[R]", "m={m}");
    }
    // At m = 2 the relative twist is F_s².
    let fs2 = ChainComplex::rouquier_braid(2, &BraidWord::parse("s^2").unwrap(), true);
    assert_eq!(ft_over_t(2).atom_multiset(), fs2.atom_multiset());
}

#[test]
fn endomorphisms_of_b_t() {
    let bt = ChainComplex::factor(3, Factor::Bimodule(Letter::T));
    let h = module_homology_series(&hom_complex(&bt, &bt).unwrap());
    let want = HilbertSeries::free(0).add(&HilbertSeries::free(2));
    assert_eq!(h.into_iter().filter(|(_, s)| !s.is_zero()).collect::<Vec<_>>(), vec![(0, want)]);
}

#[test]
fn rouquier_complexes_are_invertible_up_to_homotopy() {
    // End(F_s) has the homology of End(R).
    for m in 2..=3u8 {
        let fs = ChainComplex::rouquier(m, Letter::S, true);
        let r = ChainComplex::unit(m);
        let clean = |c| -> Vec<(i32, HilbertSeries)> {
            module_homology_series(&c).into_iter().filter(|(_, s)| !s.is_zero()).collect()
        };
        assert_eq!(clean(hom_complex(&fs, &fs).unwrap()), clean(hom_complex(&r, &r).unwrap()));
    }
}

#[test]
fn suites_at_three_pass() {
    let mut all = check_vanishing(3).unwrap();
    all.push(check_pift(3).unwrap());
    for (name, x) in sample_complexes(3) {
        let r = check_relative_serre(&name, &x, 1).unwrap();
        assert!(r.witness.is_some(), "{name}");
        all.push(r);
    }
    assert_eq!(suite_status(&all), Status::Pass);
}

#[test]
fn serre_pairs_at_two() {
    let samples = sample_complexes(2);
    for (xn, x) in &samples[..3] {
        for (yn, y) in &samples[..3] {
            assert_eq!(check_serre(xn, x, yn, y).unwrap().status, Status::Pass, "{xn} {yn}");
        }
    }
}

#[test]
fn report_serializes() {
    let r = check_pift(2).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v.get("witness").is_none());
}
