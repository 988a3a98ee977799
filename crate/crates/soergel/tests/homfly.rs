mod common;

use common::{random_braid, rng, skein_homfly, whitehead, whitehead_homfly};
use soergel::braid::BraidWord;
use soergel::hecke::{homfly, homfly_with_strands, Laurent2};

fn b(s: &str) -> BraidWord {
    s.parse().unwrap()
}

#[test]
fn skein_oracle_anchors() {
    assert_eq!(skein_homfly(&b("s"), 2), Laurent2::one());
    assert_eq!(skein_homfly(&b("s t"), 3), Laurent2::one());
    // Positive trefoil: 2v² − v⁴ + v²z².
    let trefoil = Laurent2::from_terms(&[((2, 0), 2), ((4, 0), -1), ((2, 2), 1)]);
    assert_eq!(skein_homfly(&b("s s s"), 2), trefoil);
    assert_eq!(skein_homfly(&b("s t s t"), 3), trefoil);
}

#[test]
fn whitehead_value() {
    assert_eq!(skein_homfly(&whitehead(), 3), whitehead_homfly());
    assert_eq!(homfly(&whitehead()).unwrap(), whitehead_homfly());
}

#[test]
fn hecke_trace_matches_skein_on_random_braids() {
    let mut r = rng(11);
    for _ in 0..60 {
        let w = random_braid(&mut r, 7);
        assert_eq!(homfly_with_strands(&w, 3).unwrap(), skein_homfly(&w, 3), "{w}");
    }
    assert_eq!(homfly(&b("s")).unwrap(), Laurent2::one());
}
