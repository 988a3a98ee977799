//! The algebra layer below complexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soergel::bimodule::{hom_space, Bimodule};
use soergel::dihedral::Elem;
use soergel::groebner::{graded_kernel, verify_kernel, HilbertSeries, PresentedModule};
use soergel::indecomposable::{split_bott_samelson, Atom};
use soergel::matrix::PolyMatrix;
use soergel::polyring::{Letter, Mono, Poly};
use soergel::scalars::{quantum_number, FieldScalar};

#[test]
fn quantum_numbers_vanish_at_m() {
    for m in 2..=8u8 {
        assert!(quantum_number(m, m as u32).is_zero(), "m={m}");
        assert_eq!(quantum_number(m, m as u32 - 1), FieldScalar::one(m), "m={m}");
        for k in 1..m as u32 {
            assert!(!quantum_number(m, k).is_zero(), "m={m} k={k}");
        }
    }
}

#[test]
fn field_inverses() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in 2..=6u8 {
        for _ in 0..20 {
            let x = FieldScalar::random(m, &mut rng, 9);
            if x.is_zero() {
                continue;
            }
            assert_eq!(x.mul(&x.inv().unwrap()), FieldScalar::one(m));
        }
    }
}

fn random_form(m: u8, rng: &mut ChaCha8Rng, degree: i32) -> Poly {
    let terms = Mono::of_total((degree / 2) as u16)
        .map(|mono| (mono, FieldScalar::from_int(m, rng.gen_range(-2..=2))))
        .collect();
    Poly::from_terms(terms)
}

/// A homogeneous map `⊕ R·e_j → ⊕ R·f_i` with `deg e_j = c_j`, `deg f_i = r_i`.
fn random_map(m: u8, rng: &mut ChaCha8Rng, rows: &[i32], cols: &[i32]) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            if c >= r && rng.gen_bool(0.7) {
                out.set(i, j, random_form(m, rng, c - r));
            }
        }
    }
    out
}

#[test]
fn kernels_satisfy_rank_nullity() {
    // H(source) − H(ker) = H(image) = H(target) − H(coker).
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let m = 2 + (trial % 3) as u8;
        let rows: Vec<i32> = (0..rng.gen_range(1..=3)).map(|_| 2 * rng.gen_range(0..=1)).collect();
        let cols: Vec<i32> = (0..rng.gen_range(1..=4)).map(|_| 2 * rng.gen_range(1..=3)).collect();
        let f = random_map(m, &mut rng, &rows, &cols);
        let (k, kdeg) = graded_kernel(m, &f, &cols);
        verify_kernel(&f, &k).unwrap();
        let free = |ds: &[i32]| ds.iter().fold(HilbertSeries::zero(), |h, d| h.add(&HilbertSeries::free(*d)));
        let coker = PresentedModule::cokernel(rows.clone(), &f).hilbert_series();
        assert_eq!(free(&cols).sub(&free(&kdeg)), free(&rows).sub(&coker), "trial {trial}: {f:?}");
    }
}

#[test]
fn b_s_squared_splits() {
    for m in 2..=4u8 {
        let d = split_bott_samelson(m, &[Letter::S, Letter::S], 0).unwrap();
        let bs = Elem::simple(Letter::S);
        let mut atoms = d.atoms.clone();
        atoms.sort_by_key(|a| a.shift);
        assert_eq!(atoms, vec![Atom::new(bs, -1), Atom::new(bs, 1)]);
        let n = Bimodule::bott_samelson(m, &[Letter::S, Letter::S], 0).rank();
        assert_eq!(d.proj.mul(&d.incl), PolyMatrix::identity(m, n));
    }
}

#[test]
fn endomorphisms_of_b_s() {
    let b = Bimodule::b_generator(3, Letter::S);
    let h = hom_space(&b, &b);
    let mut degs = h.degrees.clone();
    degs.sort();
    assert_eq!(degs, vec![0, 2]);
    let r = Bimodule::regular(3, 0);
    // Generated by the degree-one dot map.
    assert_eq!(hom_space(&r, &b).degrees, vec![1]);
}

#[test]
fn polynomial_text_round_trip() {
    for s in ["a_s", "a_s + a_t", "2*a_s^2 - d*a_s*a_t", "0"] {
        let p = Poly::parse(4, s).unwrap();
        assert_eq!(Poly::parse(4, &p.to_string()).unwrap(), p, "{s}");
    }
}
