//! One line per acceptance criterion. Run with
//! `cargo test -p soergel --test acceptance`.

mod common;

use std::time::Instant;

use common::{random_braid, rng, skein_homfly, whitehead, whitehead_homfly, words_up_to};
use soergel::bimodule::{hom_space, Bimodule};
use soergel::braid::BraidWord;
use soergel::complexes::{is_isomorphism, ChainComplex};
use soergel::dihedral::Elem;
use soergel::groebner::{HilbertSeries, PresentedModule};
use soergel::hecke::{braid_class, homfly, soergel_pairing};
use soergel::homology::{euler_check, hhh, PoincareSeries};
use soergel::indecomposable::{indecomposable, Atom};
use soergel::matrix::PolyMatrix;
use soergel::polyring::{Letter, Poly};
use soergel::serre::{
    check_pift, check_relative_serre, check_serre, check_vanishing, homology_series, sample_complexes, Status,
};
use soergel::trace::{hochschild_series, rho_endomorphism, trace_atom, trace_bimodule, trace_complex, Sign};

/// Criteria allowed to fail, each with a counterexample in the decisions log.
/// The run also fails if one of them starts passing.
const EXPECTED_RED: &[u32] = &[4];

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn golden() -> PoincareSeries {
    PoincareSeries::from_terms(&[
        (0, 1, -1, 0, 1),
        (0, 2, -3, 0, 1),
        (1, -1, -1, 0, 1),
        (1, 0, -3, 0, 1),
        (1, 0, -3, 1, 1),
        (1, 1, -5, 0, 1),
        (1, 2, -7, 0, 1),
        (2, -1, -5, 0, 1),
        (2, 0, -7, 1, 1),
    ])
}

fn c1() -> Outcome {
    let p = hhh(&whitehead(), 3).map_err(|e| e.to_string())?;
    ensure(p == golden(), || format!("got {p}"))?;
    ensure(
        p.to_string()
            == "TQ^-1 + T^2Q^-3 + A(T^-1Q^-1 + Q^-3 + Q^-3/(1-Q^2) + TQ^-5 + T^2Q^-7) + A^2(T^-1Q^-5 + Q^-7/(1-Q^2))",
        || format!("rendered {p}"),
    )?;
    Ok(p.to_string())
}

fn poly(s: &str) -> Poly {
    Poly::parse(3, s).unwrap()
}

/// `𝕜(k)`: one generator in degree `−k` killed by both roots.
fn field(k: i32) -> HilbertSeries {
    PresentedModule::cokernel(vec![-k], &PolyMatrix::from_rows(vec![vec![poly("a_s"), poly("a_t")]])).hilbert_series()
}

/// `R(k)/(α_s + α_t)`.
fn line(k: i32) -> HilbertSeries {
    PresentedModule::cokernel(vec![-k], &PolyMatrix::from_rows(vec![vec![poly("a_s + a_t")]])).hilbert_series()
}

fn c2() -> Outcome {
    let p = hhh(&whitehead(), 3).map_err(|e| e.to_string())?;
    let want: Vec<((i32, i32), HilbertSeries)> = vec![
        ((0, 1), field(1)),
        ((0, 2), field(3)),
        ((1, -1), field(1)),
        ((1, 0), field(3).add(&line(3))),
        ((1, 1), field(5)),
        ((1, 2), field(7)),
        ((2, -1), field(5)),
        ((2, 0), line(7)),
    ];
    let strands: Vec<(i32, i32)> = want.iter().map(|(k, _)| *k).collect();
    ensure(p.strands() == strands, || format!("strands {:?}", p.strands()))?;
    for ((a, t), h) in &want {
        ensure(p.strand(*a, *t) == *h, || format!("A={a} T={t}: {:?}", p.strand(*a, *t)))?;
    }
    Ok(format!("{} strands", want.len()))
}

fn c3() -> Outcome {
    let mut n = 0;
    for m in 2..=5u8 {
        for x in Elem::all(m) {
            for sign in [Sign::Minus, Sign::Plus] {
                let e = if sign == Sign::Minus { -1 } else { 1 };
                let want = if x.is_identity() {
                    Atom::regular(0)
                } else if x == Elem::simple(Letter::S) {
                    Atom::regular(e)
                } else {
                    Atom::new(Elem::simple(Letter::T), e * (x.length() as i32 - 1))
                };
                let t = trace_atom(m, x, Letter::S, sign).map_err(|e| e.to_string())?;
                let d = &t.decomposition;
                ensure(d.atoms == vec![want], || format!("m={m} {x} {sign:?}: {:?}", d.atoms))?;
                let r = t.traced.module.rank();
                ensure(
                    d.proj.mul(&d.incl) == PolyMatrix::identity(m, r) && d.incl.mul(&d.proj) == PolyMatrix::identity(m, r),
                    || format!("m={m} {x} {sign:?}: splitting maps are not inverse"),
                )?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} isomorphisms"))
}

fn c4() -> Outcome {
    let mut failed = Vec::new();
    let mut n = 0;
    for m in 2..=4u8 {
        for r in check_vanishing(m).map_err(|e| e.to_string())? {
            n += 1;
            if r.status != Status::Pass {
                failed.push(format!("{} (got {})", r.name, r.detail));
            }
        }
    }
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{n} cases"))
}

fn c5() -> Outcome {
    for m in 2..=4u8 {
        let r = check_pift(m).map_err(|e| e.to_string())?;
        ensure(r.status == Status::Pass, || format!("{}: {}", r.name, r.detail))?;
    }
    Ok("[R] for m = 2, 3, 4".into())
}

fn c6() -> Outcome {
    let mut n = 0;
    for m in 2..=3u8 {
        for (name, x) in sample_complexes(m) {
            let r = check_relative_serre(&name, &x, 17).map_err(|e| e.to_string())?;
            ensure(r.status == Status::Pass && r.witness.is_some(), || format!("{}: {}", r.name, r.detail))?;
            // Re-verify the witness independently of the search.
            let left = trace_complex(&x, Letter::S, Sign::Minus).map_err(|e| e.to_string())?.minimal_form();
            let right = trace_complex(&soergel::serre::ft_over_t(m).tensor(&x).minimal_form(), Letter::S, Sign::Plus)
                .map_err(|e| e.to_string())?
                .minimal_form();
            match soergel::complexes::complexes_isomorphic(&left, &right, 17, 8) {
                soergel::complexes::IsoResult::Yes(f) => {
                    ensure(f.check(&left, &right).is_ok() && is_isomorphism(&left, &right, &f), || {
                        format!("{}: witness does not verify", r.name)
                    })?;
                }
                _ => return Err(format!("{}: no witness on rerun", r.name)),
            }
            n += 1;
        }
    }
    Ok(format!("{n} witnesses"))
}

fn c7() -> Outcome {
    let mut n = 0;
    for m in 2..=3u8 {
        let s = sample_complexes(m);
        for (xn, x) in &s {
            for (yn, y) in &s {
                let r = check_serre(xn, x, yn, y).map_err(|e| e.to_string())?;
                ensure(r.status == Status::Pass, || format!("{}: {}", r.name, r.detail))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs"))
}

/// The minimal complex of `(st)^k` predicted degree by degree: both
/// elements of length `2k − j` in degree `j`, shifted by `j`.
fn predicted_minimal_atoms(m: u8, k: u8, positive: bool) -> Vec<(i32, Atom)> {
    let e = if positive { 1 } else { -1 };
    let mut out = Vec::new();
    for j in 0..=2 * k {
        let len = 2 * k - j;
        let labels: Vec<Elem> = if len == 0 {
            vec![Elem::E]
        } else if j == 0 {
            vec![Elem::new(m, Letter::S, len)]
        } else {
            vec![Elem::new(m, Letter::S, len), Elem::new(m, Letter::T, len)]
        };
        for x in labels {
            out.push((e * j as i32, Atom::new(x, e * j as i32)));
        }
    }
    out.sort();
    out
}

fn c8() -> Outcome {
    let mut r = rng(2024);
    for _ in 0..50 {
        let b = random_braid(&mut r, 6);
        let raw = ChainComplex::rouquier_braid(3, &b, false);
        let min = raw.minimal_form();
        let want = braid_class(3, &b);
        ensure(raw.class() == want && min.class() == want, || format!("class of {b}"))?;
    }
    let mut n = 0;
    for m in 3..=5u8 {
        for k in 1..=2u8.min(m / 2) {
            for positive in [true, false] {
                let letters = BraidWord::alternating(Letter::S, 2 * k as usize);
                let b = if positive { letters } else { BraidWord::negative(&Elem::new(m, Letter::S, 2 * k).word()) };
                let mut got = ChainComplex::rouquier_braid(m, &b, true).atom_multiset();
                got.sort();
                ensure(got == predicted_minimal_atoms(m, k, positive), || format!("m={m} {b}: {got:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("50 classes, {n} minimal complexes"))
}

fn c9() -> Outcome {
    let m = 3;
    let mut n = 0;
    for w in words_up_to(3) {
        let bs = Bimodule::bott_samelson(m, &w, 0);
        let twice = |sign| -> Result<HilbertSeries, String> {
            let a = trace_bimodule(&bs, Letter::S, sign).map_err(|e| e.to_string())?;
            let b = trace_bimodule(&a.module, Letter::T, sign).map_err(|e| e.to_string())?;
            Ok(b.module.hilbert_series())
        };
        let hh0 = hochschild_series(&bs, 0);
        ensure(hh0 == twice(Sign::Minus)?, || format!("HH0 of {w:?}"))?;
        // HH² = M(4)/(im T_s + im T_t).
        let hh2 = hochschild_series(&bs, 2);
        ensure(hh2 == twice(Sign::Plus)?.shift(-4), || format!("HH2 of {w:?}"))?;
        n += 1;
    }
    Ok(format!("{n} words"))
}

fn c10() -> Outcome {
    let cases = ["s t", "s t s t", "s s t", "s^-2 t s^-1 t"];
    for s in cases {
        let b: BraidWord = s.parse().unwrap();
        let p = hhh(&b, 3).map_err(|e| e.to_string())?;
        let rep = euler_check(&p, &b).map_err(|e| e.to_string())?;
        ensure(rep.pass(), || format!("{s}: residual {}", rep.residual.render("a", "q")))?;
        let h = homfly(&b).map_err(|e| e.to_string())?;
        ensure(h == skein_homfly(&b, 3), || format!("{s}: HOMFLY disagrees with the skein oracle"))?;
    }
    ensure(homfly(&whitehead()).map_err(|e| e.to_string())? == whitehead_homfly(), || "Whitehead HOMFLY".into())?;
    Ok(format!("{} braids", cases.len()))
}

fn c11() -> Outcome {
    // d² = 0 and homology invariance under elimination.
    let mut r = rng(99);
    for i in 0..100 {
        let m = 2 + (i % 3) as u8;
        let b = random_braid(&mut r, 4);
        let raw = ChainComplex::rouquier_braid(m, &b, false);
        let min = raw.minimal_form();
        let traced = trace_complex(&min, Letter::S, if i % 2 == 0 { Sign::Plus } else { Sign::Minus })
            .map_err(|e| e.to_string())?;
        for c in [&raw, &min, &traced, &raw.tensor(&min)] {
            c.check_d_squared().map_err(|e| format!("m={m} {b}: {e}"))?;
        }
        ensure(homology_series(&raw).unwrap() == homology_series(&min).unwrap(), || format!("m={m} {b}: homology"))?;
    }
    // Kernel and cokernel contracts.
    for m in 2..=5u8 {
        for x in Elem::all(m) {
            let b = indecomposable(m, x);
            for z in [Letter::S, Letter::T] {
                let t = rho_endomorphism(&b, z);
                let minus = trace_bimodule(&b, z, Sign::Minus).map_err(|e| e.to_string())?;
                ensure(t.mul(&minus.map).is_zero(), || format!("m={m} {x}: T·ker ≠ 0"))?;
                let plus = trace_bimodule(&b, z, Sign::Plus).map_err(|e| e.to_string())?;
                ensure(plus.map.mul(&t).is_zero(), || format!("m={m} {x}: red·T ≠ 0"))?;
            }
        }
    }
    // Soergel's hom formula.
    let words = words_up_to(3);
    let mut n = 0;
    for m in 2..=4u8 {
        for w in &words {
            for u in &words {
                let hs = hom_space(&Bimodule::bott_samelson(m, w, 0), &Bimodule::bott_samelson(m, u, 0));
                let mut degs: Vec<(i32, i64)> = Vec::new();
                for d in &hs.degrees {
                    match degs.iter_mut().find(|(e, _)| e == d) {
                        Some(x) => x.1 += 1,
                        None => degs.push((*d, 1)),
                    }
                }
                degs.sort();
                let pairing: Vec<(i32, i64)> = soergel_pairing(m, w, u).terms().iter().map(|(e, c)| (*e, *c)).collect();
                ensure(degs == pairing, || format!("m={m} {w:?} {u:?}: {degs:?} vs {pairing:?}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("100 complexes, {n} hom pairs"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "Whitehead golden series", c1),
        (2, "Whitehead strand details", c2),
        (3, "partial-trace closed forms", c3),
        (4, "vanishing suite", c4),
        (5, "pi_s_plus(FT_S/t) = [R]", c5),
        (6, "relative Serre duality", c6),
        (7, "Serre duality series", c7),
        (8, "Hecke consistency", c8),
        (9, "HH corner identities", c9),
        (10, "HOMFLY specialization", c10),
        (11, "property suites", c11),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match &out {
            Ok(d) => println!("PASS {n:>2} {name}: {d} ({secs:.1}s)"),
            Err(d) => println!("FAIL {n:>2} {name}: {d} ({secs:.1}s)"),
        }
        if out.is_ok() == EXPECTED_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
