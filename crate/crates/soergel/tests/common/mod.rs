//! Oracles shared by the integration tests. Nothing here calls into the
//! Hecke algebra code it is compared against.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soergel::braid::{BraidWord, Crossing};
use soergel::hecke::Laurent2;
use soergel::polyring::Letter;

/// HOMFLY-PT of a closed braid by the skein relation
/// `v⁻¹P(L₊) − vP(L₋) = zP(L₀)`, resolving towards a descending diagram.
/// Keys are `(v, z)` exponents; the unknot is 1.
pub fn skein_homfly(b: &BraidWord, strands: usize) -> Laurent2 {
    let word: Vec<(usize, bool)> = b.letters.iter().map(|c| (position(c.letter), c.positive)).collect();
    let mut memo = HashMap::new();
    skein(&word, strands, &mut memo)
}

fn position(l: Letter) -> usize {
    match l {
        Letter::S => 0,
        Letter::T => 1,
    }
}

fn skein(word: &[(usize, bool)], n: usize, memo: &mut HashMap<Vec<(usize, bool)>, Laurent2>) -> Laurent2 {
    if let Some(p) = memo.get(word) {
        return p.clone();
    }
    let out = match first_bad_crossing(word, n) {
        None => {
            // Descending: an unlink, δ^{c−1} with δ = (v⁻¹ − v)/z.
            let delta = Laurent2::from_terms(&[((-1, -1), 1), ((1, -1), -1)]);
            delta.pow(components(word, n) as u32 - 1)
        }
        Some(k) => {
            let mut flipped = word.to_vec();
            flipped[k].1 = !flipped[k].1;
            let mut smoothed = word.to_vec();
            smoothed.remove(k);
            let pf = skein(&flipped, n, memo);
            let ps = skein(&smoothed, n, memo);
            if word[k].1 {
                // P₊ = v²P₋ + vzP₀.
                Laurent2::monomial(2, 0, 1).mul(&pf).add(&Laurent2::monomial(1, 1, 1).mul(&ps))
            } else {
                // P₋ = v⁻²P₊ − v⁻¹zP₀.
                Laurent2::monomial(-2, 0, 1).mul(&pf).sub(&Laurent2::monomial(-1, 1, 1).mul(&ps))
            }
        }
    };
    memo.insert(word.to_vec(), out.clone());
    out
}

fn permutation(word: &[(usize, bool)], n: usize) -> Vec<usize> {
    // Where the strand starting at position p ends up after one pass.
    (0..n)
        .map(|start| {
            let mut p = start;
            for &(i, _) in word {
                if p == i {
                    p = i + 1;
                } else if p == i + 1 {
                    p = i;
                }
            }
            p
        })
        .collect()
}

fn components(word: &[(usize, bool)], n: usize) -> usize {
    let perm = permutation(word, n);
    let mut seen = vec![false; n];
    let mut c = 0;
    for s in 0..n {
        if !seen[s] {
            c += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
    }
    c
}

/// Walks the components in order of their lowest starting position; the
/// first crossing met as the under strand on its first visit is bad. A
/// positive letter at `i` carries the strand moving from `i` to `i + 1`
/// over.
fn first_bad_crossing(word: &[(usize, bool)], n: usize) -> Option<usize> {
    let mut visited = vec![false; word.len()];
    let mut done = vec![false; n];
    for start in 0..n {
        if done[start] {
            continue;
        }
        let mut p = start;
        loop {
            done[p] = true;
            for (k, &(i, positive)) in word.iter().enumerate() {
                if p != i && p != i + 1 {
                    continue;
                }
                let over = (p == i) == positive;
                if !visited[k] {
                    if !over {
                        return Some(k);
                    }
                    visited[k] = true;
                }
                p = if p == i { i + 1 } else { i };
            }
            if done[p] {
                break;
            }
        }
    }
    None
}

/// `1/(vz) − v/z − z/v³ + 2z/v − vz + z³/v`.
pub fn whitehead_homfly() -> Laurent2 {
    Laurent2::from_terms(&[((-1, -1), 1), ((1, -1), -1), ((-3, 1), -1), ((-1, 1), 2), ((1, 1), -1), ((-1, 3), 1)])
}

pub fn whitehead() -> BraidWord {
    "s^-2 t s^-1 t".parse().unwrap()
}

/// A seeded random braid word with `1..=max_len` letters.
pub fn random_braid(rng: &mut ChaCha8Rng, max_len: usize) -> BraidWord {
    let len = rng.gen_range(1..=max_len);
    BraidWord {
        letters: (0..len)
            .map(|_| Crossing {
                letter: if rng.gen_bool(0.5) { Letter::S } else { Letter::T },
                positive: rng.gen_bool(0.5),
            })
            .collect(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All words over `{s, t}` of length at most `k`.
pub fn words_up_to(k: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &layer {
            for l in [Letter::S, Letter::T] {
                let mut x: Vec<Letter> = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
