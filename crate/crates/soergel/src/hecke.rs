//! The dihedral Hecke algebra over `ℤ[v, v⁻¹]`, Kazhdan–Lusztig bases,
//! Grothendieck classes, and the HOMFLY-PT polynomial of 3-strand braids.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::dihedral::Elem;
use crate::error::{Error, Result};
use crate::polyring::Letter;

/// A Laurent polynomial in one variable with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Laurent {
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn one() -> Laurent {
        Laurent::monomial(0, 1)
    }

    pub fn monomial(e: i32, c: i64) -> Laurent {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    pub fn from_terms(pairs: &[(i32, i64)]) -> Laurent {
        pairs.iter().fold(Laurent::zero(), |acc, &(e, c)| acc.add(&Laurent::monomial(e, c)))
    }

    pub fn terms(&self) -> &BTreeMap<i32, i64> {
        &self.terms
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(*e).or_insert(0);
            *v += c;
            if *v == 0 {
                terms.remove(e);
            }
        }
        Laurent { terms }
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out = out.add(&Laurent::monomial(e1 + e2, c1 * c2));
            }
        }
        out
    }

    pub fn shift(&self, k: i32) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, *c)).collect() }
    }

    /// Renders with the given variable name, highest power first.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (sign, a) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("v"))
    }
}

/// `Σ_w c_w δ_w` in the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    pub m: u8,
    terms: BTreeMap<Elem, Laurent>,
}

impl HeckeElement {
    pub fn zero(m: u8) -> HeckeElement {
        HeckeElement { m, terms: BTreeMap::new() }
    }

    pub fn one(m: u8) -> HeckeElement {
        HeckeElement::delta(m, Elem::E)
    }

    pub fn delta(m: u8, w: Elem) -> HeckeElement {
        HeckeElement::zero(m).add_term(w, &Laurent::one())
    }

    pub fn terms(&self) -> &BTreeMap<Elem, Laurent> {
        &self.terms
    }

    pub fn coeff(&self, w: Elem) -> Laurent {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    fn add_term(mut self, w: Elem, c: &Laurent) -> HeckeElement {
        let v = self.terms.entry(w).or_default().add(c);
        if v.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, v);
        }
        self
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        o.terms.iter().fold(self.clone(), |acc, (w, c)| acc.add_term(*w, c))
    }

    pub fn sub(&self, o: &HeckeElement) -> HeckeElement {
        self.add(&o.scale(&Laurent::monomial(0, -1)))
    }

    pub fn scale(&self, c: &Laurent) -> HeckeElement {
        let terms = self.terms.iter().map(|(w, x)| (*w, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect();
        HeckeElement { m: self.m, terms }
    }

    /// Right multiplication by `δ_z`, using `δ_z² = (v⁻¹ − v)δ_z + 1`.
    pub fn mul_delta_letter(&self, z: Letter) -> HeckeElement {
        let m = self.m;
        let mut out = HeckeElement::zero(m);
        let quad = Laurent::from_terms(&[(-1, 1), (1, -1)]);
        for (w, c) in &self.terms {
            let wz = w.mul_letter(m, z);
            if w.has_right_descent(m, z) {
                out = out.add_term(*w, &c.mul(&quad)).add_term(wz, c);
            } else {
                out = out.add_term(wz, c);
            }
        }
        out
    }

    /// Right multiplication by `δ_z⁻¹ = δ_z + v − v⁻¹`.
    pub fn mul_delta_letter_inv(&self, z: Letter) -> HeckeElement {
        self.mul_delta_letter(z).add(&self.scale(&Laurent::from_terms(&[(1, 1), (-1, -1)])))
    }

    pub fn mul(&self, o: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(self.m);
        for (w, c) in &o.terms {
            let mut part = self.clone();
            for z in w.word() {
                part = part.mul_delta_letter(z);
            }
            out = out.add(&part.scale(c));
        }
        out
    }

    /// Coefficient of `δ_e`.
    pub fn epsilon(&self) -> Laurent {
        self.coeff(Elem::E)
    }

    /// Coordinates in the Kazhdan–Lusztig basis.
    pub fn to_kl(&self) -> BTreeMap<Elem, Laurent> {
        let m = self.m;
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        while let Some((&w, c)) = rest.terms.iter().max_by_key(|(w, _)| w.len).map(|(w, c)| (w, c.clone())) {
            rest = rest.sub(&kl_basis(m, w).scale(&c));
            out.insert(w, c);
        }
        out
    }
}

/// `b_w = Σ_{y ≤ w} v^{ℓ(w)−ℓ(y)} δ_y`.
pub fn kl_basis(m: u8, w: Elem) -> HeckeElement {
    Elem::all(m)
        .into_iter()
        .filter(|y| y.leq(w))
        .fold(HeckeElement::zero(m), |acc, y| acc.add_term(y, &Laurent::monomial((w.len - y.len) as i32, 1)))
}

/// `δ_w = Σ_{y ≤ w} (−v)^{ℓ(w)−ℓ(y)} b_y`, as KL coordinates.
pub fn standard_in_kl(m: u8, w: Elem) -> BTreeMap<Elem, Laurent> {
    Elem::all(m)
        .into_iter()
        .filter(|y| y.leq(w))
        .map(|y| {
            let k = (w.len - y.len) as i32;
            (y, Laurent::monomial(k, if k % 2 == 0 { 1 } else { -1 }))
        })
        .collect()
}

/// `b_s + v`-products: the class of a Bott–Samelson bimodule.
pub fn bs_class(m: u8, word: &[Letter]) -> HeckeElement {
    word.iter().fold(HeckeElement::one(m), |acc, &z| acc.mul(&kl_basis(m, Elem::simple(z))))
}

/// Product of `δ_x^{±1}` over the braid word.
pub fn braid_class(m: u8, b: &BraidWord) -> HeckeElement {
    b.letters.iter().fold(HeckeElement::one(m), |acc, c| {
        if c.positive {
            acc.mul_delta_letter(c.letter)
        } else {
            acc.mul_delta_letter_inv(c.letter)
        }
    })
}

/// `ε(b_{w̲ reversed} · b_{u̲})`; equals the graded rank of
/// `Hom(BS(w̲), BS(u̲))` under `v ↦ Q`.
pub fn soergel_pairing(m: u8, w: &[Letter], u: &[Letter]) -> Laurent {
    let rev: Vec<Letter> = w.iter().rev().copied().collect();
    bs_class(m, &rev).mul(&bs_class(m, u)).epsilon()
}

/// A Laurent polynomial in two variables `(x, y)` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Laurent2 {
    terms: BTreeMap<(i32, i32), i64>,
}

impl Laurent2 {
    pub fn zero() -> Laurent2 {
        Laurent2::default()
    }

    pub fn one() -> Laurent2 {
        Laurent2::monomial(0, 0, 1)
    }

    pub fn monomial(ex: i32, ey: i32, c: i64) -> Laurent2 {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((ex, ey), c);
        }
        Laurent2 { terms }
    }

    pub fn from_terms(pairs: &[((i32, i32), i64)]) -> Laurent2 {
        pairs.iter().fold(Laurent2::zero(), |acc, &((a, b), c)| acc.add(&Laurent2::monomial(a, b, c)))
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Laurent2) -> Laurent2 {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(*e).or_insert(0);
            *v += c;
            if *v == 0 {
                terms.remove(e);
            }
        }
        Laurent2 { terms }
    }

    pub fn neg(&self) -> Laurent2 {
        Laurent2 { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, o: &Laurent2) -> Laurent2 {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent2) -> Laurent2 {
        let mut terms: BTreeMap<(i32, i32), i64> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                *terms.entry((a1 + a2, b1 + b2)).or_insert(0) += c1 * c2;
            }
        }
        terms.retain(|_, c| *c != 0);
        Laurent2 { terms }
    }

    pub fn pow(&self, k: u32) -> Laurent2 {
        (0..k).fold(Laurent2::one(), |acc, _| acc.mul(self))
    }

    pub fn min_exponents(&self) -> (i32, i32) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    pub fn render(&self, x: &str, y: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        // Highest y power first, then highest x power.
        let mut keys: Vec<&(i32, i32)> = self.terms.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse((k.1, k.0)));
        for k in keys {
            let c = self.terms[k];
            let mut mono = Vec::new();
            for (v, e) in [(x, k.0), (y, k.1)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            let body = if mono.is_empty() {
                c.abs().to_string()
            } else if c.abs() == 1 {
                mono.join("*")
            } else {
                format!("{}*{}", c.abs(), mono.join("*"))
            };
            parts.push((c < 0, body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Elements of the type-A Hecke algebra `H_3` (`T_i² = z T_i + 1`), with
/// coefficients in `ℤ[z]` stored as `Laurent` in `z`. Basis indexed by the
/// reduced words `e, 1, 2, 12, 21, 121`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct H3 {
    coeffs: [Laurent; 6],
}

const H3_WORDS: [&[usize]; 6] = [&[], &[1], &[2], &[1, 2], &[2, 1], &[1, 2, 1]];

fn h3_index(word: &[usize]) -> usize {
    match word {
        [] => 0,
        [1] => 1,
        [2] => 2,
        [1, 2] => 3,
        [2, 1] => 4,
        [1, 2, 1] | [2, 1, 2] => 5,
        _ => unreachable!("not a reduced word in S_3"),
    }
}

/// `w · s_i` as `(index, length went up)`.
fn h3_right(w: usize, i: usize) -> (usize, bool) {
    let word = H3_WORDS[w];
    if word.last() == Some(&i) {
        return (h3_index(&word[..word.len() - 1]), false);
    }
    if w == 5 {
        // s1 s2 s1 = s2 s1 s2 ends in both letters.
        let shorter: &[usize] = if i == 1 { &[1, 2] } else { &[2, 1] };
        return (h3_index(shorter), false);
    }
    let mut longer = word.to_vec();
    longer.push(i);
    (h3_index(&longer), true)
}

impl H3 {
    fn one() -> H3 {
        let mut coeffs: [Laurent; 6] = Default::default();
        coeffs[0] = Laurent::one();
        H3 { coeffs }
    }

    fn mul_generator(&self, i: usize, positive: bool) -> H3 {
        let z = Laurent::monomial(1, 1);
        let mut out: [Laurent; 6] = Default::default();
        for w in 0..6 {
            let c = &self.coeffs[w];
            if c.is_zero() {
                continue;
            }
            let (wi, up) = h3_right(w, i);
            if up {
                out[wi] = out[wi].add(c);
            } else {
                // T_w T_i = T_{wi} T_i² = z T_w + T_{wi}.
                out[w] = out[w].add(&c.mul(&z));
                out[wi] = out[wi].add(c);
            }
            if !positive {
                // T_i⁻¹ = T_i − z.
                out[w] = out[w].sub(&c.mul(&z));
            }
        }
        H3 { coeffs: out }
    }
}

/// HOMFLY-PT polynomial of the closure of a braid on `strands ≤ 3` strands
/// (`s = σ₁`, `t = σ₂`), normalized to 1 on the unknot and satisfying
/// `v⁻¹P(L₊) − vP(L₋) = zP(L₀)`. Returned as a Laurent polynomial in
/// `(v, z)`.
pub fn homfly_with_strands(b: &BraidWord, strands: u32) -> Result<Laurent2> {
    if !(1..=3).contains(&strands) {
        return Err(Error::InvalidInput(format!("unsupported strand count {strands}")));
    }
    if strands < 3 && b.uses(Letter::T) || strands < 2 && b.uses(Letter::S) {
        return Err(Error::InvalidInput("braid uses more strands than requested".into()));
    }
    let mut x = H3::one();
    for c in &b.letters {
        let i = if c.letter == Letter::S { 1 } else { 2 };
        x = x.mul_generator(i, c.positive);
    }
    // Ocneanu trace in powers of ζ: tr(T_w) = ζ^{#distinct letters}, and
    // tr(T1 T2 T1) = ζ(zζ + 1).
    let mut by_zeta: [Laurent; 3] = Default::default();
    let z = Laurent::monomial(1, 1);
    for (w, c) in x.coeffs.iter().enumerate() {
        match w {
            0 => by_zeta[0] = by_zeta[0].add(c),
            1 | 2 => by_zeta[1] = by_zeta[1].add(c),
            3 | 4 => by_zeta[2] = by_zeta[2].add(c),
            _ => {
                by_zeta[2] = by_zeta[2].add(&c.mul(&z));
                by_zeta[1] = by_zeta[1].add(c);
            }
        }
    }
    // P = v^w μ^{n−1} tr, μ = (1 − v²)/(v z), ζ = z/(1 − v²), so
    // μ^{n−1} ζ^k = (1 − v²)^{n−1−k} z^{k−n+1} v^{−(n−1)}.
    let n = strands as i32;
    let one_minus_v2 = Laurent2::from_terms(&[((0, 0), 1), ((2, 0), -1)]);
    let mut out = Laurent2::zero();
    for (k, c) in by_zeta.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as i32;
        if k > n - 1 {
            return Err(Error::Internal("trace degree exceeds strand count".into()));
        }
        let cz = c.terms().iter().fold(Laurent2::zero(), |acc, (e, a)| acc.add(&Laurent2::monomial(0, *e, *a)));
        let factor = one_minus_v2.pow((n - 1 - k) as u32).mul(&Laurent2::monomial(b.writhe() - (n - 1), k - n + 1, 1));
        out = out.add(&cz.mul(&factor));
    }
    Ok(out)
}

/// Default strand count: one more than the number of distinct generators.
pub fn default_strands(b: &BraidWord) -> u32 {
    if b.uses(Letter::T) {
        3
    } else if b.uses(Letter::S) {
        2
    } else {
        1
    }
}

pub fn homfly(b: &BraidWord) -> Result<Laurent2> {
    homfly_with_strands(b, default_strands(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_relation() {
        let m = 3;
        let bs = kl_basis(m, Elem::simple(Letter::S));
        let sq = bs.mul(&bs);
        assert_eq!(sq, bs.scale(&Laurent::from_terms(&[(1, 1), (-1, 1)])));
        let d = HeckeElement::delta(m, Elem::simple(Letter::S));
        assert_eq!(d.mul_delta_letter_inv(Letter::S), HeckeElement::one(m));
    }

    #[test]
    fn hecke_braid_relation() {
        for m in 2..=6u8 {
            let a = braid_class(m, &BraidWord::alternating(Letter::S, m as usize));
            let b = braid_class(m, &BraidWord::alternating(Letter::T, m as usize));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn standard_kl_round_trip() {
        let m = 4;
        for w in Elem::all(m) {
            let mut back = HeckeElement::zero(m);
            for (y, c) in standard_in_kl(m, w) {
                back = back.add(&kl_basis(m, y).scale(&c));
            }
            assert_eq!(back, HeckeElement::delta(m, w));
            assert_eq!(HeckeElement::delta(m, w).to_kl(), standard_in_kl(m, w));
        }
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(soergel_pairing(3, &[Letter::T], &[Letter::T]), Laurent::from_terms(&[(0, 1), (2, 1)]));
        assert_eq!(soergel_pairing(3, &[], &[]), Laurent::one());
    }

    #[test]
    fn homfly_unknot_and_unlink() {
        for w in ["s", "s^-1", "s t", "t^-1 s"] {
            let b = BraidWord::parse(w).unwrap();
            assert_eq!(homfly(&b).unwrap(), Laurent2::one(), "{w}");
        }
        let unlink = homfly_with_strands(&BraidWord::parse("s").unwrap(), 3).unwrap();
        assert_eq!(unlink, Laurent2::from_terms(&[((-1, -1), 1), ((1, -1), -1)]));
    }
}
