//! Homology of complexes of presented modules and the triply-graded
//! Poincaré series.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::complexes::ChainComplex;
use crate::error::Result;
use crate::groebner::{graded_kernel, HilbertSeries, PresentedModule};
use crate::hecke::{homfly_with_strands, Laurent2};
use crate::matrix::PolyMatrix;
use crate::trace::{column_degrees, hochschild_complex, ModuleComplex};

/// `ker(d_i) / im(d_{i−1})` as a presented module.
pub fn complex_homology(c: &ModuleComplex, i: i32) -> PresentedModule {
    let p = c.term(i);
    let n = p.generator_degrees.len();
    if n == 0 {
        return PresentedModule::free(Vec::new());
    }
    let next = c.term(i + 1);
    let d = c.map(i);
    let next_rel_degs = column_degrees(&next.relations, &next.generator_degrees);
    let big = PolyMatrix::hstack(&[&d, &next.relations]);
    let src: Vec<i32> = p.generator_degrees.iter().copied().chain(next_rel_degs).collect();
    let (cycles, cycle_degs) = if big.rows() == 0 {
        (PolyMatrix::identity(c.m, n), p.generator_degrees.clone())
    } else {
        let (k, kd) = graded_kernel(c.m, &big, &src);
        let keep: Vec<usize> = (0..k.cols()).filter(|&j| (0..n).any(|r| !k.get(r, j).is_zero())).collect();
        (k.block(0, 0, n, k.cols()).select_cols(&keep), keep.iter().map(|&j| kd[j]).collect())
    };
    if cycles.cols() == 0 {
        return PresentedModule::free(Vec::new());
    }
    let prev = c.term(i - 1);
    let dprev = c.map(i - 1);
    let rel_degs = column_degrees(&p.relations, &p.generator_degrees);
    let big2 = PolyMatrix::hstack(&[&cycles, &dprev, &p.relations]);
    let src2: Vec<i32> =
        cycle_degs.iter().copied().chain(prev.generator_degrees.iter().copied()).chain(rel_degs).collect();
    let (k2, _) = graded_kernel(c.m, &big2, &src2);
    let nc = cycles.cols();
    let rels = if k2.cols() == 0 { PolyMatrix::zeros(nc, 0) } else { k2.block(0, 0, nc, k2.cols()) };
    PresentedModule::cokernel(cycle_degs, &rels).minimal_generators(c.m).module
}

/// `Σ c · A^a T^t Q^q / (1 − Q²)^e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSeries {
    terms: BTreeMap<(i32, i32, u32, i32), i64>,
}

/// One canonical term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub a: i32,
    pub t: i32,
    pub q: i32,
    pub e: u32,
    pub c: i64,
}

impl PoincareSeries {
    pub fn new() -> PoincareSeries {
        PoincareSeries::default()
    }

    /// Builds a series from `(a, t, q, e, c)` terms and canonicalizes it.
    pub fn from_terms(terms: &[(i32, i32, i32, u32, i64)]) -> PoincareSeries {
        let mut strands: BTreeMap<(i32, i32), HilbertSeries> = BTreeMap::new();
        for &(a, t, q, e, c) in terms {
            let h = strands.entry((a, t)).or_insert_with(HilbertSeries::zero);
            *h = h.add(&HilbertSeries::from_terms_with_denominator(&[(q, c)], e));
        }
        let mut out = PoincareSeries::new();
        for ((a, t), h) in strands {
            out.add_hilbert(a, t, &h);
        }
        out
    }

    /// Adds `A^a T^t · h`.
    pub fn add_hilbert(&mut self, a: i32, t: i32, h: &HilbertSeries) {
        let mut current = self.strand(a, t);
        current = current.add(h);
        self.terms.retain(|k, _| !(k.0 == a && k.1 == t));
        for (e, q, c) in canonical_terms(&current) {
            self.terms.insert((a, t, e, q), c);
        }
    }

    /// The Hilbert series in `Q` of the `(a, t)` piece.
    pub fn strand(&self, a: i32, t: i32) -> HilbertSeries {
        let mut h = HilbertSeries::zero();
        for (&(ta, tt, e, q), &c) in &self.terms {
            if ta == a && tt == t {
                h = h.add(&HilbertSeries::from_terms_with_denominator(&[(q, c)], e));
            }
        }
        h
    }

    pub fn terms(&self) -> Vec<SeriesTerm> {
        let mut v: Vec<SeriesTerm> =
            self.terms.iter().map(|(&(a, t, e, q), &c)| SeriesTerm { a, t, q, e, c }).collect();
        v.sort_by_key(|x| (x.a, x.t, x.e, x.q));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All `(a, t)` pairs with a nonzero piece.
    pub fn strands(&self) -> Vec<(i32, i32)> {
        let mut v: Vec<(i32, i32)> = self.terms.keys().map(|k| (k.0, k.1)).collect();
        v.dedup();
        v
    }

    /// Multiplies by `A^da T^dt Q^dq`.
    pub fn shifted(&self, da: i32, dt: i32, dq: i32) -> PoincareSeries {
        PoincareSeries { terms: self.terms.iter().map(|(&(a, t, e, q), &c)| ((a + da, t + dt, e, q + dq), c)).collect() }
    }

    /// Substitutes `A = −a²q², Q = q, T = −1`; returns the numerator over
    /// `(1 − q²)²` as a Laurent polynomial in `(a, q)`.
    pub fn specialize(&self) -> Laurent2 {
        let one_minus = Laurent2::from_terms(&[((0, 0), 1), ((0, 2), -1)]);
        let mut acc = Laurent2::zero();
        for (&(a, t, e, q), &c) in &self.terms {
            let sign = if (a + t).rem_euclid(2) == 0 { 1 } else { -1 };
            let mono = Laurent2::monomial(2 * a, 2 * a + q, sign * c);
            acc = acc.add(&mono.mul(&one_minus.pow(2 - e)));
        }
        acc
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<[i64; 5]> =
            self.terms().iter().map(|t| [t.a as i64, t.t as i64, t.q as i64, t.e as i64, t.c]).collect();
        serde_json::to_string(&rows).expect("serializable")
    }
}

/// Canonical expansion of `N(Q)/(1 − Q²)²`: highest pole first; at pole
/// order `e` each parity class of exponents contributes one term whose
/// coefficient is the class sum and whose exponent is the lowest exponent
/// of that class; the remainder is divisible by `1 − Q²`.
fn canonical_terms(h: &HilbertSeries) -> Vec<(u32, i32, i64)> {
    let mut num: BTreeMap<i32, i64> = h.numerator().clone();
    let mut e: u32 = 2;
    let mut out = Vec::new();
    while e > 0 {
        // Divide out (1 − Q²) while possible.
        if let Some(q) = divide_one_minus(&num) {
            num = q;
            e -= 1;
            continue;
        }
        for parity in [0, 1] {
            let class: Vec<(i32, i64)> = num.iter().filter(|(d, _)| d.rem_euclid(2) == parity).map(|(d, c)| (*d, *c)).collect();
            let sum: i64 = class.iter().map(|x| x.1).sum();
            if sum != 0 {
                let lo = class[0].0;
                out.push((e, lo, sum));
                *num.entry(lo).or_insert(0) -= sum;
            }
        }
        num.retain(|_, c| *c != 0);
        num = divide_one_minus(&num).expect("parity sums vanish");
        e -= 1;
    }
    for (d, c) in num {
        if c != 0 {
            out.push((0, d, c));
        }
    }
    out
}

fn divide_one_minus(num: &BTreeMap<i32, i64>) -> Option<BTreeMap<i32, i64>> {
    if num.is_empty() {
        return Some(BTreeMap::new());
    }
    // N = (1 − Q²)·P; P_d = N_d + P_{d−2}, scanning upward.
    let mut p: BTreeMap<i32, i64> = BTreeMap::new();
    let lo = *num.keys().next().unwrap();
    let hi = *num.keys().last().unwrap();
    for d in lo..=hi {
        let v = num.get(&d).copied().unwrap_or(0) + p.get(&(d - 2)).copied().unwrap_or(0);
        if v != 0 {
            p.insert(d, v);
        }
    }
    // The tail above hi must vanish.
    if p.keys().any(|&d| d > hi - 2) {
        return None;
    }
    Some(p)
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut by_a: BTreeMap<i32, Vec<SeriesTerm>> = BTreeMap::new();
        for t in self.terms() {
            by_a.entry(t.a).or_default().push(t);
        }
        let mut groups = Vec::new();
        for (a, mut ts) in by_a {
            ts.sort_by_key(|x| (x.t, x.e, x.q));
            let inner: Vec<String> = ts.iter().map(render_term).collect();
            let body = inner.join(" + ").replace("+ -", "- ");
            let prefix = match a {
                0 => String::new(),
                1 => "A".to_string(),
                _ => format!("A^{a}"),
            };
            if prefix.is_empty() {
                groups.push(body);
            } else if ts.len() == 1 && ts[0].c == 1 {
                groups.push(format!("{prefix}{body}"));
            } else {
                groups.push(format!("{prefix}({body})"));
            }
        }
        write!(f, "{}", groups.join(" + "))
    }
}

fn render_term(t: &SeriesTerm) -> String {
    let mut s = String::new();
    match t.c {
        1 => {}
        -1 => s.push('-'),
        c => s.push_str(&c.to_string()),
    }
    let mut mono = String::new();
    match t.t {
        0 => {}
        1 => mono.push('T'),
        k => mono.push_str(&format!("T^{k}")),
    }
    match t.q {
        0 => {}
        1 => mono.push('Q'),
        k => mono.push_str(&format!("Q^{k}")),
    }
    if mono.is_empty() {
        mono.push('1');
        if t.c.abs() != 1 {
            mono.clear();
        }
    }
    s.push_str(&mono);
    match t.e {
        0 => s,
        1 => format!("{s}/(1-Q^2)"),
        e => format!("{s}/(1-Q^2)^{e}"),
    }
}

/// Raw Poincaré series of `H(HH^k(W))`, with every grading exactly as
/// computed (no normalization).
pub fn raw_series(w: &ChainComplex) -> Result<PoincareSeries> {
    let mut out = PoincareSeries::new();
    for k in 0..3 {
        let c = hochschild_complex(w, k)?;
        for i in c.degrees() {
            let h = complex_homology(&c, i).hilbert_series();
            if !h.is_zero() {
                out.add_hilbert(k as i32, i, &h);
            }
        }
    }
    Ok(out)
}

/// The minimal Rouquier complex of a braid.
pub fn braid_complex(m: u8, b: &BraidWord) -> ChainComplex {
    ChainComplex::rouquier_braid(m, b, true)
}

/// Offsets `(A, Q)` applied to the Koszul strand `k` as `A^{k·a} Q^{k·q}`.
/// The raw gradings already agree with the Whitehead golden series, so both
/// are zero.
pub const NORMALIZATION: (i32, i32) = (0, 0);

/// The triply-graded series of the closure of `b`. Only `m = 3` gives a link
/// invariant; other `m` are experimental.
pub fn hhh(b: &BraidWord, m: u8) -> Result<PoincareSeries> {
    hhh_of_complex(&braid_complex(m, b))
}

/// [`hhh`] for an already simplified braid complex.
pub fn hhh_of_complex(w: &ChainComplex) -> Result<PoincareSeries> {
    let raw = raw_series(w)?;
    let (da, dq) = NORMALIZATION;
    let mut out = PoincareSeries::new();
    for (a, t) in raw.strands() {
        out.add_hilbert(a + a * da, t, &raw.strand(a, t).shift(a * dq));
    }
    Ok(out)
}

pub fn is_link_invariant(m: u8) -> bool {
    m == 3
}

/// Result of comparing the specialized series with HOMFLY-PT, both
/// multiplied by `(1 − q²)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    /// Exponents of the unit `a^i q^j`.
    pub unit: (i32, i32),
    pub power: u32,
    pub lhs: Laurent2,
    pub rhs: Laurent2,
    pub residual: Laurent2,
}

impl EulerReport {
    pub fn pass(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `a^{w−2} q²` for a braid of writhe `w` on three strands.
pub fn euler_unit(b: &BraidWord) -> (i32, i32) {
    (b.writhe() - 2, 2)
}

/// Sets `A = −a²q², Q = q, T = −1`, multiplies by the unit and compares
/// with the HOMFLY-PT polynomial at `v = a`, `z = q − q⁻¹`.
pub fn euler_check(p: &PoincareSeries, b: &BraidWord) -> Result<EulerReport> {
    let h = homfly_with_strands(b, 3)?;
    let unit = euler_unit(b);
    let min_z = h.terms().keys().map(|&(_, k)| k).min().unwrap_or(0);
    let power = 2.max(-min_z) as u32;
    let one_minus = Laurent2::from_terms(&[((0, 0), 1), ((0, 2), -1)]);
    let lhs = p.specialize().mul(&Laurent2::monomial(unit.0, unit.1, 1)).mul(&one_minus.pow(power - 2));
    // z^k (1−q²)^power = (−1)^k q^{−k} (1−q²)^{k+power}.
    let mut rhs = Laurent2::zero();
    for (&(i, k), &c) in h.terms() {
        let sign = if k.rem_euclid(2) == 0 { c } else { -c };
        rhs = rhs.add(&Laurent2::monomial(i, -k, sign).mul(&one_minus.pow((k + power as i32) as u32)));
    }
    let residual = lhs.sub(&rhs);
    Ok(EulerReport { unit, power, lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_matches_module_sums() {
        // 𝕜(3) ⊕ R(3)/(f): Q^-3 + Q^-3/(1−Q²).
        let p = PoincareSeries::from_terms(&[(1, 0, -3, 0, 1), (1, 0, -3, 1, 1)]);
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.to_string(), "A(Q^-3 + Q^-3/(1-Q^2))");
        let p = PoincareSeries::from_terms(&[(0, 0, 0, 2, 1)]);
        assert_eq!(p.to_string(), "1/(1-Q^2)^2");
    }
}
