//! Graded module computations over `R`: Gröbner bases under
//! position-over-term degrevlex, syzygies, lifts, minimal presentations and
//! Hilbert series.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{CertifiedSpan, SVec};
use crate::matrix::PolyMatrix;
use crate::polyring::{Mono, Poly};
use crate::scalars::FieldScalar;

/// Hilbert series `num(Q) / (1 − Q²)²`, with the numerator a Laurent
/// polynomial in `Q` stored as exponent → coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertSeries {
    num: BTreeMap<i32, i64>,
}

impl HilbertSeries {
    pub fn zero() -> HilbertSeries {
        HilbertSeries::default()
    }

    /// Series of the free module `R(−d)` (generator in degree `d`).
    pub fn free(d: i32) -> HilbertSeries {
        HilbertSeries::monomial(d, 1)
    }

    pub fn monomial(d: i32, c: i64) -> HilbertSeries {
        let mut h = HilbertSeries::zero();
        h.add_term(d, c);
        h
    }

    /// `Σ c_d Q^d / (1 − Q²)^e` converted to the common denominator.
    pub fn from_terms_with_denominator(terms: &[(i32, i64)], e: u32) -> HilbertSeries {
        let mut h = HilbertSeries::zero();
        for &(d, c) in terms {
            match e {
                0 => {
                    h.add_term(d, c);
                    h.add_term(d + 2, -2 * c);
                    h.add_term(d + 4, c);
                }
                1 => {
                    h.add_term(d, c);
                    h.add_term(d + 2, -c);
                }
                2 => h.add_term(d, c),
                _ => panic!("denominator exponent above 2"),
            }
        }
        h
    }

    fn add_term(&mut self, d: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.num.entry(d).or_insert(0);
        *e += c;
        if *e == 0 {
            self.num.remove(&d);
        }
    }

    pub fn numerator(&self) -> &BTreeMap<i32, i64> {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn add(&self, o: &HilbertSeries) -> HilbertSeries {
        let mut h = self.clone();
        for (&d, &c) in &o.num {
            h.add_term(d, c);
        }
        h
    }

    pub fn sub(&self, o: &HilbertSeries) -> HilbertSeries {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> HilbertSeries {
        let mut h = HilbertSeries::zero();
        for (&d, &c) in &self.num {
            h.add_term(d, c * k);
        }
        h
    }

    /// Multiplication by `Q^k`.
    pub fn shift(&self, k: i32) -> HilbertSeries {
        HilbertSeries { num: self.num.iter().map(|(d, c)| (d + k, *c)).collect() }
    }

    /// The series coefficient of `Q^d`.
    pub fn coefficient(&self, d: i32) -> i64 {
        // 1/(1−Q²)² = Σ (k+1) Q^{2k}.
        self.num
            .iter()
            .filter(|(&e, _)| e <= d && (d - e) % 2 == 0)
            .map(|(&e, &c)| c * (((d - e) / 2) as i64 + 1))
            .sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.num.keys().next().copied()
    }

    pub fn max_numerator_degree(&self) -> Option<i32> {
        self.num.keys().next_back().copied()
    }

    /// Rank as a free module would be the value of the numerator at `Q = 1`
    /// divided by nothing; here simply `num(1)` for free modules.
    pub fn numerator_at_one(&self) -> i64 {
        self.num.values().sum()
    }
}

/// Position-over-term leading term: lowest nonzero position, then its
/// degrevlex leading monomial.
fn leading(v: &[Poly]) -> Option<(usize, Mono, FieldScalar)> {
    v.iter().enumerate().find_map(|(p, f)| f.leading().map(|(mo, c)| (p, *mo, c.clone())))
}

/// `f += mono·c·g`, touching only the nonzero positions of `g`.
fn vec_axpy_in_place(f: &mut [Poly], mono: Mono, c: &FieldScalar, g: &[Poly]) {
    for (x, y) in f.iter_mut().zip(g) {
        if !y.is_zero() {
            *x = x.add(&y.mul_term(mono, c));
        }
    }
}

fn vec_is_zero(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn vec_normalize(v: &[Poly]) -> Vec<Poly> {
    match leading(v) {
        None => v.to_vec(),
        Some((_, _, c)) => {
            let inv = c.inv().expect("nonzero leading coefficient");
            v.iter().map(|f| f.scale(&inv)).collect()
        }
    }
}

/// A Gröbner basis of a submodule of `R^rank`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub rank: usize,
    pub elements: Vec<Vec<Poly>>,
}

impl GroebnerBasis {
    /// Full reduction of `v` modulo the basis.
    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        normal_form(&self.elements, v)
    }

    pub fn leading_terms(&self) -> Vec<(usize, Mono)> {
        self.elements.iter().filter_map(|g| leading(g).map(|(p, mo, _)| (p, mo))).collect()
    }

    /// Hilbert series of `R^rank / span`, given the degrees of the basis
    /// vectors of `R^rank`.
    pub fn quotient_hilbert_series(&self, degrees: &[i32]) -> HilbertSeries {
        let mut per_pos: Vec<Vec<Mono>> = vec![Vec::new(); self.rank];
        for (p, mo) in self.leading_terms() {
            per_pos[p].push(mo);
        }
        let mut h = HilbertSeries::zero();
        for (p, gens) in per_pos.iter().enumerate() {
            h = h.add(&monomial_quotient_series(gens).shift(degrees[p]));
        }
        h
    }
}

/// Hilbert series of `k[α_s, α_t] / I` for a monomial ideal `I`.
fn monomial_quotient_series(gens: &[Mono]) -> HilbertSeries {
    // Minimal generators sorted by increasing s-exponent (t decreasing).
    let mut mins: Vec<Mono> = Vec::new();
    for g in gens {
        if gens.iter().any(|h| h != g && h.divides(*g)) {
            continue;
        }
        if !mins.contains(g) {
            mins.push(*g);
        }
    }
    mins.sort_by_key(|mo| (mo.s, std::cmp::Reverse(mo.t)));
    let mut h = HilbertSeries::monomial(0, 1);
    for (i, g) in mins.iter().enumerate() {
        h.add_term(g.degree(), -1);
        if let Some(next) = mins.get(i + 1) {
            h.add_term(Mono::new(next.s, g.t).degree(), 1);
        }
    }
    h
}

/// Reduced Gröbner basis of the span of `gens` (vectors in `R^rank`).
pub fn groebner_basis(rank: usize, gens: &[Vec<Poly>]) -> GroebnerBasis {
    graded_groebner_basis(gens, &vec![0; rank])
}

/// As [`groebner_basis`], with position weights: pairs are processed by the
/// degree `weights[p] + deg(lcm)`, so homogeneous input is handled degree by
/// degree.
pub fn graded_groebner_basis(gens: &[Vec<Poly>], weights: &[i32]) -> GroebnerBasis {
    let rank = weights.len();
    let mut st = Buchberger {
        basis: Vec::new(),
        lts: Vec::new(),
        pairs: BinaryHeap::new(),
        live: HashSet::new(),
        weights: weights.to_vec(),
    };
    // Inputs and S-pairs are consumed in order of degree.
    let mut inputs: Vec<(i32, &Vec<Poly>)> =
        gens.iter().filter_map(|g| vector_degree(g, weights).map(|d| (d, g))).collect();
    inputs.sort_by_key(|(d, _)| *d);
    let mut next_input = 0;
    loop {
        let pair_degree = st.pairs.peek().map(|Reverse((d, ..))| *d);
        let input = inputs.get(next_input).filter(|(d, _)| pair_degree.is_none_or(|p| *d <= p));
        match (input, pair_degree) {
            (Some((_, g)), _) => {
                st.insert_reduced(g);
                next_input += 1;
            }
            (None, Some(_)) => {
                let Reverse((_, _, i, j)) = st.pairs.pop().expect("peeked");
                if !st.live.remove(&(i, j)) {
                    continue;
                }
                let (_, mi, ci) = &st.lts[i];
                let (_, mj, cj) = &st.lts[j];
                let l = mi.lcm(*mj);
                let mut sp: Vec<Poly> = st.basis[i].iter().map(|f| f.mul_term(l.div(*mi), &c_inv(ci))).collect();
                vec_axpy_in_place(&mut sp, l.div(*mj), &c_inv(cj).neg(), &st.basis[j]);
                st.insert_reduced(&sp);
            }
            (None, None) => break,
        }
    }
    reduce_basis(rank, st.basis)
}

type PairKey = Reverse<(i32, u16, usize, usize)>;

struct Buchberger {
    basis: Vec<Vec<Poly>>,
    lts: Vec<(usize, Mono, FieldScalar)>,
    pairs: BinaryHeap<PairKey>,
    live: HashSet<(usize, usize)>,
    weights: Vec<i32>,
}

impl Buchberger {
    fn insert_reduced(&mut self, g: &[Poly]) {
        let r = full_reduce(&self.basis, &self.lts, g);
        if vec_is_zero(&r) {
            return;
        }
        let r = vec_normalize(&r);
        let (p, mh, c) = leading(&r).expect("nonzero");
        let n = self.basis.len();
        // Keep the basis inter-reduced: this is what keeps rational
        // coefficients from exploding.
        for g in self.basis.iter_mut() {
            let lead = leading(g).map(|(q, mo, _)| (q, mo));
            if let Some((mo, cg)) = g[p].terms().iter().find(|(mo, _)| mh.divides(*mo) && lead != Some((p, *mo))).cloned() {
                let mut k = mo;
                let mut cg = cg;
                loop {
                    vec_axpy_in_place(g, k.div(mh), &cg.neg(), &r);
                    match g[p].terms().iter().find(|(mo, _)| mh.divides(*mo) && lead != Some((p, *mo))) {
                        Some((mo, c2)) => {
                            k = *mo;
                            cg = c2.clone();
                        }
                        None => break,
                    }
                }
            }
        }
        // Gebauer–Möller: drop old pairs whose lcm the new term divides
        // strictly inside the chain.
        let lts = &self.lts;
        self.live.retain(|&(i, k)| {
            let l = lts[i].1.lcm(lts[k].1);
            if lts[i].0 != p || !mh.divides(l) {
                return true;
            }
            lts[i].1.lcm(mh) == l || lts[k].1.lcm(mh) == l
        });
        let mut cands: Vec<(Mono, usize)> =
            (0..n).filter(|&i| self.lts[i].0 == p).map(|i| (self.lts[i].1.lcm(mh), i)).collect();
        cands.sort_by_key(|(l, i)| (l.total(), l.s, *i));
        let mut kept: Vec<(Mono, usize)> = Vec::new();
        for (l, i) in cands {
            // Skip when a kept lcm divides this one (equal lcms keep one).
            if kept.iter().any(|(k, _)| k.divides(l)) {
                continue;
            }
            kept.push((l, i));
        }
        for (l, i) in kept {
            self.live.insert((i, n));
            self.pairs.push(Reverse((self.weights[p] + l.degree(), l.s, i, n)));
        }
        self.basis.push(r);
        self.lts.push((p, mh, c));
    }
}

/// Reduces every term divisible by a basis leading term.
fn full_reduce(basis: &[Vec<Poly>], lts: &[(usize, Mono, FieldScalar)], v: &[Poly]) -> Vec<Poly> {
    let mut f = v.to_vec();
    for p in 0..f.len() {
        let mut k = 0;
        loop {
            let Some((mo, c)) = f[p].terms().get(k).cloned() else { break };
            match lts.iter().position(|(gp, gm, _)| *gp == p && gm.divides(mo)) {
                Some(gi) => {
                    let (_, gm, gc) = &lts[gi];
                    let factor = c.div(gc).expect("nonzero").neg();
                    vec_axpy_in_place(&mut f, mo.div(*gm), &factor, &basis[gi]);
                }
                None => k += 1,
            }
        }
    }
    f
}

fn c_inv(c: &FieldScalar) -> FieldScalar {
    c.inv().expect("nonzero")
}

fn normal_form(basis: &[Vec<Poly>], v: &[Poly]) -> Vec<Poly> {
    let mut f = v.to_vec();
    let mut by_pos: HashMap<usize, Vec<(usize, Mono, FieldScalar)>> = HashMap::new();
    for (gi, g) in basis.iter().enumerate() {
        if let Some((p, mo, c)) = leading(g) {
            by_pos.entry(p).or_default().push((gi, mo, c));
        }
    }
    // Process positions in POT order; within a position, terms descending.
    for p in 0..f.len() {
        let Some(cands) = by_pos.get(&p) else { continue };
        let mut k = 0;
        loop {
            let Some((mo, c)) = f[p].terms().get(k).cloned() else { break };
            match cands.iter().find(|(_, gm, _)| gm.divides(mo)) {
                Some((gi, gm, gc)) => {
                    let factor = c.div(gc).expect("nonzero").neg();
                    vec_axpy_in_place(&mut f, mo.div(*gm), &factor, &basis[*gi]);
                    // The reduced term vanished; higher terms are untouched, so
                    // the same index now points at the next term.
                }
                None => k += 1,
            }
        }
    }
    f
}

fn reduce_basis(rank: usize, mut basis: Vec<Vec<Poly>>) -> GroebnerBasis {
    // Drop elements whose leading term is divisible by another's.
    let mut keep: Vec<Vec<Poly>> = Vec::new();
    basis.sort_by(|a, b| {
        let (pa, ma, _) = leading(a).expect("nonzero");
        let (pb, mb, _) = leading(b).expect("nonzero");
        pa.cmp(&pb).then(ma.cmp(&mb))
    });
    for (idx, g) in basis.iter().enumerate() {
        let (p, mo, _) = leading(g).expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            if k == idx {
                return false;
            }
            let (hp, hm, _) = leading(h).expect("nonzero");
            hp == p && hm.divides(mo) && (hm != mo || k < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // Tail-reduce.
    let mut out = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<Vec<Poly>> = keep.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, g)| g.clone()).collect();
        let r = normal_form(&others, &keep[idx]);
        out.push(vec_normalize(&r));
    }
    GroebnerBasis { rank, elements: out }
}

/// Columns of `m` as vectors.
pub fn columns(m: &PolyMatrix) -> Vec<Vec<Poly>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// Generators of the kernel of `m` (as columns of the returned matrix),
/// computed from a Gröbner basis of the graph of `m`.
pub fn kernel(mf: u8, m: &PolyMatrix) -> PolyMatrix {
    graded_kernel_generators(mf, m, &vec![0; m.cols()])
}

/// Kernel generators of a homogeneous map whose source basis has the given
/// degrees (the graph is weighted accordingly).
fn graded_kernel_generators(mf: u8, m: &PolyMatrix, source_degrees: &[i32]) -> PolyMatrix {
    let (r, n) = m.shape();
    if n == 0 {
        return PolyMatrix::zeros(0, 0);
    }
    let mut weights: Vec<i32> = (0..r)
        .map(|i| (0..n).find_map(|j| m.get(i, j).degree().map(|d| source_degrees[j] - d)).unwrap_or(0))
        .collect();
    weights.extend_from_slice(source_degrees);
    let gens: Vec<Vec<Poly>> = (0..n)
        .map(|j| {
            let mut v = m.column(j);
            v.extend((0..n).map(|k| if k == j { Poly::one(mf) } else { Poly::zero() }));
            v
        })
        .collect();
    let gb = graded_groebner_basis(&gens, &weights);
    let kers: Vec<Vec<Poly>> =
        gb.elements.iter().filter(|g| vec_is_zero(&g[..r])).map(|g| g[r..].to_vec()).collect();
    let mut out = PolyMatrix::zeros(n, kers.len());
    for (j, v) in kers.into_iter().enumerate() {
        for (i, e) in v.into_iter().enumerate() {
            out.set(i, j, e);
        }
    }
    out
}

/// Homogeneous degree of a nonzero vector in a graded free module (entry `i`
/// has polynomial degree `d − degrees[i]`).
pub fn vector_degree(v: &[Poly], degrees: &[i32]) -> Option<i32> {
    v.iter().zip(degrees).find_map(|(f, d)| f.degree().map(|fd| fd + d))
}

/// Solves `through · x = v` for homogeneous data, degree by degree, caching
/// the linear algebra per degree.
#[derive(Debug)]
pub struct Lifter {
    m: u8,
    cols: Vec<Vec<Poly>>,
    col_degrees: Vec<i32>,
    row_degrees: Vec<i32>,
    cache: HashMap<i32, (CertifiedSpan, Vec<(usize, Mono)>)>,
}

impl Lifter {
    /// `through` has rows indexed by the ambient free module (degrees
    /// `row_degrees`) and homogeneous columns of degrees `col_degrees`.
    pub fn new(m: u8, through: &PolyMatrix, row_degrees: &[i32], col_degrees: &[i32]) -> Lifter {
        Lifter {
            m,
            cols: columns(through),
            col_degrees: col_degrees.to_vec(),
            row_degrees: row_degrees.to_vec(),
            cache: HashMap::new(),
        }
    }

    fn index(&self, d: i32) -> (HashMap<(usize, u16), usize>, usize) {
        let mut idx = HashMap::new();
        let mut n = 0;
        for (i, rd) in self.row_degrees.iter().enumerate() {
            let e = d - rd;
            if e < 0 || e % 2 != 0 {
                continue;
            }
            for s in 0..=(e / 2) as u16 {
                idx.insert((i, s), n);
                n += 1;
            }
        }
        (idx, n)
    }

    fn encode(&self, idx: &HashMap<(usize, u16), usize>, v: &[Poly]) -> Option<SVec> {
        let mut out: SVec = Vec::new();
        for (i, f) in v.iter().enumerate() {
            for (mo, c) in f.terms() {
                out.push((*idx.get(&(i, mo.s))?, c.clone()));
            }
        }
        out.sort_by_key(|x| x.0);
        Some(out)
    }

    fn span_for(&mut self, d: i32) -> &(CertifiedSpan, Vec<(usize, Mono)>) {
        if !self.cache.contains_key(&d) {
            let (idx, _) = self.index(d);
            let mut span = CertifiedSpan::new();
            let mut labels = Vec::new();
            for (j, col) in self.cols.iter().enumerate() {
                let e = d - self.col_degrees[j];
                if e < 0 || e % 2 != 0 || vec_is_zero(col) {
                    continue;
                }
                for mo in Mono::of_total((e / 2) as u16) {
                    let shifted: Vec<Poly> = col.iter().map(|f| f.mul_term(mo, &FieldScalar::one(self.m))).collect();
                    let enc = self.encode(&idx, &shifted).expect("homogeneous column");
                    span.insert(self.m, &enc);
                    labels.push((j, mo));
                }
            }
            self.cache.insert(d, (span, labels));
        }
        &self.cache[&d]
    }

    /// Returns `x` with `through · x = v`, or `None` if `v` is not in the span.
    pub fn lift(&mut self, v: &[Poly]) -> Option<Vec<Poly>> {
        let ncols = self.cols.len();
        let Some(d) = vector_degree(v, &self.row_degrees) else {
            return Some(vec![Poly::zero(); ncols]);
        };
        let (idx, _) = self.index(d);
        let enc = self.encode(&idx, v)?;
        let m = self.m;
        let (span, labels) = self.span_for(d);
        let combo = span.express(m, &enc)?;
        let mut terms: Vec<Vec<(Mono, FieldScalar)>> = vec![Vec::new(); ncols];
        for (g, c) in combo {
            let (j, mo) = labels[g];
            terms[j].push((mo, c));
        }
        Some(terms.into_iter().map(Poly::from_terms).collect())
    }

    /// Lifts every column of `v`.
    pub fn lift_matrix(&mut self, v: &PolyMatrix) -> Option<PolyMatrix> {
        let mut out = PolyMatrix::zeros(self.cols.len(), v.cols());
        for j in 0..v.cols() {
            let x = self.lift(&v.column(j))?;
            for (i, e) in x.into_iter().enumerate() {
                out.set(i, j, e);
            }
        }
        Some(out)
    }
}

/// One-shot lift of a single vector.
pub fn lift(m: u8, v: &[Poly], through: &PolyMatrix, row_degrees: &[i32], col_degrees: &[i32]) -> Option<Vec<Poly>> {
    Lifter::new(m, through, row_degrees, col_degrees).lift(v)
}

/// A graded module `R^{gens} / (columns of relations)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub generator_degrees: Vec<i32>,
    pub relations: PolyMatrix,
}

impl PresentedModule {
    pub fn free(degrees: Vec<i32>) -> PresentedModule {
        let n = degrees.len();
        PresentedModule { generator_degrees: degrees, relations: PolyMatrix::zeros(n, 0) }
    }

    pub fn cokernel(target_degrees: Vec<i32>, m: &PolyMatrix) -> PresentedModule {
        PresentedModule { generator_degrees: target_degrees, relations: m.clone() }
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        let gb = graded_groebner_basis(&columns(&self.relations), &self.generator_degrees);
        gb.quotient_hilbert_series(&self.generator_degrees)
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert_series().is_zero()
    }

    /// Removes generator/relation pairs joined by a unit entry. The result is
    /// minimally generated; `reduction` maps old generator coordinates to
    /// new ones.
    pub fn minimal_generators(&self, m: u8) -> MinimalPresentation {
        minimal_presentation(m, &self.generator_degrees, &self.relations)
    }
}

#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub module: PresentedModule,
    /// Indices (into the old generators) of the surviving generators.
    pub kept: Vec<usize>,
    /// `new coordinates = reduction · old coordinates`.
    pub reduction: PolyMatrix,
}

impl MinimalPresentation {
    pub fn is_free(&self) -> bool {
        self.module.relations.is_zero()
    }
}

fn minimal_presentation(m: u8, degrees: &[i32], rel: &PolyMatrix) -> MinimalPresentation {
    let n = degrees.len();
    let mut alive_gen: Vec<usize> = (0..n).collect();
    let mut rel = rel.clone();
    let mut red = PolyMatrix::identity(m, n);
    loop {
        // Find a unit entry: prefer the lowest generator degree for determinism.
        let mut pivot = None;
        'outer: for i in 0..rel.rows() {
            for j in 0..rel.cols() {
                let e = rel.get(i, j);
                if !e.is_zero() && e.is_constant() {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        let u_inv = rel.get(pi, pj).constant_term().expect("unit").inv().expect("nonzero");
        // e_pi ≡ −u⁻¹ Σ_{k≠pi} rel[k][pj] e_k.
        let col = rel.column(pj);
        let prow = rel.row(pi);
        let red_row = red.row(pi);
        let keep_rows: Vec<usize> = (0..rel.rows()).filter(|&k| k != pi).collect();
        let keep_cols: Vec<usize> = (0..rel.cols()).filter(|&k| k != pj).collect();
        let mut new_rel = PolyMatrix::zeros(keep_rows.len(), keep_cols.len());
        for (a, &k) in keep_rows.iter().enumerate() {
            let f = col[k].scale(&u_inv);
            for (b, &l) in keep_cols.iter().enumerate() {
                let v = rel.get(k, l).sub(&f.mul(&prow[l]));
                new_rel.set(a, b, v);
            }
        }
        let mut new_red = PolyMatrix::zeros(keep_rows.len(), red.cols());
        for (a, &k) in keep_rows.iter().enumerate() {
            let f = col[k].scale(&u_inv);
            for l in 0..red.cols() {
                new_red.set(a, l, red.get(k, l).sub(&f.mul(&red_row[l])));
            }
        }
        alive_gen.remove(pi);
        rel = new_rel;
        red = new_red;
    }
    // Drop zero relations.
    let nz: Vec<usize> = (0..rel.cols()).filter(|&j| (0..rel.rows()).any(|i| !rel.get(i, j).is_zero())).collect();
    let rel = rel.select_cols(&nz);
    let degs = alive_gen.iter().map(|&i| degrees[i]).collect();
    MinimalPresentation { module: PresentedModule { generator_degrees: degs, relations: rel }, kept: alive_gen, reduction: red }
}

/// Removes redundant generators of a submodule (columns of `gens`, each
/// homogeneous of the listed degree inside a free module with
/// `ambient_degrees`). Returns the indices kept, in increasing degree order.
pub fn minimal_submodule_generators(m: u8, gens: &PolyMatrix, ambient_degrees: &[i32], gen_degrees: &[i32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gens.cols()).filter(|&j| !vec_is_zero(&gens.column(j))).collect();
    order.sort_by_key(|&j| (gen_degrees[j], j));
    let mut kept: Vec<usize> = Vec::new();
    for &j in &order {
        let sub = gens.select_cols(&kept);
        let degs: Vec<i32> = kept.iter().map(|&k| gen_degrees[k]).collect();
        if kept.is_empty() || lift(m, &gens.column(j), &sub, ambient_degrees, &degs).is_none() {
            kept.push(j);
        }
    }
    kept
}

/// Kernel of a homogeneous map between graded free modules, returned as a
/// minimal (hence, over this ring, free) set of homogeneous generators with
/// their degrees, sorted by degree then leading term.
pub fn graded_kernel(m: u8, map: &PolyMatrix, source_degrees: &[i32]) -> (PolyMatrix, Vec<i32>) {
    let k = graded_kernel_generators(m, map, source_degrees);
    let degs: Vec<i32> =
        (0..k.cols()).map(|j| vector_degree(&k.column(j), source_degrees).expect("nonzero kernel generator")).collect();
    let kept = minimal_submodule_generators(m, &k, source_degrees, &degs);
    let mut cols: Vec<(i32, Vec<Poly>)> = kept.iter().map(|&j| (degs[j], k.column(j))).collect();
    cols.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let la = leading(&a.1).map(|(p, mo, _)| (p, std::cmp::Reverse(mo)));
            let lb = leading(&b.1).map(|(p, mo, _)| (p, std::cmp::Reverse(mo)));
            la.cmp(&lb)
        })
    });
    let mut out = PolyMatrix::zeros(source_degrees.len(), cols.len());
    for (j, (_, v)) in cols.iter().enumerate() {
        for (i, e) in v.iter().enumerate() {
            out.set(i, j, e.clone());
        }
    }
    (out, cols.into_iter().map(|c| c.0).collect())
}

/// Checks that every column of `k` is annihilated by `map`.
pub fn verify_kernel(map: &PolyMatrix, k: &PolyMatrix) -> Result<()> {
    if map.cols() > 0 && k.cols() > 0 && !map.mul(k).is_zero() {
        return Err(Error::contract("groebner", "kernel generator not annihilated"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Letter;

    fn p(s: &str) -> Poly {
        Poly::parse(3, s).unwrap()
    }

    #[test]
    fn koszul_syzygy() {
        let m = PolyMatrix::from_rows(vec![vec![p("a_s"), p("a_t")]]);
        let k = kernel(3, &m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let col = k.column(0);
        assert!(col[0] == p("a_t") && col[1] == p("-a_s") || col[0] == p("-a_t") && col[1] == p("a_s"));
    }

    #[test]
    fn hilbert_of_quotients() {
        let r = PresentedModule::free(vec![0]);
        assert_eq!(r.hilbert_series(), HilbertSeries::free(0));
        let line = PresentedModule::cokernel(vec![-3], &PolyMatrix::from_rows(vec![vec![p("a_s + a_t")]]));
        assert_eq!(line.hilbert_series(), HilbertSeries::from_terms_with_denominator(&[(-3, 1)], 1));
        let k = PresentedModule::cokernel(vec![0], &PolyMatrix::from_rows(vec![vec![p("a_s"), p("a_t")]]));
        assert_eq!(k.hilbert_series(), HilbertSeries::from_terms_with_denominator(&[(0, 1)], 0));
    }

    #[test]
    fn reduced_basis_example() {
        let gens = vec![vec![p("a_s^2")], vec![p("a_s*a_t")], vec![p("a_s^2 + a_s*a_t")]];
        let gb = groebner_basis(1, &gens);
        assert_eq!(gb.elements.len(), 2);
        let _ = Letter::S;
    }

    #[test]
    fn lift_examples() {
        let koszul = PolyMatrix::column_vector(vec![p("a_t"), p("-a_s")]);
        let v = vec![p("a_t^2"), p("-a_s*a_t")];
        let x = lift(3, &v, &koszul, &[0, 0], &[2]).unwrap();
        assert_eq!(x, vec![p("a_t")]);
        let ideal = PolyMatrix::column_vector(vec![p("a_s"), p("a_t")]);
        assert!(lift(3, &[p("1"), p("0")], &ideal, &[0, 0], &[2]).is_none());
    }
}
