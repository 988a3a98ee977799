//! Bounded complexes of shifted indecomposables. Rouquier complexes of braid
//! words are built here and simplified to minimal form by Gaussian elimination.
//!
//! Objects in each cohomological degree are lists of [`Atom`]s; a
//! differential component between two atoms is the matrix of a degree-0
//! bimodule map between their canonical models.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bimodule::{dot_in, dot_out, Bimodule};
use crate::braid::BraidWord;
use crate::dihedral::Elem;
use crate::error::{Error, Result};
use crate::hecke::{kl_basis, HeckeElement, Laurent};
use crate::indecomposable::{
    atom_bimodule, atoms_of_class, decompose, hom0_from_indecomposable, indecomposable, tensor_letter, Atom,
    Decomposition,
};
use crate::linalg::{dense_det, Echelon};
use crate::matrix::PolyMatrix;
use crate::polyring::{Letter, Poly};
use crate::scalars::FieldScalar;

/// Components of one differential, keyed by `(target index, source index)`.
pub type Blocks = BTreeMap<(usize, usize), PolyMatrix>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub m: u8,
    terms: BTreeMap<i32, Vec<Atom>>,
    diffs: BTreeMap<i32, Blocks>,
}

/// One tensor factor of a word of complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// `F_z` (positive) or `F_z⁻¹`.
    Rouquier(Letter, bool),
    /// The bimodule `B_z` in degree 0.
    Bimodule(Letter),
}

impl ChainComplex {
    pub fn zero(m: u8) -> ChainComplex {
        ChainComplex { m, terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// A single atom in cohomological degree `degree`.
    pub fn from_atom(m: u8, atom: Atom, degree: i32) -> ChainComplex {
        let mut c = ChainComplex::zero(m);
        c.terms.insert(degree, vec![atom]);
        c
    }

    /// `[R]` in degree 0.
    pub fn unit(m: u8) -> ChainComplex {
        ChainComplex::from_atom(m, Atom::regular(0), 0)
    }

    /// Assembles a complex from raw data; checks shapes, block degrees and
    /// `d² = 0`.
    pub fn from_parts(m: u8, terms: BTreeMap<i32, Vec<Atom>>, diffs: BTreeMap<i32, Blocks>) -> Result<ChainComplex> {
        let mut c = ChainComplex { m, terms, diffs };
        c.terms.retain(|_, v| !v.is_empty());
        for blocks in c.diffs.values_mut() {
            blocks.retain(|_, b| !b.is_zero());
        }
        c.diffs.retain(|_, b| !b.is_empty());
        c.check()?;
        Ok(c)
    }

    /// `F_z = [B_z → R(1)]` or `F_z⁻¹ = [R(−1) → B_z]`, with `B_z` in degree 0.
    pub fn rouquier(m: u8, z: Letter, positive: bool) -> ChainComplex {
        let bz = Atom::new(Elem::simple(z), 0);
        let mut c = ChainComplex::zero(m);
        let mut blocks = Blocks::new();
        if positive {
            c.terms.insert(0, vec![bz]);
            c.terms.insert(1, vec![Atom::regular(1)]);
            blocks.insert((0, 0), dot_out(m, z));
            c.diffs.insert(0, blocks);
        } else {
            c.terms.insert(-1, vec![Atom::regular(-1)]);
            c.terms.insert(0, vec![bz]);
            blocks.insert((0, 0), dot_in(m, z));
            c.diffs.insert(-1, blocks);
        }
        c
    }

    pub fn factor(m: u8, f: Factor) -> ChainComplex {
        match f {
            Factor::Rouquier(z, pos) => ChainComplex::rouquier(m, z, pos),
            Factor::Bimodule(z) => ChainComplex::from_atom(m, Atom::new(Elem::simple(z), 0), 0),
        }
    }

    /// Tensor product of factors from left to right, optionally reduced to
    /// minimal form after every step.
    pub fn from_factors(m: u8, factors: &[Factor], simplify: bool) -> ChainComplex {
        let mut c = ChainComplex::unit(m);
        for &f in factors {
            c = c.tensor(&ChainComplex::factor(m, f));
            if simplify {
                c = c.minimal_form();
            }
        }
        c
    }

    /// Rouquier complex of a braid word.
    pub fn rouquier_braid(m: u8, b: &BraidWord, simplify: bool) -> ChainComplex {
        let factors: Vec<Factor> = b.letters.iter().map(|c| Factor::Rouquier(c.letter, c.positive)).collect();
        ChainComplex::from_factors(m, &factors, simplify)
    }

    pub fn terms(&self, i: i32) -> &[Atom] {
        self.terms.get(&i).map_or(&[], |v| v.as_slice())
    }

    pub fn all_terms(&self) -> &BTreeMap<i32, Vec<Atom>> {
        &self.terms
    }

    pub fn diff(&self, i: i32) -> Option<&Blocks> {
        self.diffs.get(&i)
    }

    pub fn all_diffs(&self) -> &BTreeMap<i32, Blocks> {
        &self.diffs
    }

    pub fn block(&self, i: i32, target: usize, source: usize) -> Option<&PolyMatrix> {
        self.diffs.get(&i).and_then(|b| b.get(&(target, source)))
    }

    /// Nonempty cohomological degrees, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    /// Sorted `(degree, atom)` multiset.
    pub fn atom_multiset(&self) -> Vec<(i32, Atom)> {
        let mut out: Vec<(i32, Atom)> = self.terms.iter().flat_map(|(i, v)| v.iter().map(move |a| (*i, *a))).collect();
        out.sort();
        out
    }

    /// Internal shift `C(k)`.
    pub fn shifted(&self, k: i32) -> ChainComplex {
        ChainComplex {
            m: self.m,
            terms: self.terms.iter().map(|(i, v)| (*i, v.iter().map(|a| a.shifted(k)).collect())).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// Cohomological shift: the object in degree `i` moves to `i + n`; the
    /// differential picks up the sign `(−1)^n`.
    pub fn translated(&self, n: i32) -> ChainComplex {
        let sign = n.rem_euclid(2) == 1;
        ChainComplex {
            m: self.m,
            terms: self.terms.iter().map(|(i, v)| (i + n, v.clone())).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(i, b)| (i + n, if sign { b.iter().map(|(k, x)| (*k, x.neg())).collect() } else { b.clone() }))
                .collect(),
        }
    }

    /// Checks `d² = 0` and that every block is a degree-0 bimodule map of the
    /// right shape.
    pub fn check(&self) -> Result<()> {
        for (i, blocks) in &self.diffs {
            let src = self.terms(*i);
            let tgt = self.terms(i + 1);
            for ((b, a), mat) in blocks {
                let (Some(sa), Some(tb)) = (src.get(*a), tgt.get(*b)) else {
                    return Err(Error::contract("complexes", format!("block ({b},{a}) out of range in degree {i}")));
                };
                let dom = atom_bimodule(self.m, sa);
                let cod = atom_bimodule(self.m, tb);
                crate::bimodule::check_morphism(&dom, &cod, mat, 0)?;
            }
        }
        self.check_d_squared()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for (i, first) in &self.diffs {
            let Some(second) = self.diffs.get(&(i + 1)) else { continue };
            let n_src = self.terms(*i).len();
            let tgt = self.terms(i + 2);
            for a in 0..n_src {
                for (c, tc) in tgt.iter().enumerate() {
                    let mut acc = PolyMatrix::zeros(tc.rank(), self.terms(*i)[a].rank());
                    for ((b, a2), f) in first.iter() {
                        if *a2 != a {
                            continue;
                        }
                        if let Some(g) = second.get(&(c, *b)) {
                            acc = acc.add(&g.mul(f));
                        }
                    }
                    if !acc.is_zero() {
                        return Err(Error::contract("complexes", format!("d² ≠ 0 from degree {i}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Total complex of `self ⊗ other` with the Koszul sign on `other`'s
    /// differential, each tensor product of atoms split into atoms.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let m = self.m;
        // Pieces of each total degree: (i, a, j, b) with offset of its atoms.
        struct Piece {
            i: i32,
            a: usize,
            j: i32,
            b: usize,
            start: usize,
            dec: Arc<Decomposition>,
        }
        let mut terms: BTreeMap<i32, Vec<Atom>> = BTreeMap::new();
        let mut pieces: BTreeMap<i32, Vec<Piece>> = BTreeMap::new();
        let mut index: HashMap<(i32, usize, i32, usize), (i32, usize)> = HashMap::new();
        for (i, xa) in &self.terms {
            for (a, atom_a) in xa.iter().enumerate() {
                for (j, yb) in &other.terms {
                    for (b, atom_b) in yb.iter().enumerate() {
                        let n = i + j;
                        let dec = atom_tensor(m, atom_a.label, atom_b.label);
                        let list = terms.entry(n).or_default();
                        let start = list.len();
                        list.extend(dec.atoms.iter().map(|t| t.shifted(atom_a.shift + atom_b.shift)));
                        let pl = pieces.entry(n).or_default();
                        index.insert((*i, a, *j, b), (n, pl.len()));
                        pl.push(Piece { i: *i, a, j: *j, b, start, dec });
                    }
                }
            }
        }
        let mut diffs: BTreeMap<i32, Blocks> = BTreeMap::new();
        for (n, pl) in &pieces {
            for p in pl {
                let atom_a = self.terms[&p.i][p.a];
                let atom_b = other.terms[&p.j][p.b];
                // d ⊗ 1.
                if let Some(blocks) = self.diffs.get(&p.i) {
                    let right = indecomposable(m, atom_b.label);
                    for ((a2, a1), mat) in blocks.iter() {
                        if *a1 != p.a {
                            continue;
                        }
                        let (_, qi) = index[&(p.i + 1, *a2, p.j, p.b)];
                        let q = &pieces[&(n + 1)][qi];
                        let big = kron_left(mat, &right, atom_a.rank());
                        let conv = q.dec.proj.mul(&big).mul(&p.dec.incl);
                        scatter(diffs.entry(*n).or_default(), &conv, &q.dec, q.start, &p.dec, p.start);
                    }
                }
                // (−1)^i 1 ⊗ d.
                if let Some(blocks) = other.diffs.get(&p.j) {
                    let sign = p.i.rem_euclid(2) == 1;
                    for ((b2, b1), mat) in blocks.iter() {
                        if *b1 != p.b {
                            continue;
                        }
                        let (_, qi) = index[&(p.i, p.a, p.j + 1, *b2)];
                        let q = &pieces[&(n + 1)][qi];
                        let mut big = kron_right(atom_a.rank(), mat);
                        if sign {
                            big = big.neg();
                        }
                        let conv = q.dec.proj.mul(&big).mul(&p.dec.incl);
                        scatter(diffs.entry(*n).or_default(), &conv, &q.dec, q.start, &p.dec, p.start);
                    }
                }
            }
        }
        for blocks in diffs.values_mut() {
            blocks.retain(|_, b| !b.is_zero());
        }
        diffs.retain(|_, b| !b.is_empty());
        terms.retain(|_, v| !v.is_empty());
        let out = ChainComplex { m, terms, diffs };
        debug_assert!(out.check_d_squared().is_ok());
        out
    }

    /// Removes `C^i[a] → C^{i+1}[b]`, which must be an isomorphism of equal
    /// atoms, and corrects the differential by `d − d·ψ⁻¹·d`.
    pub fn gaussian_eliminate(&mut self, i: i32, a: usize, b: usize) -> Result<()> {
        let sa = *self.terms(i).get(a).ok_or_else(|| Error::InvalidInput("source atom out of range".into()))?;
        let tb = *self.terms(i + 1).get(b).ok_or_else(|| Error::InvalidInput("target atom out of range".into()))?;
        if sa != tb {
            return Err(Error::InvalidInput(format!("{sa} → {tb} cannot be an isomorphism")));
        }
        let psi = self.block(i, b, a).ok_or_else(|| Error::InvalidInput("zero component".into()))?;
        let c = scalar_of_identity(psi)
            .ok_or_else(|| Error::contract("complexes", "component between equal atoms is not a scalar"))?;
        let c_inv = c.inv()?;
        let blocks = self.diffs.remove(&i).unwrap_or_default();
        // Column b' ← a (excluding b) and row b ← a' (excluding a).
        let into_rest: Vec<(usize, PolyMatrix)> =
            blocks.iter().filter(|((t, s), _)| *s == a && *t != b).map(|((t, _), x)| (*t, x.clone())).collect();
        let from_rest: Vec<(usize, PolyMatrix)> =
            blocks.iter().filter(|((t, s), _)| *t == b && *s != a).map(|((_, s), x)| (*s, x.scale(&c_inv))).collect();
        let mut new_blocks = Blocks::new();
        for ((t, s), x) in blocks {
            if t == b || s == a {
                continue;
            }
            new_blocks.insert((t, s), x);
        }
        for (t, e) in &into_rest {
            for (s, d) in &from_rest {
                let corr = e.mul(d);
                let entry = new_blocks.entry((*t, *s)).or_insert_with(|| PolyMatrix::zeros(corr.rows(), corr.cols()));
                *entry = entry.sub(&corr);
            }
        }
        let reindexed: Blocks = new_blocks
            .into_iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|((t, s), x)| ((t - (t > b) as usize, s - (s > a) as usize), x))
            .collect();
        if !reindexed.is_empty() {
            self.diffs.insert(i, reindexed);
        }
        if let Some(prev) = self.diffs.remove(&(i - 1)) {
            let p: Blocks =
                prev.into_iter().filter(|((t, _), _)| *t != a).map(|((t, s), x)| ((t - (t > a) as usize, s), x)).collect();
            if !p.is_empty() {
                self.diffs.insert(i - 1, p);
            }
        }
        if let Some(next) = self.diffs.remove(&(i + 1)) {
            let p: Blocks =
                next.into_iter().filter(|((_, s), _)| *s != b).map(|((t, s), x)| ((t, s - (s > b) as usize), x)).collect();
            if !p.is_empty() {
                self.diffs.insert(i + 1, p);
            }
        }
        remove_atom(&mut self.terms, i, a);
        remove_atom(&mut self.terms, i + 1, b);
        Ok(())
    }

    /// The first eliminable component in scan order (lowest degree, then
    /// source index, then target index).
    pub fn find_pivot(&self) -> Option<(i32, usize, usize)> {
        for (i, blocks) in &self.diffs {
            let src = self.terms(*i);
            let tgt = self.terms(i + 1);
            let mut best: Option<(usize, usize)> = None;
            for ((b, a), x) in blocks {
                if src[*a] == tgt[*b] && scalar_of_identity(x).is_some() && best.is_none_or(|(ba, bb)| (*a, *b) < (ba, bb)) {
                    best = Some((*a, *b));
                }
            }
            if let Some((a, b)) = best {
                return Some((*i, a, b));
            }
        }
        None
    }

    /// Gaussian elimination until no component between equal atoms is
    /// nonzero. Since `End⁰` of every atom is the ground field, the result is
    /// minimal.
    pub fn minimal_form(&self) -> ChainComplex {
        let mut c = self.clone();
        while let Some((i, a, b)) = c.find_pivot() {
            c.gaussian_eliminate(i, a, b).expect("pivot is invertible");
        }
        c
    }

    pub fn is_minimal(&self) -> bool {
        self.find_pivot().is_none()
    }

    /// Grothendieck class `Σ_i (−1)^i Σ v^{shift} b_label`.
    pub fn class(&self) -> HeckeElement {
        let mut out = HeckeElement::zero(self.m);
        for (i, atoms) in &self.terms {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for a in atoms {
                out = out.add(&kl_basis(self.m, a.label).scale(&Laurent::monomial(a.shift, sign)));
            }
        }
        out
    }

    /// `Hom_R(−, R)` applied termwise: atoms `B_x(k)` in degree `i` become
    /// `B_x(−k)` in degree `−i` (each `B_x` is self-dual), arrows reversed.
    /// Only the atom data is produced; the differentials are transported
    /// through the duality isomorphisms.
    pub fn dual(&self) -> Result<ChainComplex> {
        let m = self.m;
        let mut terms = BTreeMap::new();
        for (i, atoms) in &self.terms {
            terms.insert(-i, atoms.iter().map(|a| Atom::new(a.label, -a.shift)).collect::<Vec<_>>());
        }
        // 𝔻(B_x) is the transposed model; its isomorphism to the canonical
        // model comes from decomposing it.
        let mut maps: HashMap<Elem, Decomposition> = HashMap::new();
        for atoms in self.terms.values() {
            for a in atoms {
                if let std::collections::hash_map::Entry::Vacant(e) = maps.entry(a.label) {
                    let d = indecomposable(m, a.label).dual_d();
                    e.insert(decompose(&d, &[Atom::new(a.label, 0)])?);
                }
            }
        }
        let mut diffs = BTreeMap::new();
        for (i, blocks) in &self.diffs {
            // d^i: C^i → C^{i+1} dualizes to (C^{i+1})* → (C^i)*, i.e. from
            // degree −i−1 to −i, with the sign (−1)^{i+1}.
            let sign = (i + 1).rem_euclid(2) == 1;
            let mut nb = Blocks::new();
            for ((b, a), x) in blocks {
                let sa = self.terms[i][*a];
                let tb = self.terms[&(i + 1)][*b];
                let da = &maps[&sa.label];
                let db = &maps[&tb.label];
                let mut y = da.proj.mul(&x.transpose()).mul(&db.incl);
                if sign {
                    y = y.neg();
                }
                nb.insert((*a, *b), y);
            }
            diffs.insert(-i - 1, nb);
        }
        ChainComplex::from_parts(m, terms, diffs)
    }
}

fn remove_atom(terms: &mut BTreeMap<i32, Vec<Atom>>, i: i32, k: usize) {
    if let Some(v) = terms.get_mut(&i) {
        v.remove(k);
        if v.is_empty() {
            terms.remove(&i);
        }
    }
}

/// `c` if the square block is `c·I` with `c ≠ 0`.
pub fn scalar_of_identity(x: &PolyMatrix) -> Option<FieldScalar> {
    if x.rows() != x.cols() || x.rows() == 0 {
        return None;
    }
    let c = x.get(0, 0).constant_term()?.clone();
    if !x.get(0, 0).is_constant() || c.is_zero() {
        return None;
    }
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let e = x.get(i, j);
            if i == j {
                if !e.is_constant() || e.constant_term() != Some(&c) {
                    return None;
                }
            } else if !e.is_zero() {
                return None;
            }
        }
    }
    Some(c)
}

/// Matrix of `f ⊗ id_N` on `M ⊗ N` (basis index `i·rank N + j`).
fn kron_left(f: &PolyMatrix, n: &Bimodule, _rank_m: usize) -> PolyMatrix {
    let rn = n.rank();
    let mut out = PolyMatrix::zeros(f.rows() * rn, f.cols() * rn);
    let mut cache: HashMap<&Poly, PolyMatrix> = HashMap::new();
    for k in 0..f.rows() {
        for i in 0..f.cols() {
            let e = f.get(k, i);
            if e.is_zero() {
                continue;
            }
            let blk = cache.entry(e).or_insert_with(|| n.left_action(e));
            out.put_block(k * rn, i * rn, blk);
        }
    }
    out
}

/// Matrix of `id_M ⊗ g` on `M ⊗ N`.
fn kron_right(rank_m: usize, g: &PolyMatrix) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(rank_m * g.rows(), rank_m * g.cols());
    for i in 0..rank_m {
        out.put_block(i * g.rows(), i * g.cols(), g);
    }
    out
}

/// Splits a map between two decomposed pieces into atom blocks.
fn scatter(out: &mut Blocks, conv: &PolyMatrix, tdec: &Decomposition, tstart: usize, sdec: &Decomposition, sstart: usize) {
    let toff = tdec.offsets();
    let soff = sdec.offsets();
    for t in 0..tdec.atoms.len() {
        for s in 0..sdec.atoms.len() {
            let blk = conv.block(toff[t], soff[s], toff[t + 1] - toff[t], soff[s + 1] - soff[s]);
            if blk.is_zero() {
                continue;
            }
            let key = (tstart + t, sstart + s);
            match out.get_mut(&key) {
                Some(x) => *x = x.add(&blk),
                None => {
                    out.insert(key, blk);
                }
            }
        }
    }
}

type AtomTensorTable = Mutex<HashMap<(u8, Elem, Elem), Arc<Decomposition>>>;

fn atom_tensor_table() -> &'static AtomTensorTable {
    static T: OnceLock<AtomTensorTable> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Decomposition of `B_x ⊗ B_y` into atoms (cached).
pub fn atom_tensor(m: u8, x: Elem, y: Elem) -> Arc<Decomposition> {
    if let Some(d) = atom_tensor_table().lock().get(&(m, x, y)) {
        return d.clone();
    }
    let d = if x.is_identity() || y.is_identity() {
        let label = if x.is_identity() { y } else { x };
        let n = Atom::new(label, 0).rank();
        Arc::new(Decomposition {
            atoms: vec![Atom::new(label, 0)],
            incl: PolyMatrix::identity(m, n),
            proj: PolyMatrix::identity(m, n),
        })
    } else if y.len == 1 {
        tensor_letter(m, x, y.start)
    } else {
        let big = indecomposable(m, x).tensor(&indecomposable(m, y));
        let class = kl_basis(m, x).mul(&kl_basis(m, y));
        let cands = atoms_of_class(&class).expect("positive class");
        Arc::new(decompose(&big, &cands).expect("tensor decomposition"))
    };
    atom_tensor_table().lock().entry((m, x, y)).or_insert(d).clone()
}

/// A degree-0 chain map, componentwise between atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub components: BTreeMap<i32, Blocks>,
}

impl ChainMap {
    /// Checks `d_D f = f d_C`.
    pub fn check(&self, c: &ChainComplex, d: &ChainComplex) -> Result<()> {
        let degrees: Vec<i32> = c.degrees().into_iter().chain(d.degrees()).collect();
        let lo = degrees.iter().copied().min().unwrap_or(0);
        let hi = degrees.iter().copied().max().unwrap_or(0);
        for i in lo..=hi {
            for (a, sa) in c.terms(i).iter().enumerate() {
                for (b, tb) in d.terms(i + 1).iter().enumerate() {
                    let mut acc = PolyMatrix::zeros(tb.rank(), sa.rank());
                    if let Some(fi) = self.components.get(&i) {
                        for ((b2, a2), f) in fi {
                            if *a2 == a {
                                if let Some(x) = d.block(i, b, *b2) {
                                    acc = acc.add(&x.mul(f));
                                }
                            }
                        }
                    }
                    if let Some(fi1) = self.components.get(&(i + 1)) {
                        for ((b2, a2), f) in fi1 {
                            if *b2 == b {
                                if let Some(x) = c.block(i, *a2, a) {
                                    acc = acc.sub(&f.mul(x));
                                }
                            }
                        }
                    }
                    if !acc.is_zero() {
                        return Err(Error::contract("complexes", format!("not a chain map in degree {i}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Cone(f)^n = C^{n+1} ⊕ D^n` with differential `[[−d_C, 0], [f, d_D]]`.
pub fn cone(c: &ChainComplex, d: &ChainComplex, f: &ChainMap) -> ChainComplex {
    let m = c.m;
    let degrees: Vec<i32> = c.degrees().into_iter().map(|i| i - 1).chain(d.degrees()).collect();
    let mut terms = BTreeMap::new();
    let mut diffs: BTreeMap<i32, Blocks> = BTreeMap::new();
    for &n in &degrees {
        let mut v: Vec<Atom> = c.terms(n + 1).to_vec();
        v.extend_from_slice(d.terms(n));
        terms.insert(n, v);
    }
    for &n in &degrees {
        let nc = c.terms(n + 1).len();
        let nc_next = c.terms(n + 2).len();
        let mut blocks = Blocks::new();
        if let Some(bl) = c.diff(n + 1) {
            for ((t, s), x) in bl {
                blocks.insert((*t, *s), x.neg());
            }
        }
        if let Some(bl) = f.components.get(&(n + 1)) {
            for ((t, s), x) in bl {
                blocks.insert((nc_next + t, *s), x.clone());
            }
        }
        if let Some(bl) = d.diff(n) {
            for ((t, s), x) in bl {
                blocks.insert((nc_next + t, nc + s), x.clone());
            }
        }
        if !blocks.is_empty() {
            diffs.insert(n, blocks);
        }
    }
    ChainComplex::from_parts(m, terms, diffs).expect("cone of a chain map")
}

/// The chain map `ψ_z: F_z → F_z⁻¹`, identity on `B_z`.
pub fn psi_link_split(m: u8, z: Letter) -> (ChainComplex, ChainComplex, ChainMap) {
    let pos = ChainComplex::rouquier(m, z, true);
    let neg = ChainComplex::rouquier(m, z, false);
    let mut f = ChainMap::default();
    let mut b = Blocks::new();
    b.insert((0, 0), PolyMatrix::identity(m, 2));
    f.components.insert(0, b);
    (pos, neg, f)
}

/// Outcome of the randomized isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoResult {
    Yes(ChainMap),
    No(String),
    Inconclusive,
}

impl IsoResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoResult::Yes(_))
    }
}

/// Basis of the space of degree-0 chain maps `C → D`.
pub fn chain_map_space(c: &ChainComplex, d: &ChainComplex) -> Vec<ChainMap> {
    let m = c.m;
    // Unknowns: (degree, target, source, Hom⁰ basis matrix).
    let mut unknowns: Vec<(i32, usize, usize, PolyMatrix)> = Vec::new();
    for (i, src) in c.all_terms() {
        for (a, sa) in src.iter().enumerate() {
            let p = atom_bimodule(m, sa);
            for (b, tb) in d.terms(*i).iter().enumerate() {
                let q = atom_bimodule(m, tb);
                for h in hom0_from_indecomposable(sa.label, &p, &q) {
                    unknowns.push((*i, b, a, h));
                }
            }
        }
    }
    if unknowns.is_empty() {
        return Vec::new();
    }
    // Residual d_D f − f d_C, keyed by (degree, target, source, row, col, s).
    let mut eq: HashMap<(i32, usize, usize, usize, usize, u16), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, FieldScalar)>> = Vec::new();
    let mut push = |key: (i32, usize, usize), mat: &PolyMatrix, u: usize, rows: &mut Vec<Vec<(usize, FieldScalar)>>| {
        for r in 0..mat.rows() {
            for col in 0..mat.cols() {
                for (mo, val) in mat.get(r, col).terms() {
                    let n = eq.len();
                    let k = *eq.entry((key.0, key.1, key.2, r, col, mo.s)).or_insert(n);
                    if k == rows.len() {
                        rows.push(Vec::new());
                    }
                    rows[k].push((u, val.clone()));
                }
            }
        }
    };
    for (u, (i, b, a, h)) in unknowns.iter().enumerate() {
        if let Some(bl) = d.diff(*i) {
            for ((t, s), x) in bl {
                if *s == *b {
                    push((*i, *t, *a), &x.mul(h), u, &mut rows);
                }
            }
        }
        if let Some(bl) = c.diff(i - 1) {
            for ((t, s), x) in bl {
                if *t == *a {
                    push((i - 1, *b, *s), &h.mul(x).neg(), u, &mut rows);
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for mut row in rows {
        row.sort_by_key(|x| x.0);
        let mut merged: Vec<(usize, FieldScalar)> = Vec::new();
        for (k, v) in row {
            match merged.last_mut() {
                Some((lk, lv)) if *lk == k => *lv = lv.add(&v),
                _ => merged.push((k, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        ech.insert(merged);
    }
    ech.nullspace(m, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut f = ChainMap::default();
            for (u, coef) in v {
                let (i, b, a, h) = &unknowns[u];
                let entry = f
                    .components
                    .entry(*i)
                    .or_default()
                    .entry((*b, *a))
                    .or_insert_with(|| PolyMatrix::zeros(h.rows(), h.cols()));
                *entry = entry.add(&h.scale(&coef));
            }
            f
        })
        .collect()
}

/// Whether a degree-0 chain map between complexes of atoms is an
/// isomorphism: in each degree and for each atom type the scalar matrix of
/// components between copies of that atom must be invertible.
pub fn is_isomorphism(c: &ChainComplex, d: &ChainComplex, f: &ChainMap) -> bool {
    let m = c.m;
    for i in c.degrees().into_iter().chain(d.degrees()) {
        let src = c.terms(i);
        let tgt = d.terms(i);
        let mut groups: BTreeMap<Atom, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (a, x) in src.iter().enumerate() {
            groups.entry(*x).or_default().0.push(a);
        }
        for (b, x) in tgt.iter().enumerate() {
            groups.entry(*x).or_default().1.push(b);
        }
        for (_, (sa, tb)) in groups {
            if sa.len() != tb.len() {
                return false;
            }
            let mat: Vec<Vec<FieldScalar>> = tb
                .iter()
                .map(|&b| {
                    sa.iter()
                        .map(|&a| {
                            f.components
                                .get(&i)
                                .and_then(|bl| bl.get(&(b, a)))
                                .and_then(|x| x.get(0, 0).constant_term().cloned())
                                .unwrap_or_else(|| FieldScalar::zero(m))
                        })
                        .collect()
                })
                .collect();
            if dense_det(m, &mat).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Decides whether two minimal complexes are isomorphic by sampling seeded
/// random chain maps.
pub fn complexes_isomorphic(c: &ChainComplex, d: &ChainComplex, seed: u64, trials: usize) -> IsoResult {
    if c.atom_multiset() != d.atom_multiset() {
        return IsoResult::No("atom multisets differ".into());
    }
    if c.is_zero() {
        return IsoResult::Yes(ChainMap::default());
    }
    let basis = chain_map_space(c, d);
    if basis.is_empty() {
        return IsoResult::No("no nonzero chain maps".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut f = ChainMap::default();
        for g in &basis {
            let coef = FieldScalar::random(c.m, &mut rng, 5);
            for (i, bl) in &g.components {
                for (k, x) in bl {
                    let entry = f.components.entry(*i).or_default().entry(*k).or_insert_with(|| PolyMatrix::zeros(x.rows(), x.cols()));
                    *entry = entry.add(&x.scale(&coef));
                }
            }
        }
        if is_isomorphism(c, d, &f) {
            debug_assert!(f.check(c, d).is_ok());
            return IsoResult::Yes(f);
        }
    }
    IsoResult::Inconclusive
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, atoms)| {
                let s: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                let body = s.join(" ⊕ ");
                if *i == 0 {
                    format!("[{body}]")
                } else {
                    format!("{body} @{i}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" → "))
    }
}

/// Serializable form of a complex: atoms by reduced word and shift,
/// differential entries as polynomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub m: u8,
    pub terms: Vec<DegreeDump>,
    pub differentials: Vec<DifferentialDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDump {
    pub degree: i32,
    pub atoms: Vec<AtomDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomDump {
    pub word: String,
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialDump {
    pub degree: i32,
    pub blocks: Vec<BlockDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDump {
    pub source: usize,
    pub target: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn dump_matrix(x: &PolyMatrix) -> Vec<Vec<String>> {
    (0..x.rows()).map(|i| (0..x.cols()).map(|j| x.get(i, j).to_string()).collect()).collect()
}

pub fn parse_matrix(m: u8, rows: &[Vec<String>]) -> Result<PolyMatrix> {
    let parsed: Result<Vec<Vec<Poly>>> = rows.iter().map(|r| r.iter().map(|e| Poly::parse(m, e)).collect()).collect();
    Ok(PolyMatrix::from_rows(parsed?))
}

impl ChainComplex {
    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(i, atoms)| DegreeDump {
                    degree: *i,
                    atoms: atoms
                        .iter()
                        .map(|a| AtomDump {
                            word: a.label.word().iter().map(|l| l.as_char()).collect(),
                            shift: a.shift,
                        })
                        .collect(),
                })
                .collect(),
            differentials: self
                .diffs
                .iter()
                .map(|(i, bl)| DifferentialDump {
                    degree: *i,
                    blocks: bl
                        .iter()
                        .map(|((t, s), x)| BlockDump { source: *s, target: *t, entries: dump_matrix(x) })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_dump(d: &ComplexDump) -> Result<ChainComplex> {
        let m = d.m;
        let mut terms = BTreeMap::new();
        for t in &d.terms {
            let atoms: Result<Vec<Atom>> = t
                .atoms
                .iter()
                .map(|a| {
                    let letters: Option<Vec<Letter>> = a.word.chars().map(Letter::from_char).collect();
                    let letters = letters.ok_or_else(|| Error::InvalidInput(format!("bad atom word {}", a.word)))?;
                    Ok(Atom::new(Elem::from_word(m, &letters), a.shift))
                })
                .collect();
            terms.insert(t.degree, atoms?);
        }
        let mut diffs = BTreeMap::new();
        for dd in &d.differentials {
            let mut bl = Blocks::new();
            for b in &dd.blocks {
                bl.insert((b.target, b.source), parse_matrix(m, &b.entries)?);
            }
            diffs.insert(dd.degree, bl);
        }
        ChainComplex::from_parts(m, terms, diffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dump()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<ChainComplex> {
        let d: ComplexDump = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("complex JSON: {e}")))?;
        ChainComplex::from_dump(&d)
    }
}

/// Atoms of the minimal complex predicted by the Grothendieck class of a
/// perverse complex: `B_x(k)` sits in cohomological degree `k`.
pub fn perverse_atoms(h: &HeckeElement) -> Vec<(i32, Atom)> {
    let mut out = Vec::new();
    for (w, c) in h.to_kl() {
        for (&k, &n) in c.terms() {
            // Sign (−1)^k cancels the cohomological sign for perverse terms.
            let mult = if k.rem_euclid(2) == 0 { n } else { -n };
            for _ in 0..mult.max(0) {
                out.push((k, Atom::new(w, k)));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::braid_class;

    fn names(c: &ChainComplex) -> Vec<(i32, String)> {
        c.atom_multiset().into_iter().map(|(i, a)| (i, a.to_string())).collect()
    }

    #[test]
    fn fs_ft_minimal() {
        let m = 3;
        let b = BraidWord::parse("s t").unwrap();
        let c = ChainComplex::rouquier_braid(m, &b, false);
        c.check().unwrap();
        let min = c.minimal_form();
        min.check().unwrap();
        assert!(min.is_minimal());
        assert_eq!(min.class(), braid_class(m, &b));
        let n = names(&min);
        assert_eq!(n.len(), 4, "{min}");
    }

    #[test]
    fn inverse_cancels() {
        for m in 2..=4 {
            let b = BraidWord::parse("s s^-1").unwrap();
            let c = ChainComplex::rouquier_braid(m, &b, true);
            assert_eq!(names(&c), vec![(0, "R".to_string())]);
        }
    }

    #[test]
    fn braid_relation_m3() {
        let m = 3;
        let a = ChainComplex::rouquier_braid(m, &BraidWord::parse("s t s").unwrap(), true);
        let b = ChainComplex::rouquier_braid(m, &BraidWord::parse("t s t").unwrap(), true);
        assert!(complexes_isomorphic(&a, &b, 7, 4).is_yes());
        let c = ChainComplex::rouquier_braid(m, &BraidWord::parse("s t t").unwrap(), true);
        assert!(!complexes_isomorphic(&a, &c, 7, 4).is_yes());
    }

    #[test]
    fn json_round_trip() {
        let c = ChainComplex::rouquier_braid(4, &BraidWord::parse("s t^-1 s").unwrap(), true);
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn cone_of_psi() {
        let (p, n, f) = psi_link_split(3, Letter::S);
        f.check(&p, &n).unwrap();
        let c = cone(&p, &n, &f).minimal_form();
        assert_eq!(c.atom_count(), 2);
    }
}
