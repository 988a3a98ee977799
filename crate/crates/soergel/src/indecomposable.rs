//! Canonical models of the indecomposable Soergel bimodules `B_x`, and exact
//! decomposition of bimodules into shifted copies of them.
//!
//! `B_x` is built once per `x` along its canonical reduced word: `B_{x'z}` is
//! the complement of `B_{x''}` inside `B_{x'} ⊗ B_z`. Every other
//! decomposition goes through Hom⁰ pairings, which is enough because
//! `End⁰(B_x) = K` and `Hom⁰(B_x, B_y) = 0` for `x ≠ y`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::bimodule::Bimodule;
#[cfg(test)]
use crate::bimodule::hom_degree;
use crate::groebner::Lifter;
use crate::dihedral::Elem;
use crate::error::{Error, Result};
use crate::hecke::{bs_class, kl_basis, HeckeElement};
use crate::linalg::{dense_inverse, from_dense, independent_rows, Echelon};
use crate::matrix::PolyMatrix;
use crate::polyring::{Letter, Mono, Poly};
use crate::scalars::FieldScalar;

/// A shifted indecomposable `B_label(shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub label: Elem,
    pub shift: i32,
}

impl Atom {
    pub fn new(label: Elem, shift: i32) -> Atom {
        Atom { label, shift }
    }

    pub fn regular(shift: i32) -> Atom {
        Atom { label: Elem::E, shift }
    }

    pub fn rank(&self) -> usize {
        if self.label.len == 0 {
            1
        } else {
            2 * self.label.len as usize
        }
    }

    pub fn shifted(&self, k: i32) -> Atom {
        Atom { label: self.label, shift: self.shift + k }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.label.is_identity() { "R".to_string() } else { format!("B_{}", self.label) };
        if self.shift == 0 {
            write!(f, "{name}")
        } else {
            write!(f, "{name}({})", self.shift)
        }
    }
}

type Table = Mutex<HashMap<(u8, Elem), Arc<Bimodule>>>;

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical model of `B_x` (unshifted).
pub fn indecomposable(m: u8, x: Elem) -> Arc<Bimodule> {
    if let Some(b) = table().lock().get(&(m, x)) {
        return b.clone();
    }
    let built = Arc::new(build_indecomposable(m, x).expect("indecomposable construction"));
    table().lock().entry((m, x)).or_insert(built).clone()
}

pub fn atom_bimodule(m: u8, atom: &Atom) -> Bimodule {
    indecomposable(m, atom.label).shifted(atom.shift)
}

fn build_indecomposable(m: u8, x: Elem) -> Result<Bimodule> {
    match x.len {
        0 => return Ok(Bimodule::regular(m, 0)),
        1 => return Ok(Bimodule::b_generator(m, x.start)),
        _ => {}
    }
    let word = x.word();
    let z = *word.last().expect("nonempty");
    let prefix = Elem::from_word(m, &word[..word.len() - 1]);
    let big = indecomposable(m, prefix).tensor(&Bimodule::b_generator(m, z));
    if prefix.len == 1 {
        return Ok(big);
    }
    let small_label = Elem::from_word(m, &word[..word.len() - 2]);
    let small = indecomposable(m, small_label);
    let (iota, pi) = split_pair(small_label, &small, &big)?
        .ok_or_else(|| Error::Internal(format!("B_{small_label} is not a summand of B_{prefix} B_{z}")))?;
    // Complement: columns of 1 − ιπ whose constant parts are independent.
    let n = big.rank();
    let comp = PolyMatrix::identity(m, n).sub(&iota.mul(&pi));
    let consts = comp.constant_part();
    let mut ech = Echelon::new();
    let mut chosen = Vec::new();
    for j in 0..n {
        let col: Vec<FieldScalar> = (0..n).map(|i| consts[i][j].clone()).collect();
        if ech.insert(from_dense(&col)) {
            chosen.push(j);
        }
    }
    let want = 2 * x.len as usize;
    if chosen.len() != want {
        return Err(Error::Internal(format!("complement of B_{small_label} has rank {} not {want}", chosen.len())));
    }
    let u = PolyMatrix::hstack(&[&comp.select_cols(&chosen), &iota]);
    let u_inv = u.graded_inverse(m)?;
    let mut degrees: Vec<i32> = chosen.iter().map(|&j| big.degrees[j]).collect();
    degrees.extend(small.degrees.iter().copied());
    let conj = big.change_basis(&u, &u_inv, degrees);
    let out = conj.leading_block(want);
    for side in 0..2 {
        if !conj.left[side].block(want, 0, n - want, want).is_zero() {
            return Err(Error::Internal("complement is not a sub-bimodule".into()));
        }
    }
    out.check()?;
    Ok(out)
}

/// Finds `ι: P → M`, `π: M → P` of degree 0 with `πι = 1`, if `P` (assumed
/// indecomposable) is a summand of `M`.
fn split_pair(label: Elem, p: &Bimodule, mm: &Bimodule) -> Result<Option<(PolyMatrix, PolyMatrix)>> {
    let (ins, outs, g) = pairing(label, p, mm);
    let Some((i, j)) = (0..outs.len()).flat_map(|i| (0..ins.len()).map(move |j| (i, j))).find(|&(i, j)| !g[i][j].is_zero())
    else {
        return Ok(None);
    };
    let c = g[i][j].inv()?;
    Ok(Some((ins[j].clone(), outs[i].scale(&c))))
}

/// Hom⁰ bases both ways and the scalar pairing `G[a][b] = (π_a ∘ ι_b) / id`.
fn pairing(label: Elem, p: &Bimodule, mm: &Bimodule) -> (Vec<PolyMatrix>, Vec<PolyMatrix>, Vec<Vec<FieldScalar>>) {
    let ins = hom0_from_indecomposable(label, p, mm);
    if ins.is_empty() {
        return (ins, Vec::new(), Vec::new());
    }
    let outs = hom0_to_indecomposable(label, mm, p);
    let g = outs
        .iter()
        .map(|o| {
            ins.iter()
                .map(|i| {
                    let e = o.mul(i);
                    e.get(0, 0).constant_term().cloned().unwrap_or_else(|| FieldScalar::zero(p.m))
                })
                .collect()
        })
        .collect();
    (ins, outs, g)
}

/// `M ≅ ⊕ atoms`, with `incl: ⊕ atoms → M` and `proj: M → ⊕ atoms` mutually
/// inverse degree-0 bimodule maps.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub atoms: Vec<Atom>,
    pub incl: PolyMatrix,
    pub proj: PolyMatrix,
}

impl Decomposition {
    /// Offsets of each atom's block inside the sum.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.atoms.len() + 1);
        let mut acc = 0;
        for a in &self.atoms {
            out.push(acc);
            acc += a.rank();
        }
        out.push(acc);
        out
    }
}

/// Decomposes `M` into atoms drawn from `candidates` (each tried once; its
/// multiplicity is found from the Hom⁰ pairing). Fails unless the atoms
/// found exhaust `M`.
pub fn decompose(mm: &Bimodule, candidates: &[Atom]) -> Result<Decomposition> {
    let m = mm.m;
    let mut atoms = Vec::new();
    let mut incl_cols: Vec<PolyMatrix> = Vec::new();
    let mut proj_rows: Vec<PolyMatrix> = Vec::new();
    let mut total = 0;
    let mut sorted: Vec<Atom> = candidates.to_vec();
    sorted.sort();
    sorted.dedup();
    for atom in sorted {
        if total == mm.rank() {
            break;
        }
        let p = atom_bimodule(m, &atom);
        let (ins, outs, g) = pairing(atom.label, &p, mm);
        if ins.is_empty() || outs.is_empty() {
            continue;
        }
        let rows: Vec<_> = g.iter().map(|r| from_dense(r)).collect();
        let ri = independent_rows(&rows);
        if ri.is_empty() {
            continue;
        }
        let cols: Vec<_> = (0..ins.len()).map(|j| from_dense(&ri.iter().map(|&i| g[i][j].clone()).collect::<Vec<_>>())).collect();
        let cj = independent_rows(&cols);
        let h: Vec<Vec<FieldScalar>> = ri.iter().map(|&i| cj.iter().map(|&j| g[i][j].clone()).collect()).collect();
        let h_inv = dense_inverse(m, &h)?;
        for (a, row) in h_inv.iter().enumerate() {
            let mut pr = PolyMatrix::zeros(p.rank(), mm.rank());
            for (b, &i) in ri.iter().enumerate() {
                if !row[b].is_zero() {
                    pr = pr.add(&outs[i].scale(&row[b]));
                }
            }
            let _ = a;
            proj_rows.push(pr);
        }
        for &j in &cj {
            incl_cols.push(ins[j].clone());
            atoms.push(atom);
            total += p.rank();
        }
    }
    if total != mm.rank() {
        return Err(Error::contract(
            "complexes",
            format!("decomposition found atoms of total rank {total}, bimodule has rank {}", mm.rank()),
        ));
    }
    let incl = PolyMatrix::hstack(&incl_cols.iter().collect::<Vec<_>>());
    let proj0 = PolyMatrix::vstack(&proj_rows.iter().collect::<Vec<_>>());
    let t = proj0.mul(&incl);
    let proj = t.graded_inverse(m)?.mul(&proj0);
    debug_assert!(proj.mul(&incl) == PolyMatrix::identity(m, total));
    Ok(Decomposition { atoms, incl, proj })
}

/// Atoms predicted by a Hecke class written in the KL basis.
pub fn atoms_of_class(h: &HeckeElement) -> Result<Vec<Atom>> {
    let mut out = Vec::new();
    for (w, c) in h.to_kl() {
        for (&k, &n) in c.terms() {
            if n < 0 {
                return Err(Error::Internal(format!("negative multiplicity for B_{w}")));
            }
            out.extend(std::iter::repeat_n(Atom::new(w, k), n as usize));
        }
    }
    Ok(out)
}

/// Atoms `R(k)` and `B_letter(k)` whose degrees fit inside those of `M`.
pub fn window_candidates(mm: &Bimodule, labels: &[Elem]) -> Vec<Atom> {
    let lo = mm.degrees.iter().copied().min().unwrap_or(0);
    let hi = mm.degrees.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for &label in labels {
        let l = label.len as i32;
        // Degrees of B_label(k) run from −l−k to l−k.
        for k in (l - hi)..=(-l - lo) {
            out.push(Atom::new(label, k));
        }
    }
    out
}

/// `B_x` written as a cyclic bimodule: basis element `j` equals
/// `Σ_l α^{monos[l]} · g · q[l][j]`, where `g` is the unique basis element of
/// lowest degree.
#[derive(Clone, Debug)]
struct Cyclic {
    gen: usize,
    monos: Vec<Mono>,
    q: PolyMatrix,
}

type CyclicTable = Mutex<HashMap<(u8, Elem, bool), Arc<Cyclic>>>;

fn cyclic_table() -> &'static CyclicTable {
    static T: OnceLock<CyclicTable> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cyclic presentation of the canonical model (or of its dual model).
fn cyclic(m: u8, x: Elem, dual: bool) -> Arc<Cyclic> {
    if let Some(c) = cyclic_table().lock().get(&(m, x, dual)) {
        return c.clone();
    }
    let base = indecomposable(m, x);
    let model = if dual { base.dual_d() } else { (*base).clone() };
    let c = Arc::new(cyclic_presentation(&model).expect("indecomposables are cyclic"));
    cyclic_table().lock().entry((m, x, dual)).or_insert(c).clone()
}

/// Left multiples `α^mono · v` for each listed monomial.
fn left_orbit(mm: &Bimodule, v: &[Poly], monos: &[Mono]) -> Vec<Vec<Poly>> {
    let mut memo: HashMap<Mono, Vec<Poly>> = HashMap::new();
    memo.insert(Mono::ONE, v.to_vec());
    monos.iter().map(|&mo| orbit_entry(mm, mo, &mut memo)).collect()
}

fn orbit_entry(mm: &Bimodule, mo: Mono, memo: &mut HashMap<Mono, Vec<Poly>>) -> Vec<Poly> {
    if let Some(x) = memo.get(&mo) {
        return x.clone();
    }
    let (prev, side) = if mo.s > 0 { (Mono::new(mo.s - 1, mo.t), 0) } else { (Mono::new(0, mo.t - 1), 1) };
    let base = orbit_entry(mm, prev, memo);
    let mat = &mm.left[side];
    let next: Vec<Poly> = (0..mat.rows())
        .map(|i| {
            let mut acc = Poly::zero();
            for (j, x) in base.iter().enumerate() {
                let e = mat.get(i, j);
                if !x.is_zero() && !e.is_zero() {
                    acc.add_assign(&e.mul(x));
                }
            }
            acc
        })
        .collect();
    memo.insert(mo, next.clone());
    next
}

fn cyclic_presentation(p: &Bimodule) -> Result<Cyclic> {
    let m = p.m;
    let lo = *p.degrees.iter().min().expect("nonzero bimodule");
    let hi = *p.degrees.iter().max().expect("nonzero bimodule");
    let gens: Vec<usize> = (0..p.rank()).filter(|&i| p.degrees[i] == lo).collect();
    if gens.len() != 1 {
        return Err(Error::Internal("lowest degree is not one-dimensional".into()));
    }
    let gen = gens[0];
    let n = ((hi - lo) / 2) as u16;
    let monos: Vec<Mono> = (0..=n).flat_map(Mono::of_total).collect();
    let mut e = vec![Poly::zero(); p.rank()];
    e[gen] = Poly::one(m);
    let orbit = left_orbit(p, &e, &monos);
    let through = PolyMatrix::from_fn(p.rank(), monos.len(), |i, l| orbit[l][i].clone());
    let col_degrees: Vec<i32> = monos.iter().map(|mo| lo + mo.degree()).collect();
    let mut lifter = Lifter::new(m, &through, &p.degrees, &col_degrees);
    let q = lifter
        .lift_matrix(&PolyMatrix::identity(m, p.rank()))
        .ok_or_else(|| Error::Internal("bimodule is not generated by its lowest-degree element".into()))?;
    Ok(Cyclic { gen, monos, q })
}

/// Degree-0 maps out of a cyclic model `p` into `M`.
fn hom0_cyclic(p: &Bimodule, cyc: &Cyclic, mm: &Bimodule) -> Vec<PolyMatrix> {
    let m = mm.m;
    let dg = p.degrees[cyc.gen];
    let mut unknowns: Vec<(usize, Mono)> = Vec::new();
    for (i, d) in mm.degrees.iter().enumerate() {
        let e = dg - d;
        if e >= 0 && e % 2 == 0 {
            for mo in Mono::of_total((e / 2) as u16) {
                unknowns.push((i, mo));
            }
        }
    }
    if unknowns.is_empty() {
        return Vec::new();
    }
    let candidates: Vec<PolyMatrix> = unknowns
        .iter()
        .map(|&(i, mo)| {
            let mut v = vec![Poly::zero(); mm.rank()];
            v[i] = Poly::monomial(mo, FieldScalar::one(m));
            let orbit = left_orbit(mm, &v, &cyc.monos);
            let mut f = PolyMatrix::zeros(mm.rank(), p.rank());
            for (l, w) in orbit.iter().enumerate() {
                for j in 0..p.rank() {
                    let c = cyc.q.get(l, j);
                    if c.is_zero() {
                        continue;
                    }
                    for (r, x) in w.iter().enumerate() {
                        if !x.is_zero() {
                            let val = f.get(r, j).add(&x.mul(c));
                            f.set(r, j, val);
                        }
                    }
                }
            }
            f
        })
        .collect();
    // Intertwining residuals, flattened to (side, row, col, s-exponent).
    let mut eq_index: HashMap<(usize, usize, usize, u16), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, FieldScalar)>> = Vec::new();
    for (u, f) in candidates.iter().enumerate() {
        for x in 0..2 {
            let res = mm.left[x].mul(f).sub(&f.mul(&p.left[x]));
            for r in 0..res.rows() {
                for c in 0..res.cols() {
                    for (mo, val) in res.get(r, c).terms() {
                        let n = eq_index.len();
                        let k = *eq_index.entry((x, r, c, mo.s)).or_insert(n);
                        if k == rows.len() {
                            rows.push(Vec::new());
                        }
                        rows[k].push((u, val.clone()));
                    }
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for mut row in rows {
        row.sort_by_key(|x| x.0);
        ech.insert(row);
    }
    ech.nullspace(m, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut f = PolyMatrix::zeros(mm.rank(), p.rank());
            for (u, c) in v {
                f = f.add(&candidates[u].scale(&c));
            }
            f
        })
        .collect()
}

/// Basis of `Hom⁰(B_label(k), M)`; `p` must be `atom_bimodule` of that atom.
pub fn hom0_from_indecomposable(label: Elem, p: &Bimodule, mm: &Bimodule) -> Vec<PolyMatrix> {
    hom0_cyclic(p, &cyclic(p.m, label, false), mm)
}

/// Basis of `Hom⁰(M, B_label(k))`, via `Hom⁰(𝔻B, 𝔻M)` and transposition.
pub fn hom0_to_indecomposable(label: Elem, mm: &Bimodule, p: &Bimodule) -> Vec<PolyMatrix> {
    hom0_cyclic(&p.dual_d(), &cyclic(p.m, label, true), &mm.dual_d()).into_iter().map(|f| f.transpose()).collect()
}

type TensorTable = Mutex<HashMap<(u8, Elem, Letter), Arc<Decomposition>>>;

fn tensor_table() -> &'static TensorTable {
    static T: OnceLock<TensorTable> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Decomposition of `B_x ⊗ B_z` (cached).
pub fn tensor_letter(m: u8, x: Elem, z: Letter) -> Arc<Decomposition> {
    if let Some(d) = tensor_table().lock().get(&(m, x, z)) {
        return d.clone();
    }
    let big = indecomposable(m, x).tensor(&Bimodule::b_generator(m, z));
    let class = kl_basis(m, x).mul(&kl_basis(m, Elem::simple(z)));
    let cands = atoms_of_class(&class).expect("positive class");
    let d = Arc::new(decompose(&big, &cands).expect("tensor decomposition"));
    tensor_table().lock().entry((m, x, z)).or_insert(d).clone()
}

/// Splits `BS(word)(shift)` into atoms.
pub fn split_bott_samelson(m: u8, word: &[Letter], shift: i32) -> Result<Decomposition> {
    let bs = Bimodule::bott_samelson(m, word, shift);
    let cands: Vec<Atom> = atoms_of_class(&bs_class(m, word))?.into_iter().map(|a| a.shifted(shift)).collect();
    decompose(&bs, &cands)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_degrees() {
        for m in 2..=5u8 {
            for x in Elem::all(m) {
                let b = indecomposable(m, x);
                b.check().unwrap();
                assert_eq!(b.rank(), Atom::new(x, 0).rank());
                // Graded rank is palindromic.
                let mut d = b.degrees.clone();
                let mut neg: Vec<i32> = d.iter().map(|x| -x).collect();
                d.sort();
                neg.sort();
                assert_eq!(d, neg, "B_{x} at m={m}");
            }
        }
    }

    #[test]
    fn endomorphisms_of_degree_zero_are_scalars() {
        for m in 3..=4u8 {
            for x in Elem::all(m) {
                let b = indecomposable(m, x);
                assert_eq!(hom_degree(&b, &b, 0).len(), 1, "B_{x}");
            }
        }
    }

    #[test]
    fn bs_ss_splits() {
        let d = split_bott_samelson(3, &[Letter::S, Letter::S], 0).unwrap();
        let mut atoms = d.atoms.clone();
        atoms.sort();
        assert_eq!(atoms, vec![Atom::new(Elem::simple(Letter::S), -1), Atom::new(Elem::simple(Letter::S), 1)]);
        let d = split_bott_samelson(3, &[Letter::T, Letter::S, Letter::T], 0).unwrap();
        let labels: Vec<String> = d.atoms.iter().map(|a| a.to_string()).collect();
        assert_eq!(labels, vec!["B_t", "B_sts"]);
    }
}
