//! Partial traces `π_z^±` (kernel and cokernel of `ρ_z ⊗ 1 − 1 ⊗ ρ_z`) and
//! Hochschild cohomology through the Koszul complex in the `ρ` directions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::bimodule::Bimodule;
use crate::complexes::{Blocks, ChainComplex};
use crate::dihedral::Elem;
use crate::error::{Error, Result};
use crate::groebner::{graded_kernel, vector_degree, Lifter, PresentedModule};
use crate::indecomposable::{atom_bimodule, decompose, indecomposable, window_candidates, Atom, Decomposition};
use crate::matrix::PolyMatrix;
use crate::polyring::{realization, Letter, Poly};

/// Kernel (`Minus`) or cokernel (`Plus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

/// `ρ_z ⊗ 1 − 1 ⊗ ρ_z` on `M`, a degree-2 endomorphism.
pub fn rho_endomorphism(mm: &Bimodule, z: Letter) -> PolyMatrix {
    let rho = realization(mm.m).expect("supported m").rho(z);
    mm.left_action(&rho).sub(&PolyMatrix::identity(mm.m, mm.rank()).mul_poly(&rho))
}

/// `π_z^±(M)` as a bimodule, with the data to transport maps.
#[derive(Clone, Debug)]
pub struct Traced {
    pub module: Bimodule,
    pub sign: Sign,
    /// Kernel: columns of the inclusion into `M`. Cokernel: the projection
    /// `M → π⁺(M)` (rows indexed by the new basis).
    pub map: PolyMatrix,
    /// Cokernel only: a section picking the surviving basis vectors.
    section: PolyMatrix,
    lifter: Option<Arc<Mutex<Lifter>>>,
}

impl Traced {
    /// Matrix of the induced map `π(f): π(M) → π(N)` for a bimodule map
    /// `f: M → N` (`self` is `π(N)`, `dom` is `π(M)`).
    pub fn induced(&self, dom: &Traced, f: &PolyMatrix) -> Result<PolyMatrix> {
        match self.sign {
            Sign::Minus => {
                let v = f.mul(&dom.map);
                let lifter = self.lifter.as_ref().expect("kernel has a lifter");
                lifter.lock().lift_matrix(&v).ok_or_else(|| Error::contract("trace", "induced map does not lift through the kernel"))
            }
            Sign::Plus => Ok(self.map.mul(f).mul(&dom.section)),
        }
    }
}

/// Kernel or cokernel of `ρ_z^e` on `M`. Both must be free right modules.
pub fn trace_bimodule(mm: &Bimodule, z: Letter, sign: Sign) -> Result<Traced> {
    let m = mm.m;
    let t = rho_endomorphism(mm, z);
    match sign {
        Sign::Minus => {
            let (k, degs) = graded_kernel(m, &t, &mm.degrees);
            let mut lifter = Lifter::new(m, &k, &mm.degrees, &degs);
            let mut left = [PolyMatrix::zeros(0, 0), PolyMatrix::zeros(0, 0)];
            for x in 0..2 {
                left[x] = lifter
                    .lift_matrix(&mm.left[x].mul(&k))
                    .ok_or_else(|| Error::contract("trace", "kernel is not a sub-bimodule"))?;
            }
            let module = Bimodule { m, degrees: degs, left };
            Ok(Traced { module, sign, map: k, section: PolyMatrix::zeros(0, 0), lifter: Some(Arc::new(Mutex::new(lifter))) })
        }
        Sign::Plus => {
            let pres = PresentedModule::cokernel(mm.degrees.clone(), &t).minimal_generators(m);
            if !pres.is_free() {
                return Err(Error::contract("trace", "cokernel is not a free right module"));
            }
            let red = pres.reduction;
            let mut section = PolyMatrix::zeros(mm.rank(), pres.kept.len());
            for (i, &k) in pres.kept.iter().enumerate() {
                section.set(k, i, Poly::one(m));
            }
            let left = [red.mul(&mm.left[0]).mul(&section), red.mul(&mm.left[1]).mul(&section)];
            let module = Bimodule { m, degrees: pres.module.generator_degrees, left };
            Ok(Traced { module, sign, map: red, section, lifter: None })
        }
    }
}

/// `π_z^±(B_x)` together with its splitting into atoms of the `{e, other}`
/// category.
#[derive(Clone, Debug)]
pub struct TracedAtom {
    pub traced: Traced,
    pub decomposition: Decomposition,
}

type TraceTable = Mutex<HashMap<(u8, Elem, Letter, Sign), Arc<TracedAtom>>>;

fn trace_table() -> &'static TraceTable {
    static T: OnceLock<TraceTable> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `π_z^±(B_x)` (unshifted), cached.
pub fn trace_atom(m: u8, x: Elem, z: Letter, sign: Sign) -> Result<Arc<TracedAtom>> {
    if let Some(t) = trace_table().lock().get(&(m, x, z, sign)) {
        return Ok(t.clone());
    }
    let b = indecomposable(m, x);
    let traced = trace_bimodule(&b, z, sign)?;
    let labels = [Elem::E, Elem::simple(z.other())];
    let decomposition = decompose(&traced.module, &window_candidates(&traced.module, &labels))?;
    let out = Arc::new(TracedAtom { traced, decomposition });
    Ok(trace_table().lock().entry((m, x, z, sign)).or_insert(out).clone())
}

/// The atoms of `π_z^±(B_x(k))`.
pub fn trace_atom_summands(m: u8, atom: &Atom, z: Letter, sign: Sign) -> Result<Vec<Atom>> {
    let t = trace_atom(m, atom.label, z, sign)?;
    Ok(t.decomposition.atoms.iter().map(|a| a.shifted(atom.shift)).collect())
}

/// Applies `π_z^±` termwise to a complex of atoms; the result is again a
/// complex of atoms (labels `e` and the other letter).
pub fn trace_complex(c: &ChainComplex, z: Letter, sign: Sign) -> Result<ChainComplex> {
    let m = c.m;
    let mut terms: BTreeMap<i32, Vec<Atom>> = BTreeMap::new();
    let mut starts: HashMap<(i32, usize), usize> = HashMap::new();
    for (i, atoms) in c.all_terms() {
        let list = terms.entry(*i).or_default();
        for (a, atom) in atoms.iter().enumerate() {
            starts.insert((*i, a), list.len());
            list.extend(trace_atom_summands(m, atom, z, sign)?);
        }
    }
    let mut diffs: BTreeMap<i32, Blocks> = BTreeMap::new();
    for (i, blocks) in c.all_diffs() {
        let out = diffs.entry(*i).or_default();
        for ((b, a), f) in blocks {
            let sa = c.terms(*i)[*a];
            let tb = c.terms(i + 1)[*b];
            let ts = trace_atom(m, sa.label, z, sign)?;
            let tt = trace_atom(m, tb.label, z, sign)?;
            let g = tt.traced.induced(&ts.traced, f)?;
            let conv = tt.decomposition.proj.mul(&g).mul(&ts.decomposition.incl);
            let soff = ts.decomposition.offsets();
            let toff = tt.decomposition.offsets();
            for p in 0..tt.decomposition.atoms.len() {
                for q in 0..ts.decomposition.atoms.len() {
                    let blk = conv.block(toff[p], soff[q], toff[p + 1] - toff[p], soff[q + 1] - soff[q]);
                    if blk.is_zero() {
                        continue;
                    }
                    let key = (starts[&(i + 1, *b)] + p, starts[&(*i, *a)] + q);
                    let e = out.entry(key).or_insert_with(|| PolyMatrix::zeros(blk.rows(), blk.cols()));
                    *e = e.add(&blk);
                }
            }
        }
    }
    ChainComplex::from_parts(m, terms, diffs)
}

/// A graded module presented as a subquotient of a free module `F`:
/// generated by the columns of `gens` (vectors in `F`), subject to
/// `relations` (in generator coordinates).
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient_degrees: Vec<i32>,
    pub gens: PolyMatrix,
    pub module: PresentedModule,
}

/// `HH^0`, `HH^1`, `HH^2` of a bimodule, each with the data to transport
/// bimodule maps.
#[derive(Clone, Debug)]
pub struct Hochschild {
    pub groups: [Subquotient; 3],
}

fn koszul_maps(mm: &Bimodule) -> (PolyMatrix, PolyMatrix) {
    let ts = rho_endomorphism(mm, Letter::S);
    let tt = rho_endomorphism(mm, Letter::T);
    let d0 = PolyMatrix::vstack(&[&ts, &tt]);
    let d1 = PolyMatrix::hstack(&[&tt.neg(), &ts]);
    (d0, d1)
}

/// Degrees of the Koszul terms `M`, `M(2)²`, `M(4)`.
pub fn koszul_degrees(mm: &Bimodule, k: usize) -> Vec<i32> {
    match k {
        0 => mm.degrees.clone(),
        1 => mm.degrees.iter().chain(mm.degrees.iter()).map(|d| d - 2).collect(),
        2 => mm.degrees.iter().map(|d| d - 4).collect(),
        _ => Vec::new(),
    }
}

/// Degrees of the homogeneous columns of `a` inside a free module.
pub fn column_degrees(a: &PolyMatrix, row_degrees: &[i32]) -> Vec<i32> {
    (0..a.cols()).map(|j| vector_degree(&a.column(j), row_degrees).unwrap_or(0)).collect()
}

fn nonzero_columns(a: &PolyMatrix) -> PolyMatrix {
    let keep: Vec<usize> = (0..a.cols()).filter(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero())).collect();
    a.select_cols(&keep)
}

/// Cohomology of the Koszul cochain complex `M → M(2)² → M(4)` with maps
/// `(T_ρs, T_ρt)` and `(−T_ρt, T_ρs)`.
pub fn hochschild(mm: &Bimodule) -> Hochschild {
    let m = mm.m;
    let (d0, d1) = koszul_maps(mm);
    let k0 = koszul_degrees(mm, 0);
    let k1 = koszul_degrees(mm, 1);
    let k2 = koszul_degrees(mm, 2);
    let (z0, z0d) = graded_kernel(m, &d0, &k0);
    let hh0 = Subquotient { ambient_degrees: k0, gens: z0, module: PresentedModule::free(z0d) };
    let (z1, z1d) = graded_kernel(m, &d1, &k1);
    let rel1 = if z1.cols() == 0 {
        PolyMatrix::zeros(0, 0)
    } else {
        Lifter::new(m, &z1, &k1, &z1d).lift_matrix(&d0).expect("d1 ∘ d0 = 0")
    };
    let rel1 = nonzero_columns(&rel1);
    let rel1 = if rel1.rows() != z1.cols() { PolyMatrix::zeros(z1.cols(), 0) } else { rel1 };
    let hh1 = Subquotient { ambient_degrees: k1.clone(), gens: z1, module: PresentedModule::cokernel(z1d, &rel1) };
    let n2 = mm.rank();
    let rel2 = nonzero_columns(&d1);
    let rel2 = if rel2.rows() != n2 { PolyMatrix::zeros(n2, 0) } else { rel2 };
    let hh2 = Subquotient {
        ambient_degrees: k2.clone(),
        gens: PolyMatrix::identity(m, n2),
        module: PresentedModule::cokernel(k2, &rel2),
    };
    Hochschild { groups: [hh0, hh1, hh2] }
}

type HhTable = Mutex<HashMap<(u8, Elem), Arc<HochschildAtom>>>;

/// Hochschild data of `B_x` plus lifters for transporting maps.
pub struct HochschildAtom {
    pub data: Hochschild,
    lifters: [Mutex<Lifter>; 3],
}

fn hh_table() -> &'static HhTable {
    static T: OnceLock<HhTable> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn hochschild_atom(m: u8, x: Elem) -> Arc<HochschildAtom> {
    if let Some(h) = hh_table().lock().get(&(m, x)) {
        return h.clone();
    }
    let data = hochschild(&indecomposable(m, x));
    let lifters = [0, 1, 2].map(|k| {
        let g = &data.groups[k];
        Mutex::new(Lifter::new(m, &g.gens, &g.ambient_degrees, &g.module.generator_degrees))
    });
    let h = Arc::new(HochschildAtom { data, lifters });
    hh_table().lock().entry((m, x)).or_insert(h).clone()
}

/// Bimodule map `f` acting on the `k`-th Koszul term.
fn koszul_map(f: &PolyMatrix, k: usize) -> PolyMatrix {
    if k == 1 {
        PolyMatrix::block_diag(&[f, f])
    } else {
        f.clone()
    }
}

/// A cochain complex of presented graded modules; `maps[i]` acts on
/// generator coordinates `P_i → P_{i+1}`.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    pub m: u8,
    pub terms: BTreeMap<i32, PresentedModule>,
    pub maps: BTreeMap<i32, PolyMatrix>,
}

impl ModuleComplex {
    pub fn new(m: u8) -> ModuleComplex {
        ModuleComplex { m, terms: BTreeMap::new(), maps: BTreeMap::new() }
    }

    pub fn term(&self, i: i32) -> PresentedModule {
        self.terms.get(&i).cloned().unwrap_or_else(|| PresentedModule::free(Vec::new()))
    }

    pub fn map(&self, i: i32) -> PolyMatrix {
        self.maps.get(&i).cloned().unwrap_or_else(|| {
            PolyMatrix::zeros(self.term(i + 1).generator_degrees.len(), self.term(i).generator_degrees.len())
        })
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }
}

/// Termwise `HH^k` of a complex of atoms, with induced maps.
pub fn hochschild_complex(c: &ChainComplex, k: usize) -> Result<ModuleComplex> {
    let m = c.m;
    let mut out = ModuleComplex::new(m);
    let mut offsets: HashMap<(i32, usize), usize> = HashMap::new();
    for (i, atoms) in c.all_terms() {
        let mut degs = Vec::new();
        let mut rels: Vec<PolyMatrix> = Vec::new();
        for (a, atom) in atoms.iter().enumerate() {
            offsets.insert((*i, a), degs.len());
            let h = hochschild_atom(m, atom.label);
            let g = &h.data.groups[k].module;
            degs.extend(g.generator_degrees.iter().map(|d| d - atom.shift));
            rels.push(g.relations.clone());
        }
        let rel = PolyMatrix::block_diag(&rels.iter().collect::<Vec<_>>());
        out.terms.insert(*i, PresentedModule::cokernel(degs, &rel));
    }
    for (i, blocks) in c.all_diffs() {
        let mut d = PolyMatrix::zeros(out.term(i + 1).generator_degrees.len(), out.term(*i).generator_degrees.len());
        for ((b, a), f) in blocks {
            let hs = hochschild_atom(m, c.terms(*i)[*a].label);
            let ht = hochschild_atom(m, c.terms(i + 1)[*b].label);
            let v = koszul_map(f, k).mul(&hs.data.groups[k].gens);
            let g = ht.lifters[k]
                .lock()
                .lift_matrix(&v)
                .ok_or_else(|| Error::contract("trace", "induced Hochschild map does not lift"))?;
            d.put_block(offsets[&(i + 1, *b)], offsets[&(*i, *a)], &g);
        }
        out.maps.insert(*i, d);
    }
    Ok(out)
}

/// Hilbert series helpers for single bimodules.
pub fn hochschild_series(mm: &Bimodule, k: usize) -> crate::groebner::HilbertSeries {
    hochschild(mm).groups[k].module.hilbert_series()
}

/// `π_z^±(M)` for an arbitrary atom sum, returned as a bimodule.
pub fn trace_of_atoms(m: u8, atoms: &[Atom], z: Letter, sign: Sign) -> Result<Bimodule> {
    let parts: Vec<Bimodule> = atoms.iter().map(|a| trace_bimodule(&atom_bimodule(m, a), z, sign).map(|t| t.module)).collect::<Result<_>>()?;
    Ok(Bimodule::direct_sum(&parts.iter().collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::hom_space;
    use crate::braid::BraidWord;
    use crate::groebner::HilbertSeries;

    fn atom_names(v: &[Atom]) -> Vec<String> {
        let mut out: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn closed_forms_small() {
        let m = 3;
        let s = Letter::S;
        for sign in [Sign::Minus, Sign::Plus] {
            let e = if sign == Sign::Minus { -1 } else { 1 };
            assert_eq!(atom_names(&trace_atom_summands(m, &Atom::regular(0), s, sign).unwrap()), vec!["R"]);
            assert_eq!(
                atom_names(&trace_atom_summands(m, &Atom::new(Elem::simple(s), 0), s, sign).unwrap()),
                vec![Atom::regular(e).to_string()]
            );
            for x in [Elem::new(m, Letter::T, 1), Elem::new(m, Letter::S, 2), Elem::longest(m)] {
                let got = trace_atom_summands(m, &Atom::new(x, 0), s, sign).unwrap();
                let want = Atom::new(Elem::simple(Letter::T), e * (x.len as i32 - 1));
                assert_eq!(got, vec![want], "{x} {sign:?}");
            }
        }
    }

    #[test]
    fn representability_ranks() {
        let m = 3;
        let bt = indecomposable(m, Elem::simple(Letter::T));
        for x in Elem::all(m) {
            let b = indecomposable(m, x);
            let pi = trace_bimodule(&b, Letter::S, Sign::Minus).unwrap();
            // The shift (1) lowers degrees by one.
            let h = hom_space(&bt, &b).hilbert_series().shift(-1);
            assert_eq!(pi.module.hilbert_series(), h, "{x}");
        }
    }

    #[test]
    fn hh_of_r() {
        let r = Bimodule::regular(3, 0);
        let h = hochschild(&r);
        assert_eq!(h.groups[0].module.hilbert_series(), HilbertSeries::free(0));
        assert_eq!(h.groups[1].module.hilbert_series(), HilbertSeries::free(-2).scale(2));
        assert_eq!(h.groups[2].module.hilbert_series(), HilbertSeries::free(-4));
    }

    #[test]
    fn pi_plus_kills_fs() {
        let m = 3;
        let c = ChainComplex::rouquier_braid(m, &BraidWord::parse("s").unwrap(), true);
        let t = trace_complex(&c, Letter::S, Sign::Plus).unwrap().minimal_form();
        assert!(t.is_zero(), "{t}");
        let c = ChainComplex::rouquier_braid(m, &BraidWord::parse("s^-1").unwrap(), true);
        let t = trace_complex(&c, Letter::S, Sign::Minus).unwrap().minimal_form();
        assert!(t.is_zero(), "{t}");
    }
}
