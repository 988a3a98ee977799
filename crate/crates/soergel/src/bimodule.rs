//! Graded `R`-bimodules that are free as right modules: a list of basis
//! degrees plus the matrices of left multiplication by `α_s` and `α_t`.

use std::collections::HashMap;


use crate::error::{Error, Result};
use crate::groebner::{graded_kernel, HilbertSeries, PresentedModule};
use crate::linalg::{Echelon, SVec};
use crate::matrix::PolyMatrix;
use crate::polyring::{realization, Letter, Mono, Poly};
use crate::rational::Rat;
use crate::scalars::FieldScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub m: u8,
    /// Internal degree of each right basis element.
    pub degrees: Vec<i32>,
    /// `left[x]` is the matrix of left multiplication by `α_x`; column `j`
    /// holds the coordinates of `α_x · e_j`.
    pub left: [PolyMatrix; 2],
}

impl Bimodule {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// `R(shift)`: rank one with its generator in degree `−shift`.
    pub fn regular(m: u8, shift: i32) -> Bimodule {
        Bimodule {
            m,
            degrees: vec![-shift],
            left: [
                PolyMatrix::from_rows(vec![vec![Poly::var(m, Letter::S)]]),
                PolyMatrix::from_rows(vec![vec![Poly::var(m, Letter::T)]]),
            ],
        }
    }

    pub fn zero(m: u8) -> Bimodule {
        Bimodule { m, degrees: vec![], left: [PolyMatrix::zeros(0, 0), PolyMatrix::zeros(0, 0)] }
    }

    /// `B_x = R ⊗_{R^x} R(1)` in the basis `1⊗1`, `α_x⊗1`.
    pub fn b_generator(m: u8, letter: Letter) -> Bimodule {
        let real = realization(m).expect("supported m");
        let a = real.alpha(letter);
        let a2 = a.mul(&a);
        let left = Letter::BOTH.map(|x| {
            let (g, h) = real.invariant_split(&real.alpha(x), letter);
            PolyMatrix::from_rows(vec![vec![g.clone(), a2.mul(&h)], vec![h, g]])
        });
        Bimodule { m, degrees: vec![-1, 1], left }
    }

    /// `M(k)`: all degrees lowered by `k`.
    pub fn shifted(&self, k: i32) -> Bimodule {
        Bimodule { m: self.m, degrees: self.degrees.iter().map(|d| d - k).collect(), left: self.left.clone() }
    }

    /// Left action of an arbitrary polynomial.
    pub fn left_action(&self, f: &Poly) -> PolyMatrix {
        eval_matrix_poly(self.m, f, &self.left[0], &self.left[1], self.rank())
    }

    /// Graded rank as a numerator over `(1 − Q²)²`.
    pub fn hilbert_series(&self) -> HilbertSeries {
        self.degrees.iter().fold(HilbertSeries::zero(), |h, d| h.add(&HilbertSeries::free(*d)))
    }

    pub fn tensor(&self, n: &Bimodule) -> Bimodule {
        let (rm, rn) = (self.rank(), n.rank());
        let mut degrees = Vec::with_capacity(rm * rn);
        for dm in &self.degrees {
            for dn in &n.degrees {
                degrees.push(dm + dn);
            }
        }
        let mut cache: HashMap<Poly, PolyMatrix> = HashMap::new();
        let left = [0, 1].map(|x| {
            let mut out = PolyMatrix::zeros(rm * rn, rm * rn);
            for k in 0..rm {
                for i in 0..rm {
                    let e = self.left[x].get(k, i);
                    if e.is_zero() {
                        continue;
                    }
                    let block = cache.entry(e.clone()).or_insert_with(|| n.left_action(e));
                    out.put_block(k * rn, i * rn, block);
                }
            }
            out
        });
        Bimodule { m: self.m, degrees, left }
    }

    /// `BS(word)(shift)`.
    pub fn bott_samelson(m: u8, word: &[Letter], shift: i32) -> Bimodule {
        let mut out = Bimodule::regular(m, shift);
        for &x in word {
            out = out.tensor(&Bimodule::b_generator(m, x));
        }
        out
    }

    /// Right-module dual `Hom_R(M, R)`: degrees negated, left action by
    /// precomposition, i.e. transposed matrices.
    pub fn dual_d(&self) -> Bimodule {
        Bimodule {
            m: self.m,
            degrees: self.degrees.iter().map(|d| -d).collect(),
            left: [self.left[0].transpose(), self.left[1].transpose()],
        }
    }

    /// Checks that the left actions commute and are homogeneous of degree 2.
    pub fn check(&self) -> Result<()> {
        for x in 0..2 {
            self.left[x].check_homogeneous(&self.degrees, &self.degrees, 2)?;
        }
        if self.left[0].mul(&self.left[1]) != self.left[1].mul(&self.left[0]) {
            return Err(Error::contract("bimodule", "left actions of a_s and a_t do not commute"));
        }
        Ok(())
    }

    /// Direct sum.
    pub fn direct_sum(parts: &[&Bimodule]) -> Bimodule {
        let m = parts.first().map_or(3, |p| p.m);
        let degrees = parts.iter().flat_map(|p| p.degrees.iter().copied()).collect();
        let left = [0, 1].map(|x| PolyMatrix::block_diag(&parts.iter().map(|p| &p.left[x]).collect::<Vec<_>>()));
        Bimodule { m, degrees, left }
    }

    /// Conjugates by an invertible change of basis `u` (columns = new basis
    /// in old coordinates) whose inverse is `u_inv`.
    pub fn change_basis(&self, u: &PolyMatrix, u_inv: &PolyMatrix, new_degrees: Vec<i32>) -> Bimodule {
        let left = [0, 1].map(|x| u_inv.mul(&self.left[x]).mul(u));
        Bimodule { m: self.m, degrees: new_degrees, left }
    }

    /// Restriction to the first `k` basis vectors, assumed to span a
    /// sub-bimodule.
    pub fn leading_block(&self, k: usize) -> Bimodule {
        let left = [0, 1].map(|x| self.left[x].block(0, 0, k, k));
        Bimodule { m: self.m, degrees: self.degrees[..k].to_vec(), left }
    }
}

/// Evaluates `f(A, B)` for commuting matrices `A`, `B`.
pub fn eval_matrix_poly(m: u8, f: &Poly, a: &PolyMatrix, b: &PolyMatrix, n: usize) -> PolyMatrix {
    let mut pa = vec![PolyMatrix::identity(m, n)];
    let mut pb = vec![PolyMatrix::identity(m, n)];
    let mut acc = PolyMatrix::zeros(n, n);
    for (mo, c) in f.terms() {
        while pa.len() <= mo.s as usize {
            let next = pa.last().unwrap().mul(a);
            pa.push(next);
        }
        while pb.len() <= mo.t as usize {
            let next = pb.last().unwrap().mul(b);
            pb.push(next);
        }
        let term = if mo.s == 0 {
            pb[mo.t as usize].clone()
        } else if mo.t == 0 {
            pa[mo.s as usize].clone()
        } else {
            pa[mo.s as usize].mul(&pb[mo.t as usize])
        };
        acc = acc.add(&term.scale(c));
    }
    acc
}

/// A homogeneous bimodule map, stored as a `codomain.rank × domain.rank`
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMorphism {
    pub matrix: PolyMatrix,
    pub degree: i32,
}

impl BimoduleMorphism {
    pub fn new(dom: &Bimodule, cod: &Bimodule, matrix: PolyMatrix, degree: i32) -> Result<BimoduleMorphism> {
        check_morphism(dom, cod, &matrix, degree)?;
        Ok(BimoduleMorphism { matrix, degree })
    }

    pub fn compose(&self, first: &BimoduleMorphism) -> BimoduleMorphism {
        BimoduleMorphism { matrix: self.matrix.mul(&first.matrix), degree: self.degree + first.degree }
    }
}

/// Checks homogeneity and intertwining of a candidate morphism.
pub fn check_morphism(dom: &Bimodule, cod: &Bimodule, matrix: &PolyMatrix, degree: i32) -> Result<()> {
    if matrix.shape() != (cod.rank(), dom.rank()) {
        return Err(Error::contract("bimodule", "morphism matrix has the wrong shape"));
    }
    matrix.check_homogeneous(&cod.degrees, &dom.degrees, degree)?;
    for x in 0..2 {
        if cod.left[x].mul(matrix) != matrix.mul(&dom.left[x]) {
            return Err(Error::contract("bimodule", "matrix does not intertwine the left actions"));
        }
    }
    Ok(())
}

/// `B_x → R(1)`, `1⊗1 ↦ 1`, `α⊗1 ↦ α` (multiplication).
pub fn dot_out(m: u8, letter: Letter) -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![Poly::one(m), Poly::var(m, letter)]])
}

/// `R(−1) → B_x`, `1 ↦ (α⊗1 + 1⊗α)/2`, so that `dot_out ∘ dot_in = α`.
pub fn dot_in(m: u8, letter: Letter) -> PolyMatrix {
    let half = FieldScalar::from_rat(m, Rat::new(1, 2));
    PolyMatrix::from_rows(vec![vec![Poly::var(m, letter).scale(&half)], vec![Poly::constant(half)]])
}

/// Index of the unknown coefficient of monomial `α_s^a α_t^b` (total `n`) in
/// entry `(i, j)` of a candidate morphism matrix.
struct HomUnknowns {
    list: Vec<(usize, usize, Mono)>,
}

/// Basis of `Hom^D(M, N)` over `K` (homogeneous intertwiners of degree `D`).
pub fn hom_degree(mm: &Bimodule, nn: &Bimodule, degree: i32) -> Vec<PolyMatrix> {
    let m = mm.m;
    let (rn, rm) = (nn.rank(), mm.rank());
    let mut unknowns = HomUnknowns { list: Vec::new() };
    for i in 0..rn {
        for j in 0..rm {
            let e = degree + mm.degrees[j] - nn.degrees[i];
            if e < 0 || e % 2 != 0 {
                continue;
            }
            for mo in Mono::of_total((e / 2) as u16) {
                unknowns.list.push((i, j, mo));
            }
        }
    }
    if unknowns.list.is_empty() {
        return Vec::new();
    }
    // Equation index: (x, i, j, s-exponent of the output monomial).
    let mut eq_index: HashMap<(usize, usize, usize, u16), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, FieldScalar)>> = Vec::new();
    let mut push = |key: (usize, usize, usize, u16), u: usize, c: FieldScalar, entries: &mut Vec<Vec<(usize, FieldScalar)>>| {
        let n = eq_index.len();
        let idx = *eq_index.entry(key).or_insert(n);
        if idx == entries.len() {
            entries.push(Vec::new());
        }
        entries[idx].push((u, c));
    };
    for (u, &(i0, j0, mo)) in unknowns.list.iter().enumerate() {
        for x in 0..2 {
            // L^N Φ: column j0 gains L^N[:, i0]·mono.
            for i in 0..rn {
                for (tm, c) in nn.left[x].get(i, i0).terms() {
                    push((x, i, j0, tm.mul(mo).s), u, c.clone(), &mut entries);
                }
            }
            // −Φ L^M: row i0 gains −mono·L^M[j0, :].
            for j in 0..rm {
                for (tm, c) in mm.left[x].get(j0, j).terms() {
                    push((x, i0, j, tm.mul(mo).s), u, c.neg(), &mut entries);
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for row in entries {
        ech.insert(merge_row(row));
    }
    ech.nullspace(m, unknowns.list.len())
        .into_iter()
        .map(|v| {
            let mut terms: HashMap<(usize, usize), Vec<(Mono, FieldScalar)>> = HashMap::new();
            for (u, c) in v {
                let (i, j, mo) = unknowns.list[u];
                terms.entry((i, j)).or_default().push((mo, c));
            }
            let mut mat = PolyMatrix::zeros(rn, rm);
            for ((i, j), t) in terms {
                mat.set(i, j, Poly::from_terms(t));
            }
            mat
        })
        .collect()
}

fn merge_row(mut row: Vec<(usize, FieldScalar)>) -> SVec {
    row.sort_by_key(|x| x.0);
    let mut out: SVec = Vec::with_capacity(row.len());
    for (k, c) in row {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// The right `R`-module `Hom(M, N)` of all bimodule maps, as a free module
/// with explicit generators (intertwiners) and their degrees.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub generators: Vec<PolyMatrix>,
    pub degrees: Vec<i32>,
}

impl HomSpace {
    pub fn hilbert_series(&self) -> HilbertSeries {
        self.degrees.iter().fold(HilbertSeries::zero(), |h, d| h.add(&HilbertSeries::free(*d)))
    }

    pub fn presented(&self) -> PresentedModule {
        PresentedModule::free(self.degrees.clone())
    }
}

/// Hom space computed as the syzygy module of the intertwining equations.
pub fn hom_space(mm: &Bimodule, nn: &Bimodule) -> HomSpace {
    let m = mm.m;
    let (rn, rm) = (nn.rank(), mm.rank());
    let n = rn * rm;
    if n == 0 {
        return HomSpace { generators: vec![], degrees: vec![] };
    }
    // Unknown Φ vectorised as index i·rm + j, position weight deg N_i − deg M_j.
    let weights: Vec<i32> = (0..n).map(|k| nn.degrees[k / rm] - mm.degrees[k % rm]).collect();
    let mut map = PolyMatrix::zeros(2 * n, n);
    for x in 0..2 {
        for i0 in 0..rn {
            for j0 in 0..rm {
                let u = i0 * rm + j0;
                for i in 0..rn {
                    let e = nn.left[x].get(i, i0);
                    if !e.is_zero() {
                        let r = x * n + i * rm + j0;
                        let v = map.get(r, u).add(e);
                        map.set(r, u, v);
                    }
                }
                for j in 0..rm {
                    let e = mm.left[x].get(j0, j);
                    if !e.is_zero() {
                        let r = x * n + i0 * rm + j;
                        let v = map.get(r, u).sub(e);
                        map.set(r, u, v);
                    }
                }
            }
        }
    }
    let (k, degs) = graded_kernel(m, &map, &weights);
    let generators = (0..k.cols())
        .map(|c| PolyMatrix::from_fn(rn, rm, |i, j| k.get(i * rm + j, c).clone()))
        .collect();
    HomSpace { generators, degrees: degs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_s_left_action() {
        let b = Bimodule::b_generator(3, Letter::S);
        assert_eq!(b.left[0], PolyMatrix::from_rows(vec![
            vec![Poly::zero(), Poly::parse(3, "a_s^2").unwrap()],
            vec![Poly::one(3), Poly::zero()],
        ]));
        assert_eq!(b.left[1].get(0, 0), &Poly::parse(3, "a_t + 1/2*a_s").unwrap());
        assert_eq!(b.left[1].get(1, 0), &Poly::parse(3, "-1/2").unwrap());
        b.check().unwrap();
    }

    #[test]
    fn dots_compose_to_alpha() {
        let m = 3;
        let bs = Bimodule::b_generator(m, Letter::S);
        check_morphism(&bs, &Bimodule::regular(m, 1), &dot_out(m, Letter::S), 0).unwrap();
        check_morphism(&Bimodule::regular(m, -1), &bs, &dot_in(m, Letter::S), 0).unwrap();
        let comp = dot_out(m, Letter::S).mul(&dot_in(m, Letter::S));
        assert_eq!(comp.get(0, 0), &Poly::var(m, Letter::S));
    }

    #[test]
    fn hom_bt_bt() {
        let bt = Bimodule::b_generator(3, Letter::T);
        let h = hom_space(&bt, &bt);
        assert_eq!(h.degrees, vec![0, 2]);
        assert_eq!(hom_degree(&bt, &bt, 0).len(), 1);
    }
}
