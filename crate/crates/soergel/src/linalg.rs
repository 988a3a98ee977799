//! Sparse linear algebra over `K_m`: echelon forms with nullspaces, and
//! spans that can write each member in terms of the inserted vectors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalars::FieldScalar;

/// A sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SVec = Vec<(usize, FieldScalar)>;

/// `a + c·b`.
pub fn axpy(a: &SVec, c: &FieldScalar, b: &SVec) -> SVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|x| x.0);
        let bj = b.get(j).map(|x| x.0);
        match (ai, bj) {
            (Some(x), Some(y)) if x == y => {
                let v = a[i].1.add(&c.mul(&b[j].1));
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            _ => {
                out.push((b[j].0, c.mul(&b[j].1)));
                j += 1;
            }
        }
    }
    out
}

pub fn sscale(a: &SVec, c: &FieldScalar) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v.mul(c))).collect()
}

pub fn from_dense(v: &[FieldScalar]) -> SVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(m: u8, v: &SVec, n: usize) -> Vec<FieldScalar> {
    let mut out = vec![FieldScalar::zero(m); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Row echelon form built incrementally; every stored row has a distinct
/// leading column and leading coefficient 1.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<SVec>,
    by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows until its leading column is free.
    fn reduce_leading(&self, mut v: SVec) -> SVec {
        while let Some((col, c)) = v.first().cloned() {
            match self.by_pivot.get(&col) {
                Some(&r) => v = axpy(&v, &c.neg(), &self.rows[r]),
                None => break,
            }
        }
        v
    }

    /// Inserts a row; returns true if it was independent of the stored ones.
    pub fn insert(&mut self, v: SVec) -> bool {
        let v = self.reduce_leading(v);
        match v.first() {
            None => false,
            Some((col, c)) => {
                let inv = c.inv().expect("leading entry is nonzero");
                let col = *col;
                self.by_pivot.insert(col, self.rows.len());
                self.rows.push(sscale(&v, &inv));
                true
            }
        }
    }

    pub fn contains(&self, v: &SVec) -> bool {
        // A nonzero entry left in a free leading column already proves
        // independence, whatever the later entries are.
        self.reduce_leading(v.clone()).is_empty()
    }

    /// Fully reduced rows as `(pivot column, row)` sorted by pivot.
    pub fn reduced(&self) -> Vec<(usize, SVec)> {
        let mut pivots: Vec<(usize, usize)> = self.by_pivot.iter().map(|(c, r)| (*c, *r)).collect();
        pivots.sort();
        let mut done: HashMap<usize, SVec> = HashMap::new();
        for &(col, r) in pivots.iter().rev() {
            let mut row = self.rows[r].clone();
            // Eliminate every later pivot column appearing in the row.
            let mut k = 1;
            while k < row.len() {
                let (c2, val) = row[k].clone();
                if let Some(prow) = done.get(&c2) {
                    row = axpy(&row, &val.neg(), prow);
                    k = row.iter().position(|(c, _)| *c > c2).unwrap_or(row.len());
                } else {
                    k += 1;
                }
            }
            done.insert(col, row);
        }
        pivots.iter().map(|(c, _)| (*c, done.remove(c).expect("row"))).collect()
    }

    /// Basis of the space of vectors `x` (length `ncols`) with `row·x = 0` for
    /// every stored row.
    pub fn nullspace(&self, m: u8, ncols: usize) -> Vec<SVec> {
        let reduced = self.reduced();
        let pivot_cols: std::collections::HashSet<usize> = reduced.iter().map(|(c, _)| *c).collect();
        let mut col_users: HashMap<usize, Vec<(usize, FieldScalar)>> = HashMap::new();
        for (p, row) in &reduced {
            for (c, v) in row.iter().skip(1) {
                col_users.entry(*c).or_default().push((*p, v.clone()));
            }
        }
        let mut out = Vec::new();
        for f in 0..ncols {
            if pivot_cols.contains(&f) {
                continue;
            }
            let mut v: SVec = vec![(f, FieldScalar::one(m))];
            if let Some(users) = col_users.get(&f) {
                for (p, val) in users {
                    v.push((*p, val.neg()));
                }
            }
            v.sort_by_key(|x| x.0);
            out.push(v);
        }
        out
    }
}

/// A span of vectors that can express any member as a combination of the
/// inserted generators.
#[derive(Clone, Debug, Default)]
pub struct CertifiedSpan {
    rows: Vec<(SVec, SVec)>,
    by_pivot: HashMap<usize, usize>,
    count: usize,
}

impl CertifiedSpan {
    pub fn new() -> CertifiedSpan {
        CertifiedSpan::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of generators inserted so far (including dependent ones).
    pub fn generators(&self) -> usize {
        self.count
    }

    fn reduce(&self, m: u8, v: &SVec) -> (SVec, SVec) {
        let mut v = v.clone();
        let mut combo: SVec = Vec::new();
        let mut k = 0;
        while k < v.len() {
            let (col, c) = v[k].clone();
            if let Some(&r) = self.by_pivot.get(&col) {
                let (row, rc) = &self.rows[r];
                v = axpy(&v, &c.neg(), row);
                combo = axpy(&combo, &c, rc);
                k = v.iter().position(|(cc, _)| *cc > col).unwrap_or(v.len());
            } else {
                k += 1;
            }
        }
        let _ = m;
        (v, combo)
    }

    /// Inserts generator number `self.generators()`; returns whether it was
    /// independent of the earlier ones.
    pub fn insert(&mut self, m: u8, v: &SVec) -> bool {
        let id = self.count;
        self.count += 1;
        let (rest, combo) = self.reduce(m, v);
        match rest.first() {
            None => false,
            Some((col, c)) => {
                let inv = c.inv().expect("nonzero");
                // rest = v − Σ combo·gen, so gen_id − combo expresses rest.
                let mut rc = sscale(&combo, &FieldScalar::one(m).neg());
                rc = axpy(&rc, &FieldScalar::one(m), &vec![(id, FieldScalar::one(m))]);
                let col = *col;
                self.by_pivot.insert(col, self.rows.len());
                self.rows.push((sscale(&rest, &inv), sscale(&rc, &inv)));
                true
            }
        }
    }

    /// Coefficients `x` (indexed by generator) with `Σ x_i gen_i = v`.
    pub fn express(&self, m: u8, v: &SVec) -> Option<SVec> {
        let (rest, combo) = self.reduce(m, v);
        if rest.is_empty() {
            Some(combo)
        } else {
            None
        }
    }
}

/// Dense helpers for small square systems.
pub fn dense_rank(m: u8, rows: &[Vec<FieldScalar>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(from_dense(r));
    }
    let _ = m;
    e.rank()
}

pub fn dense_inverse(m: u8, a: &[Vec<FieldScalar>]) -> Result<Vec<Vec<FieldScalar>>> {
    let n = a.len();
    let mut aug: Vec<Vec<FieldScalar>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { FieldScalar::one(m) } else { FieldScalar::zero(m) }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
        aug.swap(col, p);
        let inv = aug[col][col].inv()?;
        for x in aug[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dense_det(m: u8, a: &[Vec<FieldScalar>]) -> FieldScalar {
    let n = a.len();
    let mut a = a.to_vec();
    let mut det = FieldScalar::one(m);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return FieldScalar::zero(m);
        };
        if p != col {
            a.swap(col, p);
            det = det.neg();
        }
        det = det.mul(&a[col][col]);
        let inv = a[col][col].inv().expect("pivot");
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].mul(&inv);
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    det
}

/// Indices of a maximal set of linearly independent rows, chosen greedily.
pub fn independent_rows(rows: &[SVec]) -> Vec<usize> {
    let mut e = Echelon::new();
    rows.iter().enumerate().filter(|(_, r)| e.insert((*r).clone())).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;

    fn s(n: i64) -> FieldScalar {
        FieldScalar::from_int(3, n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let mut e = Echelon::new();
        e.insert(vec![(0, s(1)), (1, s(2)), (2, s(3))]);
        let ns = e.nullspace(3, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = v.iter().fold(s(0), |acc, (i, x)| acc.add(&x.mul(&s(*i as i64 + 1))));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn certified_span_expresses_members() {
        let mut sp = CertifiedSpan::new();
        assert!(sp.insert(3, &vec![(0, s(1)), (1, s(1))]));
        assert!(sp.insert(3, &vec![(1, s(1)), (2, s(1))]));
        assert!(!sp.insert(3, &vec![(0, s(1)), (1, s(2)), (2, s(1))]));
        let x = sp.express(3, &vec![(0, s(2)), (1, s(5)), (2, s(3))]).unwrap();
        assert_eq!(to_dense(3, &x, 3), vec![s(2), s(3), s(0)]);
        assert!(sp.express(3, &vec![(0, s(1))]).is_none());
    }

    #[test]
    fn inverse_and_det() {
        let half = FieldScalar::from_rat(3, Rat::new(1, 2));
        let a = vec![vec![s(2), s(1)], vec![s(0), half.clone()]];
        assert_eq!(dense_det(3, &a), s(1));
        let inv = dense_inverse(3, &a).unwrap();
        assert_eq!(inv[0][0], half);
        assert_eq!(inv[0][1], s(-1));
    }
}
