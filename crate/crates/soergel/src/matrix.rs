//! Dense matrices over `R`.

use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::scalars::FieldScalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(m: u8, n: usize) -> PolyMatrix {
        PolyMatrix::scalar(n, &FieldScalar::one(m))
    }

    pub fn scalar(n: usize, c: &FieldScalar) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(n, n);
        for i in 0..n {
            out.set(i, i, Poly::constant(c.clone()));
        }
        out
    }

    pub fn diagonal(entries: &[Poly]) -> PolyMatrix {
        let n = entries.len();
        let mut out = PolyMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            out.set(i, i, e.clone());
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        PolyMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> PolyMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    pub fn column_vector(entries: Vec<Poly>) -> PolyMatrix {
        let n = entries.len();
        PolyMatrix { rows: n, cols: 1, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.shape(), o.shape(), "matrix shape mismatch in add");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.shape(), o.shape(), "matrix shape mismatch in sub");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Poly::neg).collect() }
    }

    pub fn scale(&self, c: &FieldScalar) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(p)).collect() }
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch in mul");
        let mut out = PolyMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn hstack(parts: &[&PolyMatrix]) -> PolyMatrix {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = PolyMatrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.put_block(0, off, p);
            off += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&PolyMatrix]) -> PolyMatrix {
        let cols = parts.first().map_or(0, |p| p.cols);
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let mut out = PolyMatrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.put_block(off, 0, p);
            off += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&PolyMatrix]) -> PolyMatrix {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = PolyMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.put_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    pub fn put_block(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Constant parts of all entries.
    pub fn constant_part(&self) -> Vec<Vec<FieldScalar>> {
        let m = self.data.iter().find_map(|p| p.leading().map(|(_, c)| c.m())).unwrap_or(2);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).constant_term().cloned().unwrap_or_else(|| FieldScalar::zero(m)))
                    .collect()
            })
            .collect()
    }

    /// Checks that entry `(i, j)` is homogeneous of degree
    /// `degree + source[j] − target[i]` (or zero).
    pub fn check_homogeneous(&self, target: &[i32], source: &[i32], degree: i32) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = degree + source[j] - target[i];
                if !e.is_homogeneous() || e.degree() != Some(want) {
                    return Err(Error::contract(
                        "bimodule",
                        format!("entry ({i},{j}) = {e} is not homogeneous of degree {want}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    /// Inverse of a square matrix of a degree-0 map between graded free
    /// modules. Pivots are always nonzero constants, so the result is exact
    /// over `R`; fails if the constant part is singular.
    pub fn graded_inverse(&self, m: u8) -> Result<PolyMatrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::contract("matrix", "graded inverse of a non-square matrix"));
        }
        let mut a = self.clone();
        let mut inv = PolyMatrix::identity(m, n);
        let mut used = vec![false; n];
        let mut perm = vec![0usize; n];
        for col in 0..n {
            let r = (0..n)
                .find(|&r| !used[r] && a.get(r, col).is_constant() && !a.get(r, col).is_zero())
                .ok_or_else(|| Error::contract("matrix", "matrix is not invertible over R"))?;
            let c = a.get(r, col).constant_term().expect("constant").inv()?;
            for j in 0..n {
                let x = a.get(r, j).scale(&c);
                a.set(r, j, x);
                let y = inv.get(r, j).scale(&c);
                inv.set(r, j, y);
            }
            let prow = a.row(r);
            let pinv = inv.row(r);
            for i in 0..n {
                if i == r || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    if !prow[j].is_zero() {
                        let x = a.get(i, j).sub(&f.mul(&prow[j]));
                        a.set(i, j, x);
                    }
                    if !pinv[j].is_zero() {
                        let y = inv.get(i, j).sub(&f.mul(&pinv[j]));
                        inv.set(i, j, y);
                    }
                }
            }
            used[r] = true;
            perm[col] = r;
        }
        Ok(inv.select_rows(&perm))
    }
}
