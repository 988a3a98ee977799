//! The coefficient field `K_m = Q[δ]/(p_m)` with `δ = 2cos(π/m)`.
//!
//! `p_m` is recovered from the cyclotomic polynomial `Φ_{2m}`, which is
//! palindromic and therefore a polynomial in `z + 1/z`.

use std::fmt;
use std::sync::OnceLock;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Largest dihedral parameter the engine accepts.
pub const MAX_M: u8 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub m: u8,
    /// Coefficients of the monic minimal polynomial, constant term first.
    pub minimal_polynomial: Vec<Rat>,
}

impl FieldDescriptor {
    pub fn degree(&self) -> usize {
        self.minimal_polynomial.len() - 1
    }
}

fn int_poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials (divisor monic).
fn int_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut q = vec![0; num.len() + 1 - dl];
    for k in (0..q.len()).rev() {
        let c = rem[k + dl - 1];
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = int_poly_div(&p, &cyclotomic(d));
        }
    }
    p
}

fn compute_minimal_polynomial(m: u8) -> Vec<Rat> {
    let phi = cyclotomic(2 * m as usize);
    let k = (phi.len() - 1) / 2;
    // Dickson polynomials D_j(x) with D_j(z + 1/z) = z^j + z^-j.
    let mut dickson: Vec<Vec<i64>> = vec![vec![2], vec![0, 1]];
    while dickson.len() <= k {
        let j = dickson.len();
        let mut next = int_poly_mul(&dickson[j - 1], &[0, 1]);
        for (i, c) in dickson[j - 2].iter().enumerate() {
            next[i] -= c;
        }
        dickson.push(next);
    }
    let mut psi = vec![0i64; k + 1];
    psi[0] += phi[k];
    for j in 1..=k {
        for (i, c) in dickson[j].iter().enumerate() {
            psi[i] += phi[k + j] * c;
        }
    }
    psi.into_iter().map(Rat::from_int).collect()
}

fn table() -> &'static Vec<FieldDescriptor> {
    static TABLE: OnceLock<Vec<FieldDescriptor>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_M)
            .map(|m| FieldDescriptor {
                m,
                minimal_polynomial: if m >= 2 { compute_minimal_polynomial(m) } else { vec![Rat::ONE] },
            })
            .collect()
    })
}

/// Descriptor of `K_m`; rejects `m < 2` and `m > MAX_M`.
pub fn field_for(m: u8) -> Result<&'static FieldDescriptor> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("dihedral parameter m = {m} must be at least 2")));
    }
    if m > MAX_M {
        return Err(Error::InvalidInput(format!("dihedral parameter m = {m} exceeds the supported maximum {MAX_M}")));
    }
    Ok(&table()[m as usize])
}

fn descriptor(m: u8) -> &'static FieldDescriptor {
    &table()[m as usize]
}

/// An element of `K_m`, stored as its residue modulo `p_m` with trailing
/// zero coefficients trimmed (so zero has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    m: u8,
    coeffs: SmallVec<[Rat; 2]>,
}

impl FieldScalar {
    pub fn zero(m: u8) -> FieldScalar {
        FieldScalar { m, coeffs: SmallVec::new() }
    }

    pub fn one(m: u8) -> FieldScalar {
        FieldScalar::from_rat(m, Rat::ONE)
    }

    pub fn from_int(m: u8, n: i64) -> FieldScalar {
        FieldScalar::from_rat(m, Rat::from_int(n))
    }

    pub fn from_rat(m: u8, r: Rat) -> FieldScalar {
        let mut coeffs = SmallVec::new();
        if !r.is_zero() {
            coeffs.push(r);
        }
        FieldScalar { m, coeffs }
    }

    /// The generator `δ = 2cos(π/m)`.
    pub fn delta(m: u8) -> FieldScalar {
        FieldScalar::from_coeffs(m, vec![Rat::ZERO, Rat::ONE])
    }

    /// Builds `Σ c_i δ^i` and reduces modulo `p_m`.
    pub fn from_coeffs(m: u8, coeffs: Vec<Rat>) -> FieldScalar {
        let mut c: SmallVec<[Rat; 2]> = coeffs.into_iter().collect();
        reduce(m, &mut c);
        FieldScalar { m, coeffs: c }
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    /// Residue coefficients, constant term first, trailing zeros trimmed.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::ZERO),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &FieldScalar) -> FieldScalar {
        debug_assert_eq!(self.m, other.m);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c: SmallVec<[Rat; 2]> = SmallVec::with_capacity(n);
        for i in 0..n {
            let v = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            c.push(v);
        }
        trim(&mut c);
        FieldScalar { m: self.m, coeffs: c }
    }

    pub fn sub(&self, other: &FieldScalar) -> FieldScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldScalar {
        FieldScalar { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &FieldScalar) -> FieldScalar {
        debug_assert_eq!(self.m, other.m);
        if self.is_zero() || other.is_zero() {
            return FieldScalar::zero(self.m);
        }
        if self.coeffs.len() == 1 && other.coeffs.len() == 1 {
            let mut c = SmallVec::new();
            c.push(&self.coeffs[0] * &other.coeffs[0]);
            return FieldScalar { m: self.m, coeffs: c };
        }
        let mut c: SmallVec<[Rat; 2]> = SmallVec::from_elem(Rat::ZERO, self.coeffs.len() + other.coeffs.len() - 1);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        reduce(self.m, &mut c);
        FieldScalar { m: self.m, coeffs: c }
    }

    pub fn mul_rat(&self, r: &Rat) -> FieldScalar {
        if r.is_zero() {
            return FieldScalar::zero(self.m);
        }
        FieldScalar { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse; division by zero is reported as an error.
    pub fn inv(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(FieldScalar::from_rat(self.m, self.coeffs[0].inv().expect("nonzero")));
        }
        // Extended Euclid in Q[x]: find u with u·a ≡ 1 (mod p).
        let p: Vec<Rat> = descriptor(self.m).minimal_polynomial.clone();
        let (mut r0, mut r1) = (p, self.coeffs.to_vec());
        let (mut s0, mut s1): (Vec<Rat>, Vec<Rat>) = (vec![], vec![Rat::ONE]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return Err(Error::Internal("minimal polynomial is reducible".into()));
            }
        }
        let c = r1[0].inv().expect("nonzero remainder");
        let u: Vec<Rat> = s1.iter().map(|x| x * &c).collect();
        Ok(FieldScalar::from_coeffs(self.m, u))
    }

    pub fn div(&self, other: &FieldScalar) -> Result<FieldScalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> FieldScalar {
        let mut out = FieldScalar::one(self.m);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Numerical value under `δ = 2cos(π/m)`; used only by tests and diagnostics.
    pub fn to_f64(&self) -> f64 {
        let d = 2.0 * (std::f64::consts::PI / self.m as f64).cos();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * d + c.to_f64())
    }

    /// Uniformly random element with small rational coefficients.
    pub fn random<R: rand::Rng + ?Sized>(m: u8, rng: &mut R, bound: i64) -> FieldScalar {
        let deg = descriptor(m).degree();
        FieldScalar::from_coeffs(m, (0..deg).map(|_| Rat::random_small(rng, bound)).collect())
    }

    /// Parses the textual form produced by `Display`, e.g. `-1/2 + 3*d`.
    pub fn parse(m: u8, s: &str) -> Result<FieldScalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Parse { input: s.to_string(), position: 0, message: "empty scalar".into() });
        }
        let mut acc = FieldScalar::zero(m);
        for (pos, term) in split_signed_terms(s) {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let mut value = FieldScalar::one(m);
            for factor in body.split('*') {
                let f = if let Some(exp) = factor.strip_prefix("d^") {
                    let e: u32 = exp.parse().map_err(|_| Error::Parse {
                        input: s.to_string(),
                        position: pos,
                        message: format!("bad exponent in `{factor}`"),
                    })?;
                    FieldScalar::delta(m).pow(e)
                } else if factor == "d" {
                    FieldScalar::delta(m)
                } else {
                    let r: Rat = factor.parse().map_err(|_| Error::Parse {
                        input: s.to_string(),
                        position: pos,
                        message: format!("bad coefficient `{factor}`"),
                    })?;
                    FieldScalar::from_rat(m, r)
                };
                value = value.mul(&f);
            }
            acc = if neg { acc.sub(&value) } else { acc.add(&value) };
        }
        Ok(acc)
    }
}

/// Splits `a+b-c` at top-level signs (a sign directly after `/`, `*` or `^`
/// belongs to the number).
pub(crate) fn split_signed_terms(s: &str) -> Vec<(usize, &str)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if i == 0 || depth != 0 {
            continue;
        }
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'/' | b'*' | b'^' | b'(') {
            out.push((start, &s[start..i]));
            start = i;
        }
    }
    out.push((start, &s[start..]));
    out
}

fn trim(c: &mut SmallVec<[Rat; 2]>) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

fn reduce(m: u8, c: &mut SmallVec<[Rat; 2]>) {
    let p = &descriptor(m).minimal_polynomial;
    let d = p.len() - 1;
    while c.len() > d {
        let lead = c.pop().expect("nonempty");
        if lead.is_zero() {
            continue;
        }
        let base = c.len() - d;
        for (i, pc) in p[..d].iter().enumerate() {
            c[base + i] = &c[base + i] - &(&lead * pc);
        }
    }
    trim(c);
}

fn poly_trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => Rat::ZERO,
        })
        .collect();
    poly_trim(out)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    let lb = b.last().expect("nonzero divisor").clone();
    if rem.len() < b.len() {
        return (vec![], poly_trim(rem));
    }
    let mut q = vec![Rat::ZERO; rem.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &rem[k + b.len() - 1] / &lb;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &(&c * bj);
        }
        q[k] = c;
    }
    rem.truncate(b.len() - 1);
    (poly_trim(q), poly_trim(rem))
}

/// Quantum number `[k]` via `[k+1] = δ[k] − [k−1]`.
pub fn quantum_number(m: u8, k: u32) -> FieldScalar {
    let (mut prev, mut cur) = (FieldScalar::zero(m), FieldScalar::one(m));
    if k == 0 {
        return prev;
    }
    let d = FieldScalar::delta(m);
    for _ in 1..k {
        let next = d.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "d")?;
                    } else {
                        write!(f, "d^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(m: u8) -> Vec<i64> {
        field_for(m).unwrap().minimal_polynomial.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_minimal_polynomials() {
        assert_eq!(poly(2), vec![0, 1]);
        assert_eq!(poly(3), vec![-1, 1]);
        assert_eq!(poly(4), vec![-2, 0, 1]);
        assert_eq!(poly(5), vec![-1, -1, 1]);
        assert!(field_for(1).is_err());
    }

    #[test]
    fn delta_squares() {
        let d5 = FieldScalar::delta(5);
        assert_eq!(d5.mul(&d5), d5.add(&FieldScalar::one(5)));
        let d4 = FieldScalar::delta(4);
        assert_eq!(d4.mul(&d4), FieldScalar::from_int(4, 2));
    }

    #[test]
    fn inverse_of_zero_errors() {
        assert!(matches!(FieldScalar::zero(4).inv(), Err(Error::DivisionByZero)));
        assert_eq!(FieldScalar::one(7).inv().unwrap(), FieldScalar::one(7));
    }

    #[test]
    fn display_parse_round_trip() {
        let x = FieldScalar::from_coeffs(5, vec![Rat::new(-1, 2), Rat::from_int(3)]);
        assert_eq!(x.to_string(), "-1/2 + 3*d");
        assert_eq!(FieldScalar::parse(5, &x.to_string()).unwrap(), x);
    }
}
