//! The graded ring `R = K_m[α_s, α_t]` with both generators in degree 2, and
//! the dihedral realization acting on it.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::scalars::{field_for, split_signed_terms, FieldDescriptor, FieldScalar, MAX_M};

/// A simple reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
}

impl Letter {
    pub fn index(self) -> usize {
        match self {
            Letter::S => 0,
            Letter::T => 1,
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::S => Letter::T,
            Letter::T => Letter::S,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            's' => Some(Letter::S),
            't' => Some(Letter::T),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::S => 's',
            Letter::T => 't',
        }
    }

    pub const BOTH: [Letter; 2] = [Letter::S, Letter::T];
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// The monomial `α_s^s α_t^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub s: u16,
    pub t: u16,
}

impl Mono {
    pub const ONE: Mono = Mono { s: 0, t: 0 };

    pub fn new(s: u16, t: u16) -> Mono {
        Mono { s, t }
    }

    pub fn var(letter: Letter) -> Mono {
        match letter {
            Letter::S => Mono { s: 1, t: 0 },
            Letter::T => Mono { s: 0, t: 1 },
        }
    }

    pub fn total(self) -> u16 {
        self.s + self.t
    }

    /// Internal degree (each generator has degree 2).
    pub fn degree(self) -> i32 {
        2 * self.total() as i32
    }

    pub fn mul(self, o: Mono) -> Mono {
        Mono { s: self.s + o.s, t: self.t + o.t }
    }

    pub fn divides(self, o: Mono) -> bool {
        self.s <= o.s && self.t <= o.t
    }

    pub fn div(self, o: Mono) -> Mono {
        Mono { s: self.s - o.s, t: self.t - o.t }
    }

    pub fn lcm(self, o: Mono) -> Mono {
        Mono { s: self.s.max(o.s), t: self.t.max(o.t) }
    }

    /// All monomials of the given total exponent, in descending order.
    pub fn of_total(n: u16) -> impl Iterator<Item = Mono> {
        (0..=n).rev().map(move |s| Mono { s, t: n - s })
    }
}

/// Degree-reverse-lexicographic order with `α_s > α_t`.
impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        self.total().cmp(&o.total()).then(self.s.cmp(&o.s))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial: terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, FieldScalar)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: FieldScalar) -> Poly {
        Poly::monomial(Mono::ONE, c)
    }

    pub fn one(m: u8) -> Poly {
        Poly::constant(FieldScalar::one(m))
    }

    pub fn from_int(m: u8, n: i64) -> Poly {
        Poly::constant(FieldScalar::from_int(m, n))
    }

    pub fn monomial(mono: Mono, c: FieldScalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(mono, c)] }
        }
    }

    pub fn var(m: u8, letter: Letter) -> Poly {
        Poly::monomial(Mono::var(letter), FieldScalar::one(m))
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(mut terms: Vec<(Mono, FieldScalar)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, FieldScalar)> = Vec::with_capacity(terms.len());
        for (mo, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == mo => *lc = lc.add(&c),
                _ => out.push((mo, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, FieldScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Mono::ONE)
    }

    pub fn leading(&self) -> Option<&(Mono, FieldScalar)> {
        self.terms.first()
    }

    pub fn coeff(&self, mono: Mono) -> Option<&FieldScalar> {
        self.terms.iter().find(|(mo, _)| *mo == mono).map(|(_, c)| c)
    }

    /// Coefficient of the constant monomial (zero if absent).
    pub fn constant_term(&self) -> Option<&FieldScalar> {
        match self.terms.last() {
            Some((mo, c)) if *mo == Mono::ONE => Some(c),
            _ => None,
        }
    }

    /// Internal degree of the leading term.
    pub fn degree(&self) -> Option<i32> {
        self.terms.first().map(|(mo, _)| mo.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((lm, _)) => self.terms.iter().all(|(mo, _)| mo.total() == lm.total()),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.1.add(&b.1);
                    if !c.is_zero() {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn add_assign(&mut self, o: &Poly) {
        if !o.is_zero() {
            *self = self.add(o);
        }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(mo, c)| (*mo, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(mo, x)| (*mo, x.mul(c))).collect() }
    }

    pub fn mul_term(&self, mono: Mono, c: &FieldScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(mo, x)| (mo.mul(mono), x.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                terms.push((ma.mul(*mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, m: u8, k: u32) -> Poly {
        let mut out = Poly::one(m);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Ring homomorphism `α_s ↦ xs`, `α_t ↦ xt`.
    pub fn substitute(&self, m: u8, xs: &Poly, xt: &Poly) -> Poly {
        let mut ps = vec![Poly::one(m)];
        let mut pt = vec![Poly::one(m)];
        let mut acc = Poly::zero();
        for (mo, c) in &self.terms {
            while ps.len() <= mo.s as usize {
                let next = ps.last().unwrap().mul(xs);
                ps.push(next);
            }
            while pt.len() <= mo.t as usize {
                let next = pt.last().unwrap().mul(xt);
                pt.push(next);
            }
            acc = acc.add(&ps[mo.s as usize].mul(&pt[mo.t as usize]).scale(c));
        }
        acc
    }

    /// Exact division by a generator; errors on a nonzero remainder.
    pub fn div_var(&self, letter: Letter) -> Result<Poly> {
        let v = Mono::var(letter);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mo, c) in &self.terms {
            if !v.divides(*mo) {
                return Err(Error::Internal(format!("{self} is not divisible by a_{letter}")));
            }
            terms.push((mo.div(v), c.clone()));
        }
        Ok(Poly { terms })
    }

    /// Parses the format produced by `Display`, e.g. `1/2*a_s^2 - d*a_s*a_t + 3`.
    pub fn parse(m: u8, input: &str) -> Result<Poly> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(Poly::zero());
        }
        let mut acc = Poly::zero();
        for (pos, term) in split_signed_terms(&s) {
            let err = |msg: String| Error::Parse { input: input.to_string(), position: pos, message: msg };
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let mut coeff = FieldScalar::one(m);
            let mut mono = Mono::ONE;
            let mut rest = body;
            if let Some(inner) = rest.strip_prefix('(') {
                let close = inner.find(')').ok_or_else(|| err("unbalanced parenthesis".into()))?;
                coeff = FieldScalar::parse(m, &inner[..close])?;
                rest = inner[close + 1..].trim_start_matches('*');
            }
            for factor in rest.split('*').filter(|f| !f.is_empty()) {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u16>().map_err(|_| err(format!("bad exponent in `{factor}`")))?),
                    None => (factor, 1),
                };
                match base {
                    "a_s" => mono.s += exp,
                    "a_t" => mono.t += exp,
                    "d" => coeff = coeff.mul(&FieldScalar::delta(m).pow(exp as u32)),
                    _ => {
                        let r: Rat = base.parse().map_err(|_| err(format!("unknown factor `{factor}`")))?;
                        coeff = coeff.mul(&FieldScalar::from_rat(m, r));
                    }
                }
            }
            if neg {
                coeff = coeff.neg();
            }
            acc = acc.add(&Poly::monomial(mono, coeff));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mo, c)) in self.terms.iter().enumerate() {
            let compound = c.coeffs().len() > 1;
            let (neg, mag) = if !compound && c.as_rat().is_some_and(|r| r.is_negative()) {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if *mo == Mono::ONE || !mag.is_one() {
                factors.push(if compound { format!("({mag})") } else { mag.to_string() });
            }
            for (name, e) in [("a_s", mo.s), ("a_t", mo.t)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The symmetric dihedral realization with Cartan entries `−δ`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub field: &'static FieldDescriptor,
    pub m: u8,
    pub delta: FieldScalar,
    /// `cartan[u][v] = ⟨α_u^∨, α_v⟩`.
    pub cartan: [[FieldScalar; 2]; 2],
    /// `rho_coords[u]` holds the coordinates of `ρ_u` in the basis `α_s, α_t`.
    pub rho_coords: [[FieldScalar; 2]; 2],
    images: [[Poly; 2]; 2],
}

impl Realization {
    pub fn alpha(&self, letter: Letter) -> Poly {
        Poly::var(self.m, letter)
    }

    pub fn rho(&self, letter: Letter) -> Poly {
        let c = &self.rho_coords[letter.index()];
        Poly::monomial(Mono::var(Letter::S), c[0].clone()).add(&Poly::monomial(Mono::var(Letter::T), c[1].clone()))
    }

    /// Pairing `⟨f, α_v^∨⟩` of a linear form with a coroot.
    pub fn pair_coroot(&self, f: &Poly, coroot: Letter) -> FieldScalar {
        let mut acc = FieldScalar::zero(self.m);
        for u in Letter::BOTH {
            if let Some(c) = f.coeff(Mono::var(u)) {
                acc = acc.add(&c.mul(&self.cartan[coroot.index()][u.index()]));
            }
        }
        acc
    }

    pub fn reflect(&self, f: &Poly, letter: Letter) -> Poly {
        let [xs, xt] = &self.images[letter.index()];
        f.substitute(self.m, xs, xt)
    }

    pub fn demazure(&self, f: &Poly, letter: Letter) -> Result<Poly> {
        f.sub(&self.reflect(f, letter)).div_var(letter)
    }

    /// `f = g + α·h` with `g, h` invariant under the reflection.
    pub fn invariant_split(&self, f: &Poly, letter: Letter) -> (Poly, Poly) {
        let half = FieldScalar::from_rat(self.m, Rat::new(1, 2));
        let g = f.add(&self.reflect(f, letter)).scale(&half);
        let h = self.demazure(f, letter).expect("Demazure quotient is exact").scale(&half);
        (g, h)
    }
}

/// The realization for `m` (cached).
pub fn realization(m: u8) -> Result<&'static Realization> {
    static TABLE: OnceLock<Vec<Option<Realization>>> = OnceLock::new();
    field_for(m)?;
    let table = TABLE.get_or_init(|| {
        (0..=MAX_M).map(|m| if m >= 2 { Some(build_realization(m)) } else { None }).collect()
    });
    Ok(table[m as usize].as_ref().expect("supported m"))
}

fn build_realization(m: u8) -> Realization {
    let field = field_for(m).expect("supported m");
    let delta = FieldScalar::delta(m);
    let two = FieldScalar::from_int(m, 2);
    let cartan = [[two.clone(), delta.neg()], [delta.neg(), two.clone()]];
    // ρ_s = c1 α_s + c2 α_t with 2c1 − δc2 = 1 and −δc1 + 2c2 = 0.
    let det = FieldScalar::from_int(m, 4).sub(&delta.mul(&delta));
    let inv = det.inv().expect("Cartan matrix is invertible for finite dihedral groups");
    let c1 = two.mul(&inv);
    let c2 = delta.mul(&inv);
    let rho_coords = [[c1.clone(), c2.clone()], [c2, c1]];
    let a_s = Poly::var(m, Letter::S);
    let a_t = Poly::var(m, Letter::T);
    let images = [
        [a_s.neg(), a_t.add(&a_s.scale(&delta))],
        [a_s.add(&a_t.scale(&delta)), a_t.neg()],
    ];
    Realization { field, m, delta, cartan, rho_coords, images }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_for_m3() {
        let r = realization(3).unwrap();
        assert_eq!(r.rho(Letter::S), Poly::parse(3, "2/3*a_s + 1/3*a_t").unwrap());
        assert!(r.pair_coroot(&r.rho(Letter::S), Letter::T).is_zero());
        assert!(r.pair_coroot(&r.rho(Letter::S), Letter::S).is_one());
    }

    #[test]
    fn reflections() {
        let r = realization(3).unwrap();
        let a_t = r.alpha(Letter::T);
        assert_eq!(r.reflect(&a_t, Letter::S), Poly::parse(3, "a_t + a_s").unwrap());
        assert_eq!(r.demazure(&a_t, Letter::S).unwrap(), Poly::from_int(3, -1));
        let (g, h) = r.invariant_split(&a_t, Letter::S);
        assert_eq!(g, Poly::parse(3, "a_t + 1/2*a_s").unwrap());
        assert_eq!(h, Poly::parse(3, "-1/2").unwrap());
        let r4 = realization(4).unwrap();
        assert_eq!(r4.reflect(&r4.alpha(Letter::T), Letter::S), Poly::parse(4, "a_t + d*a_s").unwrap());
    }

    #[test]
    fn display_round_trip() {
        let p = Poly::parse(5, "(1/2 + d)*a_s^2 - 3*a_s*a_t + 7").unwrap();
        assert_eq!(Poly::parse(5, &p.to_string()).unwrap(), p);
    }
}
