//! Elements of the dihedral group `I₂(m)`, stored by their alternating
//! reduced word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::polyring::Letter;

/// `len` alternating letters starting with `start`. The identity and the
/// longest element always use `start = S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem {
    pub len: u8,
    pub start: Letter,
}

fn last_of(start: Letter, len: u8) -> Letter {
    if len % 2 == 1 {
        start
    } else {
        start.other()
    }
}

impl Elem {
    pub const E: Elem = Elem { len: 0, start: Letter::S };

    pub fn new(m: u8, start: Letter, len: u8) -> Elem {
        assert!(len <= m, "word longer than the longest element");
        if len == 0 || len == m {
            Elem { len, start: Letter::S }
        } else {
            Elem { len, start }
        }
    }

    pub fn simple(letter: Letter) -> Elem {
        Elem { len: 1, start: letter }
    }

    pub fn longest(m: u8) -> Elem {
        Elem { len: m, start: Letter::S }
    }

    pub fn is_identity(self) -> bool {
        self.len == 0
    }

    pub fn length(self) -> u32 {
        self.len as u32
    }

    pub fn word(self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len as usize);
        let mut x = self.start;
        for _ in 0..self.len {
            out.push(x);
            x = x.other();
        }
        out
    }

    /// Last letter of the canonical word.
    pub fn last(self) -> Option<Letter> {
        (self.len > 0).then(|| last_of(self.start, self.len))
    }

    /// Whether `self · z < self`.
    pub fn has_right_descent(self, m: u8, z: Letter) -> bool {
        self.len == m || self.last() == Some(z)
    }

    pub fn mul_letter(self, m: u8, z: Letter) -> Elem {
        let l = self.len;
        if l == 0 {
            return Elem::new(m, z, 1);
        }
        if l == m {
            // w0·z has length m−1 and its word ends with the other letter.
            let start = if (m - 1) % 2 == 1 { z.other() } else { z };
            return Elem::new(m, start, m - 1);
        }
        if self.last() == Some(z) {
            Elem::new(m, self.start, l - 1)
        } else {
            Elem::new(m, self.start, l + 1)
        }
    }

    pub fn inverse(self, m: u8) -> Elem {
        match self.last() {
            Some(x) => Elem::new(m, x, self.len),
            None => self,
        }
    }

    pub fn left_mul_letter(self, m: u8, z: Letter) -> Elem {
        self.inverse(m).mul_letter(m, z).inverse(m)
    }

    pub fn from_word(m: u8, word: &[Letter]) -> Elem {
        word.iter().fold(Elem::E, |x, &z| x.mul_letter(m, z))
    }

    /// All `2m` elements, by length then start letter.
    pub fn all(m: u8) -> Vec<Elem> {
        let mut out = vec![Elem::E];
        for l in 1..m {
            out.push(Elem::new(m, Letter::S, l));
            out.push(Elem::new(m, Letter::T, l));
        }
        out.push(Elem::longest(m));
        out
    }

    /// Bruhat order; in a dihedral group it is determined by length.
    pub fn leq(self, o: Elem) -> bool {
        self.len < o.len || self == o
    }

    /// Whether the canonical word uses `letter` (equivalently, every reduced
    /// word does).
    pub fn contains(self, letter: Letter) -> bool {
        self.len >= 2 || (self.len == 1 && self.start == letter)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "e");
        }
        for x in self.word() {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_2m_elements() {
        for m in 2..=6 {
            let all = Elem::all(m);
            assert_eq!(all.len(), 2 * m as usize);
            for &x in &all {
                for z in Letter::BOTH {
                    assert_eq!(x.mul_letter(m, z).mul_letter(m, z), x);
                }
            }
        }
    }

    #[test]
    fn braid_relation() {
        let m = 3;
        let a = Elem::from_word(m, &[Letter::S, Letter::T, Letter::S]);
        let b = Elem::from_word(m, &[Letter::T, Letter::S, Letter::T]);
        assert_eq!(a, b);
        assert_eq!(a, Elem::longest(m));
        assert_eq!(Elem::longest(m).mul_letter(m, Letter::S).to_string(), "st");
    }
}
