//! Braid words in the two generators `s`, `t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::Letter;

/// A crossing: a generator with sign `+1` or `−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub letter: Letter,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BraidWord {
    pub letters: Vec<Crossing>,
}

impl BraidWord {
    pub fn new(letters: Vec<Crossing>) -> BraidWord {
        BraidWord { letters }
    }

    pub fn positive(word: &[Letter]) -> BraidWord {
        BraidWord { letters: word.iter().map(|&letter| Crossing { letter, positive: true }).collect() }
    }

    pub fn negative(word: &[Letter]) -> BraidWord {
        BraidWord { letters: word.iter().map(|&letter| Crossing { letter, positive: false }).collect() }
    }

    /// `s t s …` with `k` letters starting at `start`.
    pub fn alternating(start: Letter, k: usize) -> BraidWord {
        let mut x = start;
        let mut word = Vec::with_capacity(k);
        for _ in 0..k {
            word.push(x);
            x = x.other();
        }
        BraidWord::positive(&word)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, o: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&o.letters);
        BraidWord { letters }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            letters: self.letters.iter().rev().map(|c| Crossing { letter: c.letter, positive: !c.positive }).collect(),
        }
    }

    /// Sum of the crossing signs.
    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|c| if c.positive { 1 } else { -1 }).sum()
    }

    pub fn uses(&self, letter: Letter) -> bool {
        self.letters.iter().any(|c| c.letter == letter)
    }

    /// Parses letters with exponents (`s^-2 t`, also `s^{-2}t`) or signed
    /// generator indices (`-1 -1 2`).
    pub fn parse(input: &str) -> Result<BraidWord> {
        let err = |position: usize, message: &str| Error::Parse {
            input: input.to_string(),
            position,
            message: message.to_string(),
        };
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Ok(BraidWord::default());
        }
        let numeric = trimmed.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '+' || c.is_whitespace());
        let mut letters = Vec::new();
        if numeric {
            let mut offset = 0;
            for tok in input.split_whitespace() {
                let pos = input[offset..].find(tok).map_or(offset, |p| p + offset);
                offset = pos + tok.len();
                let n: i32 = tok.parse().map_err(|_| err(pos, "expected a signed generator index"))?;
                let letter = match n.abs() {
                    1 => Letter::S,
                    2 => Letter::T,
                    _ => return Err(err(pos, "generator index must be 1 or 2")),
                };
                letters.push(Crossing { letter, positive: n > 0 });
            }
            return Ok(BraidWord { letters });
        }
        let chars: Vec<(usize, char)> = input.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let letter = Letter::from_char(c).ok_or_else(|| err(pos, "expected 's' or 't'"))?;
            i += 1;
            let mut exp: i32 = 1;
            if i < chars.len() && chars[i].1 == '^' {
                i += 1;
                let braced = i < chars.len() && chars[i].1 == '{';
                if braced {
                    i += 1;
                }
                let start = i;
                if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|x| x.1).collect();
                let epos = chars.get(start).map_or(input.len(), |x| x.0);
                exp = text.parse().map_err(|_| err(epos, "expected an integer exponent"))?;
                if braced {
                    if i < chars.len() && chars[i].1 == '}' {
                        i += 1;
                    } else {
                        return Err(err(chars.get(i).map_or(input.len(), |x| x.0), "expected '}'"));
                    }
                }
            }
            for _ in 0..exp.unsigned_abs() {
                letters.push(Crossing { letter, positive: exp > 0 });
            }
        }
        Ok(BraidWord { letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let c = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == c {
                j += 1;
            }
            let n = (j - i) as i32 * if c.positive { 1 } else { -1 };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "{}", c.letter)?;
            } else {
                write!(f, "{}^{}", c.letter, n)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl std::str::FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<BraidWord> {
        BraidWord::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let a = BraidWord::parse("s^-2 t s^-1 t").unwrap();
        let b = BraidWord::parse("s^{-2}ts^{-1}t").unwrap();
        let c = BraidWord::parse("-1 -1 2 -1 2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.len(), 5);
        assert_eq!(a.writhe(), -1);
        assert_eq!(a.to_string(), "s^-2 t s^-1 t");
    }

    #[test]
    fn reports_position() {
        match BraidWord::parse("s t x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BraidWord::parse("3 1").is_err());
    }
}
