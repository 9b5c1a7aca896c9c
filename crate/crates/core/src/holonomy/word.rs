//! Words in the redundant generating set `{A, B, X, Y}` with relations
//! `A = XY`, `B = Ȳ X`.
//!
//! Text form: one character per letter, upper case for a generator and
//! lower case for its inverse, e.g. `"XyA"`. The empty word is `""` or `"1"`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn to_char(self) -> char {
        let c = match self.generator {
            Generator::A => 'A',
            Generator::B => 'B',
            Generator::X => 'X',
            Generator::Y => 'Y',
        };
        if self.inverse {
            c.to_ascii_lowercase()
        } else {
            c
        }
    }
}

const fn l(g: Generator, inverse: bool) -> Letter {
    Letter::new(g, inverse)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(g: Generator) -> Self {
        Word(vec![l(g, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `g w g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    /// Cancels adjacent `ss⁻¹` pairs (letters are treated as free symbols).
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            if out.last() == Some(&x.inv()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    /// Freely reduces, then strips `s … s⁻¹` from the ends. The result is
    /// conjugate to `self`.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == w[w.len() - 1 - k].inv() {
            k += 1;
        }
        Word(w[k..w.len() - k].to_vec())
    }

    /// Rewrites in the free basis `{X, Y}` and freely reduces.
    pub fn in_xy_basis(&self) -> Word {
        use Generator::*;
        let mut v = Vec::with_capacity(2 * self.0.len());
        for x in &self.0 {
            match (x.generator, x.inverse) {
                (A, false) => v.extend([l(X, false), l(Y, false)]),
                (A, true) => v.extend([l(Y, true), l(X, true)]),
                (B, false) => v.extend([l(Y, true), l(X, false)]),
                (B, true) => v.extend([l(X, true), l(Y, false)]),
                _ => v.push(*x),
            }
        }
        Word(v).free_reduce()
    }

    /// Rewrites in the free basis `{A, X}` and freely reduces.
    pub fn in_ax_basis(&self) -> Word {
        use Generator::*;
        let mut v = Vec::with_capacity(3 * self.0.len());
        for x in &self.0 {
            match (x.generator, x.inverse) {
                // Y = X̄ A
                (Y, false) => v.extend([l(X, true), l(A, false)]),
                (Y, true) => v.extend([l(A, true), l(X, false)]),
                // B = Ȳ X = Ā X X
                (B, false) => v.extend([l(A, true), l(X, false), l(X, false)]),
                (B, true) => v.extend([l(X, true), l(X, true), l(A, false)]),
                _ => v.push(*x),
            }
        }
        Word(v).free_reduce()
    }

    /// All nonempty freely reduced words of length at most `max_len` in the
    /// given generators and their inverses, in shortlex order.
    pub fn reduced_words(generators: &[Generator], max_len: usize) -> Vec<Word> {
        let mut alphabet: Vec<Letter> = Vec::new();
        for &g in generators {
            alphabet.push(l(g, false));
            alphabet.push(l(g, true));
        }
        let mut out = Vec::new();
        let mut layer: Vec<Word> = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &a in &alphabet {
                    if w.0.last() == Some(&a.inv()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(a);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for x in &self.0 {
            write!(f, "{}", x.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| {
                let g = match c.to_ascii_uppercase() {
                    'A' => Generator::A,
                    'B' => Generator::B,
                    'X' => Generator::X,
                    'Y' => Generator::Y,
                    _ => return Err(Error::Word(format!("unknown letter {c:?} in {s:?}"))),
                };
                Ok(l(g, c.is_ascii_lowercase()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("XyA").to_string(), "XyA");
        assert_eq!(w("").to_string(), "1");
        assert!("XQ".parse::<Word>().is_err());
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("YYYXyy").cyclic_reduce(), w("YX"));
        assert_eq!(w("AxXa").cyclic_reduce(), w(""));
        assert_eq!(w("Xa").cyclic_reduce(), w("Xa"));
        assert_eq!(w("AXa").cyclic_reduce(), w("X"));
    }

    #[test]
    fn reductions() {
        assert_eq!(w("XxYyA").free_reduce(), w("A"));
        assert_eq!(w("A").in_xy_basis(), w("XY"));
        assert_eq!(w("B").in_xy_basis(), w("yX"));
        assert_eq!(w("ab").in_xy_basis(), w("yxxY").free_reduce());
        assert_eq!(w("Y").in_ax_basis(), w("xA"));
        assert_eq!(w("AB").in_xy_basis(), w("XX"));
    }

    #[test]
    fn reduced_word_counts() {
        // 4 * 3^(k-1) reduced words of length k in a free group of rank two
        let words = Word::reduced_words(&[Generator::A, Generator::X], 4);
        assert_eq!(words.len(), 4 + 12 + 36 + 108);
        assert!(words.iter().all(|x| x.free_reduce() == *x));
    }

    #[test]
    fn inverse_of_word() {
        assert_eq!(w("XyA").inverse(), w("aYx"));
        assert!(w("XyA")
            .concat(&w("XyA").inverse())
            .free_reduce()
            .is_empty());
    }
}
