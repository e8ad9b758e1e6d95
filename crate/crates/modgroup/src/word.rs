//! Words over the generators of `PSL(2, Z)`.
//!
//! The alphabet is `{a, b, b^-1}` with `a^2 = b^3 = 1`. A word is *normal* when
//! no rewriting rule applies: `aa`, `bb`, `b^-1 b^-1`, `b b^-1`, `b^-1 b` are all
//! forbidden factors, so normal words alternate `a`s with powers of `b`. Normal
//! forms are unique, and an element has infinite order exactly when its cyclically
//! reduced form has length at least 2.
//!
//! ASCII syntax: `a`, `b`, and `B` for `b^-1`; whitespace is ignored.

use crate::Error;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    Binv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::B => Letter::Binv,
            Letter::Binv => Letter::B,
        }
    }

    /// True for `b` and `b^-1`, which behave interchangeably for reduction purposes.
    pub fn is_b_kind(self) -> bool {
        matches!(self, Letter::B | Letter::Binv)
    }

    fn ascii(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::Binv => 'B',
        }
    }

    /// Exponent of `b` mod 3 (0 for `a`, which never mixes with the `b`s).
    fn b_exp(self) -> u8 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
            Letter::Binv => 2,
        }
    }

    fn from_b_exp(e: u8) -> Option<Letter> {
        match e % 3 {
            1 => Some(Letter::B),
            2 => Some(Letter::Binv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parses the ASCII syntax (`a`, `b`, `B`, whitespace ignored).
    pub fn parse(s: &str) -> crate::Result<Word> {
        let mut letters = Vec::new();
        for (position, c) in s.char_indices() {
            match c {
                'a' => letters.push(Letter::A),
                'b' => letters.push(Letter::B),
                'B' => letters.push(Letter::Binv),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::WordSyntax {
                        position,
                        message: format!("unexpected character {c:?}, expected 'a', 'b' or 'B'"),
                    })
                }
            }
        }
        Ok(Word(letters))
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
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Rewrites to the unique normal form, in one left-to-right pass over a stack.
    /// Adjacent `b`-kind letters merge by adding exponents mod 3; `aa` cancels.
    pub fn normalize(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            match stack.last().copied() {
                Some(Letter::A) if x == Letter::A => {
                    stack.pop();
                }
                Some(top) if top.is_b_kind() && x.is_b_kind() => {
                    stack.pop();
                    if let Some(merged) = Letter::from_b_exp(top.b_exp() + x.b_exp()) {
                        stack.push(merged);
                    }
                }
                _ => stack.push(x),
            }
        }
        Word(stack)
    }

    pub fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| {
            let (x, y) = (w[0], w[1]);
            !(x == Letter::A && y == Letter::A) && !(x.is_b_kind() && y.is_b_kind())
        })
    }

    /// A normal word is cyclically reduced when it has length at most 1 or its
    /// first and last letters are of different kinds.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_normal()
            && (self.0.len() <= 1
                || self.0[0].is_b_kind() != self.0[self.0.len() - 1].is_b_kind())
    }

    /// Splits the normal form of `self` as `x u x^-1` with `u` cyclically reduced
    /// and `x` of minimal length; `x` is a prefix of the normal form. Returns `(x, u)`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = self.normalize();
        let mut x: Vec<Letter> = Vec::new();
        let mut u = w.0;
        loop {
            if u.len() < 2 {
                break;
            }
            let first = u[0];
            let last = u[u.len() - 1];
            if first.is_b_kind() != last.is_b_kind() {
                break;
            }
            x.push(first);
            if first == Letter::A || last == first.inverse() {
                // a u' a conjugates to u', and b^e u' b^-e likewise.
                u.pop();
                u.remove(0);
            } else {
                // b^e u' b^e conjugates to u' b^-e.
                let tail = first.inverse();
                u.pop();
                u.remove(0);
                u.push(tail);
            }
        }
        (Word(x), Word(u))
    }

    /// Finite-order elements are exactly the conjugates of powers of `a` and `b`,
    /// whose cyclically reduced forms have length at most 1.
    pub fn is_infinite_order(&self) -> bool {
        self.cyclic_reduce().1.len() >= 2
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.ascii())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Word> {
        Word::parse(s)
    }
}
