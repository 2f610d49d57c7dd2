//! Letters, alphabets, words and the extended naturals used as distance values.

use std::fmt;
use std::ops::{Add, Deref};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense letter id; its meaning is given by an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered finite set of printable symbols; letter `i` is `symbols[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::Input(format!("duplicate symbol '{c}' in alphabet")));
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet whose symbols are the characters of `s`, in order.
    pub fn from_symbols(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    /// Alphabet of `n` synthetic symbols, used for edge-indexed inputs.
    pub fn synthetic(n: usize) -> Self {
        let symbols = (0..n as u32)
            .map(|i| char::from_u32(0xE000 + i).unwrap_or('\u{FFFD}'))
            .collect();
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len() as u32).map(Letter)
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() < self.symbols.len()
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        self.symbols.iter().position(|&s| s == c).map(|i| Letter(i as u32))
    }

    pub fn symbol(&self, l: Letter) -> char {
        self.symbols[l.index()]
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                self.letter(c)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("symbol '{c}' not in alphabet")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.symbol(l)).collect()
    }

    /// Symbols of `self` followed by the symbols of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut symbols = self.symbols.clone();
        for &c in &other.symbols {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        Alphabet { symbols }
    }

    /// Re-express a word over `self` as a word over `target`.
    pub fn translate(&self, w: &[Letter], target: &Alphabet) -> Result<Word> {
        w.iter()
            .map(|&l| {
                let c = self.symbol(l);
                target
                    .letter(c)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("symbol '{c}' missing from target alphabet")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::AlphabetMismatch(format!("letter id {} outside alphabet of size {}", l.0, self.len()))),
            None => Ok(()),
        }
    }

    /// All words of length exactly `n`, in lexicographic order of letter ids.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for l in self.letters() {
                    next.push(w.pushed(l));
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `n`, shortest first.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.words_of_length(k)).collect()
    }
}

/// Finite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Word(ids.iter().map(|&i| Letter(i)).collect())
    }

    /// Factor `w[i..j]` with 1-based inclusive bounds; empty when `j < i`.
    pub fn factor(&self, i: usize, j: usize) -> Word {
        if j < i || i == 0 {
            return Word::empty();
        }
        Word(self.0[i - 1..j.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn pushed(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn into_inner(self) -> Vec<Letter> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Natural number or infinity. Addition saturates at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNat {
    Finite(u64),
    Infinite,
}

impl ExtendedNat {
    pub const ZERO: ExtendedNat = ExtendedNat::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Infinite => None,
        }
    }
}

impl From<u64> for ExtendedNat {
    fn from(n: u64) -> Self {
        ExtendedNat::Finite(n)
    }
}

impl From<usize> for ExtendedNat {
    fn from(n: usize) -> Self {
        ExtendedNat::Finite(n as u64)
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;
    fn add(self, rhs: ExtendedNat) -> ExtendedNat {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => {
                a.checked_add(b).map_or(ExtendedNat::Infinite, ExtendedNat::Finite)
            }
            _ => ExtendedNat::Infinite,
        }
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedNat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(ExtendedNat::Infinite);
        }
        s.parse::<u64>()
            .map(ExtendedNat::Finite)
            .map_err(|_| Error::Input(format!("not an extended natural: {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_is_one_based_inclusive() {
        let w = Word::from_ids(&[0, 1, 2, 3]);
        assert_eq!(w.factor(2, 3), Word::from_ids(&[1, 2]));
        assert_eq!(w.factor(3, 2), Word::empty());
        assert_eq!(w.factor(1, 4), w);
    }

    #[test]
    fn extended_addition_saturates() {
        let inf = ExtendedNat::Infinite;
        assert_eq!(ExtendedNat::from(3u64) + inf, inf);
        assert_eq!(ExtendedNat::from(3u64) + ExtendedNat::from(4u64), ExtendedNat::from(7u64));
        assert_eq!(ExtendedNat::Finite(u64::MAX) + ExtendedNat::from(1u64), inf);
        assert!(ExtendedNat::Finite(u64::MAX) < inf);
        assert_eq!(inf.to_string(), "inf");
        assert_eq!("inf".parse::<ExtendedNat>().unwrap(), inf);
    }

    #[test]
    fn alphabet_round_trip() {
        let a = Alphabet::from_symbols("ab").unwrap();
        let w = a.parse_word("abba").unwrap();
        assert_eq!(a.render(&w), "abba");
        assert!(a.parse_word("abc").is_err());
        assert!(Alphabet::from_symbols("aa").is_err());
        assert_eq!(a.words_up_to(2).len(), 7);
    }
}
