//! Alphabets, contexts and the suffix relation.
//!
//! Contexts are stored oldest-to-newest: the last element is the most recent
//! past symbol. The context `[0, 1]` therefore reads "one step back a 0, then
//! a 1". The empty context is the root of every context tree.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// A finite alphabet `{0, .., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub const MAX_SIZE: usize = 256;

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        (symbol as usize) < self.0
    }

    pub fn check(self, symbol: Symbol) -> Result<()> {
        if self.contains(symbol) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol,
                size: self.0,
            })
        }
    }

    pub fn check_all(self, symbols: &[Symbol]) -> Result<()> {
        symbols.iter().try_for_each(|&s| self.check(s))
    }

    /// Estimation needs at least two symbols.
    pub fn require_estimable(self) -> Result<()> {
        if self.0 < 2 {
            return Err(Error::InvalidParameter(format!(
                "estimation needs an alphabet of at least 2 symbols, got {}",
                self.0
            )));
        }
        Ok(())
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.0).map(|s| s as Symbol)
    }

    /// Smallest alphabet holding every symbol of `seq` (at least `min`).
    pub fn covering(seq: &[Symbol], min: usize) -> Result<Self> {
        let needed = seq.iter().map(|&s| s as usize + 1).max().unwrap_or(0);
        Self::new(needed.max(min))
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Self::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

/// A finite string of past symbols, oldest first.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Context(Vec<Symbol>);

impl Context {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    /// The context with its oldest symbol removed (`w_2^k`). The root has no stem.
    pub fn stem(&self) -> Option<Context> {
        if self.0.is_empty() {
            None
        } else {
            Some(Self(self.0[1..].to_vec()))
        }
    }

    /// `b·self`: one more symbol further in the past.
    pub fn extend_past(&self, b: Symbol) -> Context {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(b);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// All suffixes from `self` itself down to the root.
    pub fn suffixes(&self) -> impl Iterator<Item = &[Symbol]> {
        (0..=self.0.len()).map(move |i| &self.0[i..])
    }

    /// True iff `self` is a suffix of `other` (`self ⪯ other`).
    pub fn is_suffix_of(&self, other: &Context) -> bool {
        is_suffix(&self.0, &other.0)
    }

    /// True iff `self` is a suffix of `other` and differs from it.
    pub fn is_proper_suffix_of(&self, other: &Context) -> bool {
        is_proper_suffix(&self.0, &other.0)
    }

    /// True iff the context is a suffix of the given past.
    pub fn matches_past(&self, past: &[Symbol]) -> bool {
        past.ends_with(&self.0)
    }
}

impl Borrow<[Symbol]> for Context {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Context {
    fn from(v: Vec<Symbol>) -> Self {
        Self(v)
    }
}

impl From<&[Symbol]> for Context {
    fn from(v: &[Symbol]) -> Self {
        Self(v.to_vec())
    }
}

impl<const N: usize> From<[Symbol; N]> for Context {
    fn from(v: [Symbol; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let compact = self.0.iter().all(|&s| s < 10);
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `u ⪯ v`: there is a string `s` with `v = s·u`.
pub fn is_suffix(u: &[Symbol], v: &[Symbol]) -> bool {
    v.ends_with(u)
}

/// `u ≺ v`: `u ⪯ v` and `u ≠ v`.
pub fn is_proper_suffix(u: &[Symbol], v: &[Symbol]) -> bool {
    u.len() < v.len() && v.ends_with(u)
}

/// Packs strings of bounded length into `u64` keys.
///
/// The most recent symbol occupies the lowest bits and a sentinel bit above
/// the last symbol encodes the length, so keys of different lengths never
/// collide. Extending a key one step into the past is a shift-or.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KeyCodec {
    bits: u32,
}

impl KeyCodec {
    pub fn new(alphabet: Alphabet, max_len: usize) -> Result<Self> {
        let size = alphabet.size().max(2);
        let bits = usize::BITS - (size - 1).leading_zeros();
        if max_len.saturating_mul(bits as usize) > 63 {
            return Err(Error::TooDeep {
                depth: max_len,
                size: alphabet.size(),
            });
        }
        Ok(Self { bits })
    }

    pub const ROOT: u64 = 1;

    /// Key of `b·w` given the key of `w` and its length.
    #[inline]
    pub fn extend(self, key: u64, len: usize, b: Symbol) -> u64 {
        let shift = self.bits * len as u32;
        let body = key & !(1u64 << shift);
        body | ((b as u64) << shift) | (1u64 << (shift + self.bits))
    }

    pub fn encode(self, symbols: &[Symbol]) -> u64 {
        symbols
            .iter()
            .rev()
            .enumerate()
            .fold(Self::ROOT, |key, (len, &s)| self.extend(key, len, s))
    }

    pub fn decode(self, key: u64) -> Context {
        let top = 63 - key.leading_zeros();
        let len = (top / self.bits) as usize;
        let mask = (1u64 << self.bits) - 1;
        let mut symbols = vec![0; len];
        for (lag, slot) in symbols.iter_mut().rev().enumerate() {
            *slot = ((key >> (self.bits * lag as u32)) & mask) as Symbol;
        }
        Context(symbols)
    }
}
