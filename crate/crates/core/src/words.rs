//! Words over `{0,…,N}` and dense bitset word sets.
//!
//! A word `i_1 ⋯ i_n` is keyed by its code `Σ i_k (N+1)^{n-k}`, so `i_1` is
//! the most significant letter and `i_n` the least significant one.

use std::fmt;

use crate::error::{Error, Result};

/// Largest universe a [`WordSet`] may allocate, in bits.
pub const MAX_UNIVERSE_BITS: u64 = 1 << 28;

/// `(N+1)^len`, or `None` when it exceeds the memory guard.
pub fn universe_size(cap: u8, len: usize) -> Option<u64> {
    let base = cap as u64 + 1;
    let mut size: u64 = 1;
    for _ in 0..len {
        size = size.checked_mul(base)?;
        if size > MAX_UNIVERSE_BITS {
            return None;
        }
    }
    Some(size)
}

pub(crate) fn checked_universe(cap: u8, len: usize) -> Result<u64> {
    universe_size(cap, len).ok_or(Error::UniverseTooLarge { cap, len })
}

/// A word `i_1 ⋯ i_n` over `{0,…,N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    cap: u8,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(cap: u8, letters: Vec<u8>) -> Result<Self> {
        if let Some((i, &d)) = letters.iter().enumerate().find(|(_, &d)| d > cap) {
            return Err(Error::DigitOutOfRange {
                index: i + 1,
                digit: d as u32,
                cap,
            });
        }
        Ok(Self { cap, letters })
    }

    pub fn decode(cap: u8, len: usize, mut code: u64) -> Self {
        let base = cap as u64 + 1;
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (code % base) as u8;
            code /= base;
        }
        debug_assert_eq!(code, 0, "code exceeds (N+1)^len");
        Self { cap, letters }
    }

    pub fn encode(&self) -> u64 {
        let base = self.cap as u64 + 1;
        self.letters.iter().fold(0, |acc, &l| acc * base + l as u64)
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Letterwise complement `i ↦ N - i`.
    pub fn complement(&self) -> Self {
        Self {
            cap: self.cap,
            letters: self.letters.iter().map(|&l| self.cap - l).collect(),
        }
    }

    /// Parses the bare digit form (`"0110"`) or a JSON array (`"[10,2]"`).
    pub fn parse(text: &str, cap: u8) -> Result<Self> {
        let text = text.trim();
        let letters: Vec<u8> = if text.starts_with('[') {
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad word {text:?}: {e}")))?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(cap, letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cap <= 9 {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// Set of words of one fixed length, stored as a bitset over codes.
#[derive(Clone, PartialEq, Eq)]
pub struct WordSet {
    cap: u8,
    len: usize,
    universe: u64,
    bits: Vec<u64>,
}

impl fmt::Debug for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words().map(|w| w.to_string())).finish()
    }
}

impl WordSet {
    pub fn empty(cap: u8, len: usize) -> Result<Self> {
        let universe = checked_universe(cap, len)?;
        Ok(Self {
            cap,
            len,
            universe,
            bits: vec![0; universe.div_ceil(64) as usize],
        })
    }

    pub fn full(cap: u8, len: usize) -> Result<Self> {
        let mut out = Self::empty(cap, len)?;
        out.bits.iter_mut().for_each(|w| *w = !0);
        out.clear_tail();
        Ok(out)
    }

    pub fn from_words<'a>(cap: u8, len: usize, words: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut out = Self::empty(cap, len)?;
        for w in words {
            let word = Word::parse(w, cap)?;
            if word.len() != len {
                return Err(Error::Parse(format!("word {w:?} does not have length {len}")));
            }
            out.insert(word.encode());
        }
        Ok(out)
    }

    fn clear_tail(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    /// `(N+1)^len`
    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn insert(&mut self, code: u64) {
        debug_assert!(code < self.universe);
        self.bits[(code / 64) as usize] |= 1 << (code % 64);
    }

    pub fn remove(&mut self, code: u64) {
        self.bits[(code / 64) as usize] &= !(1 << (code % 64));
    }

    pub fn contains(&self, code: u64) -> bool {
        code < self.universe && self.bits[(code / 64) as usize] & (1 << (code % 64)) != 0
    }

    pub fn contains_word(&self, word: &Word) -> bool {
        word.len() == self.len && word.cap() == self.cap && self.contains(word.encode())
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe
    }

    /// Member codes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(i as u64 * 64 + bit)
            })
        })
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        self.iter().map(|c| Word::decode(self.cap, self.len, c))
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.cap == other.cap && self.len == other.len,
            "word sets over different universes"
        );
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_compatible(other);
        self.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a |= b);
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// Complement within `{0,…,N}^len`.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.bits.iter_mut().for_each(|w| *w = !*w);
        out.clear_tail();
        out
    }

    /// Image under the letterwise complement `i ↦ N - i`, which maps code
    /// `c` to `(N+1)^len - 1 - c`.
    pub fn mirrored(&self) -> Self {
        let mut out = Self {
            bits: vec![0; self.bits.len()],
            ..self.clone()
        };
        for c in self.iter() {
            out.insert(self.universe - 1 - c);
        }
        out
    }

    /// `{0,…,N}^k × self`.
    pub fn with_free_prefix(&self, k: usize) -> Result<Self> {
        let mut out = Self::empty(self.cap, self.len + k)?;
        let block = self.universe;
        let prefixes = out.universe / block;
        for p in 0..prefixes {
            for c in self.iter() {
                out.insert(p * block + c);
            }
        }
        Ok(out)
    }

    /// `self × {0,…,N}^k`.
    pub fn with_free_suffix(&self, k: usize) -> Result<Self> {
        let mut out = Self::empty(self.cap, self.len + k)?;
        let tail = out.universe / self.universe;
        for c in self.iter() {
            for s in 0..tail {
                out.insert(c * tail + s);
            }
        }
        Ok(out)
    }
}
