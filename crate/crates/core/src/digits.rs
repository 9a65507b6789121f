//! Finite digit expansions of translation values and translation vectors.
//!
//! An element of T is `((1-β)/N) Σ_{k=1}^{L} d_k β^{-k}` with `d_k ∈ {0,…,N}`.
//! [`DigitString`] stores `d_1,…,d_L` lowest index first, with trailing zeros
//! stripped. Because codings with digits in `{-N,…,2N}` are unique for
//! `β < 1/(2N+1)`, order, equality and membership questions are all decided
//! on the digits alone.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Beta, BetaLaurent};

pub fn check_cap(cap: u32) -> Result<u8> {
    if (1..=254).contains(&cap) {
        Ok(cap as u8)
    } else {
        Err(Error::InvalidAlphabet(cap))
    }
}

/// Canonical digit string `d_1 … d_L` over `{0,…,N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    cap: u8,
    digits: Vec<u8>,
}

impl DigitString {
    pub fn new(cap: u8, digits: impl Into<Vec<u8>>) -> Result<Self> {
        let cap = check_cap(cap as u32)?;
        let mut digits = digits.into();
        if let Some((i, &d)) = digits.iter().enumerate().find(|(_, &d)| d > cap) {
            return Err(Error::DigitOutOfRange {
                index: i + 1,
                digit: d as u32,
                cap,
            });
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(Self { cap, digits })
    }

    pub fn zero(cap: u8) -> Self {
        Self {
            cap,
            digits: Vec::new(),
        }
    }

    /// Parses the comma-separated text form, lowest index first (`"1,0,1"`).
    /// The empty string is the zero value.
    pub fn parse(text: &str, cap: u8) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::zero(cap));
        }
        let digits = text
            .split(',')
            .enumerate()
            .map(|(i, part)| {
                let d: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid digit {part:?} in {text:?}")))?;
                if d > cap as u32 {
                    return Err(Error::DigitOutOfRange {
                        index: i + 1,
                        digit: d,
                        cap,
                    });
                }
                Ok(d as u8)
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(cap, digits)
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    /// Digits `d_1 … d_L`, lowest index first.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Highest nonzero index `L` (0 for the zero string).
    pub fn top(&self) -> usize {
        self.digits.len()
    }

    /// Digit at 1-based index `k`, zero beyond the top.
    pub fn digit(&self, k: usize) -> u8 {
        if k == 0 {
            return 0;
        }
        self.digits.get(k - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn to_laurent(&self) -> BetaLaurent {
        let mut out = BetaLaurent::zero();
        for (i, &d) in self.digits.iter().enumerate() {
            out.add_term(-(i as i32 + 1), d as i64);
        }
        out
    }

    /// Exact value `((1-β)/N) Σ d_k β^{-k}`.
    pub fn value_at(&self, beta: &Beta) -> Result<BigRational> {
        if beta.cap() != self.cap {
            return Err(Error::AlphabetMismatch {
                left: self.cap,
                right: beta.cap(),
            });
        }
        Ok(self.to_laurent().value_at(beta))
    }

    /// Multiplies the represented value by `β^q`, i.e. moves every digit from
    /// index `k` to `k - q`. Returns `None` when a nonzero digit would land at
    /// an index below 1.
    pub fn scale(&self, q: i32) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if q >= 0 {
            let q = q as usize;
            if self.digits.iter().take(q).any(|&d| d != 0) {
                return None;
            }
            Some(Self {
                cap: self.cap,
                digits: self.digits[q.min(self.digits.len())..].to_vec(),
            })
        } else {
            let mut digits = vec![0; (-q) as usize];
            digits.extend_from_slice(&self.digits);
            Some(Self {
                cap: self.cap,
                digits,
            })
        }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Orders two digit strings by the real values they represent, for every
/// `β ∈ (0, 1/(N+1))`: the highest differing digit decides.
pub fn digit_compare(a: &DigitString, b: &DigitString) -> Result<Ordering> {
    if a.cap != b.cap {
        return Err(Error::AlphabetMismatch {
            left: a.cap,
            right: b.cap,
        });
    }
    Ok(compare_unchecked(a, b))
}

fn compare_unchecked(a: &DigitString, b: &DigitString) -> Ordering {
    a.top().cmp(&b.top()).then_with(|| {
        for k in (1..=a.top()).rev() {
            match a.digit(k).cmp(&b.digit(k)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

impl PartialOrd for DigitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        digit_compare(self, other).ok()
    }
}

/// A translation vector `0 = t_0 < t_1 < ⋯ < t_m` with entries in T.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TranslationVector {
    cap: u8,
    entries: Vec<DigitString>,
}

/// Outcome of conjugation: either the conjugate lies in `T^{m+1}` or some
/// digit difference `t_{m,k} - t_{m-j,k}` is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugate {
    InT(TranslationVector),
    NotInT { j: usize, k: usize },
}

impl Conjugate {
    pub fn in_t(&self) -> Option<&TranslationVector> {
        match self {
            Conjugate::InT(t) => Some(t),
            Conjugate::NotInT { .. } => None,
        }
    }
}

impl TranslationVector {
    /// Validates `entries` (including `t_0`). Out-of-order or repeated
    /// entries are rejected, never sorted.
    pub fn new(cap: u8, entries: Vec<DigitString>) -> Result<Self> {
        let cap = check_cap(cap as u32)?;
        let first = entries.first().ok_or(Error::EmptyVector)?;
        if !first.is_zero() {
            return Err(Error::NonZeroFirstEntry);
        }
        for e in &entries {
            if e.cap != cap {
                return Err(Error::AlphabetMismatch {
                    left: cap,
                    right: e.cap,
                });
            }
        }
        for (i, pair) in entries.windows(2).enumerate() {
            if compare_unchecked(&pair[0], &pair[1]) != Ordering::Less {
                return Err(Error::NotIncreasing { index: i + 1 });
            }
        }
        Ok(Self { cap, entries })
    }

    /// Builds `(0, t_1, …, t_m)` from the nonzero entries only.
    pub fn from_nonzero(cap: u8, rest: Vec<DigitString>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rest.len() + 1);
        entries.push(DigitString::zero(cap));
        entries.extend(rest);
        Self::new(cap, entries)
    }

    /// Convenience constructor from raw digit lists (including `t_0`).
    pub fn from_digits(cap: u8, entries: &[&[u8]]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|d| DigitString::new(cap, d.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cap, entries)
    }

    /// The trivial vector `(0)`.
    pub fn trivial(cap: u8) -> Self {
        Self {
            cap,
            entries: vec![DigitString::zero(cap)],
        }
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    pub fn m(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[DigitString] {
        &self.entries
    }

    pub fn entry(&self, j: usize) -> &DigitString {
        &self.entries[j]
    }

    /// `τ_t`, the largest top index among the entries.
    pub fn tau(&self) -> usize {
        self.entries.iter().map(DigitString::top).max().unwrap_or(0)
    }

    /// `s_k = max_j t_{j,k}` for `1 ≤ k ≤ τ_t`, returned as `s[k-1]`.
    pub fn column_max(&self) -> Vec<u8> {
        (1..=self.tau())
            .map(|k| self.entries.iter().map(|e| e.digit(k)).max().unwrap_or(0))
            .collect()
    }

    /// `t̂_j = t_m - t_{m-j}`, decided digit by digit.
    pub fn conjugate(&self) -> Conjugate {
        let m = self.m();
        let tau = self.tau();
        let top = &self.entries[m];
        let mut out = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let other = &self.entries[m - j];
            let mut digits = Vec::with_capacity(tau);
            for k in 1..=tau {
                let d = top.digit(k) as i32 - other.digit(k) as i32;
                if d < 0 {
                    return Conjugate::NotInT { j, k };
                }
                digits.push(d as u8);
            }
            out.push(DigitString::new(self.cap, digits).expect("digit differences stay in range"));
        }
        match Self::new(self.cap, out) {
            Ok(v) => Conjugate::InT(v),
            Err(e) => unreachable!("conjugate of a valid vector is ordered: {e}"),
        }
    }

    /// `β^q t`. `None` when some entry leaves T.
    pub fn scale(&self, q: i32) -> Option<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.scale(q))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            cap: self.cap,
            entries,
        })
    }

    /// Exact values of all entries at β.
    pub fn values_at(&self, beta: &Beta) -> Result<Vec<BigRational>> {
        self.entries.iter().map(|e| e.value_at(beta)).collect()
    }

    /// Compact `[[],[1,1],…]` rendering used in messages.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("[{e}]")).collect();
        format!("N={} ({})", self.cap, parts.join(", "))
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson {
            n: self.cap as u32,
            entries: self.entries.iter().map(|e| e.digits.clone()).collect(),
        }
    }

    pub fn from_json(json: &VectorJson) -> Result<Self> {
        let cap = check_cap(json.n)?;
        let entries = json
            .entries
            .iter()
            .map(|d| DigitString::new(cap, d.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cap, entries)
    }
}

impl fmt::Display for TranslationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Wire form `{"N":1,"entries":[[],[1,1],[1,0,1]]}`; digits lowest index first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub entries: Vec<Vec<u8>>,
}
