//! Direct checks of the covering condition: every word of length `ℓ` has a
//! factor of length `τ_t` in `W_t^{τ_t}`.
//!
//! Two independent routes are provided. [`covering_holds`] walks the words
//! of length `ℓ` as a prefix tree, pruning a branch as soon as its newest
//! window is a stamp, so it never materializes `{0,…,N}^ℓ`.
//! [`covering_holds_bitset`] builds the union of stamped cylinders as a
//! bitset and is limited by the universe guard.

use std::collections::HashSet;

use crate::blocks::stamp_set;
use crate::digits::TranslationVector;
use crate::error::{Error, Result};
use crate::words::{Word, WordSet};

/// Default node budget of the prefix search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Result of a covering check at one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    pub length: usize,
    pub holds: bool,
    /// A word of length `ℓ` with no stamped factor, when the check fails.
    pub uncovered: Option<Word>,
}

/// Prefix-tree check with a budget on visited nodes.
pub fn covering_holds(t: &TranslationVector, length: usize, budget: u64) -> Result<Covering> {
    let stamps = stamp_set(t)?;
    covering_with_stamps(&stamps, length, budget)
}

pub(crate) fn covering_with_stamps(stamps: &WordSet, length: usize, budget: u64) -> Result<Covering> {
    let tau = stamps.word_len();
    let cap = stamps.cap();
    if length < tau {
        return Err(Error::LengthTooSmall { len: length, min: tau });
    }
    if tau == 0 {
        // The empty word is a factor of everything.
        let holds = !stamps.is_empty();
        return Ok(Covering {
            length,
            holds,
            uncovered: (!holds).then(|| Word::decode(cap, length, 0)),
        });
    }

    let base = cap as u64 + 1;
    let window = stamps.universe();
    let suffix_mod = window / base;
    let mut search = PrefixSearch {
        stamps,
        base,
        window,
        suffix_mod,
        tau,
        length,
        letters: Vec::with_capacity(length),
        dead: HashSet::new(),
        visited: 0,
        budget,
    };
    let found = search.run(0)?;
    Ok(Covering {
        length,
        holds: !found,
        uncovered: found.then(|| Word::new(cap, search.letters.clone()).expect("letters in range")),
    })
}

struct PrefixSearch<'a> {
    stamps: &'a WordSet,
    base: u64,
    window: u64,
    suffix_mod: u64,
    tau: usize,
    length: usize,
    letters: Vec<u8>,
    /// (last τ-1 letters, letters still to place) known to admit no
    /// uncovered completion.
    dead: HashSet<(u64, usize)>,
    visited: u64,
    budget: u64,
}

impl PrefixSearch<'_> {
    /// `code` holds the last `min(len, τ)` letters. Returns true when an
    /// uncovered word of full length is left in `letters`.
    fn run(&mut self, code: u64) -> Result<bool> {
        let placed = self.letters.len();
        if placed == self.length {
            return Ok(true);
        }
        let remaining = self.length - placed;
        let key = (code % self.suffix_mod, remaining);
        if placed + 1 >= self.tau && self.dead.contains(&key) {
            return Ok(false);
        }
        for letter in 0..self.base {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                    needed: self.visited,
                });
            }
            let next = (code * self.base + letter) % self.window;
            if placed + 1 >= self.tau && self.stamps.contains(next) {
                continue;
            }
            self.letters.push(letter as u8);
            if self.run(next)? {
                return Ok(true);
            }
            self.letters.pop();
        }
        if placed + 1 >= self.tau {
            self.dead.insert(key);
        }
        Ok(false)
    }
}

/// Bitset route: `⋃_{n=τ}^{ℓ} {0,…,N}^{n-τ} × W × {0,…,N}^{ℓ-n}` built
/// explicitly and compared with `{0,…,N}^ℓ`.
pub fn covering_holds_bitset(t: &TranslationVector, length: usize) -> Result<Covering> {
    let stamps = stamp_set(t)?;
    let tau = stamps.word_len();
    let cap = stamps.cap();
    if length < tau {
        return Err(Error::LengthTooSmall { len: length, min: tau });
    }
    let mut covered = WordSet::empty(cap, length)?;
    for n in tau..=length {
        let block = stamps.with_free_prefix(n - tau)?.with_free_suffix(length - n)?;
        covered.union_with(&block);
    }
    let uncovered = covered.complement().iter().next().map(|c| Word::decode(cap, length, c));
    Ok(Covering {
        length,
        holds: uncovered.is_none(),
        uncovered,
    })
}

/// `τ_t + #V_t`, the covering length that works whenever `t` is admissible.
pub fn covering_bound(t: &TranslationVector) -> Result<usize> {
    let stamps = stamp_set(t)?;
    Ok(t.tau() + (stamps.universe() - stamps.count()) as usize)
}

/// Least `ℓ ∈ [τ_t, τ_t + #V_t]` at which the covering holds, or `None`.
pub fn minimal_covering_length(t: &TranslationVector, budget: u64) -> Result<Option<usize>> {
    let stamps = stamp_set(t)?;
    let tau = t.tau();
    let bound = tau + (stamps.universe() - stamps.count()) as usize;
    for length in tau..=bound {
        if covering_with_stamps(&stamps, length, budget)?.holds {
            return Ok(Some(length));
        }
    }
    Ok(None)
}
