//! The block sets Ω, Ω̂, A, Â and W of a translation vector.
//!
//! `Ω_t^n` holds the words whose last `τ_t` letters leave room to add every
//! `t_j` letterwise without leaving `{0,…,N}`; `Ω̂_t^n` the words that leave
//! room to subtract. Adding `t_j` to the tail of a word is a plain integer
//! addition of codes, because the Ω constraints rule out carries.

use crate::digits::TranslationVector;
use crate::error::{Error, Result};
use crate::words::{Word, WordSet};

/// `A_t^n`, `Â_t^n` and their union `W_t^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSets {
    pub added: WordSet,
    pub subtracted: WordSet,
    pub union: WordSet,
}

fn check_len(t: &TranslationVector, n: usize) -> Result<()> {
    if n < t.tau() {
        return Err(Error::LengthTooSmall { len: n, min: t.tau() });
    }
    Ok(())
}

/// Letter `i_{n+1-k}` of the word with code `code`, i.e. base-(N+1) digit `k-1`.
fn tail_letter(code: u64, k: usize, base: u64) -> u8 {
    ((code / base.pow(k as u32 - 1)) % base) as u8
}

fn filter_tail(t: &TranslationVector, n: usize, keep: impl Fn(u8, u8) -> bool) -> Result<WordSet> {
    check_len(t, n)?;
    let cap = t.cap();
    let base = cap as u64 + 1;
    let s = t.column_max();
    let mut out = WordSet::empty(cap, n)?;
    'codes: for code in 0..out.universe() {
        for (k, &sk) in s.iter().enumerate() {
            if !keep(tail_letter(code, k + 1, base), sk) {
                continue 'codes;
            }
        }
        out.insert(code);
    }
    Ok(out)
}

/// `Ω_t^n = { i : i_{n+1-k} ≤ N - s_k, 1 ≤ k ≤ τ_t }`
pub fn omega(t: &TranslationVector, n: usize) -> Result<WordSet> {
    let cap = t.cap();
    filter_tail(t, n, |letter, sk| letter <= cap - sk)
}

/// `Ω̂_t^n = { i : i_{n+1-k} ≥ s_k, 1 ≤ k ≤ τ_t }`
pub fn omega_hat(t: &TranslationVector, n: usize) -> Result<WordSet> {
    filter_tail(t, n, |letter, sk| letter >= sk)
}

/// Code offset of `t_j` placed on the tail: `Σ_k t_{j,k} (N+1)^{k-1}`.
pub(crate) fn tail_offsets(t: &TranslationVector) -> Vec<u64> {
    let base = t.cap() as u64 + 1;
    t.entries()
        .iter()
        .map(|e| {
            e.digits()
                .iter()
                .rev()
                .fold(0u64, |acc, &d| acc * base + d as u64)
        })
        .collect()
}

/// Applies `t_j` to the tail of `code` letter by letter, returning `None` if
/// any letter leaves `{0,…,N}`.
pub(crate) fn apply_tail(t: &TranslationVector, j: usize, code: u64, subtract: bool) -> Option<u64> {
    let cap = t.cap() as i32;
    let base = cap as u64 + 1;
    let mut out = code;
    for (k, &d) in t.entry(j).digits().iter().enumerate() {
        let letter = tail_letter(code, k + 1, base) as i32;
        let new = if subtract { letter - d as i32 } else { letter + d as i32 };
        if !(0..=cap).contains(&new) {
            return None;
        }
        let place = base.pow(k as u32);
        out = out - letter as u64 * place + new as u64 * place;
    }
    Some(out)
}

/// `A_t^n`, `Â_t^n` and `W_t^n = A_t^n ∪ Â_t^n`.
pub fn block_sets(t: &TranslationVector, n: usize) -> Result<BlockSets> {
    let om = omega(t, n)?;
    let om_hat = omega_hat(t, n)?;
    let offsets = tail_offsets(t);
    let mut added = WordSet::empty(t.cap(), n)?;
    let mut subtracted = WordSet::empty(t.cap(), n)?;
    for code in om.iter() {
        for (j, &off) in offsets.iter().enumerate() {
            let shifted = code + off;
            if apply_tail(t, j, code, false) != Some(shifted) {
                return Err(Error::Internal(format!(
                    "letter overflow adding t_{j} to {}",
                    Word::decode(t.cap(), n, code)
                )));
            }
            added.insert(shifted);
        }
    }
    for code in om_hat.iter() {
        for (j, &off) in offsets.iter().enumerate() {
            let shifted = code.checked_sub(off);
            if shifted.is_none() || apply_tail(t, j, code, true) != shifted {
                return Err(Error::Internal(format!(
                    "letter underflow subtracting t_{j} from {}",
                    Word::decode(t.cap(), n, code)
                )));
            }
            subtracted.insert(shifted.unwrap());
        }
    }
    let union = added.union(&subtracted);
    Ok(BlockSets {
        added,
        subtracted,
        union,
    })
}

/// Whether `letters` (length `n ≥ τ_t`) lies in `W_t^n`, decided from the
/// definition without building the universe.
pub fn in_block_union(t: &TranslationVector, letters: &[u8]) -> bool {
    let n = letters.len();
    let cap = t.cap();
    if n < t.tau() || letters.iter().any(|&l| l > cap) {
        return false;
    }
    let s = t.column_max();
    let fits = |base: &[i32], room: &dyn Fn(i32, u8) -> bool| {
        s.iter().enumerate().all(|(k, &sk)| room(base[n - 1 - k], sk))
    };
    t.entries().iter().any(|e| {
        let mut minus: Vec<i32> = letters.iter().map(|&l| l as i32).collect();
        let mut plus = minus.clone();
        for k in 1..=e.top() {
            minus[n - k] -= e.digit(k) as i32;
            plus[n - k] += e.digit(k) as i32;
        }
        let added = fits(&minus, &|l, sk| l >= 0 && l <= cap as i32 - sk as i32);
        let subtracted = fits(&plus, &|l, sk| l <= cap as i32 && l >= sk as i32);
        added || subtracted
    })
}

/// `W_t^{τ_t}`, the stamp set used by the admissibility checks.
pub fn stamp_set(t: &TranslationVector) -> Result<WordSet> {
    Ok(block_sets(t, t.tau())?.union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitString;

    fn names(s: &WordSet) -> Vec<String> {
        s.words().map(|w| w.to_string()).collect()
    }

    fn four_translates() -> TranslationVector {
        TranslationVector::from_digits(1, &[&[], &[1, 1], &[1, 0, 1], &[1, 0, 0, 1]]).unwrap()
    }

    fn ones_family(cap: u8, m: usize) -> TranslationVector {
        let rest = (1..=m)
            .map(|j| DigitString::new(cap, vec![1; j]).unwrap())
            .collect();
        TranslationVector::from_nonzero(cap, rest).unwrap()
    }

    fn product(letters: &[u8], len: usize, cap: u8) -> WordSet {
        let mut out = WordSet::empty(cap, len).unwrap();
        for w in WordSet::full(cap, len).unwrap().words() {
            if w.letters().iter().all(|l| letters.contains(l)) {
                out.insert(w.encode());
            }
        }
        out
    }

    #[test]
    fn four_translates_blocks() {
        let t = four_translates();
        assert_eq!(names(&omega(&t, 4).unwrap()), vec!["0000"]);
        assert_eq!(names(&omega_hat(&t, 4).unwrap()), vec!["1111"]);
        let b = block_sets(&t, 4).unwrap();
        assert_eq!(
            b.added,
            WordSet::from_words(1, 4, ["0000", "0011", "0101", "1001"]).unwrap()
        );
        assert_eq!(
            b.subtracted,
            WordSet::from_words(1, 4, ["1111", "1100", "1010", "0110"]).unwrap()
        );
        assert_eq!(b.union.count(), 8);
    }

    #[test]
    fn ones_family_omegas() {
        for cap in 1..=3u8 {
            for m in 1..=4 {
                let t = ones_family(cap, m);
                let low: Vec<u8> = (0..cap).collect();
                let high: Vec<u8> = (1..=cap).collect();
                assert_eq!(omega(&t, m).unwrap(), product(&low, m, cap));
                assert_eq!(omega_hat(&t, m).unwrap(), product(&high, m, cap));
            }
            assert!(block_sets(&ones_family(cap, 2), 2).unwrap().union.is_full());
        }
    }

    #[test]
    fn saturated_columns_give_zero_word() {
        // s_k = N for every k.
        let t = TranslationVector::from_digits(2, &[&[], &[2, 2, 2]]).unwrap();
        assert_eq!(names(&omega(&t, 3).unwrap()), vec!["000"]);
        assert!(names(&omega(&t, 5).unwrap()).iter().all(|w| w.ends_with("000")));
        assert_eq!(omega(&t, 5).unwrap().count(), 9);
        assert_eq!(names(&omega_hat(&t, 3).unwrap()), vec!["222"]);
    }

    #[test]
    fn short_length_rejected() {
        let t = four_translates();
        assert!(matches!(omega(&t, 3), Err(Error::LengthTooSmall { len: 3, min: 4 })));
        assert!(omega_hat(&t, 2).is_err());
        assert!(block_sets(&t, 1).is_err());
    }

    #[test]
    fn factorization_against_direct_recomputation() {
        let vectors = [
            four_translates(),
            ones_family(2, 3),
            TranslationVector::from_digits(2, &[&[], &[1], &[0, 2, 1]]).unwrap(),
            TranslationVector::from_digits(3, &[&[], &[2, 0, 1]]).unwrap(),
        ];
        for t in &vectors {
            let tau = t.tau();
            let base = block_sets(t, tau).unwrap().union;
            for extra in 0..=3 {
                let direct = block_sets(t, tau + extra).unwrap().union;
                assert_eq!(direct, base.with_free_prefix(extra).unwrap(), "{t} n={}", tau + extra);
            }
        }
    }

    #[test]
    fn cardinality_and_mirror_laws() {
        for t in [four_translates(), ones_family(3, 3), TranslationVector::from_digits(2, &[&[], &[1, 2], &[2, 0, 1]]).unwrap()] {
            let cap = t.cap() as u64;
            let s = t.column_max();
            for n in t.tau()..=t.tau() + 2 {
                let om = omega(&t, n).unwrap();
                let oh = omega_hat(&t, n).unwrap();
                let expected: u64 = s.iter().map(|&sk| cap + 1 - sk as u64).product::<u64>()
                    * (cap + 1).pow((n - t.tau()) as u32);
                assert_eq!(om.count(), expected);
                assert_eq!(oh.count(), expected);
                assert_eq!(om.mirrored(), oh);
                let w = block_sets(&t, n).unwrap().union;
                assert_eq!(w.mirrored(), w);
            }
        }
    }

    #[test]
    fn direct_membership_matches_sets() {
        let cases = [
            TranslationVector::from_digits(1, &[&[], &[1, 1], &[1, 0, 1], &[1, 0, 0, 1]]).unwrap(),
            TranslationVector::from_digits(2, &[&[], &[1], &[0, 2]]).unwrap(),
            TranslationVector::from_digits(3, &[&[], &[1, 1], &[2, 0, 1]]).unwrap(),
        ];
        for t in &cases {
            for n in t.tau()..=t.tau() + 2 {
                let w = block_sets(t, n).unwrap().union;
                for code in 0..w.universe() {
                    let word = Word::decode(t.cap(), n, code);
                    assert_eq!(in_block_union(t, word.letters()), w.contains(code), "{word}");
                }
            }
        }
    }
}
