//! Explicit admissible vectors and the closed form for `m = 1`.

use crate::digits::{digit_compare, DigitString, TranslationVector};
use crate::error::{Error, Result};

/// The set `S ⊂ {0,1}^{ℓ+1}` of size `m+1` used for `m ≥ 2`, where
/// `2^ℓ ≤ m < 2^{ℓ+1}`. Words are listed as letter vectors `i_1 … i_{ℓ+1}`.
///
/// Every word with leading letter 0 is taken (one per complement pair,
/// including `0^{ℓ+1}`); then `1^{ℓ+1}` and further complements in ascending
/// code order until the size reaches `m+1`.
pub fn s_set(m: usize) -> Result<Vec<Vec<u8>>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("S-set needs m >= 2, got {m}")));
    }
    let ell = usize::BITS as usize - 1 - m.leading_zeros() as usize;
    let len = ell + 1;
    let half = 1usize << ell;
    let word = |code: usize| -> Vec<u8> { (0..len).rev().map(|b| ((code >> b) & 1) as u8).collect() };

    let mut out: Vec<Vec<u8>> = (0..half).map(word).collect();
    let all_ones = (1usize << len) - 1;
    out.push(word(all_ones));
    let mut next = half;
    while out.len() < m + 1 {
        if next != all_ones {
            out.push(word(next));
        }
        next += 1;
    }
    Ok(out)
}

/// An admissible vector with `m+1` entries over `{0,…,N}`.
///
/// `m = 1` gives `(0, [1])`. For `m ≥ 2` the entries are the words of
/// [`s_set`] read as digit strings (`t_{j,k} = i_k`), sorted; the resulting
/// stamp set `W_t^{ℓ+1}` is the whole of `{0,…,N}^{ℓ+1}`.
pub fn construct_admissible(m: usize, cap: u8) -> Result<TranslationVector> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m == 1 {
        return TranslationVector::from_digits(cap, &[&[], &[1]]);
    }
    let mut entries = s_set(m)?
        .into_iter()
        .map(|w| DigitString::new(cap, w))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| digit_compare(a, b).expect("same alphabet"));
    TranslationVector::new(cap, entries)
}

/// Closed-form test for `Γ ∪ (Γ + t_1)`: true iff `t_1` has exactly one
/// nonzero digit `j`, with `1 ≤ j ≤ ⌊(N+1)/2⌋`, at any index `k ≥ 1`.
///
/// The index is normalized away by rescaling with `β^{k-1}`.
pub fn corollary_m1(t1: &DigitString) -> Result<bool> {
    let Some(first) = t1.digits().iter().position(|&d| d != 0) else {
        return Err(Error::InvalidArgument("t_1 must be nonzero".into()));
    };
    let normalized = t1.scale(first as i32).expect("leading zeros can be shifted out");
    Ok(normalized.top() == 1 && normalized.digit(1) as u32 <= (t1.cap() as u32 + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::{is_admissible, CheckMode};
    use crate::blocks::stamp_set;

    #[test]
    fn m1_vector() {
        for cap in 1..=4 {
            let t = construct_admissible(1, cap).unwrap();
            assert_eq!(t.entry(1).digits(), &[1]);
            assert!(is_admissible(&t, CheckMode::CrossCheck).unwrap().admissible);
        }
    }

    #[test]
    fn m2_uses_expected_s() {
        assert_eq!(s_set(2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        let t = construct_admissible(2, 1).unwrap();
        let entries: Vec<&[u8]> = t.entries().iter().map(|e| e.digits()).collect();
        assert_eq!(entries, vec![&[][..], &[0, 1][..], &[1, 1][..]]);
        assert!(stamp_set(&t).unwrap().is_full());
    }

    #[test]
    fn m4_s_set() {
        let s = s_set(4).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.contains(&vec![0, 0, 0]) && s.contains(&vec![1, 1, 1]));
        for cap in 1..=3 {
            let t = construct_admissible(4, cap).unwrap();
            assert!(is_admissible(&t, CheckMode::CrossCheck).unwrap().admissible);
        }
    }

    #[test]
    fn s_set_hits_every_complement_pair() {
        for m in 2..=40 {
            let s = s_set(m).unwrap();
            assert_eq!(s.len(), m + 1);
            let len = s[0].len();
            assert!(1 << (len - 1) <= m && m < 1 << len);
            assert!(s.contains(&vec![0; len]) && s.contains(&vec![1; len]));
            for code in 0..1u32 << len {
                let w: Vec<u8> = (0..len).rev().map(|b| ((code >> b) & 1) as u8).collect();
                let c: Vec<u8> = w.iter().map(|l| 1 - l).collect();
                assert!(s.contains(&w) || s.contains(&c));
            }
            let mut dedup = s.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), s.len());
        }
    }

    #[test]
    fn corollary_examples() {
        let ds = |cap, d: &[u8]| DigitString::new(cap, d.to_vec()).unwrap();
        assert!(corollary_m1(&ds(1, &[0, 1])).unwrap());
        assert!(corollary_m1(&ds(4, &[2])).unwrap());
        assert!(!corollary_m1(&ds(4, &[3])).unwrap());
        assert!(!corollary_m1(&ds(1, &[1, 1])).unwrap());
        assert!(corollary_m1(&ds(3, &[0, 0, 2])).unwrap());
        assert!(corollary_m1(&DigitString::zero(1)).is_err());
        assert!(construct_admissible(0, 1).is_err());
    }
}
