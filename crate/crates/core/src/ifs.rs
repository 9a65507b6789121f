//! Generating IFS of an admissible union, and its symbolic verification.
//!
//! For admissible `t` with covering length `ℓ` the union `Γ_t` is generated by
//!
//! ```text
//! { φ_i(x) + t_j     : i ∈ Ω_t^n, τ ≤ n ≤ ℓ, 0 ≤ j ≤ m }
//! { φ_i(1 - x) + t_j : i ∈ Ω̂_t^n, τ ≤ n ≤ ℓ, 0 ≤ j ≤ m }
//! ```
//!
//! All offsets are exact [`BetaLaurent`] values.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::{is_admissible, CheckMode};
use crate::blocks::{in_block_union, omega, omega_hat};
use crate::digits::TranslationVector;
use crate::error::{Error, Result};
use crate::laurent::BetaLaurent;
use crate::words::{universe_size, Word, WordSet, MAX_UNIVERSE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Preserving,
    #[serde(rename = "-")]
    Reversing,
}

/// `x ↦ ±β^n x + offset`, built as `φ_i(x) + t_j` or `φ_i(1-x) + t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub orientation: Orientation,
    pub power: u32,
    pub offset: BetaLaurent,
    pub word: Word,
    pub translate: usize,
}

impl AffineMap {
    fn new(orientation: Orientation, word: Word, translate: &TranslationVector, j: usize) -> Self {
        let cap = translate.cap();
        let power = word.len() as u32;
        let mut offset = match orientation {
            Orientation::Preserving => BetaLaurent::from_coding(word.letters()),
            // φ_i(1) = 1 - φ_ī(0)
            Orientation::Reversing => {
                let mut o = BetaLaurent::one();
                for (k, &l) in word.letters().iter().enumerate() {
                    o.add_term(k as i32, l as i64 - cap as i64);
                }
                o
            }
        };
        offset = offset + translate.entry(j).to_laurent();
        Self {
            orientation,
            power,
            offset,
            word,
            translate: j,
        }
    }

    /// `f(x)` for `x` with no unit term.
    pub fn apply(&self, x: &BetaLaurent, cap: u8) -> BetaLaurent {
        let scaled = x.scaled_by_beta_power(self.power, cap);
        match self.orientation {
            Orientation::Preserving => self.offset.clone() + scaled,
            Orientation::Reversing => self.offset.clone() - scaled,
        }
    }

    /// The point `o` with `f(Γ + s) = o + β^n Γ`.
    pub fn image_base(&self, s: &BetaLaurent, cap: u8) -> BetaLaurent {
        match self.orientation {
            Orientation::Preserving => self.apply(s, cap),
            Orientation::Reversing => self.apply(&(s.clone() + BetaLaurent::one()), cap),
        }
    }

    pub fn apply_f64(&self, x: f64, beta: f64, cap: u8) -> f64 {
        let r = beta.powi(self.power as i32);
        let b = self.offset.value_f64(beta, cap);
        match self.orientation {
            Orientation::Preserving => b + r * x,
            Orientation::Reversing => b - r * x,
        }
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            sign: self.orientation,
            power: self.power,
            offset_coeffs: self.offset.coeffs().iter().map(|(k, c)| (k.to_string(), *c)).collect(),
            offset_unit: self.offset.unit(),
            word: self.word.to_string(),
            translate: self.translate,
        }
    }
}

/// Wire form of an [`AffineMap`]; the offset is
/// `offset_unit + ((1-β)/N) Σ offset_coeffs[k] β^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub sign: Orientation,
    pub power: u32,
    pub offset_coeffs: BTreeMap<String, i64>,
    pub offset_unit: i64,
    pub word: String,
    pub translate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ifs {
    pub cap: u8,
    /// Largest word length used, the covering length `ℓ`.
    pub covering_length: usize,
    pub maps: Vec<AffineMap>,
}

impl Ifs {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn max_power(&self) -> u32 {
        self.maps.iter().map(|f| f.power).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Vec<MapJson> {
        self.maps.iter().map(AffineMap::to_json).collect()
    }

    pub fn without(&self, index: usize) -> Ifs {
        let mut out = self.clone();
        out.maps.remove(index);
        out
    }
}

/// The IFS `{φ_0, …, φ_N}` of Γ itself.
pub fn cantor_ifs(cap: u8) -> Ifs {
    let t = TranslationVector::trivial(cap);
    let maps = (0..=cap)
        .map(|i| AffineMap::new(Orientation::Preserving, Word::new(cap, vec![i]).unwrap(), &t, 0))
        .collect();
    Ifs {
        cap,
        covering_length: 1,
        maps,
    }
}

/// The generating IFS of `Γ_t`, with `ℓ` the least covering length.
/// Word lengths run over `max(τ,1) ..= max(ℓ,1)`.
pub fn extract_ifs(t: &TranslationVector) -> Result<Ifs> {
    let adm = is_admissible(t, CheckMode::Fast)?;
    if !adm.admissible {
        return Err(Error::NotAdmissible);
    }
    let ell = adm.covering_length.expect("admissible vectors have a covering length");
    let lo = t.tau().max(1);
    let hi = ell.max(1);
    let mut maps = Vec::new();
    type Family = fn(&TranslationVector, usize) -> Result<WordSet>;
    let families: [(Orientation, Family); 2] = [(Orientation::Preserving, omega), (Orientation::Reversing, omega_hat)];
    for (orientation, set) in families {
        for n in lo..=hi {
            let words = set(t, n)?;
            for word in words.words() {
                for j in 0..=t.m() {
                    maps.push(AffineMap::new(orientation, word.clone(), t, j));
                }
            }
        }
    }
    Ok(Ifs {
        cap: t.cap(),
        covering_length: hi,
        maps,
    })
}

/// Why an IFS failed the symbolic check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicFailure {
    #[error("IFS and vector use different alphabets")]
    AlphabetMismatch,
    #[error("map {map} sends Γ + t_{from} off every translate Γ + t_j")]
    OffGrid { map: usize, from: usize },
    #[error("map {map} sends Γ + t_{from} to block {word}, which is not in W")]
    NotABlock { map: usize, from: usize, word: Word },
    #[error("no image covers the cylinder {word} of Γ + t_{translate}")]
    Uncovered { translate: usize, word: Word },
    #[error("word universe too large to check")]
    TooLarge,
}

/// Where `f(Γ + t_{source})` lands: `φ_word(Γ) + t_translate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Landing {
    pub map: usize,
    pub source: usize,
    pub translate: usize,
    pub word: Word,
}

fn negative_part(x: &BetaLaurent) -> Vec<(i32, i64)> {
    x.coeffs().range(..0).map(|(&k, &c)| (k, c)).collect()
}

/// Decomposes every image `f(Γ + t_j)` into a block word of some translate.
pub fn landings(t: &TranslationVector, ifs: &Ifs) -> std::result::Result<Vec<Landing>, SymbolicFailure> {
    if ifs.cap != t.cap() {
        return Err(SymbolicFailure::AlphabetMismatch);
    }
    let cap = t.cap();
    let translates: Vec<BetaLaurent> = t.entries().iter().map(|e| e.to_laurent()).collect();
    let by_tail: HashMap<Vec<(i32, i64)>, usize> =
        translates.iter().enumerate().map(|(j, l)| (negative_part(l), j)).collect();
    let mut out = Vec::with_capacity(ifs.len() * translates.len());
    for (index, f) in ifs.maps.iter().enumerate() {
        let n = f.power as i32;
        for (source, s) in translates.iter().enumerate() {
            let base = f.image_base(s, cap);
            let off_grid = SymbolicFailure::OffGrid { map: index, from: source };
            let Some(&translate) = by_tail.get(&negative_part(&base)) else {
                return Err(off_grid);
            };
            let rest = base - translates[translate].clone();
            if rest.unit() != 0 || rest.max_exponent().is_some_and(|k| k >= n) {
                return Err(off_grid);
            }
            let mut letters = vec![0u8; n as usize];
            for (&k, &c) in rest.coeffs() {
                if k < 0 || !(0..=cap as i64).contains(&c) {
                    return Err(off_grid);
                }
                letters[k as usize] = c as u8;
            }
            let word = Word::new(cap, letters).expect("letters checked");
            if !in_block_union(t, word.letters()) {
                return Err(SymbolicFailure::NotABlock {
                    map: index,
                    from: source,
                    word,
                });
            }
            out.push(Landing {
                map: index,
                source,
                translate,
                word,
            });
        }
    }
    Ok(out)
}

/// Checks that the landed cylinders cover every `Γ + t_j`: each word of
/// length `ℓ` must extend some landed word.
fn check_cover(t: &TranslationVector, landed: &[Landing]) -> std::result::Result<(), SymbolicFailure> {
    let cap = t.cap();
    let len = landed.iter().map(|l| l.word.len()).max().unwrap_or(0);
    if universe_size(cap, len).is_none() {
        return Err(SymbolicFailure::TooLarge);
    }
    let mut sets: Vec<HashSet<(usize, u64)>> = vec![HashSet::new(); t.m() + 1];
    for l in landed {
        sets[l.translate].insert((l.word.len(), l.word.encode()));
    }
    let base = cap as u64 + 1;
    for (translate, set) in sets.iter().enumerate() {
        // Depth-first over prefixes that are not yet covered.
        let mut stack = vec![(0usize, 0u64)];
        while let Some((k, code)) = stack.pop() {
            if k > 0 && set.contains(&(k, code)) {
                continue;
            }
            if k == len {
                return Err(SymbolicFailure::Uncovered {
                    translate,
                    word: Word::decode(cap, len, code),
                });
            }
            for a in (0..base).rev() {
                stack.push((k + 1, code * base + a));
            }
        }
    }
    Ok(())
}

/// Full symbolic check: every image is a block of `W` placed on a translate,
/// and the images cover `Γ_t`.
pub fn check_symbolic(t: &TranslationVector, ifs: &Ifs) -> std::result::Result<(), SymbolicFailure> {
    let landed = landings(t, ifs)?;
    check_cover(t, &landed)
}

pub fn verify_symbolic(t: &TranslationVector, ifs: &Ifs) -> bool {
    check_symbolic(t, ifs).is_ok()
}

/// Result of [`prune`]: a generating sub-IFS and the maps dropped from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub kept: Ifs,
    pub removed: Vec<AffineMap>,
}

/// Greedily drops maps whose images are covered by the rest, scanning from
/// the last map backwards. The result is irredundant but not necessarily minimal.
pub fn prune(t: &TranslationVector, ifs: &Ifs) -> Result<Pruned> {
    let landed = landings(t, ifs).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let cap = t.cap();
    let len = ifs.maps.iter().map(|f| f.power as usize).max().unwrap_or(0);
    let per = universe_size(cap, len).filter(|&u| u.saturating_mul(t.m() as u64 + 1) <= MAX_UNIVERSE_BITS);
    let per = per.ok_or(Error::UniverseTooLarge { cap, len })?;
    let base = cap as u64 + 1;
    let mut covered_by: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ifs.len()];
    for l in &landed {
        let free = base.pow((len - l.word.len()) as u32);
        let start = l.translate as u64 * per + l.word.encode() * free;
        covered_by[l.map].push((start as usize, free as usize));
    }
    let mut count = vec![0u32; (per * (t.m() as u64 + 1)) as usize];
    for ranges in &covered_by {
        for &(start, width) in ranges {
            for c in &mut count[start..start + width] {
                *c += 1;
            }
        }
    }
    let mut keep = vec![true; ifs.len()];
    for index in (0..ifs.len()).rev() {
        let spare = covered_by[index]
            .iter()
            .all(|&(start, width)| count[start..start + width].iter().all(|&c| c >= 2));
        if spare {
            keep[index] = false;
            for &(start, width) in &covered_by[index] {
                for c in &mut count[start..start + width] {
                    *c -= 1;
                }
            }
        }
    }
    let (mut kept, mut removed) = (Vec::new(), Vec::new());
    for (f, k) in ifs.maps.iter().zip(keep) {
        if k {
            kept.push(f.clone());
        } else {
            removed.push(f.clone());
        }
    }
    Ok(Pruned {
        kept: Ifs {
            cap,
            covering_length: ifs.covering_length,
            maps: kept,
        },
        removed,
    })
}
