//! Exhaustive enumeration of translation vectors with bounded `τ`.

use std::cmp::Ordering;

use crate::admissibility::{decide_self_similar, is_admissible, CheckMode, Decision, Regime};
use crate::digits::{digit_compare, Conjugate, DigitString, TranslationVector};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::words::universe_size;

/// Default cap on the number of candidate vectors.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 20_000_000;

/// All nonzero digit strings with top index at most `tau_max`, in increasing order.
pub fn nonzero_strings(cap: u8, tau_max: usize) -> Result<Vec<DigitString>> {
    let size = universe_size(cap, tau_max).ok_or(Error::UniverseTooLarge { cap, len: tau_max })?;
    let base = cap as u64 + 1;
    let mut out = (1..size)
        .map(|mut code| {
            let mut digits = Vec::with_capacity(tau_max);
            for _ in 0..tau_max {
                digits.push((code % base) as u8);
                code /= base;
            }
            DigitString::new(cap, digits)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| digit_compare(a, b).expect("same alphabet"));
    Ok(out)
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of vectors `(0, t_1, …, t_m)` with `τ ≤ tau_max`.
pub fn candidate_count(m: usize, cap: u8, tau_max: usize) -> Option<u64> {
    let k = universe_size(cap, tau_max)? - 1;
    binomial(k, m as u64)
}

fn check_budget(m: usize, cap: u8, tau_max: usize, budget: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let needed = candidate_count(m, cap, tau_max).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { budget, needed });
    }
    Ok(())
}

/// Visits every strictly increasing `m`-combination of `pool` that starts at
/// index `first`, in lexicographic order.
fn for_each_combination_from(
    pool: &[DigitString],
    m: usize,
    first: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let mut idx: Vec<usize> = Vec::with_capacity(m);
    idx.push(first);
    for i in 1..m {
        idx.push(first + i);
    }
    if *idx.last().unwrap() >= pool.len() {
        return Ok(());
    }
    loop {
        visit(&idx)?;
        // Advance positions 1..m, keeping position 0 fixed.
        let mut pos = m;
        loop {
            if pos <= 1 {
                return Ok(());
            }
            pos -= 1;
            if idx[pos] < pool.len() - (m - pos) {
                break;
            }
        }
        idx[pos] += 1;
        for i in pos + 1..m {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

fn vector_from(pool: &[DigitString], idx: &[usize], cap: u8) -> TranslationVector {
    let rest = idx.iter().map(|&i| pool[i].clone()).collect();
    TranslationVector::from_nonzero(cap, rest).expect("pool is strictly increasing")
}

/// Every candidate vector, in canonical order. Mostly useful for sweeps.
pub fn enumerate_candidates(m: usize, cap: u8, tau_max: usize, budget: u64) -> Result<Vec<TranslationVector>> {
    check_budget(m, cap, tau_max, budget)?;
    let pool = nonzero_strings(cap, tau_max)?;
    let mut out = Vec::new();
    for first in 0..pool.len() {
        for_each_combination_from(&pool, m, first, &mut |idx| {
            out.push(vector_from(&pool, idx, cap));
            Ok(())
        })?;
    }
    Ok(out)
}

/// All admissible `t ∈ T^{m+1}` with `τ_t ≤ tau_max`, ordered
/// lexicographically by entries. Work is split by the first nonzero entry.
pub fn enumerate_admissible(
    m: usize,
    cap: u8,
    tau_max: usize,
    budget: u64,
    exec: Execution,
) -> Result<Vec<TranslationVector>> {
    check_budget(m, cap, tau_max, budget)?;
    let pool = nonzero_strings(cap, tau_max)?;
    let chunks = exec.map_range(pool.len(), |first| -> Result<Vec<TranslationVector>> {
        let mut found = Vec::new();
        for_each_combination_from(&pool, m, first, &mut |idx| {
            let t = vector_from(&pool, idx, cap);
            if is_admissible(&t, CheckMode::Fast)?.admissible {
                found.push(t);
            }
            Ok(())
        })?;
        Ok(found)
    });
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

fn tuple_order(a: &TranslationVector, b: &TranslationVector) -> Ordering {
    for (x, y) in a.entries().iter().zip(b.entries()) {
        match digit_compare(x, y).expect("same alphabet") {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.m().cmp(&b.m())
}

/// Counts vectors whose union is self-similar (for `β < 1/(2N+1)`).
///
/// Verdicts agree on `t` and `t̂`, so each conjugate pair inside the search
/// space is decided once and counted twice.
pub fn count_self_similar(m: usize, cap: u8, tau_max: usize, budget: u64, exec: Execution) -> Result<u64> {
    check_budget(m, cap, tau_max, budget)?;
    let pool = nonzero_strings(cap, tau_max)?;
    let partial = exec.map_range(pool.len(), |first| -> Result<u64> {
        let mut count = 0u64;
        for_each_combination_from(&pool, m, first, &mut |idx| {
            let t = vector_from(&pool, idx, cap);
            let weight = match t.conjugate() {
                Conjugate::InT(hat) if hat != t => {
                    if tuple_order(&hat, &t) == Ordering::Less {
                        return Ok(());
                    }
                    2
                }
                _ => 1,
            };
            if decide_self_similar(&t, Regime::Below, CheckMode::Fast)?.decision == Decision::SelfSimilar {
                count += weight;
            }
            Ok(())
        })?;
        Ok(count)
    });
    partial.into_iter().sum()
}
