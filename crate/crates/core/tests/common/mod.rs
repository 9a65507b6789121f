//! Reference implementations used as oracles by the integration tests.
//! Written directly from the definitions on plain letter vectors, sharing no
//! code with the library beyond input types.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// All words over `{0..=cap}` of length `len`, most significant letter first.
pub fn all_words(cap: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for w in &out {
            for a in 0..=cap {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `W^n` from the definition: `i + t_j` for `i ∈ Ω^n`, `i - t_j` for `i ∈ Ω̂^n`,
/// where digit `k` of `t_j` acts on letter `i_{n+1-k}`.
pub fn stamps(cap: u8, t: &[Vec<u8>], n: usize) -> BTreeSet<Vec<u8>> {
    let tau = t.iter().map(|d| d.len()).max().unwrap_or(0);
    assert!(n >= tau);
    let mut out = BTreeSet::new();
    for word in all_words(cap, n) {
        for sign in [1i32, -1] {
            let all_fit = t.iter().all(|d| {
                d.iter().enumerate().all(|(k, &dk)| {
                    let v = word[n - 1 - k] as i32 + sign * dk as i32;
                    (0..=cap as i32).contains(&v)
                })
            });
            if !all_fit {
                continue;
            }
            for d in t {
                let mut w = word.clone();
                for (k, &dk) in d.iter().enumerate() {
                    w[n - 1 - k] = (w[n - 1 - k] as i32 + sign * dk as i32) as u8;
                }
                out.insert(w);
            }
        }
    }
    out
}

/// Vertices of `G_t` (words of length τ outside `W^τ`) and whether the graph
/// is acyclic, by Kahn's algorithm.
pub fn graph_acyclic(cap: u8, t: &[Vec<u8>]) -> (usize, bool) {
    let tau = t.iter().map(|d| d.len()).max().unwrap_or(0);
    let w = stamps(cap, t, tau);
    let vertices: Vec<Vec<u8>> = all_words(cap, tau).into_iter().filter(|v| !w.contains(v)).collect();
    let index: HashMap<&Vec<u8>, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut indeg = vec![0usize; vertices.len()];
    let mut succ = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for a in 0..=cap {
            let mut u = v[1..].to_vec();
            u.push(a);
            if let Some(&j) = index.get(&u) {
                succ[i].push(j);
                indeg[j] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..vertices.len()).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    (vertices.len(), seen == vertices.len())
}

/// Covering at length `len` by brute force over every word.
pub fn covering_brute(cap: u8, t: &[Vec<u8>], len: usize) -> bool {
    let tau = t.iter().map(|d| d.len()).max().unwrap_or(0);
    let w = stamps(cap, t, tau);
    all_words(cap, len)
        .iter()
        .all(|u| (0..=len - tau).any(|s| w.contains(&u[s..s + tau])))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `((1-β)/N) Σ d_k β^{-k}` with digits lowest index first.
pub fn t_value(cap: u8, digits: &[u8], beta: &BigRational) -> BigRational {
    let c = (BigRational::one() - beta) / BigRational::from_integer(BigInt::from(cap));
    let inv = BigRational::one() / beta;
    let mut acc = BigRational::zero();
    let mut p = inv.clone();
    for &d in digits {
        acc += &p * BigRational::from_integer(BigInt::from(d));
        p *= &inv;
    }
    acc * c
}

/// Nonzero digit strings with top index at most `tau_max`, trailing zeros stripped.
pub fn nonzero_strings(cap: u8, tau_max: usize) -> Vec<Vec<u8>> {
    all_words(cap, tau_max)
        .into_iter()
        .filter_map(|mut w| {
            while w.last() == Some(&0) {
                w.pop();
            }
            (!w.is_empty()).then_some(w)
        })
        .collect()
}

/// Whether `Γ ∪ (Γ + t_1)` is self-similar by the closed form: a single
/// nonzero digit `j ≤ ⌊(N+1)/2⌋`.
pub fn single_digit_rule(cap: u8, digits: &[u8]) -> bool {
    let nonzero: Vec<u8> = digits.iter().copied().filter(|&d| d != 0).collect();
    nonzero.len() == 1 && nonzero[0] as u32 * 2 <= cap as u32 + 1
}
