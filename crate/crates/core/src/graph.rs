//! The shift-overlap graph `G_t` and its adjacency matrix.
//!
//! Vertices are the words of length `τ_t` outside `W_t^{τ_t}`; there is an
//! edge `i_1⋯i_τ → j_1⋯j_τ` iff `i_2⋯i_τ = j_1⋯j_{τ-1}`. Edges are never
//! stored: the out-neighbours of a vertex are the members of `V_t` among its
//! `N+1` one-letter shift extensions.

use std::fmt::Write as _;

use crate::blocks::stamp_set;
use crate::digits::TranslationVector;
use crate::error::Result;
use crate::words::{Word, WordSet};

/// Directed graph `G_t = (V_t, E_t)` with implicit shift edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGraph {
    tau: usize,
    vertices: WordSet,
}

/// Builds `G_t`: `V_t = {0,…,N}^{τ_t} \ W_t^{τ_t}`.
pub fn build_graph(t: &TranslationVector) -> Result<WordGraph> {
    let stamps = stamp_set(t)?;
    Ok(WordGraph {
        tau: t.tau(),
        vertices: stamps.complement(),
    })
}

impl WordGraph {
    pub fn from_vertices(vertices: WordSet) -> Self {
        Self {
            tau: vertices.word_len(),
            vertices,
        }
    }

    pub fn cap(&self) -> u8 {
        self.vertices.cap()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn vertices(&self) -> &WordSet {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, code: u64) -> bool {
        self.vertices.contains(code)
    }

    pub fn has_edge(&self, from: u64, to: u64) -> bool {
        self.contains(from) && self.contains(to) && self.shift_candidates(from).any(|c| c == to)
    }

    fn shift_candidates(&self, code: u64) -> impl Iterator<Item = u64> {
        let base = self.cap() as u64 + 1;
        let suffix = code % (self.vertices.universe() / base);
        (0..base).map(move |a| suffix * base + a)
    }

    /// Out-neighbours in ascending code order.
    pub fn successors(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        self.shift_candidates(code).filter(|&c| self.contains(c))
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(|v| self.successors(v).count()).sum()
    }

    pub fn word(&self, code: u64) -> Word {
        Word::decode(self.cap(), self.tau, code)
    }

    /// Searches for a directed cycle with a three-colour depth-first search,
    /// started from each vertex in ascending code order. The returned cycle
    /// lists each vertex once (the closing edge back to the first vertex is
    /// implied) and is rotated to begin at its smallest code.
    pub fn find_cycle(&self) -> Option<Vec<u64>> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;

        if self.is_empty() {
            return None;
        }
        let base = self.cap() as u64 + 1;
        let mut color = vec![WHITE; self.vertices.universe() as usize];
        // (vertex, next letter to try)
        let mut stack: Vec<(u64, u64)> = Vec::new();

        for root in self.vertices.iter() {
            if color[root as usize] != WHITE {
                continue;
            }
            color[root as usize] = GRAY;
            stack.push((root, 0));
            while let Some(top) = stack.last_mut() {
                let (v, letter) = *top;
                if letter == base {
                    color[v as usize] = BLACK;
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let next = (v % (self.vertices.universe() / base)) * base + letter;
                if !self.contains(next) {
                    continue;
                }
                match color[next as usize] {
                    WHITE => {
                        color[next as usize] = GRAY;
                        stack.push((next, 0));
                    }
                    GRAY => {
                        let start = stack.iter().position(|&(u, _)| u == next).expect("gray is on stack");
                        let mut cycle: Vec<u64> = stack[start..].iter().map(|&(u, _)| u).collect();
                        let min_at = cycle
                            .iter()
                            .enumerate()
                            .min_by_key(|&(_, c)| *c)
                            .map(|(i, _)| i)
                            .unwrap_or(0);
                        cycle.rotate_left(min_at);
                        return Some(cycle);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    pub fn has_cycle(&self) -> bool {
        self.find_cycle().is_some()
    }

    /// Number of vertices on a longest path, assuming the graph is acyclic.
    /// Returns `None` if a cycle is met.
    pub fn longest_path_vertices(&self) -> Option<usize> {
        if self.find_cycle().is_some() {
            return None;
        }
        let universe = self.vertices.universe() as usize;
        let mut memo: Vec<usize> = vec![0; universe];
        // Post-order over an acyclic graph.
        let mut best = 0;
        let mut done = vec![false; universe];
        for root in self.vertices.iter() {
            if done[root as usize] {
                continue;
            }
            let mut stack = vec![(root, false)];
            while let Some((v, expanded)) = stack.pop() {
                if done[v as usize] {
                    continue;
                }
                if expanded {
                    let tail = self.successors(v).map(|s| memo[s as usize]).max().unwrap_or(0);
                    memo[v as usize] = tail + 1;
                    done[v as usize] = true;
                    continue;
                }
                stack.push((v, true));
                for s in self.successors(v) {
                    if !done[s as usize] {
                        stack.push((s, false));
                    }
                }
            }
            best = best.max(memo[root as usize]);
        }
        Some(best)
    }

    /// Graphviz rendering: one node per vertex, one edge per shift overlap.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G_t {\n");
        for v in self.vertices.iter() {
            let _ = writeln!(out, "  \"{}\";", self.word(v));
        }
        for v in self.vertices.iter() {
            for s in self.successors(v) {
                let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.word(v), self.word(s));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn adjacency(&self) -> BoolMatrix {
        let order: Vec<u64> = self.vertices.iter().collect();
        let index = |code: u64| order.binary_search(&code).ok();
        let mut m = BoolMatrix::zero(order.len());
        for (i, &v) in order.iter().enumerate() {
            for s in self.successors(v) {
                if let Some(j) = index(s) {
                    m.set(i, j);
                }
            }
        }
        m
    }
}

/// Square boolean matrix with bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    size: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(size: usize) -> Self {
        let words_per_row = size.div_ceil(64).max(1);
        Self {
            size,
            words_per_row,
            rows: vec![0; size * words_per_row],
        }
    }

    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let mut m = Self::zero(rows.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), rows.len(), "matrix must be square");
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j);
                }
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Boolean product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            let dst = i * self.words_per_row;
            for k in 0..self.size {
                if self.get(i, k) {
                    for (w, &b) in other.row(k).iter().enumerate() {
                        out.rows[dst + w] |= b;
                    }
                }
            }
        }
        out
    }

    /// `M^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::zero(self.size);
        for i in 0..self.size {
            result.set(i, i);
        }
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }
}

/// True iff `M^n = 0` for `n = size`, checked by squaring until the
/// exponent reaches `size`, with early exit on zero or on a nonzero fixpoint.
pub fn is_nilpotent(m: &BoolMatrix) -> bool {
    let n = m.size() as u64;
    let mut power = m.clone();
    let mut exponent: u64 = 1;
    loop {
        if power.is_zero() {
            return true;
        }
        if exponent >= n {
            return false;
        }
        let next = power.mul(&power);
        if next == power {
            return false;
        }
        power = next;
        exponent *= 2;
    }
}
