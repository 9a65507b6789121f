//! Decides when a union of a homogeneous symmetric Cantor set with its
//! translates is itself self-similar, and extracts the generating IFS.
//!
//! Digit strings store `d_1, d_2, …` lowest index first: the string
//! `[d_1, …, d_L]` stands for `c · Σ d_k β^{-k}` with `c = (1-β)/N`.

pub mod admissibility;
pub mod blocks;
pub mod construct;
pub mod covering;
pub mod digits;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod graph;
pub mod ifs;
pub mod laurent;
pub mod numeric;
pub mod words;

pub use admissibility::{decide_self_similar, is_admissible, Admissibility, CheckMode, Decision, Regime, Side, Verdict};
pub use blocks::{block_sets, omega, omega_hat, BlockSets};
pub use construct::{construct_admissible, corollary_m1};
pub use covering::{covering_holds, minimal_covering_length, Covering};
pub use digits::{digit_compare, Conjugate, DigitString, TranslationVector};
pub use enumerate::{count_self_similar, enumerate_admissible};
pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{build_graph, is_nilpotent, BoolMatrix, WordGraph};
pub use laurent::{Beta, BetaLaurent};
pub use words::{Word, WordSet};
pub use ifs::{check_symbolic, extract_ifs, prune, verify_symbolic, AffineMap, Ifs, Orientation};
pub use numeric::{greedy_coding, verify_numeric, verify_vector, NumericOptions, NumericReport};
