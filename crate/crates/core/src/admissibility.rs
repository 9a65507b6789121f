//! Admissibility of translation vectors and the self-similarity verdict.
//!
//! The default engine is cycle detection on `G_t`. In cross-check mode the
//! boolean nilpotency of the adjacency matrix and the direct covering check
//! at `ℓ = τ_t + #V_t` are computed as well, and any disagreement is reported
//! as [`Error::OracleDisagreement`].

use serde::{Deserialize, Serialize};

use crate::covering::{covering_with_stamps, DEFAULT_SEARCH_BUDGET};
use crate::digits::{Conjugate, TranslationVector};
use crate::error::{Error, Result};
use crate::graph::{build_graph, is_nilpotent, WordGraph};
use crate::blocks::stamp_set;
use crate::words::Word;

/// Which oracles [`is_admissible`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    #[default]
    Fast,
    CrossCheck,
}

/// Outcome of the admissibility test for one vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Vertices of a cycle in `G_t`, present iff not admissible.
    pub cycle: Option<Vec<Word>>,
    /// Least covering length, present iff admissible.
    pub covering_length: Option<usize>,
    pub vertex_count: usize,
}

/// Decides whether `t` is an admissible translation vector.
pub fn is_admissible(t: &TranslationVector, mode: CheckMode) -> Result<Admissibility> {
    if t.m() == 0 {
        return Ok(Admissibility {
            admissible: true,
            cycle: None,
            covering_length: Some(0),
            vertex_count: 0,
        });
    }
    let graph = build_graph(t)?;
    let result = admissibility_of_graph(&graph);
    if mode == CheckMode::CrossCheck {
        cross_check(t, &graph, result.admissible)?;
    }
    Ok(result)
}

fn admissibility_of_graph(graph: &WordGraph) -> Admissibility {
    let vertex_count = graph.vertex_count();
    match graph.find_cycle() {
        Some(cycle) => Admissibility {
            admissible: false,
            cycle: Some(cycle.into_iter().map(|c| graph.word(c)).collect()),
            covering_length: None,
            vertex_count,
        },
        None => {
            let longest = graph.longest_path_vertices().expect("acyclic");
            Admissibility {
                admissible: true,
                cycle: None,
                covering_length: Some(graph.tau() + longest),
                vertex_count,
            }
        }
    }
}

fn cross_check(t: &TranslationVector, graph: &WordGraph, acyclic: bool) -> Result<()> {
    let nilpotent = is_nilpotent(&graph.adjacency());
    let stamps = stamp_set(t)?;
    let bound = t.tau() + graph.vertex_count();
    let covering = covering_with_stamps(&stamps, bound, DEFAULT_SEARCH_BUDGET)?.holds;
    if acyclic != nilpotent || acyclic != covering {
        return Err(Error::OracleDisagreement {
            vector: t.describe(),
            acyclic,
            nilpotent,
            covering,
        });
    }
    Ok(())
}

/// Range of β the caller is working in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `0 < β < 1/(2N+1)`: admissibility of `t` or `t̂` is necessary and sufficient.
    #[default]
    Below,
    /// `1/(2N+1) ≤ β < 1/(N+1)`: admissibility is only known to be sufficient.
    Between,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    SelfSimilar,
    NotSelfSimilar,
    SufficientOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[serde(rename = "t")]
    Vector,
    Conjugate,
}

/// Why the conjugate side did or did not contribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugateStatus {
    /// `t̂ ∉ T`: digit `k` of `t̂_j` would be negative.
    NotInT { j: usize, k: usize },
    /// `t̂ ∈ T`; its admissibility result.
    InT(TranslationVector, Admissibility),
    /// Not examined because `t` itself was admissible.
    Skipped,
}

/// Self-similarity verdict with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub admissible_side: Option<Side>,
    pub vector: Admissibility,
    pub conjugate: ConjugateStatus,
}

impl Verdict {
    /// Covering length of the admissible side, if any.
    pub fn covering_length(&self) -> Option<usize> {
        match self.admissible_side? {
            Side::Vector => self.vector.covering_length,
            Side::Conjugate => match &self.conjugate {
                ConjugateStatus::InT(_, a) => a.covering_length,
                _ => None,
            },
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        let words = |c: &Option<Vec<Word>>| c.as_ref().map(|c| c.iter().map(|w| w.to_string()).collect());
        let (conjugate_in_t, conjugate_cycle, conjugate_not_in_t) = match &self.conjugate {
            ConjugateStatus::NotInT { j, k } => (Some(false), None, Some([*j, *k])),
            ConjugateStatus::InT(_, a) => (Some(true), words(&a.cycle), None),
            ConjugateStatus::Skipped => (None, None, None),
        };
        VerdictJson {
            decision: self.decision,
            admissible_side: self.admissible_side,
            cycle: words(&self.vector.cycle),
            conjugate_in_t,
            conjugate_cycle,
            conjugate_not_in_t,
            covering_length: self.covering_length(),
        }
    }
}

/// Wire form of a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub decision: Decision,
    pub admissible_side: Option<Side>,
    pub cycle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjugate_in_t: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjugate_cycle: Option<Vec<String>>,
    /// `[j, k]` of the first negative digit difference.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjugate_not_in_t: Option<[usize; 2]>,
    pub covering_length: Option<usize>,
}

/// Decides whether `Γ_t = ⋃_j (Γ + t_j)` is self-similar.
pub fn decide_self_similar(t: &TranslationVector, regime: Regime, mode: CheckMode) -> Result<Verdict> {
    let vector = is_admissible(t, mode)?;
    if vector.admissible {
        return Ok(Verdict {
            decision: Decision::SelfSimilar,
            admissible_side: Some(Side::Vector),
            vector,
            conjugate: ConjugateStatus::Skipped,
        });
    }
    let conjugate = match t.conjugate() {
        Conjugate::NotInT { j, k } => ConjugateStatus::NotInT { j, k },
        Conjugate::InT(hat) => {
            let a = is_admissible(&hat, mode)?;
            ConjugateStatus::InT(hat, a)
        }
    };
    let conjugate_ok = matches!(&conjugate, ConjugateStatus::InT(_, a) if a.admissible);
    let decision = if conjugate_ok {
        Decision::SelfSimilar
    } else {
        match regime {
            Regime::Below => Decision::NotSelfSimilar,
            Regime::Between => Decision::SufficientOnly,
        }
    };
    Ok(Verdict {
        decision,
        admissible_side: conjugate_ok.then_some(Side::Conjugate),
        vector,
        conjugate,
    })
}
