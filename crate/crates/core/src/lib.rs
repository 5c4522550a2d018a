//! Factual rewards and evaluation metrics for radiology report generation.
//!
//! * [`annotation`]: entity-relation annotations of a report as a directed
//!   labeled graph, with JSON parsing, DOT export and label statistics.
//! * [`rewards`]: the `E`, `ER` and `ER_BAR` graph rewards, F-scores between
//!   tuple sets built from hypothesis and reference graphs.
//! * [`nlg`]: corpus BLEU-4, ROUGE-L and CIDEr-D.
//! * [`factual`]: entity-set F1 and clinical-label F1 over precomputed
//!   observation labels.
//! * [`scst`]: a small self-critical sequence training loop that optimizes
//!   the graph rewards for a tabular bigram policy.
//!
//! The guide under `book/` walks through each of these; its code listings
//! are compiled and run as doctests of this crate.

pub mod annotation;
pub mod factual;
pub mod nlg;
pub mod prf;
pub mod rewards;
pub mod scst;

pub use annotation::{AnnotationGraph, Entity, EntityLabel, Relation, RelationLabel};
pub use prf::{MacroPrf, Prf};
pub use rewards::{build_set, f_score, rg_reward, ScoreSet, Variant};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/annotations.md")]
    mod annotations {}
    #[doc = include_str!("../../../book/src/rewards.md")]
    mod rewards {}
    #[doc = include_str!("../../../book/src/nlg.md")]
    mod nlg {}
    #[doc = include_str!("../../../book/src/factual.md")]
    mod factual {}
    #[doc = include_str!("../../../book/src/scst.md")]
    mod scst {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
