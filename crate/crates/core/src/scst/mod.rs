//! Self-critical sequence training on a toy report-generation task.
//!
//! A tabular bigram policy emits words from a small radiology vocabulary.
//! A rule-based [`LexiconAnnotator`] turns each output into an
//! [`AnnotationGraph`](crate::annotation::AnnotationGraph), which is scored
//! against the reference annotation with a graph reward. Training starts
//! from a smoothed bigram estimate of a few short reports and uses the
//! self-critical estimator: the reward of the greedy decode is the baseline
//! subtracted from each sampled sequence's reward.
//!
//! Everything is seeded; the same configuration always yields the same
//! learning curve.

mod annotator;
mod policy;
mod reward;
pub mod task;
mod train;
mod vocab;

pub use annotator::{LexiconAnnotator, WordClass};
pub use policy::{
    greedy_sequence, sample_sequence, sample_with_rng, scst_gradient, surrogate_gradient, surrogate_loss,
    GradientTable, Step, ToyPolicy, Trajectory,
};
pub use reward::{CompositeReward, RewardBreakdown, RewardFn};
pub use task::ToyTask;
pub use train::{
    curve_to_csv, initial_policy, train_scst, train_scst_from, CurvePoint, ScstConfig, TrainingOutcome, WarmStart,
    CURVE_HEADER,
};
pub use vocab::{ToyVocabulary, EOS};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScstError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("word {0:?} is not in the vocabulary")]
    UnknownToken(String),
    #[error("non-finite gradient at iteration {iteration}")]
    NonFiniteGradient { iteration: usize },
}
