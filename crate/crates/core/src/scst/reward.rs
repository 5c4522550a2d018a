use serde::{Deserialize, Serialize};

use super::policy::{ToyPolicy, Trajectory};
use super::task::ToyTask;
use crate::nlg::{rouge_l_pair, ROUGE_BETA};
use crate::rewards::{rg_reward_with, RelationScope, Variant};

/// Weights of the composite reward terms.
///
/// The sequence-similarity term is ROUGE-L between the generated and the
/// reference token sequences. The likelihood term is the mean per-decision
/// log-probability of the sequence under the current policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeReward {
    pub rg: f64,
    pub rouge: f64,
    pub nll: f64,
}

impl Default for CompositeReward {
    fn default() -> Self {
        CompositeReward { rg: 0.495, rouge: 0.495, nll: 0.01 }
    }
}

impl CompositeReward {
    pub fn is_valid(&self) -> bool {
        [self.rg, self.rouge, self.nll].iter().all(|w| w.is_finite() && *w >= 0.0)
    }

    /// Largest value the reward can approach: both similarity terms at 1
    /// and the likelihood term at its supremum 0.
    pub fn upper_bound(&self) -> f64 {
        self.rg + self.rouge
    }
}

/// Unweighted terms of one reward evaluation and their weighted sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardBreakdown {
    pub rg: f64,
    pub rouge: f64,
    /// Mean per-decision log-likelihood (the negated NLL), at most 0.
    pub log_likelihood: f64,
    pub total: f64,
}

/// Scores trajectories of a toy task.
#[derive(Debug, Clone, Copy)]
pub struct RewardFn<'a> {
    pub task: &'a ToyTask,
    pub weights: CompositeReward,
    pub variant: Variant,
    pub scope: RelationScope,
}

impl RewardFn<'_> {
    /// Similarity part of the reward, which depends only on the tokens.
    pub fn similarity(&self, tokens: &[usize]) -> (f64, f64) {
        let graph = self.task.annotate(tokens);
        let rg = rg_reward_with(&graph, &self.task.reference_graph, self.variant, self.scope).f1;
        let rouge = rouge_l_pair(tokens, &self.task.reference, ROUGE_BETA);
        (rg, rouge)
    }

    /// Full reward of a trajectory; the likelihood term is evaluated under
    /// `policy`.
    pub fn evaluate(&self, policy: &ToyPolicy, trajectory: &Trajectory) -> RewardBreakdown {
        let (rg, rouge) = self.similarity(&trajectory.tokens);
        let log_likelihood = if trajectory.steps.is_empty() {
            0.0
        } else {
            policy.log_prob(&trajectory.steps) / trajectory.steps.len() as f64
        };
        let w = self.weights;
        RewardBreakdown { rg, rouge, log_likelihood, total: w.rg * rg + w.rouge * rouge + w.nll * log_likelihood }
    }
}
