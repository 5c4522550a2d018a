use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::{greedy_sequence, sample_with_rng, surrogate_gradient, GradientTable, ToyPolicy};
use super::reward::{CompositeReward, RewardFn};
use super::task::ToyTask;
use super::ScstError;
use crate::rewards::{RelationScope, Variant};

/// Training configuration, read from TOML.
///
/// ```toml
/// seed = 1
/// iterations = 500
/// learning_rate = 2.0
/// samples_per_iteration = 16
/// temperature = 1.0
/// max_len = 12
/// warm_start = "corpus"          # corpus | uniform
/// smoothing = 0.1                # additive smoothing of the corpus estimate
/// variant = "er"                 # e | er | er_bar
/// relation_scope = "outgoing"    # outgoing | incident
/// reference = "increased opacity in right lower lobe suggesting infection no pneumothorax"
///
/// [weights]
/// rg = 0.495
/// rouge = 0.495
/// nll = 0.01
/// ```
///
/// Every key is optional; missing keys take the values shown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScstConfig {
    pub seed: u64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub samples_per_iteration: usize,
    pub temperature: f64,
    pub max_len: usize,
    pub warm_start: WarmStart,
    pub smoothing: f64,
    pub variant: Variant,
    pub relation_scope: RelationScope,
    /// Reference report; the bundled one when absent.
    pub reference: Option<String>,
    pub weights: CompositeReward,
}

impl Default for ScstConfig {
    fn default() -> Self {
        ScstConfig {
            seed: 1,
            iterations: 500,
            learning_rate: 2.0,
            samples_per_iteration: 16,
            temperature: 1.0,
            max_len: 12,
            warm_start: WarmStart::Corpus,
            smoothing: 0.1,
            variant: Variant::Er,
            relation_scope: RelationScope::Outgoing,
            reference: None,
            weights: CompositeReward::default(),
        }
    }
}

impl ScstConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ScstError> {
        let cfg: ScstConfig = toml::from_str(text).map_err(|e| ScstError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ScstError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScstError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ScstError> {
        let bad = |m: String| Err(ScstError::InvalidConfig(m));
        if !self.weights.is_valid() {
            return bad(format!("weights must be finite and non-negative: {:?}", self.weights));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return bad(format!("learning_rate must be >= 0, got {}", self.learning_rate));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return bad(format!("temperature must be > 0, got {}", self.temperature));
        }
        if !(self.smoothing.is_finite() && self.smoothing > 0.0) {
            return bad(format!("smoothing must be > 0, got {}", self.smoothing));
        }
        if self.max_len == 0 {
            return bad("max_len must be at least 1".into());
        }
        if self.samples_per_iteration == 0 {
            return bad("samples_per_iteration must be at least 1".into());
        }
        Ok(())
    }
}

/// Initial policy of a training run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarmStart {
    /// Smoothed maximum-likelihood bigram estimate of the task corpus.
    #[default]
    Corpus,
    /// All-zero logits.
    Uniform,
}

/// One row of the learning curve, evaluated before that iteration's update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub iteration: usize,
    /// Mean composite reward of the sampled sequences.
    pub sample_reward: f64,
    /// Composite reward of the greedy sequence.
    pub greedy_reward: f64,
    /// Unweighted terms of the greedy reward.
    pub rg_term: f64,
    pub rouge_term: f64,
    pub nll_term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingOutcome {
    /// `iterations + 1` rows: one per update plus the final policy.
    pub curve: Vec<CurvePoint>,
    pub policy: ToyPolicy,
    pub final_greedy: Vec<usize>,
    pub warnings: Vec<String>,
}

impl TrainingOutcome {
    pub fn final_point(&self) -> &CurvePoint {
        self.curve.last().expect("curve has at least one row")
    }
}

pub const CURVE_HEADER: &str = "iteration,sample_reward,greedy_reward,rg_term,rouge_term,nll_term";

/// Learning curve as CSV with fixed 9-digit decimals.
pub fn curve_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for p in curve {
        let _ = writeln!(
            out,
            "{},{:.9},{:.9},{:.9},{:.9},{:.9}",
            p.iteration, p.sample_reward, p.greedy_reward, p.rg_term, p.rouge_term, p.nll_term
        );
    }
    out
}

/// Initial policy selected by `config.warm_start`.
pub fn initial_policy(config: &ScstConfig, task: &ToyTask) -> Result<ToyPolicy, ScstError> {
    match config.warm_start {
        WarmStart::Uniform => ToyPolicy::uniform(task.vocab.len(), config.temperature, config.max_len),
        WarmStart::Corpus => {
            ToyPolicy::from_corpus(task.vocab.len(), &task.corpus, config.smoothing, config.temperature, config.max_len)
        }
    }
}

/// Runs self-critical training from the configured initial policy.
pub fn train_scst(config: &ScstConfig, task: &ToyTask) -> Result<TrainingOutcome, ScstError> {
    config.validate()?;
    train_scst_from(config, task, initial_policy(config, task)?)
}

/// Runs self-critical training from a given initial policy.
///
/// Each iteration decodes the greedy sequence as the baseline, draws
/// `samples_per_iteration` sequences, and descends the mean surrogate
/// gradient `-(r(Y) - r(Ȳ)) ∇ log p(Y)`.
pub fn train_scst_from(
    config: &ScstConfig,
    task: &ToyTask,
    mut policy: ToyPolicy,
) -> Result<TrainingOutcome, ScstError> {
    config.validate()?;
    if policy.vocab_size() != task.vocab.len() {
        return Err(ScstError::InvalidConfig(format!(
            "policy covers {} tokens, vocabulary has {}",
            policy.vocab_size(),
            task.vocab.len()
        )));
    }
    let mut warnings = Vec::new();
    if task.reference_graph.is_empty() {
        warnings.push("reference annotation has no entities; graph reward is 1 only for empty outputs".into());
    }
    let reward = RewardFn { task, weights: config.weights, variant: config.variant, scope: config.relation_scope };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let batch = config.samples_per_iteration;
    let mut curve = Vec::with_capacity(config.iterations + 1);

    for iteration in 0..=config.iterations {
        let greedy = greedy_sequence(&policy);
        let baseline = reward.evaluate(&policy, &greedy);
        let mut grad = GradientTable::zeros(&policy);
        let mut sample_total = 0.0;
        for _ in 0..batch {
            let y = sample_with_rng(&policy, &mut rng);
            let r = reward.evaluate(&policy, &y).total;
            sample_total += r;
            grad.add_scaled(&surrogate_gradient(&policy, &y.steps, r - baseline.total), 1.0 / batch as f64);
        }
        curve.push(CurvePoint {
            iteration,
            sample_reward: sample_total / batch as f64,
            greedy_reward: baseline.total,
            rg_term: baseline.rg,
            rouge_term: baseline.rouge,
            nll_term: baseline.log_likelihood,
        });
        if iteration == config.iterations {
            break;
        }
        if !grad.is_finite() {
            return Err(ScstError::NonFiniteGradient { iteration });
        }
        policy.descend(&grad, config.learning_rate);
    }

    let final_greedy = greedy_sequence(&policy).tokens;
    Ok(TrainingOutcome { curve, policy, final_greedy, warnings })
}
