use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ScstError;

/// Index of the end marker in every toy vocabulary.
const EOS: usize = 0;

/// Tabular bigram policy: a row of logits per context, where the context
/// is the start of the sequence (row 0) or the previously emitted token
/// (row `token + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ToyPolicy {
    logits: Vec<f64>,
    vocab_size: usize,
    temperature: f64,
    max_len: usize,
}

/// One decoding decision: the context row and the token chosen in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub row: usize,
    pub token: usize,
}

/// A decoded sequence with the decisions that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Emitted tokens, without the end marker.
    pub tokens: Vec<usize>,
    /// Every decision taken, including a final end marker if one was drawn.
    pub steps: Vec<Step>,
    /// `log p(Y)` under the policy that produced it.
    pub log_prob: f64,
}

impl Trajectory {
    /// Mean log-probability per decision.
    pub fn mean_log_prob(&self) -> f64 {
        if self.steps.is_empty() {
            0.0
        } else {
            self.log_prob / self.steps.len() as f64
        }
    }
}

impl ToyPolicy {
    /// All-zero logits (uniform next-token distribution everywhere).
    pub fn uniform(vocab_size: usize, temperature: f64, max_len: usize) -> Result<Self, ScstError> {
        if vocab_size < 2 {
            return Err(ScstError::InvalidConfig("vocabulary needs at least two tokens".into()));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(ScstError::InvalidConfig(format!("temperature must be positive, got {temperature}")));
        }
        if max_len == 0 {
            return Err(ScstError::InvalidConfig("max_len must be at least 1".into()));
        }
        Ok(ToyPolicy { logits: vec![0.0; (vocab_size + 1) * vocab_size], vocab_size, temperature, max_len })
    }

    /// Maximum-likelihood bigram policy of a corpus with additive smoothing:
    /// `logit[c][t] = ln(count(c → t) + smoothing)`, where every sequence is
    /// closed by the end marker.
    pub fn from_corpus(
        vocab_size: usize,
        corpus: &[Vec<usize>],
        smoothing: f64,
        temperature: f64,
        max_len: usize,
    ) -> Result<Self, ScstError> {
        if !(smoothing.is_finite() && smoothing > 0.0) {
            return Err(ScstError::InvalidConfig(format!("smoothing must be positive, got {smoothing}")));
        }
        let mut p = ToyPolicy::uniform(vocab_size, temperature, max_len)?;
        let mut counts = vec![0.0; p.logits.len()];
        for seq in corpus {
            let mut row = 0;
            for &t in seq.iter().chain(std::iter::once(&EOS)) {
                if t >= vocab_size {
                    return Err(ScstError::InvalidConfig(format!("token {t} outside vocabulary")));
                }
                counts[p.index(row, t)] += 1.0;
                row = t + 1;
            }
        }
        for (l, c) in p.logits.iter_mut().zip(counts) {
            *l = (c + smoothing).ln();
        }
        Ok(p)
    }

    /// Policy that puts `strength` extra logit on each transition of
    /// `sequence` followed by the end marker.
    pub fn delta(vocab_size: usize, sequence: &[usize], max_len: usize, strength: f64) -> Result<Self, ScstError> {
        let mut p = ToyPolicy::uniform(vocab_size, 1.0, max_len)?;
        p.bias_towards(sequence, strength);
        Ok(p)
    }

    /// Adds `strength` to the logit of every transition of `sequence`,
    /// including start → first token and last token → end marker.
    pub fn bias_towards(&mut self, sequence: &[usize], strength: f64) {
        let mut row = 0;
        for &t in sequence.iter().chain(std::iter::once(&EOS)) {
            let i = self.index(row, t);
            self.logits[i] += strength;
            row = t + 1;
        }
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn rows(&self) -> usize {
        self.vocab_size + 1
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn logits_mut(&mut self) -> &mut [f64] {
        &mut self.logits
    }

    pub fn index(&self, row: usize, token: usize) -> usize {
        row * self.vocab_size + token
    }

    pub fn row_logits(&self, row: usize) -> &[f64] {
        &self.logits[row * self.vocab_size..(row + 1) * self.vocab_size]
    }

    /// Log-softmax of a row at the policy temperature.
    pub fn log_probabilities(&self, row: usize) -> Vec<f64> {
        let scaled: Vec<f64> = self.row_logits(row).iter().map(|l| l / self.temperature).collect();
        let max = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + scaled.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
        scaled.into_iter().map(|s| s - lse).collect()
    }

    pub fn probabilities(&self, row: usize) -> Vec<f64> {
        self.log_probabilities(row).into_iter().map(f64::exp).collect()
    }

    /// `log p(Y)` of a recorded sequence of decisions.
    pub fn log_prob(&self, steps: &[Step]) -> f64 {
        steps.iter().map(|s| self.log_probabilities(s.row)[s.token]).sum()
    }

    /// Applies `logits -= rate * gradient`.
    pub fn descend(&mut self, gradient: &GradientTable, rate: f64) {
        for (l, g) in self.logits.iter_mut().zip(&gradient.values) {
            *l -= rate * g;
        }
    }

    fn decode(&self, mut choose: impl FnMut(usize) -> usize) -> Trajectory {
        let mut tokens = Vec::new();
        let mut steps = Vec::new();
        let mut log_prob = 0.0;
        let mut row = 0;
        while tokens.len() < self.max_len {
            let token = choose(row);
            log_prob += self.log_probabilities(row)[token];
            steps.push(Step { row, token });
            if token == EOS {
                break;
            }
            tokens.push(token);
            row = token + 1;
        }
        Trajectory { tokens, steps, log_prob }
    }
}

/// Draws one sequence with the given random source: categorical sampling
/// until the end marker or `max_len` tokens.
pub fn sample_with_rng<R: Rng + ?Sized>(policy: &ToyPolicy, rng: &mut R) -> Trajectory {
    policy.decode(|row| {
        let probs = policy.probabilities(row);
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // rounding left u above the last partial sum
        probs.iter().rposition(|&p| p > 0.0).unwrap_or(EOS)
    })
}

/// Draws one sequence from a fresh generator seeded with `seed`.
pub fn sample_sequence(policy: &ToyPolicy, seed: u64) -> Trajectory {
    sample_with_rng(policy, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Argmax decoding; ties go to the lowest token index.
pub fn greedy_sequence(policy: &ToyPolicy) -> Trajectory {
    policy.decode(|row| {
        let mut best = 0;
        for (i, &l) in policy.row_logits(row).iter().enumerate() {
            if l > policy.row_logits(row)[best] {
                best = i;
            }
        }
        best
    })
}

/// Gradient with the same layout as the policy logits.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientTable {
    pub values: Vec<f64>,
}

impl GradientTable {
    pub fn zeros(policy: &ToyPolicy) -> Self {
        GradientTable { values: vec![0.0; policy.logits.len()] }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn add_scaled(&mut self, other: &GradientTable, scale: f64) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += scale * b;
        }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Surrogate loss `-advantage · log p(Y)` with the advantage held fixed.
pub fn surrogate_loss(policy: &ToyPolicy, steps: &[Step], advantage: f64) -> f64 {
    -advantage * policy.log_prob(steps)
}

/// Analytic gradient of [`surrogate_loss`] with respect to the logits.
///
/// For a decision `a` in row `c`, `∂ log p(a|c) / ∂ logit[c][b]` is
/// `(1[a = b] - p(b|c)) / temperature`.
pub fn surrogate_gradient(policy: &ToyPolicy, steps: &[Step], advantage: f64) -> GradientTable {
    let mut grad = GradientTable::zeros(policy);
    if advantage == 0.0 {
        return grad;
    }
    let scale = -advantage / policy.temperature;
    for s in steps {
        let probs = policy.probabilities(s.row);
        let base = s.row * policy.vocab_size;
        for (b, p) in probs.iter().enumerate() {
            let indicator = if b == s.token { 1.0 } else { 0.0 };
            grad.values[base + b] += scale * (indicator - p);
        }
    }
    grad
}

/// SCST gradient estimate for one sample: the surrogate gradient with
/// advantage `r(Y) - r(Ȳ)`.
pub fn scst_gradient<F>(policy: &ToyPolicy, sample: &Trajectory, greedy: &Trajectory, mut reward: F) -> GradientTable
where
    F: FnMut(&Trajectory) -> f64,
{
    let advantage = reward(sample) - reward(greedy);
    surrogate_gradient(policy, &sample.steps, advantage)
}
