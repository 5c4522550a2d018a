//! Central-difference checks for the policy-gradient surrogate.

use radreward::scst::{surrogate_loss, ToyPolicy, Trajectory};

/// Central differences of the surrogate loss in every logit.
pub fn finite_difference(policy: &ToyPolicy, traj: &Trajectory, advantage: f64, h: f64) -> Vec<f64> {
    (0..policy.logits().len())
        .map(|i| {
            let mut plus = policy.clone();
            plus.logits_mut()[i] += h;
            let mut minus = policy.clone();
            minus.logits_mut()[i] -= h;
            (surrogate_loss(&plus, &traj.steps, advantage) - surrogate_loss(&minus, &traj.steps, advantage)) / (2.0 * h)
        })
        .collect()
}

/// `|a - b| / max(|a|, |b|)` in the Euclidean norm; the absolute difference
/// when both vanish.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
