use super::{check_aligned, NlgError, TokenizedText};

/// Default recall weight of the ROUGE-L F-measure.
pub const ROUGE_BETA: f64 = 1.2;

/// Length of the longest common subsequence.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// LCS F-measure of one pair: `(1 + β²)·P·R / (R + β²·P)` with
/// `P = lcs/|hyp|` and `R = lcs/|ref|`. Two empty sequences score 1.
pub fn rouge_l_pair<T: PartialEq>(hyp: &[T], reference: &[T], beta: f64) -> f64 {
    if hyp.is_empty() && reference.is_empty() {
        return 1.0;
    }
    let lcs = lcs_len(hyp, reference);
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / hyp.len() as f64;
    let r = lcs as f64 / reference.len() as f64;
    let b2 = beta * beta;
    (1.0 + b2) * p * r / (r + b2 * p)
}

pub fn rouge_l_per_example(hyps: &[TokenizedText], refs: &[TokenizedText], beta: f64) -> Result<Vec<f64>, NlgError> {
    check_aligned(hyps, refs)?;
    Ok(hyps.iter().zip(refs).map(|(h, r)| rouge_l_pair(h.tokens(), r.tokens(), beta)).collect())
}

/// Macro-averaged ROUGE-L with β = 1.2.
pub fn rouge_l(hyps: &[TokenizedText], refs: &[TokenizedText]) -> Result<f64, NlgError> {
    rouge_l_with_beta(hyps, refs, ROUGE_BETA)
}

pub fn rouge_l_with_beta(hyps: &[TokenizedText], refs: &[TokenizedText], beta: f64) -> Result<f64, NlgError> {
    let scores = rouge_l_per_example(hyps, refs, beta)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}
