use super::{check_aligned, NgramProfile, NlgError, TokenizedText};

/// Corpus BLEU with uniform weights over n = 1..=4, one reference per
/// hypothesis and no smoothing.
///
/// Clipped n-gram matches and candidate n-gram totals are pooled over the
/// corpus before taking precisions. If any order has no match (or no
/// candidate n-gram at all), the geometric mean and therefore the score is 0.
pub fn bleu4(hyps: &[TokenizedText], refs: &[TokenizedText]) -> Result<f64, NlgError> {
    bleu(hyps, refs, 4)
}

pub fn bleu(hyps: &[TokenizedText], refs: &[TokenizedText], max_n: usize) -> Result<f64, NlgError> {
    check_aligned(hyps, refs)?;
    let mut matches = vec![0usize; max_n];
    let mut totals = vec![0usize; max_n];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for (h, r) in hyps.iter().zip(refs) {
        hyp_len += h.len();
        ref_len += r.len();
        for n in 1..=max_n {
            let hp = NgramProfile::new(h.tokens(), n);
            let rp = NgramProfile::new(r.tokens(), n);
            totals[n - 1] += hp.total();
            matches[n - 1] +=
                hp.counts.iter().map(|(g, &c)| c.min(rp.counts.get(g).copied().unwrap_or(0))).sum::<usize>();
        }
    }
    if matches.contains(&0) {
        return Ok(0.0);
    }
    let log_mean = matches.iter().zip(&totals).map(|(&m, &t)| (m as f64 / t as f64).ln()).sum::<f64>() / max_n as f64;
    let brevity = if hyp_len > ref_len { 1.0 } else { (1.0 - ref_len as f64 / hyp_len as f64).exp() };
    Ok(brevity * log_mean.exp())
}

/// BLEU-4 of a single pair, i.e. a corpus of one.
pub fn sentence_bleu4(hyp: &TokenizedText, reference: &TokenizedText) -> f64 {
    bleu4(std::slice::from_ref(hyp), std::slice::from_ref(reference)).expect("a single pair is a valid corpus")
}
