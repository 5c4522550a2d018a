use std::collections::{HashMap, HashSet};

use super::{check_aligned, NgramProfile, NlgError, TokenizedText};

/// Standard deviation of the gaussian length-gap penalty.
pub const CIDER_SIGMA: f64 = 6.0;

const MAX_N: usize = 4;

type TfIdf<'a> = HashMap<&'a [String], f64>;

/// CIDEr-D scorer with document frequencies taken from a reference corpus.
///
/// For each order n = 1..=4 the hypothesis and reference are turned into
/// tf-idf vectors with `idf(g) = ln(N) - ln(max(1, df(g)))`, where N is the
/// number of references and `df(g)` the number of references containing `g`.
/// The per-order similarity is `Σ min(h_g, r_g)·r_g / (|h|·|r|)` (0 when
/// either vector is zero), damped by `exp(-(len_h - len_r)² / 2σ²)`. The
/// score averages the four orders and scales by 10, so it lies in [0, 10].
///
/// With a single reference every idf is zero, so meaningful scores need a
/// corpus of at least two distinct references.
#[derive(Debug, Clone)]
pub struct CiderD<'a> {
    doc_freq: HashMap<&'a [String], usize>,
    log_n: f64,
    sigma: f64,
}

impl<'a> CiderD<'a> {
    pub fn new(refs: &'a [TokenizedText]) -> Self {
        let mut doc_freq: HashMap<&'a [String], usize> = HashMap::new();
        for r in refs {
            let mut seen = HashSet::new();
            for n in 1..=MAX_N {
                if r.len() >= n {
                    seen.extend(r.tokens().windows(n));
                }
            }
            for g in seen {
                *doc_freq.entry(g).or_insert(0) += 1;
            }
        }
        CiderD { doc_freq, log_n: (refs.len().max(1) as f64).ln(), sigma: CIDER_SIGMA }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Document frequency of an n-gram in the reference corpus.
    pub fn doc_freq(&self, ngram: &[String]) -> usize {
        self.doc_freq.get(ngram).copied().unwrap_or(0)
    }

    fn vector<'t>(&self, text: &'t TokenizedText, n: usize) -> (TfIdf<'t>, f64) {
        let profile = NgramProfile::new(text.tokens(), n);
        let mut norm = 0.0;
        let vec = profile
            .counts
            .into_iter()
            .map(|(g, tf)| {
                let df = self.doc_freq(g).max(1) as f64;
                let w = tf as f64 * (self.log_n - df.ln());
                norm += w * w;
                (g, w)
            })
            .collect();
        (vec, norm.sqrt())
    }

    /// Score of one hypothesis against its reference.
    pub fn score(&self, hyp: &TokenizedText, reference: &TokenizedText) -> f64 {
        let delta = hyp.len() as f64 - reference.len() as f64;
        let penalty = (-(delta * delta) / (2.0 * self.sigma * self.sigma)).exp();
        let mut total = 0.0;
        for n in 1..=MAX_N {
            let (vh, nh) = self.vector(hyp, n);
            let (vr, nr) = self.vector(reference, n);
            if nh == 0.0 || nr == 0.0 {
                continue;
            }
            let dot: f64 = vh.iter().filter_map(|(g, &h)| vr.get(g).map(|&r| h.min(r) * r)).sum();
            total += dot / (nh * nr) * penalty;
        }
        total / MAX_N as f64 * 10.0
    }

    pub fn per_example(&self, hyps: &[TokenizedText], refs: &[TokenizedText]) -> Vec<f64> {
        hyps.iter().zip(refs).map(|(h, r)| self.score(h, r)).collect()
    }
}

/// Corpus CIDEr-D: idf from `refs`, macro average of per-example scores.
pub fn cider_d(hyps: &[TokenizedText], refs: &[TokenizedText]) -> Result<f64, NlgError> {
    check_aligned(hyps, refs)?;
    let scorer = CiderD::new(refs);
    let scores = scorer.per_example(hyps, refs);
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(lines: &[&str]) -> Vec<TokenizedText> {
        lines.iter().map(|l| TokenizedText::new(l)).collect()
    }

    #[test]
    fn identity_is_ten() {
        let c = corpus(&["heart size is normal", "small left pleural effusion", "no acute cardiopulmonary process"]);
        let s = cider_d(&c, &c).unwrap();
        assert!((s - 10.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn no_shared_ngram_is_zero() {
        let refs = corpus(&["heart size is normal", "small left pleural effusion"]);
        let hyps = corpus(&["lungs are clear", "no pneumothorax"]);
        assert_eq!(cider_d(&hyps, &refs).unwrap(), 0.0);
    }

    #[test]
    fn single_reference_has_no_idf() {
        let c = corpus(&["heart size is normal"]);
        assert_eq!(cider_d(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn length_penalty_lowers_score() {
        let refs = corpus(&["a b c d", "e f g h"]);
        let short = corpus(&["a b c d", "e f g h"]);
        let long = corpus(&["a b c d x x x x x x x x", "e f g h"]);
        let s_short = cider_d(&short, &refs).unwrap();
        let s_long = cider_d(&long, &refs).unwrap();
        assert!(s_long < s_short);
    }
}
