//! Corpus-level n-gram metrics: BLEU-4, ROUGE-L and CIDEr-D.
//!
//! All metrics take pre-tokenized text. [`TokenizedText::new`] is the one
//! tokenizer used throughout: lowercase, every character that is neither
//! alphanumeric nor whitespace becomes its own token, then split on
//! whitespace. `"Mild edema, left."` becomes `mild edema , left .`.

mod bleu;
mod cider;
mod rouge;

pub use bleu::{bleu, bleu4, sentence_bleu4};
pub use cider::{cider_d, CiderD, CIDER_SIGMA};
pub use rouge::{lcs_len, rouge_l, rouge_l_pair, rouge_l_per_example, rouge_l_with_beta, ROUGE_BETA};

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NlgError {
    #[error("corpus length mismatch: {hyps} hypotheses, {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("empty corpus")]
    EmptyCorpus,
}

/// A lowercase token sequence produced by the crate tokenizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenizedText(Vec<String>);

impl TokenizedText {
    pub fn new(text: &str) -> Self {
        let mut tokens = Vec::new();
        let mut word = String::new();
        for c in text.chars() {
            if c.is_whitespace() {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
            } else if c.is_alphanumeric() {
                word.extend(c.to_lowercase());
            } else {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
                tokens.push(c.to_string());
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
        TokenizedText(tokens)
    }

    /// Wraps tokens as given, lowercasing them. Tokens containing whitespace
    /// are split.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        TokenizedText(
            tokens
                .into_iter()
                .flat_map(|t| t.as_ref().split_whitespace().map(str::to_lowercase).collect::<Vec<_>>())
                .collect(),
        )
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&str> for TokenizedText {
    fn from(text: &str) -> Self {
        TokenizedText::new(text)
    }
}

/// Counts of every n-gram of one order in a token sequence.
#[derive(Debug, Clone)]
pub struct NgramProfile<'a, T> {
    pub n: usize,
    pub counts: HashMap<&'a [T], usize>,
}

impl<'a, T: Hash + Eq> NgramProfile<'a, T> {
    pub fn new(tokens: &'a [T], n: usize) -> Self {
        assert!(n >= 1, "n-gram order must be positive");
        let mut counts = HashMap::new();
        if tokens.len() >= n {
            for w in tokens.windows(n) {
                *counts.entry(w).or_insert(0) += 1;
            }
        }
        NgramProfile { n, counts }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

pub(crate) fn check_aligned<A, B>(hyps: &[A], refs: &[B]) -> Result<(), NlgError> {
    if hyps.len() != refs.len() {
        return Err(NlgError::LengthMismatch { hyps: hyps.len(), refs: refs.len() });
    }
    if hyps.is_empty() {
        return Err(NlgError::EmptyCorpus);
    }
    Ok(())
}
