//! Exhaustive search for the best similarity reward on a toy task.
//!
//! The searched quantity is `w_rg · RG + w_rouge · ROUGE-L` over every token
//! sequence of length at most `max_len`. The likelihood term of the
//! composite reward is at most 0 and tends to 0 as the policy concentrates,
//! so this is the supremum of the composite reward.

use radreward::nlg::lcs_len;
use radreward::scst::{CompositeReward, RewardFn};

use crate::oracle::rouge_from_lcs;

pub struct SearchResult {
    pub value: f64,
    pub argmax: Vec<usize>,
    /// Number of complete sequences scored.
    pub evaluated: u64,
}

fn value(reward: &RewardFn<'_>, tokens: &[usize]) -> f64 {
    let (rg, rouge) = reward.similarity(tokens);
    reward.weights.rg * rg + reward.weights.rouge * rouge
}

fn body_tokens(reward: &RewardFn<'_>) -> Vec<usize> {
    let eos = reward.task.vocab.eos();
    (0..reward.task.vocab.len()).filter(|&t| t != eos).collect()
}

/// Scores every sequence of length `0..=max_len`.
pub fn brute_force(reward: &RewardFn<'_>, max_len: usize) -> SearchResult {
    let tokens = body_tokens(reward);
    let mut best = SearchResult { value: f64::NEG_INFINITY, argmax: Vec::new(), evaluated: 0 };
    let mut seq = Vec::new();
    fn rec(reward: &RewardFn<'_>, tokens: &[usize], seq: &mut Vec<usize>, left: usize, best: &mut SearchResult) {
        let v = value(reward, seq);
        best.evaluated += 1;
        if v > best.value {
            best.value = v;
            best.argmax = seq.clone();
        }
        if left == 0 {
            return;
        }
        for &t in tokens {
            seq.push(t);
            rec(reward, tokens, seq, left - 1, best);
            seq.pop();
        }
    }
    rec(reward, &tokens, &mut seq, max_len, &mut best);
    best
}

/// Largest ROUGE-L any completion of `prefix` up to `max_len` tokens can
/// reach. Appending `k` tokens raises the LCS by at most `k`.
fn rouge_upper_bound(prefix: &[usize], reference: &[usize], max_len: usize, beta: f64) -> f64 {
    let base = lcs_len(prefix, reference);
    (prefix.len().max(1)..=max_len)
        .map(|len| {
            let lcs = (base + len - prefix.len()).min(reference.len()).min(len);
            rouge_from_lcs(lcs, len, reference.len(), beta)
        })
        .fold(0.0, f64::max)
}

/// Depth-first branch and bound with the graph term bounded by 1 and the
/// ROUGE-L term by [`rouge_upper_bound`]. Seeded with the reference itself
/// when it fits in `max_len`.
pub fn branch_and_bound(reward: &RewardFn<'_>, max_len: usize) -> SearchResult {
    let tokens = body_tokens(reward);
    let reference = reward.task.reference.clone();
    let mut best = SearchResult { value: value(reward, &[]), argmax: Vec::new(), evaluated: 1 };
    if reference.len() <= max_len {
        let v = value(reward, &reference);
        best.evaluated += 1;
        if v > best.value {
            best.value = v;
            best.argmax = reference.clone();
        }
    }
    let w: CompositeReward = reward.weights;
    let mut stack: Vec<Vec<usize>> = tokens.iter().rev().map(|&t| vec![t]).collect();
    while let Some(seq) = stack.pop() {
        let bound = w.rg + w.rouge * rouge_upper_bound(&seq, &reference, max_len, 1.2);
        if bound <= best.value {
            continue;
        }
        let v = value(reward, &seq);
        best.evaluated += 1;
        if v > best.value {
            best.value = v;
            best.argmax = seq.clone();
        }
        if seq.len() < max_len {
            for &t in tokens.iter().rev() {
                let mut next = seq.clone();
                next.push(t);
                stack.push(next);
            }
        }
    }
    best
}
