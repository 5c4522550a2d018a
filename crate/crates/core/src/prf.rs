//! Precision / recall / F1 triples and their macro average.

use serde::{Deserialize, Serialize};

/// Precision, recall and F1 of one comparison, with the counts behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub match_count: usize,
    pub hyp_count: usize,
    pub ref_count: usize,
}

impl Prf {
    /// Set-overlap scores from the intersection size and the two set sizes.
    ///
    /// Two empty sets agree perfectly (1, 1, 1); exactly one empty set
    /// scores (0, 0, 0). F1 is computed as `2m / (h + r)`, which equals the
    /// harmonic mean of precision and recall whenever both are positive.
    pub fn from_counts(match_count: usize, hyp_count: usize, ref_count: usize) -> Self {
        debug_assert!(match_count <= hyp_count.min(ref_count));
        let (precision, recall, f1) = match (hyp_count, ref_count) {
            (0, 0) => (1.0, 1.0, 1.0),
            (0, _) | (_, 0) => (0.0, 0.0, 0.0),
            (h, r) => {
                let m = match_count as f64;
                (m / h as f64, m / r as f64, 2.0 * m / (h + r) as f64)
            }
        };
        Prf { precision, recall, f1, match_count, hyp_count, ref_count }
    }

    /// Same comparison seen from the other side.
    pub fn swapped(&self) -> Self {
        Prf {
            precision: self.recall,
            recall: self.precision,
            f1: self.f1,
            match_count: self.match_count,
            hyp_count: self.ref_count,
            ref_count: self.hyp_count,
        }
    }
}

/// Arithmetic mean of per-example precision, recall and F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub examples: usize,
}

impl MacroPrf {
    /// Averages in iteration order. Returns `None` for an empty input.
    pub fn from_examples<'a, I>(scores: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a Prf>,
    {
        let mut n = 0usize;
        let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
        for s in scores {
            p += s.precision;
            r += s.recall;
            f += s.f1;
            n += 1;
        }
        (n > 0).then(|| {
            let n_f = n as f64;
            MacroPrf { precision: p / n_f, recall: r / n_f, f1: f / n_f, examples: n }
        })
    }
}
