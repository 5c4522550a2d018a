//! Factual metrics over precomputed extractions.
//!
//! [`entity_set_f1`] compares the sets of entity strings extracted from a
//! hypothesis and a reference report. [`chexbert_f1`] compares 14-slot
//! clinical observation labels predicted for hypothesis and reference
//! reports; a slot counts as positive only when its status is
//! [`LabelStatus::Positive`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::normalize_tokens;
use crate::prf::Prf;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactualError {
    #[error("corpus length mismatch: {hyps} hypotheses, {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("unknown observation class {0:?}")]
    UnknownClass(String),
    #[error("unknown label status {0:?} (expected positive, negative, uncertain or unspecified)")]
    UnknownStatus(String),
    #[error("no observation classes selected")]
    NoClasses,
}

/// Set of normalized entity strings extracted from one report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityBag(BTreeSet<String>);

impl EntityBag {
    pub fn new<I, S>(entities: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        EntityBag(entities.into_iter().map(|s| normalize_tokens(s.as_ref())).filter(|s| !s.is_empty()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

/// Set-overlap F-score of two entity bags (both empty scores 1).
///
/// ```
/// use radreward::factual::{entity_set_f1, EntityBag};
///
/// let s = entity_set_f1(&EntityBag::new(["effusion", "opacity"]), &EntityBag::new(["opacity"]));
/// assert_eq!((s.precision, s.recall), (0.5, 1.0));
/// ```
pub fn entity_set_f1(hyp: &EntityBag, reference: &EntityBag) -> Prf {
    let m = hyp.0.intersection(&reference.0).count();
    Prf::from_counts(m, hyp.len(), reference.len())
}

/// The fourteen observation slots, in the labeler's output order.
pub const OBSERVATIONS: [&str; 14] = [
    "Enlarged Cardiomediastinum",
    "Cardiomegaly",
    "Lung Opacity",
    "Lung Lesion",
    "Edema",
    "Consolidation",
    "Pneumonia",
    "Atelectasis",
    "Pneumothorax",
    "Pleural Effusion",
    "Pleural Other",
    "Fracture",
    "Support Devices",
    "No Finding",
];

/// The five observations of the headline score.
pub const HEADLINE_OBSERVATIONS: [&str; 5] =
    ["Atelectasis", "Cardiomegaly", "Consolidation", "Edema", "Pleural Effusion"];

/// Looks up an observation slot by name. Case is ignored and `_` may stand
/// in for a space.
pub fn observation_index(name: &str) -> Result<usize, FactualError> {
    let wanted = name.trim().replace('_', " ").to_lowercase();
    OBSERVATIONS
        .iter()
        .position(|o| o.to_lowercase() == wanted)
        .ok_or_else(|| FactualError::UnknownClass(name.to_string()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelStatus {
    Positive,
    Negative,
    Uncertain,
    #[default]
    Unspecified,
}

impl LabelStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelStatus::Positive => "positive",
            LabelStatus::Negative => "negative",
            LabelStatus::Uncertain => "uncertain",
            LabelStatus::Unspecified => "unspecified",
        }
    }
}

impl fmt::Display for LabelStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelStatus {
    type Err = FactualError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(LabelStatus::Positive),
            "negative" => Ok(LabelStatus::Negative),
            "uncertain" => Ok(LabelStatus::Uncertain),
            "unspecified" => Ok(LabelStatus::Unspecified),
            _ => Err(FactualError::UnknownStatus(s.to_string())),
        }
    }
}

/// Observation statuses of one report, one per slot of [`OBSERVATIONS`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LabelVector(pub [LabelStatus; 14]);

impl LabelVector {
    /// All slots unspecified except the named positives.
    pub fn with_positives(names: &[&str]) -> Result<Self, FactualError> {
        let mut v = LabelVector::default();
        for n in names {
            v.0[observation_index(n)?] = LabelStatus::Positive;
        }
        Ok(v)
    }

    pub fn is_positive(&self, slot: usize) -> bool {
        self.0[slot] == LabelStatus::Positive
    }
}

/// Resolves class names to slot indices, rejecting unknown names and
/// dropping repeats. An empty selection is an error.
pub fn resolve_classes<S: AsRef<str>>(names: &[S]) -> Result<Vec<usize>, FactualError> {
    let mut out = Vec::with_capacity(names.len());
    for n in names {
        let i = observation_index(n.as_ref())?;
        if !out.contains(&i) {
            out.push(i);
        }
    }
    if out.is_empty() {
        return Err(FactualError::NoClasses);
    }
    Ok(out)
}

/// Confusion counts of one class (or of pooled classes).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => {}
        }
    }

    /// Scores as sets of positive predictions vs positive references, so a
    /// class never predicted nor present scores 1.
    pub fn prf(&self) -> Prf {
        Prf::from_counts(self.tp, self.tp + self.fp, self.tp + self.fn_)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub class: String,
    pub counts: Confusion,
    pub score: Prf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChexbertReport {
    pub per_class: Vec<ClassScore>,
    /// Pooled over every selected class and example; the headline number.
    pub micro: Prf,
    pub micro_counts: Confusion,
    /// Unweighted mean of the per-class scores.
    pub macro_f1: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
}

/// Clinical-label F1 over the selected observation slots.
pub fn chexbert_f1(
    hyps: &[LabelVector],
    refs: &[LabelVector],
    classes: &[usize],
) -> Result<ChexbertReport, FactualError> {
    if hyps.len() != refs.len() {
        return Err(FactualError::LengthMismatch { hyps: hyps.len(), refs: refs.len() });
    }
    if classes.is_empty() {
        return Err(FactualError::NoClasses);
    }
    let mut micro = Confusion::default();
    let per_class: Vec<ClassScore> = classes
        .iter()
        .map(|&c| {
            let mut counts = Confusion::default();
            for (h, r) in hyps.iter().zip(refs) {
                counts.add(h.is_positive(c), r.is_positive(c));
            }
            micro.tp += counts.tp;
            micro.fp += counts.fp;
            micro.fn_ += counts.fn_;
            ClassScore { class: OBSERVATIONS[c].to_string(), counts, score: counts.prf() }
        })
        .collect();
    let k = per_class.len() as f64;
    let mean = |f: fn(&Prf) -> f64| per_class.iter().map(|c| f(&c.score)).sum::<f64>() / k;
    Ok(ChexbertReport {
        macro_f1: mean(|p| p.f1),
        macro_precision: mean(|p| p.precision),
        macro_recall: mean(|p| p.recall),
        micro: micro.prf(),
        micro_counts: micro,
        per_class,
    })
}

/// Headline classes as slot indices.
pub fn headline_classes() -> Vec<usize> {
    resolve_classes(&HEADLINE_OBSERVATIONS).expect("headline names are valid")
}

pub fn all_classes() -> Vec<usize> {
    (0..OBSERVATIONS.len()).collect()
}
