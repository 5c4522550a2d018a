//! Entity/relation graph rewards.
//!
//! Each annotation graph is reduced to a set of tuples, and the reward is
//! the F-score between the hypothesis set and the reference set:
//!
//! | variant | tuple per node |
//! |---------|----------------|
//! | `E`     | `(tokens, label)` |
//! | `ER`    | `(tokens, label, has_relation)` |
//! | `ER_BAR`| `(tokens, label, target_tokens, relation)` per outgoing edge, or `(tokens, label)` for a node without one |
//!
//! Node identity is the normalized token text plus the entity label, so a
//! surface form repeated in one report contributes a single tuple.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{AnnotationGraph, EntityLabel, RelationLabel};
use crate::prf::{MacroPrf, Prf};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewardError {
    #[error("score set variants differ: hypothesis {hyp}, reference {reference}")]
    VariantMismatch { hyp: Variant, reference: Variant },
    #[error("element {element} does not belong to a {variant} score set")]
    ElementKind { element: String, variant: Variant },
    #[error("corpus length mismatch: {hyps} hypotheses, {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("empty corpus")]
    EmptyCorpus,
}

/// Which tuple set a reward is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "e")]
    E,
    #[serde(rename = "er")]
    Er,
    #[serde(rename = "er_bar")]
    ErBar,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::E, Variant::Er, Variant::ErBar];

    /// Short name accepted on the command line (`e`, `er`, `er_bar`).
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::E => "e",
            Variant::Er => "er",
            Variant::ErBar => "er_bar",
        }
    }

    /// Metric name used in reports (`rg_e`, `rg_er`, `rg_er_bar`).
    pub fn metric_name(self) -> &'static str {
        match self {
            Variant::E => "rg_e",
            Variant::Er => "rg_er",
            Variant::ErBar => "rg_er_bar",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e" | "rg_e" => Ok(Variant::E),
            "er" | "rg_er" => Ok(Variant::Er),
            "er_bar" | "erbar" | "rg_er_bar" => Ok(Variant::ErBar),
            other => Err(format!("unknown variant {other:?} (expected e, er or er_bar)")),
        }
    }
}

/// Which relations count when deciding whether a node "has a relation".
///
/// `Outgoing` (the default) only counts edges the node is the source of;
/// `Incident` also counts edges it is the target of. The choice affects the
/// `ER` flag and which nodes get a short tuple under `ER_BAR`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationScope {
    #[default]
    Outgoing,
    Incident,
}

/// One tuple of a score set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetElement {
    Node { tokens: String, label: EntityLabel },
    Flagged { tokens: String, label: EntityLabel, has_relation: bool },
    Edge { tokens: String, label: EntityLabel, target: String, relation: RelationLabel },
}

impl SetElement {
    pub fn node(tokens: &str, label: EntityLabel) -> Self {
        SetElement::Node { tokens: tokens.to_string(), label }
    }

    pub fn flagged(tokens: &str, label: EntityLabel, has_relation: bool) -> Self {
        SetElement::Flagged { tokens: tokens.to_string(), label, has_relation }
    }

    pub fn edge(tokens: &str, label: EntityLabel, target: &str, relation: RelationLabel) -> Self {
        SetElement::Edge { tokens: tokens.to_string(), label, target: target.to_string(), relation }
    }

    fn fits(&self, variant: Variant) -> bool {
        matches!(
            (self, variant),
            (SetElement::Node { .. }, Variant::E)
                | (SetElement::Flagged { .. }, Variant::Er)
                | (SetElement::Node { .. }, Variant::ErBar)
                | (SetElement::Edge { .. }, Variant::ErBar)
        )
    }
}

impl fmt::Display for SetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetElement::Node { tokens, label } => write!(f, "({tokens}, {})", label.short()),
            SetElement::Flagged { tokens, label, has_relation } => {
                write!(f, "({tokens}, {}, {})", label.short(), u8::from(*has_relation))
            }
            SetElement::Edge { tokens, label, target, relation } => {
                write!(f, "({tokens}, {}, {target}, {relation})", label.short())
            }
        }
    }
}

/// The tuple set of one graph for one variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreSet {
    variant: Variant,
    elements: BTreeSet<SetElement>,
}

impl ScoreSet {
    pub fn new(variant: Variant) -> Self {
        ScoreSet { variant, elements: BTreeSet::new() }
    }

    /// Adds an element; returns whether it was new.
    pub fn insert(&mut self, element: SetElement) -> Result<bool, RewardError> {
        if !element.fits(self.variant) {
            return Err(RewardError::ElementKind { element: element.to_string(), variant: self.variant });
        }
        Ok(self.elements.insert(element))
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn elements(&self) -> &BTreeSet<SetElement> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: &SetElement) -> bool {
        self.elements.contains(element)
    }
}

/// Builds the tuple set of `g` with the default (outgoing) relation scope.
pub fn build_set(g: &AnnotationGraph, variant: Variant) -> ScoreSet {
    build_set_with(g, variant, RelationScope::Outgoing)
}

pub fn build_set_with(g: &AnnotationGraph, variant: Variant, scope: RelationScope) -> ScoreSet {
    let entities = g.entities();
    let index = g.index();
    let mut related = vec![false; entities.len()];
    for r in g.relations() {
        related[index[r.source.as_str()]] = true;
        if scope == RelationScope::Incident {
            related[index[r.target.as_str()]] = true;
        }
    }

    let mut elements = BTreeSet::new();
    match variant {
        Variant::E => {
            for e in entities {
                elements.insert(SetElement::node(&e.tokens, e.label));
            }
        }
        Variant::Er => {
            // One tuple per node identity: the flag is set if any instance of
            // the identity has a relation.
            let mut flagged: BTreeSet<(&str, EntityLabel)> = BTreeSet::new();
            for (e, &rel) in entities.iter().zip(&related) {
                if rel {
                    flagged.insert((&e.tokens, e.label));
                }
            }
            for e in entities {
                let has = flagged.contains(&(e.tokens.as_str(), e.label));
                elements.insert(SetElement::flagged(&e.tokens, e.label, has));
            }
        }
        Variant::ErBar => {
            for r in g.relations() {
                let src = &entities[index[r.source.as_str()]];
                let tgt = &entities[index[r.target.as_str()]];
                elements.insert(SetElement::edge(&src.tokens, src.label, &tgt.tokens, r.label));
            }
            for (e, &rel) in entities.iter().zip(&related) {
                if !rel {
                    elements.insert(SetElement::node(&e.tokens, e.label));
                }
            }
        }
    }
    ScoreSet { variant, elements }
}

/// Precision, recall and F1 of `hyp` against `reference`.
pub fn f_score(hyp: &ScoreSet, reference: &ScoreSet) -> Result<Prf, RewardError> {
    if hyp.variant != reference.variant {
        return Err(RewardError::VariantMismatch { hyp: hyp.variant, reference: reference.variant });
    }
    let matches = hyp.elements.intersection(&reference.elements).count();
    Ok(Prf::from_counts(matches, hyp.len(), reference.len()))
}

/// Graph reward of a hypothesis annotation against a reference annotation.
///
/// ```
/// use radreward::annotation::AnnotationGraph;
/// use radreward::rewards::{rg_reward, Variant};
///
/// let empty = AnnotationGraph::empty();
/// assert_eq!(rg_reward(&empty, &empty, Variant::Er).f1, 1.0);
/// ```
pub fn rg_reward(hyp: &AnnotationGraph, reference: &AnnotationGraph, variant: Variant) -> Prf {
    rg_reward_with(hyp, reference, variant, RelationScope::Outgoing)
}

pub fn rg_reward_with(
    hyp: &AnnotationGraph,
    reference: &AnnotationGraph,
    variant: Variant,
    scope: RelationScope,
) -> Prf {
    let h = build_set_with(hyp, variant, scope);
    let r = build_set_with(reference, variant, scope);
    f_score(&h, &r).expect("sets built for the same variant")
}

/// Macro-averaged corpus score together with the per-example values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    pub aggregate: MacroPrf,
    pub per_example: Vec<Prf>,
}

impl CorpusScore {
    pub fn from_examples(per_example: Vec<Prf>) -> Result<Self, RewardError> {
        let aggregate = MacroPrf::from_examples(&per_example).ok_or(RewardError::EmptyCorpus)?;
        Ok(CorpusScore { aggregate, per_example })
    }
}

/// Scores index-aligned hypothesis and reference corpora.
pub fn corpus_rg(
    hyps: &[AnnotationGraph],
    refs: &[AnnotationGraph],
    variant: Variant,
) -> Result<CorpusScore, RewardError> {
    corpus_rg_with(hyps, refs, variant, RelationScope::Outgoing)
}

pub fn corpus_rg_with(
    hyps: &[AnnotationGraph],
    refs: &[AnnotationGraph],
    variant: Variant,
    scope: RelationScope,
) -> Result<CorpusScore, RewardError> {
    if hyps.len() != refs.len() {
        return Err(RewardError::LengthMismatch { hyps: hyps.len(), refs: refs.len() });
    }
    let per_example = hyps.iter().zip(refs).map(|(h, r)| rg_reward_with(h, r, variant, scope)).collect();
    CorpusScore::from_examples(per_example)
}
