//! The bundled toy task.

use std::collections::{HashMap, HashSet};

use super::annotator::{LexiconAnnotator, WordClass};
use super::vocab::ToyVocabulary;
use super::ScstError;
use crate::annotation::AnnotationGraph;

const ANATOMY: &[&str] = &["right", "left", "lower", "upper", "lobe", "lung", "base", "apex", "heart"];
const OBSERVATIONS: &[&str] = &[
    "opacity",
    "effusion",
    "atelectasis",
    "consolidation",
    "edema",
    "infection",
    "pneumonia",
    "pneumothorax",
    "cardiomegaly",
];
const MODIFIERS: &[&str] = &["increased", "small", "mild"];
const CONNECTIVES: &[&str] =
    &["there", "is", "in", "the", "of", "and", "with", "no", "possible", "suggesting", "seen", "at"];

/// Default reference report of the toy task. Its annotation has seven
/// entities and five relations.
pub const DEFAULT_REFERENCE: &str = "increased opacity in right lower lobe suggesting infection no pneumothorax";

/// Short reports the initial policy is estimated from before
/// self-critical training. The default reference is not among them.
pub const WARM_START_CORPUS: &[&str] = &[
    "increased opacity in left lower lobe",
    "opacity in right upper lobe suggesting pneumonia",
    "small right effusion",
    "no pneumothorax",
    "mild edema suggesting infection no effusion",
    "there is no effusion",
    "atelectasis in left lung base",
    "right lower lobe consolidation suggesting pneumonia",
    "no pneumothorax and no effusion",
    "possible consolidation in lung apex",
    "mild cardiomegaly",
    "increased opacity suggesting infection",
];

pub fn default_vocabulary() -> ToyVocabulary {
    ToyVocabulary::new(CONNECTIVES.iter().chain(ANATOMY).chain(OBSERVATIONS).chain(MODIFIERS).copied())
        .expect("bundled vocabulary is valid")
}

pub fn default_annotator() -> LexiconAnnotator {
    let set = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<HashSet<_>>();
    let mut lexicon = HashMap::new();
    for (words, class) in
        [(ANATOMY, WordClass::Anatomy), (OBSERVATIONS, WordClass::Observation), (MODIFIERS, WordClass::Modifier)]
    {
        for w in words {
            lexicon.insert(w.to_string(), class);
        }
    }
    LexiconAnnotator {
        lexicon,
        negation_cues: set(&["no"]),
        uncertainty_cues: set(&["possible"]),
        suggestive_cues: set(&["suggesting"]),
        cue_window: 2,
        located_window: 3,
    }
}

/// Vocabulary, annotator and reference report the policy is trained
/// against.
#[derive(Debug, Clone)]
pub struct ToyTask {
    pub vocab: ToyVocabulary,
    pub annotator: LexiconAnnotator,
    pub reference: Vec<usize>,
    pub reference_graph: AnnotationGraph,
    /// Token sequences for the maximum-likelihood warm start.
    pub corpus: Vec<Vec<usize>>,
}

impl ToyTask {
    pub fn new(vocab: ToyVocabulary, annotator: LexiconAnnotator, reference: &str) -> Result<Self, ScstError> {
        let reference = vocab.encode(reference)?;
        if reference.contains(&vocab.eos()) {
            return Err(ScstError::InvalidConfig("reference must not contain the end marker".into()));
        }
        let reference_graph = annotator.annotate(&vocab.decode(&reference));
        Ok(ToyTask { vocab, annotator, reference, reference_graph, corpus: Vec::new() })
    }

    pub fn with_corpus<S: AsRef<str>>(mut self, corpus: &[S]) -> Result<Self, ScstError> {
        self.corpus = corpus.iter().map(|line| self.vocab.encode(line.as_ref())).collect::<Result<_, _>>()?;
        Ok(self)
    }

    /// Bundled task, optionally with a different reference text.
    pub fn bundled(reference: Option<&str>) -> Result<Self, ScstError> {
        ToyTask::new(default_vocabulary(), default_annotator(), reference.unwrap_or(DEFAULT_REFERENCE))?
            .with_corpus(WARM_START_CORPUS)
    }

    pub fn annotate(&self, ids: &[usize]) -> AnnotationGraph {
        self.annotator.annotate(&self.vocab.decode(ids))
    }
}
