use std::collections::{HashMap, HashSet};

use crate::annotation::{AnnotationGraph, Entity, EntityLabel, Relation, RelationLabel};

/// Role of an entity-bearing word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    Anatomy,
    Observation,
    /// Observation word that qualifies the next observation
    /// (`increased`, `mild`).
    Modifier,
}

/// Deterministic rule-based annotator for toy reports.
///
/// Every lexicon word becomes a single-token entity whose id is its
/// position. Anatomy words are `ANAT-DP`; observation and modifier words are
/// `OBS-DP`, or `OBS-DA` / `OBS-U` when a negation / uncertainty cue occurs
/// within `cue_window` words before them. Relations:
///
/// 1. in a run of adjacent anatomy words, each word `modify`s the last one;
/// 2. in a run of modifiers directly followed by an observation, each
///    modifier `modify`s that observation;
/// 3. an observation is `located_at` the head of the first anatomy run that
///    starts within `located_window` words after it, unless another
///    observation comes first;
/// 4. a suggestive cue links the nearest observation before it to the first
///    observation within `located_window` words after it (`suggestive_of`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconAnnotator {
    pub lexicon: HashMap<String, WordClass>,
    pub negation_cues: HashSet<String>,
    pub uncertainty_cues: HashSet<String>,
    pub suggestive_cues: HashSet<String>,
    pub cue_window: usize,
    pub located_window: usize,
}

impl LexiconAnnotator {
    fn class(&self, word: &str) -> Option<WordClass> {
        self.lexicon.get(word).copied()
    }

    fn is_observation(&self, word: &str) -> bool {
        self.class(word) == Some(WordClass::Observation)
    }

    fn label_at(&self, words: &[&str], i: usize) -> EntityLabel {
        match self.class(words[i]) {
            Some(WordClass::Anatomy) => EntityLabel::AnatDp,
            _ => {
                let lo = i.saturating_sub(self.cue_window);
                // nearest cue wins
                for w in words[lo..i].iter().rev() {
                    if self.negation_cues.contains(*w) {
                        return EntityLabel::ObsDa;
                    }
                    if self.uncertainty_cues.contains(*w) {
                        return EntityLabel::ObsU;
                    }
                }
                EntityLabel::ObsDp
            }
        }
    }

    /// Annotates a sequence of words.
    pub fn annotate<S: AsRef<str>>(&self, words: &[S]) -> AnnotationGraph {
        let words: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
        let n = words.len();
        let class: Vec<Option<WordClass>> = words.iter().map(|w| self.class(w)).collect();

        let entities: Vec<Entity> = (0..n)
            .filter(|&i| class[i].is_some())
            .map(|i| {
                Entity::new(i.to_string(), words[i], self.label_at(&words, i), i, i)
                    .expect("lexicon words are non-empty")
            })
            .collect();

        let mut relations = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |s: usize, t: usize, label: RelationLabel| {
            if s != t && seen.insert((s, t, label)) {
                relations.push(Relation::new(s.to_string(), t.to_string(), label));
            }
        };

        // head (last index) of the anatomy run containing i
        let anat_head = |mut i: usize| {
            while i + 1 < n && class[i + 1] == Some(WordClass::Anatomy) {
                i += 1;
            }
            i
        };

        let mut i = 0;
        while i < n {
            match class[i] {
                Some(WordClass::Anatomy) => {
                    let head = anat_head(i);
                    for j in i..head {
                        push(j, head, RelationLabel::Modify);
                    }
                    i = head + 1;
                }
                Some(WordClass::Modifier) => {
                    let mut end = i;
                    while end < n && class[end] == Some(WordClass::Modifier) {
                        end += 1;
                    }
                    if end < n && class[end] == Some(WordClass::Observation) {
                        for j in i..end {
                            push(j, end, RelationLabel::Modify);
                        }
                    }
                    i = end;
                }
                _ => i += 1,
            }
        }

        for i in (0..n).filter(|&i| class[i] == Some(WordClass::Observation)) {
            let stop = (i + self.located_window).min(n - 1);
            for (j, c) in class.iter().enumerate().take(stop + 1).skip(i + 1) {
                match c {
                    Some(WordClass::Anatomy) => {
                        push(i, anat_head(j), RelationLabel::LocatedAt);
                        break;
                    }
                    Some(WordClass::Observation) => break,
                    _ => {}
                }
            }
        }

        for c in (0..n).filter(|&c| self.suggestive_cues.contains(words[c])) {
            let source = (0..c).rev().find(|&j| self.is_observation(words[j]));
            let stop = (c + self.located_window).min(n - 1);
            let target = (c + 1..=stop).find(|&j| self.is_observation(words[j]));
            if let (Some(s), Some(t)) = (source, target) {
                push(s, t, RelationLabel::SuggestiveOf);
            }
        }

        AnnotationGraph::new(None, entities, relations).expect("annotator output satisfies graph invariants")
    }
}
