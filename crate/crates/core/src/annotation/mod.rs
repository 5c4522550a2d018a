//! Report annotations as directed labeled graphs.
//!
//! A report annotation is a set of entities (contiguous token spans carrying
//! one of four labels) and directed relations between them. The JSON layout
//! is the one used by released entity-relation annotation corpora: one
//! object per report, entities keyed by id, each entity listing its outgoing
//! relations.
//!
//! ```json
//! {"id": "r1", "entities": {
//!   "1": {"tokens": "opacity", "label": "OBS-DP", "start_ix": 3, "end_ix": 3,
//!         "relations": [["located_at", "2"]]},
//!   "2": {"tokens": "lobe", "label": "ANAT-DP", "start_ix": 6, "end_ix": 6,
//!         "relations": []}
//! }}
//! ```
//!
//! Span indices are 0-based and inclusive on both ends.

mod dot;
mod parse;
mod stats;

pub use dot::export_dot;
pub use parse::{parse_jsonl, parse_report_annotation};
pub use stats::{graph_stats, GraphStats};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors raised while parsing or validating an annotation.
#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("malformed annotation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entity {entity:?}: unknown entity label {label:?}")]
    UnknownEntityLabel { entity: String, label: String },
    #[error("entity {entity:?}: unknown relation label {label:?}")]
    UnknownRelationLabel { entity: String, label: String },
    #[error("entity {source_id:?}: relation target {target:?} does not exist")]
    DanglingRelation { source_id: String, target: String },
    #[error("relation source {0:?} does not exist")]
    MissingSource(String),
    #[error("duplicate entity id {0:?}")]
    DuplicateEntityId(String),
    #[error("entity {0:?}: relation points to itself")]
    SelfLoop(String),
    #[error("entity {source_id:?}: duplicate relation {label} -> {target:?}")]
    DuplicateRelation { source_id: String, target: String, label: RelationLabel },
    #[error("entity {0:?}: tokens are empty")]
    EmptyTokens(String),
    #[error("entity {entity:?}: start_ix {start} is after end_ix {end}")]
    InvalidSpan { entity: String, start: usize, end: usize },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<AnnotationError>,
    },
}

/// Entity label: anatomy or observation, with presence level for
/// observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityLabel {
    /// Anatomy, definitely present.
    AnatDp,
    /// Observation, definitely present.
    ObsDp,
    /// Observation, uncertain.
    ObsU,
    /// Observation, definitely absent.
    ObsDa,
}

impl EntityLabel {
    pub const ALL: [EntityLabel; 4] = [EntityLabel::AnatDp, EntityLabel::ObsDp, EntityLabel::ObsU, EntityLabel::ObsDa];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityLabel::AnatDp => "ANAT-DP",
            EntityLabel::ObsDp => "OBS-DP",
            EntityLabel::ObsU => "OBS-U",
            EntityLabel::ObsDa => "OBS-DA",
        }
    }

    /// Short lowercase form used when printing score-set tuples
    /// (`anat`, `obs-dp`, `obs-u`, `obs-da`).
    pub fn short(self) -> &'static str {
        match self {
            EntityLabel::AnatDp => "anat",
            EntityLabel::ObsDp => "obs-dp",
            EntityLabel::ObsU => "obs-u",
            EntityLabel::ObsDa => "obs-da",
        }
    }

    pub fn is_anatomy(self) -> bool {
        matches!(self, EntityLabel::AnatDp)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ANAT-DP" => Ok(EntityLabel::AnatDp),
            "OBS-DP" => Ok(EntityLabel::ObsDp),
            "OBS-U" => Ok(EntityLabel::ObsU),
            "OBS-DA" => Ok(EntityLabel::ObsDa),
            other => Err(other.to_string()),
        }
    }
}

/// Relation label of a directed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationLabel {
    SuggestiveOf,
    LocatedAt,
    Modify,
}

impl RelationLabel {
    pub const ALL: [RelationLabel; 3] = [RelationLabel::SuggestiveOf, RelationLabel::LocatedAt, RelationLabel::Modify];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::SuggestiveOf => "suggestive_of",
            RelationLabel::LocatedAt => "located_at",
            RelationLabel::Modify => "modify",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationLabel {
    type Err = String;

    /// Accepts the canonical underscore form as well as the spaced form
    /// (`"suggestive of"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let canonical = s.split_whitespace().collect::<Vec<_>>().join("_");
        match canonical.as_str() {
            "suggestive_of" => Ok(RelationLabel::SuggestiveOf),
            "located_at" => Ok(RelationLabel::LocatedAt),
            "modify" => Ok(RelationLabel::Modify),
            _ => Err(s.to_string()),
        }
    }
}

/// Lowercases and collapses runs of whitespace into single spaces.
pub fn normalize_tokens(text: &str) -> String {
    text.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub id: String,
    /// Normalized surface text of the span.
    pub tokens: String,
    pub label: EntityLabel,
    pub start_ix: usize,
    pub end_ix: usize,
}

impl Entity {
    /// Builds an entity, normalizing `tokens`.
    pub fn new(
        id: impl Into<String>,
        tokens: &str,
        label: EntityLabel,
        start_ix: usize,
        end_ix: usize,
    ) -> Result<Self, AnnotationError> {
        let id = id.into();
        let tokens = normalize_tokens(tokens);
        if tokens.is_empty() {
            return Err(AnnotationError::EmptyTokens(id));
        }
        if start_ix > end_ix {
            return Err(AnnotationError::InvalidSpan { entity: id, start: start_ix, end: end_ix });
        }
        Ok(Entity { id, tokens, label, start_ix, end_ix })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub source: String,
    pub target: String,
    pub label: RelationLabel,
}

impl Relation {
    pub fn new(source: impl Into<String>, target: impl Into<String>, label: RelationLabel) -> Self {
        Relation { source: source.into(), target: target.into(), label }
    }
}

/// Validated entity-relation graph of one report.
///
/// Entities keep their input order. Relations are directed and keep the
/// order in which they were given.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotationGraph {
    id: Option<String>,
    entities: Vec<Entity>,
    relations: Vec<Relation>,
}

impl AnnotationGraph {
    /// Validates and assembles a graph.
    ///
    /// Rejects duplicate entity ids, relations whose endpoints are missing,
    /// self-loops, and repeated identical relations.
    pub fn new(id: Option<String>, entities: Vec<Entity>, relations: Vec<Relation>) -> Result<Self, AnnotationError> {
        let mut ids = HashSet::with_capacity(entities.len());
        for e in &entities {
            if !ids.insert(e.id.as_str()) {
                return Err(AnnotationError::DuplicateEntityId(e.id.clone()));
            }
        }
        let mut seen = HashSet::with_capacity(relations.len());
        for r in &relations {
            if !ids.contains(r.source.as_str()) {
                return Err(AnnotationError::MissingSource(r.source.clone()));
            }
            if !ids.contains(r.target.as_str()) {
                return Err(AnnotationError::DanglingRelation {
                    source_id: r.source.clone(),
                    target: r.target.clone(),
                });
            }
            if r.source == r.target {
                return Err(AnnotationError::SelfLoop(r.source.clone()));
            }
            if !seen.insert(r) {
                return Err(AnnotationError::DuplicateRelation {
                    source_id: r.source.clone(),
                    target: r.target.clone(),
                    label: r.label,
                });
            }
        }
        Ok(AnnotationGraph { id, entities, relations })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id == id)
    }

    /// Map from entity id to its position in [`entities`](Self::entities).
    pub(crate) fn index(&self) -> HashMap<&str, usize> {
        self.entities.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect()
    }

    /// Serializes back to the per-report JSON layout.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("annotation graphs always serialize")
    }
}

impl Serialize for AnnotationGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Entities<'a>(&'a AnnotationGraph);
        struct EntityBody<'a>(&'a Entity, &'a [Relation]);
        struct Outgoing<'a>(&'a str, &'a [Relation]);

        impl Serialize for Entities<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.entities.len()))?;
                for e in &self.0.entities {
                    map.serialize_entry(&e.id, &EntityBody(e, &self.0.relations))?;
                }
                map.end()
            }
        }

        impl Serialize for EntityBody<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let e = self.0;
                let mut map = serializer.serialize_map(Some(5))?;
                map.serialize_entry("tokens", &e.tokens)?;
                map.serialize_entry("label", e.label.as_str())?;
                map.serialize_entry("start_ix", &e.start_ix)?;
                map.serialize_entry("end_ix", &e.end_ix)?;
                map.serialize_entry("relations", &Outgoing(&e.id, self.1))?;
                map.end()
            }
        }

        impl Serialize for Outgoing<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(None)?;
                for r in self.1.iter().filter(|r| r.source == self.0) {
                    seq.serialize_element(&(r.label.as_str(), &r.target))?;
                }
                seq.end()
            }
        }

        let mut map = serializer.serialize_map(None)?;
        if let Some(id) = &self.id {
            map.serialize_entry("id", id)?;
        }
        map.serialize_entry("entities", &Entities(self))?;
        map.end()
    }
}
