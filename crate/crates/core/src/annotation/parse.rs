use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use super::{AnnotationError, AnnotationGraph, Entity, EntityLabel, Relation, RelationLabel};

#[derive(Deserialize)]
struct RawReport {
    #[serde(default)]
    id: Option<String>,
    entities: RawEntities,
}

#[derive(Deserialize)]
struct RawEntity {
    tokens: String,
    label: String,
    start_ix: usize,
    end_ix: usize,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

/// Entity map kept in document order, with duplicate keys preserved so they
/// can be reported instead of silently overwritten.
struct RawEntities(Vec<(String, RawEntity)>);

impl<'de> Deserialize<'de> for RawEntities {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntitiesVisitor;

        impl<'de> Visitor<'de> for EntitiesVisitor {
            type Value = RawEntities;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping entity ids to entities")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some((k, v)) = map.next_entry::<String, RawEntity>()? {
                    out.push((k, v));
                }
                Ok(RawEntities(out))
            }
        }

        deserializer.deserialize_map(EntitiesVisitor)
    }
}

/// Parses one report annotation object.
///
/// ```
/// use radreward::annotation::parse_report_annotation;
///
/// let g = parse_report_annotation(r#"{"entities": {}}"#).unwrap();
/// assert!(g.entities().is_empty() && g.relations().is_empty());
/// ```
pub fn parse_report_annotation(raw: &str) -> Result<AnnotationGraph, AnnotationError> {
    let report: RawReport = serde_json::from_str(raw)?;
    build(report)
}

/// Parses a JSONL corpus, one report per non-blank line. Errors carry the
/// 1-based line number.
pub fn parse_jsonl(text: &str) -> Result<Vec<AnnotationGraph>, AnnotationError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_report_annotation(l).map_err(|e| AnnotationError::Line { line: i + 1, source: Box::new(e) })
        })
        .collect()
}

fn build(report: RawReport) -> Result<AnnotationGraph, AnnotationError> {
    let mut entities = Vec::with_capacity(report.entities.0.len());
    let mut relations = Vec::new();
    for (key, raw) in report.entities.0 {
        let label: EntityLabel =
            raw.label.parse().map_err(|label| AnnotationError::UnknownEntityLabel { entity: key.clone(), label })?;
        for (rel_label, target) in raw.relations {
            let label: RelationLabel = rel_label
                .parse()
                .map_err(|label| AnnotationError::UnknownRelationLabel { entity: key.clone(), label })?;
            relations.push(Relation::new(key.clone(), target, label));
        }
        entities.push(Entity::new(key, &raw.tokens, label, raw.start_ix, raw.end_ix)?);
    }
    AnnotationGraph::new(report.id, entities, relations)
}
