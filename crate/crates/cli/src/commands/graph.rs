use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use radreward::annotation::{export_dot as dot, graph_stats, EntityLabel, GraphStats, RelationLabel};
use serde_json::json;

use super::{finish, load_annotations};
use crate::error::{CliError, Result};
use crate::report::{emit, ScoreReport};
use crate::Output;

pub fn export_dot(input: &Path, id: Option<&str>, out: Option<&Path>) -> Result<()> {
    let graphs = load_annotations("input", input, &mut Vec::new())?;
    let selected: Vec<_> = match id {
        Some(id) => {
            let g: Vec<_> = graphs.iter().filter(|g| g.id() == Some(id)).collect();
            if g.is_empty() {
                return Err(CliError::Alignment(format!("no report with id {id:?} in {}", input.display())));
            }
            g
        }
        None => graphs.iter().collect(),
    };
    let text: String = selected.into_iter().map(dot).collect();
    emit(&text, out)
}

pub fn stats(paths: &[PathBuf], output: &Output) -> Result<()> {
    let mut inputs = Vec::new();
    let mut graphs = Vec::new();
    for p in paths {
        graphs.extend(load_annotations("input", p, &mut inputs)?);
    }
    let total = graph_stats(&graphs);
    let mut report = ScoreReport::new("stats", inputs, json!({}));
    report.insert_metric("reports", graphs.len());
    let entities: BTreeMap<_, _> = EntityLabel::ALL.iter().map(|&l| (l.as_str(), total.entity_count(l))).collect();
    let relations: BTreeMap<_, _> = RelationLabel::ALL.iter().map(|&l| (l.as_str(), total.relation_count(l))).collect();
    report.insert_metric("entities", entities);
    report.insert_metric("relations", relations);
    if output.per_example {
        let rows = graphs
            .iter()
            .map(|g| {
                let s: GraphStats = graph_stats([g]);
                json!({ "id": g.id(), "counts": s })
            })
            .collect();
        report.per_example = Some(rows);
    }
    finish(report, output)
}
