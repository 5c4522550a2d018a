use std::path::Path;

use radreward::factual::{
    all_classes, chexbert_f1, entity_set_f1, headline_classes, observation_index, resolve_classes, EntityBag,
    LabelStatus, LabelVector, OBSERVATIONS,
};
use radreward::prf::MacroPrf;
use serde::Deserialize;
use serde_json::json;

use super::{finish, par_map, warn_unused};
use crate::error::{CliError, Result};
use crate::input::{align_by_id, read};
use crate::report::ScoreReport;
use crate::{Output, Pair};

fn parse_classes(spec: &str) -> Result<Vec<usize>> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "headline" => Ok(headline_classes()),
        "all" => Ok(all_classes()),
        _ => {
            let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            resolve_classes(&names).map_err(|e| CliError::Usage(format!("--classes: {e}")))
        }
    }
}

/// Label CSV: an `id` column followed by the fourteen observation columns
/// in any order.
fn read_labels(path: &Path, text: &str) -> Result<(Vec<String>, Vec<LabelVector>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| CliError::parse_at(path, Some(1), e))?.clone();
    if !headers.get(0).is_some_and(|h| h.eq_ignore_ascii_case("id")) {
        return Err(CliError::parse_at(path, Some(1), "first column must be `id`"));
    }
    let mut slots = Vec::with_capacity(14);
    for h in headers.iter().skip(1) {
        let slot = observation_index(h).map_err(|e| CliError::parse_at(path, Some(1), e))?;
        if slots.contains(&slot) {
            return Err(CliError::parse_at(path, Some(1), format!("duplicate column {h:?}")));
        }
        slots.push(slot);
    }
    if slots.len() != OBSERVATIONS.len() {
        return Err(CliError::parse_at(
            path,
            Some(1),
            format!("expected {} observation columns, found {}", OBSERVATIONS.len(), slots.len()),
        ));
    }
    let mut ids = Vec::new();
    let mut vectors = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            CliError::parse_at(path, line, e)
        })?;
        let line = rec.position().map(|p| p.line() as usize);
        let mut v = LabelVector::default();
        for (cell, &slot) in rec.iter().skip(1).zip(&slots) {
            let status = if cell.is_empty() {
                LabelStatus::Unspecified
            } else {
                cell.parse().map_err(|e| CliError::parse_at(path, line, e))?
            };
            v.0[slot] = status;
        }
        ids.push(rec[0].to_string());
        vectors.push(v);
    }
    Ok((ids, vectors))
}

pub fn run_chexbert(pair: &Pair, classes: &str, output: &Output) -> Result<()> {
    let classes = parse_classes(classes)?;
    let mut inputs = Vec::new();
    let hyp_text = read("hyp", &pair.hyp, &mut inputs)?;
    let ref_text = read("ref", &pair.reference, &mut inputs)?;
    let (hyp_ids, hyp_vecs) = read_labels(&pair.hyp, &hyp_text)?;
    let (ref_ids, ref_vecs) = read_labels(&pair.reference, &ref_text)?;
    let hid: Vec<&str> = hyp_ids.iter().map(String::as_str).collect();
    let rid: Vec<&str> = ref_ids.iter().map(String::as_str).collect();
    let (pairs, unused) = align_by_id(&hid, &rid)?;
    warn_unused(&pair.reference, &unused);

    let hyps: Vec<LabelVector> = pairs.iter().map(|&(i, _)| hyp_vecs[i]).collect();
    let refs: Vec<LabelVector> = pairs.iter().map(|&(_, j)| ref_vecs[j]).collect();
    let rep = chexbert_f1(&hyps, &refs, &classes).map_err(|e| CliError::Runtime(e.to_string()))?;

    let class_names: Vec<&str> = classes.iter().map(|&c| OBSERVATIONS[c]).collect();
    let config = json!({
        "alignment": "id",
        "binarization": "positive vs rest",
        "classes": class_names,
    });
    let mut report = ScoreReport::new("chexbert-f1", inputs, config);
    report.insert_metric("chexbert_micro", json!({ "counts": rep.micro_counts, "score": rep.micro }));
    report.insert_metric(
        "chexbert_macro",
        json!({
            "precision": rep.macro_precision,
            "recall": rep.macro_recall,
            "f1": rep.macro_f1,
        }),
    );
    report.insert_metric("chexbert_per_class", &rep.per_class);
    if output.per_example {
        let idx: Vec<usize> = (0..pairs.len()).collect();
        let rows = par_map(output.jobs, &idx, |&k| {
            let one = chexbert_f1(&hyps[k..=k], &refs[k..=k], &classes).expect("aligned single pair");
            json!({
                "id": hid[pairs[k].0],
                "counts": one.micro_counts,
                "f1": one.micro.f1,
            })
        })?;
        report.per_example = Some(rows);
    }
    finish(report, output)
}

#[derive(Deserialize)]
struct EntityLine {
    id: String,
    entities: Vec<String>,
}

fn read_bags(path: &Path, text: &str) -> Result<(Vec<String>, Vec<EntityBag>)> {
    let mut ids = Vec::new();
    let mut bags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: EntityLine = serde_json::from_str(line).map_err(|e| CliError::parse_at(path, Some(i + 1), e))?;
        ids.push(rec.id);
        bags.push(EntityBag::new(rec.entities));
    }
    Ok((ids, bags))
}

pub fn run_entity(pair: &Pair, output: &Output) -> Result<()> {
    let mut inputs = Vec::new();
    let hyp_text = read("hyp", &pair.hyp, &mut inputs)?;
    let ref_text = read("ref", &pair.reference, &mut inputs)?;
    let (hyp_ids, hyp_bags) = read_bags(&pair.hyp, &hyp_text)?;
    let (ref_ids, ref_bags) = read_bags(&pair.reference, &ref_text)?;
    let hid: Vec<&str> = hyp_ids.iter().map(String::as_str).collect();
    let rid: Vec<&str> = ref_ids.iter().map(String::as_str).collect();
    let (pairs, unused) = align_by_id(&hid, &rid)?;
    warn_unused(&pair.reference, &unused);

    let scores = par_map(output.jobs, &pairs, |&(i, j)| entity_set_f1(&hyp_bags[i], &ref_bags[j]))?;
    let config = json!({ "alignment": "id", "aggregate": "macro", "normalization": "lowercase, collapsed whitespace" });
    let mut report = ScoreReport::new("entity-f1", inputs, config);
    report.insert_metric("entity_f1", MacroPrf::from_examples(&scores).expect("non-empty corpus"));
    if output.per_example {
        let rows = pairs.iter().zip(&scores).map(|(&(i, _), s)| json!({ "id": hid[i], "entity_f1": s })).collect();
        report.per_example = Some(rows);
    }
    finish(report, output)
}
