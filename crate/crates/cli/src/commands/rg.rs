use radreward::prf::{MacroPrf, Prf};
use radreward::rewards::{rg_reward_with, RelationScope, Variant};
use serde_json::{json, Map, Value};

use super::{finish, load_annotations, par_map, report_ids, warn_unused};
use crate::error::Result;
use crate::input::align_by_id;
use crate::report::ScoreReport;
use crate::{Output, Pair};

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    for &i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

pub fn run(pair: &Pair, variants: &[Variant], scope: RelationScope, output: &Output) -> Result<()> {
    let variants = dedup(variants);
    let mut inputs = Vec::new();
    let hyps = load_annotations("hyp", &pair.hyp, &mut inputs)?;
    let refs = load_annotations("ref", &pair.reference, &mut inputs)?;
    let hyp_ids = report_ids(&pair.hyp, &hyps)?;
    let ref_ids = report_ids(&pair.reference, &refs)?;
    let (pairs, unused) = align_by_id(&hyp_ids, &ref_ids)?;
    warn_unused(&pair.reference, &unused);

    let scores: Vec<Vec<Prf>> = par_map(output.jobs, &pairs, |&(i, j)| {
        variants.iter().map(|&v| rg_reward_with(&hyps[i], &refs[j], v, scope)).collect()
    })?;

    let config = json!({
        "alignment": "id",
        "relation_scope": scope,
        "variants": variants.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
    });
    let mut report = ScoreReport::new("score-rg", inputs, config);
    for (k, v) in variants.iter().enumerate() {
        let agg = MacroPrf::from_examples(scores.iter().map(|row| &row[k])).expect("non-empty corpus");
        report.insert_metric(v.metric_name(), agg);
    }
    if output.per_example {
        let rows = pairs
            .iter()
            .zip(&scores)
            .map(|(&(i, _), row)| {
                let mut m = Map::new();
                m.insert("id".into(), json!(hyp_ids[i]));
                for (v, s) in variants.iter().zip(row) {
                    m.insert(v.metric_name().into(), json!(s));
                }
                Value::Object(m)
            })
            .collect();
        report.per_example = Some(rows);
    }
    finish(report, output)
}
