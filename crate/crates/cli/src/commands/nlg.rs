use radreward::nlg::{
    bleu4, cider_d, rouge_l, rouge_l_pair, sentence_bleu4, CiderD, TokenizedText, CIDER_SIGMA, ROUGE_BETA,
};
use serde_json::{json, Map, Value};

use super::{finish, par_map};
use crate::error::{CliError, Result};
use crate::input::read;
use crate::report::ScoreReport;
use crate::{Metric, Output, Pair};

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn run(pair: &Pair, metrics: &[Metric], output: &Output) -> Result<()> {
    let mut metrics_seen: Vec<Metric> = Vec::new();
    for &m in metrics {
        if !metrics_seen.contains(&m) {
            metrics_seen.push(m);
        }
    }
    let mut inputs = Vec::new();
    let hyp_text = read("hyp", &pair.hyp, &mut inputs)?;
    let ref_text = read("ref", &pair.reference, &mut inputs)?;
    let hyp_lines: Vec<&str> = hyp_text.lines().collect();
    let ref_lines: Vec<&str> = ref_text.lines().collect();
    if hyp_lines.len() != ref_lines.len() {
        return Err(CliError::Alignment(format!(
            "{} has {} lines but {} has {}",
            pair.hyp.display(),
            hyp_lines.len(),
            pair.reference.display(),
            ref_lines.len()
        )));
    }
    if hyp_lines.is_empty() {
        return Err(CliError::Alignment("corpora are empty".into()));
    }
    let hyps = par_map(output.jobs, &hyp_lines, |l| TokenizedText::new(l))?;
    let refs = par_map(output.jobs, &ref_lines, |l| TokenizedText::new(l))?;

    let config = json!({
        "alignment": "line",
        "cider_sigma": CIDER_SIGMA,
        "metrics": metrics_seen.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "rouge_beta": ROUGE_BETA,
        "tokenizer": "lowercase, punctuation as tokens, whitespace split",
    });
    let mut report = ScoreReport::new("score-nlg", inputs, config);
    for &m in &metrics_seen {
        let v = match m {
            Metric::Bleu4 => bleu4(&hyps, &refs),
            Metric::Rougel => rouge_l(&hyps, &refs),
            Metric::Ciderd => cider_d(&hyps, &refs),
        }
        .map_err(runtime)?;
        report.insert_metric(m.name(), v);
    }
    if output.per_example {
        let scorer = CiderD::new(&refs);
        let idx: Vec<usize> = (0..hyps.len()).collect();
        let rows = par_map(output.jobs, &idx, |&i| {
            let mut row = Map::new();
            row.insert("line".into(), json!(i + 1));
            for &m in &metrics_seen {
                let v = match m {
                    Metric::Bleu4 => sentence_bleu4(&hyps[i], &refs[i]),
                    Metric::Rougel => rouge_l_pair(hyps[i].tokens(), refs[i].tokens(), ROUGE_BETA),
                    Metric::Ciderd => scorer.score(&hyps[i], &refs[i]),
                };
                row.insert(m.name().into(), json!(v));
            }
            Value::Object(row)
        })?;
        report.per_example = Some(rows);
    }
    finish(report, output)
}
