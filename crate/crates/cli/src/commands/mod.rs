pub mod factual;
pub mod graph;
pub mod nlg;
pub mod rg;
pub mod scst;

use std::path::Path;

use radreward::annotation::{parse_jsonl, parse_report_annotation, AnnotationError, AnnotationGraph};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::input::{read, InputFile};
use crate::Output;

/// Maps `f` over `items` on a pool of `jobs` threads. Results keep input
/// order whatever order they finish in.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

fn annotation_error(path: &Path, e: AnnotationError) -> CliError {
    match e {
        AnnotationError::Line { line, source } => CliError::parse_at(path, Some(line), source),
        other => CliError::parse_at(path, None, other),
    }
}

/// Loads a single annotation object or a JSONL corpus.
pub fn load_annotations(role: &str, path: &Path, inputs: &mut Vec<InputFile>) -> Result<Vec<AnnotationGraph>> {
    let text = read(role, path, inputs)?;
    let single = text.trim_start().starts_with('{') && serde_json::from_str::<serde_json::Value>(&text).is_ok();
    if single {
        let g = parse_report_annotation(&text).map_err(|e| annotation_error(path, e))?;
        Ok(vec![g])
    } else {
        parse_jsonl(&text).map_err(|e| annotation_error(path, e))
    }
}

/// Ids of a corpus; every report must carry one.
pub fn report_ids<'a>(path: &Path, graphs: &'a [AnnotationGraph]) -> Result<Vec<&'a str>> {
    graphs
        .iter()
        .enumerate()
        .map(|(k, g)| {
            g.id().ok_or_else(|| CliError::Alignment(format!("{}: report #{} has no id", path.display(), k + 1)))
        })
        .collect()
}

pub fn warn_unused(path: &Path, unused: &[String]) {
    if !unused.is_empty() {
        eprintln!(
            "radreward: warning: {} reference(s) in {} have no hypothesis: {}",
            unused.len(),
            path.display(),
            unused.join(", ")
        );
    }
}

pub fn finish(report: crate::report::ScoreReport, output: &Output) -> Result<()> {
    crate::report::emit(&report.to_json_pretty(), output.out.as_deref())
}
