//! Reference implementations written straight from the definitions.

use serde_json::Value;

use crate::gen::{GraphSpec, TOKEN_POOL};

/// A tuple of strings, e.g. `["opacity", "obs-dp", "1"]`.
pub type Tuple = Vec<String>;

const LABELS: [(&str, &str); 4] = [("ANAT-DP", "anat"), ("OBS-DP", "obs-dp"), ("OBS-U", "obs-u"), ("OBS-DA", "obs-da")];

fn short_label(label: &str) -> String {
    LABELS
        .iter()
        .find(|(long, _)| *long == label)
        .map(|(_, s)| s.to_string())
        .unwrap_or_else(|| panic!("unknown label {label}"))
}

fn normalize(text: &str) -> String {
    text.split_whitespace().map(|w| w.to_lowercase()).collect::<Vec<_>>().join(" ")
}

/// Graph as plain strings: nodes `(id, tokens, short label)` and edges
/// `(source id, target id, relation)`.
#[derive(Debug, Clone, Default)]
pub struct PlainGraph {
    pub nodes: Vec<(String, String, String)>,
    pub edges: Vec<(String, String, String)>,
}

impl PlainGraph {
    /// Reads the raw annotation JSON without any validation.
    pub fn from_json(v: &Value) -> Self {
        let mut g = PlainGraph::default();
        for (id, e) in v["entities"].as_object().expect("entities object") {
            g.nodes.push((
                id.clone(),
                normalize(e["tokens"].as_str().unwrap()),
                short_label(e["label"].as_str().unwrap()),
            ));
            for r in e["relations"].as_array().into_iter().flatten() {
                g.edges.push((
                    id.clone(),
                    r[1].as_str().unwrap().to_string(),
                    r[0].as_str().unwrap().replace(' ', "_"),
                ));
            }
        }
        g
    }

    pub fn from_spec(s: &GraphSpec) -> Self {
        const RELS: [&str; 3] = ["suggestive_of", "located_at", "modify"];
        PlainGraph {
            nodes: s
                .nodes
                .iter()
                .enumerate()
                .map(|(i, &(t, l))| (format!("e{i}"), normalize(TOKEN_POOL[t]), short_label(LABELS[l].0)))
                .collect(),
            edges: s.edges.iter().map(|&(a, b, l)| (format!("e{a}"), format!("e{b}"), RELS[l].to_string())).collect(),
        }
    }

    fn node(&self, id: &str) -> &(String, String, String) {
        self.nodes.iter().find(|n| n.0 == id).expect("endpoint exists")
    }

    fn has_outgoing_identity(&self, tokens: &str, label: &str) -> bool {
        self.edges.iter().any(|(s, _, _)| {
            let n = self.node(s);
            n.1 == tokens && n.2 == label
        })
    }

    fn has_outgoing(&self, id: &str) -> bool {
        self.edges.iter().any(|(s, _, _)| s == id)
    }
}

fn push_unique(out: &mut Vec<Tuple>, t: Tuple) {
    if !out.contains(&t) {
        out.push(t);
    }
}

/// Tuple set of a variant (`"e"`, `"er"` or `"er_bar"`), unsorted.
pub fn tuple_set(g: &PlainGraph, variant: &str) -> Vec<Tuple> {
    let mut out = Vec::new();
    match variant {
        "e" => {
            for (_, t, l) in &g.nodes {
                push_unique(&mut out, vec![t.clone(), l.clone()]);
            }
        }
        "er" => {
            for (_, t, l) in &g.nodes {
                let flag = if g.has_outgoing_identity(t, l) { "1" } else { "0" };
                push_unique(&mut out, vec![t.clone(), l.clone(), flag.to_string()]);
            }
        }
        "er_bar" => {
            for (s, d, r) in &g.edges {
                let src = g.node(s);
                let dst = g.node(d);
                push_unique(&mut out, vec![src.1.clone(), src.2.clone(), dst.1.clone(), r.clone()]);
            }
            for (id, t, l) in &g.nodes {
                if !g.has_outgoing(id) {
                    push_unique(&mut out, vec![t.clone(), l.clone()]);
                }
            }
        }
        other => panic!("unknown variant {other}"),
    }
    out
}

/// `(precision, recall, f1)` of two tuple sets with the empty-set
/// conventions: both empty is (1, 1, 1), one empty is (0, 0, 0).
pub fn set_prf(hyp: &[Tuple], reference: &[Tuple]) -> (f64, f64, f64) {
    if hyp.is_empty() && reference.is_empty() {
        return (1.0, 1.0, 1.0);
    }
    if hyp.is_empty() || reference.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let m = hyp.iter().filter(|t| reference.contains(t)).count() as f64;
    let p = m / hyp.len() as f64;
    let r = m / reference.len() as f64;
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// All n-grams of `tokens` in order, with repeats.
fn ngrams<'a>(tokens: &'a [&'a str], n: usize) -> Vec<&'a [&'a str]> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n).map(|i| &tokens[i..i + n]).collect()
}

fn count(list: &[&[&str]], g: &[&str]) -> usize {
    list.iter().filter(|x| **x == g).count()
}

fn split(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// Corpus BLEU-4 over whitespace-separated token strings.
pub fn bleu4(hyps: &[&str], refs: &[&str]) -> f64 {
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let (mut matched, mut total) = (0usize, 0usize);
        for (h, r) in hyps.iter().zip(refs) {
            let (h, r) = (split(h), split(r));
            let hg = ngrams(&h, n);
            let rg = ngrams(&r, n);
            let mut seen: Vec<&[&str]> = Vec::new();
            for g in &hg {
                if seen.contains(g) {
                    continue;
                }
                seen.push(g);
                matched += count(&hg, g).min(count(&rg, g));
            }
            total += hg.len();
        }
        if matched == 0 || total == 0 {
            return 0.0;
        }
        log_sum += (matched as f64 / total as f64).ln();
    }
    let c: usize = hyps.iter().map(|h| split(h).len()).sum();
    let r: usize = refs.iter().map(|x| split(x).len()).sum();
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * (log_sum / 4.0).exp()
}

/// Longest common subsequence by trying every subsequence of `a`.
/// Exponential; `a` must be short.
pub fn lcs_by_enumeration<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    assert!(a.len() <= 20, "enumeration oracle is for short inputs");
    let is_subsequence = |mask: u32| {
        let mut j = 0;
        for (i, x) in a.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            while j < b.len() && b[j] != *x {
                j += 1;
            }
            if j == b.len() {
                return false;
            }
            j += 1;
        }
        true
    };
    (0..1u32 << a.len()).filter(|&m| is_subsequence(m)).map(|m| m.count_ones() as usize).max().unwrap_or(0)
}

/// ROUGE-L F-measure of one pair from the LCS length.
pub fn rouge_from_lcs(lcs: usize, hyp_len: usize, ref_len: usize, beta: f64) -> f64 {
    if hyp_len == 0 && ref_len == 0 {
        return 1.0;
    }
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / hyp_len as f64;
    let r = lcs as f64 / ref_len as f64;
    let b2 = beta * beta;
    (1.0 + b2) * p * r / (r + b2 * p)
}

pub fn rouge_l_pair(hyp: &str, reference: &str, beta: f64) -> f64 {
    let (h, r) = (split(hyp), split(reference));
    rouge_from_lcs(lcs_by_enumeration(&h, &r), h.len(), r.len(), beta)
}

pub fn rouge_l(hyps: &[&str], refs: &[&str]) -> f64 {
    let s: f64 = hyps.iter().zip(refs).map(|(h, r)| rouge_l_pair(h, r, 1.2)).sum();
    s / hyps.len() as f64
}

/// CIDEr-D with idf from the reference corpus, sigma 6, macro average.
pub fn cider_d(hyps: &[&str], refs: &[&str]) -> f64 {
    let ref_tokens: Vec<Vec<&str>> = refs.iter().map(|r| split(r)).collect();
    let n_refs = refs.len() as f64;
    let df = |g: &[&str]| ref_tokens.iter().filter(|r| ngrams(r, g.len()).contains(&g)).count() as f64;
    let tfidf = |tokens: &[&str], n: usize| -> Vec<(Vec<String>, f64)> {
        let all = ngrams(tokens, n);
        let mut out: Vec<(Vec<String>, f64)> = Vec::new();
        for g in &all {
            let key: Vec<String> = g.iter().map(|s| s.to_string()).collect();
            if out.iter().any(|(k, _)| *k == key) {
                continue;
            }
            let tf = count(&all, g) as f64;
            out.push((key, tf * (n_refs.ln() - df(g).max(1.0).ln())));
        }
        out
    };
    let norm = |v: &[(Vec<String>, f64)]| v.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    let mut total = 0.0;
    for (h, r) in hyps.iter().zip(&ref_tokens) {
        let h = split(h);
        let delta = h.len() as f64 - r.len() as f64;
        let penalty = (-delta * delta / 72.0).exp();
        let mut score = 0.0;
        for n in 1..=4 {
            let vh = tfidf(&h, n);
            let vr = tfidf(r, n);
            let (nh, nr) = (norm(&vh), norm(&vr));
            if nh == 0.0 || nr == 0.0 {
                continue;
            }
            let mut dot = 0.0;
            for (g, wh) in &vh {
                if let Some((_, wr)) = vr.iter().find(|(k, _)| k == g) {
                    dot += wh.min(*wr) * wr;
                }
            }
            score += dot / (nh * nr) * penalty;
        }
        total += score / 4.0 * 10.0;
    }
    total / hyps.len() as f64
}

/// Pooled `(tp, fp, fn)` over examples and classes, where each example
/// lists its positive class names.
pub fn pooled_confusion(hyps: &[Vec<&str>], refs: &[Vec<&str>], classes: &[&str]) -> (usize, usize, usize) {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (h, r) in hyps.iter().zip(refs) {
        for c in classes {
            match (h.contains(c), r.contains(c)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    (tp, fp, fn_)
}

/// F1 from confusion counts; no positives anywhere scores 1.
pub fn f1_from_counts(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp + fp + fn_ == 0 {
        return 1.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
}
