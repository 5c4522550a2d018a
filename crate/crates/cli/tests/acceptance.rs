//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report reads top to bottom; exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use radreward::annotation::{parse_report_annotation, AnnotationGraph, EntityLabel};
use radreward::factual::{
    chexbert_f1, headline_classes, LabelStatus, LabelVector, HEADLINE_OBSERVATIONS, OBSERVATIONS,
};
use radreward::nlg::{bleu4, cider_d, rouge_l, rouge_l_pair, sentence_bleu4, TokenizedText};
use radreward::rewards::RelationScope;
use radreward::rewards::{build_set, corpus_rg, f_score, rg_reward, ScoreSet, SetElement, Variant};
use radreward::scst::{
    curve_to_csv, greedy_sequence, sample_with_rng, scst_gradient, surrogate_gradient, train_scst, CompositeReward,
    RewardFn, ScstConfig, ToyPolicy, ToyTask,
};
use radreward_testkit::gradcheck::{finite_difference, relative_error};
use radreward_testkit::oracle::{self, PlainGraph, Tuple};
use radreward_testkit::{fixture, fixtures_dir, gen, read_fixture, search};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= tol, format!("{what}: got {got}, want {want}"))
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn lobe_json() -> Value {
    serde_json::from_str(&read_fixture("lobe_report.json")).unwrap()
}

fn lobe_report() -> AnnotationGraph {
    parse_report_annotation(&read_fixture("lobe_report.json")).unwrap()
}

fn as_tuples(set: &ScoreSet) -> BTreeSet<Tuple> {
    set.elements()
        .iter()
        .map(|e| match e {
            SetElement::Node { tokens, label } => vec![tokens.clone(), label.short().into()],
            SetElement::Flagged { tokens, label, has_relation } => {
                vec![tokens.clone(), label.short().into(), u8::from(*has_relation).to_string()]
            }
            SetElement::Edge { tokens, label, target, relation } => {
                vec![tokens.clone(), label.short().into(), target.clone(), relation.as_str().into()]
            }
        })
        .collect()
}

fn tuples(rows: &[&[&str]]) -> BTreeSet<Tuple> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = lobe_report();
    let e = tuples(&[
        &["increased", "obs-dp"],
        &["opacity", "obs-dp"],
        &["right", "anat"],
        &["lower", "anat"],
        &["lobe", "anat"],
        &["infection", "obs-dp"],
        &["pneumothorax", "obs-da"],
    ]);
    let er = tuples(&[
        &["increased", "obs-dp", "1"],
        &["opacity", "obs-dp", "1"],
        &["right", "anat", "1"],
        &["lower", "anat", "1"],
        &["lobe", "anat", "0"],
        &["infection", "obs-dp", "0"],
        &["pneumothorax", "obs-da", "0"],
    ]);
    let er_bar = tuples(&[
        &["increased", "obs-dp", "opacity", "modify"],
        &["opacity", "obs-dp", "lobe", "located_at"],
        &["opacity", "obs-dp", "infection", "suggestive_of"],
        &["right", "anat", "lobe", "modify"],
        &["lower", "anat", "lobe", "modify"],
        &["lobe", "anat"],
        &["infection", "obs-dp"],
        &["pneumothorax", "obs-da"],
    ]);
    let mut sizes = Vec::new();
    for (v, want) in [(Variant::E, e), (Variant::Er, er), (Variant::ErBar, er_bar)] {
        let got = as_tuples(&build_set(&g, v));
        ensure(got == want, format!("{v:?} set differs: {got:?}"))?;
        sizes.push(got.len());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("set sizes {sizes:?}, exact"))
}

fn criterion_2() -> Outcome {
    run_property(1000, gen::graph(8), |g| {
        for v in Variant::ALL {
            let s = rg_reward(&g, &g, v);
            prop_assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
            let empty = AnnotationGraph::empty();
            prop_assert_eq!(rg_reward(&empty, &empty, v).f1, 1.0);
            if !g.is_empty() {
                prop_assert_eq!(rg_reward(&empty, &g, v).f1, 0.0);
                prop_assert_eq!(rg_reward(&g, &empty, v).f1, 0.0);
            }
        }
        Ok(())
    })?;
    Ok("1000 random graphs score exactly 1; empty conventions hold".into())
}

fn criterion_3() -> Outcome {
    run_property(1000, (gen::graph(8), gen::graph(8)), |(a, b)| {
        for v in Variant::ALL {
            let ab = rg_reward(&a, &b, v);
            let ba = rg_reward(&b, &a, v);
            prop_assert_eq!(ab.precision, ba.recall);
            prop_assert_eq!(ab.recall, ba.precision);
            prop_assert!((ab.f1 - ba.f1).abs() <= 1e-12);
            for x in [ab.precision, ab.recall, ab.f1] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }
        let e = rg_reward(&a, &b, Variant::E).f1;
        let er = rg_reward(&a, &b, Variant::Er).f1;
        prop_assert!(er <= e + 1e-12, "ER {} > E {}", er, e);
        Ok(())
    })?;
    run_property(1000, gen::graph_with_permutation(8), |(spec, nodes, edges)| {
        let g = spec.build();
        let shuffled = spec.build_ordered(&nodes, &edges);
        for v in Variant::ALL {
            prop_assert_eq!(build_set(&g, v), build_set(&shuffled, v));
        }
        Ok(())
    })?;
    Ok("1000 pairs: symmetry, bounds, ER <= E; 1000 permutations order-insensitive".into())
}

fn lines(rel: &str) -> Vec<TokenizedText> {
    read_fixture(rel).lines().map(TokenizedText::new).collect()
}

fn joined(texts: &[TokenizedText]) -> Vec<String> {
    texts.iter().map(|t| t.tokens().join(" ")).collect()
}

fn criterion_4() -> Outcome {
    const TOL: f64 = 1e-6;
    let reference = build_set(&lobe_report(), Variant::E);
    let mut hyp = ScoreSet::new(Variant::E);
    hyp.insert(SetElement::node("opacity", EntityLabel::ObsDp)).unwrap();
    close(f_score(&hyp, &reference).unwrap().f1, 0.25, TOL, "single node")?;

    let mut deleted = lobe_json();
    deleted["entities"]["1"]["relations"] = serde_json::json!([]);
    let h = parse_report_annotation(&deleted.to_string()).unwrap();
    let got = rg_reward(&h, &lobe_report(), Variant::ErBar).f1;
    let (_, _, want) = oracle::set_prf(
        &oracle::tuple_set(&PlainGraph::from_json(&deleted), "er_bar"),
        &oracle::tuple_set(&PlainGraph::from_json(&lobe_json()), "er_bar"),
    );
    close(got, want, TOL, "deleted relation vs oracle")?;
    close(got, 0.875, TOL, "deleted relation")?;

    let g = lobe_report();
    let c = corpus_rg(&[g.clone(), AnnotationGraph::empty()], &[g.clone(), g], Variant::Er).unwrap();
    close(c.aggregate.f1, 0.5, TOL, "corpus mean")?;

    let b = sentence_bleu4(&TokenizedText::new("a b c d"), &TokenizedText::new("a b c d e"));
    close(b, (-0.25f64).exp(), TOL, "bleu brevity")?;
    close(b, oracle::bleu4(&["a b c d"], &["a b c d e"]), TOL, "bleu oracle")?;
    let r = rouge_l_pair(&["a", "b", "c"], &["a", "c"], 1.2);
    close(r, oracle::rouge_l_pair("a b c", "a c", 1.2), TOL, "rouge oracle")?;
    close(r, 0.829_932, TOL, "rouge")?;

    let (hyps, refs) = (lines("nlg/hyp.txt"), lines("nlg/ref.txt"));
    let (hj, rj) = (joined(&hyps), joined(&refs));
    let hs: Vec<&str> = hj.iter().map(String::as_str).collect();
    let rs: Vec<&str> = rj.iter().map(String::as_str).collect();
    let cider = cider_d(&hyps, &refs).unwrap();
    close(cider, oracle::cider_d(&hs, &rs), TOL, "cider oracle")?;
    close(cider, 4.469_271_471, TOL, "cider frozen")?;
    close(bleu4(&hyps, &refs).unwrap(), oracle::bleu4(&hs, &rs), TOL, "corpus bleu")?;
    close(rouge_l(&hyps, &refs).unwrap(), oracle::rouge_l(&hs, &rs), TOL, "corpus rouge")?;
    Ok(format!("rg 0.25 / 0.875 / 0.5, bleu {b:.6}, rouge {r:.6}, cider {cider:.6}"))
}

fn random_policy(rng: &mut ChaCha8Rng) -> ToyPolicy {
    let v = rng.gen_range(2..7);
    let tau = rng.gen_range(0.5..2.0);
    let max_len = rng.gen_range(1..6);
    let mut p = ToyPolicy::uniform(v, tau, max_len).unwrap();
    for l in p.logits_mut() {
        *l = rng.gen_range(-2.0..2.0);
    }
    p
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let policy = random_policy(&mut rng);
        let traj = sample_with_rng(&policy, &mut rng);
        let advantage = rng.gen_range(-2.0..2.0);
        let analytic = surrogate_gradient(&policy, &traj.steps, advantage);
        let numeric = finite_difference(&policy, &traj, advantage, 1e-5);
        worst = worst.max(relative_error(&analytic.values, &numeric));
    }
    ensure(worst <= 1e-5, format!("worst relative error {worst:e}"))?;
    Ok(format!("100 configs, worst relative error {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let task = ToyTask::bundled(None).unwrap();
    let reward = RewardFn {
        task: &task,
        weights: CompositeReward::default(),
        variant: Variant::Er,
        scope: RelationScope::Outgoing,
    };
    let best = search::branch_and_bound(&reward, 12).value;
    let mut finals = Vec::new();
    for seed in 1..=3 {
        let cfg = ScstConfig { seed, ..Default::default() };
        ensure(cfg.iterations <= 500, "more than 500 iterations")?;
        let out = train_scst(&cfg, &task).unwrap();
        let r = out.final_point().greedy_reward;
        ensure(r >= 0.9 * best, format!("seed {seed}: {r} < 0.9 * {best}"))?;
        finals.push(r);
    }

    let policy = ToyPolicy::uniform(task.vocab.len(), 1.0, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let y = sample_with_rng(&policy, &mut rng);
        let g = greedy_sequence(&policy);
        let grad = scst_gradient(&policy, &y, &g, |_| 0.5);
        ensure(grad.values.iter().all(|&v| v == 0.0), "nonzero gradient at zero advantage")?;
    }

    let cfg = ScstConfig::default();
    let a = curve_to_csv(&train_scst(&cfg, &task).unwrap().curve);
    let b = curve_to_csv(&train_scst(&cfg, &task).unwrap().curve);
    ensure(a == b, "curve differs between runs")?;
    ensure(a == read_fixture("scst/golden_curve.csv"), "curve differs from golden file")?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!(
        "max {best:.4}, seeds 1-3 final {:?}, curve reproducible, {:.1}s",
        finals.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<_>>(),
        elapsed.as_secs_f64()
    ))
}

fn positives(v: &LabelVector) -> Vec<&'static str> {
    (0..14).filter(|&i| v.is_positive(i)).map(|i| OBSERVATIONS[i]).collect()
}

fn label_vector() -> impl Strategy<Value = LabelVector> {
    let status = prop_oneof![
        Just(LabelStatus::Positive),
        Just(LabelStatus::Negative),
        Just(LabelStatus::Uncertain),
        Just(LabelStatus::Unspecified),
    ];
    prop::array::uniform14(status).prop_map(LabelVector)
}

fn criterion_7() -> Outcome {
    let classes = headline_classes();
    let pairs = (1usize..12)
        .prop_flat_map(|n| (prop::collection::vec(label_vector(), n), prop::collection::vec(label_vector(), n)));
    run_property(1000, pairs, |(h, r)| {
        let rep = chexbert_f1(&h, &r, &classes).unwrap();
        let hp: Vec<_> = h.iter().map(positives).collect();
        let rp: Vec<_> = r.iter().map(positives).collect();
        let (tp, fp, fn_) = oracle::pooled_confusion(&hp, &rp, &HEADLINE_OBSERVATIONS);
        prop_assert_eq!((rep.micro_counts.tp, rep.micro_counts.fp, rep.micro_counts.fn_), (tp, fp, fn_));
        prop_assert!((rep.micro.f1 - oracle::f1_from_counts(tp, fp, fn_)).abs() < 1e-12);
        let same = chexbert_f1(&r, &r, &classes).unwrap();
        prop_assert_eq!(same.micro.f1, 1.0);
        Ok(())
    })?;
    let hyp = LabelVector::with_positives(&["Edema"]).unwrap();
    let reference = LabelVector::with_positives(&["Edema", "Atelectasis"]).unwrap();
    let f = chexbert_f1(&[hyp], &[reference], &classes).unwrap().micro.f1;
    close(f, 2.0 / 3.0, 1e-12, "edema pair")?;
    Ok(format!("1000 corpora match pooled counts; pair {f:.6}; identity 1"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_radreward"))
        .args(args)
        .current_dir(fixtures_dir())
        .output()
        .expect("spawn radreward");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn json(run: &Run) -> Result<Value, String> {
    serde_json::from_str(&run.stdout).map_err(|e| format!("bad JSON ({e}): {}", run.stderr))
}

fn expect_code(args: &[&str], code: i32) -> Result<Run, String> {
    let run = cli(args);
    ensure(run.code == code, format!("{args:?}: exit {} (want {code}); stderr: {}", run.code, run.stderr.trim()))?;
    Ok(run)
}

fn rows(report: &Value) -> usize {
    report["per_example"].as_array().map_or(0, Vec::len)
}

/// Per-id ER scores straight from the oracle, reading both files by id.
fn oracle_rg_by_id(hyp: &str, reference: &str, variant: &str) -> BTreeMap<String, f64> {
    let by_id = |rel: &str| -> BTreeMap<String, Value> {
        read_fixture(rel)
            .lines()
            .map(|l| serde_json::from_str::<Value>(l).unwrap())
            .map(|v| (v["id"].as_str().unwrap().to_string(), v))
            .collect()
    };
    let refs = by_id(reference);
    by_id(hyp)
        .into_iter()
        .map(|(id, h)| {
            let r = &refs[&id];
            let (_, _, f) = oracle::set_prf(
                &oracle::tuple_set(&PlainGraph::from_json(&h), variant),
                &oracle::tuple_set(&PlainGraph::from_json(r), variant),
            );
            (id, f)
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let rg = ["score-rg", "--hyp", "rg/hyp.jsonl", "--ref", "rg/ref.jsonl"];
    let nlg = ["score-nlg", "--hyp", "nlg/hyp.txt", "--ref", "nlg/ref.txt"];
    let chex = ["chexbert-f1", "--hyp", "chexbert/hyp.csv", "--ref", "chexbert/ref.csv"];
    let ent = ["entity-f1", "--hyp", "entities/hyp.jsonl", "--ref", "entities/ref.jsonl"];
    let with = |base: &[&'static str], extra: &[&'static str]| -> Vec<&'static str> {
        base.iter().chain(extra).copied().collect()
    };

    // success paths and id alignment against the oracle
    let report = json(&expect_code(&with(&rg, &["--per-example"]), 0)?)?;
    ensure(rows(&report) == 4, "score-rg rows")?;
    let want = oracle_rg_by_id("rg/hyp.jsonl", "rg/ref.jsonl", "er");
    for row in report["per_example"].as_array().unwrap() {
        let id = row["id"].as_str().unwrap();
        let got = row["rg_er"]["f1"].as_f64().unwrap();
        close(got, want[id], 1e-12, &format!("aligned {id}"))?;
    }
    let order: Vec<&str> =
        report["per_example"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    ensure(order == ["r1", "r2", "r3", "r4"], format!("row order {order:?}"))?;
    let serial = expect_code(&with(&rg, &["--per-example", "--jobs", "1"]), 0)?.stdout;
    let parallel = expect_code(&with(&rg, &["--per-example", "--jobs", "4"]), 0)?.stdout;
    ensure(serial == parallel, "--jobs changes output")?;

    let same = json(&expect_code(&["score-rg", "--hyp", "rg/ref.jsonl", "--ref", "rg/ref.jsonl"], 0)?)?;
    for m in ["rg_e", "rg_er", "rg_er_bar"] {
        ensure(same["metrics"][m]["f1"] == 1.0, format!("identity {m}"))?;
    }
    let same = json(&expect_code(&["score-nlg", "--hyp", "nlg/ref.txt", "--ref", "nlg/ref.txt"], 0)?)?;
    close(same["metrics"]["bleu4"].as_f64().unwrap(), 1.0, 1e-12, "identity bleu")?;
    close(same["metrics"]["rougel"].as_f64().unwrap(), 1.0, 1e-12, "identity rouge")?;
    close(same["metrics"]["ciderd"].as_f64().unwrap(), 10.0, 1e-9, "identity cider")?;

    ensure(rows(&json(&expect_code(&with(&nlg, &["--per-example"]), 0)?)?) == 3, "score-nlg rows")?;
    let pair =
        json(&expect_code(&["chexbert-f1", "--hyp", "chexbert/pair_hyp.csv", "--ref", "chexbert/pair_ref.csv"], 0)?)?;
    close(pair["metrics"]["chexbert_micro"]["score"]["f1"].as_f64().unwrap(), 2.0 / 3.0, 1e-12, "cli pair")?;
    ensure(rows(&json(&expect_code(&with(&chex, &["--per-example"]), 0)?)?) == 4, "chexbert rows")?;
    ensure(rows(&json(&expect_code(&with(&ent, &["--per-example"]), 0)?)?) == 3, "entity rows")?;

    // failure matrix
    expect_code(&["score-rg", "--hyp", "rg/hyp.jsonl", "--ref", "rg/ref_missing.jsonl"], 2)?;
    expect_code(&["score-nlg", "--hyp", "nlg/hyp.txt", "--ref", "nlg/short.txt"], 2)?;
    expect_code(&["entity-f1", "--hyp", "entities/dup.jsonl", "--ref", "entities/ref.jsonl"], 2)?;
    let bad = expect_code(&["score-rg", "--hyp", "rg/malformed.jsonl", "--ref", "rg/ref.jsonl"], 3)?;
    ensure(bad.stderr.contains("malformed.jsonl:2"), format!("no line number: {}", bad.stderr))?;
    expect_code(&["chexbert-f1", "--hyp", "chexbert/malformed.csv", "--ref", "chexbert/ref.csv"], 3)?;
    expect_code(&["scst-demo", "--config", "scst/bad.toml"], 3)?;
    expect_code(&with(&rg, &["--variants", "e,xx"]), 4)?;
    expect_code(&with(&chex, &["--classes", "Bogus"]), 4)?;
    expect_code(&["no-such-command"], 4)?;

    // curve file is byte-identical to the golden copy
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let curve = dir.path().join("curve.csv");
    expect_code(&["scst-demo", "--config", "scst/demo.toml", "--out", curve.to_str().unwrap()], 0)?;
    let got = std::fs::read(&curve).map_err(|e| e.to_string())?;
    let golden = std::fs::read(fixture("scst/golden_curve.csv")).map_err(|e| e.to_string())?;
    ensure(got == golden, "scst-demo curve differs from golden file")?;
    Ok("exit codes 0/2/3/4, id alignment, row counts, golden curve".into())
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("lobe report tuple sets", criterion_1),
        ("identity and empty conventions", criterion_2),
        ("pair properties", criterion_3),
        ("reference values", criterion_4),
        ("gradient check", criterion_5),
        ("toy training", criterion_6),
        ("label F1", criterion_7),
        ("command line", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
