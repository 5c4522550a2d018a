use proptest::prelude::*;
use radreward::nlg::{
    bleu4, cider_d, lcs_len, rouge_l, rouge_l_pair, rouge_l_with_beta, sentence_bleu4, CiderD, NlgError, TokenizedText,
};
use radreward_testkit::{oracle, read_fixture};

fn corpus(lines: &[&str]) -> Vec<TokenizedText> {
    lines.iter().map(|l| TokenizedText::new(l)).collect()
}

fn fixture_lines(rel: &str) -> Vec<String> {
    read_fixture(rel).lines().map(str::to_string).collect()
}

/// Fixture texts as tokenized strings joined by single spaces, the input
/// format of the oracles.
fn joined(texts: &[TokenizedText]) -> Vec<String> {
    texts.iter().map(|t| t.tokens().join(" ")).collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

// Values produced by the brute-force oracles on fixtures/nlg, frozen.
const FIXTURE_BLEU4: f64 = 0.375_729_996_892;
const FIXTURE_ROUGE_L: f64 = 0.737_157_869_013;
const FIXTURE_CIDER_D: f64 = 4.469_271_471_010;

#[test]
fn tokenizer() {
    assert_eq!(TokenizedText::new("Mild  edema, LEFT base.").tokens(), ["mild", "edema", ",", "left", "base", "."]);
    assert!(TokenizedText::new("   ").is_empty());
}

#[test]
fn bleu_examples() {
    let s = sentence_bleu4(&TokenizedText::new("a b c d"), &TokenizedText::new("a b c d e"));
    assert!((s - (-0.25f64).exp()).abs() < 1e-12);
    assert!((s - oracle::bleu4(&["a b c d"], &["a b c d e"])).abs() < 1e-12);
    assert_eq!(sentence_bleu4(&TokenizedText::new("the cat sat"), &TokenizedText::new("the dog sat")), 0.0);
    assert_eq!(oracle::bleu4(&["the cat sat"], &["the dog sat"]), 0.0);
    let refs = corpus(&["a b c d e", "no acute findings ."]);
    assert_eq!(bleu4(&refs, &refs).unwrap(), 1.0);
}

#[test]
fn rouge_examples() {
    let s = rouge_l_pair(&["a", "b", "c"], &["a", "c"], 1.2);
    let o = oracle::rouge_l_pair("a b c", "a c", 1.2);
    assert!((s - o).abs() < 1e-12);
    // P = 2/3, R = 1: (1 + 1.44)(2/3) / (1 + 1.44 * 2/3) = 1.626667 / 1.96
    assert!((s - 0.829_931_972_789_115_6).abs() < 1e-12);
    assert_eq!(rouge_l_pair(&["a", "b"], &["c", "d"], 1.2), 0.0);
    let refs = corpus(&["a b c", "d e"]);
    assert_eq!(rouge_l(&refs, &refs).unwrap(), 1.0);
}

#[test]
fn rouge_beta_one_is_harmonic_mean() {
    let h = corpus(&["a b c d e"]);
    let r = corpus(&["a c e f"]);
    let (p, rc) = (3.0 / 5.0, 3.0 / 4.0);
    let f = rouge_l_with_beta(&h, &r, 1.0).unwrap();
    assert!((f - 2.0 * p * rc / (p + rc)).abs() < 1e-12);
}

#[test]
fn cider_examples() {
    let refs = corpus(&["heart size is normal", "no pleural effusion seen", "right lower lobe opacity"]);
    assert!((cider_d(&refs, &refs).unwrap() - 10.0).abs() < 1e-9);
    // a reference with no 4-gram gets nothing from that order
    let short = corpus(&["heart size is normal", "no effusion", "right lower lobe opacity"]);
    let s = CiderD::new(&short).per_example(&short, &short);
    assert!((s[1] - 5.0).abs() < 1e-9);
    let disjoint = corpus(&["x y z", "p q", "u v w"]);
    assert_eq!(cider_d(&disjoint, &refs).unwrap(), 0.0);
    let r = joined(&refs);
    assert!((oracle::cider_d(&strs(&r), &strs(&r)) - 10.0).abs() < 1e-9);
}

#[test]
fn errors() {
    let a = corpus(&["a"]);
    assert_eq!(bleu4(&a, &[]), Err(NlgError::LengthMismatch { hyps: 1, refs: 0 }));
    assert_eq!(rouge_l(&[], &[]), Err(NlgError::EmptyCorpus));
    assert_eq!(cider_d(&[], &[]), Err(NlgError::EmptyCorpus));
}

#[test]
fn fixture_against_oracles() {
    let hyps = corpus(&strs(&fixture_lines("nlg/hyp.txt")));
    let refs = corpus(&strs(&fixture_lines("nlg/ref.txt")));
    assert_eq!(hyps.len(), 3);
    let (h, r) = (joined(&hyps), joined(&refs));
    let (h, r) = (strs(&h), strs(&r));
    let ob = oracle::bleu4(&h, &r);
    let or = oracle::rouge_l(&h, &r);
    let oc = oracle::cider_d(&h, &r);
    assert!((bleu4(&hyps, &refs).unwrap() - ob).abs() < 1e-9);
    assert!((rouge_l(&hyps, &refs).unwrap() - or).abs() < 1e-9);
    assert!((cider_d(&hyps, &refs).unwrap() - oc).abs() < 1e-9);
    assert!((ob - FIXTURE_BLEU4).abs() < 1e-9);
    assert!((or - FIXTURE_ROUGE_L).abs() < 1e-9);
    assert!((oc - FIXTURE_CIDER_D).abs() < 1e-9);
}

fn sentence() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..6, 0..9)
}

fn words(ids: &[u8], names: &[&str]) -> String {
    ids.iter().map(|&i| names[i as usize]).collect::<Vec<_>>().join(" ")
}

const NAMES: [&str; 6] = ["opacity", "lobe", "no", "effusion", "right", "."];
const RENAMED: [&str; 6] = ["w1", "w2", "w3", "w4", "w5", "w6"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bleu_matches_oracle(pairs in prop::collection::vec((sentence(), sentence()), 1..5)) {
        let h: Vec<String> = pairs.iter().map(|(a, _)| words(a, &NAMES)).collect();
        let r: Vec<String> = pairs.iter().map(|(_, b)| words(b, &NAMES)).collect();
        let lib = bleu4(&corpus(&strs(&h)), &corpus(&strs(&r))).unwrap();
        prop_assert!((lib - oracle::bleu4(&strs(&h), &strs(&r))).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&lib));
    }

    #[test]
    fn bleu_invariant_under_relabeling(pairs in prop::collection::vec((sentence(), sentence()), 1..5)) {
        let score = |names: &[&str]| {
            let h: Vec<String> = pairs.iter().map(|(a, _)| words(a, names)).collect();
            let r: Vec<String> = pairs.iter().map(|(_, b)| words(b, names)).collect();
            bleu4(&corpus(&strs(&h)), &corpus(&strs(&r))).unwrap()
        };
        prop_assert_eq!(score(&NAMES), score(&RENAMED));
    }

    #[test]
    fn lcs_matches_enumeration(a in sentence(), b in sentence()) {
        prop_assert_eq!(lcs_len(&a, &b), oracle::lcs_by_enumeration(&a, &b));
        let f = rouge_l_pair(&a, &b, 1.2);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert_eq!(rouge_l_pair(&a, &a, 1.2), 1.0);
    }

    #[test]
    fn cider_matches_oracle_and_ignores_order(
        pairs in prop::collection::vec((sentence(), sentence()), 1..5),
        rotate in 0usize..5,
    ) {
        let h: Vec<String> = pairs.iter().map(|(a, _)| words(a, &NAMES)).collect();
        let r: Vec<String> = pairs.iter().map(|(_, b)| words(b, &NAMES)).collect();
        let (hc, rc) = (corpus(&strs(&h)), corpus(&strs(&r)));
        let lib = cider_d(&hc, &rc).unwrap();
        prop_assert!((lib - oracle::cider_d(&strs(&h), &strs(&r))).abs() < 1e-9);
        prop_assert!((0.0..=10.0 + 1e-9).contains(&lib));
        let k = rotate % h.len();
        let (mut h2, mut r2) = (hc.clone(), rc.clone());
        h2.rotate_left(k);
        r2.rotate_left(k);
        h2.reverse();
        r2.reverse();
        prop_assert!((cider_d(&h2, &r2).unwrap() - lib).abs() < 1e-12);
    }
}

#[test]
fn cider_doc_freq_counts_each_reference_once() {
    let refs = corpus(&["no no effusion", "no pneumothorax"]);
    let scorer = CiderD::new(&refs);
    assert_eq!(scorer.doc_freq(&["no".to_string()]), 2);
    assert_eq!(scorer.doc_freq(&["no".to_string(), "no".to_string()]), 1);
}
