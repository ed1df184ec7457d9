//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use botaug::augment::{
    augment_dataset, label_entities, levenshtein, replace_synonyms, AugmentConfig, CandidateQuery, CandidateStatus,
    Derivation,
};
use botaug::corpus::{
    from_json_str, from_tsv_str, load_dataset, to_json_string, to_tsv_string, Origin, Query, TrainingSet,
};
use botaug::eval::{
    confidence_split, evaluate_with_predictions, mann_whitney_u, metrics_from_labels, pct_improvement, pct_optimal,
    run_experiments_detailed, train_classifier, Arm, ExperimentConfig, MwuMode, DEFAULT_TEMPERATURE,
};
use botaug::paraphrase::{NoProvider, RuleProvider, ScriptedProvider};
use botaug::textproc::{tokenize, PosTag};
use botaug::thesaurus::{load_embeddings, EmbeddingFormat, StaticThesaurus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const ROOT: &str = env!("CARGO_MANIFEST_DIR");

fn set(rows: &[(&str, &str)]) -> TrainingSet {
    TrainingSet::from_queries(rows.iter().map(|(i, m)| Query::from_markup(*i, m).unwrap())).unwrap()
}

// ---------------------------------------------------------------------------
// 1. Improvement / optimal arithmetic against the published table.

struct Row {
    name: &'static str,
    base: f64,
    aug: f64,
    aug_imp: f64,
    optimal: Option<f64>,
    human: f64,
    human_imp: f64,
}

const TABLE: &[Row] = &[
    Row {
        name: "Repository One",
        base: 43.7,
        aug: 44.7,
        aug_imp: 2.3,
        optimal: Some(6.9),
        human: 58.1,
        human_imp: 33.0,
    },
    Row {
        name: "Repository Three",
        base: 62.8,
        aug: 64.3,
        aug_imp: 2.4,
        optimal: Some(34.1),
        human: 67.2,
        human_imp: 7.0,
    },
    Row {
        name: "Repository Five",
        base: 66.4,
        aug: 68.5,
        aug_imp: 3.2,
        optimal: Some(60.0),
        human: 69.9,
        human_imp: 5.3,
    },
    Row {
        name: "Ask Ubuntu One",
        base: 71.6,
        aug: 73.5,
        aug_imp: 2.7,
        optimal: Some(17.3),
        human: 82.6,
        human_imp: 15.4,
    },
    Row {
        name: "Ask Ubuntu Three",
        base: 84.1,
        aug: 83.6,
        aug_imp: -0.6,
        optimal: None,
        human: 90.4,
        human_imp: 7.5,
    },
    Row {
        name: "Ask Ubuntu Five",
        base: 87.1,
        aug: 84.2,
        aug_imp: -3.3,
        optimal: None,
        human: 90.2,
        human_imp: 3.6,
    },
    Row {
        name: "Stack Overflow One",
        base: 32.0,
        aug: 32.2,
        aug_imp: 0.6,
        optimal: Some(2.5),
        human: 40.0,
        human_imp: 25.0,
    },
    Row {
        name: "Stack Overflow Three",
        base: 36.9,
        aug: 37.9,
        aug_imp: 2.7,
        optimal: Some(12.3),
        human: 45.0,
        human_imp: 22.0,
    },
];

fn metric_arithmetic() -> Outcome {
    let imp = pct_improvement(68.5, 66.4).unwrap();
    ensure!((imp - 3.2).abs() <= 0.05, "Repository Five improvement {imp}");
    let human = pct_improvement(69.9, 66.4).unwrap();
    let opt = pct_optimal(imp, human).unwrap();
    ensure!((opt - 60.0).abs() <= 0.5, "Repository Five optimal {opt}");
    let neg = pct_improvement(84.2, 87.1).unwrap();
    ensure!((neg + 3.3).abs() <= 0.05, "Ask Ubuntu Five improvement {neg}");
    let rounded = pct_optimal(2.4, 7.0).unwrap();
    ensure!(
        (rounded - 34.1).abs() <= 0.5,
        "Repository Three optimal from rounded cells {rounded}"
    );

    let mut worst: f64 = 0.0;
    for r in TABLE {
        let a = pct_improvement(r.aug, r.base).unwrap();
        let h = pct_improvement(r.human, r.base).unwrap();
        worst = worst.max((a - r.aug_imp).abs()).max((h - r.human_imp).abs());
        ensure!(
            (a - r.aug_imp).abs() <= 0.5,
            "{}: augmented improvement {a:.3} vs {}",
            r.name,
            r.aug_imp
        );
        ensure!(
            (h - r.human_imp).abs() <= 0.5,
            "{}: human improvement {h:.3} vs {}",
            r.name,
            r.human_imp
        );
        match (pct_optimal(a, h), r.optimal) {
            (Some(o), Some(expected)) => {
                ensure!((o - expected).abs() <= 0.5, "{}: optimal {o:.3} vs {expected}", r.name)
            }
            (None, None) => {}
            (got, expected) => return Err(format!("{}: optimal {got:?} vs {expected:?}", r.name)),
        }
    }
    Ok(format!("8 augmented + 8 human cells, max deviation {worst:.3}"))
}

// ---------------------------------------------------------------------------
// 2. Weighted F1 against a dense confusion-matrix oracle.

fn oracle_weighted_f1(truth: &[usize], pred: &[usize], k: usize) -> (f64, Vec<f64>) {
    let mut m = vec![vec![0u32; k]; k];
    for (&t, &p) in truth.iter().zip(pred) {
        m[t][p] += 1;
    }
    let mut per = vec![0.0; k];
    let mut weighted = 0.0;
    for c in 0..k {
        let tp = m[c][c] as f64;
        let row: u32 = m[c].iter().sum();
        let col: u32 = (0..k).map(|r| m[r][c]).sum();
        let p = if col == 0 { 0.0 } else { tp / col as f64 };
        let r = if row == 0 { 0.0 } else { tp / row as f64 };
        let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        per[c] = 100.0 * f;
        weighted += row as f64 * f;
    }
    (100.0 * weighted / truth.len() as f64, per)
}

fn weighted_f1_oracle() -> Outcome {
    let names = ["A", "B", "C", "D", "E", "F"];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let k = rng.gen_range(2..=6);
        let n = rng.gen_range(1..=40);
        let truth: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let pred: Vec<usize> = truth
            .iter()
            .map(|&t| if rng.gen_bool(0.6) { t } else { rng.gen_range(0..k) })
            .collect();
        let (want, per) = oracle_weighted_f1(&truth, &pred, k);
        let got = metrics_from_labels(truth.iter().zip(&pred).map(|(&t, &p)| (names[t], names[p])));
        ensure!(
            format!("{:.9}", got.weighted_f1) == format!("{want:.9}"),
            "case {case}: {} vs {want}",
            got.weighted_f1
        );
        for (c, f) in per.iter().enumerate() {
            let reported = got.per_intent.get(names[c]).map_or(0.0, |m| m.f1);
            ensure!(
                format!("{reported:.9}") == format!("{f:.9}"),
                "case {case}: F1({}) {reported} vs {f}",
                names[c]
            );
        }
    }

    // The same oracle on a real model's predictions.
    let train = load_dataset(format!("{ROOT}/fixtures/repository_train.tsv")).unwrap();
    let test = load_dataset(format!("{ROOT}/fixtures/repository_test.tsv")).unwrap();
    let model = train_classifier(&train, DEFAULT_TEMPERATURE).unwrap();
    let (report, preds) = evaluate_with_predictions(&model, &test);
    let index: BTreeMap<&str, usize> = model
        .intents()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let truth: Vec<usize> = preds.iter().map(|(t, _)| index[t.as_str()]).collect();
    let pred: Vec<usize> = preds.iter().map(|(_, p)| index[p.intent.as_str()]).collect();
    let (want, _) = oracle_weighted_f1(&truth, &pred, index.len());
    ensure!(
        format!("{:.9}", report.weighted_f1) == format!("{want:.9}"),
        "fixture evaluate {} vs {want}",
        report.weighted_f1
    );
    Ok("1000 random fixtures + 1 trained model, equal to 9 decimals".into())
}

// ---------------------------------------------------------------------------
// 3. Levenshtein metric laws against a full-matrix DP.

fn matrix_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        d[i][0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn random_string(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: &[char] = &['a', 'b', 'c', 'd', ' ', 'é', '?', 'A'];
    let len = rng.gen_range(0..=14);
    (0..len).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
}

fn levenshtein_laws() -> Outcome {
    ensure!(levenshtein("kitten", "sitting") == 3, "kitten/sitting");
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..10_000 {
        let (a, b, c) = (
            random_string(&mut rng),
            random_string(&mut rng),
            random_string(&mut rng),
        );
        let ab = levenshtein(&a, &b);
        ensure!(ab == matrix_levenshtein(&a, &b), "pair {i}: {a:?} {b:?}");
        ensure!(ab == levenshtein(&b, &a), "symmetry {a:?} {b:?}");
        ensure!((ab == 0) == (a == b), "identity {a:?} {b:?}");
        ensure!(
            levenshtein(&a, &c) <= ab + levenshtein(&b, &c),
            "triangle {a:?} {b:?} {c:?}"
        );
        let (la, lb) = (a.chars().count(), b.chars().count());
        ensure!(la.abs_diff(lb) <= ab && ab <= la.max(lb), "length bounds {a:?} {b:?}");
    }
    Ok("10000 random pairs; kitten/sitting = 3".into())
}

// ---------------------------------------------------------------------------
// 4. Replaying the two-query working example.

fn working_example() -> Outcome {
    let scenario = set(&[
        ("BuggyFiles", "What files cause the most issues?"),
        ("BuggyFiles", "What files contain the most issues?"),
    ]);
    let thesaurus = StaticThesaurus::new().with("cause", &["induce", "generate"]);
    let (augmented, report) =
        augment_dataset(&scenario, &thesaurus, &NoProvider, &AugmentConfig::default()).map_err(|e| e.to_string())?;
    let candidates = &report.intents[0].candidates;
    let texts: BTreeSet<&str> = candidates.iter().map(|c| c.text.as_str()).collect();
    ensure!(candidates.len() == 2, "expected 2 candidates, got {texts:?}");
    ensure!(
        texts.contains("What files induce the most issues?"),
        "missing induce candidate: {texts:?}"
    );

    let selected: Vec<_> = candidates
        .iter()
        .filter(|c| c.status == CandidateStatus::Selected)
        .collect();
    ensure!(selected.len() == 1, "one selection expected");
    let best = candidates.iter().filter_map(|c| c.min_distance).max().unwrap();
    for s in &selected {
        for other in candidates
            .iter()
            .filter(|c| !matches!(c.status, CandidateStatus::Rejected(_)))
        {
            ensure!(
                s.min_distance >= other.min_distance,
                "dominance violated by {:?}",
                other.text
            );
        }
    }
    ensure!(
        selected[0].min_distance == Some(best),
        "selected is not the max-min-distance candidate"
    );
    ensure!(augmented.len() == 3, "augmented size {}", augmented.len());
    Ok(format!("selected {:?} at min distance {best}", selected[0].text))
}

// ---------------------------------------------------------------------------
// 5. Candidate counts for every synonym-count profile with t <= 3, s_i <= 3.

fn combinatorics() -> Outcome {
    let words = ["alpha", "beta", "gamma"];
    let mut cases = 0;
    for t in 1..=3usize {
        for code in 0..4usize.pow(t as u32) {
            let counts: Vec<usize> = (0..t).map(|i| (code / 4usize.pow(i as u32)) % 4).collect();
            let mut thesaurus = StaticThesaurus::new();
            let mut options: Vec<Vec<String>> = Vec::new();
            for (i, &s) in counts.iter().enumerate() {
                let syns: Vec<String> = (0..s).map(|j| format!("{}syn{j}", words[i])).collect();
                let refs: Vec<&str> = syns.iter().map(String::as_str).collect();
                if s > 0 {
                    thesaurus = thesaurus.with(words[i], &refs);
                }
                let mut opts = vec![words[i].to_string()];
                opts.extend(syns);
                options.push(opts);
            }
            let text = format!("please {} now", words[..t].join(" "));
            let query = Query::new(text.clone(), "X", vec![], Origin::Original).unwrap();
            let mut tokens = tokenize(&text, &[]);
            for tok in tokens.iter_mut() {
                tok.pos = if words.contains(&tok.text.as_str()) {
                    PosTag::Verb
                } else {
                    PosTag::Other
                };
            }
            let config = AugmentConfig {
                max_candidates_per_query: 1000,
                ..Default::default()
            };
            let got: Vec<String> = replace_synonyms(&query, 0, &tokens, &thesaurus, &config)
                .into_iter()
                .map(|c| c.text)
                .collect();

            let expect_count = counts.iter().map(|s| 1 + s).product::<usize>() - 1;
            ensure!(
                got.len() == expect_count,
                "counts {counts:?}: {} candidates, expected {expect_count}",
                got.len()
            );

            // Cartesian product, excluding the untouched query.
            let mut expected: BTreeSet<String> = BTreeSet::from([String::new()]);
            for opts in &options {
                expected = expected
                    .iter()
                    .flat_map(|prefix| {
                        opts.iter().map(move |o| {
                            if prefix.is_empty() {
                                o.clone()
                            } else {
                                format!("{prefix} {o}")
                            }
                        })
                    })
                    .collect();
            }
            let expected: BTreeSet<String> = expected
                .into_iter()
                .map(|m| format!("please {m} now"))
                .filter(|s| *s != text)
                .collect();
            let got_set: BTreeSet<String> = got.into_iter().collect();
            ensure!(got_set == expected, "counts {counts:?}: candidate texts differ");
            cases += 1;
        }
    }
    Ok(format!("{cases} synonym-count profiles"))
}

// ---------------------------------------------------------------------------
// 6. Entity re-labeling.

fn entity_labeling() -> Outcome {
    let source = Query::from_markup(
        "FileCommits",
        "Show me the commits that touched [ConsumerRecords](FileName)",
    )
    .unwrap();
    let candidate = CandidateQuery {
        text: "Which commits changed Consumer Records recently?".into(),
        intent: "FileCommits".into(),
        derivation: Derivation {
            source_index: 0,
            source_text: source.text.clone(),
            replacements: vec![],
            provider: Some("scripted".into()),
        },
        min_distance: None,
    };
    let labeled = label_entities(&candidate, &source, &[]).map_err(|e| e.to_string())?;
    ensure!(labeled.entities.len() == 1, "no entity found");
    let e = &labeled.entities[0];
    ensure!(
        e.value == "Consumer Records" && e.entity_type == "FileName",
        "labeled {e:?}"
    );
    ensure!(e.start == 22 && e.end == 38, "offsets {}..{}", e.start, e.end);

    // End to end: the most distant candidate loses the bug id and must give
    // way to the next one.
    let scenario = set(&[
        ("FixCommit", "Which commit fixed bug [5391](BugId)?"),
        ("Other", "Hello there"),
    ]);
    let thesaurus = StaticThesaurus::new().with("fixed", &["repaired"]);
    let provider = ScriptedProvider::new("scripted").with(
        "Which commit repaired bug 5391?",
        &["Tell me about the repair history of this whole repository please"],
    );
    let (augmented, report) =
        augment_dataset(&scenario, &thesaurus, &provider, &AugmentConfig::default()).map_err(|e| e.to_string())?;
    let intent = report.intents.iter().find(|i| i.intent == "FixCommit").unwrap();
    let first = &intent
        .candidates
        .iter()
        .find(|c| c.status != CandidateStatus::Discarded("below the top N".into()))
        .unwrap();
    ensure!(
        first.status == CandidateStatus::Rejected("missing entity BugId".into()),
        "top candidate status {:?}",
        first.status
    );
    let added: Vec<&Query> = augmented
        .queries("FixCommit")
        .iter()
        .filter(|q| q.origin != Origin::Original)
        .collect();
    ensure!(added.len() == 1, "expected one promoted query");
    ensure!(
        added[0].text == "Which commit repaired bug 5391?",
        "promoted {:?}",
        added[0].text
    );
    ensure!(
        added[0].entities.len() == 1 && added[0].entities[0].value == "5391",
        "promoted entities {:?}",
        added[0].entities
    );
    Ok("fuzzy match at 22..38; rejected candidate replaced by the next-ranked one".into())
}

// ---------------------------------------------------------------------------
// 7. Exact Mann-Whitney against enumeration.

fn subsets(n_total: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(start: usize, n_total: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n_total - left {
            cur.push(i);
            go(i + 1, n_total, left - 1, cur, out);
            cur.pop();
        }
    }
    go(0, n_total, n, &mut Vec::new(), &mut out);
    out
}

/// Two-sided permutation p-value by brute force over all labelings, using
/// pairwise comparisons rather than ranks.
fn enumerated_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (n, m) = (a.len(), b.len());
    let u_of = |first: &[usize]| -> f64 {
        let in_first: BTreeSet<usize> = first.iter().copied().collect();
        let mut u = 0.0;
        for &i in first {
            for j in (0..pooled.len()).filter(|j| !in_first.contains(j)) {
                u += if pooled[i] > pooled[j] {
                    1.0
                } else if pooled[i] == pooled[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
        u
    };
    let centre = (n * m) as f64 / 2.0;
    let observed = (u_of(&(0..n).collect::<Vec<_>>()) - centre).abs();
    let all = subsets(n + m, n);
    let extreme = all
        .iter()
        .filter(|s| (u_of(s) - centre).abs() >= observed - 1e-9)
        .count();
    extreme as f64 / all.len() as f64
}

fn exact_mann_whitney() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for n in 1..=6 {
        for m in 1..=6 {
            for trial in 0..3 {
                // Distinct values: a random interleaving of 0..n+m.
                let mut values: Vec<f64> = (0..n + m).map(|v| v as f64).collect();
                for i in (1..values.len()).rev() {
                    values.swap(i, rng.gen_range(0..=i));
                }
                let (a, b) = values.split_at(n);
                let got = mann_whitney_u(a, b, MwuMode::Exact);
                let want = enumerated_p(a, b);
                ensure!(got.exact, "n={n} m={m}: not exact");
                ensure!(
                    (got.p_two_sided - want).abs() <= 1e-12,
                    "n={n} m={m} trial {trial}: {} vs {want}",
                    got.p_two_sided
                );

                // Coarse values to force ties through the enumeration path.
                let a: Vec<f64> = a.iter().map(|v| (v / 3.0).floor()).collect();
                let b: Vec<f64> = b.iter().map(|v| (v / 3.0).floor()).collect();
                let got = mann_whitney_u(&a, &b, MwuMode::Exact);
                let want = enumerated_p(&a, &b);
                ensure!(
                    (got.p_two_sided - want).abs() <= 1e-12,
                    "ties n={n} m={m}: {} vs {want}",
                    got.p_two_sided
                );
                checked += 2;
            }
        }
    }
    for x in [vec![1.0], vec![0.3, 0.7, 0.9], vec![5.0, 5.0, 6.0, 1.0, 2.0, 3.0]] {
        for mode in [MwuMode::Exact, MwuMode::Approx, MwuMode::Auto] {
            let p = mann_whitney_u(&x, &x, mode).p_two_sided;
            ensure!(p == 1.0, "identical samples {x:?} under {mode:?}: p = {p}");
        }
    }
    Ok(format!(
        "{checked} samples for n, m in 1..=6 within 1e-12; identical samples give p = 1"
    ))
}

// ---------------------------------------------------------------------------
// 8. Experiment determinism and structure.

fn experiment_determinism() -> Outcome {
    let train = load_dataset(format!("{ROOT}/fixtures/repository_train.tsv")).unwrap();
    let test = load_dataset(format!("{ROOT}/fixtures/repository_test.tsv")).unwrap();
    let table = load_embeddings(format!("{ROOT}/data/se_mini.vec"), EmbeddingFormat::Text).unwrap();
    let config = ExperimentConfig {
        scenarios: vec![1, 3],
        repeats: 10,
        seed: 7,
        ..Default::default()
    };
    let (first, details) =
        run_experiments_detailed(&train, &test, &table, &RuleProvider, &config).map_err(|e| e.to_string())?;
    let (second, _) =
        run_experiments_detailed(&train, &test, &table, &RuleProvider, &config).map_err(|e| e.to_string())?;
    ensure!(
        first.to_csv().as_bytes() == second.to_csv().as_bytes(),
        "tables differ between runs"
    );
    ensure!(first.to_json() == second.to_json(), "reports differ between runs");
    ensure!(first.scenarios.len() == 2, "expected 2 scenario blocks");

    let intents = train.num_intents();
    for s in &first.scenarios {
        ensure!(s.arms.len() == 3, "k={}: {} arms", s.k, s.arms.len());
        for r in &s.arm(Arm::Human).runs {
            ensure!(
                r.train_size == s.k * intents + intents,
                "k={}: human size {}",
                s.k,
                r.train_size
            );
        }
        for r in &s.arm(Arm::Augmented).runs {
            ensure!(
                r.train_size <= s.k * intents + intents,
                "k={}: augmented size {}",
                s.k,
                r.train_size
            );
        }
    }
    let mut predictions = 0;
    for d in &details {
        for (_, p) in &d.predictions {
            let sum: f64 = p.scores.values().sum();
            ensure!((sum - 1.0).abs() < 1e-9, "scores sum to {sum}");
            ensure!(p.scores.values().all(|s| (0.0..=1.0).contains(s)), "score out of range");
            ensure!((0.0..=1.0).contains(&p.confidence), "confidence {}", p.confidence);
            ensure!(
                p.scores[&p.intent] == p.confidence,
                "confidence is not the winning score"
            );
            predictions += 1;
        }
    }
    Ok(format!(
        "2 x 3 x 10 runs, identical tables, {predictions} predictions checked"
    ))
}

// ---------------------------------------------------------------------------
// 9. Classifier sanity on disjoint vocabularies.

fn classifier_sanity() -> Outcome {
    let train = set(&[
        ("Weather", "will it rain tomorrow"),
        ("Weather", "forecast sunny weekend"),
        ("Weather", "temperature outside humidity"),
        ("Music", "play jazz playlist"),
        ("Music", "next song volume"),
        ("Music", "shuffle album tracks"),
        ("Food", "order pizza delivery"),
        ("Food", "recipe pasta dinner"),
        ("Food", "restaurant menu vegan"),
    ]);
    let test = set(&[
        ("Weather", "rain forecast"),
        ("Weather", "humidity tomorrow"),
        ("Music", "jazz album"),
        ("Music", "song playlist"),
        ("Food", "pizza dinner"),
        ("Food", "vegan recipe"),
    ]);
    let model = train_classifier(&train, DEFAULT_TEMPERATURE).map_err(|e| e.to_string())?;
    let (metrics, preds) = evaluate_with_predictions(&model, &test);
    ensure!(metrics.weighted_f1 == 100.0, "weighted F1 {}", metrics.weighted_f1);
    let split = confidence_split(preds.iter().map(|(t, p)| (t.as_str(), p)));
    ensure!(
        split.incorrect.is_empty() && split.incorrect_summary.is_none(),
        "unexpected errors"
    );
    let median = split.correct_summary.map(|s| s.median).unwrap_or(0.0);
    ensure!(median > 1.0 / 3.0, "median correct confidence {median}");
    Ok(format!(
        "F1 = 100, median correct confidence {median:.3}, no incorrect predictions"
    ))
}

// ---------------------------------------------------------------------------
// 10. Dataset round-trips.

fn dataset_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut entities = 0;
    for name in [
        "repository_train.tsv",
        "repository_test.tsv",
        "askubuntu.json",
        "stackoverflow.tsv",
    ] {
        let original = load_dataset(format!("{ROOT}/fixtures/{name}")).map_err(|e| format!("{name}: {e}"))?;
        entities += original.iter().map(|q| q.entities.len()).sum::<usize>();
        let tsv = to_tsv_string(&original).unwrap();
        let json = to_json_string(&original).unwrap();
        ensure!(from_tsv_str(&tsv).unwrap() == original, "{name}: TSV round trip");
        ensure!(from_json_str(&json).unwrap() == original, "{name}: JSON round trip");
        ensure!(
            to_tsv_string(&from_tsv_str(&tsv).unwrap()).unwrap() == tsv,
            "{name}: TSV text not stable"
        );
        for ext in ["tsv", "json"] {
            let path = dir.path().join(format!("{name}.{ext}"));
            botaug::corpus::save_dataset(&original, &path).unwrap();
            ensure!(
                load_dataset(&path).unwrap() == original,
                "{name}: file round trip via .{ext}"
            );
        }
    }
    let multi = load_dataset(format!("{ROOT}/fixtures/askubuntu.json")).unwrap();
    ensure!(
        multi.iter().any(|q| q.entities.len() >= 2),
        "no multi-entity query in fixtures"
    );
    Ok(format!("4 fixtures x (TSV, JSON); {entities} entity spans preserved"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "metric arithmetic (improvement +-0.05 / +-0.5, optimal +-0.5)",
            metric_arithmetic,
        ),
        ("weighted F1 = confusion-matrix oracle", weighted_f1_oracle),
        ("levenshtein metric laws", levenshtein_laws),
        ("working-example replay and selection dominance", working_example),
        ("candidate combinatorics", combinatorics),
        ("entity labeling and reject-promote", entity_labeling),
        ("exact Mann-Whitney vs enumeration (1e-12)", exact_mann_whitney),
        ("experiment determinism and structure", experiment_determinism),
        ("reference classifier sanity", classifier_sanity),
        ("dataset round trip", dataset_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS [{:>2}] {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
