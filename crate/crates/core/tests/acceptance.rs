//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gifaffect::affinity::{cluster, similarity_matrix, Merge, SimilarityMatrix};
use gifaffect::augment::{cohen_kappa_binary, fleiss_kappa, AnnotationSheet, AugmentError, Emotion, EmotionSet};
use gifaffect::dictionary::{build_dictionary, CategoryListing, CategoryRegistry, ReactionCategory, DEFAULT_MAX_PER_CATEGORY};
use gifaffect::eval::{
    lrap, run_baseline, train_logreg, BaselineConfig, LogRegParams, LogisticObjective, ModelKind, Predictor, SparseVector,
    Task,
};
use gifaffect::labeler::{label_pair, LabelOutcome, LabeledSample, Sentiment};
use gifaffect::synthetic::hug_thread;
use gifaffect::GifRef;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- 1

#[derive(Deserialize)]
struct DistFixture {
    categories: Vec<DistCategory>,
}

#[derive(Deserialize)]
struct DistCategory {
    name: String,
    count: usize,
    polarity: String,
}

fn distribution_samples() -> Vec<LabeledSample> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/category_distribution.json");
    let fixture: DistFixture = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut samples = Vec::new();
    for c in &fixture.categories {
        let sentiment = match c.polarity.as_str() {
            "positive" => Some(Sentiment::Positive),
            "negative" => Some(Sentiment::Negative),
            _ => None,
        };
        for i in 0..c.count {
            samples.push(LabeledSample {
                root_id: format!("{}-{i}", c.name),
                root_text: Some(String::new()),
                reaction: ReactionCategory::new(&c.name),
                sentiment,
                emotions: EmotionSet::EMPTY,
            });
        }
    }
    samples
}

/// Majority accuracy and the test-set share of the predicted class.
fn majority_identity(samples: &[LabeledSample], task: Task, seed: u64) -> (f64, f64) {
    let config = BaselineConfig {
        cv_folds: 0,
        ..BaselineConfig::new(task, ModelKind::Majority, seed)
    };
    let (model, report) = run_baseline(samples, &config).unwrap();
    let Predictor::Majority { label } = &model.predictor else { unreachable!() };
    let support = report.support.iter().find(|s| &s.label == label).map_or(0, |s| s.support);
    (report.scores.accuracy.unwrap(), support as f64 / report.n_test as f64)
}

fn criterion_1() -> Outcome {
    let samples = distribution_samples();
    let (reaction, reaction_share) = majority_identity(&samples, Task::Reaction, 1);
    let (sentiment, sentiment_share) = majority_identity(&samples, Task::Sentiment, 1);
    let mut identity = reaction == reaction_share && sentiment == sentiment_share;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..50 {
        let n = rng.gen_range(20..200);
        let k = rng.gen_range(2..6);
        let random: Vec<LabeledSample> = (0..n)
            .map(|i| LabeledSample {
                root_id: i.to_string(),
                root_text: Some(String::new()),
                reaction: ReactionCategory::new(&format!("c{}", rng.gen_range(0..k))),
                sentiment: Some(if rng.gen_bool(0.6) { Sentiment::Positive } else { Sentiment::Negative }),
                emotions: EmotionSet::EMPTY,
            })
            .collect();
        for task in [Task::Reaction, Task::Sentiment] {
            let (acc, share) = majority_identity(&random, task, trial);
            identity &= acc == share;
        }
    }
    let pass = identity && (100.0 * reaction - 10.4).abs() <= 0.1 && (100.0 * sentiment - 58.0).abs() <= 0.1;
    outcome(
        pass,
        format!(
            "reaction {:.2}%, sentiment {:.2}%, accuracy equals predicted-class share: {identity}",
            100.0 * reaction,
            100.0 * sentiment
        ),
    )
}

// ---------------------------------------------------------------- 2

/// Exhaustive rescan: recompute every cluster-pair mean from the original
/// matrix at each step.
fn rescan_oracle(names: &[String], s: &[Vec<u64>]) -> Vec<(usize, usize, u64, u64, usize)> {
    let n = names.len();
    // (node id, members)
    let mut active: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let min_name = |members: &Vec<usize>| members.iter().map(|&m| names[m].clone()).min().unwrap();
    let mut out = Vec::new();
    for step in 0..n - 1 {
        let mut best: Option<(usize, usize, u64, u64)> = None;
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let sum: u64 = active[a].1.iter().flat_map(|&i| active[b].1.iter().map(move |&j| s[i][j])).sum();
                let pairs = (active[a].1.len() * active[b].1.len()) as u64;
                let take = match best {
                    None => true,
                    Some((ba, bb, bsum, bpairs)) => match (sum as u128 * bpairs as u128).cmp(&(bsum as u128 * pairs as u128)) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => {
                            let key = |x: usize, y: usize| {
                                let (p, q) = (min_name(&active[x].1), min_name(&active[y].1));
                                if p <= q { (p, q) } else { (q, p) }
                            };
                            key(a, b) < key(ba, bb)
                        }
                    },
                };
                if take {
                    best = Some((a, b, sum, pairs));
                }
            }
        }
        let (a, b, sum, pairs) = best.unwrap();
        let (left, right) = if min_name(&active[a].1) <= min_name(&active[b].1) { (a, b) } else { (b, a) };
        let size = active[a].1.len() + active[b].1.len();
        out.push((active[left].0, active[right].0, sum, pairs, size));
        let mut members = active[a].1.clone();
        members.extend(&active[b].1);
        let (hi, lo) = (a.max(b), a.min(b));
        active.remove(hi);
        active.remove(lo);
        active.push((n + step, members));
    }
    out
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pool: Vec<String> = (0..26).map(|i| format!("{}{}", (b'a' + i as u8) as char, i)).collect();
    let (mut matched, mut monotone) = (0, 0);
    let trials = 500;
    for _ in 0..trials {
        let n = rng.gen_range(3..=8);
        let names: Vec<String> = pool.choose_multiple(&mut rng, n).cloned().collect();
        let hi = if rng.gen_bool(0.5) { 3 } else { 50 };
        let mut s = vec![vec![0u64; n]; n];
        for i in 0..n {
            s[i][i] = rng.gen_range(0..100);
            for j in 0..i {
                let v = rng.gen_range(0..hi);
                s[i][j] = v;
                s[j][i] = v;
            }
        }
        let sim = SimilarityMatrix::from_rows(names.iter().map(|x| ReactionCategory::new(x)).collect(), &s).unwrap();
        let tree = cluster(&sim).unwrap();
        let oracle = rescan_oracle(&names, &s);
        let same = tree.merges().len() == oracle.len()
            && tree.merges().iter().zip(&oracle).all(|(m, o): (&Merge, _)| {
                m.left == o.0 && m.right == o.1 && m.score == o.2 as f64 / o.3 as f64 && m.size == o.4
            });
        matched += same as usize;
        monotone += tree.scores_non_increasing() as usize;
    }
    outcome(
        matched == trials && monotone == trials,
        format!("{matched}/{trials} merge sequences match the rescan oracle, {monotone}/{trials} monotone"),
    )
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let registry = CategoryRegistry::default_registry();
    let trials = 200;
    let mut ok = 0;
    for _ in 0..trials {
        let n_cat = rng.gen_range(2..12);
        let cats: Vec<ReactionCategory> = registry.names().choose_multiple(&mut rng, n_cat).cloned().collect();
        let pool = rng.gen_range(5..60);
        let max = rng.gen_range(3..15);
        let listings: Vec<CategoryListing> = cats
            .iter()
            .map(|c| {
                let len = rng.gen_range(1..20usize).min(pool);
                let ids: Vec<usize> = (0..pool).collect::<Vec<_>>().choose_multiple(&mut rng, len).copied().collect();
                CategoryListing {
                    category: c.to_string(),
                    gifs: ids.iter().map(|i| GifRef::from_asset(format!("g{i}"))).collect(),
                }
            })
            .collect();
        let dict = build_dictionary(&registry, &listings, max).unwrap();
        // brute force: which categories list each GIF within the cap
        let mut holders: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for l in &listings {
            for g in l.gifs.iter().take(max) {
                holders.entry(g.asset_id.clone().unwrap()).or_default().insert(l.category.clone());
            }
        }
        let pair_total: u64 = holders.values().map(|h| (h.len() * (h.len() - 1) / 2) as u64).sum();
        let multi = holders.values().filter(|h| h.len() >= 2).count();
        let sim = similarity_matrix(&dict);
        if sim.off_diagonal_sum() == pair_total && dict.multi_category_count() == multi {
            ok += 1;
        }
    }
    outcome(ok == trials, format!("{ok}/{trials} dictionaries satisfy the sum rule and the multi-category count"))
}

// ---------------------------------------------------------------- 4

fn long_hand_fleiss(ratings: &[Vec<bool>]) -> f64 {
    let raters = ratings.len() as f64;
    let items = ratings[0].len();
    let mut p_bar = 0.0;
    let (mut yes_total, mut no_total) = (0.0, 0.0);
    for i in 0..items {
        let yes = ratings.iter().filter(|r| r[i]).count() as f64;
        let no = raters - yes;
        p_bar += (yes * (yes - 1.0) + no * (no - 1.0)) / (raters * (raters - 1.0));
        yes_total += yes;
        no_total += no;
    }
    p_bar /= items as f64;
    let grand = raters * items as f64;
    let p_e = (yes_total / grand).powi(2) + (no_total / grand).powi(2);
    (p_bar - p_e) / (1.0 - p_e)
}

fn criterion_4() -> Outcome {
    let bits = |v: &[u8]| v.iter().map(|&x| x == 1).collect::<Vec<_>>();
    let (a, b) = (bits(&[1, 1, 0, 0, 1]), bits(&[1, 0, 0, 0, 1]));
    let k = cohen_kappa_binary(&a, &b).unwrap();
    let self_k = cohen_kappa_binary(&a, &a).unwrap();

    use Emotion::*;
    let grid: [&[(&str, &[Emotion])]; 3] = [
        &[("hug", &[Love, Caring]), ("smh", &[Disapproval]), ("applause", &[Admiration, Approval])],
        &[("hug", &[Love]), ("smh", &[Disapproval, Annoyance]), ("applause", &[Admiration])],
        &[("hug", &[Love, Caring, Joy]), ("smh", &[Annoyance]), ("applause", &[Approval, Joy])],
    ];
    let sheets: Vec<AnnotationSheet> = grid
        .iter()
        .enumerate()
        .map(|(i, entries)| AnnotationSheet {
            annotator_id: format!("r{i}"),
            mapping: entries.iter().map(|(c, es)| (ReactionCategory::new(c), es.iter().copied().collect())).collect(),
        })
        .collect();
    let ratings: Vec<Vec<bool>> = sheets
        .iter()
        .map(|s| s.mapping.values().flat_map(|set| Emotion::ALL.iter().map(move |e| set.contains(*e))).collect())
        .collect();
    let fleiss = fleiss_kappa(&sheets).unwrap();
    let oracle = long_hand_fleiss(&ratings);

    let ones = bits(&[1, 1, 1, 1]);
    let degenerate = cohen_kappa_binary(&ones, &ones) == Err(AugmentError::DegenerateAgreement);
    let empty: Vec<AnnotationSheet> = sheets
        .iter()
        .map(|s| AnnotationSheet {
            mapping: s.mapping.keys().map(|c| (c.clone(), EmotionSet::EMPTY)).collect(),
            ..s.clone()
        })
        .collect();
    let fleiss_degenerate = fleiss_kappa(&empty) == Err(AugmentError::DegenerateAgreement);

    let pass = (k - 0.6154).abs() <= 1e-4 && self_k == 1.0 && (fleiss - oracle).abs() <= 1e-9 && degenerate && fleiss_degenerate;
    outcome(
        pass,
        format!(
            "kappa {k:.6}, self {self_k}, fleiss {fleiss:.12} vs long-hand {oracle:.12}, degenerate errors: {degenerate}/{fleiss_degenerate}"
        ),
    )
}

// ---------------------------------------------------------------- 5

fn brute_lrap(scores: &[Vec<f64>], truth: &[Vec<bool>]) -> f64 {
    let mut total = 0.0;
    for (s, t) in scores.iter().zip(truth) {
        let relevant: Vec<usize> = (0..s.len()).filter(|&j| t[j]).collect();
        let mut acc = 0.0;
        for &j in &relevant {
            let rank = (0..s.len()).filter(|&k| s[k] >= s[j]).count() as f64;
            let rank_true = relevant.iter().filter(|&&k| s[k] >= s[j]).count() as f64;
            acc += rank_true / rank;
        }
        total += acc / relevant.len() as f64;
    }
    total / scores.len() as f64
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 1000;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let rows = rng.gen_range(1..8);
        let labels = rng.gen_range(1..28);
        let coarse = rng.gen_bool(0.5);
        let scores: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..labels)
                    .map(|_| if coarse { rng.gen_range(0..4) as f64 / 4.0 } else { rng.gen::<f64>() })
                    .collect()
            })
            .collect();
        let truth: Vec<Vec<bool>> = (0..rows)
            .map(|_| {
                let mut t: Vec<bool> = (0..labels).map(|_| rng.gen_bool(0.3)).collect();
                let forced = rng.gen_range(0..labels);
                t[forced] = true;
                t
            })
            .collect();
        worst = worst.max((lrap(&scores, &truth).unwrap() - brute_lrap(&scores, &truth)).abs());
    }
    let t = vec![vec![false, true, false, true]];
    let first = lrap(&[vec![0.1, 0.9, 0.2, 0.8]], &t).unwrap();
    let second = lrap(&[vec![0.9, 0.1, 0.8, 0.2]], &t).unwrap();
    outcome(
        worst <= 1e-12 && first == 1.0 && second == 5.0 / 12.0,
        format!("max deviation {worst:.1e} over {trials} instances, examples {first} and {second}"),
    )
}

// ---------------------------------------------------------------- 6

fn dense(values: &[f64]) -> SparseVector {
    let mut v = SparseVector::default();
    for (i, &x) in values.iter().enumerate() {
        if x != 0.0 {
            v.indices.push(i as u32);
            v.values.push(x);
        }
    }
    v
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut monotone = true;
    for _ in 0..20 {
        let (n, d, k) = (rng.gen_range(4..12), rng.gen_range(1..6), rng.gen_range(2..5));
        let rows: Vec<SparseVector> = (0..n)
            .map(|_| dense(&(0..d).map(|_| if rng.gen_bool(0.8) { rng.gen_range(-1.0..1.0) } else { 0.0 }).collect::<Vec<_>>()))
            .collect();
        let targets: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
        let obj = LogisticObjective::new(&rows, &targets, k, d, 3.0).unwrap();
        let w: Vec<f64> = (0..obj.n_params()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut g = vec![0.0; w.len()];
        obj.value_and_gradient(&w, &mut g);
        let h = 1e-5;
        for i in 0..w.len() {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[i] += h;
            down[i] -= h;
            let fd = (obj.value(&up) - obj.value(&down)) / (2.0 * h);
            let rel = (fd - g[i]).abs() / fd.abs().max(g[i].abs()).max(1e-6);
            worst = worst.max(rel);
        }
        let labels: Vec<String> = targets.iter().map(|t| format!("class{t}")).collect();
        let model = train_logreg(&rows, &labels, d, &LogRegParams::default()).unwrap();
        monotone &= model.fit_summary().trace.windows(2).all(|p| p[1] <= p[0]);
    }

    let xs = [-3.0, -2.0, -1.5, -1.0, -0.25, 0.25, 1.0, 1.5, 2.0, 3.0];
    let rows: Vec<SparseVector> = xs.iter().map(|&x| dense(&[x])).collect();
    let labels: Vec<&str> = xs.iter().map(|&x| if x < 0.0 { "below" } else { "above" }).collect();
    let model = train_logreg(&rows, &labels, 1, &LogRegParams::default()).unwrap();
    monotone &= model.fit_summary().trace.windows(2).all(|p| p[1] <= p[0]);
    let correct = rows.iter().zip(&labels).filter(|(r, l)| model.predict(r) == **l).count();
    outcome(
        worst < 1e-4 && monotone && correct == xs.len(),
        format!(
            "max relative gradient error {worst:.2e}, objective non-increasing: {monotone}, separable training accuracy {correct}/{}",
            xs.len()
        ),
    )
}

// ---------------------------------------------------------------- 7

fn bin(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gifaffect")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

const ARTIFACTS: &[&str] = &[
    "labeled.jsonl",
    "dendrogram.json",
    "dendrogram.nwk",
    "sentiment_map.json",
    "augmented.jsonl",
    "reaction.split.json",
    "reaction.model.json",
    "reaction.eval.json",
    "reaction.evaluate.json",
    "sentiment.eval.json",
    "emotion.eval.json",
    "public.jsonl",
];

fn pipeline(root: &Path, seed: &str) -> Result<(), String> {
    let p = |name: &str| root.join(name).display().to_string();
    let fx = p("fixture");
    let reg = format!("{fx}/registry.txt");
    bin(&["--seed", seed, "synth", "--out", &fx, "--pairs", "240"])?;
    bin(&["--registry", &reg, "build-dict", "--listings", &format!("{fx}/listings"), "--out", &p("dict.json")])?;
    bin(&[
        "label", "--pairs", &format!("{fx}/pairs.jsonl"), "--dict", &p("dict.json"), "--rules", &format!("{fx}/rules.json"),
        "--out", &p("labeled.jsonl"),
    ])?;
    bin(&[
        "cluster", "--dict", &p("dict.json"), "--out-dendrogram", &p("dendrogram.json"), "--negative-anchor", "smh",
        "--out-sentiment-map", &p("sentiment_map.json"),
    ])?;
    bin(&["cluster", "--dict", &p("dict.json"), "--out-dendrogram", &p("dendrogram.nwk"), "--format", "newick"])?;
    bin(&[
        "--registry", &reg, "augment", "--dataset", &p("labeled.jsonl"), "--sentiment-map", &p("sentiment_map.json"),
        "--sheets", &format!("{fx}/sheets"), "--out", &p("augmented.jsonl"),
    ])?;
    bin(&["--seed", seed, "split", "--dataset", &p("augmented.jsonl"), "--task", "reaction", "--out", &p("reaction.split.json")])?;
    bin(&[
        "--seed", seed, "train-baseline", "--dataset", &p("augmented.jsonl"), "--task", "reaction", "--model", "logreg",
        "--split", &p("reaction.split.json"), "--out-model", &p("reaction.model.json"), "--out-report", &p("reaction.eval.json"),
    ])?;
    bin(&[
        "evaluate", "--model", &p("reaction.model.json"), "--dataset", &p("augmented.jsonl"), "--split",
        &p("reaction.split.json"), "--out-report", &p("reaction.evaluate.json"),
    ])?;
    for task in ["sentiment", "emotion"] {
        bin(&[
            "--seed", seed, "train-baseline", "--dataset", &p("augmented.jsonl"), "--task", task, "--model", "logreg",
            "--out-model", &p(&format!("{task}.model.json")), "--out-report", &p(&format!("{task}.eval.json")),
        ])?;
    }
    bin(&["export", "--dataset", &p("augmented.jsonl"), "--mode", "public", "--out", &p("public.jsonl")])?;
    Ok(())
}

fn criterion_7() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    if let Err(e) = pipeline(a.path(), "17").and_then(|_| pipeline(b.path(), "17")) {
        return outcome(false, e);
    }
    let differing: Vec<&str> = ARTIFACTS
        .iter()
        .copied()
        .filter(|name| std::fs::read(a.path().join(name)).ok() != std::fs::read(b.path().join(name)).ok())
        .collect();
    let public = std::fs::read_to_string(a.path().join("public.jsonl")).unwrap();
    let records: Vec<serde_json::Map<String, serde_json::Value>> =
        public.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let no_text = records.iter().all(|r| !r.contains_key("root_text"))
        && records.iter().all(|r| {
            r.keys().map(String::as_str).collect::<BTreeSet<_>>()
                == BTreeSet::from(["root_id", "reaction", "sentiment", "emotions"])
        });
    let pairs = std::fs::read_to_string(a.path().join("fixture/pairs.jsonl")).unwrap().lines().count();
    let labeled = std::fs::read_to_string(a.path().join("labeled.jsonl")).unwrap();
    let cats: BTreeSet<String> = labeled
        .lines()
        .map(|l| serde_json::from_str::<LabeledSample>(l).unwrap().reaction.to_string())
        .collect();
    let sheets = std::fs::read_dir(a.path().join("fixture/sheets")).unwrap().count();
    let sized = pairs >= 200 && cats.len() >= 6 && sheets == 3;
    outcome(
        differing.is_empty() && no_text && sized && !records.is_empty(),
        format!(
            "{pairs} pairs, {} categories, {sheets} sheets; differing artifacts {differing:?}; public export text-free: {no_text}",
            cats.len()
        ),
    )
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let (registry, listings, pair) = hug_thread();
    let dict = build_dictionary(&registry, &listings, DEFAULT_MAX_PER_CATEGORY).unwrap();
    let hug = matches!(label_pair(&dict, &pair), LabelOutcome::Labeled(s) if s.reaction.as_str() == "hug" && s.root_text.as_deref() == Some("I can't take this any more!"));

    // same rank in two categories: the smaller name wins in any listing order
    let registry = CategoryRegistry::from_names(["smh", "facepalm", "eyeroll"]).unwrap();
    let make = |order: &[&str]| -> Vec<CategoryListing> {
        order
            .iter()
            .map(|c| CategoryListing {
                category: c.to_string(),
                gifs: match *c {
                    "smh" => vec![GifRef::from_asset("tied"), GifRef::from_asset("lower")],
                    "facepalm" => vec![GifRef::from_asset("tied"), GifRef::from_asset("x")],
                    _ => vec![GifRef::from_asset("x"), GifRef::from_asset("lower")],
                },
            })
            .collect()
    };
    let mut resolved = BTreeSet::new();
    for order in [["smh", "facepalm", "eyeroll"], ["eyeroll", "facepalm", "smh"], ["facepalm", "smh", "eyeroll"]] {
        let dict = build_dictionary(&registry, &make(&order), DEFAULT_MAX_PER_CATEGORY).unwrap();
        for id in ["tied", "lower", "x"] {
            let mut p = pair.clone();
            p.reply_gif = GifRef::from_asset(id);
            if let LabelOutcome::Labeled(s) = label_pair(&dict, &p) {
                resolved.insert((id, s.reaction.to_string()));
            }
        }
    }
    let expected = BTreeSet::from([
        ("tied", "facepalm".to_string()),
        ("lower", "eyeroll".to_string()),
        ("x", "eyeroll".to_string()),
    ]);
    outcome(
        hug && resolved == expected,
        format!("thread labeled hug: {hug}; position-rule resolutions {resolved:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("majority-baseline identity", criterion_1, Duration::from_secs(1)),
        ("clustering oracle equivalence", criterion_2, Duration::from_secs(10)),
        ("similarity sum rule", criterion_3, Duration::from_secs(5)),
        ("agreement statistics", criterion_4, Duration::from_secs(1)),
        ("LRAP oracle equivalence", criterion_5, Duration::from_secs(1)),
        ("logistic regression", criterion_6, Duration::from_secs(30)),
        ("end-to-end determinism", criterion_7, Duration::from_secs(10)),
        ("label-resolution fidelity", criterion_8, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed < *limit;
        failed += !pass as usize;
        println!(
            "criterion {} ({name}): {} [{:.2}s of {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
