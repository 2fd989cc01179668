//! The `gifaffect` command line.
//!
//! Every command writes its artifact plus a JSON run report (input digests,
//! configuration, counts) to `--report`, or next to the artifact as
//! `<artifact>.run.json`. Failures exit nonzero with one JSON line on stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::affinity::{
    cluster, cut_clusters, derive_sentiment_map, export_dendrogram, similarity_matrix, DendrogramFormat, Polarity,
    SentimentMap,
};
use crate::augment::{agreement_report, apply_emotions, apply_sentiment, majority_mapping, AnnotationSheet};
use crate::dictionary::{build_dictionary, CategoryListing, CategoryRegistry, GifDictionary, ReactionCategory};
use crate::digest::{sha256_hex, DEFAULT_DIGEST_LEN};
use crate::eval::{
    evaluate_baseline, render_table, train_baseline, BaselineConfig, EvalReport, ModelKind, Task, TaskData,
    TrainedBaseline,
};
use crate::ingest::{parse_pairs, FilterRules};
use crate::labeler::{distribution, label_corpus, read_samples, write_samples, LabeledSample, Sentiment};
use crate::synthetic::{generate, FixtureParams};

#[derive(Debug, Parser)]
#[command(name = "gifaffect", version, about = "Affect labels for conversation texts from reaction-GIF replies")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Category registry file (one name per line); the built-in list otherwise.
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Newick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportMode {
    /// Full records, including root texts.
    Private,
    /// Ids and labels only.
    Public,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the GIF dictionary from per-category listing files.
    BuildDict {
        #[arg(long)]
        listings: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = crate::dictionary::DEFAULT_MAX_PER_CATEGORY)]
        max_per_category: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Filter conversation pairs and label each root with its reaction category.
    Label {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DIGEST_LEN)]
        digest_len: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cluster categories by shared GIFs and derive the sentiment map.
    Cluster {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        out_dendrogram: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long, default_value_t = 2)]
        cut: usize,
        /// Index (0 or 1) of the negative cluster, clusters ordered by smallest member name.
        #[arg(long, conflicts_with = "negative_anchor")]
        negative_cluster: Option<usize>,
        /// A category whose cluster is the negative one.
        #[arg(long)]
        negative_anchor: Option<String>,
        /// Categories left out of the polarity split.
        #[arg(long, num_args = 0.., default_values_t = ["popcorn".to_string(), "thank you".to_string()])]
        exclude: Vec<String>,
        #[arg(long)]
        out_sentiment_map: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Attach sentiment and majority-vote emotions to a labeled dataset.
    Augment {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        sentiment_map: PathBuf,
        #[arg(long)]
        sheets: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        out_emotion_map: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Stratified holdout split for one task.
    Split {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        task: Task,
        #[arg(long, default_value_t = 0.1)]
        holdout: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Train a baseline on the training portion and report on the holdout.
    TrainBaseline {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        task: Task,
        #[arg(long)]
        model: ModelKind,
        /// Split file from `split`; computed from the seed otherwise.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        holdout: f64,
        #[arg(long, default_value_t = 5)]
        cv_folds: usize,
        #[arg(long)]
        out_model: PathBuf,
        #[arg(long)]
        out_report: Option<PathBuf>,
        #[arg(long)]
        out_table: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate a trained baseline on the test portion.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        holdout: f64,
        #[arg(long)]
        out_report: PathBuf,
        #[arg(long)]
        out_table: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the dataset for release.
    Export {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum)]
        mode: ExportMode,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write a seeded synthetic fixture corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 300)]
        pairs: usize,
        #[arg(long, default_value_t = 12)]
        gifs_per_category: usize,
        #[arg(long, default_value_t = 3)]
        annotators: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {message}", path.display())]
    Read { path: PathBuf, message: String },
    #[error("invalid input {}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("cannot write {}: {message}", path.display())]
    Write { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } => "read",
            CliError::Invalid { .. } => "invalid-input",
            CliError::Write { .. } => "write",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            CliError::Read { path, .. } | CliError::Invalid { path, .. } | CliError::Write { path, .. } => Some(path),
            CliError::Usage(_) => None,
        }
    }

    /// Single-line JSON description for stderr.
    pub fn to_json_line(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        if let Some(p) = self.path() {
            v["path"] = json!(p.display().to_string());
        }
        v.to_string()
    }
}

fn invalid(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub config: Value,
    pub counts: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
}

/// Per-command state: records every input read and output written.
struct Run {
    report: RunReport,
}

impl Run {
    fn new(command: &str, seed: u64) -> Self {
        Run {
            report: RunReport {
                command: command.into(),
                seed,
                inputs: Vec::new(),
                config: json!({}),
                counts: BTreeMap::new(),
                outputs: Vec::new(),
            },
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        self.report.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| invalid(path, e))
    }

    /// `*.json` files of a directory, sorted by name, with their contents.
    fn read_json_dir(&mut self, dir: &Path) -> Result<Vec<(PathBuf, String)>, CliError> {
        let entries = fs::read_dir(dir).map_err(|e| CliError::Read {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        paths
            .into_iter()
            .map(|p| {
                let text = self.read(&p)?;
                Ok((p, text))
            })
            .collect()
    }

    fn write(&mut self, path: &Path, contents: &[u8]) -> Result<(), CliError> {
        let fail = |e: std::io::Error| CliError::Write {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(fail)?;
        }
        fs::write(path, contents).map_err(fail)?;
        self.report.outputs.push(path.display().to_string());
        Ok(())
    }

    fn count(&mut self, key: &str, value: impl Serialize) {
        self.report
            .counts
            .insert(key.into(), serde_json::to_value(value).expect("count serializes"));
    }

    fn finish(mut self, explicit: Option<&Path>, artifact: &Path) -> Result<RunReport, CliError> {
        let path = explicit.map(Path::to_path_buf).unwrap_or_else(|| {
            let mut name = artifact.as_os_str().to_owned();
            name.push(".run.json");
            PathBuf::from(name)
        });
        self.report.outputs.push(path.display().to_string());
        let mut text = serde_json::to_string_pretty(&self.report).expect("report serializes");
        text.push('\n');
        let report = self.report.clone();
        let fail = |e: std::io::Error| CliError::Write {
            path: path.clone(),
            message: e.to_string(),
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(fail)?;
        }
        fs::write(&path, text).map_err(fail)?;
        Ok(report)
    }
}

fn load_registry(run: &mut Run, path: Option<&Path>) -> Result<CategoryRegistry, CliError> {
    match path {
        Some(p) => {
            let text = run.read(p)?;
            CategoryRegistry::parse(&text).map_err(|e| invalid(p, e))
        }
        None => Ok(CategoryRegistry::default_registry()),
    }
}

fn load_dictionary(run: &mut Run, path: &Path) -> Result<GifDictionary, CliError> {
    let text = run.read(path)?;
    GifDictionary::from_json(&text).map_err(|e| invalid(path, e))
}

fn load_samples(run: &mut Run, path: &Path) -> Result<Vec<LabeledSample>, CliError> {
    let text = run.read(path)?;
    read_samples(text.as_bytes()).map_err(|e| invalid(path, e))
}

fn load_json<T: serde::de::DeserializeOwned>(run: &mut Run, path: &Path) -> Result<T, CliError> {
    let text = run.read(path)?;
    serde_json::from_str(&text).map_err(|e| invalid(path, e))
}

fn samples_jsonl(samples: &[LabeledSample]) -> Vec<u8> {
    let mut out = Vec::new();
    write_samples(&mut out, samples).expect("writing to memory");
    out
}

fn pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializes");
    s.push('\n');
    s.into_bytes()
}

/// A released record: no text field exists in this type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicSample {
    pub root_id: String,
    pub reaction: ReactionCategory,
    pub sentiment: Option<Sentiment>,
    pub emotions: crate::augment::EmotionSet,
}

impl From<&LabeledSample> for PublicSample {
    fn from(s: &LabeledSample) -> Self {
        PublicSample {
            root_id: s.root_id.clone(),
            reaction: s.reaction.clone(),
            sentiment: s.sentiment,
            emotions: s.emotions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitFile {
    pub task: Task,
    pub seed: u64,
    pub holdout: f64,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn resolve_split(
    run: &mut Run,
    data: &TaskData,
    split: Option<&Path>,
    holdout: f64,
    seed: u64,
) -> Result<SplitFile, CliError> {
    match split {
        Some(p) => {
            let file: SplitFile = load_json(run, p)?;
            if file.task != data.task() {
                return Err(invalid(p, format!("split is for task {}, not {}", file.task, data.task())));
            }
            Ok(file)
        }
        None => {
            let s = data.holdout(holdout, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(SplitFile {
                task: data.task(),
                seed,
                holdout,
                train: s.train,
                test: s.test,
                warnings: s.warnings,
            })
        }
    }
}

/// Runs one parsed command line. Returns the run report written.
pub fn execute(cli: Cli) -> Result<RunReport, CliError> {
    let seed = cli.seed;
    let registry_path = cli.registry.as_deref();
    match cli.command {
        Command::BuildDict {
            listings,
            out,
            max_per_category,
            report,
        } => {
            let mut run = Run::new("build-dict", seed);
            let registry = load_registry(&mut run, registry_path)?;
            let files = run.read_json_dir(&listings)?;
            let parsed = files
                .iter()
                .map(|(p, text)| serde_json::from_str::<CategoryListing>(text).map_err(|e| invalid(p, e)))
                .collect::<Result<Vec<_>, _>>()?;
            let dict = build_dictionary(&registry, &parsed, max_per_category).map_err(|e| invalid(&listings, e))?;
            run.report.config = json!({ "max_per_category": max_per_category });
            run.count("listings", parsed.len());
            run.count("entries", dict.len());
            run.count("identity_groups", dict.identity_groups().len());
            run.count("multi_category_gifs", dict.multi_category_count());
            run.write(&out, dict.to_json().as_bytes())?;
            run.finish(report.as_deref(), &out)
        }
        Command::Label {
            pairs,
            dict,
            rules,
            digest_len,
            out,
            report,
        } => {
            let mut run = Run::new("label", seed);
            let dictionary = load_dictionary(&mut run, &dict)?;
            let rules_value = match &rules {
                Some(p) => load_json::<FilterRules>(&mut run, p)?,
                None => FilterRules::default(),
            };
            let text = run.read(&pairs)?;
            let loaded = parse_pairs(&text, digest_len);
            let (samples, label_report) = label_corpus(&dictionary, &loaded.pairs, &rules_value);
            run.report.config = json!({ "rules": rules_value, "digest_len": digest_len });
            run.count("malformed_lines", loaded.errors.len());
            run.count("labeling", &label_report);
            if let Ok(d) = distribution(&samples) {
                run.count("top_7_share", d.top_k_share(7));
                run.count("categories", d.shares.len());
            }
            run.write(&out, &samples_jsonl(&samples))?;
            run.finish(report.as_deref(), &out)
        }
        Command::Cluster {
            dict,
            out_dendrogram,
            format,
            cut,
            negative_cluster,
            negative_anchor,
            exclude,
            out_sentiment_map,
            report,
        } => {
            let mut run = Run::new("cluster", seed);
            let dictionary = load_dictionary(&mut run, &dict)?;
            let sim = similarity_matrix(&dictionary);
            let tree = cluster(&sim).map_err(|e| invalid(&dict, e))?;
            let format = match format {
                FormatArg::Json => DendrogramFormat::Json,
                FormatArg::Newick => DendrogramFormat::Newick,
            };
            let excluded: Vec<ReactionCategory> = exclude.iter().map(|s| ReactionCategory::new(s)).collect();
            let reduced = sim.without(&excluded);
            let partition = cut_clusters(&cluster(&reduced).map_err(|e| invalid(&dict, e))?, cut)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            run.report.config = json!({
                "format": if format == DendrogramFormat::Json { "json" } else { "newick" },
                "cut": cut,
                "exclude": exclude,
                "negative_cluster": negative_cluster,
                "negative_anchor": negative_anchor,
            });
            run.count("categories", sim.len());
            run.count("merges", tree.merges().len());
            run.count("partition", &partition);
            run.write(&out_dendrogram, export_dendrogram(&tree, format).as_bytes())?;
            if let Some(map_path) = &out_sentiment_map {
                let negative = match (negative_cluster, &negative_anchor) {
                    (Some(i), _) => i,
                    (None, Some(name)) => {
                        let cat = ReactionCategory::new(name);
                        partition.iter().position(|p| p.contains(&cat)).ok_or_else(|| {
                            CliError::Usage(format!("anchor `{name}` is not in any cluster"))
                        })?
                    }
                    (None, None) => {
                        return Err(CliError::Usage(
                            "--out-sentiment-map needs --negative-cluster or --negative-anchor".into(),
                        ))
                    }
                };
                let mut map =
                    derive_sentiment_map(&partition, negative, &excluded).map_err(|e| CliError::Usage(e.to_string()))?;
                for cat in dictionary.registry().names() {
                    if map.get(cat).is_none() {
                        map.insert(cat.clone(), Polarity::Excluded);
                    }
                }
                run.count("positive", map.count(Polarity::Positive));
                run.count("negative", map.count(Polarity::Negative));
                run.count("excluded", map.count(Polarity::Excluded));
                run.write(map_path, map.to_json().as_bytes())?;
            }
            run.finish(report.as_deref(), &out_dendrogram)
        }
        Command::Augment {
            dataset,
            sentiment_map,
            sheets,
            out,
            out_emotion_map,
            report,
        } => {
            let mut run = Run::new("augment", seed);
            let registry = load_registry(&mut run, registry_path)?;
            let mut samples = load_samples(&mut run, &dataset)?;
            let smap: SentimentMap = load_json(&mut run, &sentiment_map)?;
            let parsed = run
                .read_json_dir(&sheets)?
                .into_iter()
                .map(|(p, text)| {
                    let sheet: AnnotationSheet = serde_json::from_str(&text).map_err(|e| invalid(&p, e))?;
                    sheet.validate(&registry).map_err(|e| invalid(&p, e))?;
                    Ok(sheet)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let emap = majority_mapping(&parsed).map_err(|e| invalid(&sheets, e))?;
            apply_sentiment(&mut samples, &smap).map_err(|e| invalid(&sentiment_map, e))?;
            apply_emotions(&mut samples, &emap).map_err(|e| invalid(&sheets, e))?;
            match agreement_report(&parsed) {
                Ok(agreement) => {
                    for p in &agreement.pairwise {
                        println!("cohen kappa {} / {}: {:.4}", p.first, p.second, p.kappa);
                    }
                    println!("fleiss kappa: {:.4}", agreement.fleiss);
                    run.count("agreement", &agreement);
                }
                Err(e) => run.count("agreement_error", e.to_string()),
            }
            run.count("samples", samples.len());
            run.count("with_sentiment", samples.iter().filter(|s| s.sentiment.is_some()).count());
            run.count("with_emotions", samples.iter().filter(|s| !s.emotions.is_empty()).count());
            run.count("sheets", parsed.len());
            run.write(&out, &samples_jsonl(&samples))?;
            if let Some(p) = &out_emotion_map {
                run.write(p, &pretty(&emap))?;
            }
            run.finish(report.as_deref(), &out)
        }
        Command::Split {
            dataset,
            task,
            holdout,
            out,
            report,
        } => {
            let mut run = Run::new("split", seed);
            let samples = load_samples(&mut run, &dataset)?;
            let data = TaskData::new(&samples, task).map_err(|e| invalid(&dataset, e))?;
            let split = resolve_split(&mut run, &data, None, holdout, seed)?;
            run.report.config = json!({ "task": task, "holdout": holdout });
            run.count("task_samples", data.len());
            run.count("train", split.train.len());
            run.count("test", split.test.len());
            run.write(&out, &pretty(&split))?;
            run.finish(report.as_deref(), &out)
        }
        Command::TrainBaseline {
            dataset,
            task,
            model,
            split,
            holdout,
            cv_folds,
            out_model,
            out_report,
            out_table,
            report,
        } => {
            let mut run = Run::new("train-baseline", seed);
            let samples = load_samples(&mut run, &dataset)?;
            let data = TaskData::new(&samples, task).map_err(|e| invalid(&dataset, e))?;
            let split = resolve_split(&mut run, &data, split.as_deref(), holdout, seed)?;
            let config = BaselineConfig {
                holdout_frac: holdout,
                cv_folds,
                ..BaselineConfig::new(task, model, seed)
            };
            let trained = train_baseline(&data, &split.train, &config).map_err(|e| invalid(&dataset, e))?;
            let mut eval = evaluate_baseline(&trained, &data, &split.test).map_err(|e| invalid(&dataset, e))?;
            eval.warnings = split.warnings.clone();
            run.report.config = json!({
                "task": task,
                "model": model,
                "holdout": holdout,
                "cv_folds": cv_folds,
                "c": config.logreg.c,
                "max_iter": config.logreg.max_iter,
                "min_df": config.vectorizer.min_df,
                "max_features": config.vectorizer.max_features,
            });
            run.count("train", split.train.len());
            run.count("test", split.test.len());
            run.write(&out_model, &pretty(&trained))?;
            let table = render_table(std::slice::from_ref(&eval));
            print!("{table}");
            if let Some(p) = &out_report {
                run.write(p, &pretty(&eval))?;
            }
            if let Some(p) = &out_table {
                run.write(p, table.as_bytes())?;
            }
            run.finish(report.as_deref(), &out_model)
        }
        Command::Evaluate {
            model,
            dataset,
            split,
            holdout,
            out_report,
            out_table,
            report,
        } => {
            let mut run = Run::new("evaluate", seed);
            let trained: TrainedBaseline = load_json(&mut run, &model)?;
            let samples = load_samples(&mut run, &dataset)?;
            let data = TaskData::new(&samples, trained.task).map_err(|e| invalid(&dataset, e))?;
            let split = resolve_split(&mut run, &data, split.as_deref(), holdout, seed)?;
            let mut eval: EvalReport =
                evaluate_baseline(&trained, &data, &split.test).map_err(|e| invalid(&dataset, e))?;
            eval.warnings = split.warnings.clone();
            run.report.config = json!({ "task": trained.task, "model": trained.model, "holdout": split.holdout });
            run.count("test", split.test.len());
            let table = render_table(std::slice::from_ref(&eval));
            print!("{table}");
            run.write(&out_report, &pretty(&eval))?;
            if let Some(p) = &out_table {
                run.write(p, table.as_bytes())?;
            }
            run.finish(report.as_deref(), &out_report)
        }
        Command::Export {
            dataset,
            mode,
            out,
            report,
        } => {
            let mut run = Run::new("export", seed);
            let samples = load_samples(&mut run, &dataset)?;
            let bytes = match mode {
                ExportMode::Private => samples_jsonl(&samples),
                ExportMode::Public => {
                    let mut buf = Vec::new();
                    for s in &samples {
                        serde_json::to_writer(&mut buf, &PublicSample::from(s)).expect("writing to memory");
                        buf.push(b'\n');
                    }
                    buf
                }
            };
            run.report.config = json!({ "mode": mode });
            run.count("records", samples.len());
            run.write(&out, &bytes)?;
            run.finish(report.as_deref(), &out)
        }
        Command::Synth {
            out,
            pairs,
            gifs_per_category,
            annotators,
        } => {
            let mut run = Run::new("synth", seed);
            let params = FixtureParams {
                seed,
                pairs,
                gifs_per_category,
                annotators,
            };
            let fixture = generate(&params);
            fixture.write_to(&out).map_err(|e| CliError::Write {
                path: out.clone(),
                message: e.to_string(),
            })?;
            run.report.config = json!({
                "pairs": pairs,
                "gifs_per_category": gifs_per_category,
                "annotators": annotators,
            });
            run.count("categories", fixture.registry.len());
            run.count("pairs", fixture.pairs.len());
            run.report.outputs.push(out.display().to_string());
            run.finish(None, &out.join("fixture"))
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if e.use_stderr() {
                eprintln!("{}", CliError::Usage(e.to_string().trim().replace('\n', " ")).to_json_line());
            } else {
                print!("{e}");
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn error_line_is_single_line_json_with_path() {
        let e = CliError::Read {
            path: "/no/such/dict.json".into(),
            message: "No such file or directory".into(),
        };
        let line = e.to_json_line();
        assert!(!line.contains('\n'));
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["path"], "/no/such/dict.json");
        assert_eq!(v["error"], "read");
    }

    #[test]
    fn public_record_rejects_text() {
        let with_text = r#"{"root_id":"1","root_text":"hi","reaction":"hug","sentiment":null,"emotions":[]}"#;
        assert!(serde_json::from_str::<PublicSample>(with_text).is_err());
        let without = r#"{"root_id":"1","reaction":"hug","sentiment":"positive","emotions":["love"]}"#;
        assert!(serde_json::from_str::<PublicSample>(without).is_ok());
    }

    #[test]
    fn exclude_defaults() {
        let cli = Cli::try_parse_from(["gifaffect", "cluster", "--dict", "d", "--out-dendrogram", "o"]).unwrap();
        let Command::Cluster { exclude, .. } = cli.command else { panic!() };
        assert_eq!(exclude, ["popcorn", "thank you"]);
        let cli = Cli::try_parse_from(["gifaffect", "cluster", "--dict", "d", "--out-dendrogram", "o", "--exclude"]).unwrap();
        let Command::Cluster { exclude, .. } = cli.command else { panic!() };
        assert!(exclude.is_empty());
    }
}
