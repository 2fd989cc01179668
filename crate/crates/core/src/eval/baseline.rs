//! One training pipeline for the three tasks.
//!
//! - reaction: multiclass over categories
//! - sentiment: binary, over samples that carry a sentiment
//! - emotion: one binary model per emotion, over samples with at least one
//!   induced emotion; per-label probabilities are ranked with LRAP

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::logreg::{train_logreg, LinearModel, LogRegParams};
use super::metrics::{lrap, metrics_multiclass, ClassMetrics};
use super::split::{holdout_split, kfold_stratified, Split};
use super::tfidf::{TfidfVectorizer, VectorizerConfig, FEATURE_VARIANT};
use super::{train_majority, EvalError};
use crate::augment::{Emotion, EmotionSet, EMOTION_COUNT};
use crate::labeler::LabeledSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Reaction,
    Sentiment,
    Emotion,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Reaction, Task::Sentiment, Task::Emotion];

    pub fn name(self) -> &'static str {
        match self {
            Task::Reaction => "reaction",
            Task::Sentiment => "sentiment",
            Task::Emotion => "emotion",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, EvalError> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| EvalError::UnknownTask(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Majority,
    Logreg,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Majority => "majority",
            ModelKind::Logreg => "logreg",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, EvalError> {
        match s {
            "majority" => Ok(ModelKind::Majority),
            "logreg" => Ok(ModelKind::Logreg),
            _ => Err(EvalError::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub task: Task,
    pub model: ModelKind,
    pub holdout_frac: f64,
    /// Folds for cross-validation on the training portion; 0 disables it.
    pub cv_folds: usize,
    pub seed: u64,
    pub vectorizer: VectorizerConfig,
    pub logreg: LogRegParams,
}

impl BaselineConfig {
    pub fn new(task: Task, model: ModelKind, seed: u64) -> Self {
        BaselineConfig {
            task,
            model,
            holdout_frac: 0.1,
            cv_folds: 5,
            seed,
            vectorizer: VectorizerConfig::default(),
            logreg: LogRegParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Target {
    Label(String),
    Labels(EmotionSet),
}

/// The task's view of a dataset: eligible samples with text and target.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskData {
    task: Task,
    samples: Vec<usize>,
    texts: Vec<String>,
    targets: Vec<Target>,
    strata: Vec<String>,
    position: BTreeMap<usize, usize>,
}

impl TaskData {
    pub fn new(samples: &[LabeledSample], task: Task) -> Result<Self, EvalError> {
        let mut data = TaskData {
            task,
            samples: Vec::new(),
            texts: Vec::new(),
            targets: Vec::new(),
            strata: Vec::new(),
            position: BTreeMap::new(),
        };
        for (i, s) in samples.iter().enumerate() {
            let target = match task {
                Task::Reaction => Target::Label(s.reaction.to_string()),
                Task::Sentiment => match s.sentiment {
                    Some(p) => Target::Label(p.name().to_string()),
                    None => continue,
                },
                Task::Emotion if s.emotions.is_empty() => continue,
                Task::Emotion => Target::Labels(s.emotions),
            };
            let text = s.root_text.clone().ok_or_else(|| EvalError::MissingText(s.root_id.clone()))?;
            let stratum = match &target {
                Target::Label(l) => l.clone(),
                Target::Labels(_) => s.reaction.to_string(),
            };
            data.position.insert(i, data.samples.len());
            data.samples.push(i);
            data.texts.push(text);
            data.targets.push(target);
            data.strata.push(stratum);
        }
        if data.samples.is_empty() {
            return Err(EvalError::EmptyDataset);
        }
        Ok(data)
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Dataset positions of the eligible samples.
    pub fn sample_indices(&self) -> &[usize] {
        &self.samples
    }

    /// Stratified holdout; indices in the result are dataset positions.
    pub fn holdout(&self, frac: f64, seed: u64) -> Result<Split, EvalError> {
        let split = holdout_split(&self.strata, frac, seed)?;
        Ok(Split {
            train: split.train.iter().map(|&p| self.samples[p]).collect(),
            test: split.test.iter().map(|&p| self.samples[p]).collect(),
            warnings: split.warnings,
        })
    }

    fn positions(&self, sample_indices: &[usize]) -> Result<Vec<usize>, EvalError> {
        sample_indices
            .iter()
            .map(|i| self.position.get(i).copied().ok_or(EvalError::NotInTask(*i)))
            .collect()
    }

    fn texts_at(&self, pos: &[usize]) -> Vec<&str> {
        pos.iter().map(|&p| self.texts[p].as_str()).collect()
    }

    fn labels_at(&self, pos: &[usize]) -> Vec<&str> {
        pos.iter()
            .map(|&p| match &self.targets[p] {
                Target::Label(l) => l.as_str(),
                Target::Labels(_) => unreachable!("single-label task"),
            })
            .collect()
    }

    fn sets_at(&self, pos: &[usize]) -> Vec<EmotionSet> {
        pos.iter()
            .map(|&p| match &self.targets[p] {
                Target::Labels(s) => *s,
                Target::Label(_) => unreachable!("multilabel task"),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BinaryScorer {
    Constant { probability: f64 },
    Model { model: LinearModel },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Predictor {
    Majority {
        label: String,
    },
    /// Training frequency of each emotion, used as the score of every sample.
    LabelPrior {
        priors: Vec<f64>,
    },
    Logreg {
        vectorizer: TfidfVectorizer,
        model: LinearModel,
    },
    OneVsRest {
        vectorizer: TfidfVectorizer,
        scorers: Vec<BinaryScorer>,
    },
}

const PRESENT: &str = "present";
const ABSENT: &str = "absent";

impl Predictor {
    fn fit(data: &TaskData, pos: &[usize], model: ModelKind, config: &BaselineConfig) -> Result<Self, EvalError> {
        if pos.is_empty() {
            return Err(EvalError::EmptyDataset);
        }
        let texts = data.texts_at(pos);
        match (data.task, model) {
            (Task::Emotion, ModelKind::Majority) => {
                let sets = data.sets_at(pos);
                let priors = Emotion::ALL
                    .iter()
                    .map(|e| sets.iter().filter(|s| s.contains(*e)).count() as f64 / sets.len() as f64)
                    .collect();
                Ok(Predictor::LabelPrior { priors })
            }
            (_, ModelKind::Majority) => Ok(Predictor::Majority {
                label: train_majority(&data.labels_at(pos))?.label().to_string(),
            }),
            (Task::Emotion, ModelKind::Logreg) => {
                let vectorizer = TfidfVectorizer::fit(config.vectorizer.clone(), &texts)?;
                let rows = vectorizer.transform_all(&texts);
                let sets = data.sets_at(pos);
                let mut scorers = Vec::with_capacity(EMOTION_COUNT);
                for e in Emotion::ALL {
                    let labels: Vec<&str> = sets.iter().map(|s| if s.contains(e) { PRESENT } else { ABSENT }).collect();
                    let positives = labels.iter().filter(|l| **l == PRESENT).count();
                    let scorer = if positives == 0 || positives == labels.len() {
                        BinaryScorer::Constant {
                            probability: positives as f64 / labels.len() as f64,
                        }
                    } else {
                        BinaryScorer::Model {
                            model: train_logreg(&rows, &labels, vectorizer.len(), &config.logreg)?,
                        }
                    };
                    scorers.push(scorer);
                }
                Ok(Predictor::OneVsRest { vectorizer, scorers })
            }
            (_, ModelKind::Logreg) => {
                let vectorizer = TfidfVectorizer::fit(config.vectorizer.clone(), &texts)?;
                let rows = vectorizer.transform_all(&texts);
                let model = train_logreg(&rows, &data.labels_at(pos), vectorizer.len(), &config.logreg)?;
                Ok(Predictor::Logreg { vectorizer, model })
            }
        }
    }

    fn predict_label(&self, text: &str) -> Result<String, EvalError> {
        match self {
            Predictor::Majority { label } => Ok(label.clone()),
            Predictor::Logreg { vectorizer, model } => Ok(model.predict(&vectorizer.transform(text)).to_string()),
            _ => Err(EvalError::TaskMismatch),
        }
    }

    fn predict_emotion_scores(&self, text: &str) -> Result<Vec<f64>, EvalError> {
        match self {
            Predictor::LabelPrior { priors } => Ok(priors.clone()),
            Predictor::OneVsRest { vectorizer, scorers } => {
                let row = vectorizer.transform(text);
                Ok(scorers
                    .iter()
                    .map(|s| match s {
                        BinaryScorer::Constant { probability } => *probability,
                        BinaryScorer::Model { model } => {
                            let p = model.predict_scores(&row);
                            let k = model.classes().iter().position(|c| c == PRESENT).expect("binary classes");
                            p[k]
                        }
                    })
                    .collect())
            }
            _ => Err(EvalError::TaskMismatch),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSupport {
    pub label: String,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lrap: Option<f64>,
}

fn score(
    predictor: &Predictor,
    data: &TaskData,
    pos: &[usize],
) -> Result<(Scores, Vec<ClassMetrics>, Vec<LabelSupport>), EvalError> {
    if pos.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let texts = data.texts_at(pos);
    if data.task == Task::Emotion {
        let sets = data.sets_at(pos);
        let scores = texts
            .iter()
            .map(|t| predictor.predict_emotion_scores(t))
            .collect::<Result<Vec<_>, _>>()?;
        let truth: Vec<Vec<bool>> = sets.iter().map(|s| Emotion::ALL.iter().map(|e| s.contains(*e)).collect()).collect();
        let support = Emotion::ALL
            .iter()
            .map(|e| LabelSupport {
                label: e.name().to_string(),
                support: sets.iter().filter(|s| s.contains(*e)).count(),
            })
            .collect();
        let s = Scores {
            accuracy: None,
            precision: None,
            recall: None,
            f1: None,
            lrap: Some(lrap(&scores, &truth)?),
        };
        return Ok((s, Vec::new(), support));
    }
    let gold = data.labels_at(pos);
    let pred = texts
        .iter()
        .map(|t| predictor.predict_label(t))
        .collect::<Result<Vec<_>, _>>()?;
    let m = metrics_multiclass(&gold, &pred)?;
    let support = m
        .per_class
        .iter()
        .map(|c| LabelSupport {
            label: c.label.clone(),
            support: c.support,
        })
        .collect();
    let s = Scores {
        accuracy: Some(m.accuracy),
        precision: Some(m.precision),
        recall: Some(m.recall),
        f1: Some(m.f1),
        lrap: None,
    };
    Ok((s, m.per_class, support))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub folds: usize,
    pub per_fold: Vec<Scores>,
    pub mean: Scores,
}

fn mean_scores(all: &[Scores]) -> Scores {
    let avg = |f: fn(&Scores) -> Option<f64>| -> Option<f64> {
        let vals: Option<Vec<f64>> = all.iter().map(f).collect();
        vals.map(|v| v.iter().sum::<f64>() / v.len() as f64)
    };
    Scores {
        accuracy: avg(|s| s.accuracy),
        precision: avg(|s| s.precision),
        recall: avg(|s| s.recall),
        f1: avg(|s| s.f1),
        lrap: avg(|s| s.lrap),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedBaseline {
    pub task: Task,
    pub model: ModelKind,
    pub n_train: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cv: Option<CvSummary>,
    pub predictor: Predictor,
}

/// Fits on the given dataset positions. With `cv_folds ≥ 2`, also runs
/// stratified cross-validation within those positions.
pub fn train_baseline(data: &TaskData, train: &[usize], config: &BaselineConfig) -> Result<TrainedBaseline, EvalError> {
    if config.task != data.task {
        return Err(EvalError::TaskMismatch);
    }
    let pos = data.positions(train)?;
    let cv = if config.cv_folds >= 2 {
        let strata: Vec<&str> = pos.iter().map(|&p| data.strata[p].as_str()).collect();
        let folds = kfold_stratified(&strata, config.cv_folds, config.seed)?;
        let mut per_fold = Vec::with_capacity(folds.len());
        for (f, fold) in folds.iter().enumerate() {
            let held: Vec<usize> = fold.iter().map(|&i| pos[i]).collect();
            let rest: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, idx)| idx.iter().map(|&i| pos[i]))
                .collect();
            let predictor = Predictor::fit(data, &rest, config.model, config)?;
            per_fold.push(score(&predictor, data, &held)?.0);
        }
        Some(CvSummary {
            folds: config.cv_folds,
            mean: mean_scores(&per_fold),
            per_fold,
        })
    } else {
        None
    };
    let predictor = Predictor::fit(data, &pos, config.model, config)?;
    Ok(TrainedBaseline {
        task: config.task,
        model: config.model,
        n_train: pos.len(),
        features: (config.model == ModelKind::Logreg).then(|| FEATURE_VARIANT.to_string()),
        cv,
        predictor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub model: ModelKind,
    pub n_train: usize,
    pub n_test: usize,
    #[serde(flatten)]
    pub scores: Scores,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_class: Vec<ClassMetrics>,
    pub support: Vec<LabelSupport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cv: Option<CvSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn evaluate_baseline(model: &TrainedBaseline, data: &TaskData, test: &[usize]) -> Result<EvalReport, EvalError> {
    if model.task != data.task {
        return Err(EvalError::TaskMismatch);
    }
    let pos = data.positions(test)?;
    let (scores, per_class, support) = score(&model.predictor, data, &pos)?;
    Ok(EvalReport {
        task: model.task,
        model: model.model,
        n_train: model.n_train,
        n_test: pos.len(),
        scores,
        per_class,
        support,
        features: model.features.clone(),
        cv: model.cv.clone(),
        warnings: Vec::new(),
    })
}

/// Holdout split, training (with CV on the training portion) and
/// evaluation on the held-out samples.
pub fn run_baseline(samples: &[LabeledSample], config: &BaselineConfig) -> Result<(TrainedBaseline, EvalReport), EvalError> {
    let data = TaskData::new(samples, config.task)?;
    let split = data.holdout(config.holdout_frac, config.seed)?;
    let model = train_baseline(&data, &split.train, config)?;
    let mut report = evaluate_baseline(&model, &data, &split.test)?;
    report.warnings = split.warnings;
    Ok((model, report))
}

fn pct(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{:.1}", 100.0 * x))
}

/// Aligned text table: one row per report, plus reserved rows for
/// externally computed neural baselines.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "Task".into(),
        "Model".into(),
        "Acc".into(),
        "P".into(),
        "R".into(),
        "F1".into(),
        "LRAP".into(),
    ]];
    for r in reports {
        rows.push([
            r.task.to_string(),
            r.model.to_string(),
            pct(r.scores.accuracy),
            pct(r.scores.precision),
            pct(r.scores.recall),
            pct(r.scores.f1),
            r.scores.lrap.map_or("-".into(), |x| format!("{x:.3}")),
        ]);
    }
    let mut tasks: Vec<Task> = reports.iter().map(|r| r.task).collect();
    tasks.sort();
    tasks.dedup();
    for t in tasks {
        for name in ["cnn (external)", "roberta (external)"] {
            let mut row: [String; 7] = Default::default();
            row[0] = t.to_string();
            row[1] = name.into();
            for cell in &mut row[2..] {
                *cell = "-".into();
            }
            rows.push(row);
        }
    }
    let widths: Vec<usize> = (0..7).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                if c < 2 {
                    format!("{cell:<w$}", w = widths[c])
                } else {
                    format!("{cell:>w$}", w = widths[c])
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
