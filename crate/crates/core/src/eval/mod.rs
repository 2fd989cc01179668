//! Splits, shallow baselines and metrics.

mod baseline;
pub mod lbfgs;
mod logreg;
mod majority;
mod metrics;
mod split;
mod tfidf;

use thiserror::Error;

pub use baseline::{
    evaluate_baseline, render_table, run_baseline, train_baseline, BaselineConfig, BinaryScorer, CvSummary,
    EvalReport, LabelSupport, ModelKind, Predictor, Scores, Task, TaskData, TrainedBaseline,
};
pub use logreg::{train_logreg, FitSummary, LinearModel, LogRegParams, LogisticObjective};
pub use majority::{train_majority, MajorityClassifier};
pub use metrics::{lrap, metrics_multiclass, ClassMetrics, ClassificationMetrics};
pub use split::{holdout_split, kfold_stratified, Split};
pub use tfidf::{english_stopwords, extract_terms, tokenize, SparseVector, TfidfVectorizer, VectorizerConfig, FEATURE_VARIANT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("empty dataset")]
    EmptyDataset,
    #[error("holdout fraction must be in (0, 1), got {0}")]
    InvalidFraction(f64),
    #[error("cannot make {k} folds from {n} samples")]
    InvalidFolds { k: usize, n: usize },
    #[error("length mismatch ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no features to train on")]
    NoFeatures,
    #[error("training needs at least 2 classes, got {0}")]
    SingleClass(usize),
    #[error("regularization strength must be positive, got {0}")]
    InvalidRegularization(f64),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("non-finite value")]
    NonFinite,
    #[error("row {0} has no true label")]
    NoTrueLabel(usize),
    #[error("sample `{0}` has no text")]
    MissingText(String),
    #[error("sample {0} is not part of this task")]
    NotInTask(usize),
    #[error("model and data belong to different tasks")]
    TaskMismatch,
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}
