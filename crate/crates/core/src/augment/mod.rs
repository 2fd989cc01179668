//! Label augmentation: induced sentiment from the category clusters and
//! induced emotions from annotators' category-to-emotion judgments.

mod agreement;
mod emotion;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affinity::SentimentMap;
use crate::dictionary::{CategoryRegistry, ReactionCategory};
use crate::labeler::LabeledSample;

pub use agreement::{
    agreement_report, binary_items, cohen_kappa, cohen_kappa_binary, fleiss_kappa, fleiss_kappa_counts,
    AgreementReport, PairwiseKappa,
};
pub use emotion::{Emotion, EmotionSet, UnknownEmotion, EMOTION_COUNT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("category `{0}` is not covered by the mapping")]
    Uncovered(String),
    #[error("sheet `{sheet}` does not cover category `{category}`")]
    IncompleteSheet { sheet: String, category: String },
    #[error("sheet `{sheet}` maps unknown category `{category}`")]
    UnknownCategory { sheet: String, category: String },
    #[error("sheets `{0}` and `{1}` cover different categories")]
    MismatchedRegistries(String, String),
    #[error("need at least 2 annotation sheets, got {0}")]
    TooFewSheets(usize),
    #[error("rating vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no items to compare")]
    NoItems,
    #[error("items have different rater counts")]
    InconsistentRaters,
    #[error("degenerate agreement: expected chance agreement is 1")]
    DegenerateAgreement,
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// One annotator's category → emotions judgments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSheet {
    pub annotator_id: String,
    pub mapping: BTreeMap<ReactionCategory, EmotionSet>,
}

impl AnnotationSheet {
    /// The mapping must cover exactly the registry's categories.
    pub fn validate(&self, registry: &CategoryRegistry) -> Result<(), AugmentError> {
        for cat in self.mapping.keys() {
            if !registry.contains(cat) {
                return Err(AugmentError::UnknownCategory {
                    sheet: self.annotator_id.clone(),
                    category: cat.to_string(),
                });
            }
        }
        for cat in registry.names() {
            if !self.mapping.contains_key(cat) {
                return Err(AugmentError::IncompleteSheet {
                    sheet: self.annotator_id.clone(),
                    category: cat.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, AugmentError> {
        let io = |message: String| AugmentError::Io {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| io(e.to_string()))
    }
}

/// Reads every `*.json` sheet in `dir`, in file-name order.
pub fn load_sheets(dir: &Path) -> Result<Vec<AnnotationSheet>, AugmentError> {
    let entries = fs::read_dir(dir).map_err(|e| AugmentError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| AnnotationSheet::load(p)).collect()
}

/// Aggregated category → emotions mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmotionMap(BTreeMap<ReactionCategory, EmotionSet>);

impl EmotionMap {
    pub fn from_map(map: BTreeMap<ReactionCategory, EmotionSet>) -> Self {
        EmotionMap(map)
    }

    pub fn get(&self, cat: &ReactionCategory) -> Option<EmotionSet> {
        self.0.get(cat).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReactionCategory, EmotionSet)> {
        self.0.iter().map(|(c, s)| (c, *s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Keeps an emotion for a category when strictly more than half of the
/// sheets select it.
pub fn majority_mapping(sheets: &[AnnotationSheet]) -> Result<EmotionMap, AugmentError> {
    if sheets.len() < 2 {
        return Err(AugmentError::TooFewSheets(sheets.len()));
    }
    let first = &sheets[0];
    for s in &sheets[1..] {
        if !first.mapping.keys().eq(s.mapping.keys()) {
            return Err(AugmentError::MismatchedRegistries(
                first.annotator_id.clone(),
                s.annotator_id.clone(),
            ));
        }
    }
    let n = sheets.len();
    let map = first
        .mapping
        .keys()
        .map(|cat| {
            let chosen: EmotionSet = Emotion::ALL
                .into_iter()
                .filter(|e| 2 * sheets.iter().filter(|s| s.mapping[cat].contains(*e)).count() > n)
                .collect();
            (cat.clone(), chosen)
        })
        .collect();
    Ok(EmotionMap(map))
}

/// Sets each sample's sentiment from its category's polarity; excluded
/// categories get none.
pub fn apply_sentiment(samples: &mut [LabeledSample], map: &SentimentMap) -> Result<(), AugmentError> {
    for s in samples.iter() {
        if map.get(&s.reaction).is_none() {
            return Err(AugmentError::Uncovered(s.reaction.to_string()));
        }
    }
    for s in samples.iter_mut() {
        s.sentiment = map.get(&s.reaction).and_then(|p| p.sentiment());
    }
    Ok(())
}

/// Replaces each sample's emotions with its category's mapped subset.
pub fn apply_emotions(samples: &mut [LabeledSample], emap: &EmotionMap) -> Result<(), AugmentError> {
    for s in samples.iter() {
        if emap.get(&s.reaction).is_none() {
            return Err(AugmentError::Uncovered(s.reaction.to_string()));
        }
    }
    for s in samples.iter_mut() {
        s.emotions = emap.get(&s.reaction).unwrap_or_default();
    }
    Ok(())
}
