//! Reaction labeling: resolve each reply GIF to one category and use it as
//! the label of the root text.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::EmotionSet;
use crate::dictionary::{GifDictionary, Placement, ReactionCategory};
use crate::ingest::{filter_pair, ConversationPair, FilterDecision, FilterRules, RejectReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Positive,
    Negative,
}

impl Sentiment {
    pub fn name(self) -> &'static str {
        match self {
            Sentiment::Positive => "positive",
            Sentiment::Negative => "negative",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A root text with its induced-reaction label and augmented labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub root_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_text: Option<String>,
    pub reaction: ReactionCategory,
    #[serde(default)]
    pub sentiment: Option<Sentiment>,
    #[serde(default)]
    pub emotions: EmotionSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("no placements to resolve")]
    EmptyPlacements,
    #[error("distribution of an empty dataset")]
    EmptyDataset,
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
}

/// Picks the category in which the GIF is offered most prominently
/// (smallest position). Equal positions go to the lexicographically
/// smallest category name.
pub fn resolve_category(placements: &[Placement]) -> Result<ReactionCategory, LabelError> {
    placements
        .iter()
        .min_by(|a, b| a.position.cmp(&b.position).then_with(|| a.category.cmp(&b.category)))
        .map(|p| p.category.clone())
        .ok_or(LabelError::EmptyPlacements)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelOutcome {
    Labeled(LabeledSample),
    NotFound,
}

/// Labels one pair that has already passed filtering.
pub fn label_pair(dict: &GifDictionary, pair: &ConversationPair) -> LabelOutcome {
    let placements = dict.lookup(&pair.reply_gif);
    match resolve_category(&placements) {
        Ok(reaction) => LabelOutcome::Labeled(LabeledSample {
            root_id: pair.root_id.clone(),
            root_text: Some(pair.root_text.clone()),
            reaction,
            sentiment: None,
            emotions: EmotionSet::EMPTY,
        }),
        Err(_) => LabelOutcome::NotFound,
    }
}

/// Accounting of every input pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelReport {
    pub input: usize,
    pub accepted: usize,
    pub labeled: usize,
    pub discarded_not_found: usize,
    pub rejected_by_filter: BTreeMap<RejectReason, usize>,
}

impl LabelReport {
    pub fn rejected(&self) -> usize {
        self.rejected_by_filter.values().sum()
    }
}

/// Filters and labels `pairs` in input order. Duplicates are kept.
pub fn label_corpus(
    dict: &GifDictionary,
    pairs: &[ConversationPair],
    rules: &FilterRules,
) -> (Vec<LabeledSample>, LabelReport) {
    let mut report = LabelReport {
        input: pairs.len(),
        ..Default::default()
    };
    let mut samples = Vec::new();
    for pair in pairs {
        match filter_pair(pair, rules) {
            FilterDecision::Reject(reason) => {
                *report.rejected_by_filter.entry(reason).or_insert(0) += 1;
            }
            FilterDecision::Accept => {
                report.accepted += 1;
                match label_pair(dict, pair) {
                    LabelOutcome::Labeled(s) => {
                        report.labeled += 1;
                        samples.push(s);
                    }
                    LabelOutcome::NotFound => report.discarded_not_found += 1,
                }
            }
        }
    }
    (samples, report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryShare {
    pub category: ReactionCategory,
    pub count: usize,
    pub proportion: f64,
}

/// Per-category label proportions, largest first (ties by name).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub total: usize,
    pub shares: Vec<CategoryShare>,
}

impl Distribution {
    /// Sum of the `k` largest proportions.
    pub fn top_k_share(&self, k: usize) -> f64 {
        self.shares.iter().take(k).map(|s| s.proportion).sum()
    }

    pub fn proportion(&self, cat: &ReactionCategory) -> f64 {
        self.shares
            .iter()
            .find(|s| &s.category == cat)
            .map_or(0.0, |s| s.proportion)
    }
}

pub fn distribution(samples: &[LabeledSample]) -> Result<Distribution, LabelError> {
    if samples.is_empty() {
        return Err(LabelError::EmptyDataset);
    }
    let mut counts: BTreeMap<&ReactionCategory, usize> = BTreeMap::new();
    for s in samples {
        *counts.entry(&s.reaction).or_insert(0) += 1;
    }
    let total = samples.len();
    let mut shares: Vec<CategoryShare> = counts
        .into_iter()
        .map(|(c, n)| CategoryShare {
            category: c.clone(),
            count: n,
            proportion: n as f64 / total as f64,
        })
        .collect();
    shares.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.category.cmp(&b.category)));
    Ok(Distribution { total, shares })
}

pub fn write_samples<W: Write>(mut writer: W, samples: &[LabeledSample]) -> io::Result<()> {
    for s in samples {
        serde_json::to_writer(&mut writer, s)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_samples<R: BufRead>(reader: R) -> Result<Vec<LabeledSample>, LabelError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| LabelError::Record {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| LabelError::Record {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
