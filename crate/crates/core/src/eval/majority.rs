use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Always predicts the most frequent training label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityClassifier {
    label: String,
}

/// Ties go to the lexicographically smallest label.
pub fn train_majority<S: AsRef<str>>(labels: &[S]) -> Result<MajorityClassifier, EvalError> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l.as_ref()).or_insert(0) += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (label, n) in counts {
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((label, n));
        }
    }
    let (label, _) = best.ok_or(EvalError::EmptyDataset)?;
    Ok(MajorityClassifier { label: label.to_string() })
}

impl MajorityClassifier {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn predict(&self) -> &str {
        &self.label
    }
}
