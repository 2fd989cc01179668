//! Stratified holdout and K-fold splits over sample indices.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn group_by_label<L: Ord>(labels: &[L]) -> BTreeMap<&L, Vec<usize>> {
    let mut groups: BTreeMap<&L, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    groups
}

/// Per-class test quotas: `frac * size` rounded down, then the remaining
/// slots up to `round(frac * N)` go to the largest fractional remainders
/// (ties to the earlier class).
fn test_quotas(sizes: &[usize], frac: f64) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let target = (frac * total as f64).round() as usize;
    let mut quotas = Vec::with_capacity(sizes.len());
    let mut remainders = Vec::with_capacity(sizes.len());
    for (c, &n) in sizes.iter().enumerate() {
        let exact = frac * n as f64;
        // snap values within rounding noise of an integer
        let base = if (exact - exact.round()).abs() < 1e-9 { exact.round() } else { exact.floor() };
        quotas.push((base as usize).min(n));
        remainders.push((c, (exact - base).max(0.0)));
    }
    let assigned: usize = quotas.iter().sum();
    let mut missing = target.saturating_sub(assigned);
    remainders.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (c, _) in remainders {
        if missing == 0 {
            break;
        }
        if quotas[c] < sizes[c] {
            quotas[c] += 1;
            missing -= 1;
        }
    }
    quotas
}

/// Stratified holdout. Deterministic for a given seed.
pub fn holdout_split<L: Ord + std::fmt::Display>(labels: &[L], frac: f64, seed: u64) -> Result<Split, EvalError> {
    if labels.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    if !(frac > 0.0 && frac < 1.0) {
        return Err(EvalError::InvalidFraction(frac));
    }
    let groups = group_by_label(labels);
    let sizes: Vec<usize> = groups.values().map(Vec::len).collect();
    let quotas = test_quotas(&sizes, frac);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Split {
        train: Vec::new(),
        test: Vec::new(),
        warnings: Vec::new(),
    };
    for ((label, members), &q) in groups.into_iter().zip(&quotas) {
        let mut members = members;
        members.shuffle(&mut rng);
        split.test.extend_from_slice(&members[..q]);
        split.train.extend_from_slice(&members[q..]);
        if q == members.len() {
            split
                .warnings
                .push(format!("class `{label}` has no training samples after the split"));
        }
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

/// Stratified K-fold: each class is shuffled and dealt round-robin, the
/// dealing position carrying over between classes so fold sizes stay
/// balanced too.
pub fn kfold_stratified<L: Ord>(labels: &[L], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidFolds { k, n: labels.len() });
    }
    if k > labels.len() {
        return Err(EvalError::InvalidFolds { k, n: labels.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (_, mut members) in group_by_label(labels) {
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}
