//! Weighted classification metrics and label ranking average precision.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold occurrences.
    pub support: usize,
}

/// Accuracy plus support-weighted precision, recall and F1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: Vec<ClassMetrics>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn metrics_multiclass<G: AsRef<str>, P: AsRef<str>>(
    gold: &[G],
    pred: &[P],
) -> Result<ClassificationMetrics, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::LengthMismatch(gold.len(), pred.len()));
    }
    if gold.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    // label -> (true positives, gold count, predicted count)
    let mut counts: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    let mut correct = 0;
    for (g, p) in gold.iter().zip(pred) {
        let (g, p) = (g.as_ref(), p.as_ref());
        counts.entry(g).or_default().1 += 1;
        counts.entry(p).or_default().2 += 1;
        if g == p {
            counts.get_mut(g).expect("inserted").0 += 1;
            correct += 1;
        }
    }
    let n = gold.len();
    let mut out = ClassificationMetrics {
        accuracy: ratio(correct, n),
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        per_class: Vec::with_capacity(counts.len()),
    };
    for (label, (tp, support, predicted)) in counts {
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let w = support as f64 / n as f64;
        out.precision += w * precision;
        out.recall += w * recall;
        out.f1 += w * f1;
        out.per_class.push(ClassMetrics {
            label: label.to_string(),
            precision,
            recall,
            f1,
            support,
        });
    }
    Ok(out)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact running sum of small fractions; `None` once it would overflow.
#[derive(Clone, Copy)]
struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    fn add(self, num: u128, den: u128) -> Option<Ratio> {
        let g = gcd(self.den, den);
        let den_out = (self.den / g).checked_mul(den)?;
        let num_out = self.num.checked_mul(den / g)?.checked_add(num.checked_mul(self.den / g)?)?;
        let r = gcd(num_out, den_out).max(1);
        Some(Ratio {
            num: num_out / r,
            den: den_out / r,
        })
    }
}

/// Average precision of one row (which has at least one true label).
fn row_precision(s: &[f64], t: &[bool]) -> f64 {
    let n_true = t.iter().filter(|x| **x).count();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    // walk tie groups from the top; every member of a group sees the whole
    // group as ranked at or above it
    let (mut seen_all, mut seen_true) = (0usize, 0usize);
    let mut exact = Some(Ratio { num: 0, den: 1 });
    let mut approx = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && s[order[end]] == s[order[start]] {
            end += 1;
        }
        let group_true = order[start..end].iter().filter(|&&k| t[k]).count();
        seen_all += end - start;
        seen_true += group_true;
        if group_true > 0 {
            exact = exact.and_then(|r| r.add((group_true * seen_true) as u128, seen_all as u128));
            approx += (group_true * seen_true) as f64 / seen_all as f64;
        }
        start = end;
    }
    match exact.and_then(|r| r.den.checked_mul(n_true as u128).map(|d| (r.num, d))) {
        Some((num, den)) => num as f64 / den as f64,
        None => approx / n_true as f64,
    }
}

/// Label ranking average precision. Tied scores count as ranked above.
pub fn lrap(scores: &[Vec<f64>], truth: &[Vec<bool>]) -> Result<f64, EvalError> {
    if scores.len() != truth.len() {
        return Err(EvalError::LengthMismatch(scores.len(), truth.len()));
    }
    if scores.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let mut total = 0.0;
    for (row, (s, t)) in scores.iter().zip(truth).enumerate() {
        if s.len() != t.len() {
            return Err(EvalError::LengthMismatch(s.len(), t.len()));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(EvalError::NonFinite);
        }
        let n_true = t.iter().filter(|x| **x).count();
        if n_true == 0 {
            return Err(EvalError::NoTrueLabel(row));
        }
        total += row_precision(s, t);
    }
    Ok(total / scores.len() as f64)
}
