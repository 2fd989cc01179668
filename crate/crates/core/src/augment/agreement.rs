//! Interrater agreement over binary items.
//!
//! Sheets are compared item by item, one item per (category, emotion) pair,
//! each rated present or absent.

use serde::Serialize;

use super::{AnnotationSheet, AugmentError, Emotion};

/// Cohen's kappa for two binary raters.
pub fn cohen_kappa_binary(a: &[bool], b: &[bool]) -> Result<f64, AugmentError> {
    if a.len() != b.len() {
        return Err(AugmentError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(AugmentError::NoItems);
    }
    let n = a.len() as u64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as u64;
    let a1 = a.iter().filter(|x| **x).count() as u64;
    let b1 = b.iter().filter(|x| **x).count() as u64;
    // chance agreement scaled by n^2, kept integral for the degeneracy test
    let chance = a1 * b1 + (n - a1) * (n - b1);
    if chance == n * n {
        return Err(AugmentError::DegenerateAgreement);
    }
    let nf = n as f64;
    let p_o = agree as f64 / nf;
    let p_e = chance as f64 / (nf * nf);
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Fleiss' kappa from an items × categories count table. Every row must sum
/// to the same number of raters (at least 2).
pub fn fleiss_kappa_counts(table: &[Vec<usize>]) -> Result<f64, AugmentError> {
    if table.is_empty() {
        return Err(AugmentError::NoItems);
    }
    let raters: usize = table[0].iter().sum();
    if raters < 2 {
        return Err(AugmentError::TooFewSheets(raters));
    }
    let width = table[0].len();
    if table.iter().any(|row| row.len() != width || row.iter().sum::<usize>() != raters) {
        return Err(AugmentError::InconsistentRaters);
    }
    let items = table.len();
    let mut totals = vec![0usize; width];
    let mut p_bar = 0.0;
    for row in table {
        let agree: usize = row.iter().map(|&c| c * c).sum::<usize>() - raters;
        p_bar += agree as f64 / (raters * (raters - 1)) as f64;
        for (t, &c) in totals.iter_mut().zip(row) {
            *t += c;
        }
    }
    p_bar /= items as f64;
    let grand = items * raters;
    if totals.iter().any(|&t| t == grand) {
        return Err(AugmentError::DegenerateAgreement);
    }
    let p_e: f64 = totals
        .iter()
        .map(|&t| {
            let p = t as f64 / grand as f64;
            p * p
        })
        .sum();
    Ok((p_bar - p_e) / (1.0 - p_e))
}

fn same_categories(a: &AnnotationSheet, b: &AnnotationSheet) -> Result<(), AugmentError> {
    if a.mapping.keys().eq(b.mapping.keys()) {
        Ok(())
    } else {
        Err(AugmentError::MismatchedRegistries(a.annotator_id.clone(), b.annotator_id.clone()))
    }
}

/// Present/absent ratings of one sheet, category-major.
pub fn binary_items(sheet: &AnnotationSheet) -> Vec<bool> {
    sheet
        .mapping
        .values()
        .flat_map(|set| Emotion::ALL.iter().map(move |e| set.contains(*e)))
        .collect()
}

pub fn cohen_kappa(a: &AnnotationSheet, b: &AnnotationSheet) -> Result<f64, AugmentError> {
    same_categories(a, b)?;
    cohen_kappa_binary(&binary_items(a), &binary_items(b))
}

pub fn fleiss_kappa(sheets: &[AnnotationSheet]) -> Result<f64, AugmentError> {
    if sheets.len() < 2 {
        return Err(AugmentError::TooFewSheets(sheets.len()));
    }
    for s in &sheets[1..] {
        same_categories(&sheets[0], s)?;
    }
    let ratings: Vec<Vec<bool>> = sheets.iter().map(binary_items).collect();
    let table: Vec<Vec<usize>> = (0..ratings[0].len())
        .map(|i| {
            let present = ratings.iter().filter(|r| r[i]).count();
            vec![present, sheets.len() - present]
        })
        .collect();
    fleiss_kappa_counts(&table)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseKappa {
    pub first: String,
    pub second: String,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub items: usize,
    pub pairwise: Vec<PairwiseKappa>,
    pub fleiss: f64,
}

/// Cohen's kappa for every sheet pair (in input order) and Fleiss' kappa.
pub fn agreement_report(sheets: &[AnnotationSheet]) -> Result<AgreementReport, AugmentError> {
    let fleiss = fleiss_kappa(sheets)?;
    let mut pairwise = Vec::new();
    for i in 0..sheets.len() {
        for j in i + 1..sheets.len() {
            pairwise.push(PairwiseKappa {
                first: sheets[i].annotator_id.clone(),
                second: sheets[j].annotator_id.clone(),
                kappa: cohen_kappa(&sheets[i], &sheets[j])?,
            });
        }
    }
    Ok(AgreementReport {
        items: sheets[0].mapping.len() * Emotion::ALL.len(),
        pairwise,
        fleiss,
    })
}
