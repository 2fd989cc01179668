//! Category affinity: how many GIFs two reaction categories share, and the
//! average-linkage cluster tree built on that count.

mod dendrogram;
mod linkage;
mod sentiment;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{GifDictionary, ReactionCategory};

pub use dendrogram::{export_dendrogram, parse_dendrogram_json, DendrogramFormat};
pub use linkage::{cluster, cut_clusters, ClusterTree, Merge};
pub use sentiment::{derive_sentiment_map, Polarity, SentimentMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffinityError {
    #[error("clustering needs at least 2 categories, got {0}")]
    TooFewCategories(usize),
    #[error("cut size {k} outside 1..={leaves}")]
    CutOutOfRange { k: usize, leaves: usize },
    #[error("similarity matrix is not square/symmetric: {0}")]
    InvalidMatrix(String),
    #[error("invalid dendrogram: {0}")]
    InvalidTree(String),
    #[error("sentiment derivation needs exactly 2 clusters, got {0}")]
    NotTwoClusters(usize),
    #[error("polarity hint names cluster {0}, which does not exist")]
    BadHint(usize),
    #[error("category `{0}` appears in more than one cluster")]
    OverlappingClusters(String),
    #[error("cluster {0} is empty after removing excluded categories")]
    EmptyPolarity(usize),
    #[error("category `{0}` is not covered by the sentiment map")]
    Uncovered(String),
}

/// Pairwise shared-GIF counts between categories. The diagonal holds each
/// category's own GIF count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    categories: Vec<ReactionCategory>,
    values: Vec<u64>,
}

impl SimilarityMatrix {
    /// Builds a matrix from row-major values. The matrix must be symmetric.
    pub fn from_rows(categories: Vec<ReactionCategory>, rows: &[Vec<u64>]) -> Result<Self, AffinityError> {
        let n = categories.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(AffinityError::InvalidMatrix(format!("expected {n}x{n}")));
        }
        let distinct: BTreeSet<_> = categories.iter().collect();
        if distinct.len() != n {
            return Err(AffinityError::InvalidMatrix("duplicate category".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(AffinityError::InvalidMatrix(format!("s[{i}][{j}] != s[{j}][{i}]")));
                }
            }
        }
        Ok(SimilarityMatrix {
            categories,
            values: rows.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn categories(&self) -> &[ReactionCategory] {
        &self.categories
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.values[i * self.len() + j]
    }

    pub fn index_of(&self, cat: &ReactionCategory) -> Option<usize> {
        self.categories.iter().position(|c| c == cat)
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.values.chunks(self.len().max(1)).map(<[u64]>::to_vec).collect()
    }

    /// Sum of the strictly-upper triangle.
    pub fn off_diagonal_sum(&self) -> u64 {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).sum()
    }

    /// The sub-matrix without the listed categories. Unknown names are ignored.
    pub fn without(&self, excluded: &[ReactionCategory]) -> SimilarityMatrix {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| !excluded.contains(&self.categories[i]))
            .collect();
        let mut values = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                values.push(self.get(i, j));
            }
        }
        SimilarityMatrix {
            categories: keep.iter().map(|&i| self.categories[i].clone()).collect(),
            values,
        }
    }
}

/// Shared-GIF counts over the dictionary's populated categories, in
/// registry order. Categories with no GIFs are left out.
pub fn similarity_matrix(dict: &GifDictionary) -> SimilarityMatrix {
    let registry = dict.registry();
    let populated: Vec<usize> = (0..registry.len())
        .filter(|&r| dict.entries().iter().any(|e| registry.index_of(&e.category) == Some(r)))
        .collect();
    let n = populated.len();
    let mut slot = vec![usize::MAX; registry.len()];
    for (k, &r) in populated.iter().enumerate() {
        slot[r] = k;
    }

    let mut values = vec![0u64; n * n];
    for group in dict.identity_groups() {
        let mut cats: Vec<usize> = group
            .iter()
            .map(|&e| slot[registry.index_of(&dict.entries()[e].category).expect("registered")])
            .collect();
        cats.sort_unstable();
        cats.dedup();
        for (a, &i) in cats.iter().enumerate() {
            values[i * n + i] += 1;
            for &j in &cats[a + 1..] {
                values[i * n + j] += 1;
                values[j * n + i] += 1;
            }
        }
    }
    SimilarityMatrix {
        categories: populated.iter().map(|&r| registry.names()[r].clone()).collect(),
        values,
    }
}

/// Clusters the matrix without `excluded`, cuts the tree into two, and
/// returns the two parts ordered by their smallest member name.
pub fn sentiment_partition(
    sim: &SimilarityMatrix,
    excluded: &[ReactionCategory],
) -> Result<Vec<Vec<ReactionCategory>>, AffinityError> {
    let reduced = sim.without(excluded);
    let tree = cluster(&reduced)?;
    cut_clusters(&tree, 2)
}
