//! Agglomerative clustering with average linkage on a similarity matrix.
//!
//! At each step the pair of clusters with the highest mean pairwise
//! similarity is merged. Means are compared exactly as fractions of
//! integers, so ties are detected exactly and resolved by the pair of
//! smallest member names.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{AffinityError, SimilarityMatrix};
use crate::dictionary::ReactionCategory;

/// One merge. Node ids below the leaf count are leaves; merge `k` creates
/// node `leaves + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Mean similarity between the two merged clusters.
    pub score: f64,
    /// Number of leaves under the new node.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTree {
    leaves: Vec<ReactionCategory>,
    merges: Vec<Merge>,
}

impl ClusterTree {
    /// Checks the structural invariants before accepting a tree.
    pub fn new(leaves: Vec<ReactionCategory>, merges: Vec<Merge>) -> Result<Self, AffinityError> {
        let n = leaves.len();
        if n == 0 {
            return Err(AffinityError::InvalidTree("no leaves".into()));
        }
        if merges.len() + 1 != n {
            return Err(AffinityError::InvalidTree(format!(
                "{n} leaves need {} merges, got {}",
                n - 1,
                merges.len()
            )));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut size: Vec<usize> = vec![1; n];
        for (k, m) in merges.iter().enumerate() {
            let node = n + k;
            for child in [m.left, m.right] {
                if child >= node || used[child] {
                    return Err(AffinityError::InvalidTree(format!("merge {k} reuses or forward-references node {child}")));
                }
                used[child] = true;
            }
            if m.left == m.right {
                return Err(AffinityError::InvalidTree(format!("merge {k} joins a node with itself")));
            }
            let s = size[m.left] + size[m.right];
            if s != m.size {
                return Err(AffinityError::InvalidTree(format!("merge {k} size {} != {s}", m.size)));
            }
            size.push(s);
        }
        Ok(ClusterTree { leaves, merges })
    }

    pub fn leaves(&self) -> &[ReactionCategory] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn root(&self) -> usize {
        2 * self.leaves.len() - 2
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.leaves.len()
    }

    pub fn merge_of(&self, node: usize) -> Option<&Merge> {
        node.checked_sub(self.leaves.len()).and_then(|k| self.merges.get(k))
    }

    /// True when merge scores never increase from the first merge to the last.
    pub fn scores_non_increasing(&self) -> bool {
        self.merges.windows(2).all(|w| w[1].score <= w[0].score)
    }

    /// Leaf indices under `node`.
    pub fn members(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            match self.merge_of(x) {
                Some(m) => {
                    stack.push(m.right);
                    stack.push(m.left);
                }
                None => out.push(x),
            }
        }
        out
    }
}

/// Exact mean: `sum / pairs`.
#[derive(Debug, Clone, Copy)]
struct Mean {
    sum: u64,
    pairs: u64,
}

impl Mean {
    fn cmp(&self, other: &Mean) -> Ordering {
        (self.sum as u128 * other.pairs as u128).cmp(&(other.sum as u128 * self.pairs as u128))
    }
}

struct Cluster {
    node: usize,
    size: usize,
    min_name: ReactionCategory,
}

/// Average-linkage clustering maximizing mean similarity.
pub fn cluster(sim: &SimilarityMatrix) -> Result<ClusterTree, AffinityError> {
    let n = sim.len();
    if n < 2 {
        return Err(AffinityError::TooFewCategories(n));
    }
    // cross sums between active clusters, indexed by slot
    let mut cross: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| sim.get(i, j)).collect()).collect();
    let mut slots: Vec<Option<Cluster>> = sim
        .categories()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Some(Cluster {
                node: i,
                size: 1,
                min_name: c.clone(),
            })
        })
        .collect();

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let active: Vec<usize> = (0..n).filter(|&i| slots[i].is_some()).collect();
        let mut best: Option<(usize, usize, Mean)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let (ca, cb) = (slots[a].as_ref().unwrap(), slots[b].as_ref().unwrap());
                let mean = Mean {
                    sum: cross[a][b],
                    pairs: (ca.size * cb.size) as u64,
                };
                let better = match &best {
                    None => true,
                    Some((ba, bb, bm)) => match mean.cmp(bm) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => {
                            pair_key(ca, cb) < pair_key(slots[*ba].as_ref().unwrap(), slots[*bb].as_ref().unwrap())
                        }
                    },
                };
                if better {
                    best = Some((a, b, mean));
                }
            }
        }
        let (a, b, mean) = best.expect("at least two active clusters");
        let cb = slots[b].take().unwrap();
        let ca = slots[a].take().unwrap();
        let (left, right) = if ca.min_name <= cb.min_name { (&ca, &cb) } else { (&cb, &ca) };
        merges.push(Merge {
            left: left.node,
            right: right.node,
            score: mean.sum as f64 / mean.pairs as f64,
            size: ca.size + cb.size,
        });
        for &c in &active {
            if c != a && c != b {
                let s = cross[a][c] + cross[b][c];
                cross[a][c] = s;
                cross[c][a] = s;
            }
        }
        slots[a] = Some(Cluster {
            node: n + step,
            size: ca.size + cb.size,
            min_name: left.min_name.clone(),
        });
    }
    ClusterTree::new(sim.categories().to_vec(), merges)
}

fn pair_key<'a>(a: &'a Cluster, b: &'a Cluster) -> (&'a ReactionCategory, &'a ReactionCategory) {
    if a.min_name <= b.min_name {
        (&a.min_name, &b.min_name)
    } else {
        (&b.min_name, &a.min_name)
    }
}

/// Undoes the last `k - 1` merges. Each part is sorted by name and parts
/// are ordered by their first member.
pub fn cut_clusters(tree: &ClusterTree, k: usize) -> Result<Vec<Vec<ReactionCategory>>, AffinityError> {
    let n = tree.leaves.len();
    if k == 0 || k > n {
        return Err(AffinityError::CutOutOfRange { k, leaves: n });
    }
    // the roots of the cut are the nodes not consumed by the first n-k merges
    let kept = n - k;
    let mut consumed = vec![false; n + kept];
    for m in &tree.merges[..kept] {
        consumed[m.left] = true;
        consumed[m.right] = true;
    }
    let mut parts: Vec<Vec<ReactionCategory>> = (0..n + kept)
        .filter(|&node| !consumed[node])
        .map(|node| {
            let mut names: Vec<ReactionCategory> =
                tree.members(node).into_iter().map(|i| tree.leaves[i].clone()).collect();
            names.sort();
            names
        })
        .collect();
    parts.sort();
    Ok(parts)
}
