//! Dendrogram serialization.
//!
//! JSON form: `{"leaves": [...], "root": node}` where a node is either
//! `{"leaf": name}` or `{"left", "right", "score", "size", "step"}`. `step`
//! is the merge index, which keeps the merge order recoverable.
//!
//! Newick form: leaf names quoted when needed, each internal node followed
//! by a `[score=..,size=..]` comment. Export only.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{AffinityError, ClusterTree, Merge};
use crate::dictionary::ReactionCategory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DendrogramFormat {
    Json,
    Newick,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Node {
    Leaf {
        leaf: ReactionCategory,
    },
    Internal {
        left: Box<Node>,
        right: Box<Node>,
        score: f64,
        size: usize,
        step: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct DendrogramJson {
    leaves: Vec<ReactionCategory>,
    root: Node,
}

fn to_node(tree: &ClusterTree, node: usize) -> Node {
    match tree.merge_of(node) {
        None => Node::Leaf {
            leaf: tree.leaves()[node].clone(),
        },
        Some(m) => Node::Internal {
            left: Box::new(to_node(tree, m.left)),
            right: Box::new(to_node(tree, m.right)),
            score: m.score,
            size: m.size,
            step: node - tree.leaves().len(),
        },
    }
}

fn quote_newick(name: &str) -> String {
    let plain = name
        .chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.');
    if plain && !name.is_empty() {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

fn write_newick(tree: &ClusterTree, node: usize, out: &mut String) {
    match tree.merge_of(node) {
        None => out.push_str(&quote_newick(tree.leaves()[node].as_str())),
        Some(m) => {
            out.push('(');
            write_newick(tree, m.left, out);
            out.push(',');
            write_newick(tree, m.right, out);
            out.push(')');
            write!(out, "[score={},size={}]", m.score, m.size).unwrap();
        }
    }
}

pub fn export_dendrogram(tree: &ClusterTree, format: DendrogramFormat) -> String {
    match format {
        DendrogramFormat::Json => {
            let doc = DendrogramJson {
                leaves: tree.leaves().to_vec(),
                root: to_node(tree, tree.root()),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("dendrogram serializes");
            s.push('\n');
            s
        }
        DendrogramFormat::Newick => {
            let mut s = String::new();
            write_newick(tree, tree.root(), &mut s);
            s.push_str(";\n");
            s
        }
    }
}

pub fn parse_dendrogram_json(text: &str) -> Result<ClusterTree, AffinityError> {
    let doc: DendrogramJson =
        serde_json::from_str(text).map_err(|e| AffinityError::InvalidTree(e.to_string()))?;
    let n = doc.leaves.len();
    if n == 0 {
        return Err(AffinityError::InvalidTree("no leaves".into()));
    }
    let leaf_index: HashMap<&ReactionCategory, usize> = doc.leaves.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut merges: Vec<Option<Merge>> = vec![None; n - 1];

    fn walk(
        node: &Node,
        leaf_index: &HashMap<&ReactionCategory, usize>,
        merges: &mut [Option<Merge>],
    ) -> Result<usize, AffinityError> {
        let n = leaf_index.len();
        match node {
            Node::Leaf { leaf } => leaf_index
                .get(leaf)
                .copied()
                .ok_or_else(|| AffinityError::InvalidTree(format!("leaf `{leaf}` not in leaves"))),
            Node::Internal {
                left,
                right,
                score,
                size,
                step,
            } => {
                let l = walk(left, leaf_index, merges)?;
                let r = walk(right, leaf_index, merges)?;
                let slot = merges
                    .get_mut(*step)
                    .ok_or_else(|| AffinityError::InvalidTree(format!("step {step} out of range")))?;
                if slot.is_some() {
                    return Err(AffinityError::InvalidTree(format!("duplicate step {step}")));
                }
                *slot = Some(Merge {
                    left: l,
                    right: r,
                    score: *score,
                    size: *size,
                });
                Ok(n + step)
            }
        }
    }

    let root = walk(&doc.root, &leaf_index, &mut merges)?;
    if root != 2 * n - 2 {
        return Err(AffinityError::InvalidTree("root is not the last merge".into()));
    }
    let merges = merges
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| AffinityError::InvalidTree("missing merge step".into()))?;
    ClusterTree::new(doc.leaves, merges)
}
