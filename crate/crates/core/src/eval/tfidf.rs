//! TF-IDF features over unigrams and adjacent bigrams.
//!
//! Variant: lowercase, Unicode word segmentation, stopwords removed before
//! bigrams are formed, raw-count tf, smoothed idf `ln((1+N)/(1+df)) + 1`,
//! rows L2-normalized.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use super::EvalError;

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

pub const FEATURE_VARIANT: &str =
    "tfidf: lowercase unicode words; unigrams+bigrams after stopword removal; tf=raw count; idf=ln((1+N)/(1+df))+1; l2-normalized rows";

pub fn english_stopwords() -> BTreeSet<String> {
    ENGLISH_STOPWORDS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorizerConfig {
    /// Minimum document frequency for a term to be kept.
    pub min_df: usize,
    pub max_features: usize,
    pub bigrams: bool,
    pub stopwords: BTreeSet<String>,
}

impl Default for VectorizerConfig {
    fn default() -> Self {
        VectorizerConfig {
            min_df: 2,
            max_features: 1000,
            bigrams: true,
            stopwords: english_stopwords(),
        }
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase().unicode_words().map(String::from).collect()
}

/// Unigrams and adjacent bigrams of the non-stopword tokens.
pub fn extract_terms(text: &str, config: &VectorizerConfig) -> Vec<String> {
    let tokens: Vec<String> = tokenize(text)
        .into_iter()
        .filter(|t| !config.stopwords.contains(t))
        .collect();
    let mut terms = tokens.clone();
    if config.bigrams {
        terms.extend(tokens.windows(2).map(|w| format!("{} {}", w[0], w[1])));
    }
    terms
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| (i as usize, v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StoredVectorizer", into = "StoredVectorizer")]
pub struct TfidfVectorizer {
    config: VectorizerConfig,
    n_docs: usize,
    vocabulary: Vec<String>,
    doc_freq: Vec<usize>,
    idf: Vec<f64>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct StoredVectorizer {
    config: VectorizerConfig,
    n_docs: usize,
    vocabulary: Vec<String>,
    doc_freq: Vec<usize>,
}

impl From<TfidfVectorizer> for StoredVectorizer {
    fn from(v: TfidfVectorizer) -> Self {
        StoredVectorizer {
            config: v.config,
            n_docs: v.n_docs,
            vocabulary: v.vocabulary,
            doc_freq: v.doc_freq,
        }
    }
}

impl TryFrom<StoredVectorizer> for TfidfVectorizer {
    type Error = String;

    fn try_from(s: StoredVectorizer) -> Result<Self, String> {
        if s.vocabulary.len() != s.doc_freq.len() {
            return Err("vocabulary and doc_freq lengths differ".into());
        }
        Ok(TfidfVectorizer::assemble(s.config, s.n_docs, s.vocabulary, s.doc_freq))
    }
}

fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

impl TfidfVectorizer {
    fn assemble(config: VectorizerConfig, n_docs: usize, vocabulary: Vec<String>, doc_freq: Vec<usize>) -> Self {
        let idf = doc_freq.iter().map(|&df| smoothed_idf(n_docs, df)).collect();
        let index = vocabulary.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        TfidfVectorizer {
            config,
            n_docs,
            vocabulary,
            doc_freq,
            idf,
            index,
        }
    }

    /// Learns the vocabulary: terms with df ≥ `min_df`, the `max_features`
    /// highest-df ones (ties by term), stored in lexicographic order.
    pub fn fit<S: AsRef<str>>(config: VectorizerConfig, texts: &[S]) -> Result<Self, EvalError> {
        if texts.is_empty() {
            return Err(EvalError::EmptyDataset);
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for text in texts {
            let distinct: BTreeSet<String> = extract_terms(text.as_ref(), &config).into_iter().collect();
            for t in distinct {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        let mut ranked: Vec<(String, usize)> = df.into_iter().filter(|(_, n)| *n >= config.min_df).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(config.max_features);
        ranked.sort_by(|a, b| a.0.cmp(&b.0));
        let (vocabulary, doc_freq) = ranked.into_iter().unzip();
        Ok(Self::assemble(config, texts.len(), vocabulary, doc_freq))
    }

    pub fn config(&self) -> &VectorizerConfig {
        &self.config
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn doc_freq(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&i| self.doc_freq[i])
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.index.get(term).map(|&i| self.idf[i])
    }

    /// TF-IDF row for `text`; unseen terms are ignored. An all-unseen text
    /// yields the zero vector.
    pub fn transform(&self, text: &str) -> SparseVector {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for t in extract_terms(text, &self.config) {
            if let Some(&i) = self.index.get(&t) {
                *tf.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let mut v = SparseVector {
            indices: Vec::with_capacity(tf.len()),
            values: Vec::with_capacity(tf.len()),
        };
        for (i, count) in tf {
            v.indices.push(i as u32);
            v.values.push(count * self.idf[i]);
        }
        let norm = v.norm();
        if norm > 0.0 {
            v.values.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    pub fn transform_all<S: AsRef<str>>(&self, texts: &[S]) -> Vec<SparseVector> {
        texts.iter().map(|t| self.transform(t.as_ref())).collect()
    }
}
