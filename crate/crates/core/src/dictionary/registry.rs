use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DictionaryError;

const DEFAULT_REGISTRY: &str = include_str!("../../data/categories.txt");

/// A reaction category name in canonical form (trimmed, lowercase).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReactionCategory(String);

impl ReactionCategory {
    pub fn new(name: &str) -> Self {
        ReactionCategory(name.trim().to_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ReactionCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ReactionCategory {
    fn from(s: &str) -> Self {
        ReactionCategory::new(s)
    }
}

/// Ordered set of the reaction categories known for a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryRegistry {
    names: Vec<ReactionCategory>,
    index: HashMap<ReactionCategory, usize>,
}

impl CategoryRegistry {
    pub fn from_names<I, S>(names: I) -> Result<Self, DictionaryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = CategoryRegistry {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let cat = ReactionCategory::new(name.as_ref());
            if cat.as_str().is_empty() {
                return Err(DictionaryError::Registry("empty category name".into()));
            }
            if out.index.contains_key(&cat) {
                return Err(DictionaryError::Registry(format!("duplicate category `{cat}`")));
            }
            out.index.insert(cat.clone(), out.names.len());
            out.names.push(cat);
        }
        if out.names.is_empty() {
            return Err(DictionaryError::Registry("registry has no categories".into()));
        }
        Ok(out)
    }

    /// Parses one name per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, DictionaryError> {
        Self::from_names(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: &Path) -> Result<Self, DictionaryError> {
        let text = fs::read_to_string(path).map_err(|source| DictionaryError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The shipped 43-name registry.
    pub fn default_registry() -> Self {
        Self::parse(DEFAULT_REGISTRY).expect("bundled registry is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[ReactionCategory] {
        &self.names
    }

    pub fn index_of(&self, cat: &ReactionCategory) -> Option<usize> {
        self.index.get(cat).copied()
    }

    pub fn contains(&self, cat: &ReactionCategory) -> bool {
        self.index.contains_key(cat)
    }

    /// Looks up a raw name, normalizing it first.
    pub fn resolve(&self, name: &str) -> Result<ReactionCategory, DictionaryError> {
        let cat = ReactionCategory::new(name);
        if self.contains(&cat) {
            Ok(cat)
        } else {
            Err(DictionaryError::UnknownCategory(cat.0))
        }
    }
}
