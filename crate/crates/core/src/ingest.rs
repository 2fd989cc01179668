//! Loading and filtering of 2-turn conversation pairs.
//!
//! A pair is a root post consisting of text and a reply consisting of a
//! reaction GIF. Pairs are read from line-delimited JSON, one record per
//! line, and then screened by [`filter_pair`].

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::{ContentDigest, DEFAULT_DIGEST_LEN};

/// Reference to the GIF attached to a reply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GifRef {
    /// Platform media identifier.
    pub asset_id: Option<String>,
    pub content_digest: Option<ContentDigest>,
    pub media_url: Option<String>,
}

impl GifRef {
    pub fn from_asset(asset_id: impl Into<String>) -> Self {
        GifRef {
            asset_id: Some(asset_id.into()),
            content_digest: None,
            media_url: None,
        }
    }

    pub fn from_digest(digest: ContentDigest) -> Self {
        GifRef {
            asset_id: None,
            content_digest: Some(digest),
            media_url: None,
        }
    }

    /// Identity rule: when both sides carry an asset id, the ids decide.
    /// Otherwise the GIFs are the same iff both carry equal content digests.
    pub fn same_gif(&self, other: &GifRef) -> bool {
        match (&self.asset_id, &other.asset_id) {
            (Some(a), Some(b)) => a == b,
            _ => match (&self.content_digest, &other.content_digest) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }

    pub fn validate(&self, digest_len: usize) -> Result<(), RecordError> {
        if self.asset_id.as_deref().map_or(true, str::is_empty) && self.content_digest.is_none() {
            return Err(RecordError::MissingGifIdentity);
        }
        if let Some(d) = &self.content_digest {
            if d.len() != digest_len {
                return Err(RecordError::DigestLength {
                    expected: digest_len,
                    found: d.len(),
                });
            }
        }
        Ok(())
    }

    /// Short human-readable identity, for error messages.
    pub fn describe(&self) -> String {
        match (&self.asset_id, &self.content_digest) {
            (Some(a), _) => format!("asset:{a}"),
            (None, Some(d)) => format!("digest:{d}"),
            (None, None) => "<no identity>".to_string(),
        }
    }
}

/// One root-text / reply-GIF interaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversationPair {
    pub root_id: String,
    pub root_text: String,
    pub root_lang: Option<String>,
    pub root_has_media: bool,
    pub root_has_links: bool,
    pub reply_id: String,
    pub reply_gif: GifRef,
    /// True if the reply carries anything besides the GIF.
    pub reply_extra_content: bool,
}

impl ConversationPair {
    pub fn validate(&self, digest_len: usize) -> Result<(), RecordError> {
        if self.root_id.is_empty() {
            return Err(RecordError::EmptyField("root_id"));
        }
        if self.reply_id.is_empty() {
            return Err(RecordError::EmptyField("reply_id"));
        }
        if self.root_id == self.reply_id {
            return Err(RecordError::SameIds);
        }
        if self.root_text.trim().is_empty() {
            return Err(RecordError::EmptyField("root_text"));
        }
        self.reply_gif.validate(digest_len)
    }
}

/// Why a single record is malformed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("invalid record: {0}")]
    Json(String),
    #[error("field `{0}` is empty")]
    EmptyField(&'static str),
    #[error("root_id and reply_id are identical")]
    SameIds,
    #[error("reply_gif has neither asset_id nor content_digest")]
    MissingGifIdentity,
    #[error("content_digest is {found} bytes, expected {expected}")]
    DigestLength { expected: usize, found: usize },
}

/// A malformed line, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub error: RecordError,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid rules file {path}: {message}")]
    Rules { path: PathBuf, message: String },
}

/// Result of reading a pair file: well-formed pairs in file order, plus
/// one report per malformed line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadOutcome {
    pub pairs: Vec<ConversationPair>,
    pub errors: Vec<LineError>,
}

pub fn load_pairs(source_path: &Path) -> Result<LoadOutcome, IngestError> {
    load_pairs_with(source_path, DEFAULT_DIGEST_LEN)
}

pub fn load_pairs_with(source_path: &Path, digest_len: usize) -> Result<LoadOutcome, IngestError> {
    let text = fs::read_to_string(source_path).map_err(|source| IngestError::Io {
        path: source_path.to_path_buf(),
        source,
    })?;
    Ok(parse_pairs(&text, digest_len))
}

/// Parses line-delimited pair records. Blank lines are skipped.
pub fn parse_pairs(text: &str, digest_len: usize) -> LoadOutcome {
    let mut out = LoadOutcome::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<ConversationPair>(line)
            .map_err(|e| RecordError::Json(e.to_string()))
            .and_then(|pair| pair.validate(digest_len).map(|()| pair));
        match parsed {
            Ok(pair) => out.pairs.push(pair),
            Err(error) => out.errors.push(LineError {
                line: idx + 1,
                error,
            }),
        }
    }
    out
}

/// Writes pairs in the canonical record format, one per line.
pub fn write_pairs<W: Write>(mut writer: W, pairs: &[ConversationPair]) -> io::Result<()> {
    for pair in pairs {
        serde_json::to_writer(&mut writer, pair)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Eligibility rules applied to every loaded pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterRules {
    pub require_language: Option<String>,
    pub require_text_only_root: bool,
    pub require_gif_only_reply: bool,
}

impl Default for FilterRules {
    fn default() -> Self {
        FilterRules {
            require_language: Some("en".to_string()),
            require_text_only_root: true,
            require_gif_only_reply: true,
        }
    }
}

impl FilterRules {
    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| IngestError::Rules {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Machine-readable rejection reason. Variants are listed in the order the
/// rules are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Language,
    RootMedia,
    RootLinks,
    ReplyExtra,
}

impl RejectReason {
    pub const ALL: [RejectReason; 4] = [
        RejectReason::Language,
        RejectReason::RootMedia,
        RejectReason::RootLinks,
        RejectReason::ReplyExtra,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RejectReason::Language => "language",
            RejectReason::RootMedia => "root-media",
            RejectReason::RootLinks => "root-links",
            RejectReason::ReplyExtra => "reply-extra",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecision {
    Accept,
    Reject(RejectReason),
}

impl FilterDecision {
    pub fn is_accept(self) -> bool {
        matches!(self, FilterDecision::Accept)
    }
}

/// `tag` satisfies `required` when equal ignoring ASCII case, or when
/// `required` is the primary subtag of `tag` ("en" accepts "en-GB").
fn language_matches(tag: &str, required: &str) -> bool {
    if tag.eq_ignore_ascii_case(required) {
        return true;
    }
    match tag.split_once('-') {
        Some((primary, _)) => primary.eq_ignore_ascii_case(required),
        None => false,
    }
}

/// Applies the rules in fixed order and reports the first failure.
pub fn filter_pair(pair: &ConversationPair, rules: &FilterRules) -> FilterDecision {
    if let Some(required) = &rules.require_language {
        let ok = pair
            .root_lang
            .as_deref()
            .is_some_and(|tag| language_matches(tag, required));
        if !ok {
            return FilterDecision::Reject(RejectReason::Language);
        }
    }
    if rules.require_text_only_root {
        if pair.root_has_media {
            return FilterDecision::Reject(RejectReason::RootMedia);
        }
        if pair.root_has_links {
            return FilterDecision::Reject(RejectReason::RootLinks);
        }
    }
    if rules.require_gif_only_reply && pair.reply_extra_content {
        return FilterDecision::Reject(RejectReason::ReplyExtra);
    }
    FilterDecision::Accept
}
