//! Distant-supervision labeling of short conversation texts using the
//! reaction GIFs posted in reply to them.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! - [`ingest`] loads 2-turn conversation pairs and applies eligibility filters.
//! - [`dictionary`] holds the catalog of reaction GIFs and their category placements.
//! - [`labeler`] resolves each reply GIF to a reaction category and labels the root text.
//! - [`affinity`] measures category overlap, clusters categories with average
//!   linkage, and derives sentiment polarity from the cluster tree.
//! - [`augment`] attaches sentiment and emotion labels and measures annotator agreement.
//! - [`eval`] provides splits, the Majority and TF-IDF + logistic regression
//!   baselines, and weighted / ranking metrics.
//! - [`cli`] wires the stages into the `gifaffect` command.

pub mod affinity;
pub mod augment;
pub mod cli;
pub mod dictionary;
pub mod digest;
pub mod eval;
pub mod ingest;
pub mod labeler;
pub mod synthetic;

pub use dictionary::{CategoryRegistry, GifDictionary, ReactionCategory};
pub use ingest::{ConversationPair, GifRef};
pub use labeler::LabeledSample;
