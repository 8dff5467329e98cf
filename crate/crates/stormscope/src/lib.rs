//! Corpus analytics for cross-platform outrage storms.
//!
//! The crate takes normalized message corpora (one JSON record per line)
//! and answers the questions a storm post-mortem asks: how did message
//! volume evolve, where are the peaks and phases, how do supporter and
//! opponent groups differ linguistically, can phase and stance be
//! predicted from surface features, and does a storm's shape match the
//! canonical cross-platform trajectory.
//!
//! Modules mirror the pipeline:
//!
//! * [`corpus`] — message schema, JSONL parsing, platform export adapters,
//!   reply-structure accounting.
//! * [`lexicon`] — category word lists (emotions, modality, toxicity, …)
//!   and exact-match token counting.
//! * [`features`] — tokenizer and the 35-dimensional linguistic feature
//!   vector extracted per message.
//! * [`timeline`] — activity binning, peak detection, phase/span
//!   segmentation, keyword trends.
//! * [`stats`] — participation, toxicity share, emoji and hashtag tables.
//! * [`groups`] — stance-group distributions over time and feature
//!   contrasts between groups.
//! * [`classify`] — multinomial logistic regression over feature rates for
//!   the phase and stance tasks.
//! * [`synth`] — a parametric generator of labeled synthetic storms used
//!   as a verification oracle for everything above.
//! * [`chart`] — deterministic SVG emission for timeline, stacked-area and
//!   bar plots.
//! * [`manifest`] — reproducibility manifests written next to artifacts.

// Numeric code indexes several parallel arrays with one loop variable;
// iterator rewrites would obscure the parameter layout.
#![allow(clippy::needless_range_loop)]

pub mod chart;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod features;
pub mod groups;
pub mod lexicon;
pub mod manifest;
pub mod stats;
pub mod synth;
pub mod timeline;

pub use corpus::{CoarseStance, Corpus, Message, Phase, Platform, StanceLabel};
pub use features::{FeatureVector, TokenizedText, FEATURE_NAMES, N_COUNT_FEATURES};
pub use lexicon::{Lexicon, LexiconRole, LexiconSet};
pub use timeline::{BinWidth, PhaseSegmentation, Span, TimelineSeries};
