//! Descriptive statistics: repeat participation, toxicity share, emoji and
//! hashtag tables.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::Corpus;
use crate::features::tokenize;
use crate::lexicon::Lexicon;
use crate::timeline::TimelineSeries;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no message carries an author id; participation is undefined")]
    NoAuthoredMessages,
}

/// Repeat-participation summary over distinct authors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticipationStats {
    pub n_authors: u64,
    /// Fraction of authors with more than one message.
    pub frac_gt1: f64,
    /// Fraction of authors with more than two messages.
    pub frac_gt2: f64,
    /// Messages without an author id, excluded from the fractions.
    pub n_unauthored: u64,
}

pub fn participation_stats(corpus: &Corpus) -> Result<ParticipationStats, StatsError> {
    let mut per_author: BTreeMap<&str, u64> = BTreeMap::new();
    let mut unauthored = 0u64;
    for m in &corpus.messages {
        match &m.author_id {
            Some(a) => *per_author.entry(a.as_str()).or_insert(0) += 1,
            None => unauthored += 1,
        }
    }
    if per_author.is_empty() {
        return Err(StatsError::NoAuthoredMessages);
    }
    let n_authors = per_author.len() as u64;
    let gt1 = per_author.values().filter(|&&c| c > 1).count() as f64;
    let gt2 = per_author.values().filter(|&&c| c > 2).count() as f64;
    Ok(ParticipationStats {
        n_authors,
        frac_gt1: gt1 / n_authors as f64,
        frac_gt2: gt2 / n_authors as f64,
        n_unauthored: unauthored,
    })
}

/// A message is toxic when at least one of its tokens matches the toxicity
/// lexicon; the share is the fraction of such messages. Message-level
/// because the reference statistics are percentages of all messages.
pub fn toxicity_share(corpus: &Corpus, toxicity: &Lexicon) -> f64 {
    if corpus.is_empty() {
        return 0.0;
    }
    let flagged = corpus
        .messages
        .iter()
        .filter(|m| message_is_toxic(m, toxicity))
        .count();
    flagged as f64 / corpus.len() as f64
}

fn message_is_toxic(m: &crate::corpus::Message, toxicity: &Lexicon) -> bool {
    tokenize(&m.text, &m.lang)
        .tokens
        .iter()
        .any(|t| toxicity.contains(&t.lower))
}

/// Per-bin toxicity breakdown aligned with a timeline series:
/// (flagged, total) per bin.
pub fn toxicity_by_bin(
    corpus: &Corpus,
    toxicity: &Lexicon,
    series: &TimelineSeries,
) -> Vec<(u64, u64)> {
    let mut bins = vec![(0u64, 0u64); series.n_bins()];
    for (pos, m) in corpus.messages.iter().enumerate() {
        if let Some(b) = series.bin_of(pos, m) {
            bins[b].1 += 1;
            if message_is_toxic(m, toxicity) {
                bins[b].0 += 1;
            }
        }
    }
    bins
}

/// Emoji frequency table, descending by count, ties by code point.
pub fn emoji_table(corpus: &Corpus) -> Vec<(String, u64)> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for m in &corpus.messages {
        for (emoji, c) in tokenize(&m.text, &m.lang).emojis {
            *counts.entry(emoji).or_insert(0) += c as u64;
        }
    }
    let mut out: Vec<(String, u64)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Hashtag frequency table, case-folded, same ordering as [`emoji_table`].
pub fn hashtag_table(corpus: &Corpus) -> Vec<(String, u64)> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for m in &corpus.messages {
        for tag in tokenize(&m.text, &m.lang).hashtags {
            *counts.entry(tag).or_insert(0) += 1;
        }
    }
    let mut out: Vec<(String, u64)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Render a (key, count) table as two-column CSV.
pub fn count_table_csv(header: &str, rows: &[(String, u64)]) -> String {
    let mut out = format!("{header},count\n");
    for (k, c) in rows {
        // keys are emoji or #hashtags; commas cannot occur in either
        out.push_str(&format!("{k},{c}\n"));
    }
    out
}
