//! Activity binning, peak detection, phase segmentation, keyword trends.
//!
//! Two binning modes cover both kinds of corpora: fixed-duration bins over
//! timestamps (default one day), and ordinal bins of a fixed number of
//! messages for corpora without usable clocks. A corpus with mixed
//! timestamp presence must be binned ordinally — silently mixing the two
//! orders would misplace messages, so that case is an error.
//!
//! A peak is a strict local maximum of the (optionally smoothed) bin
//! counts with relative prominence: its count must reach a configurable
//! fraction of the global maximum. Plateaus resolve to their first bin;
//! the first and last bin qualify when they exceed their single neighbor.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, TimeZone, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{format_timestamp, Corpus, Message, Phase};
use crate::features::tokenize;
use crate::lexicon::Lexicon;

/// Bin width: wall-clock duration or a fixed message count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinWidth {
    Time(Duration),
    Ordinal(usize),
}

impl BinWidth {
    pub fn one_day() -> Self {
        BinWidth::Time(Duration::days(1))
    }
}

impl std::str::FromStr for BinWidth {
    type Err = TimelineError;

    /// Accepts `<n>d`, `<n>h`, `<n>m`, `<n>s` or `ordinal:<n>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(n) = s.strip_prefix("ordinal:") {
            let n: usize = n
                .parse()
                .map_err(|_| TimelineError::InvalidBinWidth(s.to_string()))?;
            if n == 0 {
                return Err(TimelineError::InvalidBinWidth(s.to_string()));
            }
            return Ok(BinWidth::Ordinal(n));
        }
        let (num, unit) = s.split_at(s.len().saturating_sub(1));
        let n: i64 = num
            .parse()
            .map_err(|_| TimelineError::InvalidBinWidth(s.to_string()))?;
        if n <= 0 {
            return Err(TimelineError::InvalidBinWidth(s.to_string()));
        }
        match unit {
            "d" => Ok(BinWidth::Time(Duration::days(n))),
            "h" => Ok(BinWidth::Time(Duration::hours(n))),
            "m" => Ok(BinWidth::Time(Duration::minutes(n))),
            "s" => Ok(BinWidth::Time(Duration::seconds(n))),
            _ => Err(TimelineError::InvalidBinWidth(s.to_string())),
        }
    }
}

/// Per-bin message counts, contiguous from the first to the last active
/// bin, empty bins included. `group_splits` (when filled) partitions every
/// bin's count by coarse stance, with an `unlabeled` bucket, so the split
/// sums reproduce the totals exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineSeries {
    pub width: BinWidth,
    /// Aligned start of bin 0 in time mode; `None` in ordinal mode.
    pub origin: Option<DateTime<Utc>>,
    pub counts: Vec<u64>,
    pub group_splits: Option<BTreeMap<String, Vec<u64>>>,
}

#[derive(Debug, Error)]
pub enum TimelineError {
    #[error("invalid bin width `{0}` (use e.g. 1d, 12h, 30m, ordinal:50)")]
    InvalidBinWidth(String),
    #[error(
        "corpus mixes messages with and without timestamps; \
         bin it with an explicit ordinal width (ordinal:<n>)"
    )]
    MixedTimestamps,
    #[error("corpus has no timestamps; use an ordinal bin width")]
    NoTimestamps,
    #[error("series is all zero; no peaks exist")]
    AllZeroSeries,
    #[error("min_prominence_fraction must be in (0, 1], got {0}")]
    InvalidProminence(f64),
    #[error("smoothing window must be an odd positive integer, got {0}")]
    InvalidWindow(usize),
    #[error("segmentation requires at least one peak")]
    NoPeaks,
    #[error("peak index {0} out of range for {1} bins")]
    PeakOutOfRange(usize, usize),
}

fn floor_to_width(ts: &DateTime<Utc>, width: &Duration) -> DateTime<Utc> {
    let secs = width.num_seconds().max(1);
    let t = ts.timestamp();
    Utc.timestamp_opt(t.div_euclid(secs) * secs, 0).unwrap()
}

impl TimelineSeries {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Bin index of a message given its position in the (normalized)
    /// corpus. Position drives ordinal mode; the timestamp drives time mode.
    pub fn bin_of(&self, position: usize, message: &Message) -> Option<usize> {
        match (&self.width, &self.origin) {
            (BinWidth::Ordinal(k), _) => Some(position / k),
            (BinWidth::Time(w), Some(origin)) => {
                let ts = message.timestamp?;
                let secs = w.num_seconds().max(1);
                let delta = ts.timestamp() - origin.timestamp();
                if delta < 0 {
                    return None;
                }
                Some((delta / secs) as usize)
            }
            _ => None,
        }
    }

    /// Human-readable start label of bin `i`: an ISO timestamp in time
    /// mode, the first message position in ordinal mode.
    pub fn bin_label(&self, i: usize) -> String {
        match (&self.width, &self.origin) {
            (BinWidth::Time(w), Some(origin)) => {
                format_timestamp(&(*origin + *w * i as i32))
            }
            (BinWidth::Ordinal(k), _) => (i * k).to_string(),
            _ => i.to_string(),
        }
    }
}

/// Bin message counts over the storm duration.
pub fn bin_counts(corpus: &Corpus, width: BinWidth) -> Result<TimelineSeries, TimelineError> {
    bin_counts_impl(corpus, width, false)
}

/// Like [`bin_counts`] but also splits every bin by coarse stance
/// (plus an `unlabeled` bucket).
pub fn bin_counts_with_groups(
    corpus: &Corpus,
    width: BinWidth,
) -> Result<TimelineSeries, TimelineError> {
    bin_counts_impl(corpus, width, true)
}

fn bin_counts_impl(
    corpus: &Corpus,
    width: BinWidth,
    with_groups: bool,
) -> Result<TimelineSeries, TimelineError> {
    let mut series = match width {
        BinWidth::Ordinal(k) => {
            if k == 0 {
                return Err(TimelineError::InvalidBinWidth("ordinal:0".into()));
            }
            let n_bins = corpus.len().div_ceil(k);
            let mut counts = vec![0u64; n_bins];
            for pos in 0..corpus.len() {
                counts[pos / k] += 1;
            }
            TimelineSeries {
                width,
                origin: None,
                counts,
                group_splits: None,
            }
        }
        BinWidth::Time(w) => {
            if corpus.mixed_timestamps() {
                return Err(TimelineError::MixedTimestamps);
            }
            if corpus.is_empty() {
                return Ok(TimelineSeries {
                    width,
                    origin: None,
                    counts: Vec::new(),
                    group_splits: None,
                });
            }
            if !corpus.fully_timestamped() {
                return Err(TimelineError::NoTimestamps);
            }
            let first = corpus.messages.first().unwrap().timestamp.unwrap();
            let last = corpus.messages.last().unwrap().timestamp.unwrap();
            let origin = floor_to_width(&first, &w);
            let secs = w.num_seconds().max(1);
            let n_bins = ((last.timestamp() - origin.timestamp()) / secs) as usize + 1;
            let mut counts = vec![0u64; n_bins];
            for m in &corpus.messages {
                let idx =
                    ((m.timestamp.unwrap().timestamp() - origin.timestamp()) / secs) as usize;
                counts[idx] += 1;
            }
            TimelineSeries {
                width,
                origin: Some(origin),
                counts,
                group_splits: None,
            }
        }
    };

    if with_groups {
        let n = series.n_bins();
        let mut splits: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for (pos, m) in corpus.messages.iter().enumerate() {
            let Some(bin) = series.bin_of(pos, m) else {
                continue;
            };
            let key = m
                .stance
                .as_ref()
                .map(|s| s.coarse.as_str().to_string())
                .unwrap_or_else(|| "unlabeled".to_string());
            splits.entry(key).or_insert_with(|| vec![0; n])[bin] += 1;
        }
        series.group_splits = Some(splits);
    }
    Ok(series)
}

/// Centered moving average with window shrinking at the edges.
fn smooth(counts: &[u64], window: usize) -> Vec<f64> {
    let h = window / 2;
    let n = counts.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h).min(n - 1);
            let sum: u64 = counts[lo..=hi].iter().sum();
            sum as f64 / (hi - lo + 1) as f64
        })
        .collect()
}

/// Detect peak bins.
///
/// After smoothing, a peak is a strict local maximum (an interior plateau
/// resolves to its first bin) whose smoothed count reaches
/// `min_prominence_fraction` of the smoothed global maximum. The first bin
/// qualifies when it exceeds the second, the last when it exceeds the
/// second-to-last. Defaults used by the CLI: fraction 0.25, window 1.
pub fn detect_peaks(
    series: &TimelineSeries,
    min_prominence_fraction: f64,
    smoothing_window: usize,
) -> Result<Vec<usize>, TimelineError> {
    if !(min_prominence_fraction > 0.0 && min_prominence_fraction <= 1.0) {
        return Err(TimelineError::InvalidProminence(min_prominence_fraction));
    }
    if smoothing_window == 0 || smoothing_window.is_multiple_of(2) {
        return Err(TimelineError::InvalidWindow(smoothing_window));
    }
    if series.counts.iter().all(|&c| c == 0) {
        return Err(TimelineError::AllZeroSeries);
    }

    let s = smooth(&series.counts, smoothing_window);
    let n = s.len();
    let max = s.iter().cloned().fold(f64::MIN, f64::max);
    let threshold = min_prominence_fraction * max;

    let mut peaks = Vec::new();
    if n == 1 {
        peaks.push(0);
    } else {
        if s[0] > s[1] {
            peaks.push(0);
        }
        let mut i = 1;
        while i < n - 1 {
            if s[i] > s[i - 1] {
                // scan a potential plateau starting at i
                let mut j = i;
                while j + 1 < n && s[j + 1] == s[i] {
                    j += 1;
                }
                if j < n - 1 && s[j + 1] < s[i] {
                    peaks.push(i);
                }
                i = j + 1;
            } else {
                i += 1;
            }
        }
        if s[n - 1] > s[n - 2] {
            peaks.push(n - 1);
        }
    }

    Ok(peaks.into_iter().filter(|&i| s[i] >= threshold).collect())
}

/// Spans of the four-part segmentation refined by peak structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Span {
    S1,
    S2,
    S3,
    S4,
}

impl Span {
    pub fn as_str(&self) -> &'static str {
        match self {
            Span::S1 => "s1",
            Span::S2 => "s2",
            Span::S3 => "s3",
            Span::S4 => "s4",
        }
    }
}

/// Peak list plus per-bin phase labels in both segmentation schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSegmentation {
    pub peaks: Vec<usize>,
    /// One label per bin; begin precedes middle precedes end.
    pub phase3: Vec<Phase>,
    /// One label per bin; s1..s4 in order, inner spans may be empty.
    pub span4: Vec<Span>,
}

/// Segment bins into the three phases and four spans.
///
/// Three-phase rule: begin runs through the first peak, middle through the
/// last peak, end after it. When the last peak is the final bin, the end
/// phase is that bin itself so that all three phases exist whenever the
/// series has at least two bins.
///
/// Four-span rule over the first three peaks p1 < p2 < p3: s1 ends at p1,
/// s2 at p2, s3 at p3, s4 is the rest; with fewer peaks the inner spans
/// are empty.
pub fn segment_phases(
    series: &TimelineSeries,
    peaks: &[usize],
) -> Result<PhaseSegmentation, TimelineError> {
    let n = series.n_bins();
    if peaks.is_empty() {
        return Err(TimelineError::NoPeaks);
    }
    let mut peaks = peaks.to_vec();
    peaks.sort_unstable();
    peaks.dedup();
    if let Some(&bad) = peaks.iter().find(|&&p| p >= n) {
        return Err(TimelineError::PeakOutOfRange(bad, n));
    }
    let p_first = peaks[0];
    let p_last = *peaks.last().unwrap();

    let end_start = if p_last + 1 < n {
        p_last + 1
    } else if p_last > 0 {
        p_last
    } else {
        n // single bin: everything is begin
    };
    let begin_end = (p_first + 1).min(end_start);
    let phase3 = (0..n)
        .map(|i| {
            if i < begin_end {
                Phase::Begin
            } else if i < end_start {
                Phase::Middle
            } else {
                Phase::End
            }
        })
        .collect();

    let b1 = p_first + 1;
    let b2 = peaks.get(1).map(|p| p + 1).unwrap_or(b1);
    let b3 = peaks.get(2).map(|p| p + 1).unwrap_or(b2);
    let span4 = (0..n)
        .map(|i| {
            if i < b1 {
                Span::S1
            } else if i < b2 {
                Span::S2
            } else if i < b3 {
                Span::S3
            } else {
                Span::S4
            }
        })
        .collect();

    Ok(PhaseSegmentation {
        peaks,
        phase3,
        span4,
    })
}

/// Top-k keywords by global frequency with per-bin counts.
///
/// Tokens come from the message tokenizer (words only, emojis excluded);
/// stopwords are removed when a stopword lexicon is given. Ties in the
/// global ranking break lexicographically.
pub fn keyword_timeline(
    corpus: &Corpus,
    series: &TimelineSeries,
    top_k: usize,
    stopwords: Option<&Lexicon>,
) -> Vec<(String, Vec<u64>)> {
    if top_k == 0 {
        return Vec::new();
    }
    let mut global: BTreeMap<String, u64> = BTreeMap::new();
    let mut per_message: Vec<(usize, Vec<String>)> = Vec::new();
    for (pos, m) in corpus.messages.iter().enumerate() {
        let Some(bin) = series.bin_of(pos, m) else {
            continue;
        };
        let tk = tokenize(&m.text, &m.lang);
        let mut kept = Vec::new();
        for t in tk.tokens {
            if stopwords.is_some_and(|sw| sw.contains(&t.lower)) {
                continue;
            }
            *global.entry(t.lower.clone()).or_insert(0) += 1;
            kept.push(t.lower);
        }
        per_message.push((bin, kept));
    }

    let mut ranked: Vec<(String, u64)> = global.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(top_k);

    let n = series.n_bins();
    let index: BTreeMap<&str, usize> = ranked
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (w.as_str(), i))
        .collect();
    let mut bins_per_keyword: Vec<Vec<u64>> = vec![vec![0u64; n]; ranked.len()];
    for (bin, words) in &per_message {
        for w in words {
            if let Some(&i) = index.get(w.as_str()) {
                bins_per_keyword[i][*bin] += 1;
            }
        }
    }
    ranked
        .into_iter()
        .zip(bins_per_keyword)
        .map(|((w, _), bins)| (w, bins))
        .collect()
}

/// Timeline CSV: `bin_start,total` plus, when group splits are present,
/// one column per coarse stance and an `unlabeled` column.
pub fn timeline_csv(series: &TimelineSeries) -> String {
    let group_keys: Vec<String> = if series.group_splits.is_some() {
        crate::corpus::CoarseStance::ALL
            .iter()
            .map(|s| s.as_str().to_string())
            .chain(std::iter::once("unlabeled".to_string()))
            .collect()
    } else {
        Vec::new()
    };
    let mut out = String::from("bin_start,total");
    for k in &group_keys {
        out.push(',');
        out.push_str(k);
    }
    out.push('\n');
    for i in 0..series.n_bins() {
        out.push_str(&series.bin_label(i));
        out.push(',');
        out.push_str(&series.counts[i].to_string());
        if let Some(splits) = &series.group_splits {
            for k in &group_keys {
                let count = splits.get(k).map(|v| v[i]).unwrap_or(0);
                out.push(',');
                out.push_str(&count.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// JSON report of peaks and both segmentations.
#[derive(Debug, Serialize)]
pub struct SegmentationReport {
    pub n_bins: usize,
    pub bin_labels: Vec<String>,
    pub peaks: Vec<usize>,
    pub peak_labels: Vec<String>,
    pub phase3: Vec<Phase>,
    pub span4: Vec<Span>,
}

pub fn segmentation_report(
    series: &TimelineSeries,
    seg: &PhaseSegmentation,
) -> SegmentationReport {
    SegmentationReport {
        n_bins: series.n_bins(),
        bin_labels: (0..series.n_bins()).map(|i| series.bin_label(i)).collect(),
        peaks: seg.peaks.clone(),
        peak_labels: seg.peaks.iter().map(|&p| series.bin_label(p)).collect(),
        phase3: seg.phase3.clone(),
        span4: seg.span4.clone(),
    }
}
