//! Normalized message schema, corpus parsing and platform export adapters.
//!
//! The canonical on-disk form is UTF-8 JSON Lines: one message object per
//! line with the fields of [`Message`] (`stance` flattened to
//! `stance_coarse` / `stance_sub`, absent optionals omitted). A corpus-level
//! metadata record `{"_corpus_meta": {...}}` may precede the messages; it is
//! written only when metadata is present so that plain message streams stay
//! plain.
//!
//! Timestamps are second-precision UTC. They are optional per message
//! because some platform exports carry no usable clock (Reddit dumps in
//! particular); `relative_order` then provides the total order, and every
//! time-based consumer in this crate accepts it as a fallback.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

use chrono::{DateTime, NaiveDateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Where a message came from, by interaction style rather than brand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Platform {
    TwitterLike,
    TelegramLike,
    RedditLike,
}

impl Platform {
    pub fn as_str(&self) -> &'static str {
        match self {
            Platform::TwitterLike => "twitter_like",
            Platform::TelegramLike => "telegram_like",
            Platform::RedditLike => "reddit_like",
        }
    }
}

impl std::str::FromStr for Platform {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "twitter_like" => Ok(Platform::TwitterLike),
            "telegram_like" => Ok(Platform::TelegramLike),
            "reddit_like" => Ok(Platform::RedditLike),
            other => Err(format!("unknown platform `{other}`")),
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coarse position of a message author relative to the storm's target person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarseStance {
    SupportTarget,
    OpposeTarget,
    Neutral,
    SupportBoth,
    OpposeBoth,
    OffTopic,
}

impl CoarseStance {
    pub const ALL: [CoarseStance; 6] = [
        CoarseStance::SupportTarget,
        CoarseStance::OpposeTarget,
        CoarseStance::Neutral,
        CoarseStance::SupportBoth,
        CoarseStance::OpposeBoth,
        CoarseStance::OffTopic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CoarseStance::SupportTarget => "support_target",
            CoarseStance::OpposeTarget => "oppose_target",
            CoarseStance::Neutral => "neutral",
            CoarseStance::SupportBoth => "support_both",
            CoarseStance::OpposeBoth => "oppose_both",
            CoarseStance::OffTopic => "off_topic",
        }
    }
}

impl std::str::FromStr for CoarseStance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CoarseStance::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown stance `{s}`"))
    }
}

impl fmt::Display for CoarseStance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stance with an optional free-form subgroup (e.g. the explanation
/// categories opponents give for the target's behaviour).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanceLabel {
    pub coarse: CoarseStance,
    pub sub: Option<String>,
}

impl StanceLabel {
    pub fn coarse(coarse: CoarseStance) -> Self {
        StanceLabel { coarse, sub: None }
    }
}

/// Storm phase in the three-phase scheme: intense beginning, middle up to
/// the last peak, ending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Begin,
    Middle,
    End,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Begin, Phase::Middle, Phase::End];

    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Begin => "begin",
            Phase::Middle => "middle",
            Phase::End => "end",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One normalized post or comment from any platform.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    /// Unique within a corpus.
    pub id: String,
    pub platform: Platform,
    pub thread_id: String,
    /// Absent means: reply to the thread root, or the root itself
    /// (disambiguated by `is_root`).
    pub parent_id: Option<String>,
    pub is_root: bool,
    /// Absent when the platform hides authors.
    pub author_id: Option<String>,
    /// Second-precision UTC. Absent when the export carries no clock.
    pub timestamp: Option<DateTime<Utc>>,
    /// Total order within the corpus when timestamps are absent.
    pub relative_order: u64,
    /// BCP-47 tag, e.g. "en", "de".
    pub lang: String,
    pub text: String,
    pub stance: Option<StanceLabel>,
    pub phase_gold: Option<Phase>,
    /// Unmapped platform fields preserved by the export adapters.
    pub meta: HashMap<String, String>,
}

impl Message {
    /// Minimal constructor used throughout tests and the generator.
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Message {
            id: id.into(),
            platform: Platform::TwitterLike,
            thread_id: "t0".to_string(),
            parent_id: None,
            is_root: false,
            author_id: None,
            timestamp: None,
            relative_order: 0,
            lang: "en".to_string(),
            text: text.into(),
            stance: None,
            phase_gold: None,
            meta: HashMap::new(),
        }
    }
}

/// Wire form of [`Message`]: flat field names, optionals omitted when absent.
#[derive(Debug, Serialize, Deserialize)]
struct MessageRecord {
    id: String,
    platform: Platform,
    thread_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent_id: Option<String>,
    is_root: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    author_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relative_order: Option<u64>,
    lang: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stance_coarse: Option<CoarseStance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stance_sub: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase_gold: Option<Phase>,
    #[serde(default, skip_serializing_if = "HashMap::is_empty")]
    meta: HashMap<String, String>,
}

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.format(TIMESTAMP_FORMAT).to_string()
}

pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>, CorpusError> {
    let naive = NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT)
        .map_err(|e| CorpusError::Timestamp(s.to_string(), e.to_string()))?;
    Ok(Utc.from_utc_datetime(&naive))
}

impl MessageRecord {
    fn from_message(m: &Message) -> Self {
        MessageRecord {
            id: m.id.clone(),
            platform: m.platform,
            thread_id: m.thread_id.clone(),
            parent_id: m.parent_id.clone(),
            is_root: m.is_root,
            author_id: m.author_id.clone(),
            timestamp: m.timestamp.as_ref().map(format_timestamp),
            relative_order: Some(m.relative_order),
            lang: m.lang.clone(),
            text: m.text.clone(),
            stance_coarse: m.stance.as_ref().map(|s| s.coarse),
            stance_sub: m.stance.as_ref().and_then(|s| s.sub.clone()),
            phase_gold: m.phase_gold,
            meta: m.meta.clone(),
        }
    }

    fn into_message(self, line_no: usize) -> Result<Message, CorpusError> {
        let timestamp = match &self.timestamp {
            Some(s) => Some(parse_timestamp(s).map_err(|_| CorpusError::Malformed {
                line: line_no,
                detail: format!("invalid timestamp `{s}` (expected YYYY-MM-DDThh:mm:ssZ)"),
            })?),
            None => None,
        };
        if timestamp.is_none() && self.relative_order.is_none() {
            return Err(CorpusError::Malformed {
                line: line_no,
                detail: "record has neither timestamp nor relative_order; no total order exists \
                         (add relative_order for ordinal mode)"
                    .to_string(),
            });
        }
        if self.text.trim().is_empty() {
            return Err(CorpusError::Malformed {
                line: line_no,
                detail: "field text is empty after trimming".to_string(),
            });
        }
        let stance = self.stance_coarse.map(|coarse| StanceLabel {
            coarse,
            sub: self.stance_sub.clone(),
        });
        Ok(Message {
            id: self.id,
            platform: self.platform,
            thread_id: self.thread_id,
            parent_id: self.parent_id,
            is_root: self.is_root,
            author_id: self.author_id,
            timestamp,
            // When only a timestamp is given the line position is a valid
            // fallback order; normalize() sorts by timestamp first anyway.
            relative_order: self.relative_order.unwrap_or(line_no as u64),
            lang: self.lang,
            text: self.text,
            stance,
            phase_gold: self.phase_gold,
            meta: self.meta,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CorpusMetaRecord {
    _corpus_meta: std::collections::BTreeMap<String, String>,
}

/// An ordered, deduplicated sequence of messages plus free-form metadata
/// (storm name, target person, source notes).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub messages: Vec<Message>,
    pub meta: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{detail} at line {line}")]
    Malformed { line: usize, detail: String },
    #[error("invalid timestamp `{0}`: {1}")]
    Timestamp(String, String),
    #[error("unknown export kind `{0}`")]
    UnknownExportKind(String),
    #[error("invalid {kind} export: {detail}")]
    InvalidExport { kind: String, detail: String },
    #[error("dangling parent ids (not found in their thread): {}", .0.join(", "))]
    DanglingParents(Vec<String>),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Warnings accumulated by [`parse_corpus`]; parsing degrades gracefully
/// instead of failing on messy scraped data.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseWarnings {
    /// Lines dropped because their id was already seen.
    pub duplicate_ids: u64,
}

/// Outcome of a successful parse.
#[derive(Debug)]
pub struct ParseOutcome {
    pub corpus: Corpus,
    pub warnings: ParseWarnings,
}

/// Parse a line-delimited record stream into a validated, normalized corpus.
///
/// Duplicate ids collapse to their first occurrence and are only counted,
/// never fatal. Empty streams yield an empty corpus.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<ParseOutcome, CorpusError> {
    let mut messages: Vec<Message> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut meta = std::collections::BTreeMap::new();
    let mut warnings = ParseWarnings::default();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if line.contains("\"_corpus_meta\"") {
            if let Ok(rec) = serde_json::from_str::<CorpusMetaRecord>(&line) {
                meta.extend(rec._corpus_meta);
                continue;
            }
        }
        let record: MessageRecord = serde_json::from_str(&line).map_err(|e| {
            // serde's message carries its own position within the line;
            // strip it and report the stream line instead.
            let msg = e.to_string();
            let detail = match msg.find(" at line ") {
                Some(pos) => msg[..pos].to_string(),
                None => msg,
            };
            CorpusError::Malformed {
                line: line_no,
                detail,
            }
        })?;
        let message = record.into_message(line_no)?;
        if seen.insert(message.id.clone()) {
            messages.push(message);
        } else {
            warnings.duplicate_ids += 1;
        }
    }

    let mut corpus = Corpus { messages, meta };
    corpus.normalize();
    Ok(ParseOutcome { corpus, warnings })
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Whether every message carries a timestamp.
    pub fn fully_timestamped(&self) -> bool {
        self.messages.iter().all(|m| m.timestamp.is_some())
    }

    /// Whether timestamp presence is mixed (some with, some without).
    pub fn mixed_timestamps(&self) -> bool {
        let with = self.messages.iter().filter(|m| m.timestamp.is_some()).count();
        with != 0 && with != self.messages.len()
    }

    /// Deduplicate by first occurrence, then sort into the canonical order:
    /// by (timestamp, relative_order, id) when fully timestamped, otherwise
    /// by (relative_order, id). Idempotent.
    pub fn normalize(&mut self) {
        let mut seen = HashSet::new();
        self.messages.retain(|m| seen.insert(m.id.clone()));
        if self.fully_timestamped() {
            self.messages
                .sort_by(|a, b| (a.timestamp, a.relative_order, &a.id).cmp(&(b.timestamp, b.relative_order, &b.id)));
        } else {
            self.messages
                .sort_by(|a, b| (a.relative_order, &a.id).cmp(&(b.relative_order, &b.id)));
        }
    }

    /// Serialize to the canonical JSONL form. The metadata record is written
    /// first, and only when metadata is present.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        if !self.meta.is_empty() {
            let rec = CorpusMetaRecord {
                _corpus_meta: self.meta.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("meta serializes"));
            out.push('\n');
        }
        for m in &self.messages {
            let rec = MessageRecord::from_message(m);
            out.push_str(&serde_json::to_string(&rec).expect("message serializes"));
            out.push('\n');
        }
        out
    }
}

/// Raw export dialects accepted by [`adapt_export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    TwitterV2Json,
    TelegramExportJson,
    RedditDumpJson,
}

impl std::str::FromStr for ExportKind {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "twitter_v2_json" => Ok(ExportKind::TwitterV2Json),
            "telegram_export_json" => Ok(ExportKind::TelegramExportJson),
            "reddit_dump_json" => Ok(ExportKind::RedditDumpJson),
            other => Err(CorpusError::UnknownExportKind(other.to_string())),
        }
    }
}

fn invalid(kind: &str, detail: impl Into<String>) -> CorpusError {
    CorpusError::InvalidExport {
        kind: kind.to_string(),
        detail: detail.into(),
    }
}

/// Map a raw platform export document into normalized messages.
///
/// The mapping is lossless: platform fields without a schema slot land in
/// each message's `meta` side-channel as strings.
pub fn adapt_export(raw: &str, kind: ExportKind) -> Result<Vec<Message>, CorpusError> {
    match kind {
        ExportKind::TwitterV2Json => adapt_twitter_v2(raw),
        ExportKind::TelegramExportJson => adapt_telegram(raw),
        ExportKind::RedditDumpJson => adapt_reddit(raw),
    }
}

fn meta_insert(meta: &mut HashMap<String, String>, key: &str, value: &serde_json::Value) {
    let rendered = match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    meta.insert(key.to_string(), rendered);
}

/// Twitter API v2 response shape: `{"data": [tweet, ...]}`.
fn adapt_twitter_v2(raw: &str) -> Result<Vec<Message>, CorpusError> {
    const KIND: &str = "twitter_v2_json";
    let doc: serde_json::Value =
        serde_json::from_str(raw).map_err(|e| invalid(KIND, e.to_string()))?;
    let data = doc
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| invalid(KIND, "missing `data` array"))?;

    let mut out = Vec::with_capacity(data.len());
    for (i, tweet) in data.iter().enumerate() {
        let obj = tweet
            .as_object()
            .ok_or_else(|| invalid(KIND, format!("data[{i}] is not an object")))?;
        let id = obj
            .get("id")
            .and_then(|v| v.as_str())
            .ok_or_else(|| invalid(KIND, format!("data[{i}] missing `id`")))?
            .to_string();
        let text = obj
            .get("text")
            .and_then(|v| v.as_str())
            .ok_or_else(|| invalid(KIND, format!("data[{i}] missing `text`")))?
            .to_string();
        let thread_id = obj
            .get("conversation_id")
            .and_then(|v| v.as_str())
            .unwrap_or(&id)
            .to_string();
        let timestamp = match obj.get("created_at").and_then(|v| v.as_str()) {
            Some(s) => Some(
                DateTime::parse_from_rfc3339(s)
                    .map_err(|e| invalid(KIND, format!("data[{i}] created_at: {e}")))?
                    .with_timezone(&Utc),
            ),
            None => None,
        };
        let parent_id = obj
            .get("referenced_tweets")
            .and_then(|v| v.as_array())
            .and_then(|refs| {
                refs.iter().find_map(|r| {
                    (r.get("type").and_then(|t| t.as_str()) == Some("replied_to"))
                        .then(|| r.get("id").and_then(|v| v.as_str()).map(str::to_string))
                        .flatten()
                })
            });
        let is_root = parent_id.is_none() && thread_id == id;

        let mut meta = HashMap::new();
        for (key, value) in obj {
            if !matches!(
                key.as_str(),
                "id" | "text" | "conversation_id" | "created_at" | "referenced_tweets"
                    | "author_id" | "lang"
            ) {
                meta_insert(&mut meta, key, value);
            }
        }

        out.push(Message {
            id,
            platform: Platform::TwitterLike,
            thread_id,
            parent_id,
            is_root,
            author_id: obj
                .get("author_id")
                .and_then(|v| v.as_str())
                .map(str::to_string),
            timestamp,
            relative_order: i as u64,
            lang: obj
                .get("lang")
                .and_then(|v| v.as_str())
                .unwrap_or("en")
                .to_string(),
            text,
            stance: None,
            phase_gold: None,
            meta,
        });
    }
    Ok(out)
}

/// Telegram Desktop export shape: `{"name": ..., "id": ..., "messages": [...]}`.
/// Rich-text messages carry `text` as an array of strings and tagged parts.
fn adapt_telegram(raw: &str) -> Result<Vec<Message>, CorpusError> {
    const KIND: &str = "telegram_export_json";
    let doc: serde_json::Value =
        serde_json::from_str(raw).map_err(|e| invalid(KIND, e.to_string()))?;
    let chat_id = doc
        .get("id")
        .map(|v| v.to_string())
        .or_else(|| doc.get("name").and_then(|v| v.as_str()).map(str::to_string))
        .unwrap_or_else(|| "telegram_chat".to_string());
    let msgs = doc
        .get("messages")
        .and_then(|v| v.as_array())
        .ok_or_else(|| invalid(KIND, "missing `messages` array"))?;

    let mut out = Vec::new();
    let mut order: u64 = 0;
    for (i, msg) in msgs.iter().enumerate() {
        let obj = msg
            .as_object()
            .ok_or_else(|| invalid(KIND, format!("messages[{i}] is not an object")))?;
        if let Some(ty) = obj.get("type").and_then(|v| v.as_str()) {
            if ty != "message" {
                continue; // service entries (pins, joins) carry no text
            }
        }
        let id = obj
            .get("id")
            .map(|v| v.to_string().trim_matches('"').to_string())
            .ok_or_else(|| invalid(KIND, format!("messages[{i}] missing `id`")))?;
        let text = flatten_telegram_text(obj.get("text"));
        if text.trim().is_empty() {
            continue; // media-only posts
        }
        let timestamp = match obj.get("date").and_then(|v| v.as_str()) {
            // Telegram exports write naive local time; treated as UTC.
            Some(s) => Some(
                NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S")
                    .map(|n| Utc.from_utc_datetime(&n))
                    .or_else(|_| {
                        DateTime::parse_from_rfc3339(s).map(|d| d.with_timezone(&Utc))
                    })
                    .map_err(|e| invalid(KIND, format!("messages[{i}] date: {e}")))?,
            ),
            None => None,
        };
        let parent_id = obj
            .get("reply_to_message_id")
            .and_then(|v| v.as_i64())
            .map(|v| v.to_string());

        let mut meta = HashMap::new();
        for (key, value) in obj {
            if !matches!(
                key.as_str(),
                "id" | "text" | "date" | "reply_to_message_id" | "from_id" | "from" | "type"
            ) {
                meta_insert(&mut meta, key, value);
            }
        }

        out.push(Message {
            id,
            platform: Platform::TelegramLike,
            thread_id: chat_id.clone(),
            parent_id,
            // First message of the export is the channel post under
            // discussion; later reply-less messages are replies to it.
            is_root: out.is_empty(),
            author_id: obj
                .get("from_id")
                .map(|v| v.to_string().trim_matches('"').to_string())
                .or_else(|| obj.get("from").and_then(|v| v.as_str()).map(str::to_string)),
            timestamp,
            relative_order: order,
            lang: "de".to_string(),
            text,
            stance: None,
            phase_gold: None,
            meta,
        });
        order += 1;
    }
    Ok(out)
}

fn flatten_telegram_text(value: Option<&serde_json::Value>) -> String {
    match value {
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(serde_json::Value::Array(parts)) => parts
            .iter()
            .map(|p| match p {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Object(o) => o
                    .get("text")
                    .and_then(|t| t.as_str())
                    .unwrap_or_default()
                    .to_string(),
                _ => String::new(),
            })
            .collect(),
        _ => String::new(),
    }
}

/// Reddit dump shape: a JSON array of submission/comment objects (or
/// `{"data": [...]}`). Exact clocks are unavailable in these dumps, so
/// messages get document order and no timestamp; any `created_utc` is
/// preserved in `meta` untouched.
fn adapt_reddit(raw: &str) -> Result<Vec<Message>, CorpusError> {
    const KIND: &str = "reddit_dump_json";
    let doc: serde_json::Value =
        serde_json::from_str(raw).map_err(|e| invalid(KIND, e.to_string()))?;
    let items = doc
        .as_array()
        .or_else(|| doc.get("data").and_then(|d| d.as_array()))
        .ok_or_else(|| invalid(KIND, "expected a JSON array (or `data` array)"))?;

    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let obj = item
            .as_object()
            .ok_or_else(|| invalid(KIND, format!("item {i} is not an object")))?;
        let id = obj
            .get("id")
            .and_then(|v| v.as_str())
            .ok_or_else(|| invalid(KIND, format!("item {i} missing `id`")))?
            .to_string();
        let text = obj
            .get("body")
            .or_else(|| obj.get("selftext"))
            .or_else(|| obj.get("title"))
            .and_then(|v| v.as_str())
            .unwrap_or_default()
            .to_string();
        if text.trim().is_empty() {
            continue;
        }
        let link_id = obj
            .get("link_id")
            .and_then(|v| v.as_str())
            .map(strip_thing_prefix)
            .unwrap_or(&id)
            .to_string();
        let parent_raw = obj.get("parent_id").and_then(|v| v.as_str());
        let is_root = parent_raw.is_none() && !obj.contains_key("link_id");
        let parent_id = parent_raw.map(|p| strip_thing_prefix(p).to_string());
        let author_id = obj
            .get("author")
            .and_then(|v| v.as_str())
            .filter(|a| !a.is_empty() && *a != "[deleted]")
            .map(str::to_string);

        let mut meta = HashMap::new();
        for (key, value) in obj {
            if !matches!(
                key.as_str(),
                "id" | "body" | "selftext" | "title" | "link_id" | "parent_id" | "author"
            ) {
                meta_insert(&mut meta, key, value);
            }
        }

        out.push(Message {
            id,
            platform: Platform::RedditLike,
            thread_id: link_id,
            parent_id,
            is_root,
            author_id,
            timestamp: None,
            relative_order: i as u64,
            lang: obj
                .get("lang")
                .and_then(|v| v.as_str())
                .unwrap_or("en")
                .to_string(),
            text,
            stance: None,
            phase_gold: None,
            meta,
        });
    }
    Ok(out)
}

fn strip_thing_prefix(s: &str) -> &str {
    s.strip_prefix("t1_")
        .or_else(|| s.strip_prefix("t3_"))
        .unwrap_or(s)
}

/// Who replies to whom: most storm threads are star-shaped around the
/// triggering post rather than deep conversations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplyStructure {
    pub n_roots: u64,
    pub n_replies_to_root: u64,
    pub n_replies_to_replies: u64,
    /// `n_replies_to_root / (n_replies_to_root + n_replies_to_replies)`,
    /// 0 when there are no replies at all.
    pub fraction_to_root: f64,
}

/// Classify every non-root message as reply-to-root or reply-to-reply.
///
/// A message with no `parent_id` and `is_root == false` counts as a reply to
/// its thread root. Parent ids that resolve to nothing in the same thread
/// are reported as an error listing the offending ids.
pub fn reply_structure(corpus: &Corpus) -> Result<ReplyStructure, CorpusError> {
    // (thread_id, id) -> is_root
    let mut index: HashMap<(&str, &str), bool> = HashMap::new();
    for m in &corpus.messages {
        index.insert((m.thread_id.as_str(), m.id.as_str()), m.is_root);
    }

    let mut n_roots = 0u64;
    let mut to_root = 0u64;
    let mut to_reply = 0u64;
    let mut dangling: Vec<String> = Vec::new();

    for m in &corpus.messages {
        if m.is_root {
            n_roots += 1;
            continue;
        }
        match &m.parent_id {
            None => to_root += 1,
            Some(parent) => match index.get(&(m.thread_id.as_str(), parent.as_str())) {
                Some(true) => to_root += 1,
                Some(false) => to_reply += 1,
                None => dangling.push(m.id.clone()),
            },
        }
    }

    if !dangling.is_empty() {
        return Err(CorpusError::DanglingParents(dangling));
    }

    let denom = to_root + to_reply;
    Ok(ReplyStructure {
        n_roots,
        n_replies_to_root: to_root,
        n_replies_to_replies: to_reply,
        fraction_to_root: if denom == 0 {
            0.0
        } else {
            to_root as f64 / denom as f64
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn line(id: &str, order: u64) -> String {
        format!(
            r#"{{"id":"{id}","platform":"twitter_like","thread_id":"t0","is_root":false,"relative_order":{order},"lang":"en","text":"hello world"}}"#
        )
    }

    #[test]
    fn parse_dedups_to_first_occurrence() {
        let input = format!("{}\n{}\n{}\n", line("a", 0), line("b", 1), line("a", 2));
        let outcome = parse_corpus(Cursor::new(input)).unwrap();
        assert_eq!(outcome.corpus.len(), 2);
        assert_eq!(outcome.warnings.duplicate_ids, 1);
        assert_eq!(outcome.corpus.messages[0].relative_order, 0);
    }

    #[test]
    fn parse_empty_stream_is_valid() {
        let outcome = parse_corpus(Cursor::new("")).unwrap();
        assert!(outcome.corpus.is_empty());
    }

    #[test]
    fn parse_missing_text_names_line_and_field() {
        let bad = r#"{"id":"a","platform":"twitter_like","thread_id":"t0","is_root":true,"relative_order":0,"lang":"en"}"#;
        let input = format!("{}\n{bad}\n", line("z", 0));
        let err = parse_corpus(Cursor::new(input)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing field `text`"), "got: {msg}");
        assert!(msg.contains("line 2"), "got: {msg}");
    }

    #[test]
    fn parse_rejects_orderless_record() {
        let bad = r#"{"id":"a","platform":"twitter_like","thread_id":"t0","is_root":true,"lang":"en","text":"hi"}"#;
        let err = parse_corpus(Cursor::new(bad)).unwrap_err();
        assert!(err.to_string().contains("neither timestamp nor relative_order"));
    }

    #[test]
    fn parse_rejects_blank_text() {
        let bad = r#"{"id":"a","platform":"twitter_like","thread_id":"t0","is_root":true,"relative_order":0,"lang":"en","text":"   "}"#;
        let err = parse_corpus(Cursor::new(bad)).unwrap_err();
        assert!(err.to_string().contains("text is empty"));
    }

    #[test]
    fn normalize_sorts_by_timestamp_and_is_idempotent() {
        let mut corpus = Corpus::default();
        for (id, ts, order) in [("b", "2022-10-04T00:00:00Z", 1), ("a", "2022-10-03T12:00:00Z", 0)] {
            let mut m = Message::new(id, "x");
            m.timestamp = Some(parse_timestamp(ts).unwrap());
            m.relative_order = order;
            corpus.messages.push(m);
        }
        corpus.normalize();
        assert_eq!(corpus.messages[0].id, "a");
        let once = corpus.clone();
        corpus.normalize();
        assert_eq!(corpus, once);
    }

    #[test]
    fn round_trip_preserves_every_field() {
        let mut m = Message::new("m1", "Why? #Test 💀");
        m.platform = Platform::TelegramLike;
        m.parent_id = Some("m0".into());
        m.author_id = Some("u9".into());
        m.timestamp = Some(parse_timestamp("2022-10-03T09:30:00Z").unwrap());
        m.relative_order = 7;
        m.lang = "de".into();
        m.stance = Some(StanceLabel {
            coarse: CoarseStance::OpposeBoth,
            sub: Some("propaganda".into()),
        });
        m.phase_gold = Some(Phase::Middle);
        m.meta.insert("views".into(), "120".into());
        let mut root = Message::new("m0", "root");
        root.platform = Platform::TelegramLike;
        root.is_root = true;
        root.timestamp = Some(parse_timestamp("2022-10-03T09:00:00Z").unwrap());
        let mut corpus = Corpus {
            messages: vec![root, m],
            meta: [("storm".to_string(), "demo".to_string())].into(),
        };
        corpus.normalize();
        let serialized = corpus.to_jsonl();
        let reparsed = parse_corpus(Cursor::new(serialized)).unwrap();
        assert_eq!(reparsed.corpus, corpus);
    }

    #[test]
    fn reply_structure_all_to_root() {
        let mut corpus = Corpus::default();
        let mut root = Message::new("r", "root");
        root.is_root = true;
        corpus.messages.push(root);
        for i in 0..3 {
            let mut m = Message::new(format!("c{i}"), "reply");
            m.parent_id = Some("r".into());
            m.relative_order = i + 1;
            corpus.messages.push(m);
        }
        let rs = reply_structure(&corpus).unwrap();
        assert_eq!(rs.n_roots, 1);
        assert_eq!(rs.fraction_to_root, 1.0);
    }

    #[test]
    fn reply_structure_half_nested() {
        let mut corpus = Corpus::default();
        let mut root = Message::new("r", "root");
        root.is_root = true;
        corpus.messages.push(root);
        let mut a = Message::new("a", "to root");
        a.parent_id = Some("r".into());
        a.relative_order = 1;
        corpus.messages.push(a);
        let mut b = Message::new("b", "to a");
        b.parent_id = Some("a".into());
        b.relative_order = 2;
        corpus.messages.push(b);
        let rs = reply_structure(&corpus).unwrap();
        assert_eq!(rs.fraction_to_root, 0.5);
        assert_eq!(
            rs.n_replies_to_root + rs.n_replies_to_replies,
            corpus.len() as u64 - rs.n_roots
        );
    }

    #[test]
    fn reply_structure_reports_dangling_parents() {
        let mut corpus = Corpus::default();
        let mut m = Message::new("a", "orphan");
        m.parent_id = Some("ghost".into());
        corpus.messages.push(m);
        let err = reply_structure(&corpus).unwrap_err();
        assert!(err.to_string().contains("ghost") || err.to_string().contains("a"));
    }

    #[test]
    fn adapt_telegram_two_posts() {
        let raw = r#"{"name":"blog","id":77,"messages":[
            {"id":1,"type":"message","date":"2022-10-03T10:00:00","from_id":"user1","text":"Der erste Post."},
            {"id":2,"type":"message","date":"2022-10-03T11:00:00","from_id":"user2","reply_to_message_id":1,"text":[{"type":"plain","text":"Antwort "},"hier."]}
        ]}"#;
        let msgs = adapt_export(raw, ExportKind::TelegramExportJson).unwrap();
        assert_eq!(msgs.len(), 2);
        assert!(msgs.iter().all(|m| m.platform == Platform::TelegramLike));
        assert!(msgs[0].is_root);
        assert_eq!(msgs[1].parent_id.as_deref(), Some("1"));
        assert_eq!(msgs[1].text, "Antwort hier.");
    }

    #[test]
    fn adapt_reddit_has_order_but_no_timestamps() {
        let raw = r#"[
            {"id":"x1","title":"the thread","author":"[deleted]","created_utc":1663400000},
            {"id":"x2","body":"first comment","link_id":"t3_x1","parent_id":"t3_x1"},
            {"id":"x3","body":"second comment","link_id":"t3_x1","parent_id":"t1_x2"}
        ]"#;
        let msgs = adapt_export(raw, ExportKind::RedditDumpJson).unwrap();
        assert_eq!(msgs.len(), 3);
        for (i, m) in msgs.iter().enumerate() {
            assert_eq!(m.relative_order, i as u64);
            assert!(m.timestamp.is_none());
        }
        assert!(msgs[0].is_root);
        assert!(msgs[0].author_id.is_none());
        assert_eq!(msgs[0].meta.get("created_utc").unwrap(), "1663400000");
        assert_eq!(msgs[1].parent_id.as_deref(), Some("x1"));
        assert_eq!(msgs[2].parent_id.as_deref(), Some("x2"));
    }

    #[test]
    fn adapt_twitter_reply_to_root() {
        let raw = r#"{"data":[
            {"id":"100","conversation_id":"100","text":"the poll","created_at":"2022-10-03T16:15:00Z","author_id":"u0","public_metrics":{"reply_count":2}},
            {"id":"101","conversation_id":"100","text":"bad take","created_at":"2022-10-03T16:20:00Z","author_id":"u1","referenced_tweets":[{"type":"replied_to","id":"100"}]}
        ]}"#;
        let msgs = adapt_export(raw, ExportKind::TwitterV2Json).unwrap();
        assert!(msgs[0].is_root);
        assert!(msgs[0].meta.contains_key("public_metrics"));
        assert_eq!(msgs[1].parent_id.as_deref(), Some("100"));
        assert!(!msgs[1].is_root);
    }

    #[test]
    fn unknown_export_kind_errors() {
        assert!("pigeon_post".parse::<ExportKind>().is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn stance_strategy() -> impl Strategy<Value = Option<StanceLabel>> {
            proptest::option::of(
                (0usize..6, proptest::option::of("[a-z]{1,8}")).prop_map(|(i, sub)| {
                    StanceLabel {
                        coarse: CoarseStance::ALL[i],
                        sub,
                    }
                }),
            )
        }

        fn message_strategy(idx: usize) -> impl Strategy<Value = Message> {
            (
                proptest::option::of(0i64..2_000_000),
                proptest::option::of("[a-z0-9]{1,6}"),
                "[\\PC&&[^\\s]]{1,20}",
                stance_strategy(),
                proptest::option::of(0usize..3),
                proptest::bool::ANY,
            )
                .prop_map(move |(ts, author, text, stance, phase, is_root)| {
                    let mut m = Message::new(format!("id{idx}"), format!("x{text}"));
                    m.timestamp =
                        ts.map(|t| Utc.timestamp_opt(1_664_755_200 + t, 0).unwrap());
                    m.author_id = author;
                    m.relative_order = idx as u64;
                    m.stance = stance;
                    m.phase_gold = phase.map(|p| Phase::ALL[p]);
                    m.is_root = is_root;
                    m
                })
        }

        fn corpus_strategy() -> impl Strategy<Value = Corpus> {
            proptest::collection::vec(0usize..12, 1..12).prop_flat_map(|idxs| {
                let messages: Vec<_> = idxs
                    .iter()
                    .enumerate()
                    .map(|(i, _)| message_strategy(i))
                    .collect();
                (
                    messages,
                    proptest::collection::btree_map("[a-z]{1,5}", "[a-z]{1,5}", 0..3),
                )
                    .prop_map(|(messages, meta)| {
                        let mut c = Corpus { messages, meta };
                        c.normalize();
                        c
                    })
            })
        }

        proptest! {
            // Round trip: serialize then parse reproduces the corpus
            // field-for-field.
            #[test]
            fn jsonl_round_trip_is_identity(corpus in corpus_strategy()) {
                let text = corpus.to_jsonl();
                let back = parse_corpus(Cursor::new(text)).unwrap();
                prop_assert_eq!(back.corpus, corpus);
            }

            #[test]
            fn normalize_is_idempotent(corpus in corpus_strategy()) {
                let mut twice = corpus.clone();
                twice.normalize();
                prop_assert_eq!(twice, corpus);
            }

            // Reply counts always partition the non-root messages.
            #[test]
            fn reply_counts_partition_non_roots(corpus in corpus_strategy()) {
                // strip parent ids so no dangling references occur
                let mut corpus = corpus;
                for m in corpus.messages.iter_mut() {
                    m.parent_id = None;
                }
                let rs = reply_structure(&corpus).unwrap();
                prop_assert_eq!(
                    rs.n_replies_to_root + rs.n_replies_to_replies,
                    corpus.len() as u64 - rs.n_roots
                );
            }
        }
    }
}
