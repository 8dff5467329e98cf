//! Tokenizer and the per-message linguistic feature vector.
//!
//! The vector holds 34 named counts plus `avg_sentence_length`, grouped as:
//! 10 morphological, 7 syntactic, 2 punctuation, 15 surface-semantic
//! (5 lexicon categories and 10 emotion tags), and the length feature.
//!
//! No statistical tagger runs anywhere. Morphological counts combine the
//! `pos_hint` lexicon with suffix heuristics, syntactic counts are
//! marker-word based, surface semantics are exact lexicon matches. Each
//! rule is deterministic and documented on its extraction function: the
//! same (text, lang, lexicons) always yields the same vector.

use std::ops::Range;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;
use unicode_segmentation::UnicodeSegmentation;

use crate::corpus::Message;
use crate::lexicon::{match_tokens, Lexicon, LexiconRole, LexiconSet};

/// Number of count-valued features; `avg_sentence_length` comes on top.
pub const N_COUNT_FEATURES: usize = 34;

/// All feature names in canonical order, count features first,
/// `avg_sentence_length` last.
pub const FEATURE_NAMES: [&str; N_COUNT_FEATURES + 1] = [
    "n_adverbs",
    "n_adjectives",
    "n_verbs",
    "n_proper_nouns",
    "n_conjunctions",
    "n_negations",
    "n_comparatives",
    "n_superlatives",
    "n_personal_pronouns",
    "n_passive_forms",
    "n_contrastive_but",
    "n_concessive_clauses",
    "n_causal_clauses",
    "n_consecutive_clauses",
    "n_relative_clauses",
    "n_temporal_clauses",
    "n_conditional_clauses",
    "n_quote_marks",
    "n_question_marks",
    "n_abstract_nouns",
    "n_modal_verbs",
    "n_state_verbs",
    "n_high_modality",
    "n_assertion_opinion",
    "n_fear",
    "n_surprise",
    "n_anger",
    "n_hope",
    "n_disgust",
    "n_happiness",
    "n_sadness",
    "n_trust",
    "n_negative",
    "n_positive",
    "avg_sentence_length",
];

/// Index constants into [`FeatureVector::counts`].
pub mod idx {
    pub const ADVERBS: usize = 0;
    pub const ADJECTIVES: usize = 1;
    pub const VERBS: usize = 2;
    pub const PROPER_NOUNS: usize = 3;
    pub const CONJUNCTIONS: usize = 4;
    pub const NEGATIONS: usize = 5;
    pub const COMPARATIVES: usize = 6;
    pub const SUPERLATIVES: usize = 7;
    pub const PERSONAL_PRONOUNS: usize = 8;
    pub const PASSIVE_FORMS: usize = 9;
    pub const CONTRASTIVE_BUT: usize = 10;
    pub const CONCESSIVE: usize = 11;
    pub const CAUSAL: usize = 12;
    pub const CONSECUTIVE: usize = 13;
    pub const RELATIVE: usize = 14;
    pub const TEMPORAL: usize = 15;
    pub const CONDITIONAL: usize = 16;
    pub const QUOTE_MARKS: usize = 17;
    pub const QUESTION_MARKS: usize = 18;
    pub const ABSTRACT_NOUNS: usize = 19;
    pub const MODAL_VERBS: usize = 20;
    pub const STATE_VERBS: usize = 21;
    pub const HIGH_MODALITY: usize = 22;
    pub const ASSERTION_OPINION: usize = 23;
    pub const EMOTION_BASE: usize = 24; // fear..positive, 10 tags
}

/// Emotion tags in canonical order, aligned with `idx::EMOTION_BASE`.
pub const EMOTION_TAGS: [&str; 10] = [
    "fear",
    "surprise",
    "anger",
    "hope",
    "disgust",
    "happiness",
    "sadness",
    "trust",
    "negative",
    "positive",
];

/// The extracted feature vector for one message.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub counts: [u32; N_COUNT_FEATURES],
    pub n_tokens: u32,
    pub n_sentences: u32,
    /// Tokens per sentence; 0 when the message has no sentences.
    pub avg_sentence_length: f64,
}

impl Default for FeatureVector {
    fn default() -> Self {
        FeatureVector {
            counts: [0; N_COUNT_FEATURES],
            n_tokens: 0,
            n_sentences: 0,
            avg_sentence_length: 0.0,
        }
    }
}

impl FeatureVector {
    /// The 35 features as per-token rates: each count divided by `n_tokens`
    /// (0 when the message has no tokens), then `avg_sentence_length` raw.
    /// This is the classifier and contrast input.
    pub fn per_token_rates(&self) -> [f64; N_COUNT_FEATURES + 1] {
        let mut out = [0.0; N_COUNT_FEATURES + 1];
        if self.n_tokens > 0 {
            for (i, &c) in self.counts.iter().enumerate() {
                out[i] = c as f64 / self.n_tokens as f64;
            }
        }
        out[N_COUNT_FEATURES] = self.avg_sentence_length;
        out
    }
}

/// One word token: original surface, folded lowercase form, byte span in
/// the NFC-normalized text.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub span: (usize, usize),
}

/// Tokenization result. `text` is the NFC-normalized input the spans
/// index into.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TokenizedText {
    pub text: String,
    pub tokens: Vec<Token>,
    /// Token index ranges, one per sentence; they partition the tokens.
    pub sentences: Vec<Range<usize>>,
    /// Distinct emoji with occurrence counts, ordered by code point.
    pub emojis: Vec<(String, u32)>,
    /// `#`-prefixed word tokens, lowercased, `#` included.
    pub hashtags: Vec<String>,
    pub question_marks: u32,
    pub quote_marks: u32,
}

impl TokenizedText {
    pub fn lower_tokens(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.lower.as_str())
    }

    /// Sentence index ranges as (start, end) pairs containing `token_idx`.
    fn sentence_of(&self, token_idx: usize) -> Option<&Range<usize>> {
        self.sentences.iter().find(|r| r.contains(&token_idx))
    }
}

const QUOTE_CHARS: [char; 9] = ['"', '\u{201C}', '\u{201D}', '\u{201E}', '«', '»', '\'', '\u{2018}', '\u{2019}'];
const QUESTION_CHARS: [char; 2] = ['?', '？'];
const SENTENCE_FINAL: [char; 4] = ['.', '!', '?', '…'];

/// Words before a period that do not end a sentence. Single-letter words
/// (initials) and words containing an internal dot ("e.g", "z.b") are
/// guarded without being listed.
fn abbreviation_guard(lang: &str) -> &'static [&'static str] {
    match lang {
        "de" => &[
            "dr", "prof", "nr", "ca", "vgl", "bzw", "usw", "abs", "hr", "fr", "inkl", "zzgl",
            "ggf", "evtl",
        ],
        _ => &[
            "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "fig", "inc",
        ],
    }
}

fn primary_subtag(lang: &str) -> &str {
    lang.split(['-', '_']).next().unwrap_or(lang)
}

fn is_emoji_base(c: char) -> bool {
    matches!(u32::from(c),
        0x1F000..=0x1F0FF   // mahjong, dominoes, cards
        | 0x1F1E6..=0x1F1FF // regional indicators (flags)
        | 0x1F300..=0x1F5FF
        | 0x1F600..=0x1F64F
        | 0x1F680..=0x1F6FF
        | 0x1F700..=0x1F77F
        | 0x1F780..=0x1F7FF
        | 0x1F800..=0x1F8FF
        | 0x1F900..=0x1F9FF
        | 0x1FA00..=0x1FA6F
        | 0x1FA70..=0x1FAFF
        | 0x2600..=0x26FF
        | 0x2700..=0x27BF
        | 0x2B05..=0x2B07
        | 0x2B1B..=0x2B1C
    ) || matches!(u32::from(c), 0x2B50 | 0x2B55)
}

fn is_emoji_modifier(c: char) -> bool {
    matches!(
        u32::from(c),
        0xFE0F | 0x200D | 0x20E3 | 0x1F3FB..=0x1F3FF
    )
}

/// A word-bound segment is an emoji occurrence when every char belongs to
/// the emoji ranges or their modifiers, with at least one base char.
fn is_emoji_segment(seg: &str) -> bool {
    let mut has_base = false;
    for c in seg.chars() {
        if is_emoji_base(c) {
            has_base = true;
        } else if !is_emoji_modifier(c) {
            return false;
        }
    }
    has_base
}

/// Fold a token for lexicon matching: lowercase with curly apostrophes
/// mapped to `'` so that "don’t" and "don't" are one term.
fn fold_token(surface: &str) -> String {
    surface
        .to_lowercase()
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .collect()
}

/// Unicode word segmentation with sentence splitting, emoji and hashtag
/// detection, and character-level punctuation counts.
///
/// Rules:
/// * word tokens are UAX-29 word segments containing at least one
///   alphanumeric char; emoji segments are collected separately and are
///   never word tokens;
/// * a token immediately preceded by `#` in the raw text is a hashtag;
/// * sentences split after `. ! ? …` followed by whitespace or end of
///   text, with an abbreviation guard on periods;
/// * question and quote marks are counted over raw characters.
pub fn tokenize(text: &str, lang: &str) -> TokenizedText {
    let text: String = text.nfc().collect();
    let lang = primary_subtag(lang).to_lowercase();

    let mut tokens: Vec<Token> = Vec::new();
    let mut emoji_counts: std::collections::BTreeMap<String, u32> = Default::default();
    let mut hashtags: Vec<String> = Vec::new();

    for (offset, seg) in text.split_word_bound_indices() {
        if is_emoji_segment(seg) {
            *emoji_counts.entry(seg.to_string()).or_insert(0) += 1;
            continue;
        }
        if seg.chars().any(char::is_alphanumeric) {
            let lower = fold_token(seg);
            if text[..offset].ends_with('#') {
                hashtags.push(format!("#{lower}"));
            }
            tokens.push(Token {
                surface: seg.to_string(),
                lower,
                span: (offset, offset + seg.len()),
            });
        }
    }

    let mut question_marks = 0u32;
    let mut quote_marks = 0u32;
    for c in text.chars() {
        if QUESTION_CHARS.contains(&c) {
            question_marks += 1;
        } else if QUOTE_CHARS.contains(&c) {
            quote_marks += 1;
        }
    }

    // Sentence boundaries: byte position just after a sentence-final char
    // that is followed by whitespace or end of text.
    let guard = abbreviation_guard(&lang);
    let mut boundaries: Vec<usize> = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        if !SENTENCE_FINAL.contains(&c) {
            continue;
        }
        let next_ws = match chars.peek() {
            None => true,
            Some((_, n)) => n.is_whitespace(),
        };
        if !next_ws {
            continue;
        }
        if c == '.' {
            // Token ending exactly at the period is a guarded abbreviation?
            let adjacent = tokens.iter().rev().find(|t| t.span.1 == pos);
            if let Some(tok) = adjacent {
                let single_letter = tok.lower.chars().count() == 1
                    && tok.lower.chars().all(char::is_alphabetic);
                if single_letter || tok.lower.contains('.') || guard.contains(&tok.lower.as_str())
                {
                    continue;
                }
            }
        }
        boundaries.push(pos + c.len_utf8());
    }

    // Split the token sequence at boundaries falling between tokens.
    let mut sentences: Vec<Range<usize>> = Vec::new();
    let mut start = 0usize;
    let mut b_iter = boundaries.into_iter().peekable();
    for (i, tok) in tokens.iter().enumerate() {
        let gap_end = tokens
            .get(i + 1)
            .map(|n| n.span.0)
            .unwrap_or(usize::MAX);
        let mut split_here = false;
        while let Some(&b) = b_iter.peek() {
            if b <= tok.span.1 {
                b_iter.next(); // boundary before/inside this token: ignore
            } else if b <= gap_end {
                b_iter.next();
                split_here = true;
            } else {
                break;
            }
        }
        if split_here && i + 1 < tokens.len() {
            sentences.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        sentences.push(start..tokens.len());
    }

    TokenizedText {
        text,
        tokens,
        sentences,
        emojis: emoji_counts.into_iter().collect(),
        hashtags,
        question_marks,
        quote_marks,
    }
}

fn has_tag(set: &LexiconSet, role: LexiconRole, token: &str, tag: &str) -> bool {
    set.role(role).is_some_and(|l| l.has_tag(token, tag))
}

fn marker_tag<'a>(markers: Option<&'a Lexicon>, token: &str) -> Option<&'a std::collections::BTreeSet<String>> {
    markers.and_then(|m| m.tags_of(token))
}

/// English-style suffix stems for -er/-est forms: plain strip, strip with
/// undoubled final consonant, strip leaving the final `e`, and strip with
/// `i` restored to `y` ("angrier" → "angry").
fn suffix_stems(token: &str, suffix_len: usize) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    if chars.len() <= suffix_len {
        return Vec::new();
    }
    let stem: String = chars[..chars.len() - suffix_len].iter().collect();
    let mut out = vec![stem.clone()];
    let stem_chars: Vec<char> = stem.chars().collect();
    if stem_chars.len() >= 2 && stem_chars[stem_chars.len() - 1] == stem_chars[stem_chars.len() - 2]
    {
        out.push(stem_chars[..stem_chars.len() - 1].iter().collect());
    }
    // keep final 'e': "nicer" -> "nice", "largest" -> "large"
    out.push(chars[..chars.len() - suffix_len + 1].iter().collect());
    if stem.ends_with('i') {
        let mut y = stem_chars[..stem_chars.len() - 1].iter().collect::<String>();
        y.push('y');
        out.push(y);
    }
    out
}

fn is_adjective_stem(set: &LexiconSet, stems: &[String]) -> bool {
    stems
        .iter()
        .any(|s| has_tag(set, LexiconRole::PosHint, s, "adjective"))
}

/// Extract the feature vector for one message.
///
/// Rules by feature group:
/// * adverbs: `pos_hint:adverb`, or (en) `-ly` with length ≥ 4;
/// * comparatives/superlatives: `pos_hint` tags, or (en) `-er`/`-est`
///   whose stem is a `pos_hint` adjective;
/// * proper nouns: capitalized non-sentence-initial tokens that are not
///   personal pronouns, or `pos_hint:proper_noun` anywhere;
/// * passive: a `pos_hint:be_form` followed within 3 tokens (same
///   sentence) by a `pos_hint:participle`;
/// * contrastive "but": the `contrastive` marker mid-sentence, or
///   sentence-initial with at least 3 tokens following;
/// * relative clauses: `relative` markers — (en) preceded in the sentence
///   by a noun-like token (not verb/conjunction/pronoun/negation), (de)
///   immediately after a comma;
/// * other clause types: plain marker counts;
/// * surface semantics: `match_tokens` per role lexicon.
///
/// Roles without a loaded lexicon contribute 0 (see
/// [`LexiconSet::missing_roles`] for the flag).
pub fn extract_features(message: &Message, lexicons: &LexiconSet) -> FeatureVector {
    let tk = tokenize(&message.text, &message.lang);
    extract_from_tokens(&tk, primary_subtag(&message.lang), lexicons)
}

pub fn extract_from_tokens(tk: &TokenizedText, lang: &str, set: &LexiconSet) -> FeatureVector {
    let mut v = FeatureVector {
        n_tokens: tk.tokens.len() as u32,
        n_sentences: tk.sentences.len() as u32,
        ..Default::default()
    };
    v.avg_sentence_length = if v.n_sentences > 0 {
        v.n_tokens as f64 / v.n_sentences as f64
    } else {
        0.0
    };
    v.counts[idx::QUOTE_MARKS] = tk.quote_marks;
    v.counts[idx::QUESTION_MARKS] = tk.question_marks;

    let en_suffixes = lang.eq_ignore_ascii_case("en");
    let de_rules = lang.eq_ignore_ascii_case("de");
    let markers = set.clause_markers();

    let sentence_initial: Vec<bool> = {
        let mut init = vec![false; tk.tokens.len()];
        for s in &tk.sentences {
            if s.start < init.len() {
                init[s.start] = true;
            }
        }
        init
    };

    for (i, tok) in tk.tokens.iter().enumerate() {
        let lower = tok.lower.as_str();

        // morphological
        let ly_adverb = en_suffixes && lower.ends_with("ly") && lower.chars().count() >= 4;
        if has_tag(set, LexiconRole::PosHint, lower, "adverb") || ly_adverb {
            v.counts[idx::ADVERBS] += 1;
        }
        if has_tag(set, LexiconRole::PosHint, lower, "adjective") {
            v.counts[idx::ADJECTIVES] += 1;
        }
        if has_tag(set, LexiconRole::PosHint, lower, "verb") {
            v.counts[idx::VERBS] += 1;
        }
        let capitalized = tok
            .surface
            .chars()
            .next()
            .is_some_and(|c| c.is_uppercase());
        let is_pronoun = has_tag(set, LexiconRole::Pronoun, lower, "personal_pronoun");
        if (capitalized && !sentence_initial[i] && !is_pronoun)
            || has_tag(set, LexiconRole::PosHint, lower, "proper_noun")
        {
            v.counts[idx::PROPER_NOUNS] += 1;
        }
        if has_tag(set, LexiconRole::Conjunction, lower, "conjunction") {
            v.counts[idx::CONJUNCTIONS] += 1;
        }
        if has_tag(set, LexiconRole::Negation, lower, "negation") {
            v.counts[idx::NEGATIONS] += 1;
        }
        let comp_hint = has_tag(set, LexiconRole::PosHint, lower, "comparative");
        let comp_suffix = en_suffixes
            && lower.chars().count() >= 4
            && lower.ends_with("er")
            && is_adjective_stem(set, &suffix_stems(lower, 2));
        if comp_hint || comp_suffix {
            v.counts[idx::COMPARATIVES] += 1;
        }
        let sup_hint = has_tag(set, LexiconRole::PosHint, lower, "superlative");
        let sup_suffix = en_suffixes
            && lower.chars().count() >= 5
            && lower.ends_with("est")
            && is_adjective_stem(set, &suffix_stems(lower, 3));
        if sup_hint || sup_suffix {
            v.counts[idx::SUPERLATIVES] += 1;
        }
        if is_pronoun {
            v.counts[idx::PERSONAL_PRONOUNS] += 1;
        }
        if has_tag(set, LexiconRole::PosHint, lower, "be_form") {
            if let Some(sentence) = tk.sentence_of(i) {
                let window_end = (i + 4).min(sentence.end);
                let hit = (i + 1..window_end).any(|j| {
                    has_tag(set, LexiconRole::PosHint, &tk.tokens[j].lower, "participle")
                });
                if hit {
                    v.counts[idx::PASSIVE_FORMS] += 1;
                }
            }
        }

        // syntactic (marker words)
        if let Some(tags) = marker_tag(markers, lower) {
            if tags.contains("contrastive") {
                let counts = if sentence_initial[i] {
                    tk.sentence_of(i).is_some_and(|s| s.end - i > 3)
                } else {
                    true
                };
                if counts {
                    v.counts[idx::CONTRASTIVE_BUT] += 1;
                }
            }
            if tags.contains("concessive") {
                v.counts[idx::CONCESSIVE] += 1;
            }
            if tags.contains("causal") {
                v.counts[idx::CAUSAL] += 1;
            }
            if tags.contains("consecutive") {
                v.counts[idx::CONSECUTIVE] += 1;
            }
            if tags.contains("relative") {
                let counts = if de_rules {
                    // "der/die/das" after a comma
                    i > 0 && {
                        let gap = &tk.text[tk.tokens[i - 1].span.1..tok.span.0];
                        gap.contains(',')
                    }
                } else {
                    // noun-like predecessor in the same sentence
                    !sentence_initial[i] && i > 0 && {
                        let prev = tk.tokens[i - 1].lower.as_str();
                        !has_tag(set, LexiconRole::PosHint, prev, "verb")
                            && !has_tag(set, LexiconRole::Conjunction, prev, "conjunction")
                            && !has_tag(set, LexiconRole::Pronoun, prev, "personal_pronoun")
                            && !has_tag(set, LexiconRole::Negation, prev, "negation")
                    }
                };
                if counts {
                    v.counts[idx::RELATIVE] += 1;
                }
            }
            if tags.contains("temporal") {
                v.counts[idx::TEMPORAL] += 1;
            }
            if tags.contains("conditional") {
                v.counts[idx::CONDITIONAL] += 1;
            }
        }
    }

    // surface semantics via match_tokens per role
    if let Some(lex) = set.role(LexiconRole::AbstractNoun) {
        v.counts[idx::ABSTRACT_NOUNS] = *match_tokens(tk.lower_tokens(), lex)
            .get("abstract_noun")
            .unwrap_or(&0) as u32;
    }
    if let Some(lex) = set.role(LexiconRole::Modality) {
        let counts = match_tokens(tk.lower_tokens(), lex);
        v.counts[idx::MODAL_VERBS] = *counts.get("modal_verb").unwrap_or(&0) as u32;
        v.counts[idx::HIGH_MODALITY] = *counts.get("high_modality").unwrap_or(&0) as u32;
    }
    if let Some(lex) = set.role(LexiconRole::StateVerb) {
        v.counts[idx::STATE_VERBS] = *match_tokens(tk.lower_tokens(), lex)
            .get("state_verb")
            .unwrap_or(&0) as u32;
    }
    if let Some(lex) = set.role(LexiconRole::AssertionOpinion) {
        v.counts[idx::ASSERTION_OPINION] = *match_tokens(tk.lower_tokens(), lex)
            .get("assertion_opinion")
            .unwrap_or(&0) as u32;
    }
    if let Some(lex) = set.role(LexiconRole::Emotion) {
        let counts = match_tokens(tk.lower_tokens(), lex);
        for (k, tag) in EMOTION_TAGS.iter().enumerate() {
            v.counts[idx::EMOTION_BASE + k] = *counts.get(*tag).unwrap_or(&0) as u32;
        }
    }

    v
}

#[derive(Debug, Error)]
pub enum FeaturesError {
    #[error("cannot aggregate an empty feature sequence")]
    EmptyInput,
}

/// How to weight features when aggregating over messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Arithmetic mean of raw counts.
    PerMessage,
    /// `sum(count) / sum(n_tokens)` per feature.
    PerToken,
}

/// Mean rates over a set of feature vectors. `avg_sentence_length` is
/// always message-averaged regardless of weighting.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateFeatures {
    pub weighting: Weighting,
    pub rates: [f64; N_COUNT_FEATURES],
    pub avg_sentence_length: f64,
    pub n_messages: usize,
    pub total_tokens: u64,
}

pub fn aggregate_features(
    vectors: &[FeatureVector],
    weighting: Weighting,
) -> Result<AggregateFeatures, FeaturesError> {
    if vectors.is_empty() {
        return Err(FeaturesError::EmptyInput);
    }
    let n = vectors.len() as f64;
    let total_tokens: u64 = vectors.iter().map(|v| v.n_tokens as u64).sum();
    let mut rates = [0.0; N_COUNT_FEATURES];
    for f in 0..N_COUNT_FEATURES {
        let sum: u64 = vectors.iter().map(|v| v.counts[f] as u64).sum();
        rates[f] = match weighting {
            Weighting::PerMessage => sum as f64 / n,
            Weighting::PerToken => {
                if total_tokens == 0 {
                    0.0
                } else {
                    sum as f64 / total_tokens as f64
                }
            }
        };
    }
    let avg_sentence_length =
        vectors.iter().map(|v| v.avg_sentence_length).sum::<f64>() / n;
    Ok(AggregateFeatures {
        weighting,
        rates,
        avg_sentence_length,
        n_messages: vectors.len(),
        total_tokens,
    })
}

/// Feature CSV: one row per message, `id` then the 34 counts in canonical
/// order, `avg_sentence_length`, `n_tokens`, `n_sentences`.
pub fn features_csv(rows: &[(String, FeatureVector)]) -> String {
    let mut out = String::from("id");
    for name in &FEATURE_NAMES[..N_COUNT_FEATURES] {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",avg_sentence_length,n_tokens,n_sentences\n");
    for (id, v) in rows {
        out.push_str(id);
        for c in &v.counts {
            out.push(',');
            out.push_str(&c.to_string());
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            v.avg_sentence_length, v.n_tokens, v.n_sentences
        ));
    }
    out
}
