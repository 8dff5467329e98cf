//! Category word lists and exact-match token counting.
//!
//! A lexicon file is tab-separated text: `term<TAB>tag[,tag...]` with
//! `#`-prefixed comment lines. Terms are case-folded and NFC-normalized on
//! load; duplicate terms union their tags. Matching is exact token equality,
//! no stemming — deterministic and language-neutral; stemmers can be layered
//! behind the same interface later.
//!
//! The crate ships small demo lexicons for English and German under
//! `lexicons/`. They exist to make the pipeline runnable and testable and
//! are not authoritative word lists.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// The roles a lexicon can play in feature extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LexiconRole {
    Emotion,
    Modality,
    AbstractNoun,
    StateVerb,
    AssertionOpinion,
    Toxicity,
    PosHint,
    Negation,
    Conjunction,
    Pronoun,
}

impl LexiconRole {
    pub const ALL: [LexiconRole; 10] = [
        LexiconRole::Emotion,
        LexiconRole::Modality,
        LexiconRole::AbstractNoun,
        LexiconRole::StateVerb,
        LexiconRole::AssertionOpinion,
        LexiconRole::Toxicity,
        LexiconRole::PosHint,
        LexiconRole::Negation,
        LexiconRole::Conjunction,
        LexiconRole::Pronoun,
    ];

    /// File stem used when loading a role from a lexicon directory.
    pub fn file_stem(&self) -> &'static str {
        match self {
            LexiconRole::Emotion => "emotion",
            LexiconRole::Modality => "modality",
            LexiconRole::AbstractNoun => "abstract_noun",
            LexiconRole::StateVerb => "state_verb",
            LexiconRole::AssertionOpinion => "assertion_opinion",
            LexiconRole::Toxicity => "toxicity",
            LexiconRole::PosHint => "pos_hint",
            LexiconRole::Negation => "negation",
            LexiconRole::Conjunction => "conjunction",
            LexiconRole::Pronoun => "pronoun",
        }
    }
}

impl fmt::Display for LexiconRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_stem())
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: no tab separator")]
    NoTab { line: usize },
    #[error("line {line}: empty term")]
    EmptyTerm { line: usize },
    #[error("line {line}: empty tag list")]
    EmptyTags { line: usize },
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// An immutable term → tag-set mapping for one language.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    pub language: String,
    entries: HashMap<String, BTreeSet<String>>,
    tag_universe: BTreeSet<String>,
}

/// Case-fold and NFC-normalize a term the same way load and match do.
pub fn normalize_term(term: &str) -> String {
    term.trim().to_lowercase().nfc().collect()
}

impl Lexicon {
    pub fn new(name: impl Into<String>, language: impl Into<String>) -> Self {
        Lexicon {
            name: name.into(),
            language: language.into(),
            ..Default::default()
        }
    }

    /// Insert one entry, unioning tags with any existing entry for the term.
    pub fn insert(&mut self, term: &str, tags: impl IntoIterator<Item = impl Into<String>>) {
        let term = normalize_term(term);
        if term.is_empty() {
            return;
        }
        let entry = self.entries.entry(term).or_default();
        for tag in tags {
            let tag = tag.into();
            self.tag_universe.insert(tag.clone());
            entry.insert(tag);
        }
    }

    pub fn tags_of(&self, token: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(token)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn has_tag(&self, token: &str, tag: &str) -> bool {
        self.entries.get(token).is_some_and(|t| t.contains(tag))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tag_universe(&self) -> &BTreeSet<String> {
        &self.tag_universe
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.entries.iter()
    }
}

/// Load a lexicon from tab-separated text.
pub fn load_lexicon<R: BufRead>(
    reader: R,
    name: impl Into<String>,
    language: impl Into<String>,
) -> Result<Lexicon, LexiconError> {
    let mut lexicon = Lexicon::new(name, language);
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| LexiconError::Io {
            path: "<stream>".to_string(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (term, tags) = trimmed
            .split_once('\t')
            .ok_or(LexiconError::NoTab { line: line_no })?;
        let term = normalize_term(term);
        if term.is_empty() {
            return Err(LexiconError::EmptyTerm { line: line_no });
        }
        let tags: Vec<&str> = tags
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        if tags.is_empty() {
            return Err(LexiconError::EmptyTags { line: line_no });
        }
        lexicon.insert(&term, tags);
    }
    Ok(lexicon)
}

pub fn load_lexicon_file(
    path: &Path,
    name: impl Into<String>,
    language: impl Into<String>,
) -> Result<Lexicon, LexiconError> {
    let file = std::fs::File::open(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_lexicon(std::io::BufReader::new(file), name, language)
}

/// Count tag matches for a token multiset. Dense over the lexicon's tag
/// universe: tags no token hit map to 0.
pub fn match_tokens<'a, I>(tokens: I, lexicon: &Lexicon) -> BTreeMap<String, u64>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<String, u64> = lexicon
        .tag_universe()
        .iter()
        .map(|t| (t.clone(), 0))
        .collect();
    for token in tokens {
        if let Some(tags) = lexicon.tags_of(token) {
            for tag in tags {
                *counts.get_mut(tag).expect("tag in universe") += 1;
            }
        }
    }
    counts
}

/// One lexicon per role for one language, plus the clause-marker list used
/// by the syntactic features (same file format, tags are clause types).
#[derive(Debug, Clone, Default)]
pub struct LexiconSet {
    pub language: String,
    by_role: BTreeMap<LexiconRole, Lexicon>,
    clause_markers: Option<Lexicon>,
    stopwords: Option<Lexicon>,
}

impl LexiconSet {
    pub fn new(language: impl Into<String>) -> Self {
        LexiconSet {
            language: language.into(),
            ..Default::default()
        }
    }

    pub fn set_role(&mut self, role: LexiconRole, lexicon: Lexicon) {
        self.by_role.insert(role, lexicon);
    }

    pub fn role(&self, role: LexiconRole) -> Option<&Lexicon> {
        self.by_role.get(&role)
    }

    pub fn set_clause_markers(&mut self, lexicon: Lexicon) {
        self.clause_markers = Some(lexicon);
    }

    pub fn clause_markers(&self) -> Option<&Lexicon> {
        self.clause_markers.as_ref()
    }

    pub fn set_stopwords(&mut self, lexicon: Lexicon) {
        self.stopwords = Some(lexicon);
    }

    pub fn stopwords(&self) -> Option<&Lexicon> {
        self.stopwords.as_ref()
    }

    /// Roles with no lexicon loaded. Their features extract as 0 and every
    /// report carries this list as the "lexicon missing" flag.
    pub fn missing_roles(&self) -> Vec<LexiconRole> {
        LexiconRole::ALL
            .iter()
            .copied()
            .filter(|r| !self.by_role.contains_key(r))
            .collect()
    }

    /// Load `<dir>/<language>/<role>.tsv` for every role present, plus
    /// optional `clause_markers.tsv` and `stopwords.tsv`. Missing files are
    /// not errors; they surface via [`LexiconSet::missing_roles`].
    pub fn load_dir(dir: &Path, language: &str) -> Result<Self, LexiconError> {
        let mut set = LexiconSet::new(language);
        let lang_dir = dir.join(language);
        for role in LexiconRole::ALL {
            let path = lang_dir.join(format!("{}.tsv", role.file_stem()));
            if path.is_file() {
                set.set_role(role, load_lexicon_file(&path, role.file_stem(), language)?);
            }
        }
        let markers = lang_dir.join("clause_markers.tsv");
        if markers.is_file() {
            set.set_clause_markers(load_lexicon_file(&markers, "clause_markers", language)?);
        }
        let stopwords = lang_dir.join("stopwords.tsv");
        if stopwords.is_file() {
            set.set_stopwords(load_lexicon_file(&stopwords, "stopwords", language)?);
        }
        Ok(set)
    }
}
