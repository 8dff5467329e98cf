//! Built-in generator configurations.
//!
//! `musk_like` and `esports_like` mirror the two reference storms at desk
//! scale: platform pairs, event order, participation and toxicity anchors,
//! group-level vocabulary skews. `separable_phase` and `separable_stance`
//! are tuned for classifier verification: three roughly balanced classes,
//! strong disjoint skews, about two thousand messages on the origin
//! platform.
//!
//! Vocabulary words carry the lexicon tags of the shipped demo lexicons;
//! a test asserts every (word, tag) pair resolves there, so planted skews
//! are guaranteed to be recoverable by feature extraction.

use std::collections::BTreeMap;

use chrono::{TimeZone, Utc};

use super::{EventKind, PlatformSpec, SkewCondition, SkewRule, SynthConfig, VocabWord};
use crate::corpus::{CoarseStance, Phase, Platform};

fn words(entries: &[(&str, &[&str], f64)]) -> Vec<VocabWord> {
    entries
        .iter()
        .map(|(w, tags, weight)| VocabWord::new(w, tags, *weight))
        .collect()
}

fn stance_skews(stances: &[CoarseStance], rules: &[(&str, f64)]) -> Vec<SkewRule> {
    let mut out = Vec::new();
    for &s in stances {
        for (tag, m) in rules {
            out.push(SkewRule {
                condition: SkewCondition::Stance(s),
                tag: tag.to_string(),
                multiplier: *m,
            });
        }
    }
    out
}

fn phase_skews(phase: Phase, rules: &[(&str, f64)]) -> Vec<SkewRule> {
    rules
        .iter()
        .map(|(tag, m)| SkewRule {
            condition: SkewCondition::Phase(phase),
            tag: tag.to_string(),
            multiplier: *m,
        })
        .collect()
}

const SUPPORT: [CoarseStance; 2] = [CoarseStance::SupportTarget, CoarseStance::SupportBoth];
const OPPOSE: [CoarseStance; 2] = [CoarseStance::OpposeTarget, CoarseStance::OpposeBoth];
const NEUTRALISH: [CoarseStance; 2] = [CoarseStance::Neutral, CoarseStance::OffTopic];

/// German-language storm: a poll on the origin platform spills into a
/// topic channel. Participation anchored at 8.8 % repeat authors,
/// opponents dominate and carry the waves, "russland" leads the keywords.
pub fn musk_like() -> SynthConfig {
    let base_de: Vec<VocabWord> = words(&[
        ("der", &[], 6.0),
        ("die", &[], 6.0),
        ("das", &[], 5.0),
        ("und", &["conjunction"], 4.0),
        ("ist", &["be_form"], 3.0),
        ("zu", &[], 2.5),
        ("es", &["personal_pronoun"], 2.0),
        ("er", &["personal_pronoun"], 2.2),
        ("wir", &["personal_pronoun"], 1.8),
        ("sie", &["personal_pronoun"], 1.8),
        ("nicht", &["negation"], 1.6),
        ("auf", &[], 1.5),
        ("mit", &[], 1.5),
        ("für", &[], 1.5),
        ("von", &[], 1.2),
        ("im", &[], 1.2),
        ("jetzt", &["adverb"], 1.0),
        ("sagt", &["verb"], 1.5),
        ("macht", &["verb"], 1.0),
        ("dass", &["conjunction"], 1.2),
        ("wenn", &["conditional", "conjunction"], 0.8),
        ("heute", &["adverb"], 0.8),
        ("wieder", &["adverb"], 0.8),
        ("kann", &["modal_verb"], 1.0),
        ("muss", &["modal_verb", "high_modality"], 0.8),
        ("elon", &["proper_noun"], 1.5),
        ("musk", &["proper_noun"], 1.2),
        ("twittert", &["verb"], 0.8),
    ]);
    let extend = |extra: Vec<VocabWord>| -> Vec<VocabWord> {
        let mut pool = base_de.clone();
        pool.extend(extra);
        pool
    };

    let support_pool = extend(words(&[
        ("danke", &["trust", "positive"], 3.0),
        ("dankbar", &["trust", "happiness", "positive"], 2.0),
        ("vertrauen", &["trust", "positive"], 2.5),
        ("hoffnung", &["hope", "positive"], 2.5),
        ("gut", &["positive", "adjective"], 2.0),
        ("frieden", &["hope", "positive", "abstract_noun"], 1.8),
        ("unterstützung", &["abstract_noun"], 1.8),
        ("wahrheit", &["abstract_noun"], 1.5),
        ("hilft", &["verb"], 1.5),
        ("starlink", &["proper_noun"], 1.5),
        ("ukraine", &["proper_noun"], 2.0),
        ("glücklich", &["happiness", "positive", "adjective"], 1.2),
        ("zukunft", &["abstract_noun"], 1.2),
        ("glaubt", &["state_verb"], 1.0),
        ("weiß", &["state_verb"], 0.8),
        ("klar", &["assertion_opinion"], 0.8),
        ("falsch", &["negative", "adjective"], 0.3),
        ("wut", &["anger", "negative"], 0.2),
        ("traurig", &["sadness", "negative", "adjective"], 0.2),
        ("schlecht", &["negative", "adjective"], 0.3),
    ]));
    let oppose_pool = extend(words(&[
        ("wut", &["anger", "negative"], 2.5),
        ("krieg", &["fear", "anger", "negative"], 1.5),
        ("falsch", &["negative", "adjective"], 2.0),
        ("schlecht", &["negative", "adjective"], 2.0),
        ("weil", &["causal", "conjunction"], 2.5),
        ("aber", &["contrastive", "conjunction"], 2.0),
        ("denn", &["causal", "conjunction"], 1.2),
        ("propaganda", &["abstract_noun"], 2.0),
        ("geld", &["abstract_noun"], 1.5),
        ("gier", &["abstract_noun"], 1.2),
        ("lügt", &["verb"], 1.5),
        ("traurig", &["sadness", "negative", "adjective"], 1.5),
        ("ekelhaft", &["disgust", "negative"], 1.0),
        ("hasst", &["state_verb"], 1.5),
        ("denkt", &["state_verb"], 1.2),
        ("versteht", &["state_verb"], 1.2),
        ("russland", &["proper_noun"], 4.0),
        ("putin", &["proper_noun"], 1.2),
        ("leider", &["adverb"], 1.5),
        ("behauptet", &["assertion_opinion"], 1.0),
        ("obwohl", &["concessive", "conjunction"], 0.8),
        ("verliert", &["verb"], 1.0),
        ("tesla", &["proper_noun"], 1.2),
        ("zahlt", &["verb"], 0.8),
        ("nie", &["negation"], 1.0),
        ("vertrauen", &["trust", "positive"], 0.25),
        ("hoffnung", &["hope", "positive"], 0.25),
        ("gut", &["positive", "adjective"], 0.3),
        ("glücklich", &["happiness", "positive", "adjective"], 0.15),
        ("danke", &["trust", "positive"], 0.2),
    ]));
    let neutral_pool = extend(words(&[
        ("umfrage", &[], 2.0),
        ("video", &[], 1.5),
        ("leute", &[], 1.5),
        ("lage", &["abstract_noun"], 1.5),
        ("politik", &["abstract_noun"], 1.5),
        ("russland", &["proper_noun"], 1.5),
        ("ukraine", &["proper_noun"], 1.5),
        ("als", &["temporal", "conjunction"], 1.0),
        ("während", &["temporal", "conjunction"], 0.8),
        ("postet", &["verb"], 1.2),
        ("schreibt", &["verb"], 1.0),
        ("thema", &[], 1.5),
        ("frage", &[], 1.2),
        ("immer", &["high_modality"], 0.8),
        ("vielleicht", &["adverb"], 1.2),
        ("neu", &["adjective"], 1.0),
    ]));
    let off_topic_pool = extend(words(&[
        ("spiel", &[], 2.0),
        ("musik", &[], 1.5),
        ("essen", &[], 1.5),
        ("katze", &[], 1.2),
        ("wetter", &[], 1.2),
        ("morgen", &["adverb"], 1.0),
        ("gut", &["positive", "adjective"], 0.8),
    ]));

    let mut vocabulary = BTreeMap::new();
    vocabulary.insert(CoarseStance::SupportTarget, support_pool.clone());
    vocabulary.insert(CoarseStance::SupportBoth, support_pool);
    vocabulary.insert(CoarseStance::OpposeTarget, oppose_pool.clone());
    vocabulary.insert(CoarseStance::OpposeBoth, oppose_pool);
    vocabulary.insert(CoarseStance::Neutral, neutral_pool);
    vocabulary.insert(CoarseStance::OffTopic, off_topic_pool);

    let mut feature_skews = stance_skews(
        &OPPOSE,
        &[
            ("conjunction", 2.0),
            ("adverb", 1.3),
            ("causal", 1.5),
            ("state_verb", 1.4),
            ("negative", 1.3),
            ("anger", 1.5),
            ("sadness", 1.3),
        ],
    );
    feature_skews.extend(stance_skews(
        &SUPPORT,
        &[
            ("trust", 1.5),
            ("abstract_noun", 1.5),
            ("hope", 1.5),
            ("conjunction", 0.7),
        ],
    ));

    SynthConfig {
        name: "musk_like".to_string(),
        seed: 20221003,
        n_days: 20,
        lang: "de".to_string(),
        start_date: Utc.with_ymd_and_hms(2022, 10, 3, 0, 0, 0).unwrap(),
        platforms: [
            PlatformSpec {
                name: "twitter".to_string(),
                kind: Platform::TwitterLike,
                volume: 1.0,
            },
            PlatformSpec {
                name: "telegram".to_string(),
                kind: Platform::TelegramLike,
                volume: 1.0,
            },
        ],
        spillover_day: 3,
        appeasement_day: 7,
        consequence_day: 12,
        supporter_daily_rate: 5.0,
        wave_amplitudes: [
            (EventKind::Trigger, 200.0),
            (EventKind::Spillover, 120.0),
            (EventKind::Appeasement, 150.0),
            (EventKind::Consequence, 80.0),
        ]
        .into(),
        decay_halflife_days: 0.7,
        stance_mix: [
            (CoarseStance::SupportTarget, 0.16),
            (CoarseStance::SupportBoth, 0.04),
            (CoarseStance::OpposeTarget, 0.40),
            (CoarseStance::OpposeBoth, 0.12),
            (CoarseStance::Neutral, 0.18),
            (CoarseStance::OffTopic, 0.10),
        ]
        .into(),
        opponent_recruitment_boost: 0.0,
        repeat_frac_gt1: 0.088,
        repeat_frac_gt2: 0.02,
        reply_to_root_fraction: 0.8,
        toxicity_rate_by_platform: [
            ("twitter".to_string(), 0.052),
            ("telegram".to_string(), 0.06),
        ]
        .into(),
        emoji_budget_by_platform: [
            ("twitter".to_string(), 24),
            ("telegram".to_string(), 15),
        ]
        .into(),
        emoji_pool: vec![
            "🤡".to_string(),
            "🤡".to_string(),
            "💀".to_string(),
            "🔥".to_string(),
        ],
        toxic_vocabulary: vec![
            "scheiße".to_string(),
            "idiot".to_string(),
            "müll".to_string(),
            "erbärmlich".to_string(),
            "dumm".to_string(),
        ],
        vocabulary,
        feature_skews,
    }
}

/// Variant of [`musk_like`] planting the observed group trend: the
/// opposition arrives with the spillover rather than the trigger, and
/// recruited opponents stay active afterwards, so the support share of the
/// first span strictly exceeds the support share of the last span while
/// supporters stay constant in absolute terms.
pub fn musk_like_trend() -> SynthConfig {
    let mut config = musk_like();
    config.name = "musk_like_trend".to_string();
    config.wave_amplitudes = [
        (EventKind::Spillover, 100.0),
        (EventKind::Appeasement, 130.0),
        (EventKind::Consequence, 70.0),
    ]
    .into();
    config.opponent_recruitment_boost = 3.0;
    config
}

/// English-language storm in a gaming community: origin platform plus a
/// clock-less forum. Toxicity anchored at 10.4 % / 22 %, exactly 13 emoji
/// on the forum side, opponents heavy on pronouns and conjunctions.
pub fn esports_like() -> SynthConfig {
    let base_en: Vec<VocabWord> = words(&[
        ("the", &[], 8.0),
        ("a", &[], 4.0),
        ("to", &[], 3.0),
        ("of", &[], 2.5),
        ("in", &[], 2.0),
        ("and", &["conjunction"], 3.5),
        ("is", &["be_form"], 3.0),
        ("was", &["be_form"], 1.5),
        ("it", &["personal_pronoun"], 2.0),
        ("he", &["personal_pronoun"], 2.2),
        ("they", &["personal_pronoun"], 2.0),
        ("we", &["personal_pronoun"], 1.5),
        ("i", &["personal_pronoun"], 1.5),
        ("not", &["negation"], 1.5),
        ("this", &[], 1.5),
        ("for", &[], 1.5),
        ("on", &[], 1.2),
        ("now", &["adverb"], 1.0),
        ("says", &["verb"], 1.2),
        ("carlos", &["proper_noun"], 2.0),
        ("tate", &["proper_noun"], 1.8),
        ("g2", &[], 1.8),
        ("when", &["temporal", "conjunction"], 0.8),
        ("that", &["relative"], 1.5),
    ]);
    let extend = |extra: Vec<VocabWord>| -> Vec<VocabWord> {
        let mut pool = base_en.clone();
        pool.extend(extra);
        pool
    };

    let support_pool = extend(words(&[
        ("grateful", &["trust", "happiness", "positive"], 2.5),
        ("trust", &["trust", "positive"], 2.0),
        ("hope", &["hope", "positive"], 2.5),
        ("good", &["positive", "adjective"], 2.0),
        ("great", &["positive", "adjective"], 1.5),
        ("honest", &["trust", "positive"], 1.5),
        ("respect", &["abstract_noun"], 2.0),
        ("loyalty", &["abstract_noun"], 1.5),
        ("support", &["abstract_noun", "verb"], 1.8),
        ("apologized", &["verb"], 1.5),
        ("forgive", &[], 1.0),
        ("friends", &[], 1.5),
        ("happy", &["happiness", "positive", "adjective"], 1.2),
        ("deserves", &[], 1.0),
        ("chance", &[], 1.2),
    ]));
    let oppose_pool = extend(words(&[
        ("angry", &["anger", "negative", "adjective"], 2.0),
        ("wrong", &["negative", "adjective"], 2.2),
        ("bad", &["negative", "adjective"], 2.0),
        ("disgusting", &["disgust", "negative"], 1.8),
        ("sad", &["sadness", "negative", "adjective"], 1.5),
        ("because", &["causal", "conjunction"], 2.2),
        ("but", &["contrastive", "conjunction"], 2.0),
        ("hate", &["anger", "disgust", "negative", "state_verb"], 1.5),
        ("fired", &["participle"], 1.5),
        ("banned", &["verb", "participle"], 1.2),
        ("blamed", &["verb", "participle"], 1.0),
        ("greed", &["abstract_noun"], 1.5),
        ("power", &["abstract_noun"], 1.2),
        ("attention", &["abstract_noun"], 1.0),
        ("never", &["negation"], 1.2),
        ("party", &[], 1.5),
        ("video", &[], 1.2),
        ("fans", &[], 1.2),
        ("sponsor", &[], 1.0),
        ("worst", &["superlative", "negative"], 1.2),
    ]));
    let neutral_pool = extend(words(&[
        ("poll", &[], 1.5),
        ("news", &[], 1.5),
        ("today", &[], 1.2),
        ("posted", &["verb", "participle"], 1.5),
        ("tweeted", &["verb"], 1.5),
        ("people", &[], 2.0),
        ("team", &[], 1.8),
        ("game", &[], 1.8),
        ("story", &[], 1.2),
        ("update", &[], 1.2),
        ("situation", &["abstract_noun"], 1.5),
        ("while", &["temporal", "conjunction"], 1.0),
        ("might", &["modal_verb"], 1.0),
        ("could", &["modal_verb"], 1.0),
        ("seems", &["state_verb", "verb"], 1.2),
        ("still", &["adverb"], 1.2),
    ]));
    let off_topic_pool = extend(words(&[
        ("game", &[], 2.0),
        ("stream", &[], 1.5),
        ("music", &[], 1.2),
        ("food", &[], 1.2),
        ("weekend", &[], 1.2),
        ("new", &["adjective"], 1.0),
        ("patch", &[], 1.2),
        ("notes", &[], 1.0),
    ]));

    let mut vocabulary = BTreeMap::new();
    vocabulary.insert(CoarseStance::SupportTarget, support_pool.clone());
    vocabulary.insert(CoarseStance::SupportBoth, support_pool);
    vocabulary.insert(CoarseStance::OpposeTarget, oppose_pool.clone());
    vocabulary.insert(CoarseStance::OpposeBoth, oppose_pool);
    vocabulary.insert(CoarseStance::Neutral, neutral_pool);
    vocabulary.insert(CoarseStance::OffTopic, off_topic_pool);

    let mut feature_skews = stance_skews(
        &OPPOSE,
        &[
            ("personal_pronoun", 1.6),
            ("conjunction", 1.6),
            ("adverb", 1.4),
            ("disgust", 1.5),
        ],
    );
    feature_skews.extend(stance_skews(
        &SUPPORT,
        &[("abstract_noun", 1.7), ("trust", 1.8)],
    ));

    SynthConfig {
        name: "esports_like".to_string(),
        seed: 20220917,
        n_days: 14,
        lang: "en".to_string(),
        start_date: Utc.with_ymd_and_hms(2022, 9, 17, 0, 0, 0).unwrap(),
        platforms: [
            PlatformSpec {
                name: "twitter".to_string(),
                kind: Platform::TwitterLike,
                volume: 1.0,
            },
            PlatformSpec {
                name: "reddit".to_string(),
                kind: Platform::RedditLike,
                volume: 1.0,
            },
        ],
        spillover_day: 3,
        appeasement_day: 6,
        consequence_day: 9,
        supporter_daily_rate: 5.0,
        wave_amplitudes: [
            (EventKind::Trigger, 180.0),
            (EventKind::Spillover, 100.0),
            (EventKind::Appeasement, 130.0),
            (EventKind::Consequence, 70.0),
        ]
        .into(),
        decay_halflife_days: 0.7,
        stance_mix: [
            (CoarseStance::SupportTarget, 0.18),
            (CoarseStance::SupportBoth, 0.02),
            (CoarseStance::OpposeTarget, 0.45),
            (CoarseStance::OpposeBoth, 0.08),
            (CoarseStance::Neutral, 0.17),
            (CoarseStance::OffTopic, 0.10),
        ]
        .into(),
        opponent_recruitment_boost: 0.0,
        repeat_frac_gt1: 0.07,
        repeat_frac_gt2: 0.01,
        reply_to_root_fraction: 0.8,
        toxicity_rate_by_platform: [
            ("twitter".to_string(), 0.104),
            ("reddit".to_string(), 0.22),
        ]
        .into(),
        emoji_budget_by_platform: [("twitter".to_string(), 40), ("reddit".to_string(), 13)]
            .into(),
        emoji_pool: vec![
            "🤡".to_string(),
            "🤡".to_string(),
            "💀".to_string(),
            "😂".to_string(),
        ],
        toxic_vocabulary: vec![
            "fuck".to_string(),
            "clown".to_string(),
            "trash".to_string(),
            "pathetic".to_string(),
            "stupid".to_string(),
        ],
        vocabulary,
        feature_skews,
    }
}

/// Shared English pool for the classifier-verification configs: wide tag
/// coverage so per-phase and per-stance skews have room to act.
fn separable_pool() -> Vec<VocabWord> {
    words(&[
        ("the", &[], 8.0),
        ("a", &[], 4.0),
        ("to", &[], 3.0),
        ("of", &[], 2.5),
        ("in", &[], 2.0),
        ("and", &["conjunction"], 3.0),
        ("is", &["be_form"], 3.0),
        ("was", &["be_form"], 2.0),
        ("are", &["be_form"], 1.5),
        ("it", &["personal_pronoun"], 2.0),
        ("he", &["personal_pronoun"], 2.0),
        ("they", &["personal_pronoun"], 2.0),
        ("we", &["personal_pronoun"], 2.0),
        ("i", &["personal_pronoun"], 1.5),
        ("you", &["personal_pronoun"], 1.2),
        ("not", &["negation"], 1.5),
        ("never", &["negation"], 1.0),
        ("this", &[], 1.5),
        ("for", &[], 1.5),
        ("on", &[], 1.2),
        ("angry", &["anger", "negative", "adjective"], 1.5),
        ("rage", &["anger", "negative"], 1.0),
        ("outrage", &["anger", "negative"], 1.0),
        ("surprised", &["surprise"], 1.0),
        ("shocking", &["surprise", "negative"], 1.0),
        ("unexpected", &["surprise"], 1.0),
        ("sad", &["sadness", "negative", "adjective"], 1.2),
        ("tragic", &["sadness", "negative"], 1.0),
        ("grief", &["sadness", "negative"], 0.8),
        ("afraid", &["fear", "negative"], 1.0),
        ("scared", &["fear", "negative"], 1.0),
        ("threat", &["fear", "negative"], 0.8),
        ("hope", &["hope", "positive"], 1.2),
        ("hopeful", &["hope", "positive"], 1.0),
        ("wish", &["hope", "positive"], 0.8),
        ("trust", &["trust", "positive"], 1.2),
        ("honest", &["trust", "positive"], 1.0),
        ("reliable", &["trust", "positive"], 0.8),
        ("happy", &["happiness", "positive", "adjective"], 1.2),
        ("glad", &["happiness", "positive"], 1.0),
        ("joy", &["happiness", "positive"], 0.8),
        ("disgusting", &["disgust", "negative"], 1.0),
        ("gross", &["disgust", "negative"], 0.8),
        ("vile", &["disgust", "negative"], 0.6),
        ("good", &["positive", "adjective"], 1.5),
        ("great", &["positive", "adjective"], 1.2),
        ("bad", &["negative", "adjective"], 1.5),
        ("wrong", &["negative", "adjective"], 1.2),
        ("because", &["causal", "conjunction"], 1.5),
        ("since", &["causal", "conjunction"], 0.8),
        ("therefore", &["consecutive"], 0.6),
        ("but", &["contrastive", "conjunction"], 1.5),
        ("although", &["concessive", "conjunction"], 0.8),
        ("when", &["temporal", "conjunction"], 1.2),
        ("while", &["temporal", "conjunction"], 0.8),
        ("after", &["temporal", "conjunction"], 1.0),
        ("before", &["temporal", "conjunction"], 0.8),
        ("if", &["conditional", "conjunction"], 1.2),
        ("unless", &["conditional", "conjunction"], 0.6),
        ("must", &["modal_verb", "high_modality"], 1.0),
        ("should", &["modal_verb"], 1.2),
        ("could", &["modal_verb"], 1.0),
        ("might", &["modal_verb"], 1.0),
        ("would", &["modal_verb"], 1.0),
        ("know", &["state_verb", "verb"], 1.2),
        ("think", &["state_verb", "verb"], 1.2),
        ("feel", &["state_verb", "verb"], 1.0),
        ("believe", &["state_verb", "verb", "assertion_opinion"], 1.0),
        ("seems", &["state_verb", "verb"], 1.0),
        ("justice", &["abstract_noun"], 1.0),
        ("freedom", &["abstract_noun"], 1.0),
        ("truth", &["abstract_noun"], 1.0),
        ("policy", &["abstract_noun"], 0.8),
        ("economy", &["abstract_noun"], 0.8),
        ("situation", &["abstract_noun"], 1.0),
        ("power", &["abstract_noun"], 0.8),
        ("claims", &["assertion_opinion"], 1.0),
        ("obviously", &["assertion_opinion", "high_modality"], 0.8),
        ("honestly", &["assertion_opinion"], 0.8),
        ("opinion", &["assertion_opinion"], 0.8),
        ("very", &["adverb"], 1.2),
        ("often", &["adverb"], 1.0),
        ("still", &["adverb"], 1.0),
        ("again", &["adverb"], 0.8),
        ("now", &["adverb"], 1.2),
        ("too", &["adverb"], 0.8),
        ("says", &["verb"], 1.2),
        ("posted", &["verb", "participle"], 1.0),
        ("made", &["verb", "participle"], 1.0),
        ("people", &[], 1.5),
        ("team", &[], 1.0),
        ("story", &[], 1.0),
    ])
}

fn separable_base(name: &str, seed: u64) -> SynthConfig {
    let pool = separable_pool();
    let mut vocabulary = BTreeMap::new();
    for s in CoarseStance::ALL {
        vocabulary.insert(s, pool.clone());
    }
    SynthConfig {
        name: name.to_string(),
        seed,
        n_days: 24,
        lang: "en".to_string(),
        start_date: Utc.with_ymd_and_hms(2022, 10, 3, 0, 0, 0).unwrap(),
        platforms: [
            PlatformSpec {
                name: "origin".to_string(),
                kind: Platform::TwitterLike,
                volume: 1.0,
            },
            PlatformSpec {
                name: "echo".to_string(),
                kind: Platform::TelegramLike,
                volume: 0.25,
            },
        ],
        spillover_day: 3,
        appeasement_day: 6,
        consequence_day: 9,
        supporter_daily_rate: 13.3,
        wave_amplitudes: BTreeMap::new(),
        decay_halflife_days: 0.35,
        stance_mix: BTreeMap::new(),
        opponent_recruitment_boost: 0.0,
        repeat_frac_gt1: 0.1,
        repeat_frac_gt2: 0.02,
        reply_to_root_fraction: 0.8,
        toxicity_rate_by_platform: BTreeMap::new(),
        emoji_budget_by_platform: BTreeMap::new(),
        emoji_pool: Vec::new(),
        toxic_vocabulary: Vec::new(),
        vocabulary,
        feature_skews: Vec::new(),
    }
}

/// Three balanced phases on the origin platform (~2000 messages): one huge
/// trigger-day spike, two mid-run waves, a long quiet tail. Phase-keyed
/// vocabulary skews make begin/middle/end linguistically separable.
pub fn separable_phase() -> SynthConfig {
    let mut config = separable_base("separable_phase", 7);
    config.wave_amplitudes = [
        (EventKind::Trigger, 640.0),
        (EventKind::Spillover, 120.0),
        (EventKind::Appeasement, 160.0),
    ]
    .into();
    config.stance_mix = [
        (CoarseStance::SupportTarget, 0.30),
        (CoarseStance::SupportBoth, 0.05),
        (CoarseStance::OpposeTarget, 0.12),
        (CoarseStance::OpposeBoth, 0.03),
        (CoarseStance::Neutral, 0.35),
        (CoarseStance::OffTopic, 0.15),
    ]
    .into();
    let mut skews = phase_skews(
        Phase::Begin,
        &[
            ("anger", 4.0),
            ("surprise", 3.5),
            ("sadness", 3.0),
            ("assertion_opinion", 3.0),
            ("negative", 2.0),
        ],
    );
    skews.extend(phase_skews(
        Phase::Middle,
        &[
            ("causal", 4.0),
            ("conjunction", 2.0),
            ("modal_verb", 3.0),
            ("fear", 3.5),
            ("abstract_noun", 2.5),
        ],
    ));
    skews.extend(phase_skews(
        Phase::End,
        &[
            ("hope", 4.0),
            ("trust", 3.5),
            ("happiness", 3.0),
            ("positive", 2.0),
            ("temporal", 3.0),
        ],
    ));
    config.feature_skews = skews;
    config
}

/// Three balanced stance classes (~2000 messages on the origin platform),
/// waves kept small so the mix drives the class sizes; stance-keyed skews
/// with disjoint tag sets.
pub fn separable_stance() -> SynthConfig {
    let mut config = separable_base("separable_stance", 11);
    config.supporter_daily_rate = 28.3;
    config.decay_halflife_days = 0.7;
    config.wave_amplitudes = [
        (EventKind::Trigger, 20.0),
        (EventKind::Spillover, 15.0),
        (EventKind::Appeasement, 15.0),
    ]
    .into();
    config.stance_mix = [
        (CoarseStance::SupportTarget, 0.32),
        (CoarseStance::SupportBoth, 0.02),
        (CoarseStance::OpposeTarget, 0.30),
        (CoarseStance::OpposeBoth, 0.03),
        (CoarseStance::Neutral, 0.23),
        (CoarseStance::OffTopic, 0.10),
    ]
    .into();
    let mut skews = stance_skews(
        &SUPPORT,
        &[
            ("trust", 4.0),
            ("hope", 3.5),
            ("positive", 2.5),
            ("happiness", 3.0),
            ("abstract_noun", 2.0),
        ],
    );
    skews.extend(stance_skews(
        &OPPOSE,
        &[
            ("anger", 4.0),
            ("negative", 2.5),
            ("causal", 3.5),
            ("disgust", 3.0),
            ("sadness", 3.0),
            ("contrastive", 2.5),
        ],
    ));
    skews.extend(stance_skews(
        &NEUTRALISH,
        &[
            ("modal_verb", 3.5),
            ("temporal", 3.0),
            ("state_verb", 3.0),
            ("adverb", 2.5),
            ("conditional", 3.0),
        ],
    ));
    config.feature_skews = skews;
    config
}
