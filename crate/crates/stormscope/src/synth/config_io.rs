//! Flat key=value config format for the storm generator.
//!
//! Lines starting with `#` are comments; blank lines are ignored. Keys use
//! dots for grouping (`wave.trigger`, `stance_mix.oppose_target`,
//! `skew.phase:begin.n_anger`). Vocabulary entries are space-separated
//! `word[:tag[:tag...]][*weight]` items and may span multiple
//! `vocab.<stance>` lines, which accumulate.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{TimeZone, Utc};

use super::{
    EventKind, PlatformSpec, SkewCondition, SkewRule, SynthConfig, SynthError, VocabWord,
};
use crate::corpus::{CoarseStance, Phase, Platform};
use crate::features::{idx, EMOTION_TAGS, FEATURE_NAMES};

/// Map a feature name (`n_conjunctions`) to the vocabulary tag it
/// corresponds to (`conjunction`). Raw tags pass through unchanged so both
/// spellings work in skew keys.
pub(super) fn feature_to_tag(key: &str) -> String {
    let table: &[(usize, &str)] = &[
        (idx::ADVERBS, "adverb"),
        (idx::ADJECTIVES, "adjective"),
        (idx::VERBS, "verb"),
        (idx::PROPER_NOUNS, "proper_noun"),
        (idx::CONJUNCTIONS, "conjunction"),
        (idx::NEGATIONS, "negation"),
        (idx::COMPARATIVES, "comparative"),
        (idx::SUPERLATIVES, "superlative"),
        (idx::PERSONAL_PRONOUNS, "personal_pronoun"),
        (idx::PASSIVE_FORMS, "participle"),
        (idx::CONTRASTIVE_BUT, "contrastive"),
        (idx::CONCESSIVE, "concessive"),
        (idx::CAUSAL, "causal"),
        (idx::CONSECUTIVE, "consecutive"),
        (idx::RELATIVE, "relative"),
        (idx::TEMPORAL, "temporal"),
        (idx::CONDITIONAL, "conditional"),
        (idx::ABSTRACT_NOUNS, "abstract_noun"),
        (idx::MODAL_VERBS, "modal_verb"),
        (idx::STATE_VERBS, "state_verb"),
        (idx::HIGH_MODALITY, "high_modality"),
        (idx::ASSERTION_OPINION, "assertion_opinion"),
    ];
    for (i, tag) in table {
        if FEATURE_NAMES[*i] == key {
            return tag.to_string();
        }
    }
    for (k, tag) in EMOTION_TAGS.iter().enumerate() {
        if FEATURE_NAMES[idx::EMOTION_BASE + k] == key {
            return tag.to_string();
        }
    }
    key.to_string()
}

fn parse_vocab_entries(value: &str, line: usize) -> Result<Vec<VocabWord>, SynthError> {
    let mut out = Vec::new();
    for item in value.split_whitespace() {
        let (spec, weight) = match item.rsplit_once('*') {
            Some((spec, w)) => (
                spec,
                w.parse::<f64>()
                    .map_err(|_| SynthError::Parse(line, format!("bad weight in `{item}`")))?,
            ),
            None => (item, 1.0),
        };
        let mut parts = spec.split(':');
        let word = parts
            .next()
            .filter(|w| !w.is_empty())
            .ok_or_else(|| SynthError::Parse(line, format!("empty word in `{item}`")))?;
        out.push(VocabWord {
            word: word.to_string(),
            tags: parts.map(str::to_string).collect(),
            weight,
        });
    }
    Ok(out)
}

fn skeleton() -> SynthConfig {
    SynthConfig {
        name: "custom".to_string(),
        seed: 0,
        n_days: 0,
        lang: "en".to_string(),
        start_date: Utc.with_ymd_and_hms(2022, 10, 3, 0, 0, 0).unwrap(),
        platforms: [
            PlatformSpec {
                name: "platform1".to_string(),
                kind: Platform::TwitterLike,
                volume: 1.0,
            },
            PlatformSpec {
                name: "platform2".to_string(),
                kind: Platform::TelegramLike,
                volume: 1.0,
            },
        ],
        spillover_day: 0,
        appeasement_day: 0,
        consequence_day: 0,
        supporter_daily_rate: 0.0,
        wave_amplitudes: BTreeMap::new(),
        decay_halflife_days: 1.0,
        stance_mix: BTreeMap::new(),
        opponent_recruitment_boost: 0.0,
        repeat_frac_gt1: 0.0,
        repeat_frac_gt2: 0.0,
        reply_to_root_fraction: 0.8,
        toxicity_rate_by_platform: BTreeMap::new(),
        emoji_budget_by_platform: BTreeMap::new(),
        emoji_pool: Vec::new(),
        toxic_vocabulary: Vec::new(),
        vocabulary: BTreeMap::new(),
        feature_skews: Vec::new(),
    }
}

/// Parse a config document. The result is validated.
pub fn parse_config(text: &str) -> Result<SynthConfig, SynthError> {
    let mut config = skeleton();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SynthError::Parse(line_no, "expected key = value".to_string()))?;
        let key = key.trim();
        let value = value.trim();
        let err = |m: String| SynthError::Parse(line_no, m);
        let parse_f64 =
            |v: &str| -> Result<f64, SynthError> { v.parse().map_err(|_| err(format!("bad number `{v}`"))) };

        match key {
            "name" => config.name = value.to_string(),
            "seed" => config.seed = value.parse().map_err(|_| err("bad seed".into()))?,
            "days" => config.n_days = value.parse().map_err(|_| err("bad days".into()))?,
            "lang" => config.lang = value.to_string(),
            "start_date" => {
                let mut parts = value.split('-');
                let mut next = |what: &str| -> Result<u32, SynthError> {
                    parts
                        .next()
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| err(format!("bad start_date ({what})")))
                };
                let (y, m, d) = (next("year")?, next("month")?, next("day")?);
                config.start_date = Utc
                    .with_ymd_and_hms(y as i32, m, d, 0, 0, 0)
                    .single()
                    .ok_or_else(|| err("bad start_date".into()))?;
            }
            "event.spillover" => {
                config.spillover_day = value.parse().map_err(|_| err("bad day".into()))?
            }
            "event.appeasement" => {
                config.appeasement_day = value.parse().map_err(|_| err("bad day".into()))?
            }
            "event.consequence" => {
                config.consequence_day = value.parse().map_err(|_| err("bad day".into()))?
            }
            "supporter_daily_rate" => config.supporter_daily_rate = parse_f64(value)?,
            "opponent_recruitment_boost" => {
                config.opponent_recruitment_boost = parse_f64(value)?
            }
            "decay_halflife_days" => config.decay_halflife_days = parse_f64(value)?,
            "reply_to_root_fraction" => config.reply_to_root_fraction = parse_f64(value)?,
            "repeat_frac_gt1" => config.repeat_frac_gt1 = parse_f64(value)?,
            "repeat_frac_gt2" => config.repeat_frac_gt2 = parse_f64(value)?,
            "emoji_pool" => {
                config.emoji_pool = value.split_whitespace().map(str::to_string).collect()
            }
            "toxic_vocab" => {
                config.toxic_vocabulary =
                    value.split_whitespace().map(str::to_string).collect()
            }
            _ => {
                if let Some(rest) = key.strip_prefix("platform.") {
                    let (which, field) = rest
                        .split_once('.')
                        .ok_or_else(|| err("expected platform.<1|2>.<field>".into()))?;
                    let idx = match which {
                        "1" => 0,
                        "2" => 1,
                        _ => return Err(err("platform index must be 1 or 2".into())),
                    };
                    match field {
                        "name" => config.platforms[idx].name = value.to_string(),
                        "kind" => {
                            config.platforms[idx].kind =
                                value.parse().map_err(|e: String| err(e))?
                        }
                        "volume" => config.platforms[idx].volume = parse_f64(value)?,
                        other => return Err(err(format!("unknown platform field `{other}`"))),
                    }
                } else if let Some(event) = key.strip_prefix("wave.") {
                    let kind = EventKind::ALL
                        .iter()
                        .find(|e| e.as_str() == event)
                        .copied()
                        .ok_or_else(|| err(format!("unknown event `{event}`")))?;
                    config.wave_amplitudes.insert(kind, parse_f64(value)?);
                } else if let Some(stance) = key.strip_prefix("stance_mix.") {
                    let stance: CoarseStance =
                        stance.parse().map_err(|e: String| err(e))?;
                    config.stance_mix.insert(stance, parse_f64(value)?);
                } else if let Some(platform) = key.strip_prefix("toxicity.") {
                    config
                        .toxicity_rate_by_platform
                        .insert(platform.to_string(), parse_f64(value)?);
                } else if let Some(platform) = key.strip_prefix("emoji.") {
                    config.emoji_budget_by_platform.insert(
                        platform.to_string(),
                        value.parse().map_err(|_| err("bad emoji budget".into()))?,
                    );
                } else if let Some(stance) = key.strip_prefix("vocab.") {
                    let stance: CoarseStance =
                        stance.parse().map_err(|e: String| err(e))?;
                    let entries = parse_vocab_entries(value, line_no)?;
                    config.vocabulary.entry(stance).or_default().extend(entries);
                } else if let Some(rest) = key.strip_prefix("skew.") {
                    let (cond, feature) = rest
                        .split_once('.')
                        .ok_or_else(|| err("expected skew.<condition>.<feature>".into()))?;
                    let condition = if let Some(phase) = cond.strip_prefix("phase:") {
                        let phase = Phase::ALL
                            .iter()
                            .find(|p| p.as_str() == phase)
                            .copied()
                            .ok_or_else(|| err(format!("unknown phase `{phase}`")))?;
                        SkewCondition::Phase(phase)
                    } else {
                        SkewCondition::Stance(cond.parse().map_err(|e: String| err(e))?)
                    };
                    config.feature_skews.push(SkewRule {
                        condition,
                        tag: feature_to_tag(feature),
                        multiplier: parse_f64(value)?,
                    });
                } else {
                    return Err(err(format!("unknown key `{key}`")));
                }
            }
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn parse_config_file(path: &Path) -> Result<SynthConfig, SynthError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SynthError::InvalidConfig(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn vocab_entry_to_string(w: &VocabWord) -> String {
    let mut s = w.word.clone();
    for t in &w.tags {
        s.push(':');
        s.push_str(t);
    }
    if w.weight != 1.0 {
        s.push('*');
        s.push_str(&w.weight.to_string());
    }
    s
}

/// Render a config in canonical key order; `parse_config` inverts this
/// exactly.
pub fn config_to_string(config: &SynthConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# synthetic storm config: {}\n", config.name));
    out.push_str(&format!("name = {}\n", config.name));
    out.push_str(&format!("seed = {}\n", config.seed));
    out.push_str(&format!("days = {}\n", config.n_days));
    out.push_str(&format!("lang = {}\n", config.lang));
    out.push_str(&format!(
        "start_date = {}\n",
        config.start_date.format("%Y-%m-%d")
    ));
    for (i, p) in config.platforms.iter().enumerate() {
        out.push_str(&format!("platform.{}.name = {}\n", i + 1, p.name));
        out.push_str(&format!("platform.{}.kind = {}\n", i + 1, p.kind));
        out.push_str(&format!("platform.{}.volume = {}\n", i + 1, p.volume));
    }
    out.push_str(&format!("event.spillover = {}\n", config.spillover_day));
    out.push_str(&format!("event.appeasement = {}\n", config.appeasement_day));
    out.push_str(&format!("event.consequence = {}\n", config.consequence_day));
    out.push_str(&format!(
        "supporter_daily_rate = {}\n",
        config.supporter_daily_rate
    ));
    out.push_str(&format!(
        "decay_halflife_days = {}\n",
        config.decay_halflife_days
    ));
    if config.opponent_recruitment_boost != 0.0 {
        out.push_str(&format!(
            "opponent_recruitment_boost = {}\n",
            config.opponent_recruitment_boost
        ));
    }
    for (e, a) in &config.wave_amplitudes {
        out.push_str(&format!("wave.{} = {}\n", e.as_str(), a));
    }
    for (s, p) in &config.stance_mix {
        out.push_str(&format!("stance_mix.{} = {}\n", s.as_str(), p));
    }
    out.push_str(&format!("repeat_frac_gt1 = {}\n", config.repeat_frac_gt1));
    out.push_str(&format!("repeat_frac_gt2 = {}\n", config.repeat_frac_gt2));
    out.push_str(&format!(
        "reply_to_root_fraction = {}\n",
        config.reply_to_root_fraction
    ));
    for (p, r) in &config.toxicity_rate_by_platform {
        out.push_str(&format!("toxicity.{p} = {r}\n"));
    }
    for (p, b) in &config.emoji_budget_by_platform {
        out.push_str(&format!("emoji.{p} = {b}\n"));
    }
    if !config.emoji_pool.is_empty() {
        out.push_str(&format!("emoji_pool = {}\n", config.emoji_pool.join(" ")));
    }
    if !config.toxic_vocabulary.is_empty() {
        out.push_str(&format!(
            "toxic_vocab = {}\n",
            config.toxic_vocabulary.join(" ")
        ));
    }
    for rule in &config.feature_skews {
        let cond = match rule.condition {
            SkewCondition::Stance(s) => s.as_str().to_string(),
            SkewCondition::Phase(p) => format!("phase:{}", p.as_str()),
        };
        out.push_str(&format!("skew.{}.{} = {}\n", cond, rule.tag, rule.multiplier));
    }
    for (stance, pool) in &config.vocabulary {
        // chunk long pools over several lines
        for chunk in pool.chunks(8) {
            let entries: Vec<String> = chunk.iter().map(vocab_entry_to_string).collect();
            out.push_str(&format!(
                "vocab.{} = {}\n",
                stance.as_str(),
                entries.join(" ")
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writer_and_parser_round_trip() {
        for config in [
            super::super::musk_like(),
            super::super::musk_like_trend(),
            super::super::esports_like(),
            super::super::separable_phase(),
            super::super::separable_stance(),
        ] {
            let text = config_to_string(&config);
            let back = parse_config(&text).unwrap();
            assert_eq!(back, config);
        }
    }

    #[test]
    fn feature_names_map_to_tags() {
        assert_eq!(feature_to_tag("n_conjunctions"), "conjunction");
        assert_eq!(feature_to_tag("n_anger"), "anger");
        assert_eq!(feature_to_tag("n_causal_clauses"), "causal");
        assert_eq!(feature_to_tag("trust"), "trust"); // raw tags pass through
    }

    #[test]
    fn unknown_keys_are_rejected_with_line_numbers() {
        let err = parse_config("days = 5\nbogus_key = 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn malformed_vocab_is_rejected() {
        assert!(parse_vocab_entries("word*abc", 3).is_err());
        assert!(parse_vocab_entries(":tag", 3).is_err());
        let ok = parse_vocab_entries("krieg:fear:anger:negative*1.5 der*6 und:conjunction", 1)
            .unwrap();
        assert_eq!(ok.len(), 3);
        assert_eq!(ok[0].tags, vec!["fear", "anger", "negative"]);
        assert_eq!(ok[0].weight, 1.5);
        assert_eq!(ok[1].weight, 6.0);
        assert_eq!(ok[2].weight, 1.0);
    }
}
