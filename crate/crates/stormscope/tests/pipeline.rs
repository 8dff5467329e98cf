//! Cross-module checks driven by the synthetic generator: every planted
//! property must be recovered by the analysis pipeline that consumes it.

use std::path::{Path, PathBuf};

use stormscope::classify::{make_dataset, Task};
use stormscope::corpus::reply_structure;
use stormscope::features::tokenize;
use stormscope::groups::{contrast_groups, group_distribution};
use stormscope::lexicon::LexiconSet;
use stormscope::synth::{self, generate};
use stormscope::timeline::{bin_counts, bin_counts_with_groups, segment_phases, BinWidth};
use stormscope::CoarseStance;

fn lexicon_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("lexicons")
}

fn demo_set(lang: &str) -> LexiconSet {
    LexiconSet::load_dir(&lexicon_dir(), lang).unwrap()
}

#[test]
fn initial_spike_first_bin_exceeds_day_two() {
    let out = generate(&synth::musk_like()).unwrap();
    let series = bin_counts(&out.corpora[0], BinWidth::one_day()).unwrap();
    assert!(series.counts[0] > series.counts[1]);
}

#[test]
fn support_fraction_falls_from_first_to_last_span() {
    // supporters are constant in absolute terms while the recruited
    // opposition grows, so the support share shrinks over time
    let out = generate(&synth::musk_like_trend()).unwrap();
    let corpus = &out.corpora[0];
    let series = bin_counts_with_groups(corpus, BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    let dist = group_distribution(corpus, &series).unwrap();

    let support_share = |span: stormscope::timeline::Span| -> f64 {
        let mut support = 0.0;
        let mut total = 0.0;
        for (bin, s) in seg.span4.iter().enumerate() {
            if *s != span {
                continue;
            }
            if let Some(fracs) = &dist.bins[bin] {
                let weight = series.counts[bin] as f64;
                let sup = fracs.get(&CoarseStance::SupportTarget).copied().unwrap_or(0.0)
                    + fracs.get(&CoarseStance::SupportBoth).copied().unwrap_or(0.0);
                support += sup * weight;
                total += weight;
            }
        }
        support / total
    };
    let first = support_share(stormscope::timeline::Span::S1);
    let last = support_share(stormscope::timeline::Span::S4);
    assert!(
        first > last,
        "support share should fall: first span {first:.3} vs last span {last:.3}"
    );
}

#[test]
fn tiny_support_mix_stays_under_one_percent() {
    let mut config = synth::musk_like();
    config.name = "telegram_tiny_support".to_string();
    config.stance_mix = [
        (CoarseStance::SupportTarget, 0.008),
        (CoarseStance::SupportBoth, 0.002),
        (CoarseStance::OpposeTarget, 0.62),
        (CoarseStance::OpposeBoth, 0.12),
        (CoarseStance::Neutral, 0.15),
        (CoarseStance::OffTopic, 0.10),
    ]
    .into();
    config.supporter_daily_rate = 0.3;
    let out = generate(&config).unwrap();
    let corpus = &out.corpora[1];
    let n_support = corpus
        .messages
        .iter()
        .filter(|m| {
            m.stance
                .as_ref()
                .is_some_and(|s| s.coarse == CoarseStance::SupportTarget)
        })
        .count();
    let frac = n_support as f64 / corpus.len() as f64;
    assert!(frac < 0.01, "support_target fraction {frac:.4}");
}

#[test]
fn planted_conjunction_skew_ranks_in_top_five_by_effect_size() {
    let out = generate(&synth::musk_like()).unwrap();
    let set = demo_set("de");
    let rows = contrast_groups(
        &out.corpora[0],
        &set,
        CoarseStance::OpposeTarget,
        CoarseStance::SupportTarget,
    )
    .unwrap();
    let rank = rows
        .iter()
        .position(|r| r.feature == "n_conjunctions")
        .unwrap();
    assert!(
        rank < 5,
        "n_conjunctions ranked {} (|d| order: {:?})",
        rank + 1,
        rows.iter().take(6).map(|r| r.feature).collect::<Vec<_>>()
    );
    let row = &rows[rank];
    assert!(
        row.diff > 0.0,
        "opponents should use more conjunctions: diff {}",
        row.diff
    );
}

#[test]
fn planted_keyword_dominates_every_other_pool_word() {
    let config = synth::musk_like();
    let out = generate(&config).unwrap();
    // global token counts over both platforms
    let mut counts: std::collections::BTreeMap<String, u64> = Default::default();
    for corpus in &out.corpora {
        for m in &corpus.messages {
            for t in tokenize(&m.text, &m.lang).tokens {
                *counts.entry(t.lower).or_insert(0) += 1;
            }
        }
    }
    let russland = counts.get("russland").copied().unwrap_or(0);
    assert!(russland > 0);
    let mut vocab_words: std::collections::BTreeSet<&str> = Default::default();
    for pool in config.vocabulary.values() {
        for w in pool {
            // compare against planted content keywords, i.e. proper nouns
            if w.tags.iter().any(|t| t == "proper_noun") && w.word != "russland" {
                vocab_words.insert(&w.word);
            }
        }
    }
    for word in vocab_words {
        let c = counts.get(word).copied().unwrap_or(0);
        assert!(
            russland > c,
            "russland ({russland}) must beat {word} ({c})"
        );
    }
}

#[test]
fn stance_dataset_class_counts_match_planted_counts_exactly() {
    let out = generate(&synth::musk_like()).unwrap();
    let corpus = &out.corpora[0];
    let set = demo_set("de");
    let series = bin_counts(corpus, BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    let dataset = make_dataset(corpus, Task::Stance, &series, &seg, &set).unwrap();
    let counts = dataset.class_counts();
    let truth = &out.truth.platforms[0].stance_counts;
    let planted = |s: CoarseStance| truth.get(&s).copied().unwrap_or(0);
    assert_eq!(
        counts[0],
        planted(CoarseStance::SupportTarget) + planted(CoarseStance::SupportBoth)
    );
    assert_eq!(
        counts[1],
        planted(CoarseStance::OpposeTarget) + planted(CoarseStance::OpposeBoth)
    );
    assert_eq!(
        counts[2],
        planted(CoarseStance::Neutral) + planted(CoarseStance::OffTopic)
    );
    // the only unlabeled message is the root
    assert_eq!(dataset.n_skipped, 1);
}

#[test]
fn reply_to_root_fraction_planted_at_eighty_percent() {
    let out = generate(&synth::musk_like()).unwrap();
    for corpus in &out.corpora {
        let rs = reply_structure(corpus).unwrap();
        let n_replies = rs.n_replies_to_root + rs.n_replies_to_replies;
        // counts are deterministic: the fraction equals the planted one up
        // to integer rounding
        let expected = (0.8 * n_replies as f64).round() / n_replies as f64;
        assert_eq!(rs.fraction_to_root, expected);
        assert!((rs.fraction_to_root - 0.8).abs() <= 1.0 / n_replies as f64);
    }
}

#[test]
fn separability_beats_null_by_at_least_point_two() {
    use stormscope::classify::{evaluate, shuffle_labels, split, train, TrainConfig};
    let config = synth::separable_stance();
    assert!(
        config
            .feature_skews
            .iter()
            .filter(|s| s.multiplier >= 1.5)
            .count()
            >= 5
    );
    let out = generate(&config).unwrap();
    let corpus = &out.corpora[0];
    let set = demo_set("en");
    let series = bin_counts(corpus, BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    let dataset = make_dataset(corpus, Task::Stance, &series, &seg, &set).unwrap();

    let (tr, te) = split(&dataset, 5, 0.8).unwrap();
    let f1 = evaluate(&train(&tr, TrainConfig::default()).unwrap(), &te)
        .unwrap()
        .macro_f1;
    let null = shuffle_labels(&dataset, 99);
    let (ntr, nte) = split(&null, 5, 0.8).unwrap();
    let null_f1 = evaluate(&train(&ntr, TrainConfig::default()).unwrap(), &nte)
        .unwrap()
        .macro_f1;
    assert!(
        f1 - null_f1 >= 0.2,
        "separability margin {:.3} (f1 {f1:.3}, null {null_f1:.3})",
        f1 - null_f1
    );
}

#[test]
fn shipped_config_files_match_builtin_presets() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for (file, builtin) in [
        ("musk_like.cfg", synth::musk_like()),
        ("musk_like_trend.cfg", synth::musk_like_trend()),
        ("esports_like.cfg", synth::esports_like()),
    ] {
        let parsed = synth::parse_config_file(&dir.join(file)).unwrap();
        assert_eq!(parsed, builtin, "{file} drifted from the builtin preset");
    }
}

/// Every vocabulary tag must resolve in the shipped demo lexicons, so the
/// skews the generator plants are recoverable by feature extraction; and
/// regular pools must stay clear of the toxicity lexicon so the planted
/// toxicity counts stay exact.
#[test]
fn vocabulary_tags_resolve_in_demo_lexicons() {
    use stormscope::lexicon::LexiconRole;
    for config in [synth::musk_like(), synth::esports_like(), synth::separable_stance()] {
        let set = demo_set(&config.lang);
        let tox = set.role(LexiconRole::Toxicity).unwrap();
        let role_of = |tag: &str| -> Option<LexiconRole> {
            match tag {
                "fear" | "surprise" | "anger" | "hope" | "disgust" | "happiness" | "sadness"
                | "trust" | "negative" | "positive" => Some(LexiconRole::Emotion),
                "modal_verb" | "high_modality" => Some(LexiconRole::Modality),
                "abstract_noun" => Some(LexiconRole::AbstractNoun),
                "state_verb" => Some(LexiconRole::StateVerb),
                "assertion_opinion" => Some(LexiconRole::AssertionOpinion),
                "negation" => Some(LexiconRole::Negation),
                "conjunction" => Some(LexiconRole::Conjunction),
                "personal_pronoun" => Some(LexiconRole::Pronoun),
                "adverb" | "adjective" | "verb" | "proper_noun" | "comparative"
                | "superlative" | "participle" | "be_form" => Some(LexiconRole::PosHint),
                // clause marker tags checked against the marker lexicon
                _ => None,
            }
        };
        for (stance, pool) in &config.vocabulary {
            for w in pool {
                assert!(
                    !tox.contains(&w.word),
                    "{}: pool word `{}` ({stance}) is in the toxicity lexicon",
                    config.name,
                    w.word
                );
                for tag in &w.tags {
                    let found = match role_of(tag) {
                        Some(role) => set
                            .role(role)
                            .is_some_and(|lex| lex.has_tag(&w.word, tag)),
                        None => set
                            .clause_markers()
                            .is_some_and(|m| m.has_tag(&w.word, tag)),
                    };
                    assert!(
                        found,
                        "{}: `{}` tagged `{tag}` not found in the {} demo lexicons",
                        config.name, w.word, config.lang
                    );
                }
            }
        }
        for w in &config.toxic_vocabulary {
            assert!(
                tox.contains(w),
                "{}: toxic word `{w}` missing from the toxicity lexicon",
                config.name
            );
        }
    }
}
