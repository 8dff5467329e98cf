//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its elapsed time. Expected values are either hand-derived fixtures
//! frozen before the implementation, planted by the synthetic generator,
//! or closed-form.

#![allow(clippy::needless_range_loop)]

use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::time::Instant;

use stormscope::classify::{
    evaluate, make_dataset, shuffle_labels, split, train, Task, TrainConfig,
    TrainingProblem,
};
use stormscope::corpus::parse_corpus;
use stormscope::features::{extract_features, FEATURE_NAMES, N_COUNT_FEATURES};
use stormscope::lexicon::LexiconSet;
use stormscope::stats::{participation_stats, toxicity_share};
use stormscope::synth::{self, generate, shape_report, EventKind};
use stormscope::timeline::{bin_counts, detect_peaks, segment_phases, BinWidth};
use stormscope::Corpus;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn lexicon_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("lexicons")
}

fn load_fixture_corpus(name: &str) -> Corpus {
    let file = std::fs::File::open(fixtures_dir().join(name)).unwrap();
    parse_corpus(std::io::BufReader::new(file)).unwrap().corpus
}

fn demo_set(lang: &str) -> LexiconSet {
    LexiconSet::load_dir(&lexicon_dir(), lang).unwrap()
}

struct ExpectedRow {
    id: String,
    counts: Vec<u32>,
    n_tokens: u32,
    n_sentences: u32,
    avg_num: f64,
    avg_den: f64,
}

fn load_expected() -> Vec<ExpectedRow> {
    let file = std::fs::File::open(fixtures_dir().join("feature_fixture_expected.tsv")).unwrap();
    let mut rows = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line.unwrap();
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 5, "bad expected row: {line}");
        let counts: Vec<u32> = cols[1]
            .split_whitespace()
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(counts.len(), N_COUNT_FEATURES);
        let (num, den) = cols[4].split_once('/').unwrap();
        rows.push(ExpectedRow {
            id: cols[0].to_string(),
            counts,
            n_tokens: cols[2].parse().unwrap(),
            n_sentences: cols[3].parse().unwrap(),
            avg_num: num.parse().unwrap(),
            avg_den: den.parse().unwrap(),
        });
    }
    assert_eq!(rows.len(), 10);
    rows
}

/// Criterion 1: the 30-sentence hand-annotated fixture matches every
/// feature exactly, in under a second.
#[test]
fn c1_feature_extractor_matches_hand_annotated_fixture() {
    let start = Instant::now();
    let corpus = load_fixture_corpus("feature_fixture.jsonl");
    let expected = load_expected();
    let en = demo_set("en");
    let de = demo_set("de");

    let total_sentences: u32 = expected.iter().map(|r| r.n_sentences).sum();
    assert_eq!(total_sentences, 30, "fixture must hold 30 sentences");

    for row in &expected {
        let message = corpus
            .messages
            .iter()
            .find(|m| m.id == row.id)
            .unwrap_or_else(|| panic!("fixture message {} missing", row.id));
        let set = if message.lang == "de" { &de } else { &en };
        let got = extract_features(message, set);
        for f in 0..N_COUNT_FEATURES {
            assert_eq!(
                got.counts[f], row.counts[f],
                "{}: {} expected {} got {}",
                row.id, FEATURE_NAMES[f], row.counts[f], got.counts[f]
            );
        }
        assert_eq!(got.n_tokens, row.n_tokens, "{}: n_tokens", row.id);
        assert_eq!(got.n_sentences, row.n_sentences, "{}: n_sentences", row.id);
        let expected_avg = row.avg_num / row.avg_den;
        assert_eq!(
            got.avg_sentence_length, expected_avg,
            "{}: avg_sentence_length",
            row.id
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "criterion 1 took {elapsed:?}, budget 1 s"
    );
    println!(
        "[PASS] criterion 1: feature extractor exact on hand fixture ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

/// A generator config with controlled waves for peak-recovery checks:
/// quiet baseline, strong well-separated waves, no toxicity or emoji noise.
fn wave_variant(seed: u64, waves: &[(EventKind, f64)]) -> synth::SynthConfig {
    let mut config = synth::musk_like();
    config.name = format!("wave_variant_{seed}");
    config.seed = seed;
    config.wave_amplitudes = waves.iter().copied().collect();
    config.toxicity_rate_by_platform.clear();
    config.emoji_budget_by_platform.clear();
    config
}

/// Criterion 2: on 10 seeded configs with 1–3 planted waves, detected
/// peaks equal the planted peak bins exactly and both segmentations match
/// the ground truth bin-for-bin. Total runtime < 5 s.
#[test]
fn c2_peak_and_phase_recovery_on_planted_configs() {
    let start = Instant::now();
    use EventKind::*;
    let configs: Vec<synth::SynthConfig> = vec![
        wave_variant(101, &[(Trigger, 150.0)]),
        wave_variant(102, &[(Trigger, 220.0)]),
        wave_variant(103, &[(Trigger, 180.0), (Appeasement, 120.0)]),
        wave_variant(104, &[(Trigger, 200.0), (Spillover, 100.0)]),
        wave_variant(105, &[(Trigger, 160.0), (Consequence, 110.0)]),
        wave_variant(106, &[(Trigger, 200.0), (Spillover, 120.0), (Appeasement, 150.0)]),
        wave_variant(107, &[(Trigger, 250.0), (Spillover, 90.0), (Consequence, 100.0)]),
        wave_variant(108, &[(Trigger, 180.0), (Appeasement, 140.0), (Consequence, 90.0)]),
        wave_variant(109, &[(Trigger, 300.0), (Spillover, 110.0), (Appeasement, 160.0)]),
        wave_variant(110, &[(Trigger, 240.0), (Spillover, 130.0), (Consequence, 120.0)]),
    ];
    assert_eq!(configs.len(), 10);
    for config in &configs {
        let out = generate(config).unwrap();
        let truth = &out.truth;
        let planted = &truth.platforms[0].peak_days;
        assert!((1..=3).contains(&planted.len()));

        let series = bin_counts(&out.corpora[0], BinWidth::one_day()).unwrap();
        let detected = detect_peaks(&series, 0.25, 1).unwrap();
        assert_eq!(
            &detected, planted,
            "{}: detected {:?} vs planted {:?}",
            config.name, detected, planted
        );

        let seg = segment_phases(&series, &detected).unwrap();
        // phase ground truth comes from the planted events, not from
        // re-detected peaks
        for (bin, phase) in seg.phase3.iter().enumerate() {
            assert_eq!(
                phase, &truth.phase_of_day[bin],
                "{}: phase mismatch at bin {bin}",
                config.name
            );
        }
        // independent span expectation from the planted peak days
        let p = planted;
        let b1 = p[0] + 1;
        let b2 = p.get(1).map(|x| x + 1).unwrap_or(b1);
        let b3 = p.get(2).map(|x| x + 1).unwrap_or(b2);
        for (bin, span) in seg.span4.iter().enumerate() {
            let expected = if bin < b1 {
                "s1"
            } else if bin < b2 {
                "s2"
            } else if bin < b3 {
                "s3"
            } else {
                "s4"
            };
            assert_eq!(span.as_str(), expected, "{}: span at bin {bin}", config.name);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 2 took {elapsed:?}");
    println!(
        "[PASS] criterion 2: exact peak/phase recovery on 10 seeded configs ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

/// Criterion 3: planted statistics recovered at the reference-anchored
/// values. Runtime < 10 s.
#[test]
fn c3_planted_statistic_recovery() {
    let start = Instant::now();

    // participation ~0.088 over ~1000 authors
    let mut config = synth::musk_like();
    config.name = "participation_anchor".to_string();
    config.platforms[0].volume = 0.8;
    let out = generate(&config).unwrap();
    let stats = participation_stats(&out.corpora[0]).unwrap();
    assert!(
        (900..=1150).contains(&stats.n_authors),
        "author pool sized at {} (want ≈1000)",
        stats.n_authors
    );
    assert!(
        (stats.frac_gt1 - 0.088).abs() <= 0.005,
        "frac_gt1 {} vs 0.088",
        stats.frac_gt1
    );

    // telegram-style participation 0.28 / 0.13
    let mut config = synth::musk_like();
    config.name = "participation_telegram_anchor".to_string();
    config.repeat_frac_gt1 = 0.28;
    config.repeat_frac_gt2 = 0.13;
    let out = generate(&config).unwrap();
    let stats = participation_stats(&out.corpora[1]).unwrap();
    assert!(
        (stats.frac_gt1 - 0.28).abs() <= 0.01,
        "frac_gt1 {} vs 0.28",
        stats.frac_gt1
    );
    assert!(
        (stats.frac_gt2 - 0.13).abs() <= 0.01,
        "frac_gt2 {} vs 0.13",
        stats.frac_gt2
    );

    // toxicity 0.104 / 0.22
    let out = generate(&synth::esports_like()).unwrap();
    let set = demo_set("en");
    let tox = set
        .role(stormscope::lexicon::LexiconRole::Toxicity)
        .unwrap();
    let share_twitter = toxicity_share(&out.corpora[0], tox);
    let share_reddit = toxicity_share(&out.corpora[1], tox);
    assert!(
        (share_twitter - 0.104).abs() <= 0.01,
        "twitter toxicity {share_twitter} vs 0.104"
    );
    assert!(
        (share_reddit - 0.22).abs() <= 0.01,
        "reddit toxicity {share_reddit} vs 0.22"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 3 took {elapsed:?}");
    println!(
        "[PASS] criterion 3: participation 0.088/0.28/0.13 and toxicity 0.104/0.22 recovered ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

fn classifier_bar(task: Task, config: &synth::SynthConfig, bar: f64) -> (f64, f64) {
    assert!(
        config.feature_skews.iter().all(|s| s.multiplier >= 1.5),
        "separable config must skew by at least 1.5"
    );
    let out = generate(config).unwrap();
    let corpus = &out.corpora[0];
    let set = demo_set(&config.lang);
    let series = bin_counts(corpus, BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    // segmentation from planted peaks must agree with the phase truth
    for (bin, phase) in seg.phase3.iter().enumerate() {
        assert_eq!(phase, &out.truth.phase_of_day[bin]);
    }
    let dataset = make_dataset(corpus, task, &series, &seg, &set).unwrap();
    let n = dataset.instances.len();
    assert!(
        (1700..=2400).contains(&n),
        "{}: dataset sized at {n} (want ≈2000)",
        config.name
    );
    for (class, count) in dataset.class_counts().iter().enumerate() {
        let frac = *count as f64 / n as f64;
        assert!(
            (0.2..=0.5).contains(&frac),
            "{}: class {class} holds {frac:.2} of instances; not balanced",
            config.name
        );
    }
    let (train_set, test_set) = split(&dataset, 42, 0.8).unwrap();
    let model = train(&train_set, TrainConfig::default()).unwrap();
    let eval = evaluate(&model, &test_set).unwrap();
    assert!(
        eval.macro_f1 >= bar,
        "{}: macro-F1 {:.3} below the {bar} bar",
        config.name,
        eval.macro_f1
    );

    // permutation-null baseline on the same data
    let null_data = shuffle_labels(&dataset, 1234);
    let (null_train, null_test) = split(&null_data, 42, 0.8).unwrap();
    let null_model = train(&null_train, TrainConfig::default()).unwrap();
    let null_eval = evaluate(&null_model, &null_test).unwrap();
    assert!(
        null_eval.macro_f1 <= 0.42,
        "{}: permutation-null macro-F1 {:.3} above 0.42",
        config.name,
        null_eval.macro_f1
    );
    (eval.macro_f1, null_eval.macro_f1)
}

/// Criterion 4: on separable synthetic data (skews ≥ 1.5, balanced
/// classes, ~2000 instances, seed-pinned 80/20 split) the phase task
/// reaches macro-F1 ≥ 0.67 and the stance task ≥ 0.62, while the
/// permutation-null stays ≤ 0.42. Runtime < 60 s.
#[test]
fn c4_classifier_bars_on_separable_synthetic_data() {
    let start = Instant::now();
    let (phase_f1, phase_null) =
        classifier_bar(Task::Phase, &synth::separable_phase(), 0.67);
    let (stance_f1, stance_null) =
        classifier_bar(Task::Stance, &synth::separable_stance(), 0.62);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 4 took {elapsed:?}");
    println!(
        "[PASS] criterion 4: phase F1 {phase_f1:.3} ≥ 0.67 (null {phase_null:.3}), \
         stance F1 {stance_f1:.3} ≥ 0.62 (null {stance_null:.3}) ({:.1} s)",
        elapsed.as_secs_f64()
    );
}

/// Criterion 5: the constant-supporter hypothesis holds on the default
/// storm: supporter daily-count CV < 0.2 and opponent CV > 0.5 in at
/// least 18 of 20 seeds.
#[test]
fn c5_supporters_flat_opponents_wavy_over_20_seeds() {
    let start = Instant::now();
    let mut passing = 0;
    for seed in 0..20 {
        let mut config = synth::musk_like();
        config.seed = 3000 + seed;
        let out = generate(&config).unwrap();
        let report = shape_report(&out.corpora[0], &out.truth).unwrap();
        if report.supporter_cv < 0.2 && report.opponent_cv > 0.5 {
            passing += 1;
        }
    }
    assert!(passing >= 18, "only {passing}/20 seeds satisfied the hypothesis");
    println!(
        "[PASS] criterion 5: supporter CV < 0.2 and opponent CV > 0.5 in {passing}/20 seeds ({:.1} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 7: the training objective gradient matches central finite
/// differences within 1e-4 relative error at 5 random weight points on a
/// 50-instance set.
#[test]
fn c7_gradient_matches_finite_differences() {
    let start = Instant::now();
    use rand::{Rng, SeedableRng};
    let out = generate(&synth::separable_stance()).unwrap();
    let set = demo_set("en");
    let series = bin_counts(&out.corpora[0], BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    let mut dataset =
        make_dataset(&out.corpora[0], Task::Stance, &series, &seg, &set).unwrap();
    dataset.instances.truncate(50);
    let problem = TrainingProblem::new(&dataset, 1.0).unwrap();

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20221003);
    for point in 0..5 {
        let params: Vec<f64> = (0..problem.n_params())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let g = problem.gradient(&params);
        let eps = 1e-6;
        let mut fd = vec![0.0; params.len()];
        for d in 0..params.len() {
            let mut plus = params.clone();
            let mut minus = params.clone();
            plus[d] += eps;
            minus[d] -= eps;
            fd[d] = (problem.value(&plus) - problem.value(&minus)) / (2.0 * eps);
        }
        let diff_norm: f64 = g
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let g_norm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let relative = diff_norm / g_norm.max(1e-12);
        assert!(
            relative < 1e-4,
            "point {point}: relative gradient error {relative:.2e}"
        );
    }
    println!(
        "[PASS] criterion 7: gradient matches finite differences at 5 points ({:.1} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 8: multiplying one raw feature column by 1000 leaves every
/// predicted label unchanged on a 500-instance set (standardization
/// absorbs the scale).
#[test]
fn c8_feature_scaling_leaves_predictions_unchanged() {
    let start = Instant::now();
    let out = generate(&synth::separable_stance()).unwrap();
    let set = demo_set("en");
    let series = bin_counts(&out.corpora[0], BinWidth::one_day()).unwrap();
    let seg = segment_phases(&series, &out.truth.platforms[0].peak_days).unwrap();
    let mut dataset =
        make_dataset(&out.corpora[0], Task::Stance, &series, &seg, &set).unwrap();
    dataset.instances.truncate(500);
    assert_eq!(dataset.instances.len(), 500);

    let scaled_feature = 4; // n_conjunctions rate
    let mut scaled = dataset.clone();
    for inst in scaled.instances.iter_mut() {
        inst.features[scaled_feature] *= 1000.0;
    }

    let model_a = train(&dataset, TrainConfig::default()).unwrap();
    let model_b = train(&scaled, TrainConfig::default()).unwrap();
    for (a, b) in dataset.instances.iter().zip(&scaled.instances) {
        assert_eq!(
            model_a.predict(&a.features),
            model_b.predict(&b.features),
            "prediction changed under feature scaling"
        );
    }
    println!(
        "[PASS] criterion 8: predictions invariant under 1000x feature scaling ({:.1} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 6: every subcommand, rerun with identical manifest inputs in
/// fixed-epoch mode, reproduces byte-identical artifacts. Verified by
/// hashing every artifact including the manifest itself.
#[test]
fn c6_cli_reruns_are_byte_identical() {
    use std::collections::BTreeMap;
    use std::process::Command;

    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_stormscope");
    let root = tempfile::tempdir().unwrap();
    let lexicons = lexicon_dir();

    // shared inputs generated once
    let synth_dir = root.path().join("seed_synth");
    let status = Command::new(bin)
        .args([
            "synth",
            "--config",
            "musk_like",
            "--out",
            synth_dir.to_str().unwrap(),
            "--fixed-epoch",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let corpus = synth_dir.join("twitter.jsonl");
    let corpus_str = corpus.to_str().unwrap().to_string();

    // a trained model for eval
    let model_dir = root.path().join("seed_model");
    let status = Command::new(bin)
        .args([
            "train",
            "--corpus",
            &corpus_str,
            "--task",
            "stance",
            "--lexicons",
            lexicons.to_str().unwrap(),
            "--out",
            model_dir.to_str().unwrap(),
            "--fixed-epoch",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let model = model_dir.join("model.txt").to_str().unwrap().to_string();

    // a raw export for ingest
    let export = root.path().join("export.json");
    std::fs::write(
        &export,
        r#"{"name":"blog","id":7,"messages":[
            {"id":1,"type":"message","date":"2022-10-03T10:00:00","from_id":"u1","text":"Der erste Post."},
            {"id":2,"type":"message","date":"2022-10-03T11:00:00","from_id":"u2","reply_to_message_id":1,"text":"Eine Antwort."}
        ]}"#,
    )
    .unwrap();

    let lex = lexicons.to_str().unwrap().to_string();
    let export_str = export.to_str().unwrap().to_string();
    let runs: Vec<(&str, Vec<String>)> = vec![
        (
            "ingest",
            vec![
                "ingest".into(),
                "--input".into(),
                export_str,
                "--kind".into(),
                "telegram_export_json".into(),
            ],
        ),
        (
            "timeline",
            vec![
                "timeline".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "features",
            vec![
                "features".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "stats",
            vec![
                "stats".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "groups",
            vec![
                "groups".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "train",
            vec![
                "train".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--task".into(),
                "stance".into(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "eval",
            vec![
                "eval".into(),
                "--model".into(),
                model,
                "--test".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
        (
            "synth",
            vec!["synth".into(), "--config".into(), "esports_like".into()],
        ),
        (
            "report",
            vec![
                "report".into(),
                "--corpus".into(),
                corpus_str.clone(),
                "--lexicons".into(),
                lex.clone(),
            ],
        ),
    ];

    let hash_dir = |dir: &Path| -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for entry in std::fs::read_dir(dir).unwrap() {
            let entry = entry.unwrap();
            let bytes = std::fs::read(entry.path()).unwrap();
            out.insert(
                entry.file_name().to_string_lossy().to_string(),
                stormscope::manifest::sha256_hex(&bytes),
            );
        }
        out
    };

    for (name, args) in &runs {
        let mut hashes = Vec::new();
        for rep in 0..2 {
            let out_dir = root.path().join(format!("{name}_{rep}"));
            let mut full = args.clone();
            full.push("--out".into());
            full.push(out_dir.to_str().unwrap().into());
            full.push("--fixed-epoch".into());
            let output = Command::new(bin).args(&full).output().unwrap();
            assert!(
                output.status.success(),
                "{name} failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            hashes.push(hash_dir(&out_dir));
        }
        assert_eq!(
            hashes[0], hashes[1],
            "{name}: rerun produced different artifacts"
        );
        assert!(!hashes[0].is_empty());
    }
    println!(
        "[PASS] criterion 6: {} subcommands rerun byte-identically ({:.1} s)",
        runs.len(),
        start.elapsed().as_secs_f64()
    );
}
