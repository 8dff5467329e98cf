//! End-to-end CLI checks: exit codes, artifact layout, the
//! synth→timeline oracle loop, and the report document.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_stormscope")
}

fn lexicons() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("lexicons")
        .to_str()
        .unwrap()
        .to_string()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn unknown_subcommand_exits_1_with_usage_on_stderr() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage") || stderr.contains("usage"), "{stderr}");
}

#[test]
fn unknown_flag_exits_1() {
    let out = run(&["synth", "--bogus-flag", "x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("stormscope"));
}

#[test]
fn data_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    // missing corpus file
    let out = run(&[
        "timeline",
        "--corpus",
        "/nonexistent/corpus.jsonl",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // malformed corpus line
    let bad = tmp.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\":\"a\"}\n").unwrap();
    let out = run(&[
        "timeline",
        "--corpus",
        bad.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

/// The end-to-end oracle loop: generate a storm, run the timeline
/// subcommand on the origin corpus, and compare the peaks JSON against the
/// ground-truth peak days.
#[test]
fn synth_then_timeline_recovers_planted_peaks() {
    let tmp = tempfile::tempdir().unwrap();
    let synth_dir = tmp.path().join("storm");
    let out = run(&[
        "synth",
        "--config",
        "musk_like",
        "--out",
        synth_dir.to_str().unwrap(),
        "--fixed-epoch",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let truth: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(synth_dir.join("ground_truth.json")).unwrap(),
    )
    .unwrap();
    let planted: Vec<u64> = truth["platforms"][0]["peak_days"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();

    let tl_dir = tmp.path().join("timeline");
    let out = run(&[
        "timeline",
        "--corpus",
        synth_dir.join("twitter.jsonl").to_str().unwrap(),
        "--lexicons",
        &lexicons(),
        "--out",
        tl_dir.to_str().unwrap(),
        "--fixed-epoch",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let peaks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tl_dir.join("peaks.json")).unwrap())
            .unwrap();
    let detected: Vec<u64> = peaks["peaks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(detected, planted);

    for artifact in ["timeline.csv", "timeline.svg", "keywords.csv", "manifest.json"] {
        assert!(tl_dir.join(artifact).is_file(), "{artifact} missing");
    }
}

/// Evaluating a model on a corpus whose labels are the model's own
/// predictions must score a perfect macro-F1.
#[test]
fn eval_on_perfect_fixture_reports_macro_f1_one() {
    use std::io::BufReader;
    use stormscope::classify::{model_from_text, Task};
    use stormscope::corpus::{parse_corpus, StanceLabel};
    use stormscope::features::extract_features;
    use stormscope::lexicon::LexiconSet;

    let tmp = tempfile::tempdir().unwrap();
    let synth_dir = tmp.path().join("storm");
    assert!(run(&[
        "synth",
        "--config",
        "separable_stance",
        "--out",
        synth_dir.to_str().unwrap(),
    ])
    .status
    .success());
    let corpus_path = synth_dir.join("origin.jsonl");

    let model_dir = tmp.path().join("model");
    assert!(run(&[
        "train",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--task",
        "stance",
        "--lexicons",
        &lexicons(),
        "--out",
        model_dir.to_str().unwrap(),
    ])
    .status
    .success());

    // rewrite the corpus labels to the model's own predictions
    let model = model_from_text(
        &std::fs::read_to_string(model_dir.join("model.txt")).unwrap(),
    )
    .unwrap();
    assert_eq!(model.task, Task::Stance);
    let set = LexiconSet::load_dir(Path::new(&lexicons()), "en").unwrap();
    let file = std::fs::File::open(&corpus_path).unwrap();
    let mut corpus = parse_corpus(BufReader::new(file)).unwrap().corpus;
    use stormscope::CoarseStance;
    for m in corpus.messages.iter_mut() {
        let rates = extract_features(m, &set).per_token_rates();
        let predicted = match model.predict(&rates) {
            0 => CoarseStance::SupportTarget,
            1 => CoarseStance::OpposeTarget,
            _ => CoarseStance::Neutral,
        };
        m.stance = Some(StanceLabel::coarse(predicted));
    }
    let perfect = tmp.path().join("perfect.jsonl");
    std::fs::write(&perfect, corpus.to_jsonl()).unwrap();

    let eval_dir = tmp.path().join("eval");
    let out = run(&[
        "eval",
        "--model",
        model_dir.join("model.txt").to_str().unwrap(),
        "--test",
        perfect.to_str().unwrap(),
        "--lexicons",
        &lexicons(),
        "--out",
        eval_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(eval_dir.join("eval_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["macro_f1"].as_f64().unwrap(), 1.0);
}

#[test]
fn report_on_mini_fixture_lists_three_phases_and_a_peak() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "report",
        "--corpus",
        &fixture("mini_storm.jsonl"),
        "--lexicons",
        &lexicons(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let html = std::fs::read_to_string(tmp.path().join("report.html")).unwrap();
    for phase in ["begin", "middle", "end"] {
        assert!(html.contains(phase), "report lacks phase {phase}");
    }
    let peaks_line = html
        .lines()
        .find(|l| l.contains("peak(s) at bin(s)"))
        .expect("report lists peaks");
    let n: usize = peaks_line
        .trim_start_matches("<p>")
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(n >= 1, "report must list at least one peak: {peaks_line}");
    assert!(html.contains("🤡"), "emoji table missing");
    assert!(html.contains("#respect"), "hashtag table missing");
}

#[test]
fn ingest_telegram_export_round_trips_through_parse() {
    let tmp = tempfile::tempdir().unwrap();
    let export = tmp.path().join("export.json");
    std::fs::write(
        &export,
        r#"{"name":"chan","id":9,"messages":[
            {"id":1,"type":"message","date":"2022-10-03T10:00:00","from_id":"u1","text":"Der Anfang."},
            {"id":2,"type":"message","date":"2022-10-03T11:00:00","from_id":"u2","reply_to_message_id":1,"text":"Die Antwort."},
            {"id":3,"type":"service","date":"2022-10-03T11:05:00","text":""}
        ]}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("ingested");
    let out = run(&[
        "ingest",
        "--input",
        export.to_str().unwrap(),
        "--kind",
        "telegram_export_json",
        "--storm",
        "demo",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = std::fs::File::open(out_dir.join("corpus.jsonl")).unwrap();
    let corpus = stormscope::corpus::parse_corpus(std::io::BufReader::new(file))
        .unwrap()
        .corpus;
    assert_eq!(corpus.len(), 2);
    assert_eq!(corpus.meta.get("storm").map(String::as_str), Some("demo"));
    // unknown export kind is a data error
    let out = run(&[
        "ingest",
        "--input",
        export.to_str().unwrap(),
        "--kind",
        "carrier_pigeon",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lexicon_dir_env_var_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .env("STORMSCOPE_LEXICON_DIR", lexicons())
        .args([
            "features",
            "--corpus",
            &fixture("mini_storm.jsonl"),
            "--out",
            tmp.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("features.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("id,n_adverbs,"));
    assert_eq!(csv.lines().count(), 13); // header + 12 messages
    // no env, no flag: still succeeds but warns that features are zeroed
    let out = Command::new(bin())
        .env_remove("STORMSCOPE_LEXICON_DIR")
        .args([
            "features",
            "--corpus",
            &fixture("mini_storm.jsonl"),
            "--out",
            tmp.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn stats_on_mini_fixture_writes_all_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "stats",
        "--corpus",
        &fixture("mini_storm.jsonl"),
        "--lexicons",
        &lexicons(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for artifact in [
        "participation.csv",
        "toxicity.csv",
        "toxicity.svg",
        "emoji.csv",
        "hashtags.csv",
        "manifest.json",
    ] {
        assert!(tmp.path().join(artifact).is_file(), "{artifact} missing");
    }
    let emoji = std::fs::read_to_string(tmp.path().join("emoji.csv")).unwrap();
    assert!(emoji.contains("🤡,2"));
    let hashtags = std::fs::read_to_string(tmp.path().join("hashtags.csv")).unwrap();
    assert!(hashtags.contains("#respect,2"));
}

#[test]
fn groups_on_mini_fixture_writes_distribution_and_contrast() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "groups",
        "--corpus",
        &fixture("mini_storm.jsonl"),
        "--lexicons",
        &lexicons(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for artifact in ["distribution.csv", "distribution.svg", "subgroups.csv", "contrast.csv"] {
        assert!(tmp.path().join(artifact).is_file(), "{artifact} missing");
    }
    let subgroups = std::fs::read_to_string(tmp.path().join("subgroups.csv")).unwrap();
    assert!(subgroups.contains("propaganda,1"));
    let contrast = std::fs::read_to_string(tmp.path().join("contrast.csv")).unwrap();
    assert!(contrast.starts_with("feature,rate_a,rate_b,diff,d"));
}

/// Ordinal binning flows through the CLI for clock-less corpora.
#[test]
fn ordinal_bin_width_flag_works() {
    use stormscope::corpus::Message;
    let tmp = tempfile::tempdir().unwrap();
    let mut corpus = stormscope::Corpus::default();
    for i in 0..10u64 {
        let mut m = Message::new(format!("r{i}"), "some forum text here");
        m.platform = stormscope::Platform::RedditLike;
        m.relative_order = i;
        corpus.messages.push(m);
    }
    let path = tmp.path().join("reddit.jsonl");
    std::fs::write(&path, corpus.to_jsonl()).unwrap();

    // duration mode must refuse the clock-less corpus
    let out = run(&[
        "timeline",
        "--corpus",
        path.to_str().unwrap(),
        "--out",
        tmp.path().join("a").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "timeline",
        "--corpus",
        path.to_str().unwrap(),
        "--bin-width",
        "ordinal:5",
        "--top-keywords",
        "0",
        "--out",
        tmp.path().join("b").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("b/timeline.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 3); // header + 2 ordinal bins
    assert!(rows[1].starts_with("0,5"));
    assert!(rows[2].starts_with("5,5"));
}

