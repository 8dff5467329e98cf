//! Command-line front door. Every subcommand reads its inputs, writes its
//! artifacts into `--out`, and drops a `manifest.json` recording input
//! hashes, parameters and artifact hashes. Exit codes: 0 success, 1 usage
//! error, 2 data error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::classify::{
    class_count_map, evaluate, make_dataset, model_from_text, model_to_text, split, train,
    Task, TrainConfig,
};
use crate::corpus::{adapt_export, parse_corpus, Corpus, ExportKind};
use crate::features::{extract_features, features_csv};
use crate::groups::{
    contrast_csv, contrast_groups, distribution_csv, group_distribution, subgroup_breakdown,
};
use crate::lexicon::LexiconSet;
use crate::manifest::Manifest;
use crate::stats::{
    count_table_csv, emoji_table, hashtag_table, participation_stats, toxicity_by_bin,
    toxicity_share,
};
use crate::synth::{self, generate, shape_report};
use crate::timeline::{
    bin_counts_with_groups, detect_peaks, keyword_timeline, segment_phases, segmentation_report,
    timeline_csv, BinWidth, PhaseSegmentation,
};

pub const ENV_LEXICON_DIR: &str = "STORMSCOPE_LEXICON_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "stormscope",
    version,
    about = "Corpus analytics for cross-platform outrage storms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutOpts {
    /// Output directory for artifacts and the run manifest.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Pin manifest timestamps to the epoch so reruns are byte-identical.
    #[arg(long)]
    fixed_epoch: bool,
}

#[derive(Debug, Args)]
struct LexiconOpts {
    /// Lexicon directory (layout: <dir>/<lang>/<role>.tsv). Defaults to
    /// $STORMSCOPE_LEXICON_DIR.
    #[arg(long)]
    lexicons: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TimelineOpts {
    /// Bin width: e.g. 1d, 12h, 30m, or ordinal:<n> for clock-less corpora.
    #[arg(long, default_value = "1d")]
    bin_width: String,
    /// Minimum peak prominence as a fraction of the global maximum.
    #[arg(long, default_value_t = 0.25)]
    peak_fraction: f64,
    /// Centered moving-average window (odd; 1 = no smoothing).
    #[arg(long, default_value_t = 1)]
    smoothing: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a raw platform export into the canonical corpus JSONL.
    Ingest {
        /// Raw export document.
        #[arg(long)]
        input: PathBuf,
        /// Export dialect: twitter_v2_json, telegram_export_json,
        /// reddit_dump_json.
        #[arg(long)]
        kind: String,
        /// Storm name recorded in the corpus metadata.
        #[arg(long, default_value = "storm")]
        storm: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Bin activity, detect peaks, segment phases; CSV + JSON + SVG.
    Timeline {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        timeline: TimelineOpts,
        /// Also report the top-k keyword trends.
        #[arg(long, default_value_t = 10)]
        top_keywords: usize,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Extract the per-message linguistic feature vectors as CSV.
    Features {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Participation, toxicity, emoji and hashtag tables.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        timeline: TimelineOpts,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Stance-group distribution, subgroups, and feature contrasts.
    Groups {
        #[arg(long)]
        corpus: PathBuf,
        /// Stance pair for the feature contrast, e.g.
        /// oppose_target,support_target.
        #[arg(long, default_value = "oppose_target,support_target")]
        contrast: String,
        #[command(flatten)]
        timeline: TimelineOpts,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Train a phase or stance classifier on a labeled corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        /// Task: phase or stance.
        #[arg(long)]
        task: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, default_value_t = 1.0)]
        l2: f64,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[command(flatten)]
        timeline: TimelineOpts,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Evaluate a trained model on a labeled test corpus.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[command(flatten)]
        timeline: TimelineOpts,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Generate a synthetic labeled storm from a config file.
    Synth {
        /// Generator config (key = value format); or a preset name:
        /// musk_like, musk_like_trend, esports_like, separable_phase,
        /// separable_stance.
        #[arg(long)]
        config: String,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// One self-contained HTML summary for a storm corpus.
    Report {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        timeline: TimelineOpts,
        #[command(flatten)]
        lexicons: LexiconOpts,
        #[command(flatten)]
        out: OutOpts,
    },
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

struct Emitter {
    dir: PathBuf,
    manifest: Manifest,
}

impl Emitter {
    fn new(command: &str, out: &OutOpts) -> Result<Self> {
        fs::create_dir_all(&out.out)
            .with_context(|| format!("creating {}", out.out.display()))?;
        Ok(Emitter {
            dir: out.out.clone(),
            manifest: Manifest::new(command, out.fixed_epoch),
        })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.output(name, content.as_bytes());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let path = self.dir.join("manifest.json");
        fs::write(&path, self.manifest.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

fn load_corpus(path: &Path) -> Result<Corpus> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let outcome = parse_corpus(std::io::BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    if outcome.warnings.duplicate_ids > 0 {
        eprintln!(
            "warning: {} duplicate message id(s) collapsed to first occurrence",
            outcome.warnings.duplicate_ids
        );
    }
    Ok(outcome.corpus)
}

/// Majority primary language subtag of the corpus.
fn corpus_language(corpus: &Corpus) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for m in &corpus.messages {
        let primary = m.lang.split(['-', '_']).next().unwrap_or("en");
        *counts.entry(primary).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by_key(|(lang, n)| (*n, std::cmp::Reverse(lang.to_string())))
        .map(|(lang, _)| lang.to_string())
        .unwrap_or_else(|| "en".to_string())
}

fn load_lexicons(opts: &LexiconOpts, corpus: &Corpus) -> Result<LexiconSet> {
    let lang = corpus_language(corpus);
    let dir = opts
        .lexicons
        .clone()
        .or_else(|| std::env::var_os(ENV_LEXICON_DIR).map(PathBuf::from));
    match dir {
        Some(dir) => {
            let set = LexiconSet::load_dir(&dir, &lang)
                .with_context(|| format!("loading lexicons from {}", dir.display()))?;
            let missing = set.missing_roles();
            if !missing.is_empty() {
                let names: Vec<String> = missing.iter().map(|r| r.to_string()).collect();
                eprintln!(
                    "warning: lexicon missing for role(s) {}; their features report 0",
                    names.join(", ")
                );
            }
            Ok(set)
        }
        None => {
            eprintln!(
                "warning: no lexicon directory (use --lexicons or {ENV_LEXICON_DIR}); \
                 all lexicon features report 0"
            );
            Ok(LexiconSet::new(lang))
        }
    }
}

fn parse_bin_width(timeline: &TimelineOpts) -> Result<BinWidth> {
    Ok(timeline.bin_width.parse::<BinWidth>()?)
}

fn build_series(
    corpus: &Corpus,
    timeline: &TimelineOpts,
) -> Result<crate::timeline::TimelineSeries> {
    let width = parse_bin_width(timeline)?;
    Ok(bin_counts_with_groups(corpus, width)?)
}

fn note_missing_roles(emitter: &mut Emitter, set: &LexiconSet) {
    let missing = set.missing_roles();
    if !missing.is_empty() {
        let names: Vec<String> = missing.iter().map(|r| r.to_string()).collect();
        emitter.manifest.param("lexicons_missing", names.join(","));
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            input,
            kind,
            storm,
            out,
        } => {
            let mut emitter = Emitter::new("ingest", &out)?;
            emitter.manifest.input_file(&input)?;
            emitter
                .manifest
                .param("kind", &kind)
                .param("storm", &storm);
            let raw = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let kind: ExportKind = kind.parse()?;
            let messages = adapt_export(&raw, kind)?;
            let mut corpus = Corpus {
                messages,
                meta: [
                    ("storm".to_string(), storm),
                    ("source".to_string(), input.display().to_string()),
                ]
                .into(),
            };
            corpus.normalize();
            emitter.write("corpus.jsonl", &corpus.to_jsonl())?;
            emitter.finish()
        }

        Command::Timeline {
            corpus,
            timeline,
            top_keywords,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("timeline", &out)?;
            emitter.manifest.input_file(&corpus)?;
            emitter
                .manifest
                .param("bin_width", &timeline.bin_width)
                .param("peak_fraction", timeline.peak_fraction)
                .param("smoothing", timeline.smoothing);
            let corpus = load_corpus(&corpus)?;
            let series = build_series(&corpus, &timeline)?;
            emitter.write("timeline.csv", &timeline_csv(&series))?;

            let peaks = detect_peaks(&series, timeline.peak_fraction, timeline.smoothing)?;
            let (report_json, svg) = match segment_phases(&series, &peaks) {
                Ok(seg) => (
                    serde_json::to_string_pretty(&segmentation_report(&series, &seg))?,
                    crate::chart::timeline_svg(&series, &seg.peaks, "message volume"),
                ),
                Err(crate::timeline::TimelineError::NoPeaks) => (
                    serde_json::to_string_pretty(&serde_json::json!({
                        "n_bins": series.n_bins(),
                        "peaks": [],
                        "note": "no peaks above the prominence threshold",
                    }))?,
                    crate::chart::timeline_svg(&series, &[], "message volume"),
                ),
                Err(e) => return Err(e.into()),
            };
            emitter.write("peaks.json", &report_json)?;
            emitter.write("timeline.svg", &svg)?;

            if top_keywords > 0 {
                let set = load_lexicons(&lexicons, &corpus)?;
                let kw = keyword_timeline(&corpus, &series, top_keywords, set.stopwords());
                let mut csv = String::from("keyword,total");
                for i in 0..series.n_bins() {
                    csv.push(',');
                    csv.push_str(&series.bin_label(i));
                }
                csv.push('\n');
                for (word, bins) in &kw {
                    csv.push_str(&format!("{word},{}", bins.iter().sum::<u64>()));
                    for b in bins {
                        csv.push_str(&format!(",{b}"));
                    }
                    csv.push('\n');
                }
                emitter.write("keywords.csv", &csv)?;
            }
            emitter.finish()
        }

        Command::Features {
            corpus,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("features", &out)?;
            emitter.manifest.input_file(&corpus)?;
            let corpus = load_corpus(&corpus)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            note_missing_roles(&mut emitter, &set);
            let rows: Vec<(String, crate::features::FeatureVector)> = corpus
                .messages
                .iter()
                .map(|m| (m.id.clone(), extract_features(m, &set)))
                .collect();
            emitter.write("features.csv", &features_csv(&rows))?;
            emitter.finish()
        }

        Command::Stats {
            corpus,
            timeline,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("stats", &out)?;
            emitter.manifest.input_file(&corpus)?;
            emitter.manifest.param("bin_width", &timeline.bin_width);
            let corpus = load_corpus(&corpus)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            note_missing_roles(&mut emitter, &set);

            match participation_stats(&corpus) {
                Ok(p) => {
                    let csv = format!(
                        "n_authors,frac_gt1,frac_gt2,n_unauthored\n{},{},{},{}\n",
                        p.n_authors, p.frac_gt1, p.frac_gt2, p.n_unauthored
                    );
                    emitter.write("participation.csv", &csv)?;
                }
                Err(e) => {
                    eprintln!("warning: participation skipped: {e}");
                    emitter.manifest.param("participation_skipped", e.to_string());
                }
            }

            if let Some(tox) = set.role(crate::lexicon::LexiconRole::Toxicity) {
                let share = toxicity_share(&corpus, tox);
                let series = build_series(&corpus, &timeline)?;
                let bins = toxicity_by_bin(&corpus, tox, &series);
                let mut csv = format!("# overall_share,{share}\nbin_start,flagged,total,share\n");
                let mut chart_bins = Vec::new();
                for (i, (flagged, total)) in bins.iter().enumerate() {
                    let rate = if *total > 0 {
                        *flagged as f64 / *total as f64
                    } else {
                        0.0
                    };
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        series.bin_label(i),
                        flagged,
                        total,
                        rate
                    ));
                    chart_bins.push((series.bin_label(i), rate));
                }
                emitter.write("toxicity.csv", &csv)?;
                emitter.write(
                    "toxicity.svg",
                    &crate::chart::rate_bars_svg(&chart_bins, "toxic message share per bin"),
                )?;
            } else {
                eprintln!("warning: toxicity lexicon missing; toxicity.csv skipped");
                emitter.manifest.param("toxicity_skipped", "lexicon missing");
            }

            emitter.write("emoji.csv", &count_table_csv("emoji", &emoji_table(&corpus)))?;
            emitter.write(
                "hashtags.csv",
                &count_table_csv("hashtag", &hashtag_table(&corpus)),
            )?;
            emitter.finish()
        }

        Command::Groups {
            corpus,
            contrast,
            timeline,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("groups", &out)?;
            emitter.manifest.input_file(&corpus)?;
            emitter
                .manifest
                .param("bin_width", &timeline.bin_width)
                .param("contrast", &contrast);
            let corpus = load_corpus(&corpus)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            note_missing_roles(&mut emitter, &set);
            let series = build_series(&corpus, &timeline)?;

            let dist = group_distribution(&corpus, &series)?;
            emitter.write("distribution.csv", &distribution_csv(&series, &dist))?;
            emitter.write(
                "distribution.svg",
                &crate::chart::stacked_area_svg(&series, &dist, "stance groups over time"),
            )?;
            emitter
                .manifest
                .param("unlabeled_messages", dist.n_unlabeled);

            let breakdown = subgroup_breakdown(&corpus, &series);
            let mut csv = String::from("subgroup,total\n");
            for (sub, n) in &breakdown.totals {
                csv.push_str(&format!("{sub},{n}\n"));
            }
            emitter.write("subgroups.csv", &csv)?;

            let (a, b) = contrast
                .split_once(',')
                .ok_or_else(|| anyhow!("--contrast expects two stances, e.g. oppose_target,support_target"))?;
            let a = a.trim().parse().map_err(|e: String| anyhow!(e))?;
            let b = b.trim().parse().map_err(|e: String| anyhow!(e))?;
            match contrast_groups(&corpus, &set, a, b) {
                Ok(rows) => emitter.write("contrast.csv", &contrast_csv(&rows))?,
                Err(e) => {
                    eprintln!("warning: contrast skipped: {e}");
                    emitter.manifest.param("contrast_skipped", e.to_string());
                }
            }
            emitter.finish()
        }

        Command::Train {
            corpus,
            task,
            seed,
            train_fraction,
            l2,
            max_iters,
            tolerance,
            timeline,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("train", &out)?;
            emitter.manifest.input_file(&corpus)?;
            emitter
                .manifest
                .param("task", &task)
                .param("seed", seed)
                .param("train_fraction", train_fraction)
                .param("l2", l2)
                .param("bin_width", &timeline.bin_width);
            let task: Task = task.parse()?;
            let corpus = load_corpus(&corpus)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            let (series, seg) = series_and_segmentation(&corpus, &timeline, task)?;
            let dataset = make_dataset(&corpus, task, &series, &seg, &set)?;
            let (train_set, test_set) = split(&dataset, seed, train_fraction)?;
            let config = TrainConfig {
                l2,
                max_iters,
                tolerance,
            };
            let model = train(&train_set, config)?;
            let eval = evaluate(&model, &test_set)?;
            emitter.write("model.txt", &model_to_text(&model))?;
            let report = serde_json::json!({
                "task": task.as_str(),
                "model": "multinomial logistic regression over 35 standardized feature rates",
                "n_instances": dataset.instances.len(),
                "n_skipped": dataset.n_skipped,
                "class_counts": class_count_map(&dataset),
                "n_train": train_set.instances.len(),
                "n_test": test_set.instances.len(),
                "gradient_norm": model.final_gradient_norm,
                "iterations": model.iterations,
                "test_eval": eval,
            });
            emitter.write("train_report.json", &serde_json::to_string_pretty(&report)?)?;
            emitter.finish()
        }

        Command::Eval {
            model,
            test,
            timeline,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("eval", &out)?;
            emitter.manifest.input_file(&model)?;
            emitter.manifest.input_file(&test)?;
            let model_text = fs::read_to_string(&model)
                .with_context(|| format!("reading {}", model.display()))?;
            let model = model_from_text(&model_text)?;
            let corpus = load_corpus(&test)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            let (series, seg) = series_and_segmentation(&corpus, &timeline, model.task)?;
            let dataset = make_dataset(&corpus, model.task, &series, &seg, &set)?;
            let eval = evaluate(&model, &dataset)?;
            emitter.write("eval_report.json", &serde_json::to_string_pretty(&eval)?)?;
            emitter.finish()
        }

        Command::Synth { config, seed, out } => {
            let mut emitter = Emitter::new("synth", &out)?;
            let mut cfg = match config.as_str() {
                "musk_like" => synth::musk_like(),
                "musk_like_trend" => synth::musk_like_trend(),
                "esports_like" => synth::esports_like(),
                "separable_phase" => synth::separable_phase(),
                "separable_stance" => synth::separable_stance(),
                path => {
                    let p = PathBuf::from(path);
                    emitter.manifest.input_file(&p)?;
                    synth::parse_config_file(&p)?
                }
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            emitter
                .manifest
                .param("config", &config)
                .param("seed", cfg.seed);
            let output = generate(&cfg)?;
            for corpus in &output.corpora {
                let platform = corpus.meta.get("platform").cloned().unwrap_or_default();
                emitter.write(&format!("{platform}.jsonl"), &corpus.to_jsonl())?;
            }
            emitter.write("ground_truth.json", &output.truth.to_json())?;
            emitter.write("config.cfg", &synth::config_to_string(&cfg))?;
            let mut shapes = Vec::new();
            for corpus in &output.corpora {
                shapes.push(shape_report(corpus, &output.truth)?);
            }
            emitter.write("shape_report.json", &serde_json::to_string_pretty(&shapes)?)?;
            emitter.finish()
        }

        Command::Report {
            corpus,
            timeline,
            lexicons,
            out,
        } => {
            let mut emitter = Emitter::new("report", &out)?;
            emitter.manifest.input_file(&corpus)?;
            emitter.manifest.param("bin_width", &timeline.bin_width);
            let corpus = load_corpus(&corpus)?;
            let set = load_lexicons(&lexicons, &corpus)?;
            let html = build_report(&corpus, &set, &timeline)?;
            emitter.write("report.html", &html)?;
            emitter.finish()
        }
    }
}

/// Series plus a phase segmentation when the task needs one. For the
/// stance task the segmentation is an unused placeholder. When the phase
/// task cannot segment (no peaks) but every message carries a gold phase,
/// an all-begin placeholder suffices because gold labels win.
fn series_and_segmentation(
    corpus: &Corpus,
    timeline: &TimelineOpts,
    task: Task,
) -> Result<(crate::timeline::TimelineSeries, PhaseSegmentation)> {
    let series = build_series(corpus, timeline)?;
    let placeholder = PhaseSegmentation {
        peaks: Vec::new(),
        phase3: vec![crate::corpus::Phase::Begin; series.n_bins()],
        span4: vec![crate::timeline::Span::S1; series.n_bins()],
    };
    if task != Task::Phase {
        return Ok((series, placeholder));
    }
    let peaks = detect_peaks(&series, timeline.peak_fraction, timeline.smoothing)?;
    match segment_phases(&series, &peaks) {
        Ok(seg) => Ok((series, seg)),
        Err(crate::timeline::TimelineError::NoPeaks) => {
            if corpus.messages.iter().all(|m| m.phase_gold.is_some()) {
                Ok((series, placeholder))
            } else {
                bail!("no peaks found and not all messages carry phase_gold; cannot label phases")
            }
        }
        Err(e) => Err(e.into()),
    }
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn build_report(corpus: &Corpus, set: &LexiconSet, timeline: &TimelineOpts) -> Result<String> {
    let series = build_series(corpus, timeline)?;
    let storm = corpus.meta.get("storm").cloned().unwrap_or_else(|| "storm".to_string());
    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n");
    html.push_str(&format!("<title>storm report: {}</title>\n", html_escape(&storm)));
    html.push_str(
        "<style>body{font-family:sans-serif;max-width:900px;margin:2em auto}\
         table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:2px 8px}\
         </style></head><body>\n",
    );
    html.push_str(&format!("<h1>Storm report: {}</h1>\n", html_escape(&storm)));
    html.push_str(&format!(
        "<p>{} messages, {} bins ({}).</p>\n",
        corpus.len(),
        series.n_bins(),
        html_escape(&timeline.bin_width),
    ));

    // timeline + peaks + phases
    let peaks = detect_peaks(&series, timeline.peak_fraction, timeline.smoothing)
        .unwrap_or_default();
    html.push_str("<h2>Timeline</h2>\n");
    html.push_str(&crate::chart::timeline_svg(&series, &peaks, "message volume"));
    html.push_str(&format!(
        "<p>{} peak(s) at bin(s): {}</p>\n",
        peaks.len(),
        peaks
            .iter()
            .map(|p| series.bin_label(*p))
            .collect::<Vec<_>>()
            .join(", "),
    ));
    if let Ok(seg) = segment_phases(&series, &peaks) {
        html.push_str("<h3>Phases</h3>\n<table><tr><th>bin</th><th>phase</th><th>span</th></tr>\n");
        for i in 0..series.n_bins() {
            html.push_str(&format!(
                "<tr><td>{}</td><td>{}</td><td>{}</td></tr>\n",
                series.bin_label(i),
                seg.phase3[i],
                seg.span4[i].as_str(),
            ));
        }
        html.push_str("</table>\n");
        let mut phase_names: Vec<&str> = seg.phase3.iter().map(|p| p.as_str()).collect();
        phase_names.dedup();
        html.push_str(&format!(
            "<p>Three-phase segmentation: {}.</p>\n",
            phase_names.join(" → ")
        ));
    }

    // participation
    html.push_str("<h2>Participation</h2>\n");
    match participation_stats(corpus) {
        Ok(p) => html.push_str(&format!(
            "<p>{} authors; {:.1}% posted more than once, {:.1}% more than twice \
             ({} messages without author).</p>\n",
            p.n_authors,
            p.frac_gt1 * 100.0,
            p.frac_gt2 * 100.0,
            p.n_unauthored
        )),
        Err(e) => html.push_str(&format!("<p>unavailable: {}</p>\n", html_escape(&e.to_string()))),
    }

    // toxicity
    if let Some(tox) = set.role(crate::lexicon::LexiconRole::Toxicity) {
        let share = toxicity_share(corpus, tox);
        html.push_str(&format!(
            "<h2>Toxicity</h2>\n<p>{:.1}% of messages contain flagged language.</p>\n",
            share * 100.0
        ));
        let bins = toxicity_by_bin(corpus, tox, &series);
        let chart_bins: Vec<(String, f64)> = bins
            .iter()
            .enumerate()
            .map(|(i, (f, t))| {
                (
                    series.bin_label(i),
                    if *t > 0 { *f as f64 / *t as f64 } else { 0.0 },
                )
            })
            .collect();
        html.push_str(&crate::chart::rate_bars_svg(&chart_bins, "toxic share per bin"));
    }

    // tables
    let emoji = emoji_table(corpus);
    html.push_str("<h2>Emoji</h2>\n");
    if emoji.is_empty() {
        html.push_str("<p>none</p>\n");
    } else {
        html.push_str("<table><tr><th>emoji</th><th>count</th></tr>\n");
        for (e, c) in emoji.iter().take(15) {
            html.push_str(&format!("<tr><td>{e}</td><td>{c}</td></tr>\n"));
        }
        html.push_str("</table>\n");
    }
    let hashtags = hashtag_table(corpus);
    html.push_str("<h2>Hashtags</h2>\n");
    if hashtags.is_empty() {
        html.push_str("<p>none</p>\n");
    } else {
        html.push_str("<table><tr><th>hashtag</th><th>count</th></tr>\n");
        for (h, c) in hashtags.iter().take(15) {
            html.push_str(&format!(
                "<tr><td>{}</td><td>{c}</td></tr>\n",
                html_escape(h)
            ));
        }
        html.push_str("</table>\n");
    }

    // groups
    if let Ok(dist) = group_distribution(corpus, &series) {
        html.push_str("<h2>Stance groups</h2>\n");
        html.push_str(&crate::chart::stacked_area_svg(
            &series,
            &dist,
            "stance groups over time",
        ));
        html.push_str(&format!(
            "<p>{} unlabeled message(s) excluded.</p>\n",
            dist.n_unlabeled
        ));
    }

    html.push_str("</body></html>\n");
    Ok(html)
}
