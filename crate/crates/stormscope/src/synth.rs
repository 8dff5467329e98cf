//! Parametric generator of labeled synthetic cross-platform storms.
//!
//! The generator realizes the canonical storm trajectory: a trigger post on
//! the origin platform, spillover to a second platform, an appeasement
//! attempt that fails, material consequences, then decay. Supporter and
//! neutral activity stays constant over the whole run while opponent
//! activity is a baseline plus exponentially decaying waves launched at the
//! event days — the wave dynamics live entirely on the opponent side.
//!
//! Everything the statistics and classification modules are expected to
//! recover is planted with exact bookkeeping and recorded in
//! [`GroundTruth`]: per-message stance, per-day phase (defined by the
//! planted events, never by re-detected peaks), peak days, toxicity counts,
//! repeat-author counts, reply structure, emoji totals. Same config, same
//! seed, byte-identical corpora.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{CoarseStance, Corpus, Message, Phase, Platform, StanceLabel};
use crate::timeline::{bin_counts, detect_peaks, BinWidth};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("config line {0}: {1}")]
    Parse(usize, String),
    #[error("corpus platform `{0}` not present in ground truth")]
    UnknownPlatform(String),
}

/// The four storm events. The trigger is always day 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Trigger,
    Spillover,
    Appeasement,
    Consequence,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [
        EventKind::Trigger,
        EventKind::Spillover,
        EventKind::Appeasement,
        EventKind::Consequence,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Trigger => "trigger",
            EventKind::Spillover => "spillover",
            EventKind::Appeasement => "appeasement",
            EventKind::Consequence => "consequence",
        }
    }
}

/// One platform in the storm.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatformSpec {
    pub name: String,
    pub kind: Platform,
    /// Multiplies all daily rates on this platform.
    pub volume: f64,
}

/// One weighted vocabulary word. Tags name the lexicon categories the word
/// belongs to, so that feature skews can act on pool weights and the demo
/// lexicons recover the planted signal at extraction time.
#[derive(Debug, Clone, PartialEq)]
pub struct VocabWord {
    pub word: String,
    pub tags: Vec<String>,
    pub weight: f64,
}

impl VocabWord {
    fn new(word: &str, tags: &[&str], weight: f64) -> Self {
        VocabWord {
            word: word.to_string(),
            tags: tags.iter().map(|t| t.to_string()).collect(),
            weight,
        }
    }
}

/// What a skew rule conditions on: the author's stance or the storm phase
/// of the message's day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SkewCondition {
    Stance(CoarseStance),
    Phase(Phase),
}

/// Multiply the pool weight of words carrying `tag` when the condition
/// holds. Multipliers must be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewRule {
    pub condition: SkewCondition,
    pub tag: String,
    pub multiplier: f64,
}

/// Full generator configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub name: String,
    pub seed: u64,
    pub n_days: usize,
    pub lang: String,
    pub start_date: DateTime<Utc>,
    pub platforms: [PlatformSpec; 2],
    pub spillover_day: usize,
    pub appeasement_day: usize,
    pub consequence_day: usize,
    /// Expected supporter messages per day (constant over the run).
    pub supporter_daily_rate: f64,
    /// Wave amplitude per event; absent or zero means no wave.
    pub wave_amplitudes: BTreeMap<EventKind, f64>,
    pub decay_halflife_days: f64,
    /// Base probability per coarse stance; must sum to 1. The opponent
    /// baseline rate derives from this mix and the supporter rate.
    pub stance_mix: BTreeMap<CoarseStance, f64>,
    /// Fractional step-up of the opponent baseline from the spillover day
    /// on: recruited participants stay in the discussion. 0 keeps the
    /// baseline flat over the whole run.
    pub opponent_recruitment_boost: f64,
    pub repeat_frac_gt1: f64,
    pub repeat_frac_gt2: f64,
    pub reply_to_root_fraction: f64,
    pub toxicity_rate_by_platform: BTreeMap<String, f64>,
    pub emoji_budget_by_platform: BTreeMap<String, u64>,
    pub emoji_pool: Vec<String>,
    /// Words injected into messages selected as toxic; must belong to the
    /// toxicity lexicon and must not appear in the regular pools.
    pub toxic_vocabulary: Vec<String>,
    pub vocabulary: BTreeMap<CoarseStance, Vec<VocabWord>>,
    pub feature_skews: Vec<SkewRule>,
}

/// Relative day-count jitter: uniform in ±15 %, giving a daily-count
/// coefficient of variation of about 0.087, comfortably under the 0.15
/// bound the constant-supporter hypothesis plants.
const JITTER: f64 = 0.15;
const WORDS_PER_SENTENCE: (usize, usize) = (6, 12);
const SENTENCES_PER_MESSAGE: (usize, usize) = (1, 2);

fn side_of(stance: CoarseStance) -> Side {
    match stance {
        CoarseStance::SupportTarget | CoarseStance::SupportBoth => Side::Support,
        CoarseStance::OpposeTarget | CoarseStance::OpposeBoth => Side::Oppose,
        CoarseStance::Neutral | CoarseStance::OffTopic => Side::Neutral,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Support,
    Oppose,
    Neutral,
}

impl SynthConfig {
    pub fn event_day(&self, e: EventKind) -> usize {
        match e {
            EventKind::Trigger => 0,
            EventKind::Spillover => self.spillover_day,
            EventKind::Appeasement => self.appeasement_day,
            EventKind::Consequence => self.consequence_day,
        }
    }

    fn amplitude(&self, e: EventKind) -> f64 {
        self.wave_amplitudes.get(&e).copied().unwrap_or(0.0)
    }

    /// Event days that launch an actual wave (amplitude > 0).
    pub fn wave_days(&self) -> Vec<usize> {
        let mut days: Vec<usize> = EventKind::ALL
            .iter()
            .filter(|e| self.amplitude(**e) > 0.0)
            .map(|e| self.event_day(*e))
            .collect();
        days.sort_unstable();
        days.dedup();
        days
    }

    fn mix_sum(&self, side: Side) -> f64 {
        self.stance_mix
            .iter()
            .filter(|(s, _)| side_of(**s) == side)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |m: String| Err(SynthError::InvalidConfig(m));
        if self.n_days == 0 {
            return fail("n_days must be positive".into());
        }
        let (s, a, c) = (self.spillover_day, self.appeasement_day, self.consequence_day);
        if !(0 < s && s < a && a < c && c < self.n_days) {
            return fail(format!(
                "event days must satisfy 0 < spillover ({s}) < appeasement ({a}) < consequence ({c}) < n_days ({})",
                self.n_days
            ));
        }
        if self.supporter_daily_rate <= 0.0 {
            return fail("supporter_daily_rate must be positive".into());
        }
        if self.decay_halflife_days <= 0.0 {
            return fail("decay_halflife_days must be positive".into());
        }
        let mix_total: f64 = self.stance_mix.values().sum();
        if (mix_total - 1.0).abs() > 1e-9 {
            return fail(format!("stance_mix sums to {mix_total}, expected 1"));
        }
        if self.stance_mix.values().any(|p| *p < 0.0) {
            return fail("stance_mix probabilities must be non-negative".into());
        }
        if self.mix_sum(Side::Support) <= 0.0 {
            return fail("stance_mix needs a positive support share (it anchors the baseline)".into());
        }
        if self.wave_amplitudes.values().any(|a| *a < 0.0) {
            return fail("wave amplitudes must be non-negative".into());
        }
        if self.opponent_recruitment_boost < 0.0 {
            return fail("opponent_recruitment_boost must be non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.repeat_frac_gt1)
            || !(0.0..=1.0).contains(&self.repeat_frac_gt2)
            || self.repeat_frac_gt2 > self.repeat_frac_gt1
        {
            return fail("repeat fractions must satisfy 0 ≤ frac_gt2 ≤ frac_gt1 ≤ 1".into());
        }
        if !(0.0..=1.0).contains(&self.reply_to_root_fraction) {
            return fail("reply_to_root_fraction must be in [0, 1]".into());
        }
        for (p, r) in &self.toxicity_rate_by_platform {
            if !(0.0..=1.0).contains(r) {
                return fail(format!("toxicity rate for {p} must be in [0, 1]"));
            }
        }
        if self.feature_skews.iter().any(|s| s.multiplier <= 0.0) {
            return fail("skew multipliers must be positive".into());
        }
        for spec in &self.platforms {
            if spec.volume <= 0.0 {
                return fail(format!("platform {} volume must be positive", spec.name));
            }
        }
        if self.platforms[0].name == self.platforms[1].name {
            return fail("platform names must differ".into());
        }
        for (stance, pool) in &self.vocabulary {
            if pool.is_empty() {
                return fail(format!("vocabulary pool for {stance} is empty"));
            }
            if pool.iter().any(|w| w.weight <= 0.0) {
                return fail(format!("vocabulary weights for {stance} must be positive"));
            }
        }
        Ok(())
    }
}

/// Exact planted values for one generated platform corpus.
#[derive(Debug, Clone, Serialize)]
pub struct PlatformTruth {
    pub name: String,
    pub kind: Platform,
    pub n_messages: u64,
    pub onset_day: usize,
    pub daily_counts: Vec<u64>,
    pub daily_supporter_counts: Vec<u64>,
    pub daily_opponent_counts: Vec<u64>,
    /// Event days with positive amplitude visible on this platform.
    pub peak_days: Vec<usize>,
    pub stance_counts: BTreeMap<CoarseStance, u64>,
    pub n_toxic: u64,
    /// Realized toxic fraction: `n_toxic / n_messages`.
    pub toxicity_rate: f64,
    pub n_authors: u64,
    pub n_authors_gt1: u64,
    pub n_authors_gt2: u64,
    pub frac_gt1: f64,
    pub frac_gt2: f64,
    pub n_roots: u64,
    pub n_replies_to_root: u64,
    pub n_replies_to_replies: u64,
    pub emoji_total: u64,
}

/// Ground truth for a full generated storm.
#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    pub name: String,
    pub seed: u64,
    pub n_days: usize,
    pub event_days: BTreeMap<String, usize>,
    pub wave_days: Vec<usize>,
    /// Phase of each day, defined by the planted events: begin through the
    /// first wave day, middle through the last, end after.
    pub phase_of_day: Vec<Phase>,
    pub platforms: Vec<PlatformTruth>,
}

impl GroundTruth {
    pub fn platform(&self, name: &str) -> Option<&PlatformTruth> {
        self.platforms.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serializes")
    }
}

/// Generator output: one corpus per platform plus the ground truth.
#[derive(Debug)]
pub struct SynthOutput {
    pub corpora: Vec<Corpus>,
    pub truth: GroundTruth,
}

fn phase_of_day_from_waves(wave_days: &[usize], n_days: usize) -> Vec<Phase> {
    let first = wave_days.first().copied().unwrap_or(0);
    let last = wave_days.last().copied().unwrap_or(0);
    (0..n_days)
        .map(|d| {
            if d <= first {
                Phase::Begin
            } else if d <= last {
                Phase::Middle
            } else {
                Phase::End
            }
        })
        .collect()
}

/// Sampling-ready pool: words with cumulative weights and their total.
struct WeightedPool {
    words: Vec<String>,
    cumulative: Vec<f64>,
    total: f64,
}

struct PoolTable {
    entries: BTreeMap<(CoarseStance, Phase), WeightedPool>,
}

impl PoolTable {
    fn build(config: &SynthConfig) -> Self {
        let mut entries = BTreeMap::new();
        for (&stance, pool) in &config.vocabulary {
            for phase in Phase::ALL {
                let mut words = Vec::with_capacity(pool.len());
                let mut cumulative = Vec::with_capacity(pool.len());
                let mut total = 0.0;
                for w in pool {
                    let mut weight = w.weight;
                    for rule in &config.feature_skews {
                        let applies = match rule.condition {
                            SkewCondition::Stance(s) => s == stance,
                            SkewCondition::Phase(p) => p == phase,
                        };
                        if applies && w.tags.iter().any(|t| t == &rule.tag) {
                            weight *= rule.multiplier;
                        }
                    }
                    total += weight;
                    words.push(w.word.clone());
                    cumulative.push(total);
                }
                entries.insert(
                    (stance, phase),
                    WeightedPool {
                        words,
                        cumulative,
                        total,
                    },
                );
            }
        }
        PoolTable { entries }
    }

    fn sample(&self, stance: CoarseStance, phase: Phase, rng: &mut ChaCha8Rng) -> &str {
        let pool = &self.entries[&(stance, phase)];
        let u = rng.gen_range(0.0..pool.total);
        let i = pool.cumulative.partition_point(|&c| c <= u);
        &pool.words[i.min(pool.words.len() - 1)]
    }
}

fn draw_count(rate: f64, rng: &mut ChaCha8Rng) -> u64 {
    let jitter = rng.gen_range(-JITTER..JITTER);
    ((rate * (1.0 + jitter)).round()).max(0.0) as u64
}

/// Generate the storm. Deterministic: the same config (seed included)
/// produces byte-identical corpora and ground truth.
pub fn generate(config: &SynthConfig) -> Result<SynthOutput, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pools = PoolTable::build(config);

    let wave_days = config.wave_days();
    let effective_waves = if wave_days.is_empty() { vec![0] } else { wave_days.clone() };
    let phase_of_day = phase_of_day_from_waves(&effective_waves, config.n_days);

    let sup_mix = config.mix_sum(Side::Support);
    let opp_mix = config.mix_sum(Side::Oppose);
    let neu_mix = config.mix_sum(Side::Neutral);
    // The stance mix is the steady-state composition: with supporters at
    // `supporter_daily_rate`, the implied total sets the other baselines.
    let total_base = config.supporter_daily_rate / sup_mix;
    let opponent_base = total_base * opp_mix;
    let neutral_rate = total_base * neu_mix;

    let mut corpora = Vec::with_capacity(2);
    let mut platform_truths = Vec::with_capacity(2);

    for (p_idx, spec) in config.platforms.iter().enumerate() {
        let onset = if p_idx == 0 { 0 } else { config.spillover_day };
        let waves_for_platform: Vec<(usize, f64)> = EventKind::ALL
            .iter()
            .filter(|e| config.amplitude(**e) > 0.0)
            .map(|e| (config.event_day(*e), config.amplitude(*e)))
            .filter(|(d, _)| *d >= onset)
            .collect();

        // 1. daily counts per side
        let mut daily_support = vec![0u64; config.n_days];
        let mut daily_oppose = vec![0u64; config.n_days];
        let mut daily_neutral = vec![0u64; config.n_days];
        for d in 0..config.n_days {
            if d < onset {
                // platform 2 is silent before the spillover
                let _ = draw_count(0.0, &mut rng); // keep the draw sequence aligned
                let _ = draw_count(0.0, &mut rng);
                let _ = draw_count(0.0, &mut rng);
                continue;
            }
            let wave: f64 = waves_for_platform
                .iter()
                .filter(|(day, _)| *day <= d)
                .map(|(day, amp)| {
                    amp * 0.5f64.powf((d - day) as f64 / config.decay_halflife_days)
                })
                .sum();
            let recruited = if d >= config.spillover_day {
                1.0 + config.opponent_recruitment_boost
            } else {
                1.0
            };
            daily_support[d] =
                draw_count(config.supporter_daily_rate * spec.volume, &mut rng);
            daily_oppose[d] =
                draw_count((opponent_base * recruited + wave) * spec.volume, &mut rng);
            daily_neutral[d] = draw_count(neutral_rate * spec.volume, &mut rng);
        }

        // 2. messages: root first, then day by day, side by side
        struct Draft {
            day: usize,
            second: i64,
            stance: Option<CoarseStance>,
            text: String,
            is_root: bool,
        }
        let mut drafts: Vec<Draft> = Vec::new();
        let root_text = match p_idx {
            0 => "the post that started it all".to_string(),
            _ => "look what is happening over there, join in".to_string(),
        };
        drafts.push(Draft {
            day: onset,
            second: 0,
            stance: None,
            text: root_text,
            is_root: true,
        });

        let stances_of = |side: Side| -> Vec<(CoarseStance, f64)> {
            config
                .stance_mix
                .iter()
                .filter(|(s, p)| side_of(**s) == side && **p > 0.0)
                .map(|(s, p)| (*s, *p))
                .collect()
        };
        let side_stances = [
            stances_of(Side::Support),
            stances_of(Side::Oppose),
            stances_of(Side::Neutral),
        ];

        for d in onset..config.n_days {
            let phase = phase_of_day[d];
            let counts = [daily_support[d], daily_oppose[d], daily_neutral[d]];
            let day_total: u64 = counts.iter().sum::<u64>().max(1);
            let mut slot = 0u64;
            for (side_idx, &count) in counts.iter().enumerate() {
                let choices = &side_stances[side_idx];
                for _ in 0..count {
                    // stance within the side, proportional to the mix
                    let stance = if choices.len() == 1 {
                        choices[0].0
                    } else {
                        let total: f64 = choices.iter().map(|(_, p)| p).sum();
                        let mut u = rng.gen_range(0.0..total);
                        let mut picked = choices[0].0;
                        for (s, p) in choices {
                            if u < *p {
                                picked = *s;
                                break;
                            }
                            u -= p;
                        }
                        picked
                    };
                    let n_sentences =
                        rng.gen_range(SENTENCES_PER_MESSAGE.0..=SENTENCES_PER_MESSAGE.1);
                    let mut text = String::new();
                    for si in 0..n_sentences {
                        if si > 0 {
                            text.push(' ');
                        }
                        let len = rng.gen_range(WORDS_PER_SENTENCE.0..=WORDS_PER_SENTENCE.1);
                        for wi in 0..len {
                            if wi > 0 {
                                text.push(' ');
                            }
                            text.push_str(pools.sample(stance, phase, &mut rng));
                        }
                        text.push('.');
                    }
                    slot += 1;
                    let second = (86_000 * slot / (day_total + 1)).max(1) as i64;
                    drafts.push(Draft {
                        day: d,
                        second,
                        stance: Some(stance),
                        text,
                        is_root: false,
                    });
                }
            }
        }

        // 3. stable chronological order, ids, relative order
        let mut order: Vec<usize> = (0..drafts.len()).collect();
        order.sort_by_key(|&i| (drafts[i].day, drafts[i].second, i));
        let n_messages = drafts.len();

        // 4. toxicity: flag exactly round(rate * n) messages
        let tox_rate = config
            .toxicity_rate_by_platform
            .get(&spec.name)
            .copied()
            .unwrap_or(0.0);
        let n_toxic = (tox_rate * n_messages as f64).round() as usize;
        let mut tox_candidates: Vec<usize> = (0..n_messages).collect();
        tox_candidates.shuffle(&mut rng);
        let mut toxic_flags = vec![false; n_messages];
        for &pos in tox_candidates.iter().take(n_toxic.min(n_messages)) {
            toxic_flags[pos] = true;
        }

        // 5. reply structure: exact to-root fraction among replies
        let n_replies = n_messages.saturating_sub(1);
        let mut to_reply_target =
            n_replies - (config.reply_to_root_fraction * n_replies as f64).round() as usize;
        let mut reply_positions: Vec<usize> = (1..n_messages).collect();
        reply_positions.shuffle(&mut rng);
        let mut is_to_reply = vec![false; n_messages];
        for &pos in reply_positions.iter() {
            if to_reply_target == 0 {
                break;
            }
            if pos == 1 {
                continue; // the first reply has no earlier reply to attach to
            }
            is_to_reply[pos] = true;
            to_reply_target -= 1;
        }

        // 6. authors: realize the planted repeat fractions exactly
        let author_slots = realize_authors(
            n_replies,
            config.repeat_frac_gt1,
            config.repeat_frac_gt2,
            &spec.name,
            &mut rng,
        );

        // 7. emoji budget, round-robin over messages
        let emoji_budget = config
            .emoji_budget_by_platform
            .get(&spec.name)
            .copied()
            .unwrap_or(0);

        // assemble
        let mut messages: Vec<Message> = Vec::with_capacity(n_messages);
        let root_id = format!("{}_root", spec.name);
        let mut ids: Vec<String> = Vec::with_capacity(n_messages);
        for (pos, &draft_idx) in order.iter().enumerate() {
            let d = &drafts[draft_idx];
            let id = if d.is_root {
                root_id.clone()
            } else {
                format!("{}_m{pos:05}", spec.name)
            };
            ids.push(id.clone());
            let mut text = d.text.clone();
            if toxic_flags[pos] && !config.toxic_vocabulary.is_empty() {
                let w = &config.toxic_vocabulary
                    [rng.gen_range(0..config.toxic_vocabulary.len())];
                text.push_str(&format!(" {w}."));
            }
            let timestamp = config.start_date + Duration::days(d.day as i64)
                + Duration::seconds(d.second);
            messages.push(Message {
                id,
                platform: spec.kind,
                thread_id: root_id.clone(),
                parent_id: None,
                is_root: d.is_root,
                author_id: None,
                timestamp: Some(timestamp),
                relative_order: pos as u64,
                lang: config.lang.clone(),
                text,
                stance: d.stance.map(StanceLabel::coarse),
                phase_gold: None,
                meta: Default::default(),
            });
        }
        // parents: to-root replies point at the root, to-reply at the
        // closest earlier reply
        let mut n_to_root = 0u64;
        let mut n_to_reply = 0u64;
        for pos in 1..n_messages {
            if is_to_reply[pos] {
                messages[pos].parent_id = Some(ids[pos - 1].clone());
                n_to_reply += 1;
            } else {
                messages[pos].parent_id = Some(root_id.clone());
                n_to_root += 1;
            }
        }
        // authors
        messages[0].author_id = Some(format!("{}_origin", spec.name));
        for (k, pos) in (1..n_messages).enumerate() {
            messages[pos].author_id = Some(author_slots[k].clone());
        }
        // emoji
        let mut emoji_total = 0u64;
        if !config.emoji_pool.is_empty() {
            for k in 0..emoji_budget {
                let msg = (k as usize) % n_messages;
                let e = &config.emoji_pool[(k as usize) % config.emoji_pool.len()];
                messages[msg].text.push_str(&format!(" {e}"));
                emoji_total += 1;
            }
        }

        // exact realized bookkeeping
        let mut stance_counts: BTreeMap<CoarseStance, u64> = BTreeMap::new();
        let mut daily_counts = vec![0u64; config.n_days];
        for (pos, &draft_idx) in order.iter().enumerate() {
            let d = &drafts[draft_idx];
            daily_counts[d.day] += 1;
            if let Some(s) = &messages[pos].stance {
                *stance_counts.entry(s.coarse).or_insert(0) += 1;
            }
        }
        let mut author_counts: BTreeMap<&str, u64> = BTreeMap::new();
        for m in &messages {
            *author_counts
                .entry(m.author_id.as_deref().unwrap())
                .or_insert(0) += 1;
        }
        let n_authors = author_counts.len() as u64;
        let n_gt1 = author_counts.values().filter(|&&c| c > 1).count() as u64;
        let n_gt2 = author_counts.values().filter(|&&c| c > 2).count() as u64;

        let mut corpus = Corpus {
            messages,
            meta: [
                ("storm".to_string(), config.name.clone()),
                ("platform".to_string(), spec.name.clone()),
                ("kind".to_string(), spec.kind.as_str().to_string()),
                ("lang".to_string(), config.lang.clone()),
                ("seed".to_string(), config.seed.to_string()),
            ]
            .into(),
        };
        corpus.normalize();

        platform_truths.push(PlatformTruth {
            name: spec.name.clone(),
            kind: spec.kind,
            n_messages: n_messages as u64,
            onset_day: onset,
            daily_counts,
            daily_supporter_counts: daily_support,
            daily_opponent_counts: daily_oppose,
            peak_days: waves_for_platform.iter().map(|(d, _)| *d).collect(),
            stance_counts,
            n_toxic: n_toxic as u64,
            toxicity_rate: n_toxic as f64 / n_messages as f64,
            n_authors,
            n_authors_gt1: n_gt1,
            n_authors_gt2: n_gt2,
            frac_gt1: n_gt1 as f64 / n_authors as f64,
            frac_gt2: n_gt2 as f64 / n_authors as f64,
            n_roots: 1,
            n_replies_to_root: n_to_root,
            n_replies_to_replies: n_to_reply,
            emoji_total,
        });
        corpora.push(corpus);
    }

    Ok(SynthOutput {
        corpora,
        truth: GroundTruth {
            name: config.name.clone(),
            seed: config.seed,
            n_days: config.n_days,
            event_days: EventKind::ALL
                .iter()
                .map(|e| (e.as_str().to_string(), config.event_day(*e)))
                .collect(),
            wave_days: effective_waves,
            phase_of_day,
            platforms: platform_truths,
        },
    })
}

/// Author pool sized so that the planted `frac_gt1` / `frac_gt2` hold as
/// closely as integer counts allow; leftover messages pile onto one heavy
/// author so the fractions stay within rounding of the target.
fn realize_authors(
    n_messages: usize,
    frac_gt1: f64,
    frac_gt2: f64,
    platform: &str,
    rng: &mut ChaCha8Rng,
) -> Vec<String> {
    if n_messages == 0 {
        return Vec::new();
    }
    let expected_posts = 1.0 * (1.0 - frac_gt1) + 2.0 * (frac_gt1 - frac_gt2) + 3.0 * frac_gt2;
    let mut n_authors = ((n_messages as f64 / expected_posts).round() as usize).max(1);
    let mut n_gt2 = (frac_gt2 * n_authors as f64).round() as usize;
    let mut n_gt1_only = ((frac_gt1 * n_authors as f64).round() as usize).saturating_sub(n_gt2);
    while n_gt2 + n_gt1_only > n_authors {
        if n_gt1_only > 0 {
            n_gt1_only -= 1;
        } else {
            n_gt2 -= 1;
        }
    }
    let mut n_single = n_authors - n_gt2 - n_gt1_only;
    let total = |s: usize, d: usize, t: usize| s + 2 * d + 3 * t;
    // shed singles while over budget, then demote heavier authors
    while total(n_single, n_gt1_only, n_gt2) > n_messages {
        if n_single > 0 {
            n_single -= 1;
            n_authors -= 1;
        } else if n_gt1_only > 0 {
            n_gt1_only -= 1;
            n_single += 1;
        } else if n_gt2 > 0 {
            n_gt2 -= 1;
            n_gt1_only += 1;
        } else {
            break;
        }
    }
    let mut posts: Vec<usize> = Vec::with_capacity(n_authors);
    posts.extend(std::iter::repeat_n(1, n_single));
    posts.extend(std::iter::repeat_n(2, n_gt1_only));
    posts.extend(std::iter::repeat_n(3, n_gt2));
    if posts.is_empty() {
        posts.push(0);
    }
    // park the remainder on the last (heaviest) author
    let assigned: usize = posts.iter().sum();
    let last = posts.len() - 1;
    posts[last] += n_messages - assigned;

    let mut slots: Vec<String> = Vec::with_capacity(n_messages);
    for (a, &count) in posts.iter().enumerate() {
        for _ in 0..count {
            slots.push(format!("{platform}_a{a:05}"));
        }
    }
    slots.shuffle(rng);
    slots
}

/// Conformance of one generated corpus against its ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeReport {
    pub platform: String,
    pub onset_day: usize,
    /// Coefficient of variation of daily supporter-side counts over the
    /// platform's active span.
    pub supporter_cv: f64,
    pub opponent_cv: f64,
    pub planted_peaks: Vec<usize>,
    pub detected_peaks: Vec<usize>,
    pub peaks_match: bool,
    /// Spearman rank correlation of daily totals vs day index from the
    /// last event day on; negative means the storm decays.
    pub post_final_event_spearman: f64,
}

fn cv(xs: &[u64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<u64>() as f64 / n;
    if mean == 0.0 {
        return 0.0;
    }
    let var = xs
        .iter()
        .map(|&x| (x as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    var.sqrt() / mean
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[idx[k]] = avg_rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.len() != ys.len() || xs.len() < 2 {
        return 0.0;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..xs.len() {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx).powi(2);
        vy += (ry[i] - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

/// Check a generated corpus against its ground truth: constant supporters,
/// wavy opponents, recovered peaks, post-consequence decay.
pub fn shape_report(corpus: &Corpus, truth: &GroundTruth) -> Result<ShapeReport, SynthError> {
    let name = corpus
        .meta
        .get("platform")
        .cloned()
        .ok_or_else(|| SynthError::UnknownPlatform("<missing meta>".to_string()))?;
    let pt = truth
        .platform(&name)
        .ok_or_else(|| SynthError::UnknownPlatform(name.clone()))?;

    let active = pt.onset_day..truth.n_days;
    let supporter_cv = cv(&pt.daily_supporter_counts[active.clone()]);
    let opponent_cv = cv(&pt.daily_opponent_counts[active.clone()]);

    let series = bin_counts(corpus, BinWidth::one_day())
        .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
    let detected: Vec<usize> = detect_peaks(&series, 0.25, 1)
        .unwrap_or_default()
        .into_iter()
        .map(|b| b + pt.onset_day)
        .collect();

    let last_event = truth.event_days.values().copied().max().unwrap_or(0);
    let tail: Vec<f64> = (last_event..truth.n_days)
        .map(|d| pt.daily_counts[d] as f64)
        .collect();
    let days: Vec<f64> = (last_event..truth.n_days).map(|d| d as f64).collect();
    let rho = spearman(&tail, &days);

    Ok(ShapeReport {
        platform: name,
        onset_day: pt.onset_day,
        supporter_cv,
        opponent_cv,
        planted_peaks: pt.peak_days.clone(),
        detected_peaks: detected.clone(),
        peaks_match: detected == pt.peak_days,
        post_final_event_spearman: rho,
    })
}

mod config_io;
mod presets;

pub use config_io::{config_to_string, parse_config, parse_config_file};
pub use presets::{esports_like, musk_like, musk_like_trend, separable_phase, separable_stance};
