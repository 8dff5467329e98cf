//! Phase and stance classification over feature rates.
//!
//! Both tasks are 3-class problems over the 35 feature inputs (34 per-token
//! count rates plus average sentence length). The model is multinomial
//! logistic regression with an L2 penalty, trained full-batch by a damped
//! Newton method from zero initial weights — deterministic given the
//! dataset and config, no stochastic optimizer anywhere. Features are
//! standardized with training-split statistics; zero-variance features get
//! unit scale and, having no signal, keep zero weight.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{CoarseStance, Corpus, Phase};
use crate::features::{extract_features, N_COUNT_FEATURES};
use crate::lexicon::LexiconSet;
use crate::timeline::{PhaseSegmentation, TimelineSeries};

/// Classifier input dimensionality: 34 count rates + avg_sentence_length.
pub const N_INPUTS: usize = N_COUNT_FEATURES + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Phase,
    Stance,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Phase => "phase",
            Task::Stance => "stance",
        }
    }

    /// The fixed class universe of the task.
    pub fn classes(&self) -> &'static [&'static str] {
        match self {
            Task::Phase => &["begin", "middle", "end"],
            Task::Stance => &["support", "oppose", "neutral"],
        }
    }
}

impl std::str::FromStr for Task {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phase" => Ok(Task::Phase),
            "stance" => Ok(Task::Stance),
            other => Err(ClassifyError::UnknownTask(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("unknown task `{0}` (expected phase or stance)")]
    UnknownTask(String),
    #[error("stance task needs labeled messages; none found")]
    NoLabeledMessages,
    #[error("phase segmentation covers {seg} bins but the series has {series}")]
    SegmentationMismatch { seg: usize, series: usize },
    #[error("train_fraction must be in (0, 1), got {0}")]
    InvalidTrainFraction(f64),
    #[error("class `{0}` has fewer than 2 instances; cannot split")]
    TinyClass(String),
    #[error("training set contains a single class")]
    SingleClass,
    #[error("non-finite feature value in instance {0}")]
    NonFinite(usize),
    #[error("empty dataset")]
    Empty,
    #[error("malformed model file: {0}")]
    MalformedModel(String),
}

/// One training/evaluation instance: feature rates plus a class index into
/// the task's class universe.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledInstance {
    pub features: [f64; N_INPUTS],
    pub label: usize,
}

/// A labeled dataset for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub task: Task,
    pub instances: Vec<LabeledInstance>,
    /// Messages that could not be labeled (no stance / no bin), excluded
    /// but reported.
    pub n_skipped: u64,
}

impl Dataset {
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.task.classes().len()];
        for inst in &self.instances {
            counts[inst.label] += 1;
        }
        counts
    }
}

fn stance_class(coarse: CoarseStance) -> usize {
    match coarse {
        CoarseStance::SupportTarget | CoarseStance::SupportBoth => 0,
        CoarseStance::OpposeTarget | CoarseStance::OpposeBoth => 1,
        CoarseStance::Neutral | CoarseStance::OffTopic => 2,
    }
}

fn phase_class(phase: Phase) -> usize {
    match phase {
        Phase::Begin => 0,
        Phase::Middle => 1,
        Phase::End => 2,
    }
}

/// Build a labeled dataset from a corpus.
///
/// Phase labels come from the segmentation of the message's bin, except
/// that a `phase_gold` annotation wins. Stance labels map the six coarse
/// stances onto support / oppose / neutral relative to the target person;
/// unlabeled messages are skipped and counted.
pub fn make_dataset(
    corpus: &Corpus,
    task: Task,
    series: &TimelineSeries,
    segmentation: &PhaseSegmentation,
    lexicons: &LexiconSet,
) -> Result<Dataset, ClassifyError> {
    if task == Task::Phase && segmentation.phase3.len() != series.n_bins() {
        return Err(ClassifyError::SegmentationMismatch {
            seg: segmentation.phase3.len(),
            series: series.n_bins(),
        });
    }
    let mut instances = Vec::new();
    let mut skipped = 0u64;
    for (pos, m) in corpus.messages.iter().enumerate() {
        let label = match task {
            Task::Phase => match m.phase_gold {
                Some(p) => Some(phase_class(p)),
                None => series
                    .bin_of(pos, m)
                    .and_then(|b| segmentation.phase3.get(b))
                    .map(|p| phase_class(*p)),
            },
            Task::Stance => m.stance.as_ref().map(|s| stance_class(s.coarse)),
        };
        match label {
            Some(label) => {
                let v = extract_features(m, lexicons);
                instances.push(LabeledInstance {
                    features: v.per_token_rates(),
                    label,
                });
            }
            None => skipped += 1,
        }
    }
    if task == Task::Stance && instances.is_empty() {
        return Err(ClassifyError::NoLabeledMessages);
    }
    Ok(Dataset {
        task,
        instances,
        n_skipped: skipped,
    })
}

/// Deterministic stratified split: per class, shuffle with the seeded RNG
/// and take `round(n_c * train_fraction)` (clamped so both sides keep at
/// least one instance). The same seed reproduces the same index sets.
pub fn split(
    dataset: &Dataset,
    seed: u64,
    train_fraction: f64,
) -> Result<(Dataset, Dataset), ClassifyError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(ClassifyError::InvalidTrainFraction(train_fraction));
    }
    let n_classes = dataset.task.classes().len();
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, inst) in dataset.instances.iter().enumerate() {
        by_class[inst.label].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for (c, mut idxs) in by_class.into_iter().enumerate() {
        if idxs.is_empty() {
            continue;
        }
        if idxs.len() < 2 {
            return Err(ClassifyError::TinyClass(
                dataset.task.classes()[c].to_string(),
            ));
        }
        idxs.shuffle(&mut rng);
        let n = idxs.len();
        let k = ((n as f64 * train_fraction).round() as usize).clamp(1, n - 1);
        train_idx.extend_from_slice(&idxs[..k]);
        test_idx.extend_from_slice(&idxs[k..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let pick = |idxs: &[usize]| Dataset {
        task: dataset.task,
        instances: idxs.iter().map(|&i| dataset.instances[i].clone()).collect(),
        n_skipped: 0,
    };
    Ok((pick(&train_idx), pick(&test_idx)))
}

/// Training configuration. Defaults: l2 = 1.0, tolerance = 1e-8,
/// max_iters = 1000.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub l2: f64,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            l2: 1.0,
            max_iters: 1000,
            tolerance: 1e-8,
        }
    }
}

/// A trained multinomial logistic model: per-class weights and bias over
/// the standardized 35 inputs, plus the standardization constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub task: Task,
    pub means: [f64; N_INPUTS],
    pub sds: [f64; N_INPUTS],
    /// `weights[c]` is the weight vector of class `c`.
    pub weights: Vec<[f64; N_INPUTS]>,
    pub biases: Vec<f64>,
    /// Euclidean norm of the objective gradient at the returned weights.
    pub final_gradient_norm: f64,
    pub iterations: usize,
}

impl Model {
    fn standardize(&self, x: &[f64; N_INPUTS]) -> [f64; N_INPUTS] {
        let mut z = [0.0; N_INPUTS];
        for i in 0..N_INPUTS {
            z[i] = (x[i] - self.means[i]) / self.sds[i];
        }
        z
    }

    pub fn scores(&self, x: &[f64; N_INPUTS]) -> Vec<f64> {
        let z = self.standardize(x);
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.iter().zip(&z).map(|(wi, zi)| wi * zi).sum::<f64>() + b)
            .collect()
    }

    /// Predicted class index (ties resolve to the lowest index).
    pub fn predict(&self, x: &[f64; N_INPUTS]) -> usize {
        let scores = self.scores(x);
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = c;
            }
        }
        best
    }
}

/// The training objective over standardized instances, exposed so that the
/// gradient can be verified independently (finite differences).
///
/// `J(W, b) = (1/n) Σ −log softmax_y(Wz + b) + (l2 / 2n) ||W||²` —
/// biases are not penalized. Parameters are packed per class:
/// `[w_c0 .. w_c34, b_c]` for c = 0, 1, ….
pub struct TrainingProblem {
    z: Vec<[f64; N_INPUTS]>,
    y: Vec<usize>,
    n_classes: usize,
    l2: f64,
    pub means: [f64; N_INPUTS],
    pub sds: [f64; N_INPUTS],
}

const P: usize = N_INPUTS + 1; // parameters per class (weights + bias)

impl TrainingProblem {
    pub fn new(train: &Dataset, l2: f64) -> Result<Self, ClassifyError> {
        if train.instances.is_empty() {
            return Err(ClassifyError::Empty);
        }
        for (i, inst) in train.instances.iter().enumerate() {
            if inst.features.iter().any(|v| !v.is_finite()) {
                return Err(ClassifyError::NonFinite(i));
            }
        }
        let classes_present: std::collections::BTreeSet<usize> =
            train.instances.iter().map(|i| i.label).collect();
        if classes_present.len() < 2 {
            return Err(ClassifyError::SingleClass);
        }
        let n = train.instances.len() as f64;
        let mut means = [0.0; N_INPUTS];
        let mut sds = [1.0; N_INPUTS];
        for f in 0..N_INPUTS {
            let mean = train.instances.iter().map(|i| i.features[f]).sum::<f64>() / n;
            let var = train
                .instances
                .iter()
                .map(|i| (i.features[f] - mean).powi(2))
                .sum::<f64>()
                / n;
            means[f] = mean;
            sds[f] = if var > 0.0 { var.sqrt() } else { 1.0 };
        }
        let z = train
            .instances
            .iter()
            .map(|inst| {
                let mut row = [0.0; N_INPUTS];
                for f in 0..N_INPUTS {
                    row[f] = (inst.features[f] - means[f]) / sds[f];
                }
                row
            })
            .collect();
        Ok(TrainingProblem {
            z,
            y: train.instances.iter().map(|i| i.label).collect(),
            n_classes: train.task.classes().len(),
            l2,
            means,
            sds,
        })
    }

    pub fn n_params(&self) -> usize {
        self.n_classes * P
    }

    fn probabilities(&self, params: &[f64], i: usize) -> Vec<f64> {
        let z = &self.z[i];
        let mut scores: Vec<f64> = (0..self.n_classes)
            .map(|c| {
                let w = &params[c * P..c * P + N_INPUTS];
                let b = params[c * P + N_INPUTS];
                w.iter().zip(z).map(|(wi, zi)| wi * zi).sum::<f64>() + b
            })
            .collect();
        let max = scores.iter().cloned().fold(f64::MIN, f64::max);
        let mut sum = 0.0;
        for s in scores.iter_mut() {
            *s = (*s - max).exp();
            sum += *s;
        }
        for s in scores.iter_mut() {
            *s /= sum;
        }
        scores
    }

    /// Objective value at `params`.
    pub fn value(&self, params: &[f64]) -> f64 {
        let n = self.z.len() as f64;
        let mut loss = 0.0;
        for i in 0..self.z.len() {
            let p = self.probabilities(params, i);
            loss -= p[self.y[i]].max(1e-300).ln();
        }
        let mut penalty = 0.0;
        for c in 0..self.n_classes {
            for f in 0..N_INPUTS {
                penalty += params[c * P + f].powi(2);
            }
        }
        loss / n + self.l2 * penalty / (2.0 * n)
    }

    /// Gradient of the objective at `params`.
    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let n = self.z.len() as f64;
        let mut g = vec![0.0; self.n_params()];
        for i in 0..self.z.len() {
            let p = self.probabilities(params, i);
            for c in 0..self.n_classes {
                let delta = p[c] - if self.y[i] == c { 1.0 } else { 0.0 };
                let base = c * P;
                for f in 0..N_INPUTS {
                    g[base + f] += delta * self.z[i][f];
                }
                g[base + N_INPUTS] += delta;
            }
        }
        for v in g.iter_mut() {
            *v /= n;
        }
        for c in 0..self.n_classes {
            for f in 0..N_INPUTS {
                g[c * P + f] += self.l2 * params[c * P + f] / n;
            }
        }
        g
    }

    /// Dense Hessian (weights get the L2 ridge, biases do not).
    fn hessian(&self, params: &[f64]) -> Vec<f64> {
        let dim = self.n_params();
        let n = self.z.len() as f64;
        let mut h = vec![0.0; dim * dim];
        let mut zb = [0.0; P];
        for i in 0..self.z.len() {
            let p = self.probabilities(params, i);
            zb[..N_INPUTS].copy_from_slice(&self.z[i]);
            zb[N_INPUTS] = 1.0;
            for c in 0..self.n_classes {
                for c2 in c..self.n_classes {
                    let factor = if c == c2 {
                        p[c] * (1.0 - p[c])
                    } else {
                        -p[c] * p[c2]
                    };
                    if factor == 0.0 {
                        continue;
                    }
                    for a in 0..P {
                        let row = (c * P + a) * dim + c2 * P;
                        let za = factor * zb[a];
                        for b in 0..P {
                            h[row + b] += za * zb[b];
                        }
                    }
                }
            }
        }
        // mirror the upper class blocks, scale, add ridge
        for c in 0..self.n_classes {
            for c2 in c + 1..self.n_classes {
                for a in 0..P {
                    for b in 0..P {
                        let src = (c * P + a) * dim + c2 * P + b;
                        let dst = (c2 * P + b) * dim + c * P + a;
                        h[dst] = h[src];
                    }
                }
            }
        }
        for v in h.iter_mut() {
            *v /= n;
        }
        for c in 0..self.n_classes {
            for f in 0..N_INPUTS {
                let d = c * P + f;
                h[d * dim + d] += self.l2 / n;
            }
        }
        h
    }
}

/// Cholesky factorization (in place, lower triangle). Returns false when
/// the matrix is not positive definite.
fn cholesky(a: &mut [f64], dim: usize) -> bool {
    for j in 0..dim {
        let mut d = a[j * dim + j];
        for k in 0..j {
            d -= a[j * dim + k].powi(2);
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        a[j * dim + j] = d;
        for i in j + 1..dim {
            let mut s = a[i * dim + j];
            for k in 0..j {
                s -= a[i * dim + k] * a[j * dim + k];
            }
            a[i * dim + j] = s / d;
        }
    }
    true
}

/// Solve `L Lᵀ x = b` given the Cholesky factor in the lower triangle.
fn cholesky_solve(l: &[f64], dim: usize, b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; dim];
    for i in 0..dim {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * dim + k] * y[k];
        }
        y[i] = s / l[i * dim + i];
    }
    let mut x = vec![0.0; dim];
    for i in (0..dim).rev() {
        let mut s = y[i];
        for k in i + 1..dim {
            s -= l[k * dim + i] * x[k];
        }
        x[i] = s / l[i * dim + i];
    }
    x
}

/// Train by damped Newton with Armijo backtracking, starting from zero
/// weights. Stops when the gradient norm drops below `tolerance` or after
/// `max_iters` iterations.
pub fn train(train: &Dataset, config: TrainConfig) -> Result<Model, ClassifyError> {
    let problem = TrainingProblem::new(train, config.l2)?;
    let dim = problem.n_params();
    let mut params = vec![0.0; dim];
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;

    for iter in 0..config.max_iters {
        iterations = iter;
        let g = problem.gradient(&params);
        grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm < config.tolerance {
            break;
        }
        let h = problem.hessian(&params);
        // Damp until positive definite: the softmax Hessian alone is
        // singular along the all-biases-shift direction.
        let mut tau = 1e-10;
        let direction = loop {
            let mut hd = h.clone();
            for d in 0..dim {
                hd[d * dim + d] += tau;
            }
            if cholesky(&mut hd, dim) {
                break cholesky_solve(&hd, dim, &g);
            }
            tau *= 10.0;
            if tau > 1e6 {
                // fall back to a gradient step
                break g.clone();
            }
        };
        // Armijo backtracking on J along -direction
        let j0 = problem.value(&params);
        let slope: f64 = g.iter().zip(&direction).map(|(a, b)| a * b).sum();
        let mut step = 1.0;
        let mut candidate;
        loop {
            candidate = params
                .iter()
                .zip(&direction)
                .map(|(p, d)| p - step * d)
                .collect::<Vec<f64>>();
            if problem.value(&candidate) <= j0 - 1e-4 * step * slope || step < 1e-12 {
                break;
            }
            step *= 0.5;
        }
        params = candidate;
    }

    let g = problem.gradient(&params);
    grad_norm = grad_norm.min(g.iter().map(|v| v * v).sum::<f64>().sqrt());

    let n_classes = train.task.classes().len();
    let mut weights = vec![[0.0; N_INPUTS]; n_classes];
    let mut biases = vec![0.0; n_classes];
    for c in 0..n_classes {
        weights[c].copy_from_slice(&params[c * P..c * P + N_INPUTS]);
        biases[c] = params[c * P + N_INPUTS];
    }
    Ok(Model {
        task: train.task,
        means: problem.means,
        sds: problem.sds,
        weights,
        biases,
        final_gradient_norm: grad_norm,
        iterations,
    })
}

/// Per-class evaluation metrics.
#[derive(Debug, Clone, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Evaluation report: macro-F1 (unweighted mean over the task's class
/// universe; classes absent from the test set contribute 0 and are
/// flagged), per-class metrics and the confusion matrix (rows = true).
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub task: Task,
    /// Averaging convention, stated in every report: unweighted macro.
    pub f1_average: &'static str,
    pub n_instances: usize,
    pub macro_f1: f64,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: Vec<Vec<u64>>,
    pub absent_classes: Vec<String>,
}

pub fn evaluate(model: &Model, test: &Dataset) -> Result<EvalReport, ClassifyError> {
    if test.instances.is_empty() {
        return Err(ClassifyError::Empty);
    }
    let classes = model.task.classes();
    let c = classes.len();
    let mut confusion = vec![vec![0u64; c]; c];
    for inst in &test.instances {
        let pred = model.predict(&inst.features);
        confusion[inst.label][pred] += 1;
    }
    let report = eval_from_confusion(model.task, &confusion);
    Ok(report)
}

/// Metrics from a confusion matrix alone; exported so reports can be
/// verified against hand-built matrices.
pub fn eval_from_confusion(task: Task, confusion: &[Vec<u64>]) -> EvalReport {
    let classes = task.classes();
    let c = classes.len();
    let mut per_class = Vec::with_capacity(c);
    let mut absent = Vec::new();
    let mut f1_sum = 0.0;
    let mut n_instances = 0u64;
    for k in 0..c {
        let tp = confusion[k][k] as f64;
        let support: u64 = confusion[k].iter().sum();
        n_instances += support;
        let fp: f64 = (0..c).map(|r| confusion[r][k]).sum::<u64>() as f64 - tp;
        let fn_: f64 = support as f64 - tp;
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        if support == 0 {
            absent.push(classes[k].to_string());
        }
        f1_sum += f1;
        per_class.push(ClassMetrics {
            class: classes[k].to_string(),
            precision,
            recall,
            f1,
            support,
        });
    }
    EvalReport {
        task,
        f1_average: "macro",
        n_instances: n_instances as usize,
        macro_f1: f1_sum / c as f64,
        per_class,
        confusion: confusion.to_vec(),
        absent_classes: absent,
    }
}

const MODEL_MAGIC: &str = "stormscope-model v1";

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize a model to the versioned flat text format (17 significant
/// digits; round-trips exactly).
pub fn model_to_text(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC}");
    let _ = writeln!(out, "task {}", model.task.as_str());
    let _ = writeln!(out, "classes {}", model.task.classes().join(" "));
    let _ = writeln!(out, "n_features {N_INPUTS}");
    let join = |xs: &[f64]| xs.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "means {}", join(&model.means));
    let _ = writeln!(out, "sds {}", join(&model.sds));
    let _ = writeln!(out, "biases {}", join(&model.biases));
    for w in &model.weights {
        let _ = writeln!(out, "weights {}", join(&w[..]));
    }
    out
}

pub fn model_from_text(text: &str) -> Result<Model, ClassifyError> {
    let bad = |m: &str| ClassifyError::MalformedModel(m.to_string());
    let mut lines = text.lines();
    if lines.next() != Some(MODEL_MAGIC) {
        return Err(bad("missing or unsupported header"));
    }
    let mut task: Option<Task> = None;
    let mut means: Option<Vec<f64>> = None;
    let mut sds: Option<Vec<f64>> = None;
    let mut biases: Option<Vec<f64>> = None;
    let mut weights: Vec<Vec<f64>> = Vec::new();
    let parse_floats = |rest: &str| -> Result<Vec<f64>, ClassifyError> {
        rest.split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| ClassifyError::MalformedModel(format!("bad float `{t}`")))
            })
            .collect()
    };
    for line in lines {
        let Some((key, rest)) = line.split_once(' ') else {
            continue;
        };
        match key {
            "task" => task = Some(rest.parse()?),
            "classes" | "n_features" => {} // implied by task/version
            "means" => means = Some(parse_floats(rest)?),
            "sds" => sds = Some(parse_floats(rest)?),
            "biases" => biases = Some(parse_floats(rest)?),
            "weights" => weights.push(parse_floats(rest)?),
            _ => return Err(bad(&format!("unknown key `{key}`"))),
        }
    }
    let task = task.ok_or_else(|| bad("missing task"))?;
    let to_arr = |v: Vec<f64>, what: &str| -> Result<[f64; N_INPUTS], ClassifyError> {
        v.try_into()
            .map_err(|_| ClassifyError::MalformedModel(format!("{what}: wrong length")))
    };
    let means = to_arr(means.ok_or_else(|| bad("missing means"))?, "means")?;
    let sds = to_arr(sds.ok_or_else(|| bad("missing sds"))?, "sds")?;
    let biases = biases.ok_or_else(|| bad("missing biases"))?;
    let n_classes = task.classes().len();
    if biases.len() != n_classes || weights.len() != n_classes {
        return Err(bad("class count mismatch"));
    }
    let mut w = Vec::with_capacity(n_classes);
    for row in weights {
        w.push(to_arr(row, "weights")?);
    }
    Ok(Model {
        task,
        means,
        sds,
        weights: w,
        biases,
        final_gradient_norm: f64::NAN,
        iterations: 0,
    })
}

/// Shuffle the labels of a dataset (permutation-null baseline).
pub fn shuffle_labels(dataset: &Dataset, seed: u64) -> Dataset {
    let mut labels: Vec<usize> = dataset.instances.iter().map(|i| i.label).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);
    Dataset {
        task: dataset.task,
        instances: dataset
            .instances
            .iter()
            .zip(labels)
            .map(|(inst, label)| LabeledInstance {
                features: inst.features,
                label,
            })
            .collect(),
        n_skipped: dataset.n_skipped,
    }
}

/// Class counts as a map keyed by class name (for reports).
pub fn class_count_map(dataset: &Dataset) -> BTreeMap<String, u64> {
    dataset
        .task
        .classes()
        .iter()
        .zip(dataset.class_counts())
        .map(|(c, n)| (c.to_string(), n))
        .collect()
}
