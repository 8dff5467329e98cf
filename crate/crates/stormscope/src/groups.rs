//! Stance-group dynamics: distributions over time, linguistic contrasts
//! between groups, and subgroup breakdowns.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{CoarseStance, Corpus};
use crate::features::{
    extract_features, FeatureVector, Weighting, FEATURE_NAMES, N_COUNT_FEATURES,
};
use crate::lexicon::LexiconSet;
use crate::timeline::TimelineSeries;

#[derive(Debug, Error)]
pub enum GroupsError {
    #[error("no labeled messages; group distribution is undefined")]
    NoLabeledMessages,
    #[error("group {0} has no messages")]
    EmptyGroup(CoarseStance),
}

/// Per-bin stance fractions over labeled messages. Bins without any
/// labeled message carry `None` — an explicit empty marker, not zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDistribution {
    pub bins: Vec<Option<BTreeMap<CoarseStance, f64>>>,
    /// Messages without a stance label, excluded from the fractions but
    /// never silently dropped.
    pub n_unlabeled: u64,
}

pub fn group_distribution(
    corpus: &Corpus,
    series: &TimelineSeries,
) -> Result<GroupDistribution, GroupsError> {
    let n = series.n_bins();
    let mut counts: Vec<BTreeMap<CoarseStance, u64>> = vec![BTreeMap::new(); n];
    let mut n_unlabeled = 0u64;
    let mut any_labeled = false;
    for (pos, m) in corpus.messages.iter().enumerate() {
        let Some(bin) = series.bin_of(pos, m) else {
            continue;
        };
        match &m.stance {
            Some(s) => {
                *counts[bin].entry(s.coarse).or_insert(0) += 1;
                any_labeled = true;
            }
            None => n_unlabeled += 1,
        }
    }
    if !any_labeled {
        return Err(GroupsError::NoLabeledMessages);
    }
    let bins = counts
        .into_iter()
        .map(|bin| {
            let total: u64 = bin.values().sum();
            if total == 0 {
                None
            } else {
                Some(
                    bin.into_iter()
                        .map(|(k, v)| (k, v as f64 / total as f64))
                        .collect(),
                )
            }
        })
        .collect();
    Ok(GroupDistribution { bins, n_unlabeled })
}

/// One row of a group contrast: group-level per-token rates, their
/// difference, and Cohen's d over per-message rates. `cohens_d` is `None`
/// when the pooled standard deviation is zero (degenerate).
#[derive(Debug, Clone, Serialize)]
pub struct FeatureContrast {
    pub feature: &'static str,
    pub rate_a: f64,
    pub rate_b: f64,
    pub diff: f64,
    pub cohens_d: Option<f64>,
}

/// Contrast the feature profiles of two stance groups.
///
/// For each of the 35 features: group rates are per-token
/// (`sum count / sum tokens`), except `avg_sentence_length` which is
/// message-averaged. Cohen's d is computed over per-message per-token
/// rates with the pooled standard deviation. Output sorted by |d|
/// descending, degenerate rows last.
pub fn contrast_groups(
    corpus: &Corpus,
    lexicons: &LexiconSet,
    a: CoarseStance,
    b: CoarseStance,
) -> Result<Vec<FeatureContrast>, GroupsError> {
    let vectors_of = |stance: CoarseStance| -> Vec<FeatureVector> {
        corpus
            .messages
            .iter()
            .filter(|m| m.stance.as_ref().is_some_and(|s| s.coarse == stance))
            .map(|m| extract_features(m, lexicons))
            .collect()
    };
    let va = vectors_of(a);
    let vb = vectors_of(b);
    if va.is_empty() {
        return Err(GroupsError::EmptyGroup(a));
    }
    if vb.is_empty() {
        return Err(GroupsError::EmptyGroup(b));
    }

    let agg_a = crate::features::aggregate_features(&va, Weighting::PerToken).unwrap();
    let agg_b = crate::features::aggregate_features(&vb, Weighting::PerToken).unwrap();

    let rates_a: Vec<[f64; N_COUNT_FEATURES + 1]> =
        va.iter().map(|v| v.per_token_rates()).collect();
    let rates_b: Vec<[f64; N_COUNT_FEATURES + 1]> =
        vb.iter().map(|v| v.per_token_rates()).collect();

    let mut rows = Vec::with_capacity(N_COUNT_FEATURES + 1);
    for f in 0..=N_COUNT_FEATURES {
        let (group_rate_a, group_rate_b) = if f == N_COUNT_FEATURES {
            (agg_a.avg_sentence_length, agg_b.avg_sentence_length)
        } else {
            (agg_a.rates[f], agg_b.rates[f])
        };
        let xs: Vec<f64> = rates_a.iter().map(|r| r[f]).collect();
        let ys: Vec<f64> = rates_b.iter().map(|r| r[f]).collect();
        let d = cohens_d(&xs, &ys);
        rows.push(FeatureContrast {
            feature: FEATURE_NAMES[f],
            rate_a: group_rate_a,
            rate_b: group_rate_b,
            diff: group_rate_a - group_rate_b,
            cohens_d: d,
        });
    }
    rows.sort_by(|x, y| {
        let dx = x.cohens_d.map(f64::abs);
        let dy = y.cohens_d.map(f64::abs);
        match (dx, dy) {
            (Some(dx), Some(dy)) => dy.partial_cmp(&dx).unwrap_or(std::cmp::Ordering::Equal),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    });
    Ok(rows)
}

fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() < 2 {
        0.0
    } else {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    };
    (mean, var)
}

/// Cohen's d with pooled standard deviation; `None` when degenerate.
fn cohens_d(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() + ys.len() < 3 {
        return None;
    }
    let (ma, va) = mean_and_var(xs);
    let (mb, vb) = mean_and_var(ys);
    let na = xs.len() as f64;
    let nb = ys.len() as f64;
    let pooled = (((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0)).sqrt();
    if pooled == 0.0 {
        None
    } else {
        Some((ma - mb) / pooled)
    }
}

/// Contrast CSV: `feature,rate_a,rate_b,diff,d` ("degenerate" when d is
/// undefined).
pub fn contrast_csv(rows: &[FeatureContrast]) -> String {
    let mut out = String::from("feature,rate_a,rate_b,diff,d\n");
    for r in rows {
        let d = r
            .cohens_d
            .map(|d| d.to_string())
            .unwrap_or_else(|| "degenerate".to_string());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.feature, r.rate_a, r.rate_b, r.diff, d
        ));
    }
    out
}

/// Counts and per-bin trajectories of free-form stance subgroups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupBreakdown {
    pub totals: BTreeMap<String, u64>,
    pub per_bin: BTreeMap<String, Vec<u64>>,
}

pub fn subgroup_breakdown(corpus: &Corpus, series: &TimelineSeries) -> SubgroupBreakdown {
    let n = series.n_bins();
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    let mut per_bin: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for (pos, m) in corpus.messages.iter().enumerate() {
        let Some(sub) = m.stance.as_ref().and_then(|s| s.sub.clone()) else {
            continue;
        };
        *totals.entry(sub.clone()).or_insert(0) += 1;
        if let Some(bin) = series.bin_of(pos, m) {
            per_bin.entry(sub).or_insert_with(|| vec![0; n])[bin] += 1;
        }
    }
    SubgroupBreakdown { totals, per_bin }
}

/// Distribution CSV: `bin_start` then one fraction column per stance;
/// empty bins render as `empty` markers.
pub fn distribution_csv(series: &TimelineSeries, dist: &GroupDistribution) -> String {
    let mut out = String::from("bin_start");
    for s in CoarseStance::ALL {
        out.push(',');
        out.push_str(s.as_str());
    }
    out.push('\n');
    for (i, bin) in dist.bins.iter().enumerate() {
        out.push_str(&series.bin_label(i));
        match bin {
            None => {
                for _ in CoarseStance::ALL {
                    out.push_str(",empty");
                }
            }
            Some(fracs) => {
                for s in CoarseStance::ALL {
                    out.push(',');
                    out.push_str(&fracs.get(&s).copied().unwrap_or(0.0).to_string());
                }
            }
        }
        out.push('\n');
    }
    out
}
