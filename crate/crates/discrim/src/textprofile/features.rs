//! Plugin-free dataset features: length, label statistics, basic-word ratio,
//! type-token ratio, and the train/test interaction term.

use std::collections::{BTreeMap, HashSet};

use super::tokenize::tokenize;
use super::{scope_samples, Scope, TextDataset};
use crate::error::{Error, Result};

/// Token count of one sample.
pub fn sample_token_count(text: &str) -> usize {
    tokenize(text).len()
}

/// Type-token ratio of one sample; `None` when it has no tokens.
pub fn sample_ttr(text: &str) -> Option<f64> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return None;
    }
    let types: HashSet<&String> = tokens.iter().collect();
    Some(types.len() as f64 / tokens.len() as f64)
}

/// Mean token count per sample within the scope; token-less samples count as
/// length zero.
pub fn avg_length(d: &TextDataset, scope: Scope) -> Result<f64> {
    let samples = scope_samples(d, scope)?;
    let total: usize = samples.iter().map(|s| sample_token_count(&s.text)).sum();
    Ok(total as f64 / samples.len() as f64)
}

/// Distinct label count and label balance of the scope.
///
/// Balance is `(H - log2 K) / log2 K` where `H` is the base-2 Shannon entropy
/// of the empirical label distribution: 0 when labels are uniform, negative
/// when skewed. A single-label scope is pinned to -1 (maximal imbalance).
pub fn label_stats(d: &TextDataset, scope: Scope) -> Result<(usize, f64)> {
    let samples = scope_samples(d, scope)?;
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for s in &samples {
        *counts.entry(s.label.as_str()).or_insert(0) += 1;
    }
    let k = counts.len();
    if k == 1 {
        return Ok((1, -1.0));
    }
    let n = samples.len() as f64;
    let entropy: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    let ideal = (k as f64).log2();
    Ok((k, (entropy - ideal) / ideal))
}

/// Fraction of the scope's tokens that appear in the wordlist.
pub fn basic_word_ratio(
    d: &TextDataset,
    scope: Scope,
    wordlist: &HashSet<String>,
) -> Result<f64> {
    let samples = scope_samples(d, scope)?;
    let mut total = 0u64;
    let mut hits = 0u64;
    for s in &samples {
        for tok in tokenize(&s.text) {
            total += 1;
            if wordlist.contains(&tok) {
                hits += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::InvalidInput(format!(
            "no tokens in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }
    Ok(hits as f64 / total as f64)
}

/// Per-sample type-token ratio averaged over the scope; token-less samples
/// are skipped.
pub fn ttr(d: &TextDataset, scope: Scope) -> Result<f64> {
    let samples = scope_samples(d, scope)?;
    let ratios: Vec<f64> = samples.iter().filter_map(|s| sample_ttr(&s.text)).collect();
    if ratios.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no tokenizable samples in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Squared relative train/test gap `((tr - te) / tr)^2`; undefined when the
/// train-side value is zero.
pub fn interaction(tr_value: f64, te_value: f64) -> Result<f64> {
    if tr_value == 0.0 {
        return Err(Error::UndefinedInteraction);
    }
    let rel = (tr_value - te_value) / tr_value;
    Ok(rel * rel)
}
