//! Pointwise mutual information between labels and words, plus the share of
//! samples touched by the strongest label-associated words.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::tokenize::tokenize;
use super::{scope_samples, Scope, TextDataset};
use crate::error::Result;

/// PMI summary for one scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmiOutcome {
    /// Mean of the positive PMI values over all (label, word) pairs that
    /// co-occur at least once.
    pub phi_pmi: f64,
    /// Fraction of samples containing at least one top word of any label.
    pub phi_r_pmi: f64,
    /// Per label, the ten words with the highest PMI (ties broken
    /// lexicographically; fewer when the label has fewer co-occurring words).
    pub top_words: BTreeMap<String, Vec<String>>,
}

/// Token-level PMI between labels and words over one scope.
///
/// With `n` total tokens, `p(c)` is the fraction of tokens in label `c`,
/// `p(w)` the fraction equal to word `w`, and `p(c, w)` their joint; the PMI
/// of a pair is `ln(p(c, w) / (p(c) * p(w)))`. Positive values are summed and
/// divided by the number of pairs with nonzero joint count.
pub fn pmi(d: &TextDataset, scope: Scope) -> Result<PmiOutcome> {
    let samples = scope_samples(d, scope)?;

    let mut label_tokens: BTreeMap<&str, u64> = BTreeMap::new();
    let mut word_tokens: BTreeMap<String, u64> = BTreeMap::new();
    let mut joint: BTreeMap<(&str, String), u64> = BTreeMap::new();
    let mut sample_tokens: Vec<Vec<String>> = Vec::with_capacity(samples.len());
    let mut n_tokens = 0u64;
    for s in &samples {
        let tokens = tokenize(&s.text);
        for tok in &tokens {
            *label_tokens.entry(s.label.as_str()).or_insert(0) += 1;
            *word_tokens.entry(tok.clone()).or_insert(0) += 1;
            *joint.entry((s.label.as_str(), tok.clone())).or_insert(0) += 1;
            n_tokens += 1;
        }
        sample_tokens.push(tokens);
    }
    if n_tokens == 0 {
        return Err(crate::Error::InvalidInput(format!(
            "no tokens in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }

    let n = n_tokens as f64;
    let mut positive_sum = 0.0;
    let mut pair_count = 0u64;
    let mut scored: BTreeMap<&str, Vec<(String, f64)>> = BTreeMap::new();
    for ((label, word), &count) in &joint {
        let value =
            (count as f64 * n / (label_tokens[label] as f64 * word_tokens[word] as f64)).ln();
        pair_count += 1;
        if value > 0.0 {
            positive_sum += value;
        }
        scored.entry(label).or_default().push((word.clone(), value));
    }
    let phi_pmi = positive_sum / pair_count as f64;

    let mut top_words = BTreeMap::new();
    let mut top_set: BTreeSet<&str> = BTreeSet::new();
    for (label, mut words) in scored {
        words.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        words.truncate(10);
        top_words
            .insert(label.to_string(), words.into_iter().map(|(w, _)| w).collect::<Vec<_>>());
    }
    for words in top_words.values() {
        top_set.extend(words.iter().map(|w| w.as_str()));
    }
    let touched = sample_tokens
        .iter()
        .filter(|tokens| tokens.iter().any(|t| top_set.contains(t.as_str())))
        .count();
    let phi_r_pmi = touched as f64 / samples.len() as f64;

    Ok(PmiOutcome { phi_pmi, phi_r_pmi, top_words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprofile::{Split, TextSample};
    use approx::assert_abs_diff_eq;
    use std::collections::HashMap;

    fn dataset(rows: &[(&str, &str)]) -> TextDataset {
        let samples = rows
            .iter()
            .enumerate()
            .map(|(i, (text, label))| TextSample {
                id: format!("s{}", i),
                text: text.to_string(),
                label: label.to_string(),
                split: Split::Train,
            })
            .collect();
        TextDataset::new("toy", samples).unwrap()
    }

    /// Independent oracle: materialize every (label, word) count with plain
    /// hash maps and fold the definition directly.
    fn brute_force_phi_pmi(rows: &[(&str, &str)]) -> f64 {
        let mut by_label: HashMap<&str, u64> = HashMap::new();
        let mut by_word: HashMap<String, u64> = HashMap::new();
        let mut by_pair: HashMap<(&str, String), u64> = HashMap::new();
        let mut n = 0u64;
        for (text, label) in rows {
            for tok in tokenize(text) {
                *by_label.entry(label).or_insert(0) += 1;
                *by_word.entry(tok.clone()).or_insert(0) += 1;
                *by_pair.entry((label, tok)).or_insert(0) += 1;
                n += 1;
            }
        }
        let mut sum = 0.0;
        for ((label, word), &c) in &by_pair {
            let p_joint = c as f64 / n as f64;
            let p_label = by_label[label] as f64 / n as f64;
            let p_word = by_word[word] as f64 / n as f64;
            let v = (p_joint / (p_label * p_word)).ln();
            if v > 0.0 {
                sum += v;
            }
        }
        sum / by_pair.len() as f64
    }

    #[test]
    fn single_label_has_zero_pmi() {
        let d = dataset(&[("the cat sat", "pos"), ("a dog ran", "pos")]);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_eq!(out.phi_pmi, 0.0);
    }

    #[test]
    fn disjoint_balanced_vocabularies_give_ln_two() {
        // Two labels, disjoint 3-word vocabularies, uniform frequencies:
        // each co-occurring pair has PMI ln(2).
        let d = dataset(&[("aa bb cc", "x"), ("dd ee ff", "y")]);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_abs_diff_eq!(out.phi_pmi, 2.0f64.ln(), epsilon = 1e-12);
        assert_eq!(out.phi_r_pmi, 1.0);
        assert_eq!(out.top_words["x"], ["aa", "bb", "cc"]);
        assert_eq!(out.top_words["y"], ["dd", "ee", "ff"]);
    }

    #[test]
    fn matches_brute_force_on_a_mixed_corpus() {
        let rows = [
            ("the movie was great great fun", "pos"),
            ("a truly great film", "pos"),
            ("the movie was dull", "neg"),
            ("a dull and tired film", "neg"),
            ("not fun at all", "neg"),
        ];
        let d = dataset(&rows);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_abs_diff_eq!(out.phi_pmi, brute_force_phi_pmi(&rows), epsilon = 1e-9);
    }

    #[test]
    fn top_words_break_ties_lexicographically() {
        // All words in one label occur once: identical PMI, sorted by word.
        let d = dataset(&[("zz yy xx", "a"), ("mm nn oo", "b")]);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_eq!(out.top_words["a"], ["xx", "yy", "zz"]);
        assert_eq!(out.top_words["b"], ["mm", "nn", "oo"]);
    }

    #[test]
    fn shared_words_rank_below_exclusive_words() {
        let d = dataset(&[
            ("shared alpha alpha", "a"),
            ("shared beta beta", "b"),
        ]);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_eq!(out.top_words["a"][0], "alpha");
        assert_eq!(out.top_words["b"][0], "beta");
    }

    #[test]
    fn r_pmi_counts_samples_touched_by_any_top_word() {
        // "common" appears in both labels and is each label's only word
        // beyond one exclusive word, so every sample holds a top word.
        let d = dataset(&[("only1 common", "a"), ("only2 common", "b"), ("common", "a")]);
        let out = pmi(&d, Scope::Train).unwrap();
        assert_eq!(out.phi_r_pmi, 1.0);
    }

    #[test]
    fn empty_scope_is_an_error() {
        let d = dataset(&[("some text", "x")]);
        assert!(pmi(&d, Scope::Test).is_err());
    }

    #[test]
    fn invariant_to_sample_order() {
        let rows = [
            ("the cat sat on the mat", "pos"),
            ("dogs bark at night", "neg"),
            ("cats purr all day", "pos"),
        ];
        let mut reversed = rows;
        reversed.reverse();
        let a = pmi(&dataset(&rows), Scope::Train).unwrap();
        let b = pmi(&dataset(&reversed), Scope::Train).unwrap();
        assert_eq!(a.phi_pmi.to_bits(), b.phi_pmi.to_bits());
        assert_eq!(a.top_words, b.top_words);
    }
}
