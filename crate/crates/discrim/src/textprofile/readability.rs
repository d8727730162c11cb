//! Flesch Reading Ease scoring with a heuristic syllable counter.

use super::tokenize::tokenize;
use super::{scope_samples, Scope, TextDataset};
use crate::error::{Error, Result};

/// Heuristic syllable count: contiguous vowel groups (a, e, i, o, u, y),
/// minus a silent trailing "e" unless the word ends in a consonant + "le",
/// with a minimum of one syllable per word.
pub(crate) fn syllables(word: &str) -> u32 {
    let chars: Vec<char> = word.chars().collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0u32;
    let mut in_group = false;
    for &c in &chars {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    if chars.last() == Some(&'e') {
        let n = chars.len();
        let consonant_le =
            n >= 3 && chars[n - 2] == 'l' && chars[n - 3].is_alphabetic() && !is_vowel(chars[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

/// Sentences are runs of terminal punctuation (`.`, `!`, `?`); text with none
/// counts as one sentence.
pub(crate) fn sentence_count(text: &str) -> u32 {
    let mut runs = 0u32;
    let mut in_run = false;
    for c in text.chars() {
        if matches!(c, '.' | '!' | '?') {
            if !in_run {
                runs += 1;
            }
            in_run = true;
        } else {
            in_run = false;
        }
    }
    runs.max(1)
}

/// Flesch Reading Ease of one sample:
/// `206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)`.
///
/// Words are tokens containing at least one alphanumeric character; `None`
/// when the sample has no words. Scores are passed through unclamped, so
/// pathological text can go negative.
pub fn sample_fre(text: &str) -> Option<f64> {
    let tokens = tokenize(text);
    let words: Vec<&String> =
        tokens.iter().filter(|t| t.chars().any(|c| c.is_alphanumeric())).collect();
    if words.is_empty() {
        return None;
    }
    let w = words.len() as f64;
    let s = sentence_count(text) as f64;
    let syl: u32 = words.iter().map(|t| syllables(t)).sum();
    Some(206.835 - 1.015 * (w / s) - 84.6 * (syl as f64 / w))
}

/// Mean Flesch Reading Ease over the scope and the fraction of scored
/// samples reading below 60 (the "hard to read" line). Samples without words
/// are skipped on both counts.
pub fn flesch(d: &TextDataset, scope: Scope) -> Result<(f64, f64)> {
    let samples = scope_samples(d, scope)?;
    let scores: Vec<f64> = samples.iter().filter_map(|s| sample_fre(&s.text)).collect();
    if scores.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no scorable samples in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let below = scores.iter().filter(|&&f| f < 60.0).count() as f64 / scores.len() as f64;
    Ok((mean, below))
}
