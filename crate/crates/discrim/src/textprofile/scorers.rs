//! Pluggable per-sample scorers. Each external-model feature (perplexity,
//! grammar errors, language mixedness) can run on a simple built-in heuristic
//! or on precomputed per-sample scores supplied from outside.

use std::collections::BTreeMap;

use super::grammar::{sample_grammar_ratio, sample_language_flag};
use super::perplexity::BigramModel;
use super::{scope_samples, Scope, Split, TextDataset};
use crate::error::{Error, Result};

/// Which feature a scorer feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerKind {
    Perplexity,
    Grammar,
    LanguageId,
}

impl ScorerKind {
    fn label(self) -> &'static str {
        match self {
            ScorerKind::Perplexity => "perplexity",
            ScorerKind::Grammar => "grammar",
            ScorerKind::LanguageId => "language_id",
        }
    }
}

/// A per-sample scorer: either the built-in heuristic or a table of
/// precomputed scores keyed by sample id.
///
/// Precomputed rows carry one value per sample (`[perplexity]` or
/// `[flag]`), except grammar rows which carry `[errors, words]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorerPlugin {
    kind: ScorerKind,
    scores: Option<BTreeMap<String, Vec<f64>>>,
}

impl ScorerPlugin {
    pub fn builtin(kind: ScorerKind) -> Self {
        Self { kind, scores: None }
    }

    /// Wrap precomputed rows, validating arity and value ranges per kind and
    /// rejecting duplicate sample ids.
    pub fn precomputed(
        kind: ScorerKind,
        rows: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Result<Self> {
        let mut scores = BTreeMap::new();
        for (id, values) in rows {
            match kind {
                ScorerKind::Perplexity => {
                    if values.len() != 1 || !values[0].is_finite() {
                        return Err(Error::Malformed(format!(
                            "perplexity row `{}` needs one finite value",
                            id
                        )));
                    }
                }
                ScorerKind::Grammar => {
                    if values.len() != 2
                        || values.iter().any(|v| !v.is_finite() || *v < 0.0)
                        || values[0] > values[1]
                    {
                        return Err(Error::Malformed(format!(
                            "grammar row `{}` needs errors <= words, both nonnegative",
                            id
                        )));
                    }
                }
                ScorerKind::LanguageId => {
                    if values.len() != 1 || !(values[0] == 0.0 || values[0] == 1.0) {
                        return Err(Error::Malformed(format!(
                            "language row `{}` needs a single 0/1 flag",
                            id
                        )));
                    }
                }
            }
            if scores.insert(id.clone(), values).is_some() {
                return Err(Error::Malformed(format!("duplicate sample id `{}`", id)));
            }
        }
        Ok(Self { kind, scores: Some(scores) })
    }

    pub fn kind(&self) -> ScorerKind {
        self.kind
    }

    pub fn is_builtin(&self) -> bool {
        self.scores.is_none()
    }

    fn expect_kind(&self, kind: ScorerKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidInput(format!(
                "expected a {} scorer, got {}",
                kind.label(),
                self.kind.label()
            )));
        }
        Ok(())
    }

    fn lookup(&self, id: &str) -> Result<&[f64]> {
        let scores = self.scores.as_ref().expect("lookup on a builtin scorer");
        scores.get(id).map(|v| v.as_slice()).ok_or_else(|| {
            Error::Malformed(format!(
                "precomputed {} scores are missing sample `{}`",
                self.kind.label(),
                id
            ))
        })
    }
}

/// Scorer bundle used by the full dataset profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Plugins {
    pub perplexity: ScorerPlugin,
    pub grammar: ScorerPlugin,
    pub language: ScorerPlugin,
}

impl Default for Plugins {
    fn default() -> Self {
        Self {
            perplexity: ScorerPlugin::builtin(ScorerKind::Perplexity),
            grammar: ScorerPlugin::builtin(ScorerKind::Grammar),
            language: ScorerPlugin::builtin(ScorerKind::LanguageId),
        }
    }
}

/// Fraction of the scope's samples flagged as containing another language.
pub fn language_mixedness(d: &TextDataset, scope: Scope, plugin: &ScorerPlugin) -> Result<f64> {
    plugin.expect_kind(ScorerKind::LanguageId)?;
    let samples = scope_samples(d, scope)?;
    let mut flagged = 0u64;
    for s in &samples {
        let hit = if plugin.is_builtin() {
            sample_language_flag(&s.text)
        } else {
            plugin.lookup(&s.id)?[0] == 1.0
        };
        if hit {
            flagged += 1;
        }
    }
    Ok(flagged as f64 / samples.len() as f64)
}

/// Mean per-sample perplexity over the scope.
///
/// The built-in scorer is a bigram model with add-one smoothing trained on
/// the dataset's train split regardless of which scope is scored; token-less
/// samples are skipped. Precomputed mode averages the supplied values over
/// every sample in the scope.
pub fn perplexity(d: &TextDataset, scope: Scope, plugin: &ScorerPlugin) -> Result<f64> {
    plugin.expect_kind(ScorerKind::Perplexity)?;
    let samples = scope_samples(d, scope)?;
    let values: Vec<f64> = if plugin.is_builtin() {
        let train = scope_samples(d, Split::Train).map_err(|_| {
            Error::InvalidInput(format!(
                "built-in perplexity needs train samples in `{}` to fit on",
                d.dataset_id
            ))
        })?;
        let model = BigramModel::train(train.iter().map(|s| s.text.as_str()));
        samples.iter().filter_map(|s| model.sample_perplexity(&s.text)).collect()
    } else {
        let mut v = Vec::with_capacity(samples.len());
        for s in &samples {
            v.push(plugin.lookup(&s.id)?[0]);
        }
        v
    };
    if values.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no tokenizable samples in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean per-sample grammar-error ratio over the scope.
///
/// Built-in mode flags immediate duplicates and misused articles; samples
/// without tokens (or precomputed rows with zero words) are skipped.
pub fn grammar_error_ratio(d: &TextDataset, scope: Scope, plugin: &ScorerPlugin) -> Result<f64> {
    plugin.expect_kind(ScorerKind::Grammar)?;
    let samples = scope_samples(d, scope)?;
    let mut ratios = Vec::with_capacity(samples.len());
    for s in &samples {
        let ratio = if plugin.is_builtin() {
            sample_grammar_ratio(&s.text)
        } else {
            let row = plugin.lookup(&s.id)?;
            if row[1] == 0.0 {
                None
            } else {
                Some(row[0] / row[1])
            }
        };
        if let Some(r) = ratio {
            ratios.push(r);
        }
    }
    if ratios.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no scorable samples in the {:?} scope of `{}`",
            scope, d.dataset_id
        )));
    }
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprofile::TextSample;
    use approx::assert_abs_diff_eq;

    fn dataset(rows: &[(&str, &str, Split)]) -> TextDataset {
        let samples = rows
            .iter()
            .enumerate()
            .map(|(i, (text, label, split))| TextSample {
                id: format!("s{}", i),
                text: text.to_string(),
                label: label.to_string(),
                split: *split,
            })
            .collect();
        TextDataset { dataset_id: "toy".into(), samples }
    }

    #[test]
    fn builtin_language_on_ascii_corpus_is_zero() {
        let d = dataset(&[("plain text", "x", Split::Train), ("more text", "x", Split::Train)]);
        let p = ScorerPlugin::builtin(ScorerKind::LanguageId);
        assert_eq!(language_mixedness(&d, Scope::Train, &p).unwrap(), 0.0);
    }

    #[test]
    fn builtin_language_on_foreign_corpus_is_one() {
        let d = dataset(&[("привет мир", "x", Split::Train), ("你好 世界", "x", Split::Train)]);
        let p = ScorerPlugin::builtin(ScorerKind::LanguageId);
        assert_eq!(language_mixedness(&d, Scope::Train, &p).unwrap(), 1.0);
    }

    #[test]
    fn precomputed_language_flags_average() {
        let d = dataset(&[
            ("a", "x", Split::Train),
            ("b", "x", Split::Train),
            ("c", "x", Split::Train),
            ("d", "x", Split::Train),
        ]);
        let p = ScorerPlugin::precomputed(
            ScorerKind::LanguageId,
            (0..4).map(|i| (format!("s{}", i), vec![if i % 3 == 0 { 1.0 } else { 0.0 }])),
        )
        .unwrap();
        assert_eq!(language_mixedness(&d, Scope::Train, &p).unwrap(), 0.5);
    }

    #[test]
    fn builtin_perplexity_on_repeated_word() {
        let d = dataset(&[
            ("a", "x", Split::Train),
            ("a", "x", Split::Train),
            ("a", "x", Split::Train),
        ]);
        let p = ScorerPlugin::builtin(ScorerKind::Perplexity);
        assert_abs_diff_eq!(perplexity(&d, Scope::Train, &p).unwrap(), 1.25, epsilon = 1e-12);
    }

    #[test]
    fn builtin_perplexity_fits_on_train_when_scoring_test() {
        let d = dataset(&[
            ("the cat sat", "x", Split::Train),
            ("the cat sat", "x", Split::Test),
            ("entirely new words", "x", Split::Test),
        ]);
        let p = ScorerPlugin::builtin(ScorerKind::Perplexity);
        let tr = perplexity(&d, Scope::Train, &p).unwrap();
        let te = perplexity(&d, Scope::Test, &p).unwrap();
        // The test scope averages a seen sentence with an unseen one.
        assert!(te > tr, "test {} should exceed train {}", te, tr);
    }

    #[test]
    fn precomputed_perplexity_averages_values() {
        let d = dataset(&[("a", "x", Split::Train), ("b", "x", Split::Train)]);
        let p = ScorerPlugin::precomputed(
            ScorerKind::Perplexity,
            vec![("s0".to_string(), vec![10.0]), ("s1".to_string(), vec![30.0])],
        )
        .unwrap();
        assert_eq!(perplexity(&d, Scope::Train, &p).unwrap(), 20.0);
    }

    #[test]
    fn missing_precomputed_sample_is_malformed() {
        let d = dataset(&[("a", "x", Split::Train), ("b", "x", Split::Train)]);
        let p = ScorerPlugin::precomputed(
            ScorerKind::Perplexity,
            vec![("s0".to_string(), vec![10.0])],
        )
        .unwrap();
        assert!(matches!(
            perplexity(&d, Scope::Train, &p),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn builtin_grammar_averages_sample_ratios() {
        let d = dataset(&[
            ("the the cat", "x", Split::Train),
            ("a clean sentence", "x", Split::Train),
        ]);
        let p = ScorerPlugin::builtin(ScorerKind::Grammar);
        assert_abs_diff_eq!(
            grammar_error_ratio(&d, Scope::Train, &p).unwrap(),
            (1.0 / 3.0) / 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn precomputed_grammar_counts() {
        let d = dataset(&[("a", "x", Split::Train), ("b", "x", Split::Train)]);
        let p = ScorerPlugin::precomputed(
            ScorerKind::Grammar,
            vec![("s0".to_string(), vec![1.0, 4.0]), ("s1".to_string(), vec![0.0, 4.0])],
        )
        .unwrap();
        assert_eq!(grammar_error_ratio(&d, Scope::Train, &p).unwrap(), 0.125);
    }

    #[test]
    fn precomputed_validation_rejects_bad_rows() {
        assert!(ScorerPlugin::precomputed(
            ScorerKind::Grammar,
            vec![("s0".to_string(), vec![5.0, 4.0])],
        )
        .is_err());
        assert!(ScorerPlugin::precomputed(
            ScorerKind::LanguageId,
            vec![("s0".to_string(), vec![0.5])],
        )
        .is_err());
        assert!(ScorerPlugin::precomputed(
            ScorerKind::Perplexity,
            vec![("s0".to_string(), vec![f64::NAN])],
        )
        .is_err());
        assert!(ScorerPlugin::precomputed(
            ScorerKind::Perplexity,
            vec![
                ("s0".to_string(), vec![1.0]),
                ("s0".to_string(), vec![2.0]),
            ],
        )
        .is_err());
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let d = dataset(&[("a", "x", Split::Train)]);
        let p = ScorerPlugin::builtin(ScorerKind::Grammar);
        assert!(perplexity(&d, Scope::Train, &p).is_err());
        assert!(language_mixedness(&d, Scope::Train, &p).is_err());
    }
}
