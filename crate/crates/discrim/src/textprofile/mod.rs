//! Intrinsic text-dataset features: length, label balance, lexical richness,
//! label-word association, perplexity, grammar errors, and readability, each
//! computed on the train split, the test split, and (for most) a squared
//! relative train/test gap called the interaction.

mod features;
mod grammar;
mod perplexity;
mod pmi;
mod readability;
mod scorers;
mod tokenize;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use features::{
    avg_length, basic_word_ratio, interaction, label_stats, sample_token_count, sample_ttr, ttr,
};
pub use grammar::{sample_grammar_ratio, sample_language_flag};
pub use pmi::{pmi, PmiOutcome};
pub use readability::{flesch, sample_fre};
pub use scorers::{
    grammar_error_ratio, language_mixedness, perplexity, Plugins, ScorerKind, ScorerPlugin,
};
pub use tokenize::tokenize;

/// Which side of a dataset a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

/// The split a feature operation reads.
pub type Scope = Split;

/// One labeled text sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextSample {
    pub id: String,
    pub text: String,
    pub label: String,
    pub split: Split,
}

/// A labeled dataset with train and test samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextDataset {
    pub dataset_id: String,
    pub samples: Vec<TextSample>,
}

impl TextDataset {
    /// Build a dataset, rejecting duplicate sample ids, whitespace-only
    /// texts, and empty labels.
    pub fn new(dataset_id: impl Into<String>, samples: Vec<TextSample>) -> Result<Self> {
        let dataset_id = dataset_id.into();
        let mut seen = HashSet::with_capacity(samples.len());
        for s in &samples {
            if s.text.trim().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "sample `{}` has empty text",
                    s.id
                )));
            }
            if s.label.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "sample `{}` has an empty label",
                    s.id
                )));
            }
            if !seen.insert(s.id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate sample id `{}`", s.id)));
            }
        }
        Ok(Self { dataset_id, samples })
    }

    /// Samples of one split, in stored order.
    pub fn scope(&self, scope: Scope) -> Vec<&TextSample> {
        self.samples.iter().filter(|s| s.split == scope).collect()
    }

    pub fn n_train(&self) -> usize {
        self.scope(Split::Train).len()
    }

    pub fn n_test(&self) -> usize {
        self.scope(Split::Test).len()
    }
}

/// Samples of one split, erroring when the split is empty.
pub(crate) fn scope_samples(d: &TextDataset, scope: Scope) -> Result<Vec<&TextSample>> {
    let samples = d.scope(scope);
    if samples.is_empty() {
        return Err(Error::InvalidInput(format!(
            "the {:?} scope of `{}` has no samples",
            scope, d.dataset_id
        )));
    }
    Ok(samples)
}

/// Named feature values for one dataset; a name that is absent means the
/// feature could not be computed (and is imputed downstream).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Canonical feature order used by tables and reports. Scope prefixes: `tr_`
/// train, `te_` test, `ix_` interaction.
pub const FEATURE_NAMES: [&str; 28] = [
    "tr_len", "te_len", "ix_len", "tr_lab", "tr_bal", "tr_basic", "te_basic", "tr_ttr", "te_ttr",
    "ix_ttr", "tr_lmix", "te_lmix", "ix_lmix", "tr_pmi", "te_pmi", "ix_pmi", "tr_r_pmi", "tr_ppl",
    "te_ppl", "tr_gerr", "te_gerr", "ix_gerr", "tr_fre", "te_fre", "ix_fre", "tr_r_fre",
    "te_r_fre", "ix_r_fre",
];

fn put3(fv: &mut FeatureVector, name: &str, tr: f64, te: f64) {
    fv.set(format!("tr_{}", name), tr);
    fv.set(format!("te_{}", name), te);
    if let Ok(ix) = interaction(tr, te) {
        fv.set(format!("ix_{}", name), ix);
    }
}

/// Extract the full feature vector of a dataset.
///
/// Length, type-token ratio, language mixedness, grammar errors, label-word
/// association, readability, and the hard-to-read share get train, test, and
/// interaction values; the basic-word ratio and perplexity get train and
/// test; label count, label balance, and the top-word share are train-only.
/// An interaction whose train-side value is zero is omitted rather than
/// emitted as zero. Both splits must be non-empty.
pub fn profile(
    d: &TextDataset,
    plugins: &Plugins,
    wordlist: &HashSet<String>,
) -> Result<FeatureVector> {
    let mut fv = FeatureVector::new();

    put3(&mut fv, "len", avg_length(d, Split::Train)?, avg_length(d, Split::Test)?);

    let (labels, balance) = label_stats(d, Split::Train)?;
    fv.set("tr_lab", labels as f64);
    fv.set("tr_bal", balance);

    fv.set("tr_basic", basic_word_ratio(d, Split::Train, wordlist)?);
    fv.set("te_basic", basic_word_ratio(d, Split::Test, wordlist)?);

    put3(&mut fv, "ttr", ttr(d, Split::Train)?, ttr(d, Split::Test)?);
    put3(
        &mut fv,
        "lmix",
        language_mixedness(d, Split::Train, &plugins.language)?,
        language_mixedness(d, Split::Test, &plugins.language)?,
    );

    let pmi_tr = pmi(d, Split::Train)?;
    let pmi_te = pmi(d, Split::Test)?;
    put3(&mut fv, "pmi", pmi_tr.phi_pmi, pmi_te.phi_pmi);
    fv.set("tr_r_pmi", pmi_tr.phi_r_pmi);

    fv.set("tr_ppl", perplexity(d, Split::Train, &plugins.perplexity)?);
    fv.set("te_ppl", perplexity(d, Split::Test, &plugins.perplexity)?);

    put3(
        &mut fv,
        "gerr",
        grammar_error_ratio(d, Split::Train, &plugins.grammar)?,
        grammar_error_ratio(d, Split::Test, &plugins.grammar)?,
    );

    let (fre_tr, r_fre_tr) = flesch(d, Split::Train)?;
    let (fre_te, r_fre_te) = flesch(d, Split::Test)?;
    put3(&mut fv, "fre", fre_tr, fre_te);
    put3(&mut fv, "r_fre", r_fre_tr, r_fre_te);

    Ok(fv)
}
