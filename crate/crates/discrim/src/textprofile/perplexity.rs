//! Bigram language model with add-one smoothing, the built-in stand-in for a
//! neural perplexity scorer.

use std::collections::BTreeMap;

use super::tokenize::tokenize;

/// Bigram model trained on one token stream. The vocabulary is the set of
/// training token types plus an unknown-word symbol; a begin-of-sentence
/// symbol serves as context only and is never predicted.
#[derive(Debug, Clone)]
pub(crate) struct BigramModel {
    ids: BTreeMap<String, usize>,
    /// Count of each context id on the training data (tokens, unknown, BOS).
    context_counts: Vec<u64>,
    pair_counts: BTreeMap<(usize, usize), u64>,
    /// Smoothing denominator: vocabulary size including the unknown symbol.
    vocab_size: usize,
}

impl BigramModel {
    /// Train on the token sequences of the given samples, in order.
    pub(crate) fn train<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let sequences: Vec<Vec<String>> = texts.into_iter().map(tokenize).collect();
        let mut ids = BTreeMap::new();
        for seq in &sequences {
            for tok in seq {
                let next = ids.len();
                ids.entry(tok.clone()).or_insert(next);
            }
        }
        let unk = ids.len();
        let bos = unk + 1;
        let mut context_counts = vec![0u64; bos + 1];
        let mut pair_counts = BTreeMap::new();
        for seq in &sequences {
            let mut prev = bos;
            for tok in seq {
                let id = ids[tok];
                *pair_counts.entry((prev, id)).or_insert(0) += 1;
                context_counts[prev] += 1;
                prev = id;
            }
        }
        Self { ids, context_counts, pair_counts, vocab_size: unk + 1 }
    }

    fn id_of(&self, token: &str) -> usize {
        self.ids.get(token).copied().unwrap_or(self.ids.len())
    }

    /// Perplexity of one sample: `exp(-(1/N) * sum ln p(w_t | w_{t-1}))`
    /// with the first token conditioned on begin-of-sentence. `None` for
    /// token-less samples.
    pub(crate) fn sample_perplexity(&self, text: &str) -> Option<f64> {
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return None;
        }
        let bos = self.ids.len() + 1;
        let mut ln_sum = 0.0;
        let mut prev = bos;
        for tok in &tokens {
            let id = self.id_of(tok);
            let pair = self.pair_counts.get(&(prev, id)).copied().unwrap_or(0);
            let ctx = self.context_counts[prev];
            let p = (pair as f64 + 1.0) / (ctx as f64 + self.vocab_size as f64);
            ln_sum += p.ln();
            prev = id;
        }
        Some((-(ln_sum / tokens.len() as f64)).exp())
    }
}
