//! Built-in heuristics for grammar-error flagging and foreign-script
//! detection, both defined per sample so datasets can also be partitioned by
//! these values.

use super::tokenize::tokenize;

/// Number of token positions flagged by the grammar heuristic.
///
/// Two rules: an immediately repeated token flags the second occurrence, and
/// a misused article ("a" before a vowel-initial word, "an" before a
/// consonant-initial word) flags the article. Each position is flagged at
/// most once, so the count never exceeds the token count.
pub(crate) fn grammar_flags(tokens: &[String]) -> usize {
    let mut flagged = vec![false; tokens.len()];
    for t in 1..tokens.len() {
        if tokens[t] == tokens[t - 1] {
            flagged[t] = true;
        }
        let prev = tokens[t - 1].as_str();
        if prev == "a" || prev == "an" {
            if let Some(c) = tokens[t].chars().next() {
                if c.is_ascii_alphabetic() {
                    let vowel = matches!(c, 'a' | 'e' | 'i' | 'o' | 'u');
                    if (prev == "a" && vowel) || (prev == "an" && !vowel) {
                        flagged[t - 1] = true;
                    }
                }
            }
        }
    }
    flagged.iter().filter(|&&f| f).count()
}

/// Grammar-error ratio of one sample: flagged tokens over total tokens.
/// `None` when the sample has no tokens.
pub fn sample_grammar_ratio(text: &str) -> Option<f64> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return None;
    }
    Some(grammar_flags(&tokens) as f64 / tokens.len() as f64)
}

/// Latin script: Basic Latin through Latin Extended-B, plus Latin Extended
/// Additional.
fn is_latin(c: char) -> bool {
    let cp = c as u32;
    cp < 0x0250 || (0x1E00..=0x1EFF).contains(&cp)
}

/// Whether a sample reads as containing another language: more than 20% of
/// its alphabetic characters fall outside the Latin script.
pub fn sample_language_flag(text: &str) -> bool {
    let mut total = 0u64;
    let mut foreign = 0u64;
    for c in text.chars().filter(|c| c.is_alphabetic()) {
        total += 1;
        if !is_latin(c) {
            foreign += 1;
        }
    }
    total > 0 && foreign as f64 > 0.2 * total as f64
}
