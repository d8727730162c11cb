//! Deterministic Unicode-aware tokenization shared by every text feature.

use unicode_normalization::UnicodeNormalization;

/// Split text into lowercase tokens.
///
/// The text is NFC-normalized and lowercased, then split on whitespace.
/// Leading and trailing runs of non-alphanumeric characters are detached from
/// each unit into their own tokens, so `"sat."` becomes `["sat", "."]` while
/// interior punctuation stays put (`"don't"` is one token). A unit with no
/// alphanumeric characters at all is kept whole.
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized = text.nfc().collect::<String>().to_lowercase();
    let mut tokens = Vec::new();
    for unit in normalized.split_whitespace() {
        let chars: Vec<char> = unit.chars().collect();
        let Some(start) = chars.iter().position(|c| c.is_alphanumeric()) else {
            tokens.push(unit.to_string());
            continue;
        };
        let end = chars.iter().rposition(|c| c.is_alphanumeric()).unwrap();
        if start > 0 {
            tokens.push(chars[..start].iter().collect());
        }
        tokens.push(chars[start..=end].iter().collect());
        if end + 1 < chars.len() {
            tokens.push(chars[end + 1..].iter().collect());
        }
    }
    tokens
}
