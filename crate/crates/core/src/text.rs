//! Canonical tokenizer shared by every text feature.

use alloc::string::String;
use alloc::vec::Vec;

/// Lowercases and splits on every run of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_with(text, true)
}

pub fn tokenize_with(text: &str, lowercase: bool) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            if lowercase {
                current.extend(ch.to_lowercase());
            } else {
                current.push(ch);
            }
        } else if !current.is_empty() {
            tokens.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn splits_on_punctuation_and_lowercases() {
        assert_eq!(tokenize("I did not."), vec!["i", "did", "not"]);
        assert_eq!(
            tokenize("by over $5 trillion -- wow"),
            vec!["by", "over", "5", "trillion", "wow"]
        );
        assert_eq!(tokenize("they've"), vec!["they", "ve"]);
        assert!(tokenize("  ...  ").is_empty());
    }

    #[test]
    fn case_can_be_kept() {
        assert_eq!(tokenize_with("Donald Trump", false), vec!["Donald", "Trump"]);
    }
}
