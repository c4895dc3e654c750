//! Corpus construction: transcription by lookup table, stem-based
//! semantics, corpus files and a synthetic corpus generator.

mod corpus;
mod g2p;
mod stems;
mod synth;

use std::fs;
use std::path::Path;

pub use corpus::{
    corpus_to_string, parse_corpus, read_corpus, write_corpus, CorpusRecord, GoldSpan,
};
pub use g2p::{g2p_transcribe, PronunciationTable};
pub use stems::{utterance_semantics, StemMap};
pub use synth::{generate_synthetic, GeneratorConfig, Suffix, SyntheticCorpus};

use crate::error::{Error, Result};

/// Lowercases a sentence and splits it into word tokens. The characters
/// `. , ? ! "` are dropped everywhere; apostrophes only at word edges, so
/// `rabbit's` stays one token.
pub fn normalize_sentence(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|tok| {
            let tok: String = tok
                .chars()
                .filter(|c| !matches!(c, '.' | ',' | '?' | '!' | '"'))
                .flat_map(char::to_lowercase)
                .collect();
            tok.trim_matches('\'').to_string()
        })
        .filter(|tok| !tok.is_empty())
        .collect()
}

/// Non-empty lines not starting with `#`, with 1-based line numbers. A line
/// holding only a tab is data: the empty utterance.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize_sentence("Nina."), ["nina"]);
        assert_eq!(
            normalize_sentence("The rabbit's in a boat!"),
            ["the", "rabbit's", "in", "a", "boat"]
        );
        assert_eq!(normalize_sentence("  'Hi,' \"you\" ? "), ["hi", "you"]);
        assert!(normalize_sentence("").is_empty());
    }
}
