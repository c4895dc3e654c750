use std::collections::BTreeMap;
use std::path::Path;

use super::{data_lines, normalize_sentence, read_text};
use crate::error::{Error, Result};
use crate::symbols::{phones_from_str, Phone};

/// One fixed pronunciation per lowercased word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PronunciationTable {
    words: BTreeMap<String, Vec<Phone>>,
}

impl PronunciationTable {
    pub fn insert(&mut self, word: &str, phones: Vec<Phone>) -> Result<()> {
        if phones.is_empty() {
            return Err(Error::EmptyPhones);
        }
        if word.is_empty() || word.contains(char::is_whitespace) {
            return Err(Error::InvalidConfig(format!("bad table word {word:?}")));
        }
        self.words.insert(word.to_lowercase(), phones);
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&[Phone]> {
        self.words.get(word).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Phone])> {
        self.words.iter().map(|(w, p)| (w.as_str(), p.as_slice()))
    }

    /// Parses `word \t phones` lines.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut table = PronunciationTable::default();
        for (line, l) in data_lines(text) {
            let (word, phones) = l
                .split_once('\t')
                .ok_or_else(|| Error::format(line, "expected word<TAB>phones"))?;
            let phones = phones_from_str(phones).map_err(|e| Error::format(line, e.to_string()))?;
            table
                .insert(word.trim(), phones)
                .map_err(|e| Error::format(line, e.to_string()))?;
        }
        Ok(table)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, phones) in &self.words {
            let phones: Vec<&str> = phones.iter().map(Phone::as_str).collect();
            out.push_str(&format!("{word}\t{}\n", phones.join(" ")));
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_tsv(&read_text(path.as_ref())?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        super::write_text(path.as_ref(), &self.to_tsv())
    }
}

/// Concatenates the pronunciations of the sentence's words, with no
/// boundary markers.
pub fn g2p_transcribe(table: &PronunciationTable, sentence: &str) -> Result<Vec<Phone>> {
    let mut out = Vec::new();
    for (position, token) in normalize_sentence(sentence).into_iter().enumerate() {
        match table.get(&token) {
            Some(phones) => out.extend_from_slice(phones),
            None => return Err(Error::UnknownWord { token, position }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PronunciationTable {
        PronunciationTable::from_tsv(
            "nina\tn i n a\nyou\ty u\nkicked\tk I k t\noff\tO f\nthe\tD @\nsock\ts A k\n",
        )
        .unwrap()
    }

    fn phones(s: &str) -> Vec<Phone> {
        phones_from_str(s).unwrap()
    }

    #[test]
    fn nina() {
        assert_eq!(
            g2p_transcribe(&table(), "Nina.").unwrap(),
            phones("n i n a")
        );
    }

    #[test]
    fn sock_sentence() {
        assert_eq!(
            g2p_transcribe(&table(), "you kicked off the sock").unwrap(),
            phones("y u k I k t O f D @ s A k")
        );
        assert!(g2p_transcribe(&table(), "").unwrap().is_empty());
    }

    #[test]
    fn concatenation() {
        let t = table();
        let a = g2p_transcribe(&t, "you kicked").unwrap();
        let b = g2p_transcribe(&t, "off the sock").unwrap();
        let ab = g2p_transcribe(&t, "you kicked off the sock").unwrap();
        assert_eq!([a, b].concat(), ab);
    }

    #[test]
    fn oov_names_token_and_position() {
        match g2p_transcribe(&table(), "you kicked the ball") {
            Err(Error::UnknownWord { token, position }) => {
                assert_eq!(token, "ball");
                assert_eq!(position, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_and_bad_lines() {
        let t = table();
        assert_eq!(PronunciationTable::from_tsv(&t.to_tsv()).unwrap(), t);
        assert!(matches!(
            PronunciationTable::from_tsv("nina\tn i n a\nbad line\n"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(PronunciationTable::from_tsv("x\t\n").is_err());
    }
}
