//! Phone and sememe symbols.
//!
//! Phones are opaque tokens compared by exact string equality. Multi-character
//! tokens such as `dh` are allowed. The characters `.`, `|`, `,` and `:` are
//! reserved as separators by the canonical entry identifier and the file
//! formats, so they may not appear inside a phone.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const RESERVED: [char; 4] = ['.', '|', ',', ':'];

/// One speech-sound token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phone(String);

impl Phone {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        let valid = !symbol.is_empty()
            && symbol
                .chars()
                .all(|c| !c.is_whitespace() && !c.is_control() && !RESERVED.contains(&c));
        if valid {
            Ok(Phone(symbol))
        } else {
            Err(Error::InvalidPhone(symbol))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Phone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Phone::new(s)
    }
}

/// An atomic meaning symbol standing for a word paradigm, e.g. `SEE` for
/// "see", "saw" and "seeing".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sememe(String);

impl Sememe {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        let valid = !symbol.is_empty()
            && symbol
                .bytes()
                .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'_');
        if valid {
            Ok(Sememe(symbol))
        } else {
            Err(Error::InvalidSememe(symbol))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sememe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Sememe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Sememe::new(s)
    }
}

pub type SememeSet = BTreeSet<Sememe>;

/// Splits on whitespace and parses every token as a phone.
pub fn phones_from_str(s: &str) -> Result<Vec<Phone>> {
    s.split_whitespace().map(Phone::new).collect()
}

/// Splits on whitespace and parses every token as a sememe. Duplicates
/// collapse.
pub fn sememes_from_str(s: &str) -> Result<SememeSet> {
    s.split_whitespace().map(Sememe::new).collect()
}

pub(crate) fn join_phones(phones: &[Phone], sep: &str) -> String {
    let mut out = String::new();
    for (i, p) in phones.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(p.as_str());
    }
    out
}

pub(crate) fn join_sememes(sememes: &SememeSet, sep: &str) -> String {
    let mut out = String::new();
    for (i, s) in sememes.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(s.as_str());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phone_rules() {
        assert!(Phone::new("dh").is_ok());
        assert!(Phone::new("@").is_ok());
        assert!(Phone::new("").is_err());
        assert!(Phone::new("a b").is_err());
        assert!(Phone::new("a\tb").is_err());
        assert!(Phone::new("a.b").is_err());
        assert!(Phone::new("a|").is_err());
    }

    #[test]
    fn sememe_rules() {
        assert!(Sememe::new("NINA").is_ok());
        assert!(Sememe::new("W_07").is_ok());
        assert!(Sememe::new("nina").is_err());
        assert!(Sememe::new("").is_err());
        assert!(Sememe::new("A B").is_err());
    }

    #[test]
    fn sememe_parsing_collapses_duplicates() {
        let set = sememes_from_str("THE DOG SEE THE DOG").unwrap();
        assert_eq!(join_sememes(&set, " "), "DOG SEE THE");
    }
}
