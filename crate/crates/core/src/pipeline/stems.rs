use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{data_lines, normalize_sentence, read_text};
use crate::error::{Error, Result};
use crate::symbols::{Sememe, SememeSet};

/// Maps surface words to sememes. Words not listed directly are tried with
/// each suffix rule, longest suffix first: `kicked` with `ed -> ""` becomes
/// `kick`. Irregular forms such as `saw -> SEE` are direct entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StemMap {
    direct: BTreeMap<String, Sememe>,
    suffix_rules: Vec<(String, String)>,
    function_words: BTreeSet<String>,
    /// Give function words empty semantics.
    pub zero_function_words: bool,
}

impl StemMap {
    /// An empty map with the rules `ies -> y`, `ing -> ""`, `ed -> ""`,
    /// `s -> ""`.
    pub fn with_default_rules() -> Self {
        let mut m = StemMap::default();
        m.set_suffix_rules([("ies", "y"), ("ing", ""), ("ed", ""), ("s", "")]);
        m
    }

    pub fn insert(&mut self, word: &str, sememe: Sememe) {
        self.direct.insert(word.to_lowercase(), sememe);
    }

    /// Replaces the suffix rules. They are kept longest suffix first; rules
    /// of equal length keep their given order.
    pub fn set_suffix_rules<S: Into<String>>(&mut self, rules: impl IntoIterator<Item = (S, S)>) {
        self.suffix_rules = rules
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        self.suffix_rules
            .sort_by_key(|(s, _)| std::cmp::Reverse(s.len()));
    }

    pub fn suffix_rules(&self) -> &[(String, String)] {
        &self.suffix_rules
    }

    pub fn set_function_words<S: AsRef<str>>(&mut self, words: impl IntoIterator<Item = S>) {
        self.function_words = words
            .into_iter()
            .map(|w| w.as_ref().to_lowercase())
            .collect();
    }

    pub fn direct(&self) -> impl Iterator<Item = (&str, &Sememe)> {
        self.direct.iter().map(|(w, s)| (w.as_str(), s))
    }

    /// The word's sememe, or `None` for a function word when zeroing is on.
    pub fn resolve(&self, word: &str) -> Option<Option<&Sememe>> {
        if self.zero_function_words && self.function_words.contains(word) {
            return Some(None);
        }
        if let Some(s) = self.direct.get(word) {
            return Some(Some(s));
        }
        self.suffix_rules.iter().find_map(|(suffix, replacement)| {
            let stem = word
                .strip_suffix(suffix.as_str())
                .filter(|s| !s.is_empty())?;
            self.direct.get(&format!("{stem}{replacement}")).map(Some)
        })
    }

    /// Parses `word \t SEMEME` lines.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut m = StemMap::with_default_rules();
        for (line, l) in data_lines(text) {
            let (word, sememe) = l
                .split_once('\t')
                .ok_or_else(|| Error::format(line, "expected word<TAB>SEMEME"))?;
            let sememe =
                Sememe::new(sememe.trim()).map_err(|e| Error::format(line, e.to_string()))?;
            m.insert(word.trim(), sememe);
        }
        Ok(m)
    }

    pub fn to_tsv(&self) -> String {
        self.direct
            .iter()
            .map(|(w, s)| format!("{w}\t{s}\n"))
            .collect()
    }

    /// Parses `suffix \t replacement` lines; a missing replacement is empty.
    pub fn rules_from_tsv(text: &str) -> Result<Vec<(String, String)>> {
        data_lines(text)
            .map(|(line, l)| {
                let (suffix, repl) = l.split_once('\t').unwrap_or((l, ""));
                let suffix = suffix.trim();
                if suffix.is_empty() {
                    return Err(Error::format(line, "empty suffix"));
                }
                Ok((suffix.to_string(), repl.trim().to_string()))
            })
            .collect()
    }

    pub fn rules_to_tsv(&self) -> String {
        self.suffix_rules
            .iter()
            .map(|(s, r)| format!("{s}\t{r}\n"))
            .collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_tsv(&read_text(path.as_ref())?)
    }

    pub fn load_rules(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let rules = Self::rules_from_tsv(&read_text(path.as_ref())?)?;
        self.set_suffix_rules(rules);
        Ok(())
    }

    /// Reads a one-word-per-line list and turns zeroing on.
    pub fn load_function_words(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let text = read_text(path.as_ref())?;
        self.set_function_words(data_lines(&text).map(|(_, l)| l.trim()));
        self.zero_function_words = true;
        Ok(())
    }
}

/// Union of the sememes of the sentence's words.
pub fn utterance_semantics(stems: &StemMap, sentence: &str) -> Result<SememeSet> {
    let mut out = SememeSet::new();
    for (position, token) in normalize_sentence(sentence).into_iter().enumerate() {
        match stems.resolve(&token) {
            Some(Some(s)) => {
                out.insert(s.clone());
            }
            Some(None) => {}
            None => return Err(Error::UnknownWord { token, position }),
        }
    }
    Ok(out)
}
