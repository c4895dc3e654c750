use std::fmt;

use crate::error::{Error, Result};
use crate::symbols::{join_phones, join_sememes, Phone, Sememe, SememeSet};

/// A word: a phone sequence, the sememes it carries, and usage counters
/// consulted by dictionary maintenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    phones: Vec<Phone>,
    sememes: SememeSet,
    /// Placements in accepted parses over the entry's lifetime.
    pub use_count: u64,
    /// Placements in accepted parses since the last maintenance pass.
    pub window_use_count: u64,
    /// Value of the dictionary's utterance counter when the entry was added.
    pub created_at: u64,
}

impl LexEntry {
    pub fn new(phones: Vec<Phone>, sememes: SememeSet) -> Result<Self> {
        if phones.is_empty() {
            return Err(Error::EmptyPhones);
        }
        Ok(LexEntry {
            phones,
            sememes,
            use_count: 0,
            window_use_count: 0,
            created_at: 0,
        })
    }

    /// Builds an entry from whitespace-separated phones and sememes, e.g.
    /// `LexEntry::parse("n i n a", "NINA")`.
    pub fn parse(phones: &str, sememes: &str) -> Result<Self> {
        LexEntry::new(
            crate::symbols::phones_from_str(phones)?,
            crate::symbols::sememes_from_str(sememes)?,
        )
    }

    pub fn phones(&self) -> &[Phone] {
        &self.phones
    }

    pub fn sememes(&self) -> &SememeSet {
        &self.sememes
    }

    pub fn len(&self) -> usize {
        self.phones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phones.is_empty()
    }

    pub fn canonical_id(&self) -> String {
        canonical_id(&self.phones, &self.sememes)
    }

    pub fn with_counters(mut self, use_count: u64, window_use_count: u64, created_at: u64) -> Self {
        self.use_count = use_count;
        self.window_use_count = window_use_count;
        self.created_at = created_at;
        self
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "/{}/ {{ {} }}",
            join_phones(&self.phones, ""),
            join_sememes(&self.sememes, " ")
        )
    }
}

/// `n.i.n.a|NINA`: phones joined by `.`, then `|`, then the sorted sememes
/// joined by `,`.
pub fn canonical_id(phones: &[Phone], sememes: &SememeSet) -> String {
    let mut id = join_phones(phones, ".");
    id.push('|');
    id.push_str(&join_sememes(sememes, ","));
    id
}

/// Inverse of [`canonical_id`].
pub fn parse_canonical_id(id: &str) -> Result<(Vec<Phone>, SememeSet)> {
    let (phones, sememes) = id
        .split_once('|')
        .ok_or_else(|| Error::InvalidConfig(format!("malformed entry id {id:?}")))?;
    if phones.is_empty() {
        return Err(Error::EmptyPhones);
    }
    let phones = phones
        .split('.')
        .map(Phone::new)
        .collect::<Result<Vec<_>>>()?;
    let sememes = if sememes.is_empty() {
        SememeSet::new()
    } else {
        sememes
            .split(',')
            .map(Sememe::new)
            .collect::<Result<SememeSet>>()?
    };
    Ok((phones, sememes))
}

/// One input: an unsegmented phone sequence and an unordered set of
/// sememes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Utterance {
    pub phones: Vec<Phone>,
    pub sememes: SememeSet,
}

impl Utterance {
    pub fn new(phones: Vec<Phone>, sememes: SememeSet) -> Self {
        Utterance { phones, sememes }
    }

    /// `Utterance::parse("n i n a", "NINA")`.
    pub fn parse(phones: &str, sememes: &str) -> Result<Self> {
        Ok(Utterance {
            phones: crate::symbols::phones_from_str(phones)?,
            sememes: crate::symbols::sememes_from_str(sememes)?,
        })
    }

    pub fn len(&self) -> usize {
        self.phones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phones.is_empty()
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "/{}/ {{ {} }}",
            join_phones(&self.phones, ""),
            join_sememes(&self.sememes, " ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use proptest::prelude::*;

    #[test]
    fn canonical_ids() {
        let nina = LexEntry::parse("n i n a", "NINA").unwrap();
        assert_eq!(nina.canonical_id(), "n.i.n.a|NINA");
        let a = LexEntry::parse("a", "").unwrap();
        assert_eq!(a.canonical_id(), "a|");
        let sock = LexEntry::parse("s A k", "SOCK").unwrap();
        assert_eq!(sock.canonical_id(), "s.A.k|SOCK");
        let kick_off = LexEntry::parse("k I k t O f", "OFF KICK").unwrap();
        assert_eq!(kick_off.canonical_id(), "k.I.k.t.O.f|KICK,OFF");
    }

    #[test]
    fn empty_phones_rejected() {
        assert!(matches!(LexEntry::parse("", "X"), Err(Error::EmptyPhones)));
    }

    #[test]
    fn canonical_id_round_trips() {
        for (p, s) in [("n i n a", "NINA"), ("a", ""), ("dh @", "THE A")] {
            let e = LexEntry::parse(p, s).unwrap();
            let (phones, sememes) = parse_canonical_id(&e.canonical_id()).unwrap();
            assert_eq!(phones, e.phones());
            assert_eq!(&sememes, e.sememes());
        }
    }

    #[test]
    fn canonical_id_injective_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let phones = ["a", "b", "ch", "dh", "@"];
        let sememes = ["A", "B", "CC", "D_1"];
        let mut pairs = HashSet::new();
        while pairs.len() < 1000 {
            let len = rng.gen_range(1..=6);
            let p: Vec<&str> = (0..len)
                .map(|_| phones[rng.gen_range(0..phones.len())])
                .collect();
            let mut s: Vec<&str> = sememes
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            s.sort();
            pairs.insert((p.join(" "), s.join(" ")));
        }
        let ids: HashSet<String> = pairs
            .iter()
            .map(|(p, s)| LexEntry::parse(p, s).unwrap().canonical_id())
            .collect();
        assert_eq!(ids.len(), 1000);
    }

    proptest! {
        #[test]
        fn canonical_id_parses_back(
            phones in prop::collection::vec("[a-z@]{1,2}", 1..6),
            sememes in prop::collection::btree_set("[A-Z]{1,3}", 0..4),
        ) {
            let e = LexEntry::parse(&phones.join(" "), &sememes.iter().cloned().collect::<Vec<_>>().join(" ")).unwrap();
            let (p, s) = parse_canonical_id(&e.canonical_id()).unwrap();
            prop_assert_eq!(p, e.phones());
            prop_assert_eq!(&s, e.sememes());
        }
    }
}
