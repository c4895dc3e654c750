use std::collections::BTreeMap;
use std::fmt;

use crate::entry::{parse_canonical_id, LexEntry, Utterance};
use crate::parser::Parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// Built from an unparsed stretch of the utterance.
    Gap,
    /// A placed word reshaped to fit the utterance.
    Adjustment,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Gap => "gap",
            Origin::Adjustment => "adjustment",
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gap" => Ok(Origin::Gap),
            "adjustment" => Ok(Origin::Adjustment),
            other => Err(format!("unknown hypothesis origin {other:?}")),
        }
    }
}

/// A candidate word proposed while processing one utterance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub entry: LexEntry,
    pub origin: Origin,
}

impl Hypothesis {
    pub fn id(&self) -> String {
        self.entry.canonical_id()
    }
}

/// One new word per maximal unparsed run, spelled with the run's phones.
///
/// Every gap word carries all of the parse's missing sememes: with one gap
/// that is exactly its meaning, and with several gaps there is no evidence
/// for how to split them. Later adjustments, disuse and pruning clean up
/// the surplus.
pub fn hypothesize_gap_words(utt: &Utterance, parse: &Parse) -> Vec<Hypothesis> {
    let mut out = BTreeMap::new();
    for run in parse.unparsed_runs() {
        let entry = LexEntry::new(utt.phones[run].to_vec(), parse.missing_sememes.clone())
            .expect("unparsed runs are non-empty");
        out.entry(entry.canonical_id()).or_insert(Hypothesis {
            entry,
            origin: Origin::Gap,
        });
    }
    out.into_values().collect()
}

/// For every placement with mismatches, a variant of its word that fits the
/// utterance: mismatching phones at either edge are trimmed and mismatching
/// phones inside are replaced by the utterance's. The variant keeps the
/// original word's sememes; the original stays in the dictionary.
pub fn hypothesize_adjustments(utt: &Utterance, parse: &Parse) -> Vec<Hypothesis> {
    let mut out = BTreeMap::new();
    for placement in &parse.placements {
        if placement.mismatch_positions.is_empty() {
            continue;
        }
        let bad = |p: usize| placement.mismatch_positions.binary_search(&p).is_ok();
        let Some(start) = placement.span().find(|&p| !bad(p)) else {
            continue;
        };
        let end = placement
            .span()
            .rev()
            .find(|&p| !bad(p))
            .expect("start exists")
            + 1;
        let (_, sememes) =
            parse_canonical_id(&placement.entry_id).expect("placements carry canonical ids");
        let entry =
            LexEntry::new(utt.phones[start..end].to_vec(), sememes).expect("span is non-empty");
        out.entry(entry.canonical_id()).or_insert(Hypothesis {
            entry,
            origin: Origin::Adjustment,
        });
    }
    out.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::Dictionary;
    use crate::parser::{best_parse, CostWeights, ParseLexicon, SearchLimits};

    fn parse_with(words: &[(&str, &str)], utt: &Utterance) -> Parse {
        let d = Dictionary::from_entries(words.iter().map(|(p, s)| LexEntry::parse(p, s).unwrap()));
        best_parse(
            &ParseLexicon::new(&d),
            utt,
            &CostWeights::default(),
            &SearchLimits::default(),
        )
    }

    fn ids(h: &[Hypothesis]) -> Vec<String> {
        h.iter().map(Hypothesis::id).collect()
    }

    #[test]
    fn nina_gap() {
        let utt = Utterance::parse("n i n a", "NINA").unwrap();
        let p = parse_with(&[], &utt);
        let h = hypothesize_gap_words(&utt, &p);
        assert_eq!(ids(&h), ["n.i.n.a|NINA"]);
        assert_eq!(h[0].origin, Origin::Gap);
        assert_eq!(h[0].entry.use_count, 0);
    }

    #[test]
    fn sock_gap_and_adjustment() {
        let utt = Utterance::parse("y u k I k t O f D @ s A k", "KICK YOU OFF SOCK THE").unwrap();
        let p = parse_with(&[("y u", "YOU"), ("D @", "THE"), ("r s A k", "SOCK")], &utt);
        assert_eq!(
            ids(&hypothesize_gap_words(&utt, &p)),
            ["k.I.k.t.O.f|KICK,OFF"]
        );
        let adj = hypothesize_adjustments(&utt, &p);
        assert_eq!(ids(&adj), ["s.A.k|SOCK"]);
        assert_eq!(adj[0].origin, Origin::Adjustment);
    }

    #[test]
    fn perfect_parse_suggests_nothing() {
        let utt = Utterance::parse("n i n a", "NINA").unwrap();
        let p = parse_with(&[("n i n a", "NINA")], &utt);
        assert!(hypothesize_gap_words(&utt, &p).is_empty());
        assert!(hypothesize_adjustments(&utt, &p).is_empty());
    }

    #[test]
    fn interior_mismatch_is_substituted() {
        let utt = Utterance::parse("b e t", "BAT").unwrap();
        let p = parse_with(&[("b a t", "BAT")], &utt);
        assert_eq!(p.placements[0].mismatch_positions, vec![1]);
        let adj = hypothesize_adjustments(&utt, &p);
        assert_eq!(ids(&adj), ["b.e.t|BAT"]);

        // The adjusted word gives a strictly cheaper reparse, by exhaustive
        // search over both dictionaries.
        let base = Dictionary::from_entries([LexEntry::parse("b a t", "BAT").unwrap()]);
        let oracle = |lex: &ParseLexicon<'_>| {
            crate::parser::brute_force_parse(lex, &utt, &CostWeights::default(), Default::default())
                .unwrap()
                .cost
        };
        let before = oracle(&ParseLexicon::new(&base));
        let after = oracle(&ParseLexicon::with_extra(&base, [&adj[0].entry]));
        assert!(after < before);
    }

    #[test]
    fn several_gaps_share_the_missing_sememes() {
        let utt = Utterance::parse("x x y u z z", "YOU A B").unwrap();
        let p = parse_with(&[("y u", "YOU")], &utt);
        let h = hypothesize_gap_words(&utt, &p);
        assert_eq!(ids(&h), ["x.x|A,B", "z.z|A,B"]);
    }

    #[test]
    fn fully_mismatched_placement_trims_to_nothing() {
        let utt = Utterance::parse("q q", "AB").unwrap();
        // "a b" carries the utterance's sememe, so it is placed despite
        // matching nothing.
        let p = parse_with(&[("a b", "AB")], &utt);
        assert_eq!(p.placements.len(), 1);
        assert!(hypothesize_adjustments(&utt, &p).is_empty());
    }
}
