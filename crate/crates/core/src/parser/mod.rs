//! Cover parsing: explaining an utterance's phones and sememes with
//! dictionary words placed at offsets.
//!
//! Words may overlap and may disagree with the utterance at some positions
//! (substitution mismatches only). A position covered by at least one
//! placement is covered, whatever the other placements over it say; each
//! placement pays for its own mismatches. Placements never hang over the
//! utterance edges.
//!
//! [`best_parse`] finds a minimum-cost cover. [`brute_force_parse`] is an
//! exhaustive search used to check it.

mod cost;
mod oracle;
mod search;

use std::borrow::Cow;
use std::collections::BTreeSet;

pub use cost::{parse_cost, Cost, CostComponents, CostWeights, COST_SCALE};
pub use oracle::{brute_force_parse, OracleCaps, DEFAULT_NODE_LIMIT};
pub use search::{best_parse, segment_phones};

use crate::dictionary::Dictionary;
use crate::entry::{LexEntry, Utterance};
use crate::symbols::SememeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest utterance sememe set searched exactly.
    pub exact_sememe_max: usize,
    /// Longest utterance searched exactly.
    pub exact_length_max: usize,
    /// States kept per position when the search is not exact.
    pub beam_width: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            exact_sememe_max: 12,
            exact_length_max: 64,
            beam_width: 64,
        }
    }
}

impl SearchLimits {
    pub fn validate(&self) -> crate::Result<()> {
        if self.exact_sememe_max == 0 || self.exact_length_max == 0 || self.beam_width == 0 {
            return Err(crate::Error::InvalidConfig(
                "search limits must all be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_exact_for(&self, utt: &Utterance) -> bool {
        utt.sememes.len() <= self.exact_sememe_max && utt.phones.len() <= self.exact_length_max
    }
}

/// One word placed at an offset into the utterance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Placement {
    pub offset: usize,
    pub entry_id: String,
    pub len: usize,
    /// Utterance positions where the word's phone differs from the
    /// utterance's.
    pub mismatch_positions: Vec<usize>,
}

impl Placement {
    pub fn end(&self) -> usize {
        self.offset + self.len
    }

    pub fn span(&self) -> std::ops::Range<usize> {
        self.offset..self.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parse {
    /// Sorted by `(offset, entry_id)`.
    pub placements: Vec<Placement>,
    pub unparsed_positions: Vec<usize>,
    pub mismatched_count: usize,
    pub covered_sememes: SememeSet,
    pub missing_sememes: SememeSet,
    pub extra_sememe_count: usize,
    pub cost: Cost,
}

impl Parse {
    pub fn components(&self) -> CostComponents {
        CostComponents {
            unparsed: self.unparsed_positions.len(),
            mismatched: self.mismatched_count,
            missing_sememes: self.missing_sememes.len(),
            extra_sememes: self.extra_sememe_count,
            placements: self.placements.len(),
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.unparsed_positions.is_empty()
            && self.mismatched_count == 0
            && self.missing_sememes.is_empty()
    }

    /// Maximal runs of unparsed positions, as half-open ranges.
    pub fn unparsed_runs(&self) -> Vec<std::ops::Range<usize>> {
        let mut runs: Vec<std::ops::Range<usize>> = Vec::new();
        for &p in &self.unparsed_positions {
            match runs.last_mut() {
                Some(run) if run.end == p => run.end = p + 1,
                _ => runs.push(p..p + 1),
            }
        }
        runs
    }

    /// Builds a parse from placements given as `(offset, entry index)` into
    /// `lex`, computing every derived field from scratch.
    pub(crate) fn assemble(
        lex: &ParseLexicon<'_>,
        utt: &Utterance,
        placed: &[(usize, usize)],
        weights: &CostWeights,
    ) -> Parse {
        let n = utt.phones.len();
        let mut covered = vec![false; n];
        let mut placements = Vec::with_capacity(placed.len());
        let mut covered_sememes = SememeSet::new();
        let mut mismatched_count = 0;
        let mut extra_sememe_count = 0;
        for &(offset, idx) in placed {
            let entry = lex.entry(idx);
            let mismatch_positions = mismatches_at(entry, utt, offset);
            mismatched_count += mismatch_positions.len();
            for c in &mut covered[offset..offset + entry.len()] {
                *c = true;
            }
            extra_sememe_count += entry.sememes().difference(&utt.sememes).count();
            covered_sememes.extend(entry.sememes().iter().cloned());
            placements.push(Placement {
                offset,
                entry_id: lex.id(idx).to_string(),
                len: entry.len(),
                mismatch_positions,
            });
        }
        placements.sort();
        let unparsed_positions = (0..n).filter(|&p| !covered[p]).collect();
        let missing_sememes = utt.sememes.difference(&covered_sememes).cloned().collect();
        let mut parse = Parse {
            placements,
            unparsed_positions,
            mismatched_count,
            covered_sememes,
            missing_sememes,
            extra_sememe_count,
            cost: Cost::ZERO,
        };
        parse.cost = parse_cost(&parse.components(), weights);
        parse
    }

    /// Re-derives every bookkeeping field from `lex` and `utt` and reports
    /// the first disagreement.
    pub fn verify(
        &self,
        lex: &ParseLexicon<'_>,
        utt: &Utterance,
        weights: &CostWeights,
    ) -> Result<(), String> {
        let mut placed = Vec::new();
        for p in &self.placements {
            let idx = lex
                .index_of(&p.entry_id)
                .ok_or_else(|| format!("unknown entry {}", p.entry_id))?;
            if p.end() > utt.phones.len() {
                return Err(format!(
                    "{} at {} overhangs the utterance",
                    p.entry_id, p.offset
                ));
            }
            placed.push((p.offset, idx));
        }
        if !self.placements.windows(2).all(|w| w[0] <= w[1]) {
            return Err("placements are not sorted".into());
        }
        let fresh = Parse::assemble(lex, utt, &placed, weights);
        if fresh != *self {
            return Err(format!(
                "stored parse differs from recomputation: {fresh:?}"
            ));
        }
        if parse_cost(&self.components(), weights) != self.cost {
            return Err("cost is not the sum of its components".into());
        }
        Ok(())
    }
}

pub(crate) fn mismatches_at(entry: &LexEntry, utt: &Utterance, offset: usize) -> Vec<usize> {
    entry
        .phones()
        .iter()
        .zip(&utt.phones[offset..offset + entry.len()])
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| offset + i)
        .collect()
}

/// The word list a parse may draw on, in canonical-id order.
///
/// Borrowed from a [`Dictionary`], optionally with extra candidate words on
/// top or one entry held out.
#[derive(Clone, Debug, Default)]
pub struct ParseLexicon<'a> {
    items: Vec<(Cow<'a, str>, &'a LexEntry)>,
}

impl<'a> ParseLexicon<'a> {
    pub fn new(dict: &'a Dictionary) -> Self {
        ParseLexicon {
            items: dict.iter().map(|(id, e)| (Cow::Borrowed(id), e)).collect(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = &'a LexEntry>) -> Self {
        let mut items: Vec<(Cow<'a, str>, &'a LexEntry)> = entries
            .into_iter()
            .map(|e| (Cow::Owned(e.canonical_id()), e))
            .collect();
        items.sort_by(|a, b| a.0.cmp(&b.0));
        items.dedup_by(|a, b| a.0 == b.0);
        ParseLexicon { items }
    }

    /// The dictionary plus `extra` words; extras already present are
    /// ignored.
    pub fn with_extra(dict: &'a Dictionary, extra: impl IntoIterator<Item = &'a LexEntry>) -> Self {
        let mut lex = ParseLexicon::new(dict);
        let mut added = false;
        let mut seen = BTreeSet::new();
        for e in extra {
            let id = e.canonical_id();
            if dict.contains(&id) || !seen.insert(id.clone()) {
                continue;
            }
            lex.items.push((Cow::Owned(id), e));
            added = true;
        }
        if added {
            lex.items.sort_by(|a, b| a.0.cmp(&b.0));
        }
        lex
    }

    /// The dictionary without the entry `id`.
    pub fn excluding(dict: &'a Dictionary, id: &str) -> Self {
        ParseLexicon {
            items: dict
                .iter()
                .filter(|(k, _)| *k != id)
                .map(|(k, e)| (Cow::Borrowed(k), e))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn entry(&self, idx: usize) -> &'a LexEntry {
        self.items[idx].1
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.items[idx].0
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.items
            .binary_search_by(|(k, _)| k.as_ref().cmp(id))
            .ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &'a LexEntry)> + '_ {
        self.items.iter().map(|(k, e)| (k.as_ref(), *e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_views_stay_sorted() {
        let dict = Dictionary::from_entries([
            LexEntry::parse("y u", "YOU").unwrap(),
            LexEntry::parse("D @", "THE").unwrap(),
        ]);
        let extra = [
            LexEntry::parse("s A k", "SOCK").unwrap(),
            LexEntry::parse("y u", "YOU").unwrap(),
        ];
        let lex = ParseLexicon::with_extra(&dict, &extra);
        let ids: Vec<&str> = lex.iter().map(|(id, _)| id).collect();
        assert_eq!(ids, ["D.@|THE", "s.A.k|SOCK", "y.u|YOU"]);
        assert_eq!(lex.index_of("s.A.k|SOCK"), Some(1));

        let without = ParseLexicon::excluding(&dict, "y.u|YOU");
        assert_eq!(without.len(), 1);
    }

    #[test]
    fn unparsed_runs_are_maximal() {
        let parse = Parse {
            placements: vec![],
            unparsed_positions: vec![0, 1, 4, 6, 7],
            mismatched_count: 0,
            covered_sememes: SememeSet::new(),
            missing_sememes: SememeSet::new(),
            extra_sememe_count: 0,
            cost: Cost::ZERO,
        };
        assert_eq!(parse.unparsed_runs(), vec![0..2, 4..5, 6..8]);
    }
}
