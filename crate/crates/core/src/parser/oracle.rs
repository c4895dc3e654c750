//! Exhaustive reference search for tests.
//!
//! Enumerates every subset of the possible placements (every word at every
//! offset where it fits) by include/exclude recursion, and scores each
//! complete subset from scratch. Repeating one placement never helps, so
//! subsets cover all multisets that could be optimal. A branch is cut only
//! when an admissible lower bound already exceeds the best cost found, which
//! keeps ties alive for the tie-breaking rule.

use super::cost::{compare_keys, Cost};
use super::{parse_cost, CostComponents, CostWeights, Parse, ParseLexicon};
use crate::entry::Utterance;
use crate::error::{Error, Result};

/// Search nodes the oracle may visit before giving up.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_placements: usize,
    pub node_limit: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_placements: usize::MAX,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

struct PlacementOption {
    offset: usize,
    entry: usize,
    cover: u64,
    sememes: u64,
    fixed: Cost,
}

struct Search<'a> {
    options: Vec<PlacementOption>,
    // Union of coverage / sememes over options[i..].
    cover_after: Vec<u64>,
    sememes_after: Vec<u64>,
    weights: &'a CostWeights,
    n: usize,
    k: usize,
    caps: OracleCaps,
    nodes: u64,
    chosen: Vec<usize>,
    best: Option<(Cost, Vec<(usize, usize)>)>,
}

/// Globally optimal parse under the same cost and tie-breaking as
/// [`super::best_parse`], by exhaustive search.
///
/// Fails with [`Error::InstanceTooLarge`] when the utterance is longer than
/// 64 phones, has more than 64 sememes, or the search exceeds
/// `caps.node_limit` nodes.
pub fn brute_force_parse(
    lex: &ParseLexicon<'_>,
    utt: &Utterance,
    weights: &CostWeights,
    caps: OracleCaps,
) -> Result<Parse> {
    let n = utt.phones.len();
    let k = utt.sememes.len();
    if n > 64 || k > 64 {
        return Err(Error::InstanceTooLarge {
            limit: caps.node_limit,
        });
    }
    let sememes: Vec<_> = utt.sememes.iter().collect();

    let mut options = Vec::new();
    for offset in 0..n {
        for (entry, (_, word)) in lex.iter().enumerate() {
            let len = word.len();
            if offset + len > n {
                continue;
            }
            let mut mismatched = 0;
            for i in 0..len {
                if word.phones()[i] != utt.phones[offset + i] {
                    mismatched += 1;
                }
            }
            let mut sem_bits = 0u64;
            for (bit, s) in sememes.iter().enumerate() {
                if word.sememes().contains(*s) {
                    sem_bits |= 1 << bit;
                }
            }
            let extra = word
                .sememes()
                .iter()
                .filter(|s| !utt.sememes.contains(*s))
                .count();
            let fixed = parse_cost(
                &CostComponents {
                    mismatched,
                    extra_sememes: extra,
                    placements: 1,
                    ..Default::default()
                },
                weights,
            );
            let cover = if len == 64 {
                u64::MAX
            } else {
                ((1u64 << len) - 1) << offset
            };
            options.push(PlacementOption {
                offset,
                entry,
                cover,
                sememes: sem_bits,
                fixed,
            });
        }
    }

    let mut cover_after = vec![0u64; options.len() + 1];
    let mut sememes_after = vec![0u64; options.len() + 1];
    for i in (0..options.len()).rev() {
        cover_after[i] = cover_after[i + 1] | options[i].cover;
        sememes_after[i] = sememes_after[i + 1] | options[i].sememes;
    }

    let mut search = Search {
        options,
        cover_after,
        sememes_after,
        weights,
        n,
        k,
        caps,
        nodes: 0,
        chosen: Vec::new(),
        best: None,
    };
    search.visit(0, Cost::ZERO, 0, 0)?;
    let (_, placed) = search.best.expect("the empty subset is always scored");
    Ok(Parse::assemble(lex, utt, &placed, weights))
}

impl Search<'_> {
    fn full_mask(bits: usize) -> u64 {
        if bits == 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        }
    }

    fn score(&self, fixed: Cost, cover: u64, sememes: u64) -> Cost {
        let unparsed = (Self::full_mask(self.n) & !cover).count_ones() as usize;
        let missing = (Self::full_mask(self.k) & !sememes).count_ones() as usize;
        fixed
            + parse_cost(
                &CostComponents {
                    unparsed,
                    missing_sememes: missing,
                    ..Default::default()
                },
                self.weights,
            )
    }

    fn visit(&mut self, i: usize, fixed: Cost, cover: u64, sememes: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.caps.node_limit {
            return Err(Error::InstanceTooLarge {
                limit: self.caps.node_limit,
            });
        }
        if i == self.options.len() {
            let cost = self.score(fixed, cover, sememes);
            let placed: Vec<(usize, usize)> = self
                .chosen
                .iter()
                .map(|&o| (self.options[o].offset, self.options[o].entry))
                .collect();
            let better = match &self.best {
                None => true,
                Some((best_cost, best_placed)) => {
                    compare_keys((cost, &placed), (*best_cost, best_placed)).is_lt()
                }
            };
            if better {
                self.best = Some((cost, placed));
            }
            return Ok(());
        }
        if let Some((best_cost, _)) = &self.best {
            let bound = self.score(
                fixed,
                cover | self.cover_after[i],
                sememes | self.sememes_after[i],
            );
            if bound > *best_cost {
                return Ok(());
            }
        }
        if self.chosen.len() < self.caps.max_placements {
            let (c, s, f) = {
                let o = &self.options[i];
                (o.cover, o.sememes, o.fixed)
            };
            self.chosen.push(i);
            self.visit(i + 1, fixed + f, cover | c, sememes | s)?;
            self.chosen.pop();
        }
        self.visit(i + 1, fixed, cover, sememes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::Dictionary;
    use crate::entry::LexEntry;

    #[test]
    fn empty_dictionary_gives_all_unparsed() {
        let d = Dictionary::default();
        let utt = Utterance::parse("n i n a", "NINA").unwrap();
        let p = brute_force_parse(
            &ParseLexicon::new(&d),
            &utt,
            &CostWeights::default(),
            OracleCaps::default(),
        )
        .unwrap();
        assert!(p.placements.is_empty());
        assert_eq!(p.unparsed_positions.len(), 4);
    }

    #[test]
    fn single_matching_entry_is_placed() {
        let d = Dictionary::from_entries([LexEntry::parse("n i n a", "NINA").unwrap()]);
        let utt = Utterance::parse("n i n a", "NINA").unwrap();
        let p = brute_force_parse(
            &ParseLexicon::new(&d),
            &utt,
            &CostWeights::default(),
            OracleCaps::default(),
        )
        .unwrap();
        assert_eq!(p.placements.len(), 1);
        assert!(p.is_perfect());
    }

    #[test]
    fn node_limit_trips() {
        let d = Dictionary::from_entries(
            ["a", "b", "a b", "b a", "a a"]
                .iter()
                .map(|p| LexEntry::parse(p, "X").unwrap()),
        );
        let utt = Utterance::parse("a b a b a b a b a b", "X").unwrap();
        let caps = OracleCaps {
            max_placements: usize::MAX,
            node_limit: 100,
        };
        let err = brute_force_parse(&ParseLexicon::new(&d), &utt, &CostWeights::default(), caps)
            .unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { limit: 100 }));
    }
}
