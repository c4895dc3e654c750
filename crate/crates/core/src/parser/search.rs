//! Minimum-cost cover search.
//!
//! Dynamic programming left to right over phone positions. A state is the
//! coverage frontier (one past the furthest position any placement so far
//! reaches) together with the subset of utterance sememes already covered.
//! At each position the search decides which words start there, visiting
//! candidate words in canonical-id order so that every partial solution's
//! placement list is already sorted; then it charges the position as
//! unparsed if the frontier has not passed it.
//!
//! Two partial solutions that reach the same state have the same futures, so
//! keeping the one with the smaller `(cost, placement count, placement list)`
//! key is safe, and the search is exact. Utterances above the configured
//! limits keep only the best `beam_width` states per step.

use std::collections::HashMap;

use smallvec::SmallVec;

use super::cost::{compare_keys, Cost, ScaledWeights};
use super::{CostWeights, Parse, ParseLexicon, SearchLimits};
use crate::entry::Utterance;
use crate::symbols::Phone;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Mask(SmallVec<[u64; 1]>);

impl Mask {
    fn zeros(bits: usize) -> Self {
        Mask(SmallVec::from_elem(0, bits.div_ceil(64).max(1)))
    }

    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1 << (bit % 64);
    }

    fn union(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Candidate {
    entry: usize,
    len: usize,
    mask: Mask,
    cost: i64,
}

#[derive(Clone)]
struct Node {
    cost: i64,
    placed: Vec<(usize, usize)>,
}

impl Node {
    fn beats(&self, other: &Node) -> bool {
        compare_keys(
            (Cost::from_units(self.cost), &self.placed),
            (Cost::from_units(other.cost), &other.placed),
        )
        .is_lt()
    }
}

type Layer = HashMap<(usize, Mask), Node>;

fn merge(layer: &mut Layer, key: (usize, Mask), node: Node) {
    match layer.get_mut(&key) {
        Some(existing) => {
            if node.beats(existing) {
                *existing = node;
            }
        }
        None => {
            layer.insert(key, node);
        }
    }
}

/// Finds a minimum-cost parse of `utt` over the words in `lex`.
///
/// The result is exactly optimal when the utterance is within `limits`;
/// above them a beam search returns a parse whose cost is at least the
/// optimum. Ties go to fewer placements, then to the lexicographically
/// smaller placement list.
pub fn best_parse(
    lex: &ParseLexicon<'_>,
    utt: &Utterance,
    weights: &CostWeights,
    limits: &SearchLimits,
) -> Parse {
    let w = weights.scaled();
    let n = utt.phones.len();
    let sememes: Vec<_> = utt.sememes.iter().collect();
    let k = sememes.len();
    let candidates = candidates(lex, utt, &sememes, &w);
    let beam = (!limits.is_exact_for(utt)).then_some(limits.beam_width.max(1));

    let mut layer = Layer::new();
    layer.insert(
        (0, Mask::zeros(k)),
        Node {
            cost: 0,
            placed: Vec::new(),
        },
    );

    for (pos, cands) in candidates.iter().enumerate() {
        for cand in cands {
            let grown: Vec<_> = layer
                .iter()
                .map(|((frontier, mask), node)| {
                    let mut placed = Vec::with_capacity(node.placed.len() + 1);
                    placed.extend_from_slice(&node.placed);
                    placed.push((pos, cand.entry));
                    (
                        ((*frontier).max(pos + cand.len), mask.union(&cand.mask)),
                        Node {
                            cost: node.cost + cand.cost,
                            placed,
                        },
                    )
                })
                .collect();
            for (key, node) in grown {
                merge(&mut layer, key, node);
            }
        }
        if let Some(width) = beam {
            prune(&mut layer, width, k, &w);
        }

        let mut next = Layer::with_capacity(layer.len());
        for ((frontier, mask), mut node) in layer {
            if frontier <= pos {
                node.cost += w.unparsed;
            }
            merge(&mut next, (frontier.max(pos + 1), mask), node);
        }
        layer = next;
    }

    let mut best: Option<Node> = None;
    for ((_, mask), mut node) in layer {
        node.cost += w.missing * (k - mask.count()) as i64;
        if best.as_ref().is_none_or(|b| node.beats(b)) {
            best = Some(node);
        }
    }
    let best = best.expect("the empty parse is always reachable");
    let parse = Parse::assemble(lex, utt, &best.placed, weights);
    debug_assert_eq!(
        parse.cost.units(),
        best.cost,
        "incremental and recomputed cost disagree"
    );
    debug_assert!(n == 0 || parse.placements.iter().all(|p| p.end() <= n));
    parse
}

/// Words worth placing at each offset.
///
/// A placement whose own cost is at least the most it could ever save (its
/// length in unparsed phones plus its share of utterance sememes) can be
/// dropped from any parse without raising the cost, and dropping it reduces
/// the placement count, so no optimal parse contains it.
fn candidates(
    lex: &ParseLexicon<'_>,
    utt: &Utterance,
    sememes: &[&crate::Sememe],
    w: &ScaledWeights,
) -> Vec<Vec<Candidate>> {
    let n = utt.phones.len();
    let mut by_offset: Vec<Vec<Candidate>> = (0..n).map(|_| Vec::new()).collect();
    for (idx, (_, entry)) in lex.iter().enumerate() {
        let len = entry.len();
        if len > n {
            continue;
        }
        let mut mask = Mask::zeros(sememes.len());
        let mut shared = 0;
        for (bit, s) in sememes.iter().enumerate() {
            if entry.sememes().contains(*s) {
                mask.set(bit);
                shared += 1;
            }
        }
        let extra = (entry.sememes().len() - shared) as i64;
        let benefit = w.unparsed * len as i64 + w.missing * shared as i64;
        let fixed = w.word + w.extra * extra;
        if fixed >= benefit {
            continue;
        }
        for (offset, slot) in by_offset.iter_mut().enumerate().take(n - len + 1) {
            let mismatched = count_mismatches(entry.phones(), &utt.phones[offset..offset + len]);
            let cost = fixed + w.mismatch * mismatched as i64;
            if cost < benefit {
                slot.push(Candidate {
                    entry: idx,
                    len,
                    mask: mask.clone(),
                    cost,
                });
            }
        }
    }
    by_offset
}

fn count_mismatches(word: &[Phone], span: &[Phone]) -> usize {
    word.iter().zip(span).filter(|(a, b)| a != b).count()
}

fn prune(layer: &mut Layer, width: usize, k: usize, w: &ScaledWeights) {
    if layer.len() <= width {
        return;
    }
    let mut states: Vec<_> = layer.drain().collect();
    let estimate = |((_, mask), node): &((usize, Mask), Node)| {
        node.cost + w.missing * (k - mask.count()) as i64
    };
    states.sort_by(|a, b| {
        estimate(a)
            .cmp(&estimate(b))
            .then_with(|| b.0 .0.cmp(&a.0 .0))
            .then_with(|| {
                compare_keys(
                    (Cost::from_units(a.1.cost), &a.1.placed),
                    (Cost::from_units(b.1.cost), &b.1.placed),
                )
            })
    });
    states.truncate(width);
    layer.extend(states);
}

/// Segments a bare phone sequence into dictionary words.
///
/// Sememe terms are switched off, so only coverage and mismatches matter.
/// Returns `(canonical id, offset)` pairs in offset order.
pub fn segment_phones(
    lex: &ParseLexicon<'_>,
    phones: &[Phone],
    weights: &CostWeights,
    limits: &SearchLimits,
) -> Vec<(String, usize)> {
    let weights = CostWeights {
        w_missing_sem: 0.0,
        w_extra_sem: 0.0,
        ..*weights
    };
    let utt = Utterance::new(phones.to_vec(), Default::default());
    best_parse(lex, &utt, &weights, limits)
        .placements
        .into_iter()
        .map(|p| (p.entry_id, p.offset))
        .collect()
}
