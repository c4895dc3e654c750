//! The dynamic-programming parser against the exhaustive oracle, plus
//! properties every parse must have.

mod common;

use lexacq::parser::{brute_force_parse, OracleCaps};
use lexacq::{best_parse, CostWeights, Dictionary, ParseLexicon, SearchLimits};
use proptest::prelude::*;

fn weights_grid() -> Vec<CostWeights> {
    let mut out = vec![CostWeights::default()];
    for spec in [
        "w_word=0.5",
        "w_mismatch=0.3,w_unparsed=2",
        "w_missing_sem=0.25,w_extra_sem=3",
        "w_word=0",
    ] {
        out.push(CostWeights::parse_overrides(spec).unwrap());
    }
    out
}

#[test]
fn dp_matches_oracle_on_random_instances() {
    let limits = SearchLimits::default();
    let weights = weights_grid();
    for seed in 0..400u64 {
        let (dict, utt) = common::instance(seed, 5);
        let lex = ParseLexicon::new(&dict);
        let w = &weights[seed as usize % weights.len()];
        let dp = best_parse(&lex, &utt, w, &limits);
        let oracle = brute_force_parse(&lex, &utt, w, OracleCaps::default()).unwrap();
        assert_eq!(dp.cost, oracle.cost, "seed {seed}: cost");
        // Same tie-break, so the same parse.
        assert_eq!(dp, oracle, "seed {seed}");
    }
}

#[test]
fn superset_dictionary_never_costs_more() {
    let limits = SearchLimits::default();
    let w = CostWeights::default();
    for seed in 0..200u64 {
        let (dict, utt) = common::instance(seed, 4);
        let mut bigger = dict.clone();
        bigger.add(common::extra_entry(seed), true);
        let small = best_parse(&ParseLexicon::new(&dict), &utt, &w, &limits);
        let large = best_parse(&ParseLexicon::new(&bigger), &utt, &w, &limits);
        assert!(
            large.cost <= small.cost,
            "seed {seed}: {} > {}",
            large.cost,
            small.cost
        );
    }
}

#[test]
fn empty_dictionary_leaves_everything_unparsed() {
    let dict = Dictionary::default();
    let (_, utt) = common::instance(7, 0);
    let p = best_parse(
        &ParseLexicon::new(&dict),
        &utt,
        &CostWeights::default(),
        &SearchLimits::default(),
    );
    assert!(p.placements.is_empty());
    assert_eq!(p.unparsed_positions, (0..utt.len()).collect::<Vec<_>>());
    assert_eq!(p.missing_sememes, utt.sememes);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parses_are_internally_consistent(seed in 0u64..1_000_000) {
        let (dict, utt) = common::instance(seed, 5);
        let lex = ParseLexicon::new(&dict);
        let w = CostWeights::default();
        let p = best_parse(&lex, &utt, &w, &SearchLimits::default());
        prop_assert!(p.verify(&lex, &utt, &w).is_ok());
        // Placements may overlap; unparsed is exactly what none of them covers.
        let mut covered = vec![false; utt.len()];
        for pl in &p.placements {
            prop_assert!(pl.end() <= utt.len());
            for i in pl.span() {
                covered[i] = true;
            }
        }
        for &i in &p.unparsed_positions {
            prop_assert!(!covered[i]);
            covered[i] = true;
        }
        prop_assert!(covered.iter().all(|&c| c));
        let missing: std::collections::BTreeSet<_> = utt.sememes.difference(&p.covered_sememes).cloned().collect();
        prop_assert_eq!(&missing, &p.missing_sememes);
    }

    #[test]
    fn beam_never_beats_exact(seed in 0u64..1_000_000) {
        let (dict, utt) = common::instance(seed, 5);
        let lex = ParseLexicon::new(&dict);
        let w = CostWeights::default();
        let exact = best_parse(&lex, &utt, &w, &SearchLimits::default());
        let tight = SearchLimits { exact_sememe_max: 0, exact_length_max: 0, beam_width: 2 };
        let beam = best_parse(&lex, &utt, &w, &tight);
        prop_assert!(beam.verify(&lex, &utt, &w).is_ok());
        prop_assert!(beam.cost >= exact.cost);
    }
}
