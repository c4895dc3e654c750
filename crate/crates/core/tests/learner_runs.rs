//! Whole-corpus training runs: the learner's invariants hold at every step,
//! and replay is exact.

use lexacq::learner::{self, decomposition, maintain, TraceRecord};
use lexacq::pipeline::{generate_synthetic, GeneratorConfig};
use lexacq::{Dictionary, LexEntry, TrainConfig, Utterance};

fn corpus(seed: u64, n: usize) -> Vec<Utterance> {
    let cfg = GeneratorConfig {
        vocab_size: 20,
        seed,
        ..GeneratorConfig::default()
    };
    generate_synthetic(&cfg, n)
        .unwrap()
        .records
        .iter()
        .map(|r| r.utterance())
        .collect()
}

fn total_uses(dict: &Dictionary) -> u64 {
    dict.entries().map(|e| e.use_count).sum()
}

#[test]
fn invariants_hold_at_every_step() {
    let cfg = TrainConfig {
        maintenance_interval: 100,
        ..TrainConfig::default()
    };
    let mut dict = Dictionary::new(cfg.maintenance_interval);
    for utt in corpus(3, 600) {
        let before = total_uses(&dict);
        let snapshot = dict.clone();
        let rec: TraceRecord = learner::process_utterance(&mut dict, &utt, &cfg);

        if !rec.accepted.is_empty() {
            assert!(
                rec.good && rec.reparse.is_perfect(),
                "accepted from an imperfect reparse"
            );
        }
        assert!(
            dict.entries().all(|e| !e.sememes().is_empty()),
            "gate let an empty word in"
        );

        match &rec.maintenance {
            None => {
                // Every placement of a good reparse is counted once, except
                // placements of words the gate turned away.
                let counted = if rec.good {
                    rec.reparse
                        .placements
                        .iter()
                        .filter(|p| dict.contains(&p.entry_id))
                        .count() as u64
                } else {
                    0
                };
                assert_eq!(total_uses(&dict) - before, counted);
            }
            Some(m) => {
                for id in &m.removed_decomposable {
                    let entry = snapshot.get(id).cloned().unwrap_or_else(|| parse_entry(id));
                    assert!(
                        decomposition(&dict, id, &entry, &cfg).is_some(),
                        "{id} no longer decomposes after the pass"
                    );
                }
                assert!(dict.entries().all(|e| e.window_use_count == 0));
            }
        }
    }
}

fn parse_entry(id: &str) -> LexEntry {
    let (p, s) = lexacq::parse_canonical_id(id).unwrap();
    LexEntry::new(p, s).unwrap()
}

#[test]
fn replay_is_byte_identical() {
    let utts = corpus(11, 400);
    let run = |jobs: usize| {
        let cfg = TrainConfig {
            jobs,
            maintenance_interval: 150,
            ..TrainConfig::default()
        };
        let mut dict = Dictionary::new(cfg.maintenance_interval);
        let report = learner::train(&mut dict, &utts, &cfg).unwrap();
        let mut bytes = Vec::new();
        dict.write_tsv(&mut bytes).unwrap();
        (bytes, report)
    };
    let (a, ra) = run(1);
    let (b, rb) = run(1);
    let (c, rc) = run(4);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(ra, rb);
    assert_eq!(ra, rc);
}

#[test]
fn shuffled_epochs_depend_only_on_the_seed() {
    let utts = corpus(5, 200);
    let run = |seed: u64| {
        let cfg = TrainConfig {
            epochs: 2,
            shuffle: true,
            seed,
            ..TrainConfig::default()
        };
        let mut dict = Dictionary::default();
        learner::train(&mut dict, &utts, &cfg).unwrap();
        let mut bytes = Vec::new();
        dict.write_tsv(&mut bytes).unwrap();
        bytes
    };
    assert_eq!(run(9), run(9));
}

#[test]
fn final_pass_prunes_what_training_left_unused() {
    let cfg = TrainConfig {
        maintenance_interval: 1000,
        min_age: Some(0),
        ..TrainConfig::default()
    };
    let mut dict = Dictionary::default();
    dict.add(LexEntry::parse("z z z", "ZZZ").unwrap(), true);
    let report = learner::train(&mut dict, &corpus(2, 50), &cfg).unwrap();
    let m = report
        .final_maintenance
        .expect("utterances since the last pass");
    assert!(m.removed_unused.iter().any(|id| id == "z.z.z|ZZZ"));
    assert!(!dict.contains("z.z.z|ZZZ"));
    // Nothing that survived decomposes.
    let again = maintain(&mut dict.clone(), &cfg);
    assert!(again.removed_decomposable.is_empty());
}
