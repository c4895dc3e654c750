#![allow(dead_code)]

use lexacq::{Dictionary, LexEntry, Phone, Sememe, SememeSet, Utterance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHONES: [&str; 3] = ["a", "b", "c"];
const SEMEMES: [&str; 4] = ["A", "B", "C", "D"];

fn phones(rng: &mut ChaCha8Rng, len: usize) -> Vec<Phone> {
    (0..len)
        .map(|_| Phone::new(*PHONES.choose(rng).unwrap()).unwrap())
        .collect()
}

fn sememes(rng: &mut ChaCha8Rng, max: usize) -> SememeSet {
    let k = rng.gen_range(0..=max);
    SEMEMES
        .choose_multiple(rng, k)
        .map(|s| Sememe::new(*s).unwrap())
        .collect()
}

/// A small random instance: up to 8 phones, up to 3 utterance sememes and
/// up to `max_entries` words of 1 to 4 phones.
pub fn instance(seed: u64, max_entries: usize) -> (Dictionary, Utterance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=8);
    let utt = Utterance::new(phones(&mut rng, n), sememes(&mut rng, 3));
    let mut dict = Dictionary::default();
    let entries = rng.gen_range(0..=max_entries);
    for _ in 0..entries {
        let len = rng.gen_range(1..=4);
        let mut entry_sememes = sememes(&mut rng, 2);
        if entry_sememes.is_empty() {
            entry_sememes.insert(Sememe::new(*SEMEMES.choose(&mut rng).unwrap()).unwrap());
        }
        let entry = LexEntry::new(phones(&mut rng, len), entry_sememes).unwrap();
        dict.add(entry, true);
    }
    (dict, utt)
}

/// One extra word drawn from the same distribution.
pub fn extra_entry(seed: u64) -> LexEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let len = rng.gen_range(1..=4);
    let mut s = sememes(&mut rng, 2);
    if s.is_empty() {
        s.insert(Sememe::new("A").unwrap());
    }
    LexEntry::new(phones(&mut rng, len), s).unwrap()
}
