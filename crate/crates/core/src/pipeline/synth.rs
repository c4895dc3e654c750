use std::collections::{BTreeMap, BTreeSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CorpusRecord, GoldSpan, PronunciationTable, StemMap};
use crate::entry::LexEntry;
use crate::error::{Error, Result};
use crate::symbols::{phones_from_str, Phone, Sememe, SememeSet};

/// Draws per stem before giving up on finding a fresh phone string.
const MAX_ATTEMPTS_PER_STEM: usize = 1000;

/// An inflection: its spelling is appended to the stem's spelling and its
/// phones to the stem's phones. The inflected form means the same as the
/// stem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suffix {
    pub spelling: String,
    pub phones: Vec<Phone>,
}

impl Suffix {
    pub fn new(spelling: &str, phones: &str) -> Result<Self> {
        let phones = phones_from_str(phones)?;
        if phones.is_empty() {
            return Err(Error::EmptyPhones);
        }
        Ok(Suffix {
            spelling: spelling.to_string(),
            phones,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub vocab_size: usize,
    /// Phones stems are drawn from, and noise substitutes with.
    pub phone_alphabet: Vec<Phone>,
    /// Inclusive bounds on stem length in phones.
    pub word_length: (usize, usize),
    /// Inclusive bounds on words per utterance.
    pub utterance_length: (usize, usize),
    /// Stem of rank r (from 1) is drawn with weight r^-s.
    pub zipf_exponent: f64,
    pub suffixes: Vec<Suffix>,
    /// Chance that a drawn word takes a suffix, chosen uniformly.
    pub suffix_rate: f64,
    /// Per-phone substitution chance, applied after gold spans are fixed.
    pub substitution_noise_rate: f64,
    /// Stems that reuse another stem's phones with a different sememe.
    pub homophone_pairs: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            vocab_size: 60,
            phone_alphabet: phones_from_str("p t k b d g m n s f v l r w y h a e i o u")
                .expect("valid phones"),
            word_length: (3, 5),
            utterance_length: (2, 5),
            zipf_exponent: 1.0,
            suffixes: vec![
                Suffix::new("s", "z").expect("valid suffix"),
                Suffix::new("ing", "I N").expect("valid suffix"),
            ],
            suffix_rate: 0.05,
            substitution_noise_rate: 0.0,
            homophone_pairs: 0,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.vocab_size == 0 {
            return bad("vocabulary size must be at least 1");
        }
        if self.phone_alphabet.is_empty() {
            return bad("phone alphabet is empty");
        }
        let (lo, hi) = self.word_length;
        if lo == 0 || lo > hi {
            return bad("word length range must be non-empty and start at 1 or more");
        }
        let (lo, hi) = self.utterance_length;
        if lo == 0 || lo > hi {
            return bad("utterance length range must be non-empty and start at 1 or more");
        }
        if !(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite()) {
            return bad("Zipf exponent must be a finite non-negative number");
        }
        if !(0.0..=1.0).contains(&self.suffix_rate) {
            return bad("suffix rate must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.substitution_noise_rate) {
            return bad("noise rate must lie in [0, 1]");
        }
        if self.substitution_noise_rate > 0.0 && self.phone_alphabet.len() < 2 {
            return bad("noise needs at least two phones in the alphabet");
        }
        if self.suffix_rate > 0.0 && self.suffixes.is_empty() {
            return bad("a positive suffix rate needs at least one suffix");
        }
        if 2 * self.homophone_pairs > self.vocab_size {
            return bad("too many homophone pairs for the vocabulary");
        }
        let spellings: BTreeSet<&str> = self.suffixes.iter().map(|s| s.spelling.as_str()).collect();
        if spellings.len() != self.suffixes.len() || spellings.iter().any(|s| s.is_empty()) {
            return bad("suffix spellings must be distinct and non-empty");
        }
        Ok(())
    }
}

/// One surface form of the vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Form {
    spelling: String,
    phones: Vec<Phone>,
    sememe: Sememe,
}

impl Form {
    fn entry(&self) -> LexEntry {
        LexEntry::new(self.phones.clone(), SememeSet::from([self.sememe.clone()]))
            .expect("forms have phones")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticCorpus {
    pub table: PronunciationTable,
    pub stems: StemMap,
    pub records: Vec<CorpusRecord>,
    /// Every form of the vocabulary, attested or not.
    pub lexicon: Vec<LexEntry>,
}

impl SyntheticCorpus {
    /// The vocabulary forms used by the given records' gold spans.
    pub fn attested_lexicon<'a>(
        records: impl IntoIterator<Item = &'a CorpusRecord>,
    ) -> Vec<LexEntry> {
        let ids: BTreeSet<&str> = records
            .into_iter()
            .flat_map(|r| r.gold.iter().flatten())
            .map(|s| s.id.as_str())
            .collect();
        ids.into_iter()
            .map(|id| {
                let (phones, sememes) =
                    crate::entry::parse_canonical_id(id).expect("gold ids are canonical");
                LexEntry::new(phones, sememes).expect("gold words have phones")
            })
            .collect()
    }
}

/// Draws a vocabulary and `n_utterances` gold-segmented utterances. The
/// result depends only on `cfg`, including its seed.
pub fn generate_synthetic(cfg: &GeneratorConfig, n_utterances: usize) -> Result<SyntheticCorpus> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // stems[i] lists stem i's forms: the bare stem, then one per suffix.
    let stems = draw_vocabulary(cfg, &mut rng)?;

    let mut table = PronunciationTable::default();
    let mut stem_map = StemMap::with_default_rules();
    let mut lexicon = BTreeMap::new();
    for forms in &stems {
        stem_map.insert(&forms[0].spelling, forms[0].sememe.clone());
        for f in forms {
            table.insert(&f.spelling, f.phones.clone())?;
            let e = f.entry();
            lexicon.insert(e.canonical_id(), e);
        }
    }
    let mut suffix_rules: Vec<(String, String)> = stem_map.suffix_rules().to_vec();
    for s in &cfg.suffixes {
        if !suffix_rules
            .iter()
            .any(|(x, r)| x == &s.spelling && r.is_empty())
        {
            suffix_rules.push((s.spelling.clone(), String::new()));
        }
    }
    stem_map.set_suffix_rules(suffix_rules);

    let weights: Vec<f64> = (1..=stems.len())
        .map(|r| (r as f64).powf(-cfg.zipf_exponent))
        .collect();
    let zipf = WeightedIndex::new(&weights).expect("positive weights");

    let mut records = Vec::with_capacity(n_utterances);
    for _ in 0..n_utterances {
        let n_words = rng.gen_range(cfg.utterance_length.0..=cfg.utterance_length.1);
        let mut rec = CorpusRecord {
            gold: Some(Vec::with_capacity(n_words)),
            ..Default::default()
        };
        let mut words = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            let forms = &stems[zipf.sample(&mut rng)];
            let form = if !cfg.suffixes.is_empty() && rng.gen_bool(cfg.suffix_rate) {
                &forms[1 + rng.gen_range(0..cfg.suffixes.len())]
            } else {
                &forms[0]
            };
            let start = rec.phones.len();
            rec.phones.extend_from_slice(&form.phones);
            rec.sememes.insert(form.sememe.clone());
            let span = GoldSpan::new(start, rec.phones.len(), form.entry().canonical_id());
            rec.gold.as_mut().expect("set above").push(span);
            words.push(form.spelling.as_str());
        }
        rec.text = Some(words.join(" "));
        if cfg.substitution_noise_rate > 0.0 {
            for p in rec.phones.iter_mut() {
                if rng.gen_bool(cfg.substitution_noise_rate) {
                    let others: Vec<&Phone> =
                        cfg.phone_alphabet.iter().filter(|q| *q != p).collect();
                    if !others.is_empty() {
                        *p = others[rng.gen_range(0..others.len())].clone();
                    }
                }
            }
        }
        records.push(rec);
    }

    Ok(SyntheticCorpus {
        table,
        stems: stem_map,
        records,
        lexicon: lexicon.into_values().collect(),
    })
}

fn draw_vocabulary(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Form>>> {
    let distinct = cfg.vocab_size - cfg.homophone_pairs;
    let mut used: BTreeSet<Vec<Phone>> = BTreeSet::new();
    let mut stems: Vec<Vec<Form>> = Vec::with_capacity(cfg.vocab_size);
    let mut attempts = 0;
    for i in 0..cfg.vocab_size {
        let phones = if i < distinct {
            loop {
                attempts += 1;
                if attempts > MAX_ATTEMPTS_PER_STEM * cfg.vocab_size {
                    return Err(Error::VocabularyCollision {
                        wanted: cfg.vocab_size,
                        attempts: attempts - 1,
                    });
                }
                let len = rng.gen_range(cfg.word_length.0..=cfg.word_length.1);
                let phones: Vec<Phone> = (0..len)
                    .map(|_| cfg.phone_alphabet[rng.gen_range(0..cfg.phone_alphabet.len())].clone())
                    .collect();
                let forms = inflect(&phones, &cfg.suffixes);
                let fresh = forms.iter().all(|f| !used.contains(f))
                    && forms.iter().collect::<BTreeSet<_>>().len() == forms.len();
                if fresh {
                    used.extend(forms);
                    break phones;
                }
            }
        } else {
            // Homophones sound like the most frequent stems.
            stems[i - distinct][0].phones.clone()
        };
        let spelling = format!("w{i:03}");
        let sememe = Sememe::new(spelling.to_uppercase()).expect("valid sememe");
        let forms = inflect(&phones, &cfg.suffixes)
            .into_iter()
            .enumerate()
            .map(|(k, phones)| Form {
                spelling: if k == 0 {
                    spelling.clone()
                } else {
                    format!("{spelling}{}", cfg.suffixes[k - 1].spelling)
                },
                phones,
                sememe: sememe.clone(),
            })
            .collect();
        stems.push(forms);
    }
    Ok(stems)
}

fn inflect(stem: &[Phone], suffixes: &[Suffix]) -> Vec<Vec<Phone>> {
    std::iter::once(stem.to_vec())
        .chain(suffixes.iter().map(|s| [stem, &s.phones[..]].concat()))
        .collect()
}
