//! The acquisition loop.
//!
//! For each utterance: parse it with the current dictionary, propose gap
//! words and adjusted words from that parse, reparse with the proposals
//! added, and keep the proposals the reparse used if it explains the
//! utterance well enough. Every `maintenance_interval` utterances the
//! dictionary is pruned.

mod hypothesis;
mod maintain;
pub mod trace;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use hypothesis::{hypothesize_adjustments, hypothesize_gap_words, Hypothesis, Origin};
pub use maintain::{decomposition, maintain, MaintenanceReport};
pub use trace::{TraceRecord, TrainingReport};

use crate::dictionary::{AddOutcome, Dictionary, DEFAULT_MAINTENANCE_INTERVAL};
use crate::entry::Utterance;
use crate::error::{Error, Result};
use crate::parser::{best_parse, CostWeights, Parse, ParseLexicon, SearchLimits};

/// When a reparse counts as explaining its utterance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcceptRule {
    pub max_unparsed: usize,
    pub max_mismatch: usize,
    pub require_all_sememes: bool,
}

impl Default for AcceptRule {
    fn default() -> Self {
        AcceptRule {
            max_unparsed: 0,
            max_mismatch: 0,
            require_all_sememes: true,
        }
    }
}

impl AcceptRule {
    pub fn accepts(&self, parse: &Parse) -> bool {
        parse.unparsed_positions.len() <= self.max_unparsed
            && parse.mismatched_count <= self.max_mismatch
            && (!self.require_all_sememes || parse.missing_sememes.is_empty())
    }

    /// Parses `max_unparsed=0,max_mismatch=1,require_all_sememes=false`;
    /// unnamed fields keep their defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut rule = AcceptRule::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("expected key=value, got {item:?}")))?;
            let bad = || Error::InvalidConfig(format!("bad value in {item:?}"));
            match key.trim() {
                "max_unparsed" => rule.max_unparsed = value.trim().parse().map_err(|_| bad())?,
                "max_mismatch" => rule.max_mismatch = value.trim().parse().map_err(|_| bad())?,
                "require_all_sememes" => {
                    rule.require_all_sememes = value.trim().parse().map_err(|_| bad())?
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown accept field {other:?}"
                    )))
                }
            }
        }
        Ok(rule)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub weights: CostWeights,
    pub limits: SearchLimits,
    /// Refuse words with an empty sememe set.
    pub gate_on: bool,
    pub accept: AcceptRule,
    pub maintenance_interval: u64,
    pub min_window_uses: u64,
    /// Minimum age in utterances before an entry can be pruned for disuse.
    /// `None` means `maintenance_interval`.
    pub min_age: Option<u64>,
    pub epochs: usize,
    pub seed: u64,
    /// Visit the corpus in a seeded random order each epoch.
    pub shuffle: bool,
    /// Worker threads for first-pass parsing; results do not depend on it.
    pub jobs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            weights: CostWeights::default(),
            limits: SearchLimits::default(),
            gate_on: true,
            accept: AcceptRule::default(),
            maintenance_interval: DEFAULT_MAINTENANCE_INTERVAL,
            min_window_uses: 3,
            min_age: None,
            epochs: 1,
            seed: 0,
            shuffle: false,
            jobs: 1,
        }
    }
}

impl TrainConfig {
    pub fn min_age(&self) -> u64 {
        self.min_age.unwrap_or(self.maintenance_interval)
    }

    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        self.limits.validate()?;
        if self.maintenance_interval == 0 {
            return Err(Error::InvalidConfig(
                "maintenance interval must be at least 1".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidConfig("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of reparsing an utterance with hypotheses added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptOutcome {
    pub reparse: Parse,
    /// Whether the reparse met the acceptance rule.
    pub good: bool,
    /// Hypotheses used by a good reparse and now in the dictionary.
    pub accepted: Vec<String>,
    /// Hypotheses used by a good reparse but refused by the gate.
    pub gate_rejected: Vec<String>,
}

/// Reparses `utt` over the dictionary plus `hyps`. When the reparse meets
/// the acceptance rule, the hypotheses it used join the dictionary and
/// every word it used has its counters bumped by its number of placements.
/// Otherwise nothing changes.
pub fn accept_step(
    dict: &mut Dictionary,
    utt: &Utterance,
    hyps: &[Hypothesis],
    cfg: &TrainConfig,
) -> AcceptOutcome {
    let reparse = {
        let lex = ParseLexicon::with_extra(dict, hyps.iter().map(|h| &h.entry));
        best_parse(&lex, utt, &cfg.weights, &cfg.limits)
    };
    accept_parse(dict, hyps, reparse, cfg)
}

fn accept_parse(
    dict: &mut Dictionary,
    hyps: &[Hypothesis],
    reparse: Parse,
    cfg: &TrainConfig,
) -> AcceptOutcome {
    let good = cfg.accept.accepts(&reparse);
    let mut accepted = Vec::new();
    let mut gate_rejected = Vec::new();
    if good {
        let mut uses: BTreeMap<&str, u64> = BTreeMap::new();
        for p in &reparse.placements {
            *uses.entry(p.entry_id.as_str()).or_default() += 1;
        }
        for &id in uses.keys() {
            if dict.contains(id) {
                continue;
            }
            let Some(h) = hyps.iter().find(|h| h.id() == id) else {
                continue;
            };
            let mut entry = h.entry.clone();
            entry.created_at = dict.utterances_seen;
            match dict.add(entry, cfg.gate_on) {
                AddOutcome::Added | AddOutcome::Merged => accepted.push(id.to_string()),
                AddOutcome::GateRejected => gate_rejected.push(id.to_string()),
            }
        }
        for (id, n) in uses {
            if let Some(entry) = dict.get_mut(id) {
                entry.use_count += n;
                entry.window_use_count += n;
            }
        }
    }
    AcceptOutcome {
        reparse,
        good,
        accepted,
        gate_rejected,
    }
}

/// Learns from one utterance, running maintenance when the utterance count
/// reaches a multiple of the interval.
pub fn process_utterance(dict: &mut Dictionary, utt: &Utterance, cfg: &TrainConfig) -> TraceRecord {
    let first = best_parse(&ParseLexicon::new(dict), utt, &cfg.weights, &cfg.limits);
    process_with_first_parse(dict, utt, first, cfg)
}

fn process_with_first_parse(
    dict: &mut Dictionary,
    utt: &Utterance,
    first: Parse,
    cfg: &TrainConfig,
) -> TraceRecord {
    let index = dict.utterances_seen;
    let mut hypotheses = hypothesize_gap_words(utt, &first);
    for adj in hypothesize_adjustments(utt, &first) {
        if !hypotheses.iter().any(|h| h.id() == adj.id()) {
            hypotheses.push(adj);
        }
    }

    let outcome = if hypotheses.is_empty() {
        accept_parse(dict, &hypotheses, first.clone(), cfg)
    } else {
        accept_step(dict, utt, &hypotheses, cfg)
    };

    dict.utterances_seen += 1;
    let maintenance = dict
        .utterances_seen
        .is_multiple_of(cfg.maintenance_interval.max(1))
        .then(|| maintain(dict, cfg));

    TraceRecord {
        index,
        utterance: utt.clone(),
        first,
        hypotheses,
        reparse: outcome.reparse,
        good: outcome.good,
        accepted: outcome.accepted,
        gate_rejected: outcome.gate_rejected,
        maintenance,
    }
}

pub fn train(
    dict: &mut Dictionary,
    corpus: &[Utterance],
    cfg: &TrainConfig,
) -> Result<TrainingReport> {
    train_with(dict, corpus, cfg, |_| {})
}

/// Folds [`process_utterance`] over the corpus for `cfg.epochs` passes,
/// then runs a final maintenance pass if utterances were seen since the
/// last one. `on_trace` sees every utterance's record in order.
///
/// With `cfg.jobs > 1`, first-pass parses for a window of utterances are
/// computed in parallel against one dictionary snapshot and reused only if
/// the dictionary's word set has not changed by the time each utterance is
/// applied, so the outcome is identical to the sequential fold.
pub fn train_with(
    dict: &mut Dictionary,
    corpus: &[Utterance],
    cfg: &TrainConfig,
    mut on_trace: impl FnMut(&TraceRecord),
) -> Result<TrainingReport> {
    cfg.validate()?;
    dict.maintenance_interval = cfg.maintenance_interval;
    let mut report = TrainingReport::new(dict.len());
    let pool = if cfg.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let window = cfg.jobs.max(1) * 16;
    let mut since_maintenance = 0u64;

    for epoch in 0..cfg.epochs {
        let mut order: Vec<usize> = (0..corpus.len()).collect();
        if cfg.shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(epoch as u64));
            order.shuffle(&mut rng);
        }
        for chunk in order.chunks(window) {
            let speculative: Option<(u64, Vec<Parse>)> = pool.as_ref().map(|pool| {
                let snapshot = &*dict;
                let parses = pool.install(|| {
                    chunk
                        .par_iter()
                        .map(|&i| {
                            best_parse(
                                &ParseLexicon::new(snapshot),
                                &corpus[i],
                                &cfg.weights,
                                &cfg.limits,
                            )
                        })
                        .collect()
                });
                (snapshot.generation(), parses)
            });
            for (slot, &i) in chunk.iter().enumerate() {
                let utt = &corpus[i];
                let first = match &speculative {
                    Some((generation, parses)) if *generation == dict.generation() => {
                        parses[slot].clone()
                    }
                    _ => best_parse(&ParseLexicon::new(dict), utt, &cfg.weights, &cfg.limits),
                };
                let record = process_with_first_parse(dict, utt, first, cfg);
                since_maintenance = if record.maintenance.is_some() {
                    0
                } else {
                    since_maintenance + 1
                };
                report.observe(&record, dict.len());
                on_trace(&record);
            }
        }
    }

    if since_maintenance > 0 {
        let m = maintain(dict, cfg);
        report.observe_maintenance(&m, dict.len());
        report.final_maintenance = Some(m);
    }
    report.finish(dict, cfg.epochs);
    Ok(report)
}
