use crate::dictionary::Dictionary;
use crate::entry::{LexEntry, Utterance};
use crate::parser::{best_parse, Parse, ParseLexicon};

use super::TrainConfig;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaintenanceReport {
    /// Value of `utterances_seen` when the pass ran.
    pub at: u64,
    pub removed_unused: Vec<String>,
    pub removed_decomposable: Vec<String>,
}

/// Prunes the dictionary: first entries old enough yet used fewer than
/// `min_window_uses` times since the last pass, then entries that other
/// words parse perfectly. Both sweeps run in canonical-id order and each
/// decomposition check sees the removals made before it. Window counters
/// reset afterwards.
pub fn maintain(dict: &mut Dictionary, cfg: &TrainConfig) -> MaintenanceReport {
    let now = dict.utterances_seen;
    let min_age = cfg.min_age();

    let stale: Vec<String> = dict
        .iter()
        .filter(|(_, e)| {
            e.window_use_count < cfg.min_window_uses && now.saturating_sub(e.created_at) >= min_age
        })
        .map(|(id, _)| id.to_string())
        .collect();
    for id in &stale {
        dict.remove(id);
    }

    let ids: Vec<String> = dict.ids().map(str::to_string).collect();
    let mut decomposable = Vec::new();
    for id in ids {
        let Some(entry) = dict.get(&id) else { continue };
        if decomposition(dict, &id, entry, cfg).is_some() {
            dict.remove(&id);
            decomposable.push(id);
        }
    }

    for entry in dict.entries_mut() {
        entry.window_use_count = 0;
    }

    MaintenanceReport {
        at: now,
        removed_unused: stale,
        removed_decomposable: decomposable,
    }
}

/// A parse of `entry` by two or more other words that reproduces its phones
/// exactly and its sememes exactly, if the cost search finds one.
pub fn decomposition(
    dict: &Dictionary,
    id: &str,
    entry: &LexEntry,
    cfg: &TrainConfig,
) -> Option<Parse> {
    let lex = ParseLexicon::excluding(dict, id);
    let utt = Utterance::new(entry.phones().to_vec(), entry.sememes().clone());
    let parse = best_parse(&lex, &utt, &cfg.weights, &cfg.limits);
    let exact = parse.placements.len() >= 2
        && parse.unparsed_positions.is_empty()
        && parse.mismatched_count == 0
        && parse.extra_sememe_count == 0
        && &parse.covered_sememes == entry.sememes();
    exact.then_some(parse)
}
