//! Per-utterance trace records, training reports, and their line-oriented
//! log format.
//!
//! Every line is `kind \t utterance-index \t fields...`:
//!
//! ```text
//! utterance	0	n i n a	NINA
//! parse	0	first	5	<placements>	0 1 2 3	<mismatches>	NINA
//! hypothesis	0	gap	n.i.n.a|NINA
//! parse	0	reparse	0.01	0:n.i.n.a|NINA
//! verdict	0	good
//! accept	0	n.i.n.a|NINA
//! ```
//!
//! Parse lines carry cost, space-separated `offset:id` placements,
//! unparsed positions, mismatched positions, and missing sememes. Other
//! kinds are `gate_reject`, `prune_unused`, `prune_decomposable`,
//! `entries` (dictionary size) and `report` (`key \t value`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{MaintenanceReport, Origin};
use crate::dictionary::Dictionary;
use crate::entry::{parse_canonical_id, Utterance};
use crate::error::{Error, Result};
use crate::parser::Parse;
use crate::symbols::{join_phones, join_sememes, phones_from_str, sememes_from_str};

/// Everything that happened while learning from one utterance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub index: u64,
    pub utterance: Utterance,
    pub first: Parse,
    pub hypotheses: Vec<super::Hypothesis>,
    pub reparse: Parse,
    /// Whether the reparse met the acceptance rule.
    pub good: bool,
    pub accepted: Vec<String>,
    pub gate_rejected: Vec<String>,
    pub maintenance: Option<MaintenanceReport>,
}

impl TraceRecord {
    pub fn write_log<W: Write>(&self, mut out: W) -> Result<()> {
        let i = self.index;
        writeln!(
            out,
            "utterance\t{i}\t{}\t{}",
            join_phones(&self.utterance.phones, " "),
            join_sememes(&self.utterance.sememes, " ")
        )?;
        writeln!(out, "parse\t{i}\tfirst\t{}", parse_fields(&self.first))?;
        for h in &self.hypotheses {
            writeln!(out, "hypothesis\t{i}\t{}\t{}", h.origin, h.id())?;
        }
        writeln!(out, "parse\t{i}\treparse\t{}", parse_fields(&self.reparse))?;
        writeln!(
            out,
            "verdict\t{i}\t{}",
            if self.good { "good" } else { "poor" }
        )?;
        for id in &self.accepted {
            writeln!(out, "accept\t{i}\t{id}")?;
        }
        for id in &self.gate_rejected {
            writeln!(out, "gate_reject\t{i}\t{id}")?;
        }
        if let Some(m) = &self.maintenance {
            write_maintenance(&mut out, i, m)?;
        }
        Ok(())
    }
}

fn write_maintenance<W: Write>(out: &mut W, i: u64, m: &MaintenanceReport) -> Result<()> {
    for id in &m.removed_unused {
        writeln!(out, "prune_unused\t{i}\t{id}")?;
    }
    for id in &m.removed_decomposable {
        writeln!(out, "prune_decomposable\t{i}\t{id}")?;
    }
    Ok(())
}

fn parse_fields(p: &Parse) -> String {
    let placements: Vec<String> = p
        .placements
        .iter()
        .map(|p| format!("{}:{}", p.offset, p.entry_id))
        .collect();
    let unparsed: Vec<String> = p.unparsed_positions.iter().map(usize::to_string).collect();
    let mismatches: Vec<String> = p
        .placements
        .iter()
        .flat_map(|p| {
            p.mismatch_positions
                .iter()
                .map(move |m| format!("{m}@{}", p.offset))
        })
        .collect();
    format!(
        "{}\t{}\t{}\t{}\t{}",
        p.cost,
        placements.join(" "),
        unparsed.join(" "),
        mismatches.join(" "),
        join_sememes(&p.missing_sememes, " ")
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrainingReport {
    pub utterances: u64,
    pub epochs: usize,
    pub initial_entries: usize,
    pub good_parses: u64,
    pub poor_parses: u64,
    pub words_added: u64,
    pub gate_rejections: u64,
    pub maintenance_passes: u64,
    pub pruned_unused: u64,
    pub pruned_decomposable: u64,
    /// `(utterances seen, dictionary size)` after each maintenance pass.
    pub entry_counts: Vec<(u64, usize)>,
    /// Entries whose `use_count` is still zero at the end.
    pub never_used: usize,
    pub final_entries: usize,
    pub utterances_seen: u64,
    /// The closing maintenance pass, when one ran.
    pub final_maintenance: Option<MaintenanceReport>,
}

impl TrainingReport {
    pub(crate) fn new(initial_entries: usize) -> Self {
        TrainingReport {
            initial_entries,
            ..Default::default()
        }
    }

    pub(crate) fn observe(&mut self, record: &TraceRecord, dict_len: usize) {
        self.utterances += 1;
        if record.good {
            self.good_parses += 1;
        } else {
            self.poor_parses += 1;
        }
        self.words_added += record.accepted.len() as u64;
        self.gate_rejections += record.gate_rejected.len() as u64;
        if let Some(m) = &record.maintenance {
            self.observe_maintenance(m, dict_len);
        }
    }

    pub(crate) fn observe_maintenance(&mut self, m: &MaintenanceReport, dict_len: usize) {
        self.maintenance_passes += 1;
        self.pruned_unused += m.removed_unused.len() as u64;
        self.pruned_decomposable += m.removed_decomposable.len() as u64;
        self.entry_counts.push((m.at, dict_len));
    }

    pub(crate) fn finish(&mut self, dict: &Dictionary, epochs: usize) {
        self.epochs = epochs;
        self.never_used = dict.entries().filter(|e| e.use_count == 0).count();
        self.final_entries = dict.len();
        self.utterances_seen = dict.utterances_seen;
    }

    pub fn write_log<W: Write>(&self, mut out: W) -> Result<()> {
        let i = self.utterances_seen;
        if let Some(m) = &self.final_maintenance {
            write_maintenance(&mut out, i, m)?;
        }
        for (at, n) in &self.entry_counts {
            writeln!(out, "entries\t{at}\t{n}")?;
        }
        let fields: [(&str, String); 13] = [
            ("utterances", self.utterances.to_string()),
            ("epochs", self.epochs.to_string()),
            ("initial_entries", self.initial_entries.to_string()),
            ("good_parses", self.good_parses.to_string()),
            ("poor_parses", self.poor_parses.to_string()),
            ("words_added", self.words_added.to_string()),
            ("gate_rejections", self.gate_rejections.to_string()),
            ("maintenance_passes", self.maintenance_passes.to_string()),
            ("pruned_unused", self.pruned_unused.to_string()),
            ("pruned_decomposable", self.pruned_decomposable.to_string()),
            ("never_used", self.never_used.to_string()),
            ("final_entries", self.final_entries.to_string()),
            ("utterances_seen", self.utterances_seen.to_string()),
        ];
        for (key, value) in fields {
            writeln!(out, "report\t{i}\t{key}\t{value}")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// A parse as recorded in a log.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoggedParse {
    pub cost: String,
    pub placements: Vec<(usize, String)>,
    pub unparsed: Vec<usize>,
    /// `(utterance position, offset of the placement it belongs to)`.
    pub mismatches: Vec<(usize, usize)>,
    pub missing: Vec<String>,
}

/// All log lines for one utterance index, regrouped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoggedUtterance {
    pub index: u64,
    pub utterance: Option<Utterance>,
    pub first: Option<LoggedParse>,
    pub hypotheses: Vec<(Origin, String)>,
    pub reparse: Option<LoggedParse>,
    pub good: Option<bool>,
    pub accepted: Vec<String>,
    pub gate_rejected: Vec<String>,
    pub pruned_unused: Vec<String>,
    pub pruned_decomposable: Vec<String>,
    pub entries: Option<usize>,
    pub report: Vec<(String, String)>,
}

impl LoggedUtterance {
    /// Ids of every word this record mentions.
    pub fn mentions(&self, id: &str) -> bool {
        let in_parse = |p: &Option<LoggedParse>| {
            p.as_ref()
                .is_some_and(|p| p.placements.iter().any(|(_, x)| x == id))
        };
        in_parse(&self.first)
            || in_parse(&self.reparse)
            || self.hypotheses.iter().any(|(_, x)| x == id)
            || [
                &self.accepted,
                &self.gate_rejected,
                &self.pruned_unused,
                &self.pruned_decomposable,
            ]
            .iter()
            .any(|v| v.iter().any(|x| x == id))
    }
}

/// Reads a trace log, grouping lines by utterance index in first-seen
/// order.
pub fn read_log<R: BufRead>(input: R) -> Result<Vec<LoggedUtterance>> {
    let mut order: Vec<u64> = Vec::new();
    let mut groups: BTreeMap<u64, LoggedUtterance> = BTreeMap::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = n + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 {
            return Err(Error::format(lineno, "expected kind, index and payload"));
        }
        let index: u64 = fields[1]
            .parse()
            .map_err(|_| Error::format(lineno, format!("bad utterance index {:?}", fields[1])))?;
        let g = groups.entry(index).or_insert_with(|| {
            order.push(index);
            LoggedUtterance {
                index,
                ..Default::default()
            }
        });
        let need = |k: usize| -> Result<()> {
            if fields.len() == k {
                Ok(())
            } else {
                Err(Error::format(
                    lineno,
                    format!("{} line needs {k} fields", fields[0]),
                ))
            }
        };
        let bad = |e: Error| Error::format(lineno, e.to_string());
        match fields[0] {
            "utterance" => {
                need(4)?;
                let phones = phones_from_str(fields[2]).map_err(bad)?;
                let sememes = sememes_from_str(fields[3]).map_err(bad)?;
                g.utterance = Some(Utterance::new(phones, sememes));
            }
            "parse" => {
                need(8)?;
                let parsed = read_parse(&fields[3..]).map_err(|m| Error::format(lineno, m))?;
                match fields[2] {
                    "first" => g.first = Some(parsed),
                    "reparse" => g.reparse = Some(parsed),
                    other => {
                        return Err(Error::format(
                            lineno,
                            format!("unknown parse stage {other:?}"),
                        ))
                    }
                }
            }
            "hypothesis" => {
                need(4)?;
                let origin = fields[2]
                    .parse()
                    .map_err(|m: String| Error::format(lineno, m))?;
                g.hypotheses.push((origin, checked_id(fields[3], lineno)?));
            }
            "verdict" => {
                need(3)?;
                g.good = Some(match fields[2] {
                    "good" => true,
                    "poor" => false,
                    other => {
                        return Err(Error::format(lineno, format!("unknown verdict {other:?}")))
                    }
                });
            }
            "accept" => {
                need(3)?;
                g.accepted.push(checked_id(fields[2], lineno)?);
            }
            "gate_reject" => {
                need(3)?;
                g.gate_rejected.push(checked_id(fields[2], lineno)?);
            }
            "prune_unused" => {
                need(3)?;
                g.pruned_unused.push(checked_id(fields[2], lineno)?);
            }
            "prune_decomposable" => {
                need(3)?;
                g.pruned_decomposable.push(checked_id(fields[2], lineno)?);
            }
            "entries" => {
                need(3)?;
                g.entries = Some(
                    fields[2]
                        .parse()
                        .map_err(|_| Error::format(lineno, "bad entry count"))?,
                );
            }
            "report" => {
                need(4)?;
                g.report
                    .push((fields[2].to_string(), fields[3].to_string()));
            }
            other => {
                return Err(Error::format(
                    lineno,
                    format!("unknown event kind {other:?}"),
                ))
            }
        }
    }
    Ok(order
        .into_iter()
        .filter_map(|i| groups.remove(&i))
        .collect())
}

fn checked_id(id: &str, lineno: usize) -> Result<String> {
    parse_canonical_id(id).map_err(|e| Error::format(lineno, e.to_string()))?;
    Ok(id.to_string())
}

fn read_parse(fields: &[&str]) -> std::result::Result<LoggedParse, String> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("bad position {s:?}"))
    };
    let mut placements = Vec::new();
    for item in fields[1].split_whitespace() {
        let (offset, id) = item
            .split_once(':')
            .ok_or_else(|| format!("bad placement {item:?}"))?;
        parse_canonical_id(id).map_err(|e| e.to_string())?;
        placements.push((num(offset)?, id.to_string()));
    }
    let unparsed = fields[2]
        .split_whitespace()
        .map(num)
        .collect::<std::result::Result<_, _>>()?;
    let mut mismatches = Vec::new();
    for item in fields[3].split_whitespace() {
        let (pos, offset) = item
            .split_once('@')
            .ok_or_else(|| format!("bad mismatch {item:?}"))?;
        mismatches.push((num(pos)?, num(offset)?));
    }
    Ok(LoggedParse {
        cost: fields[0].to_string(),
        placements,
        unparsed,
        mismatches,
        missing: fields[4].split_whitespace().map(str::to_string).collect(),
    })
}

/// Renders one logged utterance as Utterance / Words / Unparsed /
/// Mismatched tables for the first parse and the reparse.
pub fn render(u: &LoggedUtterance) -> String {
    let mut out = String::new();
    if u.utterance.is_some() {
        let _ = writeln!(out, "utterance {}", u.index);
    } else {
        let _ = writeln!(out, "after {} utterances", u.index);
    }
    if let Some(utt) = &u.utterance {
        if let Some(first) = &u.first {
            render_table(&mut out, utt, first, &[]);
        }
        if !u.hypotheses.is_empty() {
            for (origin, id) in &u.hypotheses {
                let _ = writeln!(out, "  new word    {}  ({origin})", show_id(id));
            }
        }
        if let Some(reparse) = &u.reparse {
            if !u.hypotheses.is_empty() {
                let unused: Vec<&str> = u
                    .first
                    .iter()
                    .flat_map(|f| f.placements.iter())
                    .map(|(_, id)| id.as_str())
                    .filter(|id| !reparse.placements.iter().any(|(_, r)| r == id))
                    .collect();
                render_table(&mut out, utt, reparse, &unused);
            }
        }
    }
    if let Some(good) = u.good {
        let _ = writeln!(out, "  verdict     {}", if good { "good" } else { "poor" });
    }
    for (label, ids) in [
        ("accepted", &u.accepted),
        ("gate-rejected", &u.gate_rejected),
        ("pruned (unused)", &u.pruned_unused),
        ("pruned (decomposable)", &u.pruned_decomposable),
    ] {
        for id in ids.iter() {
            let _ = writeln!(out, "  {label:<11} {}", show_id(id));
        }
    }
    if let Some(n) = u.entries {
        let _ = writeln!(out, "  entries     {n}");
    }
    for (k, v) in &u.report {
        let _ = writeln!(out, "  {k:<20} {v}");
    }
    out
}

fn show_id(id: &str) -> String {
    match parse_canonical_id(id) {
        Ok((phones, sememes)) => format!(
            "/{}/ {{ {} }}",
            join_phones(&phones, ""),
            join_sememes(&sememes, " ")
        ),
        Err(_) => id.to_string(),
    }
}

fn render_table(out: &mut String, utt: &Utterance, parse: &LoggedParse, unused: &[&str]) {
    let mut rows: Vec<(String, String, String)> = Vec::new();
    rows.push((
        "Utterance:".into(),
        format!("/{}/", join_phones(&utt.phones, "")),
        format!("{{ {} }}", join_sememes(&utt.sememes, " ")),
    ));
    let mut label = "Words:";
    for (_, id) in &parse.placements {
        let (phones, sememes) = parse_canonical_id(id).unwrap_or_default();
        rows.push((
            label.into(),
            format!("/{}/", join_phones(&phones, "")),
            format!("{{ {} }}", join_sememes(&sememes, " ")),
        ));
        label = "";
    }
    for id in unused {
        let (phones, sememes) = parse_canonical_id(id).unwrap_or_default();
        rows.push((
            label.into(),
            format!("unused /{}/", join_phones(&phones, "")),
            format!("{{ {} }}", join_sememes(&sememes, " ")),
        ));
        label = "";
    }
    if label == "Words:" {
        rows.push((label.into(), String::new(), String::new()));
    }

    let missing = if parse.missing.is_empty() {
        String::new()
    } else {
        format!("{{ {} }}", parse.missing.join(" "))
    };
    let mut runs: Vec<std::ops::Range<usize>> = Vec::new();
    for &p in &parse.unparsed {
        match runs.last_mut() {
            Some(r) if r.end == p => r.end = p + 1,
            _ => runs.push(p..p + 1),
        }
    }
    if runs.is_empty() {
        rows.push(("Unparsed:".into(), String::new(), missing));
    } else {
        for (i, run) in runs.into_iter().enumerate() {
            let phones = utt
                .phones
                .get(run)
                .map(|p| join_phones(p, ""))
                .unwrap_or_default();
            let sem = if i == 0 {
                missing.clone()
            } else {
                String::new()
            };
            rows.push((
                if i == 0 { "Unparsed:" } else { "" }.into(),
                format!("/{phones}/"),
                sem,
            ));
        }
    }

    // Several placements may share an offset; show the phone of the one
    // that disagrees with the utterance there.
    let mismatched: Vec<String> = parse
        .mismatches
        .iter()
        .filter_map(|&(pos, offset)| {
            parse
                .placements
                .iter()
                .filter(|(o, _)| *o == offset)
                .filter_map(|(_, id)| parse_canonical_id(id).ok())
                .filter_map(|(phones, _)| phones.get(pos - offset).cloned())
                .find(|word| utt.phones.get(pos) != Some(word))
                .map(|p| p.to_string())
        })
        .collect();
    rows.push(("Mismatched:".into(), mismatched.join(" "), String::new()));

    let width = rows
        .iter()
        .map(|r| r.1.chars().count())
        .max()
        .unwrap_or(0)
        .max(6);
    let _ = writeln!(out, "  {:<11} {:<width$}  Sememes", "", "Phones");
    for (label, phones, sememes) in rows {
        let line = format!("  {label:<11} {phones:<width$}  {sememes}");
        let _ = writeln!(out, "{}", line.trim_end());
    }
}
