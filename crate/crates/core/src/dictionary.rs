//! The evolving lexicon and its TSV persistence.
//!
//! File format, one entry per line, sorted by canonical id:
//!
//! ```text
//! # utterances_seen=3 maintenance_interval=1000
//! n.i.n.a	NINA	5	5	0
//! ```
//!
//! Columns are dotted phones, comma-joined sememes (empty field for the
//! empty set), `use_count`, `window_use_count` and `created_at`. Lines
//! starting with `#` carry metadata or comments.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::entry::LexEntry;
use crate::error::{Error, Result};
use crate::symbols::{join_phones, join_sememes, Phone, Sememe, SememeSet};

pub const DEFAULT_MAINTENANCE_INTERVAL: u64 = 1000;

/// What happened to an entry handed to [`Dictionary::add`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddOutcome {
    Added,
    /// An entry with the same canonical id already existed; its counters were
    /// kept.
    Merged,
    /// The empty-semantics gate refused an entry without sememes.
    GateRejected,
}

#[derive(Clone, Debug)]
pub struct Dictionary {
    entries: BTreeMap<String, LexEntry>,
    pub utterances_seen: u64,
    pub maintenance_interval: u64,
    // Bumped whenever the entry set changes; counters do not count.
    generation: u64,
}

impl Default for Dictionary {
    fn default() -> Self {
        Dictionary::new(DEFAULT_MAINTENANCE_INTERVAL)
    }
}

impl PartialEq for Dictionary {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.utterances_seen == other.utterances_seen
            && self.maintenance_interval == other.maintenance_interval
    }
}

impl Eq for Dictionary {}

impl Dictionary {
    pub fn new(maintenance_interval: u64) -> Self {
        Dictionary {
            entries: BTreeMap::new(),
            utterances_seen: 0,
            maintenance_interval: maintenance_interval.max(1),
            generation: 0,
        }
    }

    /// Builds a dictionary from entries, bypassing the gate.
    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Self {
        let mut dict = Dictionary::default();
        for entry in entries {
            dict.add(entry, false);
        }
        dict
    }

    pub fn add(&mut self, entry: LexEntry, gate_on: bool) -> AddOutcome {
        if gate_on && entry.sememes().is_empty() {
            return AddOutcome::GateRejected;
        }
        let id = entry.canonical_id();
        if self.entries.contains_key(&id) {
            return AddOutcome::Merged;
        }
        self.entries.insert(id, entry);
        self.generation += 1;
        AddOutcome::Added
    }

    pub fn remove(&mut self, id: &str) -> Option<LexEntry> {
        let removed = self.entries.remove(id);
        if removed.is_some() {
            self.generation += 1;
        }
        removed
    }

    pub fn get(&self, id: &str) -> Option<&LexEntry> {
        self.entries.get(id)
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut LexEntry> {
        self.entries.get_mut(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    /// Entries in canonical-id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub(crate) fn entries_mut(&mut self) -> impl Iterator<Item = &mut LexEntry> {
        self.entries.values_mut()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Counter that changes whenever an entry is added or removed.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# utterances_seen={} maintenance_interval={}",
            self.utterances_seen, self.maintenance_interval
        )?;
        for entry in self.entries.values() {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                join_phones(entry.phones(), "."),
                join_sememes(entry.sememes(), ","),
                entry.use_count,
                entry.window_use_count,
                entry.created_at
            )?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the TSV format. With `gate_on`, entries with an empty sememe
    /// set are an error.
    pub fn read_tsv<R: Read>(input: R, gate_on: bool) -> Result<Self> {
        let mut dict = Dictionary::default();
        for (idx, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                read_metadata(&mut dict, meta, lineno)?;
                continue;
            }
            let entry = parse_entry_line(&line, lineno)?;
            if gate_on && entry.sememes().is_empty() {
                return Err(Error::format(lineno, "entry has an empty sememe set"));
            }
            let id = entry.canonical_id();
            if dict.entries.insert(id.clone(), entry).is_some() {
                return Err(Error::format(lineno, format!("duplicate entry {id}")));
            }
        }
        Ok(dict)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_tsv(BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>, gate_on: bool) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Dictionary::read_tsv(file, gate_on)
    }
}

fn read_metadata(dict: &mut Dictionary, meta: &str, lineno: usize) -> Result<()> {
    for field in meta.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else {
            continue;
        };
        let parse = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| Error::format(lineno, format!("bad value for {key}: {v:?}")))
        };
        match key {
            "utterances_seen" => dict.utterances_seen = parse(value)?,
            "maintenance_interval" => dict.maintenance_interval = parse(value)?.max(1),
            _ => {}
        }
    }
    Ok(())
}

fn parse_entry_line(line: &str, lineno: usize) -> Result<LexEntry> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 5 {
        return Err(Error::format(
            lineno,
            format!("expected 5 tab-separated fields, found {}", fields.len()),
        ));
    }
    let bad = |e: Error| Error::format(lineno, e.to_string());
    if fields[0].is_empty() {
        return Err(Error::format(lineno, "entry has no phones"));
    }
    let phones = fields[0]
        .split('.')
        .map(Phone::new)
        .collect::<Result<Vec<_>>>()
        .map_err(bad)?;
    let sememes = if fields[1].is_empty() {
        SememeSet::new()
    } else {
        fields[1]
            .split(',')
            .map(Sememe::new)
            .collect::<Result<SememeSet>>()
            .map_err(bad)?
    };
    let number = |i: usize, name: &str| {
        fields[i]
            .parse::<u64>()
            .map_err(|_| Error::format(lineno, format!("bad {name}: {:?}", fields[i])))
    };
    let use_count = number(2, "use_count")?;
    let window = number(3, "window_use_count")?;
    let created_at = number(4, "created_at")?;
    if window > use_count {
        return Err(Error::format(lineno, "window_use_count exceeds use_count"));
    }
    Ok(LexEntry::new(phones, sememes)
        .map_err(bad)?
        .with_counters(use_count, window, created_at))
}
