use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use lexacq::eval::{lexicon_metrics, Metrics, Segmentation};
use lexacq::learner::{self, trace};
use lexacq::pipeline::{
    generate_synthetic, read_corpus, write_corpus, CorpusRecord, PronunciationTable, StemMap,
    SyntheticCorpus,
};
use lexacq::{parser, phones_from_str, Dictionary, ParseLexicon, Utterance};

use crate::args::{EvalArgs, GenArgs, InspectArgs, SegmentArgs, TrainArgs, TranscribeArgs};

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn train(a: TrainArgs, quiet: bool) -> Result<ExitCode> {
    let cfg = a.config()?;
    let records = read_corpus(&a.corpus)?;
    let corpus: Vec<Utterance> = records.iter().map(CorpusRecord::utterance).collect();
    let mut dict = match &a.init {
        Some(p) => Dictionary::load(p, cfg.gate_on)?,
        None => Dictionary::new(cfg.maintenance_interval),
    };

    let mut trace_out = a.trace.as_deref().map(create).transpose()?;
    let mut trace_err = None;
    let report = learner::train_with(&mut dict, &corpus, &cfg, |record| {
        if let Some(out) = trace_out.as_mut() {
            if let Err(e) = record.write_log(out) {
                trace_err.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = trace_err {
        return Err(e.into());
    }
    if let Some(mut out) = trace_out {
        report.write_log(&mut out)?;
        out.flush()?;
    }

    dict.save(&a.out)?;
    if let Some(p) = &a.report {
        let mut out = create(p)?;
        report.write_log(&mut out)?;
        out.flush()?;
    }
    if quiet {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!(
        "trained on {} utterances: {} entries ({} added, {} gate rejections, {} pruned)",
        report.utterances,
        report.final_entries,
        report.words_added,
        report.gate_rejections,
        report.pruned_unused + report.pruned_decomposable
    );
    Ok(ExitCode::SUCCESS)
}

pub fn segment(a: SegmentArgs) -> Result<ExitCode> {
    let dict = Dictionary::load(&a.lexicon, false)?;
    let weights = a.parse.weights()?;
    let limits = a.parse.limits()?;
    let lex = ParseLexicon::new(&dict);

    let lines: Vec<String> = match (&a.phones, &a.input) {
        (Some(p), _) => vec![p.clone()],
        (None, Some(path)) => fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?
            .lines()
            .map(str::to_string)
            .collect(),
        (None, None) => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s.lines().map(str::to_string).collect()
        }
    };

    let mut out = output(a.out.as_deref())?;
    for (n, line) in lines.iter().enumerate() {
        let phones_col = line.split('\t').next().unwrap_or("");
        let phones = phones_from_str(phones_col).with_context(|| format!("line {}", n + 1))?;
        let items: Vec<String> = parser::segment_phones(&lex, &phones, &weights, &limits)
            .into_iter()
            .map(|(id, offset)| format!("{offset}:{id}"))
            .collect();
        writeln!(out, "{}", items.join(" "))?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn read_prediction(path: &Path, gold: &[Segmentation]) -> Result<Vec<Segmentation>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != gold.len() {
        bail!(
            "{}: {} lines but the gold corpus has {} utterances",
            path.display(),
            lines.len(),
            gold.len()
        );
    }
    lines
        .iter()
        .zip(gold)
        .enumerate()
        .map(|(n, (line, g))| {
            let items = line
                .split_whitespace()
                .map(|item| {
                    let (offset, id) = item
                        .split_once(':')
                        .with_context(|| format!("bad item {item:?}"))?;
                    Ok((
                        offset
                            .parse::<usize>()
                            .with_context(|| format!("bad offset in {item:?}"))?,
                        id.to_string(),
                    ))
                })
                .collect::<Result<Vec<_>>>()
                .with_context(|| format!("{} line {}", path.display(), n + 1))?;
            Segmentation::from_offsets(g.len, &items)
                .with_context(|| format!("{} line {}", path.display(), n + 1))
        })
        .collect()
}

pub fn eval(a: EvalArgs) -> Result<ExitCode> {
    let records = read_corpus(&a.gold)?;
    let gold = records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.gold_segmentation()
                .with_context(|| format!("gold record {} has no gold spans", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let predicted = read_prediction(&a.prediction, &gold)?;
    let mut metrics = Metrics::compute(&predicted, &gold)?;
    if let (Some(learned), Some(gold_lex)) = (&a.lexicon, &a.gold_lexicon) {
        let learned = Dictionary::load(learned, false)?;
        let gold_lex = Dictionary::load(gold_lex, false)?;
        metrics.lexicon = Some(lexicon_metrics(&learned, gold_lex.entries()));
    }
    let mut out = output(a.out.as_deref())?;
    metrics.write_report(&mut out)?;
    out.flush()?;
    if let Some(min) = a.min_f1 {
        if metrics.boundary.f1.value() < min {
            eprintln!("boundary F1 {} is below {min}", metrics.boundary.f1);
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn gen(a: GenArgs, quiet: bool) -> Result<ExitCode> {
    let cfg = a.config()?;
    let corpus = generate_synthetic(&cfg, a.utterances + a.held_out)?;
    let (train, held) = corpus.records.split_at(a.utterances);
    let dir = &a.out_dir;
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;

    write_corpus(train, dir.join("corpus.tsv"))?;
    if !held.is_empty() {
        write_corpus(held, dir.join("heldout.tsv"))?;
    }
    corpus.table.save(dir.join("pronunciations.tsv"))?;
    for (name, text) in [
        ("stems.tsv", corpus.stems.to_tsv()),
        ("suffix_rules.tsv", corpus.stems.rules_to_tsv()),
    ] {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    // The gold lexicon is what the training part actually uses.
    let gold = Dictionary::from_entries(SyntheticCorpus::attested_lexicon(train));
    gold.save(dir.join("gold_lexicon.tsv"))?;
    if quiet {
        return Ok(ExitCode::SUCCESS);
    }
    eprintln!(
        "wrote {} training and {} held-out utterances, {} gold words, to {}",
        train.len(),
        held.len(),
        gold.len(),
        dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn inspect(a: InspectArgs) -> Result<ExitCode> {
    let file = File::open(&a.log).with_context(|| format!("cannot open {}", a.log.display()))?;
    let logged = trace::read_log(BufReader::new(file))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for u in &logged {
        if a.utterance.is_some_and(|i| i != u.index) {
            continue;
        }
        if a.word.as_deref().is_some_and(|w| !u.mentions(w)) {
            continue;
        }
        let changed = !(u.accepted.is_empty()
            && u.gate_rejected.is_empty()
            && u.pruned_unused.is_empty()
            && u.pruned_decomposable.is_empty());
        if a.changes && !changed {
            continue;
        }
        writeln!(out, "{}", trace::render(u))?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn transcribe(a: TranscribeArgs) -> Result<ExitCode> {
    let table = PronunciationTable::load(&a.table)?;
    let mut stems = StemMap::load(&a.stems)?;
    if let Some(p) = &a.suffix_rules {
        stems.load_rules(p)?;
    }
    if let Some(p) = &a.zero_function_words {
        stems.load_function_words(p)?;
    }
    let file = File::open(&a.sentences)
        .with_context(|| format!("cannot open {}", a.sentences.display()))?;
    let mut records = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = CorpusRecord::from_sentence(&table, &stems, line.trim())
            .with_context(|| format!("{} line {}", a.sentences.display(), n + 1))?;
        records.push(rec);
    }
    write_corpus(&records, &a.out)?;
    Ok(ExitCode::SUCCESS)
}
