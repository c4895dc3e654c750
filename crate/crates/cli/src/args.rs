use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lexacq::learner::AcceptRule;
use lexacq::pipeline::{GeneratorConfig, Suffix};
use lexacq::{phones_from_str, CostWeights, SearchLimits, TrainConfig};

#[derive(Debug, Parser)]
#[command(
    name = "lexacq",
    version,
    about = "Lexicon acquisition from unsegmented phones paired with meaning sets"
)]
pub struct Cli {
    /// Suppress progress summaries on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a lexicon from a corpus.
    Train(TrainArgs),
    /// Split phone sequences into lexicon words.
    Segment(SegmentArgs),
    /// Score a segmentation (and optionally a lexicon) against gold data.
    Eval(EvalArgs),
    /// Generate a synthetic gold-segmented corpus.
    Gen(GenArgs),
    /// Render a training trace as tables.
    Inspect(InspectArgs),
    /// Build a corpus from plain sentences with a pronunciation table and stem map.
    Transcribe(TranscribeArgs),
}

#[derive(Debug, Args)]
pub struct ParseFlags {
    /// Cost weights as key=value pairs; unnamed weights keep their defaults.
    #[arg(
        long,
        default_value = "w_unparsed=1,w_mismatch=1,w_missing_sem=1,w_extra_sem=1,w_word=0.01"
    )]
    pub weights: String,
    /// States kept per position when an utterance is too large for exact search.
    #[arg(long, default_value_t = 64)]
    pub beam: usize,
    /// Longest utterance (in phones) searched exactly.
    #[arg(long, default_value_t = 64)]
    pub exact_length_max: usize,
    /// Largest utterance sememe set searched exactly.
    #[arg(long, default_value_t = 12)]
    pub exact_sememe_max: usize,
}

impl ParseFlags {
    pub fn weights(&self) -> Result<CostWeights> {
        Ok(CostWeights::parse_overrides(&self.weights)?)
    }

    pub fn limits(&self) -> Result<SearchLimits> {
        let limits = SearchLimits {
            exact_sememe_max: self.exact_sememe_max,
            exact_length_max: self.exact_length_max,
            beam_width: self.beam,
        };
        limits.validate()?;
        Ok(limits)
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Corpus TSV.
    pub corpus: PathBuf,
    /// Where to write the learned lexicon.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Start from this lexicon instead of an empty one.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Write the training report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write a per-utterance trace log here (readable by `inspect`).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub parse: ParseFlags,
    /// When a reparse counts as explaining the utterance.
    #[arg(
        long,
        default_value = "max_unparsed=0,max_mismatch=0,require_all_sememes=true"
    )]
    pub accept: String,
    /// Utterances between maintenance passes.
    #[arg(long, default_value_t = 1000)]
    pub maintenance_interval: u64,
    /// Entries used fewer times than this since the last pass may be pruned.
    #[arg(long, default_value_t = 3)]
    pub min_window_uses: u64,
    /// Minimum entry age, in utterances, before disuse pruning [default: the maintenance interval].
    #[arg(long)]
    pub min_age: Option<u64>,
    /// Let words with an empty sememe set into the lexicon.
    #[arg(long)]
    pub allow_empty_sememes: bool,
    /// Passes over the corpus.
    #[arg(long, default_value_t = 1)]
    pub epochs: usize,
    /// Visit the corpus in a seeded random order each epoch.
    #[arg(long)]
    pub shuffle: bool,
    /// Seed for --shuffle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threads for first-pass parsing; the result does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl TrainArgs {
    pub fn config(&self) -> Result<TrainConfig> {
        let cfg = TrainConfig {
            weights: self.parse.weights()?,
            limits: self.parse.limits()?,
            gate_on: !self.allow_empty_sememes,
            accept: AcceptRule::parse_overrides(&self.accept)?,
            maintenance_interval: self.maintenance_interval,
            min_window_uses: self.min_window_uses,
            min_age: self.min_age,
            epochs: self.epochs,
            seed: self.seed,
            shuffle: self.shuffle,
            jobs: self.jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Lexicon TSV.
    pub lexicon: PathBuf,
    /// One utterance per line, phones space-separated; anything after a tab
    /// is ignored, so corpus files work too. Reads stdin when absent.
    pub input: Option<PathBuf>,
    /// Segment this phone string instead of reading a file.
    #[arg(long, conflicts_with = "input")]
    pub phones: Option<String>,
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub parse: ParseFlags,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Segmentation as written by `segment`.
    pub prediction: PathBuf,
    /// Corpus TSV with gold spans.
    pub gold: PathBuf,
    /// Gold lexicon TSV; needs --lexicon.
    #[arg(long, requires = "lexicon")]
    pub gold_lexicon: Option<PathBuf>,
    /// Learned lexicon TSV to score against --gold-lexicon.
    #[arg(long, requires = "gold_lexicon")]
    pub lexicon: Option<PathBuf>,
    /// Exit with status 1 when boundary F1 falls below this.
    #[arg(long)]
    pub min_f1: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Directory for corpus.tsv, heldout.tsv, pronunciations.tsv, stems.tsv,
    /// suffix_rules.tsv and gold_lexicon.tsv.
    #[arg(short, long)]
    pub out_dir: PathBuf,
    /// Training utterances.
    #[arg(long, default_value_t = 3000)]
    pub utterances: usize,
    /// Further utterances from the same vocabulary, written to heldout.tsv.
    #[arg(long, default_value_t = 0)]
    pub held_out: usize,
    /// Number of stems.
    #[arg(long, default_value_t = 60)]
    pub vocab: usize,
    /// Phones stems are drawn from, space-separated.
    #[arg(long, default_value = "p t k b d g m n s f v l r w y h a e i o u")]
    pub alphabet: String,
    /// Stem length range in phones, MIN-MAX.
    #[arg(long, default_value = "3-5")]
    pub word_length: String,
    /// Words per utterance, MIN-MAX.
    #[arg(long, default_value = "2-5")]
    pub utterance_length: String,
    /// Zipf exponent of stem frequencies.
    #[arg(long, default_value_t = 1.0)]
    pub zipf: f64,
    /// Suffixes as spelling=phones pairs, comma-separated.
    #[arg(long, default_value = "s=z,ing=I N")]
    pub suffixes: String,
    /// Chance that a word takes a suffix.
    #[arg(long, default_value_t = 0.05)]
    pub suffix_rate: f64,
    /// Per-phone substitution noise, applied after gold spans are fixed.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Stems that sound like another stem but mean something else.
    #[arg(long, default_value_t = 0)]
    pub homophones: usize,
    /// Random seed; equal seeds give byte-identical output.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once('-')
        .with_context(|| format!("expected MIN-MAX, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

impl GenArgs {
    pub fn config(&self) -> Result<GeneratorConfig> {
        let mut suffixes = Vec::new();
        for item in self
            .suffixes
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
        {
            let Some((spelling, phones)) = item.split_once('=') else {
                bail!("expected spelling=phones, got {item:?}");
            };
            suffixes.push(Suffix::new(spelling.trim(), phones)?);
        }
        let cfg = GeneratorConfig {
            vocab_size: self.vocab,
            phone_alphabet: phones_from_str(&self.alphabet)?,
            word_length: range(&self.word_length)?,
            utterance_length: range(&self.utterance_length)?,
            zipf_exponent: self.zipf,
            suffixes,
            suffix_rate: self.suffix_rate,
            substitution_noise_rate: self.noise,
            homophone_pairs: self.homophones,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Trace log written by `train --trace`.
    pub log: PathBuf,
    /// Only this utterance index.
    #[arg(long)]
    pub utterance: Option<u64>,
    /// Only records that mention this word id.
    #[arg(long)]
    pub word: Option<String>,
    /// Only records where something was accepted, rejected or pruned.
    #[arg(long)]
    pub changes: bool,
}

#[derive(Debug, Args)]
pub struct TranscribeArgs {
    /// Plain text, one sentence per line.
    pub sentences: PathBuf,
    /// Pronunciation table TSV (word, phones).
    #[arg(long)]
    pub table: PathBuf,
    /// Stem map TSV (word, SEMEME).
    #[arg(long)]
    pub stems: PathBuf,
    /// Suffix rules TSV (suffix, replacement) [default: ies=y, ing, ed, s].
    #[arg(long)]
    pub suffix_rules: Option<PathBuf>,
    /// Give the listed words (one per line) empty semantics.
    #[arg(long)]
    pub zero_function_words: Option<PathBuf>,
    /// Corpus TSV to write.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(args).unwrap().command
    }

    #[test]
    fn train_defaults_match_library() {
        let Command::Train(a) = parse(&["lexacq", "train", "c.tsv", "-o", "l.tsv"]) else {
            panic!()
        };
        assert_eq!(a.config().unwrap(), TrainConfig::default());
    }

    #[test]
    fn gen_defaults_match_library() {
        let Command::Gen(a) = parse(&["lexacq", "gen", "-o", "d"]) else {
            panic!()
        };
        assert_eq!(a.config().unwrap(), GeneratorConfig::default());
    }

    #[test]
    fn segment_defaults_match_library() {
        let Command::Segment(a) = parse(&["lexacq", "segment", "l.tsv"]) else {
            panic!()
        };
        assert_eq!(a.parse.weights().unwrap(), CostWeights::default());
        assert_eq!(a.parse.limits().unwrap(), SearchLimits::default());
    }

    #[test]
    fn unknown_flags_rejected() {
        assert!(Cli::try_parse_from(["lexacq", "train", "c.tsv", "-o", "l", "--bogus"]).is_err());
    }

    #[test]
    fn train_flags() {
        let Command::Train(a) = parse(&[
            "lexacq",
            "train",
            "c.tsv",
            "-o",
            "l.tsv",
            "--weights",
            "w_word=0.1",
            "--accept",
            "max_mismatch=1",
            "--allow-empty-sememes",
            "--maintenance-interval",
            "10",
            "--jobs",
            "4",
        ]) else {
            panic!()
        };
        let cfg = a.config().unwrap();
        assert_eq!(cfg.weights.w_word, 0.1);
        assert_eq!(cfg.accept.max_mismatch, 1);
        assert!(!cfg.gate_on);
        assert_eq!(
            (cfg.maintenance_interval, cfg.min_age(), cfg.jobs),
            (10, 10, 4)
        );
    }
}
