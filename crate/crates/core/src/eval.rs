//! Scoring segmentations and lexicons against gold data.
//!
//! Ratios keep their numerator and denominator so that results are exact
//! and a zero denominator stays visible: such a ratio reads as 0 and is
//! listed as undefined in the report.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use crate::dictionary::Dictionary;
use crate::entry::{parse_canonical_id, LexEntry};
use crate::error::{Error, Result};
use crate::parser::Parse;

/// A labelled stretch `[start, end)` of an utterance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub id: String,
}

impl Span {
    pub fn new(start: usize, end: usize, id: impl Into<String>) -> Self {
        Span {
            start,
            end,
            id: id.into(),
        }
    }
}

/// One utterance's segmentation. `len` is the number of phones, needed to
/// tell interior boundaries from the utterance edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Segmentation {
    pub len: usize,
    pub spans: Vec<Span>,
}

impl Segmentation {
    pub fn new(len: usize, spans: Vec<Span>) -> Self {
        Segmentation { len, spans }
    }

    pub fn from_parse(parse: &Parse, len: usize) -> Self {
        let spans = parse
            .placements
            .iter()
            .map(|p| Span::new(p.offset, p.end(), p.entry_id.clone()))
            .collect();
        Segmentation { len, spans }
    }

    /// Spans from `offset:id` items, the output of `lexacq segment`. Each
    /// span's length is read off the id's phones.
    pub fn from_offsets(len: usize, items: &[(usize, String)]) -> Result<Self> {
        let mut spans = Vec::with_capacity(items.len());
        for (offset, id) in items {
            let (phones, _) = parse_canonical_id(id)?;
            spans.push(Span::new(*offset, offset + phones.len(), id.clone()));
        }
        Ok(Segmentation { len, spans })
    }

    /// Start and end positions strictly inside the utterance.
    pub fn interior_boundaries(&self) -> BTreeSet<usize> {
        self.spans
            .iter()
            .flat_map(|s| [s.start, s.end])
            .filter(|&b| b > 0 && b < self.len)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    pub fn is_defined(&self) -> bool {
        self.den > 0
    }

    pub fn value(&self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.value())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundaryScores {
    pub precision: Ratio,
    pub recall: Ratio,
    /// 2PR/(P+R), which over counts is 2·correct/(predicted+gold).
    pub f1: Ratio,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexiconScores {
    pub precision: Ratio,
    pub recall: Ratio,
    /// Learned ids with no identical gold entry.
    pub errors: BTreeSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    pub boundary: BoundaryScores,
    pub token_accuracy: Ratio,
    pub lexicon: Option<LexiconScores>,
}

fn check_lengths(predicted: &[Segmentation], gold: &[Segmentation]) -> Result<()> {
    if predicted.len() != gold.len() {
        return Err(Error::EvalMismatch {
            utterance: predicted.len().min(gold.len()),
            message: format!(
                "{} predicted utterances but {} gold",
                predicted.len(),
                gold.len()
            ),
        });
    }
    for (i, (p, g)) in predicted.iter().zip(gold).enumerate() {
        if p.len != g.len {
            return Err(Error::EvalMismatch {
                utterance: i,
                message: format!("predicted length {} but gold length {}", p.len, g.len),
            });
        }
        if let Some(s) = p.spans.iter().find(|s| s.end > p.len || s.start >= s.end) {
            return Err(Error::EvalMismatch {
                utterance: i,
                message: format!("span {}:{} does not fit {} phones", s.start, s.end, p.len),
            });
        }
    }
    Ok(())
}

/// Micro-averaged precision, recall and F1 over interior boundaries.
pub fn boundary_metrics(
    predicted: &[Segmentation],
    gold: &[Segmentation],
) -> Result<BoundaryScores> {
    check_lengths(predicted, gold)?;
    let (mut correct, mut n_pred, mut n_gold) = (0u64, 0u64, 0u64);
    for (p, g) in predicted.iter().zip(gold) {
        let pb = p.interior_boundaries();
        let gb = g.interior_boundaries();
        correct += pb.intersection(&gb).count() as u64;
        n_pred += pb.len() as u64;
        n_gold += gb.len() as u64;
    }
    Ok(BoundaryScores {
        precision: Ratio::new(correct, n_pred),
        recall: Ratio::new(correct, n_gold),
        f1: Ratio::new(2 * correct, n_pred + n_gold),
    })
}

/// Fraction of gold tokens matched by a predicted token with the same span
/// and the same sememe set. Phones in the ids are not compared, so a word
/// placed with mismatches still counts when its meaning is right.
pub fn token_metrics(predicted: &[Segmentation], gold: &[Segmentation]) -> Result<Ratio> {
    check_lengths(predicted, gold)?;
    let key = |s: &Span| -> Result<(usize, usize, String)> {
        let (_, sememes) = parse_canonical_id(&s.id)?;
        let joined: Vec<&str> = sememes.iter().map(|x| x.as_str()).collect();
        Ok((s.start, s.end, joined.join(",")))
    };
    let (mut correct, mut total) = (0u64, 0u64);
    for (p, g) in predicted.iter().zip(gold) {
        let pred: BTreeSet<_> = p.spans.iter().map(key).collect::<Result<_>>()?;
        for s in &g.spans {
            total += 1;
            if pred.contains(&key(s)?) {
                correct += 1;
            }
        }
    }
    Ok(Ratio::new(correct, total))
}

/// Exact-match lexicon scoring: an entry is right when some gold entry has
/// the same phones and the same sememes.
pub fn lexicon_metrics<'a>(
    learned: &Dictionary,
    gold: impl IntoIterator<Item = &'a LexEntry>,
) -> LexiconScores {
    let gold: BTreeSet<String> = gold.into_iter().map(LexEntry::canonical_id).collect();
    let learned: BTreeSet<String> = learned.ids().map(str::to_string).collect();
    let matched = learned.intersection(&gold).count() as u64;
    LexiconScores {
        precision: Ratio::new(matched, learned.len() as u64),
        recall: Ratio::new(matched, gold.len() as u64),
        errors: learned.difference(&gold).cloned().collect(),
    }
}

impl Metrics {
    pub fn compute(predicted: &[Segmentation], gold: &[Segmentation]) -> Result<Self> {
        Ok(Metrics {
            boundary: boundary_metrics(predicted, gold)?,
            token_accuracy: token_metrics(predicted, gold)?,
            lexicon: None,
        })
    }

    fn named(&self) -> Vec<(&'static str, Ratio)> {
        let mut out = vec![
            ("boundary_precision", self.boundary.precision),
            ("boundary_recall", self.boundary.recall),
            ("boundary_f1", self.boundary.f1),
            ("token_accuracy", self.token_accuracy),
        ];
        if let Some(lex) = &self.lexicon {
            out.push(("lexicon_precision", lex.precision));
            out.push(("lexicon_recall", lex.recall));
        }
        out
    }

    /// Writes `metric\tvalue` lines, an `undefined` line naming any metric
    /// whose denominator was zero, then the lexicon errors after `# errors`.
    pub fn write_report<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let named = self.named();
        for (name, r) in &named {
            writeln!(out, "{name}\t{r}")?;
        }
        let undefined: Vec<&str> = named
            .iter()
            .filter(|(_, r)| !r.is_defined())
            .map(|(n, _)| *n)
            .collect();
        if !undefined.is_empty() {
            writeln!(out, "undefined\t{}", undefined.join(","))?;
        }
        if let Some(lex) = &self.lexicon {
            writeln!(out, "# errors")?;
            for id in &lex.errors {
                writeln!(out, "{id}")?;
            }
        }
        Ok(())
    }

    pub fn report_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_report(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("report is UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(len: usize, cuts: &[usize]) -> Segmentation {
        let mut bounds = vec![0];
        bounds.extend_from_slice(cuts);
        bounds.push(len);
        let spans = bounds
            .windows(2)
            .map(|w| {
                let phones: Vec<String> = (w[0]..w[1]).map(|i| format!("p{i}")).collect();
                Span::new(w[0], w[1], format!("{}|X", phones.join(".")))
            })
            .collect();
        Segmentation::new(len, spans)
    }

    #[test]
    fn identical_is_perfect() {
        let gold: Vec<_> = (0..10).map(|i| seg(6, &[2 + i % 3])).collect();
        let m = Metrics::compute(&gold, &gold).unwrap();
        assert_eq!(m.boundary.precision.value(), 1.0);
        assert_eq!(m.boundary.recall.value(), 1.0);
        assert_eq!(m.boundary.f1.value(), 1.0);
        assert_eq!(m.token_accuracy.value(), 1.0);
    }

    #[test]
    fn single_span_has_no_interior_boundaries() {
        let gold = [seg(6, &[2])];
        let pred = [seg(6, &[])];
        let b = boundary_metrics(&pred, &gold).unwrap();
        assert_eq!(b.precision, Ratio::new(0, 0));
        assert!(!b.precision.is_defined());
        assert_eq!(b.precision.value(), 0.0);
        assert_eq!(b.recall.value(), 0.0);
        assert_eq!(b.f1.value(), 0.0);
    }

    #[test]
    fn one_spurious_one_missed() {
        // The second utterance puts its boundary at 1 instead of 2.
        let gold = [seg(3, &[1]), seg(3, &[2]), seg(4, &[2])];
        let pred = [seg(3, &[1]), seg(3, &[1]), seg(4, &[2])];
        let b = boundary_metrics(&pred, &gold).unwrap();
        assert_eq!(b.precision, Ratio::new(2, 3));
        assert_eq!(b.recall, Ratio::new(2, 3));
        assert_eq!(b.f1, Ratio::new(4, 6));

        // Order does not matter.
        let mut rp = pred.to_vec();
        let mut rg = gold.to_vec();
        rp.reverse();
        rg.reverse();
        assert_eq!(boundary_metrics(&rp, &rg).unwrap(), b);
    }

    #[test]
    fn mismatched_lengths_error() {
        let gold = [seg(3, &[1])];
        assert!(boundary_metrics(&[], &gold).is_err());
        assert!(token_metrics(&[seg(4, &[1])], &gold).is_err());
    }

    #[test]
    fn token_accuracy_counts_sememe_sets() {
        let gold: Vec<_> = (0..10)
            .map(|_| Segmentation::new(2, vec![Span::new(0, 2, "a.b|X")]))
            .collect();
        let mut pred = gold.clone();
        pred[3].spans[0].id = "a.b|Y".into();
        // Different phones with the same meaning still count.
        pred[4].spans[0].id = "a.c|X".into();
        assert_eq!(token_metrics(&pred, &gold).unwrap(), Ratio::new(9, 10));
        let empty: Vec<_> = gold
            .iter()
            .map(|g| Segmentation::new(g.len, vec![]))
            .collect();
        assert_eq!(token_metrics(&empty, &gold).unwrap().value(), 0.0);
    }

    #[test]
    fn lexicon_scores() {
        let gold: Vec<LexEntry> = [
            ("y u", "YOU"),
            ("n i n a", "NINA"),
            ("S i", "SHE"),
            ("i z", "BE"),
        ]
        .iter()
        .map(|(p, s)| LexEntry::parse(p, s).unwrap())
        .collect();
        let same = Dictionary::from_entries(gold.clone());
        let s = lexicon_metrics(&same, &gold);
        assert_eq!((s.precision.value(), s.recall.value()), (1.0, 1.0));
        assert!(s.errors.is_empty());

        let mut extra = same.clone();
        extra.add(LexEntry::parse("S i z", "SHE BE").unwrap(), true);
        let s = lexicon_metrics(&extra, &gold);
        assert_eq!(s.precision, Ratio::new(4, 5));
        assert_eq!(s.errors.iter().collect::<Vec<_>>(), ["S.i.z|BE,SHE"]);

        let s = lexicon_metrics(&Dictionary::default(), &gold);
        assert_eq!(s.precision, Ratio::new(0, 0));
        assert_eq!(s.recall, Ratio::new(0, 4));
    }

    #[test]
    fn lexicon_swap_symmetry() {
        let a: Vec<LexEntry> = ["a b", "c", "d e"]
            .iter()
            .map(|p| LexEntry::parse(p, "X").unwrap())
            .collect();
        let b: Vec<LexEntry> = ["a b", "d e", "f", "g"]
            .iter()
            .map(|p| LexEntry::parse(p, "X").unwrap())
            .collect();
        let ab = lexicon_metrics(&Dictionary::from_entries(a.clone()), &b);
        let ba = lexicon_metrics(&Dictionary::from_entries(b), &a);
        assert_eq!(ab.precision, ba.recall);
        assert_eq!(ab.recall, ba.precision);
    }

    #[test]
    fn report_format() {
        let gold = [seg(6, &[2])];
        let pred = [seg(6, &[])];
        let mut m = Metrics::compute(&pred, &gold).unwrap();
        m.lexicon = Some(LexiconScores {
            precision: Ratio::new(1, 2),
            recall: Ratio::new(1, 1),
            errors: ["x|Y".to_string()].into(),
        });
        assert_eq!(
            m.report_string(),
            "boundary_precision\t0.000000\nboundary_recall\t0.000000\nboundary_f1\t0.000000\n\
             token_accuracy\t0.000000\nlexicon_precision\t0.500000\nlexicon_recall\t1.000000\n\
             undefined\tboundary_precision\n# errors\nx|Y\n"
        );
    }
}
