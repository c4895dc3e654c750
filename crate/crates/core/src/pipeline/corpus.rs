use std::path::Path;

use super::{data_lines, read_text, write_text, PronunciationTable, StemMap};
use crate::entry::{parse_canonical_id, Utterance};
use crate::error::{Error, Result};
use crate::eval::{Segmentation, Span};
use crate::symbols::{
    join_phones, join_sememes, phones_from_str, sememes_from_str, Phone, SememeSet,
};

/// A gold word: phones `[start, end)` of the utterance and the word's id.
pub type GoldSpan = Span;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusRecord {
    pub phones: Vec<Phone>,
    pub sememes: SememeSet,
    /// When present, tiles `phones` exactly.
    pub gold: Option<Vec<GoldSpan>>,
    pub text: Option<String>,
}

impl CorpusRecord {
    /// Transcribes a sentence and collects its semantics.
    pub fn from_sentence(
        table: &PronunciationTable,
        stems: &StemMap,
        sentence: &str,
    ) -> Result<Self> {
        Ok(CorpusRecord {
            phones: super::g2p_transcribe(table, sentence)?,
            sememes: super::utterance_semantics(stems, sentence)?,
            gold: None,
            text: Some(sentence.to_string()),
        })
    }

    pub fn utterance(&self) -> Utterance {
        Utterance::new(self.phones.clone(), self.sememes.clone())
    }

    pub fn gold_segmentation(&self) -> Option<Segmentation> {
        self.gold
            .as_ref()
            .map(|g| Segmentation::new(self.phones.len(), g.clone()))
    }

    /// Checks that the gold spans, if any, tile the phones and carry valid ids.
    pub fn check_gold(&self) -> std::result::Result<(), String> {
        let Some(gold) = &self.gold else {
            return Ok(());
        };
        let mut at = 0;
        for span in gold {
            if span.start != at || span.end <= span.start {
                return Err(format!(
                    "gold span {}:{} does not continue from {at}",
                    span.start, span.end
                ));
            }
            parse_canonical_id(&span.id).map_err(|e| format!("gold id {:?}: {e}", span.id))?;
            at = span.end;
        }
        if at != self.phones.len() {
            return Err(format!(
                "gold spans end at {at} but there are {} phones",
                self.phones.len()
            ));
        }
        Ok(())
    }

    pub fn parse_line(line_no: usize, line: &str) -> Result<Self> {
        let bad = |m: String| Error::format(line_no, m);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 || cols.len() > 4 {
            return Err(bad(format!(
                "expected 2 to 4 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let phones = phones_from_str(cols[0]).map_err(|e| bad(e.to_string()))?;
        let sememes = sememes_from_str(cols[1]).map_err(|e| bad(e.to_string()))?;
        let gold = match cols.get(2).map(|c| c.trim()) {
            None | Some("") => None,
            Some(c) => Some(
                split_spans(c)
                    .into_iter()
                    .map(|item| parse_span(&item).map_err(bad))
                    .collect::<Result<_>>()?,
            ),
        };
        let text = cols.get(3).map(|t| t.to_string());
        let rec = CorpusRecord {
            phones,
            sememes,
            gold,
            text,
        };
        rec.check_gold().map_err(bad)?;
        Ok(rec)
    }

    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{}\t{}",
            join_phones(&self.phones, " "),
            join_sememes(&self.sememes, " ")
        );
        if self.gold.is_some() || self.text.is_some() {
            line.push('\t');
            if let Some(gold) = &self.gold {
                let items: Vec<String> = gold
                    .iter()
                    .map(|s| format!("{}:{}:{}", s.start, s.end, s.id))
                    .collect();
                line.push_str(&items.join(","));
            }
        }
        if let Some(text) = &self.text {
            line.push('\t');
            line.push_str(text);
        }
        line
    }
}

// Ids use commas between sememes too. A sememe never contains `:`, so a
// new item starts exactly at a piece shaped `start:end:...`.
fn split_spans(column: &str) -> Vec<String> {
    let starts_item = |piece: &str| {
        let mut parts = piece.splitn(3, ':');
        let digits = |s: Option<&str>| {
            s.is_some_and(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
        };
        digits(parts.next()) && digits(parts.next()) && parts.next().is_some()
    };
    let mut items: Vec<String> = Vec::new();
    for piece in column.split(',') {
        match items.last_mut() {
            Some(last) if !starts_item(piece) => {
                last.push(',');
                last.push_str(piece);
            }
            _ => items.push(piece.to_string()),
        }
    }
    items
}

fn parse_span(item: &str) -> std::result::Result<GoldSpan, String> {
    let mut parts = item.splitn(3, ':');
    let (Some(a), Some(b), Some(id)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("bad gold span {item:?}"));
    };
    let start = a
        .trim()
        .parse()
        .map_err(|_| format!("bad gold span start {a:?}"))?;
    let end = b
        .trim()
        .parse()
        .map_err(|_| format!("bad gold span end {b:?}"))?;
    Ok(Span::new(start, end, id.trim()))
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    data_lines(text)
        .map(|(n, l)| CorpusRecord::parse_line(n, l))
        .collect()
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusRecord>> {
    parse_corpus(&read_text(path.as_ref())?)
}

pub fn corpus_to_string(records: &[CorpusRecord]) -> String {
    records.iter().map(|r| r.to_line() + "\n").collect()
}

pub fn write_corpus(records: &[CorpusRecord], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &corpus_to_string(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(phones: &str, sememes: &str) -> CorpusRecord {
        CorpusRecord {
            phones: phones_from_str(phones).unwrap(),
            sememes: sememes_from_str(sememes).unwrap(),
            gold: None,
            text: None,
        }
    }

    #[test]
    fn figure_row_shape() {
        let r = parse_corpus("n i n a\tNINA\n").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].phones.len(), 4);
        assert_eq!(r[0].sememes.len(), 1);
        assert!(r[0].gold.is_none() && r[0].text.is_none());
    }

    #[test]
    fn six_record_round_trip() {
        let mut records = vec![
            rec("n i n a", "NINA"),
            rec("y u k I k t O f D @ s A k", "KICK YOU OFF SOCK THE"),
            rec("", ""),
            rec("S i z", "SHE BE"),
            rec("a b", "X"),
            rec("k I k t O f", "KICK OFF"),
        ];
        records[1].text = Some("you kicked off the sock".into());
        records[3].gold = Some(vec![Span::new(0, 3, "S.i.z|BE,SHE")]);
        records[4].gold = Some(vec![Span::new(0, 1, "a|X"), Span::new(1, 2, "b|X")]);
        records[4].text = Some("a b".into());
        records[5].gold = Some(vec![
            Span::new(0, 4, "k.I.k.t|KICK"),
            Span::new(4, 6, "O.f|OFF,UP"),
        ]);
        let text = corpus_to_string(&records);
        assert_eq!(parse_corpus(&text).unwrap(), records);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        write_corpus(&records, &path).unwrap();
        assert_eq!(read_corpus(&path).unwrap(), records);
    }

    #[test]
    fn non_tiling_gold_is_rejected() {
        let err = parse_corpus("n i n a\tNINA\n a b\tX\t0:1:a|X,2:3:b|X\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        assert!(parse_corpus("a b\tX\t0:1:a|X\n").is_err());
        assert!(parse_corpus("a b\tX\t0:2:a.b\n").is_err());
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_corpus("n i n a\n"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_corpus("# c\nn i\tnina\n"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(read_corpus("/definitely/not/here.tsv").is_err());
    }

    #[test]
    fn sentence_record() {
        let table = PronunciationTable::from_tsv("nina\tn i n a\n").unwrap();
        let stems = StemMap::from_tsv("nina\tNINA\n").unwrap();
        let r = CorpusRecord::from_sentence(&table, &stems, "Nina.").unwrap();
        assert_eq!(r.to_line(), "n i n a\tNINA\t\tNina.");
        assert_eq!(parse_corpus(&r.to_line()).unwrap()[0], r);
    }
}
