//! Lexicon acquisition from unsegmented speech.
//!
//! The learner sees utterances that are unsegmented phone sequences paired
//! with unordered sets of sememes (meaning symbols), and grows a dictionary
//! of words, each a phone sequence with the sememes it carries. Each
//! utterance is cover-parsed with the current words; uncovered stretches
//! and mismatching words suggest new words; the utterance is reparsed with
//! them and the words are kept when the reparse explains it. Rarely used
//! words and words that split into other words are pruned now and then.
//!
//! ```
//! use lexacq::{Dictionary, TrainConfig, Utterance, learner};
//!
//! let mut dict = Dictionary::default();
//! let utt = Utterance::parse("n i n a", "NINA").unwrap();
//! let trace = learner::process_utterance(&mut dict, &utt, &TrainConfig::default());
//! assert_eq!(trace.accepted, ["n.i.n.a|NINA"]);
//! assert!(dict.contains("n.i.n.a|NINA"));
//! ```

// File formats are documented with literal tabs.
#![allow(clippy::tabs_in_doc_comments)]

pub mod dictionary;
pub mod entry;
pub mod error;
pub mod eval;
pub mod learner;
pub mod parser;
pub mod pipeline;
pub mod symbols;

pub use dictionary::{AddOutcome, Dictionary};
pub use entry::{canonical_id, parse_canonical_id, LexEntry, Utterance};
pub use error::{Error, Result};
pub use learner::TrainConfig;
pub use parser::{best_parse, Cost, CostWeights, Parse, ParseLexicon, Placement, SearchLimits};
pub use symbols::{phones_from_str, sememes_from_str, Phone, Sememe, SememeSet};
