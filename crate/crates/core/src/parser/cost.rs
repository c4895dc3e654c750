//! The parse objective.
//!
//! A parse pays per unparsed phone, per mismatched phone, per utterance
//! sememe nobody covers, per sememe a placed word brings that the utterance
//! lacks, and a small fee per placement. Costs are kept in fixed point
//! (millionths) so that sums are exact and the search and the oracle agree to
//! the last unit.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Fixed-point units per 1.0 of cost.
pub const COST_SCALE: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(i64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub fn from_units(units: i64) -> Self {
        Cost(units)
    }

    pub fn units(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / COST_SCALE as f64
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / COST_SCALE;
        let frac = (self.0 % COST_SCALE).abs();
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostWeights {
    pub w_unparsed: f64,
    pub w_mismatch: f64,
    pub w_missing_sem: f64,
    pub w_extra_sem: f64,
    pub w_word: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            w_unparsed: 1.0,
            w_mismatch: 1.0,
            w_missing_sem: 1.0,
            w_extra_sem: 1.0,
            w_word: 0.01,
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("w_unparsed", self.w_unparsed),
            ("w_mismatch", self.w_mismatch),
            ("w_missing_sem", self.w_missing_sem),
            ("w_extra_sem", self.w_extra_sem),
            ("w_word", self.w_word),
        ];
        for (name, w) in all {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "{name} must be finite and >= 0"
                )));
            }
            if w > 1e9 {
                return Err(Error::InvalidWeights(format!("{name} is too large")));
            }
        }
        if self.w_word >= self.w_unparsed.min(self.w_mismatch) {
            return Err(Error::InvalidWeights(
                "w_word must be below both w_unparsed and w_mismatch".into(),
            ));
        }
        Ok(())
    }

    /// Parses `w_unparsed=1,w_word=0.01`; unnamed weights keep their
    /// defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut w = CostWeights::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidWeights(format!("expected key=value, got {item:?}"))
            })?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWeights(format!("bad number in {item:?}")))?;
            let slot = match key.trim() {
                "w_unparsed" => &mut w.w_unparsed,
                "w_mismatch" => &mut w.w_mismatch,
                "w_missing_sem" => &mut w.w_missing_sem,
                "w_extra_sem" => &mut w.w_extra_sem,
                "w_word" => &mut w.w_word,
                other => return Err(Error::InvalidWeights(format!("unknown weight {other:?}"))),
            };
            *slot = value;
        }
        w.validate()?;
        Ok(w)
    }

    pub(crate) fn scaled(&self) -> ScaledWeights {
        let s = |w: f64| (w * COST_SCALE as f64).round() as i64;
        ScaledWeights {
            unparsed: s(self.w_unparsed),
            mismatch: s(self.w_mismatch),
            missing: s(self.w_missing_sem),
            extra: s(self.w_extra_sem),
            word: s(self.w_word),
        }
    }
}

impl fmt::Display for CostWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w_unparsed={},w_mismatch={},w_missing_sem={},w_extra_sem={},w_word={}",
            self.w_unparsed, self.w_mismatch, self.w_missing_sem, self.w_extra_sem, self.w_word
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ScaledWeights {
    pub unparsed: i64,
    pub mismatch: i64,
    pub missing: i64,
    pub extra: i64,
    pub word: i64,
}

/// The counts a parse's cost is made of.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostComponents {
    pub unparsed: usize,
    pub mismatched: usize,
    pub missing_sememes: usize,
    pub extra_sememes: usize,
    pub placements: usize,
}

pub fn parse_cost(components: &CostComponents, weights: &CostWeights) -> Cost {
    let w = weights.scaled();
    let n = |x: usize| x as i64;
    Cost(
        w.unparsed * n(components.unparsed)
            + w.mismatch * n(components.mismatched)
            + w.missing * n(components.missing_sememes)
            + w.extra * n(components.extra_sememes)
            + w.word * n(components.placements),
    )
}

/// Total order used to pick among parses: cost, then fewer placements, then
/// the lexicographically smaller placement list.
pub(crate) fn compare_keys<T: Ord>(a: (Cost, &[T]), b: (Cost, &[T])) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.len().cmp(&b.1.len()))
        .then_with(|| a.1.cmp(b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_nina_parse_costs_five() {
        let c = CostComponents {
            unparsed: 4,
            missing_sememes: 1,
            ..Default::default()
        };
        assert_eq!(
            parse_cost(&c, &CostWeights::default()),
            Cost::from_units(5 * COST_SCALE)
        );
    }

    #[test]
    fn single_exact_placement_costs_one_word() {
        let c = CostComponents {
            placements: 1,
            ..Default::default()
        };
        let cost = parse_cost(&c, &CostWeights::default());
        assert_eq!(cost.to_string(), "0.01");
    }

    #[test]
    fn sock_partial_parse() {
        let c = CostComponents {
            unparsed: 6,
            mismatched: 1,
            missing_sememes: 2,
            extra_sememes: 0,
            placements: 3,
        };
        let cost = parse_cost(&c, &CostWeights::default());
        assert_eq!(cost.to_string(), "9.03");
        assert_eq!(cost.units(), 9_030_000);
    }

    #[test]
    fn weight_validation() {
        assert!(CostWeights::default().validate().is_ok());
        let bad = CostWeights {
            w_word: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let neg = CostWeights {
            w_extra_sem: -1.0,
            ..Default::default()
        };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn weight_overrides() {
        let w = CostWeights::parse_overrides("w_unparsed=2,w_word=0.05").unwrap();
        assert_eq!(w.w_unparsed, 2.0);
        assert_eq!(w.w_word, 0.05);
        assert_eq!(w.w_mismatch, 1.0);
        assert!(CostWeights::parse_overrides("w_bogus=1").is_err());
        assert!(CostWeights::parse_overrides("w_word").is_err());
        let round = CostWeights::parse_overrides(&CostWeights::default().to_string()).unwrap();
        assert_eq!(round, CostWeights::default());
    }

    #[test]
    fn display_trims_fraction() {
        assert_eq!(Cost::from_units(5_000_000).to_string(), "5");
        assert_eq!(Cost::from_units(40_000).to_string(), "0.04");
        assert_eq!(Cost::from_units(1_234_567).to_string(), "1.234567");
    }
}
