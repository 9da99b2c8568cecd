//! Shot histograms: empirical bitstring distributions from sampling a state.
//!
//! Bitstrings are textual, qubit 0 leftmost. Serialized form is
//! `{"shots": <total>, "counts": {"0101": 17, ...}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Map bitstring -> count from sampling the final state of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShotHistogram {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl ShotHistogram {
    pub fn new() -> Self {
        ShotHistogram {
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    /// Build from an existing count map; the total is derived.
    pub fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let shots = counts.values().sum();
        ShotHistogram { shots, counts }
    }

    /// Record one measured bitstring.
    pub fn record(&mut self, bitstring: &str) {
        *self.counts.entry(bitstring.to_string()).or_insert(0) += 1;
        self.shots += 1;
    }

    /// Record `count` occurrences of a bitstring at once.
    pub fn record_many(&mut self, bitstring: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(bitstring.to_string()).or_insert(0) += count;
        self.shots += count;
    }

    pub fn total_shots(&self) -> u64 {
        self.shots
    }

    pub fn is_empty(&self) -> bool {
        self.shots == 0
    }

    /// Iterate (bitstring, count) in lexicographic bitstring order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(b, &c)| (b.as_str(), c))
    }

    pub fn count(&self, bitstring: &str) -> u64 {
        self.counts.get(bitstring).copied().unwrap_or(0)
    }

    /// Number of distinct observed bitstrings.
    pub fn num_outcomes(&self) -> usize {
        self.counts.len()
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidInput("empty shot histogram".into()));
        }
        Ok(())
    }
}

impl Default for ShotHistogram {
    fn default() -> Self {
        Self::new()
    }
}

impl<'de> Deserialize<'de> for ShotHistogram {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            shots: u64,
            counts: BTreeMap<String, u64>,
        }
        let raw = Raw::deserialize(de)?;
        let total: u64 = raw.counts.values().sum();
        if total != raw.shots {
            return Err(serde::de::Error::custom(format!(
                "histogram shots field {} does not match count total {}",
                raw.shots, total
            )));
        }
        Ok(ShotHistogram {
            shots: raw.shots,
            counts: raw.counts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_totals() {
        let mut h = ShotHistogram::new();
        h.record("01");
        h.record("01");
        h.record("10");
        assert_eq!(h.total_shots(), 3);
        assert_eq!(h.count("01"), 2);
        assert_eq!(h.count("11"), 0);
        assert_eq!(h.num_outcomes(), 2);
    }

    #[test]
    fn json_round_trip() {
        let mut h = ShotHistogram::new();
        h.record_many("00", 5);
        h.record_many("11", 7);
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.contains("\"shots\":12"));
        let back: ShotHistogram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn inconsistent_shot_total_rejected() {
        let s = r#"{"shots": 3, "counts": {"0": 1}}"#;
        assert!(serde_json::from_str::<ShotHistogram>(s).is_err());
    }
}
