//! Decider results, certificates and resource limits.

use crate::word::{Alphabet, ExtendedNat, Word};

/// Evidence that two machines are not close, phrased over their common input alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// a single input on which the distance is infinite
    Input(Word),
    /// inputs `prefix cycle^i suffix` whose distance grows with `i`
    Pump { prefix: Word, cycle: Word, suffix: Word },
}

impl Certificate {
    /// Input word of the `i`-th pumped instance; a single-input certificate ignores `i`.
    pub fn instance(&self, i: usize) -> Word {
        match self {
            Certificate::Input(w) => w.clone(),
            Certificate::Pump { prefix, cycle, suffix } => prefix.concat(&cycle.repeat(i)).concat(suffix),
        }
    }

    pub fn render(&self, input: &Alphabet) -> String {
        match self {
            Certificate::Input(w) => format!("input {:?}", input.render(w)),
            Certificate::Pump { prefix, cycle, suffix } => format!(
                "pump prefix {:?} cycle {:?} suffix {:?}",
                input.render(prefix),
                input.render(cycle),
                input.render(suffix)
            ),
        }
    }
}

/// True iff every value exceeds its predecessor, an infinite value counting as exceeding
/// everything including itself: pumping that reaches an infinite distance already refutes
/// closeness.
pub fn pumps_increase(d: &[ExtendedNat]) -> bool {
    d.windows(2).all(|w| w[0] < w[1] || !w[1].is_finite())
}

/// Outcome of a closeness decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closeness {
    /// bounded distance; `bound` is an upper bound when the decider provides one
    Close { bound: Option<u64> },
    NotClose(Certificate),
    /// the witness search was inconclusive; the string describes the unverified family
    Unknown(String),
}

impl Closeness {
    pub fn is_close(&self) -> bool {
        matches!(self, Closeness::Close { .. })
    }
}

/// A distance value or an inconclusive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distance {
    Value(ExtendedNat),
    Unknown(String),
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Value(v) => write!(f, "{v}"),
            Distance::Unknown(_) => f.write_str("unknown"),
        }
    }
}

/// Ceilings on the sizes of intermediate constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// states of k-approximation automata and determinized automata
    pub state_ceiling: usize,
    /// summands produced by sumfree decomposition
    pub summand_limit: usize,
    /// states of the alignment graphs used for substitution distances
    pub gadget_ceiling: usize,
    /// largest composition power tried by the index search
    pub index_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { state_ceiling: 2_000_000, summand_limit: 10_000, gadget_ceiling: 1 << 16, index_max: 32 }
    }
}
