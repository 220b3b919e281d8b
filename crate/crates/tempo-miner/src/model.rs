//! Domain types shared by the whole pipeline: timestamps on the sampling
//! grid, event instances and their intervals, the windowed sequence database
//! with its bitmap index, temporal patterns and their support/confidence
//! arithmetic.
//!
//! All durations (`epsilon`, `min_overlap`, `t_max`, window lengths) are
//! expressed in grid units: one unit is one sample interval. Keeping the
//! arithmetic integral makes every relation test exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point on the sampling grid. One unit equals one sample interval; the
/// physical meaning (e.g. 5 minutes) is carried as metadata elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub fn saturating_sub(self, other: Timestamp) -> u64 {
        self.0.saturating_sub(other.0)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Half-open interval `[start, end)` with strictly positive duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Interval {
    /// Builds an interval, rejecting zero or negative durations.
    pub fn new(start: u64, end: u64) -> Result<Interval> {
        if start >= end {
            return Err(Error::domain(format!(
                "interval [{start},{end}) has no positive duration"
            )));
        }
        Ok(Interval {
            start: Timestamp(start),
            end: Timestamp(end),
        })
    }

    pub fn duration(&self) -> u64 {
        self.end.0 - self.start.0
    }

    /// Intersection with `[lo, hi)`, or `None` when empty.
    pub fn clip(&self, lo: Timestamp, hi: Timestamp) -> Option<Interval> {
        let start = self.start.max(lo);
        let end = self.end.min(hi);
        (start < end).then_some(Interval { start, end })
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

/// Identifier of a temporal event: a series variable together with one
/// symbol of that variable's alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventId {
    pub variable: String,
    pub symbol: String,
}

impl EventId {
    pub fn new(variable: impl Into<String>, symbol: impl Into<String>) -> EventId {
        EventId {
            variable: variable.into(),
            symbol: symbol.into(),
        }
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.variable, self.symbol)
    }
}

/// One occurrence of an event during a single interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventInstance {
    pub event: EventId,
    pub interval: Interval,
}

impl EventInstance {
    pub fn new(event: EventId, interval: Interval) -> EventInstance {
        EventInstance { event, interval }
    }

    /// Sort key fixing the chronological order used everywhere: start time,
    /// then end time, then event id.
    pub fn sort_key(&self) -> (Timestamp, Timestamp, &EventId) {
        (self.interval.start, self.interval.end, &self.event)
    }
}

/// An event with the full set of intervals during which its symbol holds,
/// sorted by start and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEvent {
    pub event: EventId,
    pub intervals: Vec<Interval>,
}

/// One row of the sequence database: a window over the grid plus the
/// chronologically ordered instances that fall inside it.
#[derive(Debug, Clone)]
pub struct TemporalSequence {
    pub id: u32,
    pub window: Interval,
    pub instances: Vec<EventInstance>,
}

/// Fixed-length bit vector over sequence indices. Bit `i` is set when the
/// indexed event or pattern is present in sequence `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    len: usize,
    blocks: Vec<u64>,
}

impl Bitmap {
    pub fn zeros(len: usize) -> Bitmap {
        Bitmap {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Bitmap {
        let mut b = Bitmap::zeros(bits.len());
        for (i, &set) in bits.iter().enumerate() {
            if set {
                b.set(i);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits.
    pub fn count(&self) -> u64 {
        self.blocks.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Bitwise AND. Errors when the lengths differ.
    pub fn and(&self, other: &Bitmap) -> Result<Bitmap> {
        if self.len != other.len {
            return Err(Error::config(format!(
                "bitmap length mismatch: {} vs {}",
                self.len, other.len
            )));
        }
        Ok(Bitmap {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        })
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// The windowed sequence database plus the per-event bitmap and instance
/// indices used by the miner. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SequenceDatabase {
    sequences: Vec<TemporalSequence>,
    event_index: BTreeMap<EventId, Bitmap>,
    instance_index: HashMap<(EventId, u32), Vec<EventInstance>>,
}

impl SequenceDatabase {
    /// Validates the sequences and builds the indices. Instances must be
    /// sorted by (start, end, event id) and lie within their window.
    pub fn from_sequences(sequences: Vec<TemporalSequence>) -> Result<SequenceDatabase> {
        let n = sequences.len();
        for (pos, seq) in sequences.iter().enumerate() {
            if seq.id as usize != pos {
                return Err(Error::Internal(format!(
                    "sequence id {} at row {pos}",
                    seq.id
                )));
            }
            for w in seq.instances.windows(2) {
                if w[0].sort_key() > w[1].sort_key() {
                    return Err(Error::Internal(format!(
                        "sequence {} instances not in chronological order",
                        seq.id
                    )));
                }
            }
            for inst in &seq.instances {
                if !seq.window.contains(&inst.interval) {
                    return Err(Error::Internal(format!(
                        "instance {} [{},{}) outside window [{},{}) of sequence {}",
                        inst.event,
                        inst.interval.start,
                        inst.interval.end,
                        seq.window.start,
                        seq.window.end,
                        seq.id
                    )));
                }
            }
        }
        let mut event_index: BTreeMap<EventId, Bitmap> = BTreeMap::new();
        let mut instance_index: HashMap<(EventId, u32), Vec<EventInstance>> = HashMap::new();
        for seq in &sequences {
            for inst in &seq.instances {
                event_index
                    .entry(inst.event.clone())
                    .or_insert_with(|| Bitmap::zeros(n))
                    .set(seq.id as usize);
                instance_index
                    .entry((inst.event.clone(), seq.id))
                    .or_default()
                    .push(inst.clone());
            }
        }
        // within a sequence, one event's instances come from merged symbol
        // runs and must stay disjoint
        for ((ev, seq_id), insts) in &instance_index {
            for w in insts.windows(2) {
                if w[1].interval.start < w[0].interval.end {
                    return Err(Error::Internal(format!(
                        "overlapping instances of {ev} in sequence {seq_id}"
                    )));
                }
            }
        }
        Ok(SequenceDatabase {
            sequences,
            event_index,
            instance_index,
        })
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequences(&self) -> &[TemporalSequence] {
        &self.sequences
    }

    /// Distinct events present anywhere in the database, in id order.
    pub fn events(&self) -> impl Iterator<Item = &EventId> {
        self.event_index.keys()
    }

    pub fn event_bitmap(&self, event: &EventId) -> Option<&Bitmap> {
        self.event_index.get(event)
    }

    /// Number of sequences containing at least one instance of `event`.
    pub fn event_support(&self, event: &EventId) -> u64 {
        self.event_index.get(event).map_or(0, Bitmap::count)
    }

    /// Instances of `event` inside sequence `seq`, chronologically ordered.
    pub fn instances(&self, event: &EventId, seq: u32) -> &[EventInstance] {
        self.instance_index
            .get(&(event.clone(), seq))
            .map_or(&[], Vec::as_slice)
    }
}

/// The three interval relations of the model. There are deliberately no
/// equals/meets variants; near-coincident endpoints are absorbed by the
/// tolerance of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationType {
    Follows,
    Contains,
    Overlaps,
}

impl RelationType {
    pub const ALL: [RelationType; 3] = [
        RelationType::Follows,
        RelationType::Contains,
        RelationType::Overlaps,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RelationType::Follows => "follows",
            RelationType::Contains => "contains",
            RelationType::Overlaps => "overlaps",
        }
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One relation triple of a pattern: `relation` holds between the pattern
/// events `first` and `second` (in pattern position order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub relation: RelationType,
    pub first: EventId,
    pub second: EventId,
}

/// A temporal pattern: an ordered list of k events and one relation triple
/// per position pair (i, j), i < j, in lexicographic (i, j) order.
///
/// Identity (equality, hashing, ordering) covers the event list and the
/// relation list only; stats are kept separately.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalPattern {
    pub events: Vec<EventId>,
    pub triples: Vec<Triple>,
}

/// Flat index of the pair (i, j), i < j, in the lexicographic triple order
/// of a k-event pattern.
pub fn pair_index(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

impl TemporalPattern {
    /// Assembles a pattern from the event list and the relation list in
    /// lexicographic (i, j) order.
    pub fn from_relations(events: Vec<EventId>, relations: &[RelationType]) -> Result<Self> {
        let k = events.len();
        if k < 2 {
            return Err(Error::domain("a pattern needs at least two events"));
        }
        if relations.len() != k * (k - 1) / 2 {
            return Err(Error::domain(format!(
                "{}-event pattern needs {} relations, got {}",
                k,
                k * (k - 1) / 2,
                relations.len()
            )));
        }
        let mut triples = Vec::with_capacity(relations.len());
        for i in 0..k {
            for j in (i + 1)..k {
                triples.push(Triple {
                    relation: relations[pair_index(i, j, k)],
                    first: events[i].clone(),
                    second: events[j].clone(),
                });
            }
        }
        Ok(TemporalPattern { events, triples })
    }

    pub fn size(&self) -> usize {
        self.events.len()
    }

    /// Relations in lexicographic (i, j) order.
    pub fn relations(&self) -> Vec<RelationType> {
        self.triples.iter().map(|t| t.relation).collect()
    }
}

impl fmt::Display for TemporalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.size();
        let mut first = true;
        for i in 0..k {
            for j in (i + 1)..k {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                let t = &self.triples[pair_index(i, j, k)];
                write!(f, "{}({}, {})", t.relation, t.first, t.second)?;
            }
        }
        Ok(())
    }
}

/// Support and confidence of a mined pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternStats {
    /// Number of supporting sequences.
    pub support: u64,
    /// `support / |database|`.
    pub rel_support: f64,
    /// `support / max event support` (all-confidence).
    pub confidence: f64,
}

/// Confidence of an event pair: joint support over the support of the more
/// frequent event.
pub fn pair_confidence(supp_pair: u64, supp_i: u64, supp_j: u64) -> Result<f64> {
    if supp_i == 0 || supp_j == 0 {
        return Err(Error::domain("pair confidence with zero event support"));
    }
    debug_assert!(supp_pair <= supp_i.min(supp_j));
    Ok(supp_pair as f64 / supp_i.max(supp_j) as f64)
}

/// Confidence of a pattern: pattern support over the support of its most
/// frequent event (all-confidence).
pub fn pattern_confidence(supp_pattern: u64, event_supports: &[u64]) -> Result<f64> {
    let max = event_supports
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::domain("pattern confidence with empty support list"))?;
    if max == 0 {
        return Err(Error::domain("pattern confidence with zero event support"));
    }
    Ok(supp_pattern as f64 / max as f64)
}

/// Which candidate-level filters the miner applies. Output pattern sets are
/// identical across all levels; only the amount of discarded work differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneLevel {
    /// No candidate filtering; exact stats gate the output only.
    None,
    /// Group-level support and confidence gates on candidate nodes.
    Apriori,
    /// Single-event filtering and per-triple admissibility checks at k >= 3.
    Trans,
    /// Both groups of filters.
    All,
}

impl PruneLevel {
    pub fn apriori_gates(&self) -> bool {
        matches!(self, PruneLevel::Apriori | PruneLevel::All)
    }

    pub fn transitivity_filters(&self) -> bool {
        matches!(self, PruneLevel::Trans | PruneLevel::All)
    }
}

impl std::str::FromStr for PruneLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<PruneLevel> {
        match s {
            "none" => Ok(PruneLevel::None),
            "apriori" => Ok(PruneLevel::Apriori),
            "trans" => Ok(PruneLevel::Trans),
            "all" => Ok(PruneLevel::All),
            other => Err(Error::config(format!("unknown prune level `{other}`"))),
        }
    }
}

/// Thresholds and bounds steering a mining run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Relative support threshold, in (0, 1].
    pub sigma: f64,
    /// Confidence threshold, in (0, 1].
    pub delta: f64,
    /// Tolerance buffer on relation endpoints, grid units.
    pub epsilon: u64,
    /// Minimal overlapping duration for the overlaps relation, grid units.
    /// Must exceed `2 * epsilon`.
    pub min_overlap: u64,
    /// Maximal span of a pattern realization, grid units.
    pub t_max: u64,
    /// Largest pattern size to mine.
    pub k_max: usize,
    pub prune_level: PruneLevel,
}

impl MiningConfig {
    /// Checks the invariants. A sigma of exactly zero is normalized to the
    /// smallest positive threshold so that every present event qualifies.
    pub fn validated(mut self) -> Result<MiningConfig> {
        if self.sigma == 0.0 {
            self.sigma = f64::MIN_POSITIVE;
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return Err(Error::config(format!("sigma {} not in (0,1]", self.sigma)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::config(format!("delta {} not in (0,1]", self.delta)));
        }
        if self.min_overlap <= 2 * self.epsilon {
            return Err(Error::config(format!(
                "min_overlap {} must exceed 2*epsilon = {}",
                self.min_overlap,
                2 * self.epsilon
            )));
        }
        if self.t_max < 1 {
            return Err(Error::config("t_max must be at least 1 grid unit"));
        }
        if self.k_max < 2 {
            return Err(Error::config("k_max must be at least 2"));
        }
        Ok(self)
    }
}
