//! Classification of the temporal relation between two event instances.
//!
//! The classifier takes a pair in canonical order (start, then end, then
//! event id) and decides follows / contains / overlaps under a tolerance
//! `epsilon` and a minimal overlap `min_overlap`. The tolerance is applied
//! as a one-sided slack in the direction that widens each relation:
//! follows accepts `second.start >= first.end - epsilon`, contains accepts
//! `second.end <= first.end + epsilon`, and overlaps requires the overlap
//! to reach `min_overlap - epsilon` while the second instance extends past
//! `first.end + epsilon`. With instance durations above `2*epsilon` and
//! `min_overlap > 2*epsilon` the three predicates are mutually exclusive.
//!
//! Pairs whose overlap falls in the dead zone between the tolerance and the
//! minimal overlap map to no relation and contribute to no pattern.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EventInstance, RelationType};

/// Tolerance and minimal-overlap settings for relation classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationConfig {
    pub epsilon: u64,
    pub min_overlap: u64,
}

impl RelationConfig {
    pub fn new(epsilon: u64, min_overlap: u64) -> Result<RelationConfig> {
        if min_overlap <= 2 * epsilon {
            return Err(Error::config(format!(
                "min_overlap {min_overlap} must exceed 2*epsilon = {}",
                2 * epsilon
            )));
        }
        Ok(RelationConfig {
            epsilon,
            min_overlap,
        })
    }
}

/// Orders two instances canonically: by start, then end, then event id.
pub fn canonical_order(a: EventInstance, b: EventInstance) -> (EventInstance, EventInstance) {
    if a.sort_key() <= b.sort_key() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Classifies the relation between a canonical pair, or returns `None` for
/// the dead zone. Panics when the pair is not in canonical order.
pub fn classify(
    first: &EventInstance,
    second: &EventInstance,
    cfg: &RelationConfig,
) -> Option<RelationType> {
    assert!(
        first.sort_key() <= second.sort_key(),
        "classify requires canonical order: {:?} vs {:?}",
        first.interval,
        second.interval
    );
    let eps = cfg.epsilon;
    let (s1, e1) = (first.interval.start, first.interval.end);
    let (s2, e2) = (second.interval.start, second.interval.end);

    // follows: first ends (up to the slack) before the second starts
    if s2.0 + eps >= e1.0 {
        return Some(RelationType::Follows);
    }
    // contains: second ends within the slack of the first's end
    if s1 <= s2 && e2.0 <= e1.0 + eps {
        return Some(RelationType::Contains);
    }
    // overlaps: second extends beyond the slack and the shared duration
    // reaches the minimal overlap
    if s1 < s2 && e2.0 > e1.0 + eps && e1.saturating_sub(s2) + eps >= cfg.min_overlap {
        return Some(RelationType::Overlaps);
    }
    None
}
