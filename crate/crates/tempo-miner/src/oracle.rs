//! Brute-force reference miner and pattern-set comparison.
//!
//! The oracle enumerates every ordered event list (with repetition), every
//! sequence, and every canonical instance assignment within `t_max`,
//! classifies all pairwise relations, and aggregates sequence-level
//! support. It shares only the relation predicate with the main miner;
//! enumeration, support counting, and confidence are re-implemented here.
//! A size guard keeps it honest about its purpose.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mine::PatternWithStats;
use crate::model::{
    Bitmap, EventId, EventInstance, MiningConfig, PatternStats, RelationType, SequenceDatabase,
    TemporalPattern, TemporalSequence,
};
use crate::relations::{classify, RelationConfig};

const MAX_EVENTS: usize = 8;
const MAX_SEQUENCES: usize = 12;
const MAX_INSTANCES_PER_SEQ: usize = 12;
const MAX_K: usize = 4;

/// How much of a reference pattern set a candidate set recovers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub reference_count: u64,
    pub candidate_count: u64,
    pub matched: u64,
    pub accuracy: f64,
}

/// Exhaustively mines every frequent pattern of a small database.
pub fn brute_force_mine(
    db: &SequenceDatabase,
    cfg: &MiningConfig,
) -> Result<Vec<PatternWithStats>> {
    let events: Vec<EventId> = db.events().cloned().collect();
    if events.len() > MAX_EVENTS {
        return Err(Error::OracleGuard(format!(
            "{} events exceed the limit of {MAX_EVENTS}",
            events.len()
        )));
    }
    if db.len() > MAX_SEQUENCES {
        return Err(Error::OracleGuard(format!(
            "{} sequences exceed the limit of {MAX_SEQUENCES}",
            db.len()
        )));
    }
    if let Some(seq) = db
        .sequences()
        .iter()
        .find(|s| s.instances.len() > MAX_INSTANCES_PER_SEQ)
    {
        return Err(Error::OracleGuard(format!(
            "sequence {} holds {} instances, over the limit of {MAX_INSTANCES_PER_SEQ}",
            seq.id,
            seq.instances.len()
        )));
    }
    if cfg.k_max > MAX_K {
        return Err(Error::OracleGuard(format!(
            "k_max {} exceeds the limit of {MAX_K}",
            cfg.k_max
        )));
    }

    let rel_cfg = RelationConfig::new(cfg.epsilon, cfg.min_overlap)?;
    let n = db.len();

    // event supports by direct scan
    let mut supports: BTreeMap<&EventId, u64> = BTreeMap::new();
    for seq in db.sequences() {
        let present: BTreeSet<&EventId> = seq.instances.iter().map(|i| &i.event).collect();
        for ev in present {
            *supports.entry(ev).or_insert(0) += 1;
        }
    }

    let mut out = Vec::new();
    for k in 2..=cfg.k_max {
        if events.is_empty() {
            break;
        }
        // odometer over all ordered event lists with repetition
        let mut list = vec![0usize; k];
        'lists: loop {
            let chosen_events: Vec<&EventId> = list.iter().map(|&i| &events[i]).collect();
            mine_event_list(db, cfg, &rel_cfg, &chosen_events, &supports, n, &mut out)?;
            for pos in (0..k).rev() {
                list[pos] += 1;
                if list[pos] < events.len() {
                    continue 'lists;
                }
                list[pos] = 0;
            }
            break;
        }
    }
    Ok(out)
}

fn mine_event_list(
    db: &SequenceDatabase,
    cfg: &MiningConfig,
    rel_cfg: &RelationConfig,
    chosen_events: &[&EventId],
    supports: &BTreeMap<&EventId, u64>,
    n: usize,
    out: &mut Vec<PatternWithStats>,
) -> Result<()> {
    let k = chosen_events.len();
    let mut rel_seqs: BTreeMap<Vec<RelationType>, Vec<usize>> = BTreeMap::new();
    for (s, seq) in db.sequences().iter().enumerate() {
        let mut found: BTreeSet<Vec<RelationType>> = BTreeSet::new();
        let mut chosen: Vec<&EventInstance> = Vec::with_capacity(k);
        assignments(seq, cfg, rel_cfg, chosen_events, &mut chosen, &mut found);
        for rels in found {
            rel_seqs.entry(rels).or_default().push(s);
        }
    }
    let max_supp = chosen_events
        .iter()
        .map(|e| supports.get(e).copied().unwrap_or(0))
        .max()
        .unwrap_or(0);
    for (rels, seqs) in rel_seqs {
        let supp = seqs.len() as u64;
        let rel_support = supp as f64 / n as f64;
        if max_supp == 0 {
            continue;
        }
        let confidence = supp as f64 / max_supp as f64;
        if rel_support >= cfg.sigma && confidence >= cfg.delta {
            let mut bitmap = Bitmap::zeros(n);
            for s in seqs {
                bitmap.set(s);
            }
            out.push(PatternWithStats {
                pattern: TemporalPattern::from_relations(
                    chosen_events.iter().map(|e| (*e).clone()).collect(),
                    &rels,
                )?,
                stats: PatternStats {
                    support: supp,
                    rel_support,
                    confidence,
                },
                bitmap,
            });
        }
    }
    Ok(())
}

/// Enumerates canonical instance assignments for the event list and records
/// the fully related ones.
fn assignments<'a>(
    seq: &'a TemporalSequence,
    cfg: &MiningConfig,
    rel_cfg: &RelationConfig,
    chosen_events: &[&EventId],
    chosen: &mut Vec<&'a EventInstance>,
    found: &mut BTreeSet<Vec<RelationType>>,
) {
    let k = chosen_events.len();
    let pos = chosen.len();
    if pos == k {
        let first_start = chosen[0].interval.start.0;
        let max_end = chosen.iter().map(|c| c.interval.end.0).max().unwrap();
        if max_end - first_start > cfg.t_max {
            return;
        }
        let mut rels = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                match classify(chosen[i], chosen[j], rel_cfg) {
                    Some(r) => rels.push(r),
                    None => return,
                }
            }
        }
        found.insert(rels);
        return;
    }
    for inst in &seq.instances {
        if inst.event != *chosen_events[pos] {
            continue;
        }
        if let Some(last) = chosen.last() {
            if inst.sort_key() <= last.sort_key() {
                continue;
            }
        }
        chosen.push(inst);
        assignments(seq, cfg, rel_cfg, chosen_events, chosen, found);
        chosen.pop();
    }
}

/// Matches two pattern sets by identity (event list plus relation list) and
/// reports the recovered fraction of the reference.
pub fn compare(reference: &[PatternWithStats], candidate: &[PatternWithStats]) -> AccuracyReport {
    let key = |p: &PatternWithStats| (p.pattern.events.clone(), p.pattern.relations());
    let reference_keys: BTreeSet<_> = reference.iter().map(key).collect();
    let candidate_keys: BTreeSet<_> = candidate.iter().map(key).collect();
    let matched = reference_keys.intersection(&candidate_keys).count() as u64;
    let reference_count = reference_keys.len() as u64;
    let candidate_count = candidate_keys.len() as u64;
    let accuracy = if reference_count == 0 {
        1.0
    } else {
        matched as f64 / reference_count as f64
    };
    AccuracyReport {
        reference_count,
        candidate_count,
        matched,
        accuracy,
    }
}
