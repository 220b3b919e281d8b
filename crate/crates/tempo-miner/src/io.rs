//! File formats: the wide symbolic CSV (first column timestamp, one column
//! per variable), the sequence-database JSON, and the patterns JSONL with
//! fixed six-decimal float formatting for byte-stable output.
//!
//! Raw timestamps may be plain integers or HH:MM clock strings; both are
//! normalized to grid indices at ingest, and the inferred step is kept as
//! `grid_unit` so files render back in original units.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mine::PatternWithStats;
use crate::model::{
    pair_index, Bitmap, EventId, EventInstance, Interval, PatternStats, RelationType,
    SequenceDatabase, TemporalPattern, TemporalSequence, Timestamp,
};
use crate::transform::{SymbolicDatabase, SymbolicSeries, TimeSeries};

fn parse_timestamp(cell: &str, line: usize) -> Result<u64> {
    let cell = cell.trim();
    if let Ok(v) = cell.parse::<u64>() {
        return Ok(v);
    }
    if let Some((h, m)) = cell.split_once(':') {
        if let (Ok(h), Ok(m)) = (h.parse::<u64>(), m.parse::<u64>()) {
            if m < 60 {
                return Ok(h * 60 + m);
            }
        }
    }
    Err(Error::input(format!(
        "line {line}: cannot parse timestamp `{cell}`"
    )))
}

/// Reads raw timestamps, checks uniform spacing, and converts them to grid
/// indices. Returns the indices together with the step (the grid unit).
fn normalize_grid(raw: &[u64]) -> Result<(Vec<u64>, u64)> {
    if raw.len() < 2 {
        return Err(Error::input("need at least 2 samples"));
    }
    let step = raw[1].checked_sub(raw[0]).filter(|&s| s > 0).ok_or_else(|| {
        Error::input("timestamps must be strictly increasing")
    })?;
    for (i, w) in raw.windows(2).enumerate() {
        if w[1].checked_sub(w[0]) != Some(step) {
            return Err(Error::input(format!(
                "line {}: non-uniform grid ({} after {})",
                i + 3,
                w[1],
                w[0]
            )));
        }
    }
    Ok((raw.iter().map(|&t| (t - raw[0]) / step).collect(), step))
}

struct WideCsv {
    variables: Vec<String>,
    timestamps: Vec<u64>,
    cells: Vec<Vec<String>>, // per variable
    grid_unit: u64,
}

fn read_wide_csv(reader: impl Read) -> Result<WideCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::input(format!("bad header: {e}")))?
        .clone();
    if headers.len() < 2 {
        return Err(Error::input(
            "expected a timestamp column plus at least one variable column",
        ));
    }
    let variables: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut timestamps = Vec::new();
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); variables.len()];
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2; // header is line 1
        let record = record.map_err(|e| Error::input(format!("line {line}: {e}")))?;
        if record.len() != variables.len() + 1 {
            return Err(Error::input(format!(
                "line {line}: expected {} fields, got {}",
                variables.len() + 1,
                record.len()
            )));
        }
        timestamps.push(parse_timestamp(&record[0], line)?);
        for (v, cell) in record.iter().skip(1).enumerate() {
            if cell.is_empty() {
                return Err(Error::input(format!(
                    "line {line}: missing value for {} (no imputation)",
                    variables[v]
                )));
            }
            cells[v].push(cell.to_string());
        }
    }
    if timestamps.is_empty() {
        return Err(Error::input("empty CSV"));
    }
    let (indices, grid_unit) = normalize_grid(&timestamps)?;
    Ok(WideCsv {
        variables,
        timestamps: indices,
        cells,
        grid_unit,
    })
}

/// Ingests a wide CSV of numeric series.
pub fn read_raw_csv(reader: impl Read) -> Result<(Vec<TimeSeries>, u64)> {
    let wide = read_wide_csv(reader)?;
    let mut out = Vec::new();
    for (v, name) in wide.variables.iter().enumerate() {
        let mut samples = Vec::with_capacity(wide.timestamps.len());
        for (i, cell) in wide.cells[v].iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                Error::input(format!(
                    "line {}: cannot parse `{cell}` as a number for {name}",
                    i + 2
                ))
            })?;
            samples.push((Timestamp(wide.timestamps[i]), value));
        }
        out.push(TimeSeries {
            variable: name.clone(),
            samples,
        });
    }
    Ok((out, wide.grid_unit))
}

/// Ingests a wide CSV of already-symbolic series.
pub fn read_symbolic_csv(reader: impl Read) -> Result<SymbolicDatabase> {
    let wide = read_wide_csv(reader)?;
    let series = wide
        .variables
        .iter()
        .enumerate()
        .map(|(v, name)| SymbolicSeries {
            variable: name.clone(),
            symbols: wide.cells[v]
                .iter()
                .enumerate()
                .map(|(i, s)| (Timestamp(wide.timestamps[i]), s.clone()))
                .collect(),
        })
        .collect();
    SymbolicDatabase::new(series, wide.grid_unit)
}

/// Writes the wide CSV layout; timestamps render in original units.
pub fn write_symbolic_csv(db: &SymbolicDatabase) -> String {
    let mut out = String::from("time");
    for s in &db.series {
        out.push(',');
        out.push_str(&s.variable);
    }
    out.push('\n');
    for i in 0..db.grid_len() {
        let t = db.series[0].symbols[i].0 .0 * db.grid_unit;
        out.push_str(&t.to_string());
        for s in &db.series {
            out.push(',');
            out.push_str(&s.symbols[i].1);
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    grid_unit: u64,
    sequences: Vec<SequenceRec>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRec {
    id: u32,
    window: [u64; 2],
    instances: Vec<InstanceRec>,
}

#[derive(Serialize, Deserialize)]
struct InstanceRec {
    var: String,
    symbol: String,
    start: u64,
    end: u64,
}

/// Serializes the sequence database to its JSON schema.
pub fn write_sequence_json(db: &SequenceDatabase, grid_unit: u64) -> String {
    let doc = SequenceFile {
        grid_unit,
        sequences: db
            .sequences()
            .iter()
            .map(|seq| SequenceRec {
                id: seq.id,
                window: [seq.window.start.0, seq.window.end.0],
                instances: seq
                    .instances
                    .iter()
                    .map(|inst| InstanceRec {
                        var: inst.event.variable.clone(),
                        symbol: inst.event.symbol.clone(),
                        start: inst.interval.start.0,
                        end: inst.interval.end.0,
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("sequence database serializes")
}

/// Parses and validates a sequence-database JSON file.
pub fn read_sequence_json(text: &str) -> Result<(SequenceDatabase, u64)> {
    let doc: SequenceFile =
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad sequence file: {e}")))?;
    let mut sequences = Vec::with_capacity(doc.sequences.len());
    for (pos, rec) in doc.sequences.into_iter().enumerate() {
        if rec.id as usize != pos {
            return Err(Error::input(format!(
                "sequence ids must be dense and ordered: found {} at row {pos}",
                rec.id
            )));
        }
        let window = Interval::new(rec.window[0], rec.window[1])
            .map_err(|e| Error::input(format!("sequence {}: {e}", rec.id)))?;
        let mut instances = Vec::with_capacity(rec.instances.len());
        for inst in rec.instances {
            let interval = Interval::new(inst.start, inst.end)
                .map_err(|e| Error::input(format!("sequence {}: {e}", rec.id)))?;
            instances.push(EventInstance::new(EventId::new(inst.var, inst.symbol), interval));
        }
        instances.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        sequences.push(TemporalSequence {
            id: rec.id,
            window,
            instances,
        });
    }
    let db = SequenceDatabase::from_sequences(sequences).map_err(|e| match e {
        Error::Internal(msg) => Error::Input(msg),
        other => other,
    })?;
    Ok((db, doc.grid_unit))
}

#[derive(Serialize, Deserialize)]
struct EventRec {
    var: String,
    symbol: String,
}

#[derive(Serialize, Deserialize)]
struct TripleRec {
    rel: RelationType,
    i: usize,
    j: usize,
}

/// Writes one JSON record per pattern with floats fixed at six decimals,
/// so identical results produce byte-identical files.
pub fn write_patterns_jsonl(patterns: &[PatternWithStats]) -> String {
    let mut out = String::new();
    for p in patterns {
        let k = p.pattern.size();
        let events: Vec<EventRec> = p
            .pattern
            .events
            .iter()
            .map(|e| EventRec {
                var: e.variable.clone(),
                symbol: e.symbol.clone(),
            })
            .collect();
        let mut triples = Vec::with_capacity(p.pattern.triples.len());
        for i in 0..k {
            for j in (i + 1)..k {
                triples.push(TripleRec {
                    rel: p.pattern.triples[pair_index(i, j, k)].relation,
                    i,
                    j,
                });
            }
        }
        out.push_str(&format!(
            "{{\"events\":{},\"triples\":{},\"support\":{},\"rel_support\":{:.6},\"confidence\":{:.6}}}\n",
            serde_json::to_string(&events).expect("events serialize"),
            serde_json::to_string(&triples).expect("triples serialize"),
            p.stats.support,
            p.stats.rel_support,
            p.stats.confidence,
        ));
    }
    out
}

/// Parses a patterns file. The supporting-sequence bitmap is not part of
/// the format; records come back with an empty one.
pub fn read_patterns_jsonl(text: &str) -> Result<Vec<PatternWithStats>> {
    #[derive(Deserialize)]
    struct PatternRec {
        events: Vec<EventRec>,
        triples: Vec<TripleRec>,
        support: u64,
        rel_support: f64,
        confidence: f64,
    }
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: PatternRec = serde_json::from_str(line)
            .map_err(|e| Error::input(format!("pattern line {}: {e}", lineno + 1)))?;
        let k = rec.events.len();
        if k < 2 || rec.triples.len() != k * (k - 1) / 2 {
            return Err(Error::input(format!(
                "pattern line {}: triple count does not match {} events",
                lineno + 1,
                k
            )));
        }
        let mut relations = vec![None; rec.triples.len()];
        for t in &rec.triples {
            if t.i >= t.j || t.j >= k {
                return Err(Error::input(format!(
                    "pattern line {}: bad pair ({}, {})",
                    lineno + 1,
                    t.i,
                    t.j
                )));
            }
            relations[pair_index(t.i, t.j, k)] = Some(t.rel);
        }
        let relations: Vec<RelationType> = relations
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| {
                Error::input(format!("pattern line {}: pairs not covered", lineno + 1))
            })?;
        let events: Vec<EventId> = rec
            .events
            .into_iter()
            .map(|e| EventId::new(e.var, e.symbol))
            .collect();
        out.push(PatternWithStats {
            pattern: TemporalPattern::from_relations(events, &relations)?,
            stats: PatternStats {
                support: rec.support,
                rel_support: rec.rel_support,
                confidence: rec.confidence,
            },
            bitmap: Bitmap::zeros(0),
        });
    }
    Ok(out)
}
