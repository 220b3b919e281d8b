//! Phase one of the pipeline: raw time series to symbolic series, symbolic
//! series to temporal events, and the windowed split that produces the
//! sequence database.
//!
//! Timestamps are grid indices with step 1 (one unit per sample interval).
//! A run of n identical symbols starting at sample t becomes the half-open
//! interval `[t, t + n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    EventId, EventInstance, Interval, SequenceDatabase, TemporalEvent, TemporalSequence, Timestamp,
};

/// A raw univariate series on the sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub variable: String,
    pub samples: Vec<(Timestamp, f64)>,
}

impl TimeSeries {
    /// Builds a series with timestamps 0..n.
    pub fn from_values(variable: impl Into<String>, values: &[f64]) -> TimeSeries {
        TimeSeries {
            variable: variable.into(),
            samples: values
                .iter()
                .enumerate()
                .map(|(i, &v)| (Timestamp(i as u64), v))
                .collect(),
        }
    }

    fn check_grid(&self) -> Result<()> {
        check_unit_grid(self.samples.iter().map(|(t, _)| *t), &self.variable)
    }
}

fn check_unit_grid(timestamps: impl Iterator<Item = Timestamp>, variable: &str) -> Result<()> {
    let mut prev: Option<Timestamp> = None;
    for t in timestamps {
        if let Some(p) = prev {
            if t.0 != p.0 + 1 {
                return Err(Error::input(format!(
                    "series {variable}: non-uniform grid, {p} followed by {t}"
                )));
            }
        }
        prev = Some(t);
    }
    Ok(())
}

/// Maps raw values to alphabet symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolMapper {
    /// Ascending cut points; a value in bin i gets labels[i]. Per-variable
    /// cut points override the defaults.
    Threshold {
        thresholds: Vec<f64>,
        #[serde(default)]
        per_variable: BTreeMap<String, Vec<f64>>,
        labels: Vec<String>,
    },
    /// Cut points at the empirical quantiles of each series.
    Quantile { bins: usize, labels: Vec<String> },
    /// Input cells are already symbols; applies to symbolic ingest only.
    Passthrough,
}

impl SymbolMapper {
    pub fn validate(&self) -> Result<()> {
        match self {
            SymbolMapper::Threshold {
                thresholds,
                per_variable,
                labels,
            } => {
                for cuts in std::iter::once(thresholds).chain(per_variable.values()) {
                    if labels.len() != cuts.len() + 1 {
                        return Err(Error::config(format!(
                            "{} thresholds need {} labels, got {}",
                            cuts.len(),
                            cuts.len() + 1,
                            labels.len()
                        )));
                    }
                    if cuts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::config("thresholds must be strictly ascending"));
                    }
                    if cuts.iter().any(|c| c.is_nan()) {
                        return Err(Error::config("NaN threshold"));
                    }
                }
                Ok(())
            }
            SymbolMapper::Quantile { bins, labels } => {
                if *bins == 0 {
                    return Err(Error::config("quantile mapper needs at least one bin"));
                }
                if labels.len() != *bins {
                    return Err(Error::config(format!(
                        "{bins} bins need {bins} labels, got {}",
                        labels.len()
                    )));
                }
                Ok(())
            }
            SymbolMapper::Passthrough => Ok(()),
        }
    }
}

fn bin_label<'a>(value: f64, cuts: &[f64], labels: &'a [String]) -> &'a str {
    let bin = cuts.iter().take_while(|&&c| value >= c).count();
    &labels[bin]
}

/// A symbolized series on the same grid as its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSeries {
    pub variable: String,
    pub symbols: Vec<(Timestamp, String)>,
}

impl SymbolicSeries {
    pub fn from_symbols(
        variable: impl Into<String>,
        symbols: impl IntoIterator<Item = impl Into<String>>,
    ) -> SymbolicSeries {
        SymbolicSeries {
            variable: variable.into(),
            symbols: symbols
                .into_iter()
                .enumerate()
                .map(|(i, s)| (Timestamp(i as u64), s.into()))
                .collect(),
        }
    }

    /// Observed alphabet, sorted.
    pub fn alphabet(&self) -> Vec<&str> {
        let mut a: Vec<&str> = self.symbols.iter().map(|(_, s)| s.as_str()).collect();
        a.sort_unstable();
        a.dedup();
        a
    }
}

/// A set of symbolic series sharing one time grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicDatabase {
    pub series: Vec<SymbolicSeries>,
    /// Raw time units per grid step (rendering metadata only).
    pub grid_unit: u64,
}

impl SymbolicDatabase {
    /// Validates grid uniformity and alignment across series. Missing
    /// samples are rejected, not imputed.
    pub fn new(series: Vec<SymbolicSeries>, grid_unit: u64) -> Result<SymbolicDatabase> {
        if series.is_empty() {
            return Err(Error::input("symbolic database has no series"));
        }
        let grid: Vec<Timestamp> = series[0].symbols.iter().map(|(t, _)| *t).collect();
        check_unit_grid(grid.iter().copied(), &series[0].variable)?;
        for s in &series[1..] {
            if s.symbols.len() != grid.len()
                || s.symbols.iter().zip(&grid).any(|((t, _), g)| t != g)
            {
                return Err(Error::input(format!(
                    "series {} does not cover the shared grid (missing samples are rejected)",
                    s.variable
                )));
            }
        }
        let mut names: Vec<&str> = series.iter().map(|s| s.variable.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("duplicate variable name"));
        }
        Ok(SymbolicDatabase { series, grid_unit })
    }

    pub fn variable(&self, name: &str) -> Option<&SymbolicSeries> {
        self.series.iter().find(|s| s.variable == name)
    }

    pub fn grid_len(&self) -> usize {
        self.series.first().map_or(0, |s| s.symbols.len())
    }

    /// Fraction of grid samples at which every listed (variable, symbol)
    /// pair holds simultaneously.
    pub fn co_occurrence_support(&self, events: &[EventId]) -> Result<f64> {
        let n = self.grid_len();
        if n == 0 {
            return Err(Error::domain("empty grid"));
        }
        let mut cols = Vec::with_capacity(events.len());
        for ev in events {
            let series = self
                .variable(&ev.variable)
                .ok_or_else(|| Error::input(format!("unknown variable {}", ev.variable)))?;
            cols.push((series, &ev.symbol));
        }
        let hits = (0..n)
            .filter(|&i| cols.iter().all(|(s, sym)| &s.symbols[i].1 == *sym))
            .count();
        Ok(hits as f64 / n as f64)
    }
}

/// Window length and overlap for the sequence split, in grid units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub window_len: u64,
    pub t_ov: u64,
}

impl SplitConfig {
    pub fn new(window_len: u64, t_ov: u64) -> Result<SplitConfig> {
        if window_len < 2 {
            return Err(Error::config("window must cover at least 2 samples"));
        }
        if t_ov >= window_len {
            return Err(Error::config(format!(
                "overlap {t_ov} must be smaller than the window length {window_len}"
            )));
        }
        Ok(SplitConfig { window_len, t_ov })
    }

    pub fn stride(&self) -> u64 {
        self.window_len - self.t_ov
    }
}

/// Applies the mapper to every sample. The grid is preserved; one symbol
/// per sample.
pub fn symbolize(ts: &TimeSeries, mapper: &SymbolMapper) -> Result<SymbolicSeries> {
    ts.check_grid()?;
    mapper.validate()?;
    let symbols = match mapper {
        SymbolMapper::Threshold {
            thresholds,
            per_variable,
            labels,
        } => {
            let cuts = per_variable.get(&ts.variable).unwrap_or(thresholds);
            map_values(ts, cuts, labels)?
        }
        SymbolMapper::Quantile { bins, labels } => {
            let cuts = quantile_cuts(ts, *bins)?;
            map_values(ts, &cuts, labels)?
        }
        SymbolMapper::Passthrough => {
            return Err(Error::config(
                "passthrough mapping applies to symbolic input, not numeric series",
            ))
        }
    };
    Ok(SymbolicSeries {
        variable: ts.variable.clone(),
        symbols,
    })
}

fn map_values(
    ts: &TimeSeries,
    cuts: &[f64],
    labels: &[String],
) -> Result<Vec<(Timestamp, String)>> {
    ts.samples
        .iter()
        .map(|&(t, v)| {
            if v.is_nan() {
                return Err(Error::input(format!(
                    "series {}: unmappable value at {t}",
                    ts.variable
                )));
            }
            Ok((t, bin_label(v, cuts, labels).to_string()))
        })
        .collect()
}

fn quantile_cuts(ts: &TimeSeries, bins: usize) -> Result<Vec<f64>> {
    if ts.samples.is_empty() {
        return Err(Error::input(format!("series {} is empty", ts.variable)));
    }
    let mut sorted: Vec<f64> = ts.samples.iter().map(|&(_, v)| v).collect();
    if sorted.iter().any(|v| v.is_nan()) {
        return Err(Error::input(format!(
            "series {}: unmappable value",
            ts.variable
        )));
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins).map(|i| sorted[i * n / bins]).collect();
    cuts.dedup();
    Ok(cuts)
}

/// Merges maximal runs of identical symbols into intervals, one temporal
/// event per distinct symbol. A run of n samples starting at t becomes
/// `[t, t + n)`.
pub fn extract_events(s: &SymbolicSeries) -> Vec<TemporalEvent> {
    let mut by_symbol: BTreeMap<&str, Vec<Interval>> = BTreeMap::new();
    let mut i = 0;
    while i < s.symbols.len() {
        let (start, ref sym) = s.symbols[i];
        let mut j = i + 1;
        while j < s.symbols.len() && &s.symbols[j].1 == sym {
            j += 1;
        }
        let end = Timestamp(start.0 + (j - i) as u64);
        by_symbol.entry(sym).or_default().push(Interval {
            start,
            end,
        });
        i = j;
    }
    by_symbol
        .into_iter()
        .map(|(sym, intervals)| TemporalEvent {
            event: EventId::new(s.variable.clone(), sym),
            intervals,
        })
        .collect()
}

/// Splits the database into (possibly overlapping) windows and builds the
/// sequence database: windows are placed at stride `window_len - t_ov` from
/// the grid start, a trailing partial window is kept when it still covers
/// at least two samples, instances are clipped to their window, and clipped
/// fragments of duration `<= 2 * epsilon` are dropped.
pub fn split_sequences(
    db: &SymbolicDatabase,
    cfg: &SplitConfig,
    epsilon: u64,
) -> Result<SequenceDatabase> {
    let events: Vec<TemporalEvent> = db.series.iter().flat_map(extract_events).collect();
    let grid_start = db
        .series
        .first()
        .and_then(|s| s.symbols.first())
        .map(|(t, _)| *t)
        .ok_or_else(|| Error::input("cannot split an empty grid"))?;
    let grid_end = Timestamp(grid_start.0 + db.grid_len() as u64);

    let mut sequences = Vec::new();
    let mut w_start = grid_start;
    loop {
        let w_end = Timestamp((w_start.0 + cfg.window_len).min(grid_end.0));
        if w_end.0 - w_start.0 < 2 {
            break;
        }
        let mut instances: Vec<EventInstance> = Vec::new();
        for ev in &events {
            for iv in &ev.intervals {
                if let Some(clipped) = iv.clip(w_start, w_end) {
                    if clipped.duration() > 2 * epsilon {
                        instances.push(EventInstance::new(ev.event.clone(), clipped));
                    }
                }
            }
        }
        instances.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        sequences.push(TemporalSequence {
            id: sequences.len() as u32,
            window: Interval {
                start: w_start,
                end: w_end,
            },
            instances,
        });
        if w_end == grid_end {
            break;
        }
        w_start = Timestamp(w_start.0 + cfg.stride());
        if w_start >= grid_end {
            break;
        }
    }
    SequenceDatabase::from_sequences(sequences)
}
