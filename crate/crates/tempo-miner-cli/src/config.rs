//! The run config file and its merge with command-line flags. Every flag
//! has a config-file equivalent; flags win on conflict.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use tempo_miner::error::{Error, Result};
use tempo_miner::model::{MiningConfig, PruneLevel};
use tempo_miner::transform::{SplitConfig, SymbolMapper};

use crate::args::IngestOpts;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sigma: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<u64>,
    pub min_overlap: Option<u64>,
    pub t_max: Option<u64>,
    pub k_max: Option<usize>,
    pub prune: Option<String>,
    pub mode: Option<String>,
    pub mu: Option<f64>,
    pub window: Option<u64>,
    pub overlap: Option<u64>,
    pub threads: Option<usize>,
    pub mapper: Option<MapperConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapperConfig {
    pub kind: String,
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default)]
    pub per_variable: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub bins: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::config(format!("{}: {e}", p.display())))
            }
        }
    }
}

/// Builds the mapper from flags over file values. Defaults to passthrough.
pub fn resolve_mapper(opts: &IngestOpts, file: &FileConfig) -> Result<SymbolMapper> {
    let kind = opts
        .mapper
        .clone()
        .or_else(|| file.mapper.as_ref().map(|m| m.kind.clone()))
        .unwrap_or_else(|| "passthrough".to_string());
    let file_mapper = file.mapper.clone();
    let thresholds = opts
        .thresholds
        .clone()
        .or_else(|| file_mapper.as_ref().and_then(|m| m.thresholds.clone()));
    let labels = opts
        .labels
        .clone()
        .or_else(|| file_mapper.as_ref().and_then(|m| m.labels.clone()));
    let bins = opts
        .bins
        .or_else(|| file_mapper.as_ref().and_then(|m| m.bins));
    let per_variable = file_mapper
        .as_ref()
        .and_then(|m| m.per_variable.clone())
        .unwrap_or_default();

    let mapper = match kind.as_str() {
        "passthrough" => SymbolMapper::Passthrough,
        "threshold" => SymbolMapper::Threshold {
            thresholds: thresholds
                .ok_or_else(|| Error::config("threshold mapper needs --thresholds"))?,
            per_variable,
            labels: labels.ok_or_else(|| Error::config("threshold mapper needs --labels"))?,
        },
        "quantile" => SymbolMapper::Quantile {
            bins: bins.ok_or_else(|| Error::config("quantile mapper needs --bins"))?,
            labels: labels.ok_or_else(|| Error::config("quantile mapper needs --labels"))?,
        },
        other => return Err(Error::config(format!("unknown mapper kind `{other}`"))),
    };
    mapper.validate()?;
    Ok(mapper)
}

pub fn resolve_split(opts: &IngestOpts, file: &FileConfig) -> Result<SplitConfig> {
    let window = opts
        .window
        .or(file.window)
        .ok_or_else(|| Error::config("missing --window (or `window` in the config file)"))?;
    let overlap = opts.overlap.or(file.overlap).unwrap_or(0);
    SplitConfig::new(window, overlap)
}

pub struct MiningOpts<'a> {
    pub sigma: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<u64>,
    pub min_overlap: Option<u64>,
    pub t_max: Option<u64>,
    pub k_max: Option<usize>,
    pub prune: Option<&'a str>,
}

/// Merges mining flags with the config file; `default_t_max` fills in when
/// neither side names one.
pub fn resolve_mining(
    opts: MiningOpts<'_>,
    file: &FileConfig,
    default_t_max: u64,
) -> Result<MiningConfig> {
    let sigma = opts
        .sigma
        .or(file.sigma)
        .ok_or_else(|| Error::config("missing --sigma"))?;
    let delta = opts
        .delta
        .or(file.delta)
        .ok_or_else(|| Error::config("missing --delta"))?;
    let epsilon = opts.epsilon.or(file.epsilon).unwrap_or(0);
    let min_overlap = opts
        .min_overlap
        .or(file.min_overlap)
        .unwrap_or(2 * epsilon + 1);
    let t_max = opts.t_max.or(file.t_max).unwrap_or(default_t_max);
    let k_max = opts.k_max.or(file.k_max).unwrap_or(3);
    let prune: PruneLevel = opts
        .prune
        .map(str::to_string)
        .or_else(|| file.prune.clone())
        .unwrap_or_else(|| "all".to_string())
        .parse()?;
    MiningConfig {
        sigma,
        delta,
        epsilon,
        min_overlap,
        t_max,
        k_max,
        prune_level: prune,
    }
    .validated()
}

/// Worker count: flag, then config file, then TEMPO_MINER_THREADS, then 1.
pub fn resolve_threads(flag: Option<usize>, file: &FileConfig) -> Result<usize> {
    if let Some(t) = flag.or(file.threads) {
        return Ok(t.max(1));
    }
    match std::env::var("TEMPO_MINER_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map(|t| t.max(1))
            .map_err(|_| Error::config(format!("TEMPO_MINER_THREADS=`{v}` is not a number"))),
        Err(_) => Ok(1),
    }
}
