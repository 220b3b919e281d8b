use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use tempo_miner::approx::{build_correlation_graph, mine_screened_with_threads};
use tempo_miner::error::{Error, Result};
use tempo_miner::io as tio;
use tempo_miner::mi::{conf_lower_bound, CorrelationConfig};
use tempo_miner::mine::{mine_with_threads, MiningCounters, MiningOutcome};
use tempo_miner::model::SequenceDatabase;
use tempo_miner::oracle::compare;
use tempo_miner::synth::{generate, GeneratorSpec};
use tempo_miner::transform::{split_sequences, symbolize, SymbolMapper, SymbolicDatabase};

use crate::args::*;
use crate::config::{
    resolve_mapper, resolve_mining, resolve_split, resolve_threads, FileConfig, MiningOpts,
};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::Mine(a) => cmd_mine(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Generate(a) => cmd_generate(a),
        Command::MiGraph(a) => cmd_mi_graph(a),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Reads the input CSV as symbolic (passthrough) or numeric (any other
/// mapper), returning the symbolic database.
fn ingest_csv(path: &Path, mapper: &SymbolMapper) -> Result<SymbolicDatabase> {
    let file = fs::File::open(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    match mapper {
        SymbolMapper::Passthrough => tio::read_symbolic_csv(file),
        _ => {
            let (series, grid_unit) = tio::read_raw_csv(file)?;
            let symbolic = series
                .iter()
                .map(|ts| symbolize(ts, mapper))
                .collect::<Result<Vec<_>>>()?;
            SymbolicDatabase::new(symbolic, grid_unit)
        }
    }
}

fn cmd_transform(a: TransformArgs) -> Result<()> {
    let file = FileConfig::load(a.ingest.config.as_deref())?;
    let mapper = resolve_mapper(&a.ingest, &file)?;
    let split = resolve_split(&a.ingest, &file)?;
    let epsilon = a.epsilon.or(file.epsilon).unwrap_or(0);

    let symbolic = ingest_csv(&a.input, &mapper)?;
    let seq_db = split_sequences(&symbolic, &split, epsilon)?;

    fs::write(&a.out_symbolic, tio::write_symbolic_csv(&symbolic))?;
    fs::write(
        &a.out_sequences,
        tio::write_sequence_json(&seq_db, symbolic.grid_unit),
    )?;
    eprintln!(
        "transformed {} series x {} samples into {} sequences",
        symbolic.series.len(),
        symbolic.grid_len(),
        seq_db.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    mode: &'a str,
    prune: String,
    sequences: usize,
    level_nodes: Vec<usize>,
    patterns: usize,
    counters: MiningCounters,
    wall_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph_edges: Option<usize>,
}

fn cmd_mine(a: MineArgs) -> Result<()> {
    let file = FileConfig::load(a.ingest.config.as_deref())?;
    let mode = a
        .mode
        .clone()
        .or_else(|| file.mode.clone())
        .unwrap_or_else(|| "exact".to_string());
    if mode != "exact" && mode != "approx" {
        return Err(Error::config(format!("unknown mode `{mode}`")));
    }
    let threads = resolve_threads(a.threads, &file)?;

    let is_json = a
        .input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));

    let (symbolic, seq_db, grid_unit): (Option<SymbolicDatabase>, SequenceDatabase, u64) =
        if is_json {
            let text = fs::read_to_string(&a.input)
                .map_err(|e| Error::input(format!("{}: {e}", a.input.display())))?;
            let (db, unit) = tio::read_sequence_json(&text)?;
            (None, db, unit)
        } else {
            let mapper = resolve_mapper(&a.ingest, &file)?;
            let split = resolve_split(&a.ingest, &file)?;
            let symbolic = ingest_csv(&a.input, &mapper)?;
            let epsilon = a.epsilon.or(file.epsilon).unwrap_or(0);
            let db = split_sequences(&symbolic, &split, epsilon)?;
            let unit = symbolic.grid_unit;
            (Some(symbolic), db, unit)
        };

    if seq_db.is_empty() {
        return Err(Error::input("the sequence database is empty"));
    }
    let longest_window = seq_db
        .sequences()
        .iter()
        .map(|s| s.window.duration())
        .max()
        .unwrap_or(1);
    let cfg = resolve_mining(
        MiningOpts {
            sigma: a.sigma,
            delta: a.delta,
            epsilon: a.epsilon,
            min_overlap: a.min_overlap,
            t_max: a.t_max,
            k_max: a.k_max,
            prune: a.prune.as_deref(),
        },
        &file,
        longest_window,
    )?;
    if let Some(split_overlap) = a.ingest.overlap.or(file.overlap) {
        if split_overlap > cfg.t_max {
            return Err(Error::config(format!(
                "window overlap {split_overlap} exceeds t_max {}",
                cfg.t_max
            )));
        }
    }

    let started = Instant::now();
    let (outcome, graph_info): (MiningOutcome, Option<(usize, usize)>) = if mode == "approx" {
        let Some(symbolic) = &symbolic else {
            return Err(Error::config(
                "approx mode needs the symbolic database; mine from CSV, not a sequence file",
            ));
        };
        let corr = CorrelationConfig {
            sigma: cfg.sigma,
            delta: cfg.delta,
            mu_override: a.mu.or(file.mu),
        };
        let screened = mine_screened_with_threads(symbolic, &seq_db, &cfg, &corr, threads)?;
        if screened.graph.vertices.is_empty() {
            eprintln!("warning: correlation graph is empty; no patterns can be mined");
        }
        for v in &screened.graph.skipped {
            eprintln!("warning: series {v} is degenerate and was excluded from the graph");
        }
        let info = (
            screened.graph.vertices.len(),
            screened.graph.edges.len(),
        );
        (screened.outcome, Some(info))
    } else {
        (mine_with_threads(&seq_db, &cfg, threads)?, None)
    };
    let wall_ms = started.elapsed().as_millis();

    fs::write(&a.out, tio::write_patterns_jsonl(&outcome.patterns))?;

    let summary = Summary {
        mode: &mode,
        prune: format!("{:?}", cfg.prune_level).to_lowercase(),
        sequences: seq_db.len(),
        level_nodes: outcome.graph.level_sizes(),
        patterns: outcome.patterns.len(),
        counters: outcome.counters,
        wall_ms,
        graph_vertices: graph_info.map(|(v, _)| v),
        graph_edges: graph_info.map(|(_, e)| e),
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_out(a.summary.as_deref(), &format!("{text}\n"))?;
    let _ = grid_unit;
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let reference = tio::read_patterns_jsonl(&fs::read_to_string(&a.reference)?)?;
    let candidate = tio::read_patterns_jsonl(&fs::read_to_string(&a.candidate)?)?;
    let report = compare(&reference, &candidate);
    println!(
        "{}",
        serde_json::to_string(&report).expect("report serializes")
    );
    Ok(())
}

fn parse_grid(spec: &str, what: &str) -> Result<Vec<f64>> {
    if let Ok(single) = spec.parse::<f64>() {
        return Ok(vec![single]);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::config(format!(
            "{what}: expected a number or start:end:count, got `{spec}`"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::config(format!("{what}: bad start `{}`", parts[0])))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| Error::config(format!("{what}: bad end `{}`", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::config(format!("{what}: bad count `{}`", parts[2])))?;
    if count == 0 {
        return Err(Error::config(format!("{what}: count must be positive")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn cmd_bound(a: BoundArgs) -> Result<()> {
    let sigmas = parse_grid(&a.sigma, "--sigma")?;
    let mus = parse_grid(&a.mu_grid, "--mu-grid")?;
    let mut out = String::from("sigma,mu,bound\n");
    for &sigma in &sigmas {
        for &mu in &mus {
            match conf_lower_bound(sigma, mu, a.nx, a.lambda1, a.lambda2) {
                Ok(bound) => out.push_str(&format!("{sigma:.6},{mu:.6},{bound:.6}\n")),
                Err(e) => out.push_str(&format!("{sigma:.6},{mu:.6},error: {e}\n")),
            }
        }
    }
    write_out(a.out.as_deref(), &out)
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let text = fs::read_to_string(&a.spec)
        .map_err(|e| Error::input(format!("{}: {e}", a.spec.display())))?;
    let mut spec: GeneratorSpec =
        serde_json::from_str(&text).map_err(|e| Error::config(format!("bad spec: {e}")))?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let db = generate(&spec)?;
    write_out(a.out.as_deref(), &tio::write_symbolic_csv(&db))
}

fn cmd_mi_graph(a: MiGraphArgs) -> Result<()> {
    let file = fs::File::open(&a.input)
        .map_err(|e| Error::input(format!("{}: {e}", a.input.display())))?;
    let db = tio::read_symbolic_csv(file)?;
    let corr = match (a.mu, a.sigma, a.delta) {
        (Some(mu), _, _) => CorrelationConfig {
            sigma: a.sigma.unwrap_or(0.5),
            delta: a.delta.unwrap_or(0.5),
            mu_override: Some(mu),
        },
        (None, Some(sigma), Some(delta)) => CorrelationConfig {
            sigma,
            delta,
            mu_override: None,
        },
        _ => {
            return Err(Error::config(
                "mi-graph needs --mu, or both --sigma and --delta to derive it",
            ))
        }
    };
    let graph = build_correlation_graph(&db, &corr)?;
    for v in &graph.skipped {
        eprintln!("warning: series {v} is degenerate and was excluded from the graph");
    }
    let text = match a.format.as_str() {
        "json" => format!("{}\n", graph.to_json()),
        "dot" => graph.to_dot(),
        other => return Err(Error::config(format!("unknown format `{other}`"))),
    };
    write_out(a.out.as_deref(), &text)
}
