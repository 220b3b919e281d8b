//! The screened approximate miner: an NMI-thresholded correlation graph
//! over the symbolic series decides which cross-series event pairs are
//! worth mining. Same-series pairs always qualify (a series shares full
//! information with itself), so screening only ever drops cross-series
//! candidates and the output is a subset of the exact miner's.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mi::{estimate_joint, mu_for_series_pair, CorrelationConfig};
use crate::mine::{mine_impl, MiningOutcome, PairScreen};
use crate::model::{MiningConfig, SequenceDatabase};
use crate::transform::SymbolicDatabase;

/// One undirected edge of the correlation graph with both NMI directions
/// and the threshold it cleared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEdge {
    pub a: String,
    pub b: String,
    pub nmi_ab: f64,
    pub nmi_ba: f64,
    pub mu: f64,
}

/// Undirected graph over symbolic series; an edge means one NMI direction
/// reached the threshold. Vertices list every series with positive entropy
/// (each is trivially correlated with itself); degenerate series are
/// excluded.
#[derive(Debug, Clone, Default)]
pub struct CorrelationGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<CorrelationEdge>,
    /// Degenerate series skipped during construction.
    pub skipped: Vec<String>,
}

impl CorrelationGraph {
    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges
            .iter()
            .any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// JSON export: `{"vertices":[...],"edges":[{"a":..,"b":..,"nmi_ab":..,
    /// "nmi_ba":..,"mu":..}]}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            vertices: &'a [String],
            edges: &'a [CorrelationEdge],
        }
        serde_json::to_string(&Doc {
            vertices: &self.vertices,
            edges: &self.edges,
        })
        .expect("graph serializes")
    }

    /// DOT export for external rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph correlation {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{:.3}/{:.3}\"];",
                e.a, e.b, e.nmi_ab, e.nmi_ba
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the correlation graph: for each unordered series pair both NMI
/// directions are computed and compared against the pair's threshold (the
/// override when given, otherwise the minimum derived value across both
/// designation directions). Degenerate series are skipped with a note.
pub fn build_correlation_graph(
    db: &SymbolicDatabase,
    cfg: &CorrelationConfig,
) -> Result<CorrelationGraph> {
    cfg.validate()?;
    if db.series.len() < 2 {
        return Err(Error::input("correlation graph needs at least two series"));
    }
    let mut graph = CorrelationGraph::default();
    let mut live: Vec<&str> = Vec::new();
    for s in &db.series {
        if s.alphabet().len() < 2 {
            graph.skipped.push(s.variable.clone());
        } else {
            live.push(&s.variable);
        }
    }
    graph.vertices = live.iter().map(|v| v.to_string()).collect();

    for (ai, a) in live.iter().enumerate() {
        for b in live.iter().skip(ai + 1) {
            let joint = estimate_joint(db, a, b)?;
            let (nmi_ab, nmi_ba) = joint.nmi()?;
            let mu = match cfg.mu_override {
                Some(mu) => mu,
                None => mu_for_series_pair(db, a, b, cfg)?
                    .min(mu_for_series_pair(db, b, a, cfg)?),
            };
            if nmi_ab >= mu || nmi_ba >= mu {
                graph.edges.push(CorrelationEdge {
                    a: a.to_string(),
                    b: b.to_string(),
                    nmi_ab,
                    nmi_ba,
                    mu,
                });
            }
        }
    }
    Ok(graph)
}

/// Outcome of a screened run: the patterns plus the graph that did the
/// screening.
#[derive(Debug, Clone)]
pub struct ScreenedOutcome {
    pub outcome: MiningOutcome,
    pub graph: CorrelationGraph,
}

/// Runs the screened miner: single events are restricted to graph
/// vertices, cross-series event pairs need an edge, and deeper levels run
/// exactly as in the exact miner. An empty graph yields an empty result.
pub fn mine_screened(
    symbolic: &SymbolicDatabase,
    db: &SequenceDatabase,
    cfg: &MiningConfig,
    corr: &CorrelationConfig,
) -> Result<ScreenedOutcome> {
    mine_screened_with_threads(symbolic, db, cfg, corr, 1)
}

pub fn mine_screened_with_threads(
    symbolic: &SymbolicDatabase,
    db: &SequenceDatabase,
    cfg: &MiningConfig,
    corr: &CorrelationConfig,
    threads: usize,
) -> Result<ScreenedOutcome> {
    let cfg = cfg.clone().validated()?;
    let graph = build_correlation_graph(symbolic, corr)?;
    let screen = PairScreen {
        vertices: graph.vertices.iter().cloned().collect::<BTreeSet<_>>(),
        edges: graph
            .edges
            .iter()
            .map(|e| {
                if e.a <= e.b {
                    (e.a.clone(), e.b.clone())
                } else {
                    (e.b.clone(), e.a.clone())
                }
            })
            .collect(),
    };
    let outcome = mine_impl(db, &cfg, Some(&screen), threads)?;
    Ok(ScreenedOutcome { outcome, graph })
}
