//! Frequent temporal pattern mining over multivariate time series.
//!
//! The pipeline: raw series are symbolized per sample, identical
//! consecutive symbols merge into event intervals, the grid is split into
//! (optionally overlapping) windows forming a sequence database, and a
//! level-wise miner extracts every pattern of pairwise interval relations
//! (follows / contains / overlaps) whose support and all-confidence reach
//! the configured thresholds. A mutual-information screened variant prunes
//! uncorrelated series pairs before mining, trading a little recall for a
//! much smaller search space. A brute-force oracle provides ground truth
//! for equivalence testing at toy scale.
//!
//! ```
//! use tempo_miner::model::{MiningConfig, PruneLevel};
//! use tempo_miner::transform::{split_sequences, SplitConfig};
//!
//! let symbolic = tempo_miner::fixtures::appliance_demo();
//! let db = split_sequences(&symbolic, &SplitConfig::new(9, 0).unwrap(), 0).unwrap();
//! let cfg = MiningConfig {
//!     sigma: 0.7,
//!     delta: 0.7,
//!     epsilon: 0,
//!     min_overlap: 1,
//!     t_max: 9,
//!     k_max: 3,
//!     prune_level: PruneLevel::All,
//! };
//! let out = tempo_miner::mine::mine(&db, &cfg).unwrap();
//! assert_eq!(out.graph.levels[0].len(), 11);
//! ```

pub mod approx;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod mi;
pub mod mine;
pub mod model;
pub mod oracle;
pub mod relations;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
