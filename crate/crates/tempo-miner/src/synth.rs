//! Seeded synthetic data generation: plateau-shaped symbolic series with
//! geometric run lengths, optionally grouped so that followers copy their
//! group leader's symbol with a configurable probability.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{SymbolicDatabase, SymbolicSeries};

/// Variables whose series imitate the group leader. The first member is
/// the leader; the others copy its symbol with `copy_probability` per
/// sample and resample uniformly otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationGroup {
    pub members: Vec<usize>,
    pub copy_probability: f64,
}

/// Everything the generator needs; serializes to the CLI's JSON dialect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub n_vars: usize,
    pub grid_len: usize,
    /// One alphabet per variable, or a single alphabet applied to all.
    pub alphabet: Vec<Vec<String>>,
    #[serde(default)]
    pub correlation_groups: Vec<CorrelationGroup>,
    /// Geometric run-length parameter per variable (or one for all); the
    /// default 0.3 yields plateaus a few samples long.
    #[serde(default = "default_run_length")]
    pub run_length_distribution: Vec<f64>,
}

fn default_run_length() -> Vec<f64> {
    vec![0.3]
}

impl GeneratorSpec {
    fn validate(&self) -> Result<()> {
        if self.n_vars == 0 {
            return Err(Error::config("generator needs at least one variable"));
        }
        if self.grid_len < 4 {
            return Err(Error::config("grid must cover at least 4 samples"));
        }
        if self.alphabet.is_empty()
            || (self.alphabet.len() != 1 && self.alphabet.len() != self.n_vars)
        {
            return Err(Error::config(
                "alphabet must list one entry or one per variable",
            ));
        }
        if self.alphabet.iter().any(|a| a.is_empty()) {
            return Err(Error::config("empty alphabet"));
        }
        if self.run_length_distribution.is_empty()
            || (self.run_length_distribution.len() != 1
                && self.run_length_distribution.len() != self.n_vars)
        {
            return Err(Error::config(
                "run_length_distribution must list one entry or one per variable",
            ));
        }
        if self
            .run_length_distribution
            .iter()
            .any(|&p| !(p > 0.0 && p <= 1.0))
        {
            return Err(Error::config("run-length parameters must lie in (0,1]"));
        }
        let mut seen = vec![false; self.n_vars];
        for g in &self.correlation_groups {
            if !(0.0..=1.0).contains(&g.copy_probability) {
                return Err(Error::config("copy probability must lie in [0,1]"));
            }
            if g.members.len() < 2 {
                return Err(Error::config("a correlation group needs two members"));
            }
            for &m in &g.members {
                if m >= self.n_vars {
                    return Err(Error::config(format!("group member {m} out of range")));
                }
                if seen[m] {
                    return Err(Error::config(format!(
                        "variable {m} belongs to more than one group"
                    )));
                }
                seen[m] = true;
            }
            let lead = self.alphabet_of(g.members[0]);
            if g.members.iter().any(|&m| self.alphabet_of(m) != lead) {
                return Err(Error::config(
                    "group members must share the leader's alphabet",
                ));
            }
        }
        Ok(())
    }

    fn alphabet_of(&self, var: usize) -> &[String] {
        if self.alphabet.len() == 1 {
            &self.alphabet[0]
        } else {
            &self.alphabet[var]
        }
    }

    fn run_param_of(&self, var: usize) -> f64 {
        if self.run_length_distribution.len() == 1 {
            self.run_length_distribution[0]
        } else {
            self.run_length_distribution[var]
        }
    }
}

/// Deterministically generates the symbolic database described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<SymbolicDatabase> {
    spec.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);

    let mut follower_of: Vec<Option<(usize, f64)>> = vec![None; spec.n_vars];
    for g in &spec.correlation_groups {
        for &m in &g.members[1..] {
            follower_of[m] = Some((g.members[0], g.copy_probability));
        }
    }

    // leaders and independent variables first, then followers, so every
    // leader series exists when its followers sample from it
    let mut columns: Vec<Option<Vec<String>>> = vec![None; spec.n_vars];
    for var in 0..spec.n_vars {
        if follower_of[var].is_none() {
            columns[var] = Some(run_length_series(
                spec.alphabet_of(var),
                spec.run_param_of(var),
                spec.grid_len,
                &mut rng,
            ));
        }
    }
    for var in 0..spec.n_vars {
        if let Some((leader, copy_p)) = follower_of[var] {
            let leader_col = columns[leader].clone().expect("leader generated first");
            let alphabet = spec.alphabet_of(var);
            let col = (0..spec.grid_len)
                .map(|i| {
                    if rng.random::<f64>() < copy_p {
                        leader_col[i].clone()
                    } else {
                        alphabet[rng.random_range(0..alphabet.len())].clone()
                    }
                })
                .collect();
            columns[var] = Some(col);
        }
    }

    let series = columns
        .into_iter()
        .enumerate()
        .map(|(var, col)| SymbolicSeries::from_symbols(format!("X{var}"), col.unwrap()))
        .collect();
    SymbolicDatabase::new(series, 1)
}

fn run_length_series(
    alphabet: &[String],
    rho: f64,
    len: usize,
    rng: &mut ChaCha12Rng,
) -> Vec<String> {
    let mut out = Vec::with_capacity(len);
    let mut prev: Option<usize> = None;
    while out.len() < len {
        let run = 1 + geometric(rho, rng);
        let sym = pick_different(alphabet.len(), prev, rng);
        prev = Some(sym);
        for _ in 0..run.min(len - out.len()) {
            out.push(alphabet[sym].clone());
        }
    }
    out
}

/// Number of failures before the first success of a Bernoulli(rho).
fn geometric(rho: f64, rng: &mut ChaCha12Rng) -> usize {
    if rho >= 1.0 {
        return 0;
    }
    let u: f64 = rng.random();
    let raw = (1.0 - u).ln() / (1.0 - rho).ln();
    raw.floor().min(1e6) as usize
}

fn pick_different(n: usize, prev: Option<usize>, rng: &mut ChaCha12Rng) -> usize {
    if n == 1 {
        return 0;
    }
    match prev {
        None => rng.random_range(0..n),
        Some(p) => {
            let r = rng.random_range(0..n - 1);
            if r >= p {
                r + 1
            } else {
                r
            }
        }
    }
}
