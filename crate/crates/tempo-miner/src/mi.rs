//! Entropy and mutual-information estimation over the symbolic database,
//! plus the confidence lower bound and the NMI threshold derived from the
//! support and confidence thresholds.
//!
//! All entropies are in nats. Zero-probability cells contribute nothing to
//! the sums; conditional terms with a zero-probability condition are
//! skipped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::SymbolicDatabase;

/// Empirical joint distribution of two symbolic series over aligned
/// samples.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    pub x_var: String,
    pub y_var: String,
    pub p_x: BTreeMap<String, f64>,
    pub p_y: BTreeMap<String, f64>,
    pub p_xy: BTreeMap<(String, String), f64>,
}

/// Entropy, conditional entropy, and the two NMI directions of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiReport {
    pub entropy_x: f64,
    pub cond_entropy_x_given_y: f64,
    pub mi: f64,
    pub nmi_x_given_y: f64,
    pub nmi_y_given_x: f64,
}

/// NMI threshold configuration: thresholds echoed from the mining config,
/// and an optional override replacing the derived value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationConfig {
    pub sigma: f64,
    pub delta: f64,
    pub mu_override: Option<f64>,
}

impl CorrelationConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(mu) = self.mu_override {
            if !(mu > 0.0 && mu <= 1.0) {
                return Err(Error::config(format!("mu override {mu} not in (0,1]")));
            }
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) || !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::config("sigma and delta must lie in (0,1]"));
        }
        Ok(())
    }
}

/// Shannon entropy of a distribution, in nats, with `0 ln 0 = 0`.
pub fn entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Counts relative frequencies of symbol pairs over the aligned grid.
pub fn estimate_joint(db: &SymbolicDatabase, x_var: &str, y_var: &str) -> Result<JointDistribution> {
    let x = db
        .variable(x_var)
        .ok_or_else(|| Error::input(format!("unknown variable {x_var}")))?;
    let y = db
        .variable(y_var)
        .ok_or_else(|| Error::input(format!("unknown variable {y_var}")))?;
    let n = db.grid_len();
    if n == 0 {
        return Err(Error::domain("empty grid"));
    }
    let mut c_x: BTreeMap<String, u64> = BTreeMap::new();
    let mut c_y: BTreeMap<String, u64> = BTreeMap::new();
    let mut c_xy: BTreeMap<(String, String), u64> = BTreeMap::new();
    for i in 0..n {
        let xs = &x.symbols[i].1;
        let ys = &y.symbols[i].1;
        *c_x.entry(xs.clone()).or_insert(0) += 1;
        *c_y.entry(ys.clone()).or_insert(0) += 1;
        *c_xy.entry((xs.clone(), ys.clone())).or_insert(0) += 1;
    }
    let norm = |c: u64| c as f64 / n as f64;
    Ok(JointDistribution {
        x_var: x_var.to_string(),
        y_var: y_var.to_string(),
        p_x: c_x.into_iter().map(|(k, c)| (k, norm(c))).collect(),
        p_y: c_y.into_iter().map(|(k, c)| (k, norm(c))).collect(),
        p_xy: c_xy.into_iter().map(|(k, c)| (k, norm(c))).collect(),
    })
}

impl JointDistribution {
    pub fn entropy_x(&self) -> f64 {
        entropy(self.p_x.values().copied())
    }

    pub fn entropy_y(&self) -> f64 {
        entropy(self.p_y.values().copied())
    }

    /// `H(X|Y) = -sum p(x,y) ln(p(x,y)/p(y))`.
    pub fn cond_entropy_x_given_y(&self) -> f64 {
        self.p_xy
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|((_, ys), &p)| {
                let py = self.p_y[ys];
                -p * (p / py).ln()
            })
            .sum()
    }

    /// `I(X;Y) = sum p(x,y) ln(p(x,y)/(p(x) p(y)))`.
    pub fn mutual_information(&self) -> f64 {
        self.p_xy
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|((xs, ys), &p)| p * (p / (self.p_x[xs] * self.p_y[ys])).ln())
            .sum()
    }

    /// Both NMI directions `(I/H(X), I/H(Y))`. Errors when the respective
    /// normalizing entropy is zero.
    pub fn nmi(&self) -> Result<(f64, f64)> {
        let hx = self.entropy_x();
        let hy = self.entropy_y();
        if hx <= 0.0 {
            return Err(Error::DegenerateSeries(self.x_var.clone()));
        }
        if hy <= 0.0 {
            return Err(Error::DegenerateSeries(self.y_var.clone()));
        }
        let mi = self.mutual_information();
        Ok((mi / hx, mi / hy))
    }

    pub fn report(&self) -> Result<MiReport> {
        let (nxy, nyx) = self.nmi()?;
        Ok(MiReport {
            entropy_x: self.entropy_x(),
            cond_entropy_x_given_y: self.cond_entropy_x_given_y(),
            mi: self.mutual_information(),
            nmi_x_given_y: nxy,
            nmi_y_given_x: nyx,
        })
    }
}

/// The NMI level guaranteeing pair confidence `delta` for one designated
/// event pair:
/// `1 - sigma * log_l1((delta/sigma) * ((1-sigma)/(n_x-1))^(l2/sigma))`.
///
/// Returns the raw value, which can fall outside (0, 1]; values above 1
/// mean no attainable NMI certifies the pair. Callers clamp when using the
/// result as a screening threshold, keeping the exact round trip with
/// [`conf_lower_bound`] intact.
pub fn mu_for_pair(sigma: f64, delta: f64, n_x: usize, lambda1: f64, lambda2: f64) -> Result<f64> {
    check_bound_params(sigma, n_x, lambda1, lambda2)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("delta {delta} not in (0,1]")));
    }
    if lambda1 >= 1.0 {
        return Err(Error::Derivation(format!(
            "lambda1 {lambda1} leaves the log base degenerate"
        )));
    }
    let inner = (delta / sigma) * ((1.0 - sigma) / (n_x as f64 - 1.0)).powf(lambda2 / sigma);
    if !(inner > 0.0 && inner.is_finite()) {
        return Err(Error::Derivation(format!(
            "degenerate bound argument {inner}"
        )));
    }
    Ok(1.0 - sigma * (inner.ln() / lambda1.ln()))
}

/// Confidence lower bound of a frequent event pair whose series reach NMI
/// `mu`: `sigma * l1^((1-mu)/sigma) * ((n_x-1)/(1-sigma))^(l2/sigma)`.
pub fn conf_lower_bound(
    sigma: f64,
    mu: f64,
    n_x: usize,
    lambda1: f64,
    lambda2: f64,
) -> Result<f64> {
    check_bound_params(sigma, n_x, lambda1, lambda2)?;
    let correction = if lambda2 == 0.0 {
        1.0
    } else {
        if sigma >= 1.0 {
            return Err(Error::domain(
                "sigma = 1 with a positive lambda2 degenerates the bound",
            ));
        }
        ((n_x as f64 - 1.0) / (1.0 - sigma)).powf(lambda2 / sigma)
    };
    Ok(sigma * lambda1.powf((1.0 - mu) / sigma) * correction)
}

fn check_bound_params(sigma: f64, n_x: usize, lambda1: f64, lambda2: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::domain(format!("sigma {sigma} not in (0,1]")));
    }
    if n_x < 2 {
        return Err(Error::domain("alphabet must hold at least two symbols"));
    }
    if !(lambda1 > 0.0 && lambda1 <= 1.0) {
        return Err(Error::domain(format!("lambda1 {lambda1} not in (0,1]")));
    }
    if !(0.0..1.0).contains(&lambda2) {
        return Err(Error::domain(format!("lambda2 {lambda2} not in [0,1)")));
    }
    Ok(())
}

/// Derives the screening threshold for a series pair: every event pair is
/// designated in turn, the threshold is computed for each designation, and
/// the minimum is returned (clamped into (0, 1]).
///
/// For a designated pair (x1, y1): `n_x` is the observed alphabet size of
/// the first series, `lambda1` its smallest marginal, and `lambda2` the
/// joint probability of the cell minimizing `p(x|y)` over the complement
/// (x != x1, y != y1, p(y) > 0), ties broken by the smaller joint; an empty
/// complement yields `lambda2 = 0`.
pub fn mu_for_series_pair(
    db: &SymbolicDatabase,
    x_var: &str,
    y_var: &str,
    cfg: &CorrelationConfig,
) -> Result<f64> {
    let joint = estimate_joint(db, x_var, y_var)?;
    let mut best: Option<f64> = None;
    for mu in designation_mus(&joint, cfg.sigma, cfg.delta)? {
        best = Some(best.map_or(mu, |b: f64| b.min(mu)));
    }
    let raw = best.ok_or_else(|| Error::Derivation("no event pair to designate".into()))?;
    Ok(raw.clamp(f64::MIN_POSITIVE, 1.0))
}

/// Raw per-designation thresholds for (x, y) with x as the bounded side.
pub(crate) fn designation_mus(
    joint: &JointDistribution,
    sigma: f64,
    delta: f64,
) -> Result<Vec<f64>> {
    let n_x = joint.p_x.len();
    let lambda1 = joint
        .p_x
        .values()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if n_x < 2 || lambda1 >= 1.0 {
        return Err(Error::DegenerateSeries(joint.x_var.clone()));
    }
    let mut out = Vec::new();
    for x1 in joint.p_x.keys() {
        for y1 in joint.p_y.keys() {
            let lambda2 = lambda2_for(joint, x1, y1);
            out.push(mu_for_pair(sigma, delta, n_x, lambda1, lambda2)?);
        }
    }
    Ok(out)
}

pub(crate) fn lambda2_for(joint: &JointDistribution, x1: &str, y1: &str) -> f64 {
    let mut best: Option<(f64, f64)> = None; // (conditional, joint)
    for x in joint.p_x.keys() {
        if x == x1 {
            continue;
        }
        for (y, &py) in joint.p_y.iter() {
            if y == y1 || py <= 0.0 {
                continue;
            }
            let pxy = joint
                .p_xy
                .get(&(x.clone(), y.clone()))
                .copied()
                .unwrap_or(0.0);
            let cand = (pxy / py, pxy);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best.map_or(0.0, |(_, pxy)| pxy)
}
