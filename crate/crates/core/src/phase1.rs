//! Front-haul slot: the BS broadcasts one common stream to every node.
//!
//! The BS has no CSI and uses an identity-block precoder, and all nodes
//! decode the same data, so there is no inter-node interference term.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::config::Phase1Policy;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_gram, log_det_capacity};

/// Mutual information between the BS and one node, b/s/Hz.
///
/// `log2 det(e_s G / (n_s sigma2) H H^H + I)`.
pub fn node_rate(link: &ChannelRealization, e_s: f64, n_s: usize, sigma2: f64) -> Result<f64> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Config {
            key: "noise".to_owned(),
            reason: format!("noise power must be > 0, got {sigma2}"),
        });
    }
    let scale = e_s * link.gain / (n_s as f64 * sigma2);
    Ok(log_det_capacity(&hermitian_gram(&link.h), scale)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase1Result {
    pub policy: Phase1Policy,
    pub node_rates: Vec<f64>,
    /// Policy statistic of `node_rates`, b/s/Hz.
    pub rate: f64,
    /// `rate * B1`, b/s.
    pub c1: f64,
    /// Nodes that hold the data and join phase 2, ascending.
    pub participating: Vec<usize>,
}

/// Lower median: element `ceil(n/2) - 1` of the ascending sort.
pub fn lower_median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(sorted[values.len().div_ceil(2) - 1])
}

/// Applies the front-haul policy to per-node rates.
pub fn phase1_capacity(rates: &[f64], policy: Phase1Policy, b1: f64) -> Result<Phase1Result> {
    if rates.is_empty() {
        return Err(Error::NoNodes);
    }
    let (rate, participating) = match policy {
        Phase1Policy::Min => {
            let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
            (min, (0..rates.len()).collect())
        }
        Phase1Policy::Median => {
            let median = lower_median(rates).expect("rates is non-empty");
            let members = (0..rates.len()).filter(|&i| rates[i] >= median).collect();
            (median, members)
        }
        Phase1Policy::Max => {
            let mut best = 0;
            for (i, &r) in rates.iter().enumerate() {
                if r > rates[best] {
                    best = i;
                }
            }
            (rates[best], vec![best])
        }
    };
    Ok(Phase1Result {
        policy,
        node_rates: rates.to_vec(),
        rate,
        c1: rate * b1,
        participating,
    })
}
