//! Parameter sweeps and their per-point aggregates.
//!
//! Every sweep point reuses the same trial seeds, so points differ only in
//! the swept parameter (common random numbers). Trials run on the rayon pool
//! and are aggregated in trial-index order, so the output does not depend on
//! scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Phase1Policy, ScenarioConfig};
use crate::error::{Error, Result};
use crate::experiment::{run_trial, PolicyOutcome, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// Node disc radius, m.
    #[serde(rename = "R")]
    Radius,
    /// Node count.
    #[serde(rename = "U")]
    Nodes,
    /// BS-UE distance, m.
    #[serde(rename = "d_bs_ue")]
    Distance,
    /// Node transmit power, dBm.
    #[serde(rename = "p_node")]
    NodePower,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Radius => "R",
            SweepAxis::Nodes => "U",
            SweepAxis::Distance => "d_bs_ue",
            SweepAxis::NodePower => "p_node",
        }
    }

    /// Copy of `cfg` with the axis set to `value`, validated.
    pub fn apply(self, cfg: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut out = cfg.clone();
        match self {
            SweepAxis::Radius => out.radius = value,
            SweepAxis::Nodes => {
                if value.is_nan() || value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(Error::Sweep(format!("U must be a non-negative integer, got {value}")));
                }
                out.nodes = value as usize;
            }
            SweepAxis::Distance => out.d_bs_ue = value,
            SweepAxis::NodePower => out.p_node = value,
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "radius" => Ok(SweepAxis::Radius),
            "U" | "nodes" => Ok(SweepAxis::Nodes),
            "d_bs_ue" | "d" | "distance" => Ok(SweepAxis::Distance),
            "p_node" | "node_power" => Ok(SweepAxis::NodePower),
            other => Err(Error::UnknownAxis(other.to_owned())),
        }
    }
}

/// Per-trial scalar metrics, in CSV column order.
pub const METRICS: &[&str] = &[
    "c1_min",
    "c1_median",
    "c1_max",
    "c2_closed",
    "c2_logdet",
    "c2",
    "c_baseline",
    "relative_gain",
    "c2_min",
    "c2_median",
    "c2_max",
    "t2_min",
    "t2_median",
    "t2_max",
    "gain_ratio_min",
    "gain_ratio_median",
    "gain_ratio_max",
    "dmimo_bits_min",
    "dmimo_bits_median",
    "dmimo_bits_max",
    "baseline_bits_min",
    "baseline_bits_median",
    "baseline_bits_max",
    "dmimo_throughput_min",
    "dmimo_throughput_median",
    "dmimo_throughput_max",
    "t2",
    "gain_ratio",
    "clamped_links",
    "phase2_resamples",
];

/// A statistic of several metric means, with a delta-method standard error.
pub struct DerivedMetric {
    pub name: &'static str,
    /// Metric names whose per-trial values feed the statistic.
    pub inputs: &'static [&'static str],
    value: fn(&[f64]) -> f64,
    gradient: fn(&[f64]) -> Vec<f64>,
}

fn ratio(m: &[f64]) -> f64 {
    m[0] / m[1]
}

fn ratio_gradient(m: &[f64]) -> Vec<f64> {
    vec![1.0 / m[1], -m[0] / (m[1] * m[1])]
}

/// `C1 T1 / (C_B (T1 + T2))` with `T2 = C1 T1 / C2`, i.e. `C1 C2 / (C_B (C1 + C2))`.
fn combined_gain(m: &[f64]) -> f64 {
    let (c1, c2, cb) = (m[0], m[1], m[2]);
    c1 * c2 / (cb * (c1 + c2))
}

fn combined_gain_gradient(m: &[f64]) -> Vec<f64> {
    let (c1, c2, cb) = (m[0], m[1], m[2]);
    let s2 = (c1 + c2) * (c1 + c2);
    vec![c2 * c2 / (cb * s2), c1 * c1 / (cb * s2), -combined_gain(m) / cb]
}

macro_rules! derived {
    ($name:expr, [$($input:expr),+], $f:ident, $g:ident) => {
        DerivedMetric { name: $name, inputs: &[$($input),+], value: $f, gradient: $g }
    };
}

/// Sweep-level statistics computed from metric means rather than per trial.
///
/// `t2_avg_*` and `combined_gain_*` take the slot time from the mean
/// front-haul and access capacities of the point, which is how the two-slot
/// comparison is read off averaged capacity curves.
pub const DERIVED: &[DerivedMetric] = &[
    derived!("phase2_gain", ["c2", "c_baseline"], ratio, ratio_gradient),
    derived!("t2_avg_min", ["dmimo_bits_min", "c2_min"], ratio, ratio_gradient),
    derived!(
        "t2_avg_median",
        ["dmimo_bits_median", "c2_median"],
        ratio,
        ratio_gradient
    ),
    derived!("t2_avg_max", ["dmimo_bits_max", "c2_max"], ratio, ratio_gradient),
    derived!(
        "combined_gain_min",
        ["c1_min", "c2_min", "c_baseline"],
        combined_gain,
        combined_gain_gradient
    ),
    derived!(
        "combined_gain_median",
        ["c1_median", "c2_median", "c_baseline"],
        combined_gain,
        combined_gain_gradient
    ),
    derived!(
        "combined_gain_max",
        ["c1_max", "c2_max", "c_baseline"],
        combined_gain,
        combined_gain_gradient
    ),
];

pub fn metric_index(name: &str) -> Option<usize> {
    METRICS.iter().position(|m| *m == name)
}

/// Flattens a trial into [`METRICS`] order. Capacities are in b/s, times in
/// s, bits in bits; policy metrics are `None` for the baseline.
pub fn trial_metrics(record: &TrialRecord) -> Vec<Option<f64>> {
    let p2 = &record.phase2;
    let per_policy =
        |f: &dyn Fn(&PolicyOutcome) -> f64| -> [Option<f64>; 3] { Phase1Policy::ALL.map(|p| record.policy(p).map(f)) };
    let c1 = per_policy(&|o| o.phase1.c1);
    let c2p = per_policy(&|o| o.phase2.c2);
    let t2 = per_policy(&|o| o.timing.t2);
    let gain = per_policy(&|o| o.timing.gain_ratio);
    let bits = per_policy(&|o| o.timing.dmimo_bits);
    let base_bits = per_policy(&|o| o.timing.baseline_bits_corrected);
    let throughput = per_policy(&|o| o.timing.dmimo_throughput());
    let configured = record.timing();

    let mut out = Vec::with_capacity(METRICS.len());
    out.extend(c1);
    out.push(Some(p2.c2_closed));
    out.push(Some(p2.c2_logdet));
    out.push(Some(p2.c2));
    out.push(Some(p2.c_baseline));
    out.push(Some(p2.c2 / p2.c_baseline));
    out.extend(c2p);
    out.extend(t2);
    out.extend(gain);
    out.extend(bits);
    out.extend(base_bits);
    out.extend(throughput);
    out.push(configured.map(|t| t.t2));
    out.push(configured.map(|t| t.gain_ratio));
    out.push(Some(record.diagnostics.clamped_links as f64));
    out.push(Some(f64::from(record.diagnostics.phase2_resamples)));
    debug_assert_eq!(out.len(), METRICS.len());
    out
}

/// Mean, standard error and percentiles of one metric at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(count)`; 0 for a single trial.
    pub se: f64,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
}

/// Linear-interpolation percentile of ascending `sorted`, `q` in `[0, 1]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let se = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(Self {
            count: n,
            mean,
            se,
            p05: percentile(&sorted, 0.05),
            p50: percentile(&sorted, 0.50),
            p95: percentile(&sorted, 0.95),
        })
    }
}

/// Point estimate and standard error of a [`DerivedMetric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl DerivedMetric {
    /// Evaluates the statistic on per-trial input rows. The standard error is
    /// `sqrt(g^T S g / n)` with `g` the gradient at the means and `S` the
    /// sample covariance; `None` without rows or when the value is not finite.
    pub fn estimate(&self, rows: &[Vec<f64>]) -> Option<Estimate> {
        if rows.is_empty() {
            return None;
        }
        let k = self.inputs.len();
        let n = rows.len() as f64;
        let means: Vec<f64> = (0..k).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let value = (self.value)(&means);
        if !value.is_finite() {
            return None;
        }
        let se = if rows.len() > 1 {
            let g = (self.gradient)(&means);
            let mut var = 0.0;
            for a in 0..k {
                for b in 0..k {
                    let cov = rows.iter().map(|r| (r[a] - means[a]) * (r[b] - means[b])).sum::<f64>() / (n - 1.0);
                    var += g[a] * g[b] * cov;
                }
            }
            (var.max(0.0) / n).sqrt()
        } else {
            0.0
        };
        Some(Estimate { value, se })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub trials: usize,
    /// One entry per [`METRICS`] name; `None` where no trial defines it.
    pub metrics: Vec<Option<Summary>>,
    /// One entry per [`DERIVED`] statistic.
    pub derived: Vec<Option<Estimate>>,
}

impl SweepPoint {
    pub fn from_trials(value: f64, per_trial: &[Vec<Option<f64>>]) -> Self {
        let column = |i: usize| -> Vec<f64> { per_trial.iter().filter_map(|m| m[i]).collect() };
        let metrics = (0..METRICS.len()).map(|i| Summary::from_values(&column(i))).collect();
        let derived = DERIVED
            .iter()
            .map(|d| {
                let idx: Vec<usize> = d.inputs.iter().map(|m| metric_index(m).unwrap()).collect();
                let rows: Vec<Vec<f64>> = per_trial
                    .iter()
                    .filter_map(|m| idx.iter().map(|&i| m[i]).collect::<Option<Vec<f64>>>())
                    .collect();
                d.estimate(&rows)
            })
            .collect();
        Self {
            value,
            trials: per_trial.len(),
            metrics,
            derived,
        }
    }

    pub fn metric(&self, name: &str) -> Option<&Summary> {
        self.metrics[metric_index(name)?].as_ref()
    }

    pub fn derived(&self, name: &str) -> Option<&Estimate> {
        let i = DERIVED.iter().position(|d| d.name == name)?;
        self.derived[i].as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub master_seed: u64,
    pub trials_per_point: usize,
    pub points: Vec<SweepPoint>,
}

/// Metrics of trials `0..trials`, in trial order.
pub fn run_point(cfg: &ScenarioConfig, trials: usize, master_seed: u64) -> Result<Vec<Vec<Option<f64>>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, master_seed, i).map(|r| trial_metrics(&r)))
        .collect()
}

pub fn run_sweep(
    cfg: &ScenarioConfig,
    axis: SweepAxis,
    values: &[f64],
    trials_per_point: usize,
    master_seed: u64,
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::Sweep("no sweep values".to_owned()));
    }
    if trials_per_point == 0 {
        return Err(Error::Sweep("trials per point must be >= 1".to_owned()));
    }
    let points = values
        .iter()
        .map(|&v| {
            let point_cfg = axis.apply(cfg, v)?;
            let per_trial = run_point(&point_cfg, trials_per_point, master_seed)?;
            Ok(SweepPoint::from_trials(v, &per_trial))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis,
        master_seed,
        trials_per_point,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axis_parsing() {
        assert_eq!("R".parse::<SweepAxis>().unwrap(), SweepAxis::Radius);
        assert_eq!("U".parse::<SweepAxis>().unwrap(), SweepAxis::Nodes);
        assert_eq!("d_bs_ue".parse::<SweepAxis>().unwrap(), SweepAxis::Distance);
        assert_eq!("p_node".parse::<SweepAxis>().unwrap(), SweepAxis::NodePower);
        assert!(matches!("height".parse::<SweepAxis>(), Err(Error::UnknownAxis(_))));
    }

    #[test]
    fn axis_apply_validates() {
        let cfg = ScenarioConfig::default();
        assert_eq!(SweepAxis::Nodes.apply(&cfg, 5.0).unwrap().nodes, 5);
        assert!(SweepAxis::Nodes.apply(&cfg, 2.5).is_err());
        assert!(SweepAxis::Distance.apply(&cfg, -1.0).is_err());
        assert_eq!(SweepAxis::NodePower.apply(&cfg, -10.0).unwrap().p_node, -10.0);
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::from_values(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert_relative_eq!(s.se, (2.5f64 / 5.0).sqrt(), epsilon = 1e-15);
        assert_eq!(s.p50, 3.0);
        assert_relative_eq!(s.p05, 1.2, epsilon = 1e-15);
        assert_relative_eq!(s.p95, 4.8, epsilon = 1e-15);
        let one = Summary::from_values(&[7.0]).unwrap();
        assert_eq!((one.mean, one.se, one.p05, one.p95), (7.0, 0.0, 7.0, 7.0));
        assert!(Summary::from_values(&[]).is_none());
    }

    fn derived_metric(name: &str) -> &'static DerivedMetric {
        DERIVED.iter().find(|d| d.name == name).unwrap()
    }

    #[test]
    fn ratio_of_means() {
        let d = derived_metric("phase2_gain");
        let r = d.estimate(&[vec![2.0, 1.0], vec![4.0, 3.0]]).unwrap();
        assert_eq!(r.value, 1.5);
        // proportional pairs carry no ratio uncertainty
        let p = d.estimate(&[vec![2.0, 1.0], vec![6.0, 3.0], vec![10.0, 5.0]]).unwrap();
        assert_eq!(p.value, 2.0);
        assert!(p.se < 1e-12);
        assert!(d.estimate(&[vec![1.0, 0.0]]).is_none());
        assert!(d.estimate(&[]).is_none());
    }

    #[test]
    fn combined_gain_matches_timing_module() {
        let d = derived_metric("combined_gain_min");
        let rows = [vec![30.0, 70.0, 3.0], vec![50.0, 90.0, 5.0]];
        let got = d.estimate(&rows).unwrap().value;
        let t = crate::timing::compare_to_baseline(40.0, 80.0, 4.0, 1.0).unwrap();
        assert_relative_eq!(got, t.gain_ratio, max_relative = 1e-14);
    }

    #[test]
    fn delta_method_gradients_match_finite_differences() {
        for d in DERIVED {
            let m: Vec<f64> = (0..d.inputs.len()).map(|i| 3.0 + 1.7 * i as f64).collect();
            let g = (d.gradient)(&m);
            for j in 0..m.len() {
                let h = 1e-6 * m[j];
                let mut up = m.clone();
                let mut down = m.clone();
                up[j] += h;
                down[j] -= h;
                let fd = ((d.value)(&up) - (d.value)(&down)) / (2.0 * h);
                assert_relative_eq!(g[j], fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn derived_inputs_are_metrics() {
        for d in DERIVED {
            for m in d.inputs {
                assert!(metric_index(m).is_some(), "{}: {m}", d.name);
            }
        }
    }

    #[test]
    fn sweep_rejects_bad_requests() {
        let cfg = ScenarioConfig::default();
        assert!(run_sweep(&cfg, SweepAxis::Nodes, &[], 1, 0).is_err());
        assert!(run_sweep(&cfg, SweepAxis::Nodes, &[1.0], 0, 0).is_err());
    }

    #[test]
    fn single_trial_point_has_zero_variance() {
        let cfg = ScenarioConfig::default();
        let t = run_sweep(&cfg, SweepAxis::Nodes, &[5.0], 1, 3).unwrap();
        let rec = run_trial(&SweepAxis::Nodes.apply(&cfg, 5.0).unwrap(), 3, 0).unwrap();
        let m = t.points[0].metric("c2").unwrap();
        assert_eq!(m.mean, rec.phase2.c2);
        assert_eq!((m.se, m.p05, m.p95), (0.0, rec.phase2.c2, rec.phase2.c2));
    }

    #[test]
    fn baseline_point_leaves_policy_metrics_empty() {
        let cfg = ScenarioConfig::default();
        let t = run_sweep(&cfg, SweepAxis::Nodes, &[0.0], 3, 1).unwrap();
        let p = &t.points[0];
        assert!(p.metric("c1_min").is_none());
        assert!(p.metric("gain_ratio").is_none());
        assert_eq!(p.metric("relative_gain").unwrap().mean, 1.0);
        assert_eq!(p.derived("phase2_gain").unwrap().value, 1.0);
        assert!(p.derived("combined_gain_min").is_none());
    }
}
