//! Two-slot accounting: the UE receives the `C1 * T1` bits delivered in the
//! front-haul slot over a second slot of length `T2 = C1 T1 / C2`, and the
//! BS-only baseline is charged the same `T1 + T2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingResult {
    pub t1: f64,
    pub t2: f64,
    /// `C1 * T1`, bits.
    pub dmimo_bits: f64,
    /// `T1 + T2`, s.
    pub dmimo_duration: f64,
    /// `C_B * (T1 + T2)`, bits.
    pub baseline_bits_corrected: f64,
    /// `dmimo_bits / baseline_bits_corrected`.
    pub gain_ratio: f64,
}

impl TimingResult {
    /// Bits per second over the whole two-slot exchange.
    pub fn dmimo_throughput(&self) -> f64 {
        self.dmimo_bits / self.dmimo_duration
    }
}

/// Length of the access slot needed to forward `c1 * t1` bits at rate `c2`.
pub fn phase2_time(c1: f64, c2: f64, t1: f64) -> Result<f64> {
    if c2.is_nan() || c2 <= 0.0 {
        return Err(Error::UnreachableUe);
    }
    if c1.is_nan() || c1 < 0.0 || t1.is_nan() || t1 <= 0.0 {
        return Err(Error::Config {
            key: "timing".to_owned(),
            reason: format!("need c1 >= 0 and t1 > 0, got c1 = {c1}, t1 = {t1}"),
        });
    }
    Ok(c1 * t1 / c2)
}

/// Bits delivered by the two-slot scheme against the time-corrected baseline.
pub fn compare_to_baseline(c1: f64, c2: f64, c_b: f64, t1: f64) -> Result<TimingResult> {
    let t2 = phase2_time(c1, c2, t1)?;
    if c_b.is_nan() || c_b <= 0.0 {
        return Err(Error::UnreachableUe);
    }
    let dmimo_bits = c1 * t1;
    let dmimo_duration = t1 + t2;
    let baseline_bits_corrected = c_b * dmimo_duration;
    Ok(TimingResult {
        t1,
        t2,
        dmimo_bits,
        dmimo_duration,
        baseline_bits_corrected,
        gain_ratio: dmimo_bits / baseline_bits_corrected,
    })
}
