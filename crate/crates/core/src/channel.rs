//! Small-scale Rayleigh fading and UMi large-scale gains (3GPP TR 38.901,
//! Table 7.4.1-1, street canyon).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Shadow-fading standard deviation for UMi NLOS, dB.
pub const UMI_NLOS_SIGMA_SF_DB: f64 = 7.82;

/// Shadow-fading standard deviation of the simplified UMi NLOS formula, dB.
pub const UMI_NLOS_SIMPLIFIED_SIGMA_SF_DB: f64 = 8.2;

/// Thermal noise density, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// Minimum 3D distance the path-loss formulas are evaluated at, m.
pub const MIN_DISTANCE_3D: f64 = 1.0;

/// Which NLOS formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLossModel {
    /// `max(PL_LOS, PL'_NLOS)`.
    #[default]
    MaxRule,
    /// The optional single-slope NLOS formula `32.4 + 20 log10(fc) + 31.9 log10(d3D)`.
    Simplified,
}

impl PathLossModel {
    pub fn default_sigma_sf_db(self) -> f64 {
        match self {
            PathLossModel::MaxRule => UMI_NLOS_SIGMA_SF_DB,
            PathLossModel::Simplified => UMI_NLOS_SIMPLIFIED_SIGMA_SF_DB,
        }
    }
}

/// Geometry of one transmitter/receiver pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Horizontal distance, m.
    pub d2d: f64,
    /// Transmitter antenna height, m.
    pub h_tx: f64,
    /// Receiver antenna height, m.
    pub h_rx: f64,
    /// Carrier frequency, GHz.
    pub fc_ghz: f64,
}

impl LinkGeometry {
    pub fn new(d2d: f64, h_tx: f64, h_rx: f64, fc_ghz: f64) -> Result<Self> {
        let bad = |key: &str, reason: String| {
            Err(Error::Config {
                key: key.to_owned(),
                reason,
            })
        };
        if !d2d.is_finite() || d2d < 0.0 {
            return bad("d2d", format!("must be finite and >= 0, got {d2d}"));
        }
        if !h_tx.is_finite() || h_tx <= 0.0 {
            return bad("h_tx", format!("must be > 0, got {h_tx}"));
        }
        if !h_rx.is_finite() || h_rx <= 0.0 {
            return bad("h_rx", format!("must be > 0, got {h_rx}"));
        }
        if !(0.5..=100.0).contains(&fc_ghz) {
            return bad("fc", format!("must lie in [0.5, 100] GHz, got {fc_ghz}"));
        }
        Ok(Self {
            d2d,
            h_tx,
            h_rx,
            fc_ghz,
        })
    }

    /// 3D distance before clamping.
    pub fn d3d(&self) -> f64 {
        self.d2d.hypot(self.h_tx - self.h_rx)
    }

    /// Breakpoint distance `d'_BP` with a 1 m effective environment height.
    pub fn breakpoint(&self) -> f64 {
        4.0 * (self.h_tx - 1.0) * (self.h_rx - 1.0) * self.fc_ghz * 1e9 / SPEED_OF_LIGHT
    }
}

/// Path loss together with whether the 3D distance hit the 1 m floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub db: f64,
    pub clamped: bool,
}

/// UMi street-canyon LOS path loss (dual slope), dB.
pub fn umi_los_pathloss_db(geom: &LinkGeometry) -> f64 {
    let d3d = geom.d3d().max(MIN_DISTANCE_3D);
    let fc_term = 20.0 * geom.fc_ghz.log10();
    let d_bp = geom.breakpoint();
    if geom.d2d <= d_bp {
        32.4 + 21.0 * d3d.log10() + fc_term
    } else {
        let dh = geom.h_tx - geom.h_rx;
        32.4 + 40.0 * d3d.log10() + fc_term - 9.5 * (d_bp * d_bp + dh * dh).log10()
    }
}

/// The `PL'_NLOS` term of UMi street canyon, dB.
pub fn umi_nlos_prime_db(geom: &LinkGeometry) -> f64 {
    let d3d = geom.d3d().max(MIN_DISTANCE_3D);
    35.3 * d3d.log10() + 22.4 + 21.3 * geom.fc_ghz.log10() - 0.3 * (geom.h_rx - 1.5)
}

/// UMi NLOS path loss for the selected formula, with clamp diagnostics.
pub fn umi_nlos_pathloss(geom: &LinkGeometry, model: PathLossModel) -> PathLoss {
    let clamped = geom.d3d() < MIN_DISTANCE_3D;
    let db = match model {
        PathLossModel::MaxRule => umi_los_pathloss_db(geom).max(umi_nlos_prime_db(geom)),
        PathLossModel::Simplified => {
            let d3d = geom.d3d().max(MIN_DISTANCE_3D);
            32.4 + 20.0 * geom.fc_ghz.log10() + 31.9 * d3d.log10()
        }
    };
    PathLoss { db, clamped }
}

/// UMi NLOS path loss under the `max(LOS, NLOS')` rule, dB.
pub fn umi_pathloss_db(geom: &LinkGeometry) -> f64 {
    umi_nlos_pathloss(geom, PathLossModel::MaxRule).db
}

/// `n_rx x n_tx` matrix of i.i.d. CN(0, 1) entries.
pub fn sample_rayleigh<R: Rng + ?Sized>(n_rx: usize, n_tx: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n_rx, n_tx, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Zero-mean Gaussian shadowing sample in dB.
///
/// A normal variate is consumed even when `sigma_sf_db` is zero so that
/// switching shadowing off does not shift later draws on the stream.
pub fn shadow_fading_db<R: Rng + ?Sized>(rng: &mut R, sigma_sf_db: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    if sigma_sf_db == 0.0 {
        0.0
    } else {
        sigma_sf_db * z
    }
}

/// Linear power gain from path loss and shadowing in dB.
pub fn linear_gain(pl_db: f64, sf_db: f64) -> f64 {
    10f64.powf(-(pl_db + sf_db) / 10.0)
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Receiver noise power in mW for a bandwidth and noise figure.
pub fn noise_power_mw(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    dbm_to_mw(noise_power_dbm(bandwidth_hz, noise_figure_db))
}

pub fn noise_power_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db
}

/// One link: small-scale matrix `H` and large-scale linear gain `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: ComplexMatrix,
    pub gain: f64,
}

impl ChannelRealization {
    pub fn new(h: ComplexMatrix, gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain <= 0.0 {
            return Err(Error::Config {
                key: "gain".to_owned(),
                reason: format!("large-scale gain must be finite and > 0, got {gain}"),
            });
        }
        Ok(Self { h, gain })
    }
}
