//! Scenario parameters and their flat TOML config file.
//!
//! Every key is optional; missing keys take the reference deployment values
//! (33 dBm BS, 26 dBm nodes, (4, 2, 2, 2) antennas, 10 MHz, UMi NLOS).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{self, PathLossModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    /// Uniform over the disc of radius R.
    #[default]
    Disc,
    /// Uniform angle on the circle of radius R.
    Ring,
}

/// Which node rate sets the front-haul capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase1Policy {
    #[default]
    Min,
    Median,
    Max,
}

impl Phase1Policy {
    pub const ALL: [Phase1Policy; 3] = [Phase1Policy::Min, Phase1Policy::Median, Phase1Policy::Max];

    pub fn name(self) -> &'static str {
        match self {
            Phase1Policy::Min => "min",
            Phase1Policy::Median => "median",
            Phase1Policy::Max => "max",
        }
    }
}

/// How zero-forcing precoders are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Raw pseudo-inverse, so every entity's `H F = I`.
    #[default]
    Raw,
    /// Pseudo-inverse rescaled so `trace(F F^H) = N_t`.
    PowerExact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Number of D-MIMO nodes; 0 is the BS-only baseline.
    #[serde(alias = "U")]
    pub nodes: usize,
    /// Radius of the node disc around the BS, m.
    #[serde(alias = "R")]
    pub radius: f64,
    /// `[min, max]` node antenna height, m.
    pub node_height_range: [f64; 2],
    pub bs_height: f64,
    pub ue_height: f64,
    /// Horizontal BS-UE distance, m.
    pub d_bs_ue: f64,
    /// BS transmit power, dBm.
    pub p_bs: f64,
    /// Node transmit power, dBm.
    pub p_node: f64,
    pub n_t_bs: usize,
    pub n_t_node: usize,
    pub n_r_node: usize,
    pub n_r_ue: usize,
    /// Phase-1 bandwidth, Hz.
    pub b1: f64,
    /// Phase-2 bandwidth, Hz.
    pub b2: f64,
    /// Carrier frequency, GHz.
    pub fc: f64,
    /// Receiver noise figure, dB (nodes and UE alike).
    pub nf: f64,
    pub shadow_fading: bool,
    /// Shadowing std in dB; defaults to the path-loss model's value.
    pub sigma_sf: Option<f64>,
    pub pathloss: PathLossModel,
    pub placement_mode: PlacementMode,
    pub phase1_policy: Phase1Policy,
    pub normalization: Normalization,
    /// Phase-1 slot duration, s.
    pub t1: f64,
    /// Phase-2 redraws allowed when a channel is rank deficient.
    pub max_resamples: u32,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            nodes: 10,
            radius: 100.0,
            node_height_range: [2.5, 25.0],
            bs_height: 20.0,
            ue_height: 2.0,
            d_bs_ue: 1000.0,
            p_bs: 33.0,
            p_node: 26.0,
            n_t_bs: 4,
            n_t_node: 2,
            n_r_node: 2,
            n_r_ue: 2,
            b1: 10e6,
            b2: 10e6,
            fc: 3.5,
            nf: 7.0,
            shadow_fading: true,
            sigma_sf: None,
            pathloss: PathLossModel::MaxRule,
            placement_mode: PlacementMode::Disc,
            phase1_policy: Phase1Policy::Min,
            normalization: Normalization::Raw,
            t1: 1.0,
            max_resamples: 8,
        }
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_owned(),
        reason: reason.into(),
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse {
            path: "<config>".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be finite and > 0, got {v}")))
            }
        };
        let finite = |key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be finite, got {v}")))
            }
        };
        if !self.radius.is_finite() || self.radius < 0.0 {
            return Err(invalid(
                "radius",
                format!("must be finite and >= 0, got {}", self.radius),
            ));
        }
        positive("d_bs_ue", self.d_bs_ue)?;
        let [lo, hi] = self.node_height_range;
        positive("node_height_range", lo)?;
        finite("node_height_range", hi)?;
        if lo > hi {
            return Err(invalid("node_height_range", format!("min {lo} exceeds max {hi}")));
        }
        positive("bs_height", self.bs_height)?;
        positive("ue_height", self.ue_height)?;
        finite("p_bs", self.p_bs)?;
        finite("p_node", self.p_node)?;
        for (key, n) in [
            ("n_t_bs", self.n_t_bs),
            ("n_t_node", self.n_t_node),
            ("n_r_node", self.n_r_node),
            ("n_r_ue", self.n_r_ue),
        ] {
            if n < 1 {
                return Err(invalid(key, "antenna count must be >= 1"));
            }
        }
        if self.n_r_ue > self.n_t_bs {
            return Err(invalid("n_r_ue", "zero-forcing needs n_r_ue <= n_t_bs"));
        }
        if self.nodes > 0 && self.n_r_ue > self.n_t_node {
            return Err(invalid("n_r_ue", "zero-forcing needs n_r_ue <= n_t_node"));
        }
        positive("b1", self.b1)?;
        positive("b2", self.b2)?;
        if !(0.5..=100.0).contains(&self.fc) {
            return Err(invalid("fc", format!("must lie in [0.5, 100] GHz, got {}", self.fc)));
        }
        finite("nf", self.nf)?;
        if let Some(s) = self.sigma_sf {
            if !s.is_finite() || s < 0.0 {
                return Err(invalid("sigma_sf", format!("must be finite and >= 0, got {s}")));
            }
        }
        positive("t1", self.t1)?;
        Ok(())
    }

    /// Shadowing std actually applied, dB (0 when shadowing is off).
    pub fn effective_sigma_sf(&self) -> f64 {
        if self.shadow_fading {
            self.sigma_sf.unwrap_or_else(|| self.pathloss.default_sigma_sf_db())
        } else {
            0.0
        }
    }

    /// Phase-1 layer count `min(n_t_bs, n_r_node)`.
    pub fn phase1_layers(&self) -> usize {
        self.n_t_bs.min(self.n_r_node)
    }

    /// Phase-2 layer count for the given number of active nodes.
    pub fn phase2_layers(&self, active_nodes: usize) -> usize {
        if active_nodes == 0 {
            self.n_t_bs.min(self.n_r_ue)
        } else {
            self.n_t_bs.min(self.n_t_node).min(self.n_r_ue)
        }
    }

    pub fn bs_power_mw(&self) -> f64 {
        channel::dbm_to_mw(self.p_bs)
    }

    pub fn node_power_mw(&self) -> f64 {
        channel::dbm_to_mw(self.p_node)
    }

    /// Node receiver noise power, mW.
    pub fn noise_phase1_mw(&self) -> f64 {
        channel::noise_power_mw(self.b1, self.nf)
    }

    /// UE receiver noise power, mW.
    pub fn noise_phase2_mw(&self) -> f64 {
        channel::noise_power_mw(self.b2, self.nf)
    }
}

/// Loads and validates a config file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    ScenarioConfig::from_toml_str(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: path.to_owned(),
            message,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference_deployment() {
        let cfg = ScenarioConfig::from_toml_str("").unwrap();
        assert_eq!(cfg.p_bs, 33.0);
        assert_eq!(cfg.p_node, 26.0);
        assert_eq!((cfg.n_t_bs, cfg.n_t_node, cfg.n_r_node, cfg.n_r_ue), (4, 2, 2, 2));
        assert_eq!((cfg.b1, cfg.b2), (10e6, 10e6));
        assert_eq!((cfg.bs_height, cfg.ue_height), (20.0, 2.0));
        assert_eq!(cfg.node_height_range, [2.5, 25.0]);
        assert_eq!(cfg.effective_sigma_sf(), 7.82);
        assert_eq!(cfg.phase1_layers(), 2);
        assert_eq!(cfg.phase2_layers(0), 2);
        assert_eq!(cfg.phase2_layers(3), 2);
    }

    #[test]
    fn negative_dbm_accepted() {
        let cfg = ScenarioConfig::from_toml_str("p_node = -10").unwrap();
        assert_eq!(cfg.p_node, -10.0);
    }

    #[test]
    fn zero_ue_antennas_rejected_by_key() {
        let err = ScenarioConfig::from_toml_str("n_r_ue = 0").unwrap_err();
        match err {
            Error::Config { key, reason } => {
                assert_eq!(key, "n_r_ue");
                assert!(reason.contains(">= 1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ScenarioConfig::from_toml_str("antennas = 4").unwrap_err();
        assert!(err.to_string().contains("antennas"), "{err}");
    }

    #[test]
    fn aliases_and_enums() {
        let cfg = ScenarioConfig::from_toml_str(
            "U = 5\nR = 50.0\nplacement_mode = \"ring\"\nphase1_policy = \"median\"\n\
             normalization = \"power_exact\"\npathloss = \"simplified\"\nshadow_fading = false",
        )
        .unwrap();
        assert_eq!(cfg.nodes, 5);
        assert_eq!(cfg.radius, 50.0);
        assert_eq!(cfg.placement_mode, PlacementMode::Ring);
        assert_eq!(cfg.phase1_policy, Phase1Policy::Median);
        assert_eq!(cfg.normalization, Normalization::PowerExact);
        assert_eq!(cfg.effective_sigma_sf(), 0.0);
    }

    #[test]
    fn invariant_violations() {
        for (text, key) in [
            ("d_bs_ue = 0.0", "d_bs_ue"),
            ("radius = -1.0", "radius"),
            ("b2 = 0.0", "b2"),
            ("node_height_range = [30.0, 2.0]", "node_height_range"),
            ("fc = 200.0", "fc"),
            ("sigma_sf = -1.0", "sigma_sf"),
        ] {
            match ScenarioConfig::from_toml_str(text) {
                Err(Error::Config { key: k, .. }) => assert_eq!(k, key, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn malformed_syntax() {
        assert!(matches!(
            ScenarioConfig::from_toml_str("p_bs = = 3"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn missing_file() {
        let err = parse_config(Path::new("/nonexistent/dmimo.toml")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
