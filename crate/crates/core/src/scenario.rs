//! Node geometry around the BS and the per-trial link set.
//!
//! The BS sits at the origin and the UE on the +x axis at `d_bs_ue`. Draws
//! are made node by node so node `i` gets the same position, height and
//! channels whatever the total node count is, and the BS-UE link is always
//! drawn first on its streams.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    linear_gain, sample_rayleigh, shadow_fading_db, umi_nlos_pathloss, ChannelRealization, LinkGeometry,
};
use crate::config::{PlacementMode, ScenarioConfig};
use crate::error::Result;
use crate::rng::{substream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodePlacement {
    pub x: f64,
    pub y: f64,
    pub height: f64,
}

impl NodePlacement {
    /// Horizontal distance to the BS.
    pub fn distance_to_bs(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Horizontal distance to a point on the x axis.
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }
}

/// Places `cfg.nodes` nodes around the BS.
pub fn sample_nodes<R: Rng + ?Sized>(cfg: &ScenarioConfig, rng: &mut R) -> Vec<NodePlacement> {
    let [h_lo, h_hi] = cfg.node_height_range;
    (0..cfg.nodes)
        .map(|_| {
            let u: f64 = rng.random();
            let angle = TAU * rng.random::<f64>();
            let h: f64 = rng.random();
            let r = match cfg.placement_mode {
                PlacementMode::Disc => cfg.radius * u.sqrt(),
                PlacementMode::Ring => cfg.radius,
            };
            NodePlacement {
                x: r * angle.cos(),
                y: r * angle.sin(),
                height: h_lo + (h_hi - h_lo) * h,
            }
        })
        .collect()
}

/// Large-scale gains of every link, fixed for the whole trial.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleGains {
    pub phase1: Vec<f64>,
    pub phase2_nodes: Vec<f64>,
    pub phase2_bs: f64,
    /// Links whose 3D distance was raised to the 1 m floor.
    pub clamped_links: usize,
}

/// All channels of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSet {
    /// BS to node `i`, `n_r_node x n_t_bs`.
    pub phase1: Vec<ChannelRealization>,
    /// Node `i` to UE, `n_r_ue x n_t_node`.
    pub phase2_nodes: Vec<ChannelRealization>,
    /// BS to UE, `n_r_ue x n_t_bs`.
    pub phase2_bs: ChannelRealization,
    pub clamped_links: usize,
}

impl LinkSet {
    pub fn node_count(&self) -> usize {
        self.phase1.len()
    }
}

pub fn large_scale_gains<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    nodes: &[NodePlacement],
    shadow_rng: &mut R,
) -> Result<LargeScaleGains> {
    let sigma = cfg.effective_sigma_sf();
    let mut clamped_links = 0;
    let mut gain = |geom: LinkGeometry, rng: &mut R| {
        let pl = umi_nlos_pathloss(&geom, cfg.pathloss);
        clamped_links += usize::from(pl.clamped);
        linear_gain(pl.db, shadow_fading_db(rng, sigma))
    };

    let bs_ue = LinkGeometry::new(cfg.d_bs_ue, cfg.bs_height, cfg.ue_height, cfg.fc)?;
    let phase2_bs = gain(bs_ue, shadow_rng);
    let mut phase1 = Vec::with_capacity(nodes.len());
    let mut phase2_nodes = Vec::with_capacity(nodes.len());
    for node in nodes {
        let bs_node = LinkGeometry::new(node.distance_to_bs(), cfg.bs_height, node.height, cfg.fc)?;
        let node_ue = LinkGeometry::new(node.distance_to(cfg.d_bs_ue, 0.0), node.height, cfg.ue_height, cfg.fc)?;
        phase1.push(gain(bs_node, shadow_rng));
        phase2_nodes.push(gain(node_ue, shadow_rng));
    }
    Ok(LargeScaleGains {
        phase1,
        phase2_nodes,
        phase2_bs,
        clamped_links,
    })
}

/// Phase-2 channels for one draw attempt.
pub fn draw_phase2<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    gains: &LargeScaleGains,
    rng: &mut R,
) -> Result<(ChannelRealization, Vec<ChannelRealization>)> {
    let bs = ChannelRealization::new(sample_rayleigh(cfg.n_r_ue, cfg.n_t_bs, rng), gains.phase2_bs)?;
    let nodes = gains
        .phase2_nodes
        .iter()
        .map(|&g| ChannelRealization::new(sample_rayleigh(cfg.n_r_ue, cfg.n_t_node, rng), g))
        .collect::<Result<Vec<_>>>()?;
    Ok((bs, nodes))
}

/// Builds every link of a trial from its seed, using the given phase-2 draw attempt.
pub fn build_links(
    cfg: &ScenarioConfig,
    nodes: &[NodePlacement],
    trial_seed: u64,
    phase2_attempt: u32,
) -> Result<LinkSet> {
    let gains = large_scale_gains(cfg, nodes, &mut substream(trial_seed, Purpose::Shadowing))?;

    let mut p1_rng = substream(trial_seed, Purpose::Phase1Fading);
    let phase1 = gains
        .phase1
        .iter()
        .map(|&g| ChannelRealization::new(sample_rayleigh(cfg.n_r_node, cfg.n_t_bs, &mut p1_rng), g))
        .collect::<Result<Vec<_>>>()?;

    let mut p2_rng = substream(trial_seed, Purpose::Phase2Fading(phase2_attempt));
    let (phase2_bs, phase2_nodes) = draw_phase2(cfg, &gains, &mut p2_rng)?;

    Ok(LinkSet {
        phase1,
        phase2_nodes,
        phase2_bs,
        clamped_links: gains.clamped_links,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(nodes: usize, radius: f64) -> ScenarioConfig {
        ScenarioConfig {
            nodes,
            radius,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn zero_radius_puts_nodes_at_origin() {
        let nodes = sample_nodes(&cfg(3, 0.0), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(nodes.len(), 3);
        for n in nodes {
            assert_eq!(n.distance_to_bs(), 0.0);
            assert!((2.5..=25.0).contains(&n.height));
        }
    }

    #[test]
    fn ring_mode_is_on_the_circle() {
        let c = ScenarioConfig {
            placement_mode: PlacementMode::Ring,
            ..cfg(50, 50.0)
        };
        for n in sample_nodes(&c, &mut ChaCha8Rng::seed_from_u64(2)) {
            assert!((n.distance_to_bs() - 50.0).abs() < 1e-12);
        }
    }

    #[test]
    fn link_counts() {
        let c0 = cfg(0, 100.0);
        let links = build_links(&c0, &[], 7, 0).unwrap();
        assert!(links.phase1.is_empty());
        assert!(links.phase2_nodes.is_empty());

        let c5 = cfg(5, 100.0);
        let nodes = sample_nodes(&c5, &mut ChaCha8Rng::seed_from_u64(3));
        let links = build_links(&c5, &nodes, 7, 0).unwrap();
        assert_eq!(links.phase1.len(), 5);
        assert_eq!(links.phase2_nodes.len() + 1, 6);
        assert_eq!((links.phase1[0].h.rows(), links.phase1[0].h.cols()), (2, 4));
        assert_eq!((links.phase2_nodes[0].h.rows(), links.phase2_nodes[0].h.cols()), (2, 2));
        assert_eq!((links.phase2_bs.h.rows(), links.phase2_bs.h.cols()), (2, 4));
    }

    #[test]
    fn links_are_deterministic() {
        let c = cfg(4, 80.0);
        let nodes = sample_nodes(&c, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(
            build_links(&c, &nodes, 11, 0).unwrap(),
            build_links(&c, &nodes, 11, 0).unwrap()
        );
        assert_ne!(
            build_links(&c, &nodes, 11, 0).unwrap(),
            build_links(&c, &nodes, 11, 1).unwrap()
        );
    }

    #[test]
    fn bs_ue_link_does_not_depend_on_node_count() {
        let c0 = cfg(0, 100.0);
        let c9 = cfg(9, 100.0);
        let nodes = sample_nodes(&c9, &mut ChaCha8Rng::seed_from_u64(4));
        let base = build_links(&c0, &[], 99, 0).unwrap();
        let full = build_links(&c9, &nodes, 99, 0).unwrap();
        assert_eq!(base.phase2_bs, full.phase2_bs);
    }

    #[test]
    fn node_prefix_is_stable_across_node_counts() {
        let small = sample_nodes(&cfg(3, 100.0), &mut ChaCha8Rng::seed_from_u64(5));
        let large = sample_nodes(&cfg(8, 100.0), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(small[..], large[..3]);
    }
}
