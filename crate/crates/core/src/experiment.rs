//! One Monte Carlo trial: placement, links, both phases and the timing
//! comparison, all reproducible from `(config, master seed, trial index)`.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::config::{Phase1Policy, ScenarioConfig};
use crate::error::{Error, LinalgError, Result};
use crate::phase1::{node_rate, phase1_capacity, Phase1Result};
use crate::phase2::{evaluate_phase2, zf_precoder, Phase2Result};
use crate::rng::{substream, trial_seed, Purpose};
use crate::scenario::{build_links, sample_nodes, LinkSet, NodePlacement};
use crate::timing::{compare_to_baseline, TimingResult};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Phase-2 redraws caused by rank-deficient channels.
    pub phase2_resamples: u32,
    /// Links evaluated at the 1 m distance floor.
    pub clamped_links: usize,
}

/// Outcome of one front-haul policy: who holds the data, how fast the
/// access slot forwards it and how that compares with the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyOutcome {
    pub phase1: Phase1Result,
    pub phase2: Phase2Result,
    pub timing: TimingResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub master_seed: u64,
    pub trial_index: u64,
    pub nodes: Vec<NodePlacement>,
    /// Every node transmitting in phase 2, front-haul cost ignored.
    pub phase2: Phase2Result,
    /// One entry per policy (min, median, max); empty for the baseline.
    pub policies: Vec<PolicyOutcome>,
    /// The policy selected in the config.
    pub configured_policy: Phase1Policy,
    pub diagnostics: Diagnostics,
}

impl TrialRecord {
    pub fn policy(&self, policy: Phase1Policy) -> Option<&PolicyOutcome> {
        self.policies.iter().find(|o| o.phase1.policy == policy)
    }

    /// Phase-1 result of the configured policy; `None` for the baseline.
    pub fn phase1(&self) -> Option<&Phase1Result> {
        self.policy(self.configured_policy).map(|o| &o.phase1)
    }

    pub fn timing(&self) -> Option<&TimingResult> {
        self.policy(self.configured_policy).map(|o| &o.timing)
    }

    pub fn is_baseline(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn all_full_rank(bs: &ChannelRealization, nodes: &[ChannelRealization], cfg: &ScenarioConfig) -> Result<bool> {
    for h in std::iter::once(&bs.h).chain(nodes.iter().map(|l| &l.h)) {
        match zf_precoder(h, cfg.normalization) {
            Ok(_) => {}
            Err(LinalgError::Singular { .. }) => return Ok(false),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

/// Samples every link of a trial, redrawing phase-2 fading while any
/// channel is rank deficient.
pub fn trial_links(
    cfg: &ScenarioConfig,
    master_seed: u64,
    trial_index: u64,
) -> Result<(Vec<NodePlacement>, LinkSet, Diagnostics)> {
    let seed = trial_seed(master_seed, trial_index);
    let nodes = sample_nodes(cfg, &mut substream(seed, Purpose::Placement));
    for attempt in 0..=cfg.max_resamples {
        let links = build_links(cfg, &nodes, seed, attempt)?;
        if all_full_rank(&links.phase2_bs, &links.phase2_nodes, cfg)? {
            let diagnostics = Diagnostics {
                phase2_resamples: attempt,
                clamped_links: links.clamped_links,
            };
            return Ok((nodes, links, diagnostics));
        }
    }
    Err(Error::Degenerate {
        trial: trial_index,
        attempts: cfg.max_resamples + 1,
    })
}

/// Runs one trial end to end. With no nodes only the baseline is reported.
pub fn run_trial(cfg: &ScenarioConfig, master_seed: u64, trial_index: u64) -> Result<TrialRecord> {
    cfg.validate()?;
    let (nodes, links, diagnostics) = trial_links(cfg, master_seed, trial_index)?;
    let everyone: Vec<usize> = (0..nodes.len()).collect();
    let phase2 = evaluate_phase2(cfg, &links.phase2_bs, &links.phase2_nodes, &everyone)?;

    let mut policies = Vec::new();
    if !nodes.is_empty() {
        let sigma2 = cfg.noise_phase1_mw();
        let layers = cfg.phase1_layers();
        let rates = links
            .phase1
            .iter()
            .map(|l| node_rate(l, cfg.bs_power_mw(), layers, sigma2))
            .collect::<Result<Vec<_>>>()?;
        for policy in Phase1Policy::ALL {
            let p1 = phase1_capacity(&rates, policy, cfg.b1)?;
            let p2 = if p1.participating == everyone {
                phase2.clone()
            } else {
                evaluate_phase2(cfg, &links.phase2_bs, &links.phase2_nodes, &p1.participating)?
            };
            let timing = compare_to_baseline(p1.c1, p2.c2, p2.c_baseline, cfg.t1)?;
            policies.push(PolicyOutcome {
                phase1: p1,
                phase2: p2,
                timing,
            });
        }
    }

    Ok(TrialRecord {
        master_seed,
        trial_index,
        nodes,
        phase2,
        policies,
        configured_policy: cfg.phase1_policy,
        diagnostics,
    })
}
