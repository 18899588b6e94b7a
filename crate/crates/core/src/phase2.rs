//! Access slot: the BS and the participating nodes jointly transmit the same
//! layers to the UE, each entity precoding with the pseudo-inverse of its
//! own channel.
//!
//! Two routes give the capacity. The closed form adds the per-entity
//! amplitudes `sqrt(G E / N_t)` coherently on every layer. The log-det route
//! builds `M = sum_e sqrt(G_e E_e / N_t,e) H_e F_e` and evaluates
//! `log2 det(M M^H / sigma2 + I)`. With raw pseudo-inverse precoders
//! `H_e F_e = I` and the two agree; the power-exact mode rescales each
//! precoder to meet `trace(F F^H) = N_t` and the log-det route then reports
//! what that costs.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::config::{Normalization, ScenarioConfig};
use crate::error::LinalgError;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_gram, log_det_capacity, pseudo_inverse, ComplexMatrix};

/// Zero-forcing precoders of one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    /// `n_t_bs x N_s`.
    pub f_bs: ComplexMatrix,
    /// One `n_t_node x N_s` matrix per active node.
    pub f_nodes: Vec<ComplexMatrix>,
    pub normalization: Normalization,
}

/// Pseudo-inverse precoder of one channel, optionally rescaled to
/// `trace(F F^H) = N_t`.
pub fn zf_precoder(h: &ComplexMatrix, mode: Normalization) -> Result<ComplexMatrix, LinalgError> {
    let f = pseudo_inverse(h)?;
    Ok(match mode {
        Normalization::Raw => f,
        Normalization::PowerExact => {
            let gamma = (h.cols() as f64 / f.frobenius_norm_sq()).sqrt();
            f.scale(gamma)
        }
    })
}

/// Precoders for the BS and every given node link.
pub fn zf_precoders(
    bs: &ChannelRealization,
    nodes: &[&ChannelRealization],
    mode: Normalization,
) -> Result<PrecoderSet, LinalgError> {
    Ok(PrecoderSet {
        f_bs: zf_precoder(&bs.h, mode)?,
        f_nodes: nodes
            .iter()
            .map(|l| zf_precoder(&l.h, mode))
            .collect::<Result<_, _>>()?,
        normalization: mode,
    })
}

/// Large-scale gain, symbol energy and antenna count of one transmitting entity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntityPower {
    pub gain: f64,
    pub energy: f64,
    pub n_t: usize,
}

impl EntityPower {
    /// Per-layer received amplitude `sqrt(G E / N_t)`.
    pub fn amplitude(&self) -> f64 {
        (self.gain * self.energy / self.n_t as f64).sqrt()
    }
}

/// Closed-form coherent ZF capacity, b/s/Hz.
///
/// `N_s log2((sum_e sqrt(G_e E_e / N_t,e))^2 / sigma2 + 1)`; the BS is one of
/// the entities.
pub fn phase2_capacity_closed(entities: &[EntityPower], layers: usize, sigma2_ue: f64) -> f64 {
    let coherent: f64 = entities.iter().map(EntityPower::amplitude).sum();
    layers as f64 * (coherent * coherent / sigma2_ue + 1.0).log2()
}

/// General log-det capacity for arbitrary precoders, b/s/Hz.
///
/// `entities[0]` belongs to the BS link, the rest follow `nodes` in order.
pub fn phase2_capacity_logdet(
    bs: &ChannelRealization,
    nodes: &[&ChannelRealization],
    precoders: &PrecoderSet,
    entities: &[EntityPower],
    sigma2_ue: f64,
) -> Result<f64> {
    if precoders.f_nodes.len() != nodes.len() || entities.len() != nodes.len() + 1 {
        return Err(LinalgError::DimensionMismatch {
            op: "phase2 entities",
            lhs: (nodes.len(), precoders.f_nodes.len()),
            rhs: (entities.len(), 1),
        }
        .into());
    }
    let mut m = bs.h.matmul(&precoders.f_bs)?.scale(entities[0].amplitude());
    for ((link, f), e) in nodes.iter().zip(&precoders.f_nodes).zip(&entities[1..]) {
        let term = link.h.matmul(f)?.scale(e.amplitude());
        m = m.try_add(&term)?;
    }
    Ok(log_det_capacity(&hermitian_gram(&m), 1.0 / sigma2_ue)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2Result {
    pub active_nodes: Vec<usize>,
    pub layers: usize,
    /// Closed form, b/s/Hz.
    pub c2_closed: f64,
    /// Log-det route under the configured normalization, b/s/Hz.
    pub c2_logdet: f64,
    /// Reported capacity, b/s.
    pub c2: f64,
    /// BS-only capacity, b/s.
    pub c_baseline: f64,
    /// `sqrt(G E / N_t)` for the BS followed by each active node.
    pub per_entity_gain_terms: Vec<f64>,
}

/// Both capacity routes for the BS plus the listed nodes, b/s/Hz.
fn capacity_pair(
    cfg: &ScenarioConfig,
    bs: &ChannelRealization,
    nodes: &[&ChannelRealization],
) -> Result<(f64, f64, Vec<EntityPower>)> {
    let sigma2 = cfg.noise_phase2_mw();
    let layers = cfg.phase2_layers(nodes.len());
    let mut entities = Vec::with_capacity(nodes.len() + 1);
    entities.push(EntityPower {
        gain: bs.gain,
        energy: cfg.bs_power_mw(),
        n_t: cfg.n_t_bs,
    });
    entities.extend(nodes.iter().map(|l| EntityPower {
        gain: l.gain,
        energy: cfg.node_power_mw(),
        n_t: cfg.n_t_node,
    }));
    let closed = phase2_capacity_closed(&entities, layers, sigma2);
    let precoders = zf_precoders(bs, nodes, cfg.normalization)?;
    let logdet = phase2_capacity_logdet(bs, nodes, &precoders, &entities, sigma2)?;
    Ok((closed, logdet, entities))
}

/// Phase-2 and baseline capacities for a subset of nodes.
///
/// The reported `c2` is the closed form under raw pseudo-inverse precoders and the
/// log-det value under power-exact ones; the baseline follows the same rule
/// with no nodes.
pub fn evaluate_phase2(
    cfg: &ScenarioConfig,
    bs: &ChannelRealization,
    node_links: &[ChannelRealization],
    active_nodes: &[usize],
) -> Result<Phase2Result> {
    let nodes: Vec<&ChannelRealization> = active_nodes
        .iter()
        .map(|&i| {
            node_links.get(i).ok_or_else(|| Error::Config {
                key: "active_nodes".to_owned(),
                reason: format!("node {i} out of range ({} links)", node_links.len()),
            })
        })
        .collect::<Result<_>>()?;
    let pick = |closed: f64, logdet: f64| match cfg.normalization {
        Normalization::Raw => closed,
        Normalization::PowerExact => logdet,
    };

    let (closed, logdet, entities) = capacity_pair(cfg, bs, &nodes)?;
    let (base_closed, base_logdet, _) = capacity_pair(cfg, bs, &[])?;
    Ok(Phase2Result {
        active_nodes: active_nodes.to_vec(),
        layers: cfg.phase2_layers(nodes.len()),
        c2_closed: closed,
        c2_logdet: logdet,
        c2: pick(closed, logdet) * cfg.b2,
        c_baseline: pick(base_closed, base_logdet) * cfg.b2,
        per_entity_gain_terms: entities.iter().map(EntityPower::amplitude).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_rayleigh;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn link(h: ComplexMatrix, gain: f64) -> ChannelRealization {
        ChannelRealization::new(h, gain).unwrap()
    }

    #[test]
    fn identity_channel_precoder() {
        let i2 = ComplexMatrix::identity(2);
        for mode in [Normalization::Raw, Normalization::PowerExact] {
            let f = zf_precoder(&i2, mode).unwrap();
            assert!(f.max_abs_diff(&i2) < 1e-14, "{mode:?}");
        }
    }

    #[test]
    fn row_channel_precoders() {
        let h = ComplexMatrix::from_real(1, 2, &[1.0, 1.0]).unwrap();
        let f = zf_precoder(&h, Normalization::Raw).unwrap();
        let expected = ComplexMatrix::from_real(2, 1, &[0.5, 0.5]).unwrap();
        assert!(f.max_abs_diff(&expected) < 1e-14);
        assert_relative_eq!((&h * &f).get(0, 0).re, 1.0, epsilon = 1e-14);

        let f = zf_precoder(&h, Normalization::PowerExact).unwrap();
        let expected = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]).unwrap();
        assert!(f.max_abs_diff(&expected) < 1e-14);
        assert_relative_eq!(f.frobenius_norm_sq(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_values() {
        // baseline: G E / (N_t sigma2) = 3, two layers
        let bs = EntityPower {
            gain: 3.0,
            energy: 4.0,
            n_t: 4,
        };
        assert_relative_eq!(phase2_capacity_closed(&[bs], 2, 1.0), 4.0, epsilon = 1e-14);

        let unit = EntityPower {
            gain: 1.0,
            energy: 2.0,
            n_t: 2,
        };
        assert_relative_eq!(
            phase2_capacity_closed(&[unit, unit], 2, 1.0),
            2.0 * 5f64.log2(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn doubling_energy_doubles_coherent_power() {
        let a = EntityPower {
            gain: 0.3,
            energy: 1.7,
            n_t: 4,
        };
        let b = EntityPower {
            gain: 0.8,
            energy: 0.4,
            n_t: 2,
        };
        let s = a.amplitude() + b.amplitude();
        let doubled = [
            EntityPower {
                energy: 2.0 * a.energy,
                ..a
            },
            EntityPower {
                energy: 2.0 * b.energy,
                ..b
            },
        ];
        let bits = phase2_capacity_closed(&doubled, 1, 0.7);
        assert_relative_eq!(bits, (2.0 * s * s / 0.7 + 1.0).log2(), max_relative = 1e-14);
    }

    #[test]
    fn logdet_zero_gain_and_baseline_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bs = link(sample_rayleigh(2, 4, &mut rng), 1.0);
        let p = zf_precoders(&bs, &[], Normalization::Raw).unwrap();
        let off = [EntityPower {
            gain: 0.0,
            energy: 1.0,
            n_t: 4,
        }];
        assert_eq!(phase2_capacity_logdet(&bs, &[], &p, &off, 1.0).unwrap(), 0.0);

        // U = 0: HF = I, so the log-det is that of a scaled identity.
        let e = [EntityPower {
            gain: 2e-9,
            energy: 2000.0,
            n_t: 4,
        }];
        let sigma2 = 1e-10;
        let got = phase2_capacity_logdet(&bs, &[], &p, &e, sigma2).unwrap();
        let scale = e[0].amplitude().powi(2) / sigma2;
        let direct = log_det_capacity(&ComplexMatrix::identity(2), scale).unwrap();
        assert_relative_eq!(got, direct, max_relative = 1e-12);
    }

    #[test]
    fn logdet_rejects_mismatched_entities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bs = link(sample_rayleigh(2, 4, &mut rng), 1.0);
        let p = zf_precoders(&bs, &[], Normalization::Raw).unwrap();
        assert!(phase2_capacity_logdet(&bs, &[], &p, &[], 1.0).is_err());
    }

    #[test]
    fn evaluate_respects_subset_and_baseline() {
        let cfg = ScenarioConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let bs = link(sample_rayleigh(2, 4, &mut rng), 1e-13);
        let nodes: Vec<_> = (0..4).map(|_| link(sample_rayleigh(2, 2, &mut rng), 5e-14)).collect();
        let all = evaluate_phase2(&cfg, &bs, &nodes, &[0, 1, 2, 3]).unwrap();
        let one = evaluate_phase2(&cfg, &bs, &nodes, &[2]).unwrap();
        let none = evaluate_phase2(&cfg, &bs, &nodes, &[]).unwrap();
        assert!(all.c2 > one.c2 && one.c2 > none.c2);
        assert_eq!(none.c2, none.c_baseline);
        assert_eq!(all.c_baseline, none.c_baseline);
        assert_eq!(all.per_entity_gain_terms.len(), 5);
        assert!(evaluate_phase2(&cfg, &bs, &nodes, &[7]).is_err());
    }

    fn random_scenario(seed: u64) -> (ChannelRealization, Vec<ChannelRealization>, Vec<EntityPower>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = rng.random_range(0..8);
        let bs = link(
            sample_rayleigh(2, 4, &mut rng),
            10f64.powf(-rng.random_range(8.0..14.0)),
        );
        let nodes: Vec<_> = (0..u)
            .map(|_| {
                link(
                    sample_rayleigh(2, 2, &mut rng),
                    10f64.powf(-rng.random_range(8.0..14.0)),
                )
            })
            .collect();
        let mut entities = vec![EntityPower {
            gain: bs.gain,
            energy: 2000.0,
            n_t: 4,
        }];
        entities.extend(nodes.iter().map(|l| EntityPower {
            gain: l.gain,
            energy: 400.0,
            n_t: 2,
        }));
        (bs, nodes, entities)
    }

    proptest! {
        #[test]
        fn closed_form_matches_logdet(seed in any::<u64>()) {
            let (bs, nodes, entities) = random_scenario(seed);
            let refs: Vec<_> = nodes.iter().collect();
            let p = zf_precoders(&bs, &refs, Normalization::Raw).unwrap();
            let closed = phase2_capacity_closed(&entities, 2, 1e-10);
            let logdet = phase2_capacity_logdet(&bs, &refs, &p, &entities, 1e-10).unwrap();
            prop_assert!(((closed - logdet) / closed).abs() <= 1e-9);
        }

        #[test]
        fn adding_a_node_strictly_helps(seed in any::<u64>(), g in 1e-16f64..1e-6) {
            let (_, _, mut entities) = random_scenario(seed);
            let before = phase2_capacity_closed(&entities, 2, 1e-10);
            entities.push(EntityPower { gain: g, energy: 400.0, n_t: 2 });
            prop_assert!(phase2_capacity_closed(&entities, 2, 1e-10) > before);
        }

        #[test]
        fn closed_form_is_permutation_invariant(seed in any::<u64>()) {
            let (_, _, entities) = random_scenario(seed);
            let mut reversed = entities.clone();
            reversed[1..].reverse();
            let a = phase2_capacity_closed(&entities, 2, 1e-10);
            let b = phase2_capacity_closed(&reversed, 2, 1e-10);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn power_exact_never_beats_closed_form_when_shrinking(seed in any::<u64>()) {
            let (bs, nodes, entities) = random_scenario(seed);
            let refs: Vec<_> = nodes.iter().collect();
            let raw = zf_precoders(&bs, &refs, Normalization::Raw).unwrap();
            let all_shrink = std::iter::once((&raw.f_bs, 4usize))
                .chain(raw.f_nodes.iter().map(|f| (f, 2usize)))
                .all(|(f, n_t)| f.frobenius_norm_sq() > n_t as f64);
            let exact = zf_precoders(&bs, &refs, Normalization::PowerExact).unwrap();
            for (f, n_t) in std::iter::once((&exact.f_bs, 4usize)).chain(exact.f_nodes.iter().map(|f| (f, 2usize))) {
                prop_assert!((f.frobenius_norm_sq() - n_t as f64).abs() < 1e-9);
            }
            if all_shrink {
                let closed = phase2_capacity_closed(&entities, 2, 1e-10);
                let logdet = phase2_capacity_logdet(&bs, &refs, &exact, &entities, 1e-10).unwrap();
                prop_assert!(logdet <= closed * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn raw_zero_forces_every_entity() {
        let (bs, nodes, _) = random_scenario(17);
        let refs: Vec<_> = nodes.iter().collect();
        let p = zf_precoders(&bs, &refs, Normalization::Raw).unwrap();
        let i2 = ComplexMatrix::identity(2);
        assert!((&bs.h * &p.f_bs).max_abs_diff(&i2) < 1e-9);
        for (l, f) in nodes.iter().zip(&p.f_nodes) {
            assert!((&l.h * f).max_abs_diff(&i2) < 1e-9);
        }
    }
}
