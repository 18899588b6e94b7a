//! Reproducible random substreams.
//!
//! Each trial owns a seed mixed from `(master_seed, trial_index)`, and each
//! purpose within a trial (placement, fading, shadowing) owns a stream mixed
//! from that seed and a purpose tag. Nothing depends on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// What a substream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Placement,
    Phase1Fading,
    /// Phase-2 small-scale fading; the payload is the redraw attempt.
    Phase2Fading(u32),
    Shadowing,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Placement => 0x706c_6163,
            Purpose::Phase1Fading => 0x6661_6431,
            Purpose::Phase2Fading(attempt) => 0x6661_6432_0000_0000 | u64::from(attempt),
            Purpose::Shadowing => 0x7368_6164,
        }
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one Monte Carlo trial.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix(mix(master_seed) ^ trial_index.rotate_left(17))
}

/// Independent stream for one purpose inside a trial.
pub fn substream(trial_seed: u64, purpose: Purpose) -> SimRng {
    ChaCha8Rng::seed_from_u64(mix(trial_seed ^ mix(purpose.tag())))
}
