//! Monte Carlo capacity simulator for wireless mobile distributed MIMO.
//!
//! A base station and a set of mobile D-MIMO nodes form one distributed
//! antenna array. In the front-haul slot the BS broadcasts the user's data to
//! the nodes ([`phase1`]); in the access slot the BS and the nodes precode
//! with zero-forcing and transmit coherently to the UE ([`phase2`]). The
//! [`timing`] module charges the second slot against a BS-only baseline, and
//! [`experiment`] / [`sweep`] run seeded trials over UMi channels
//! ([`channel`], [`scenario`]).
//!
//! ```
//! use dmimo::{run_trial, ScenarioConfig};
//!
//! let cfg = ScenarioConfig { nodes: 5, ..ScenarioConfig::default() };
//! let trial = run_trial(&cfg, 42, 0).unwrap();
//! assert!(trial.phase2.c2 > trial.phase2.c_baseline);
//! ```

pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod figures;
pub mod linalg;
pub mod output;
pub mod phase1;
pub mod phase2;
pub mod rng;
pub mod scenario;
pub mod sweep;
pub mod timing;

pub use config::{parse_config, Normalization, Phase1Policy, PlacementMode, ScenarioConfig};
pub use error::{Error, LinalgError, Result};
pub use experiment::{run_trial, TrialRecord};
pub use linalg::ComplexMatrix;
pub use sweep::{run_sweep, SweepAxis, SweepTable};
