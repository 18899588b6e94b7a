//! Two-slot operation with 10 nodes: access-slot time T2 and the bits
//! delivered against the time-corrected baseline, for each front-haul policy.
//! The last two columns use the slot time implied by the mean capacities.
//!
//!     cargo run --release --example combined_timing -- [trials]

use dmimo::{run_sweep, ScenarioConfig, SweepAxis};

fn main() -> dmimo::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let cfg = ScenarioConfig {
        nodes: 10,
        ..ScenarioConfig::default()
    };
    let distances = [200.0, 400.0, 600.0, 800.0, 1000.0];
    let table = run_sweep(&cfg, SweepAxis::Distance, &distances, trials, 1)?;

    for policy in ["min", "median", "max"] {
        println!("front-haul rate: {policy}");
        println!(
            "  {:>8} {:>10} {:>16} {:>16} {:>12} {:>14}",
            "d [m]", "T2 [s]", "D-MIMO [b/Hz]", "baseline [b/Hz]", "mean ratio", "ratio of means"
        );
        for p in &table.points {
            let t2 = p.metric(&format!("t2_{policy}")).unwrap().mean;
            let bits = p.metric(&format!("dmimo_bits_{policy}")).unwrap().mean / cfg.b1;
            let base = p.metric(&format!("baseline_bits_{policy}")).unwrap().mean / cfg.b1;
            let ratio = p.metric(&format!("gain_ratio_{policy}")).unwrap().mean;
            let t2_avg = p.derived(&format!("t2_avg_{policy}")).unwrap().value;
            let gain = p.derived(&format!("combined_gain_{policy}")).unwrap().value;
            println!(
                "  {:>8} {:>10.4} {:>16.4} {:>16.4} {:>12.3} {:>10.4} {:>10.3}",
                p.value, t2, bits, base, ratio, t2_avg, gain
            );
        }
    }
    Ok(())
}
