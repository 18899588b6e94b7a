//! Phase-2 capacity and relative gain over the BS-only baseline versus the
//! BS-UE distance, for 5, 10 and 20 nodes.
//!
//!     cargo run --release --example phase2_gain -- [trials]

use dmimo::{run_sweep, ScenarioConfig, SweepAxis};

fn main() -> dmimo::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let distances = [200.0, 400.0, 600.0, 800.0, 1000.0];
    for nodes in [5, 10, 20] {
        let cfg = ScenarioConfig {
            nodes,
            ..ScenarioConfig::default()
        };
        let table = run_sweep(&cfg, SweepAxis::Distance, &distances, trials, 1)?;
        println!("U = {nodes}");
        println!(
            "  {:>8} {:>12} {:>12} {:>10} {:>14}",
            "d [m]", "C2 [b/s/Hz]", "CB [b/s/Hz]", "C2/CB", "mean(C2/CB)"
        );
        for p in &table.points {
            let c2 = p.metric("c2").unwrap().mean / cfg.b2;
            let cb = p.metric("c_baseline").unwrap().mean / cfg.b2;
            let gain = p.derived("phase2_gain").unwrap();
            let per_trial = p.metric("relative_gain").unwrap();
            println!(
                "  {:>8} {:>12.4} {:>12.4} {:>10.3} {:>14.3}",
                p.value, c2, cb, gain.value, per_trial.mean
            );
        }
    }
    Ok(())
}
