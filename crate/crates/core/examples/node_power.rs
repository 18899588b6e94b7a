//! Capacity with and without a single node versus the node's transmit power,
//! UE at 1 km.
//!
//!     cargo run --release --example node_power -- [trials]

use dmimo::{run_sweep, ScenarioConfig, SweepAxis};

fn main() -> dmimo::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let cfg = ScenarioConfig {
        nodes: 1,
        d_bs_ue: 1000.0,
        ..ScenarioConfig::default()
    };
    let offsets: Vec<f64> = (-24..=0).step_by(3).map(f64::from).collect();
    let powers: Vec<f64> = offsets.iter().map(|o| cfg.p_bs + o).collect();
    let table = run_sweep(&cfg, SweepAxis::NodePower, &powers, trials, 1)?;

    println!(
        "{:>12} {:>12} {:>14} {:>14} {:>10}",
        "offset [dB]", "p_node [dBm]", "with node", "BS only", "uplift"
    );
    for (offset, p) in offsets.iter().zip(&table.points) {
        let with = p.metric("c2").unwrap().mean / cfg.b2;
        let base = p.metric("c_baseline").unwrap().mean / cfg.b2;
        println!(
            "{:>12} {:>12} {:>14.4} {:>14.4} {:>10.4}",
            offset,
            p.value,
            with,
            base,
            with - base
        );
    }
    Ok(())
}
