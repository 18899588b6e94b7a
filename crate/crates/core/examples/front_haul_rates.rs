//! Front-haul (BS to node) rates versus the radius of the node cluster:
//! the minimum, lower-median and maximum node rate for 5, 10 and 20 nodes.
//!
//!     cargo run --release --example front_haul_rates -- [trials]

use dmimo::{run_sweep, ScenarioConfig, SweepAxis};

fn main() -> dmimo::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let radii = [10.0, 25.0, 50.0, 100.0, 150.0, 200.0];
    for nodes in [5, 10, 20] {
        let cfg = ScenarioConfig {
            nodes,
            ..ScenarioConfig::default()
        };
        let table = run_sweep(&cfg, SweepAxis::Radius, &radii, trials, 1)?;
        println!("U = {nodes}, rates in b/s/Hz");
        println!("  {:>6} {:>9} {:>9} {:>9}", "R [m]", "min", "median", "max");
        for p in &table.points {
            let rate = |m: &str| p.metric(m).unwrap().mean / cfg.b1;
            println!(
                "  {:>6} {:>9.3} {:>9.3} {:>9.3}",
                p.value,
                rate("c1_min"),
                rate("c1_median"),
                rate("c1_max")
            );
        }
    }
    Ok(())
}
