//! One seeded trial in detail: where the nodes are, what each of them
//! receives in the front-haul slot and what every policy achieves.
//!
//!     cargo run --example single_trial -- [seed] [index]

use dmimo::{run_trial, ScenarioConfig};

fn main() -> dmimo::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let seed = args.next().flatten().unwrap_or(7);
    let index = args.next().flatten().unwrap_or(0);
    let cfg = ScenarioConfig {
        nodes: 6,
        ..ScenarioConfig::default()
    };
    let trial = run_trial(&cfg, seed, index)?;

    let rates = &trial.phase1().expect("nodes present").node_rates;
    println!(
        "{:>4} {:>9} {:>9} {:>7} {:>12}",
        "node", "x [m]", "y [m]", "h [m]", "rate [b/Hz]"
    );
    for (i, (n, r)) in trial.nodes.iter().zip(rates).enumerate() {
        println!("{i:>4} {:>9.1} {:>9.1} {:>7.1} {r:>12.3}", n.x, n.y, n.height);
    }
    println!("baseline: {:.3} b/s/Hz", trial.phase2.c_baseline / cfg.b2);
    for o in &trial.policies {
        println!(
            "{:>6}: C1 {:.3}, nodes {:?}, C2 {:.3} b/s/Hz, T2 {:.3} s, gain {:.2}",
            o.phase1.policy.name(),
            o.phase1.c1 / cfg.b1,
            o.phase1.participating,
            o.phase2.c2 / cfg.b2,
            o.timing.t2,
            o.timing.gain_ratio
        );
    }
    Ok(())
}
