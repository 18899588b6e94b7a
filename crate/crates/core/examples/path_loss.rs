//! UMi street-canyon path loss against distance for the three link types of
//! the default scenario, with the LOS and NLOS' terms that feed the max rule.
//!
//!     cargo run --example path_loss

use dmimo::channel::{
    noise_power_dbm, umi_los_pathloss_db, umi_nlos_pathloss, umi_nlos_prime_db, LinkGeometry, PathLossModel,
};
use dmimo::ScenarioConfig;

fn main() -> dmimo::Result<()> {
    let cfg = ScenarioConfig::default();
    println!(
        "noise floor over {} MHz: {:.1} dBm",
        cfg.b2 / 1e6,
        noise_power_dbm(cfg.b2, cfg.nf)
    );
    let links = [
        ("BS -> node (h = 10 m)", cfg.bs_height, 10.0),
        ("BS -> UE", cfg.bs_height, cfg.ue_height),
        ("node (h = 10 m) -> UE", 10.0, cfg.ue_height),
    ];
    for (name, h_tx, h_rx) in links {
        println!("{name}");
        println!(
            "  {:>8} {:>8} {:>8} {:>8} {:>10}",
            "d2d [m]", "LOS", "NLOS'", "max", "simplified"
        );
        for d2d in [1.0, 10.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0] {
            let g = LinkGeometry::new(d2d, h_tx, h_rx, cfg.fc)?;
            println!(
                "  {:>8} {:>8.2} {:>8.2} {:>8.2} {:>10.2}",
                d2d,
                umi_los_pathloss_db(&g),
                umi_nlos_prime_db(&g),
                umi_nlos_pathloss(&g, PathLossModel::MaxRule).db,
                umi_nlos_pathloss(&g, PathLossModel::Simplified).db,
            );
        }
    }
    Ok(())
}
