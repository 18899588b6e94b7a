//! Writes the CSV files for the standard figures plus a manifest, then
//! regenerates them from the manifest and checks they match byte for byte.
//!
//!     cargo run --release --example figure_data -- [out_dir] [trials]

use std::path::PathBuf;

use dmimo::figures::{canonical_sweeps, rerun, run_sweeps, MANIFEST_FILE};
use dmimo::output::read_csv;
use dmimo::ScenarioConfig;

fn main() -> dmimo::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "figure-data".to_owned()));
    let trials: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);

    let manifest = run_sweeps(
        canonical_sweeps(&ScenarioConfig::default()),
        trials,
        1,
        &out,
        MANIFEST_FILE,
    )?;
    for s in &manifest.sweeps {
        let (axis, points) = read_csv(&out.join(&s.output))?;
        println!("{:<10} {} points over {axis}", s.name, points.len());
    }

    let again = out.join("rerun");
    rerun(&manifest, &again)?;
    for s in &manifest.sweeps {
        let same = std::fs::read(out.join(&s.output)).ok() == std::fs::read(again.join(&s.output)).ok();
        println!("{:<10} rerun identical: {same}", s.name);
    }
    Ok(())
}
