//! The canonical sweep set and manifest-driven runs.
//!
//! [`canonical_sweeps`] lists the sweeps behind the four standard plots:
//! front-haul rates against radius, access-slot capacity against distance,
//! capacity against node power and the two-slot comparison against distance.
//! [`run_sweeps`] writes one CSV per sweep plus a manifest, and [`rerun`]
//! replays a manifest into another directory.

use std::path::Path;

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::output::{emit_csv, RunManifest, SweepRecord};
use crate::sweep::{run_sweep, SweepAxis};

pub const MANIFEST_FILE: &str = "manifest.json";

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

/// A sweep record writing `<name>.csv`.
pub fn sweep(name: &str, axis: SweepAxis, values: Vec<f64>, config: ScenarioConfig) -> SweepRecord {
    SweepRecord {
        name: name.to_owned(),
        axis,
        values,
        output: format!("{name}.csv").into(),
        config,
    }
}

/// Sweeps for the standard figures, built on top of `base`.
pub fn canonical_sweeps(base: &ScenarioConfig) -> Vec<SweepRecord> {
    let with_nodes = |nodes| ScenarioConfig { nodes, ..base.clone() };
    let mut out = Vec::new();
    for u in [5, 10, 20] {
        out.push(sweep(
            &format!("fig3_u{u}"),
            SweepAxis::Radius,
            grid(10.0, 200.0, 10.0),
            with_nodes(u),
        ));
    }
    for u in [0, 5, 10, 20] {
        out.push(sweep(
            &format!("fig4_u{u}"),
            SweepAxis::Distance,
            grid(100.0, 1000.0, 100.0),
            with_nodes(u),
        ));
    }
    let single = ScenarioConfig {
        nodes: 1,
        d_bs_ue: 1000.0,
        ..base.clone()
    };
    out.push(sweep(
        "fig5",
        SweepAxis::NodePower,
        grid(base.p_bs - 20.0, base.p_bs, 1.0),
        single,
    ));
    out.push(sweep(
        "fig7",
        SweepAxis::Distance,
        grid(100.0, 1000.0, 100.0),
        with_nodes(10),
    ));
    out
}

/// Runs every sweep, writing its CSV into `out_dir` and the manifest to
/// `out_dir/manifest_name` once all CSV files exist.
pub fn run_sweeps(
    sweeps: Vec<SweepRecord>,
    trials_per_point: usize,
    master_seed: u64,
    out_dir: &Path,
    manifest_name: &str,
) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(master_seed, trials_per_point);
    manifest.sweeps = sweeps;
    write_outputs(&manifest, out_dir)?;
    manifest.write(&out_dir.join(manifest_name))?;
    Ok(manifest)
}

/// Regenerates the CSV files of a manifest into `out_dir`.
/// Output paths in the manifest are taken relative to `out_dir`.
pub fn rerun(manifest: &RunManifest, out_dir: &Path) -> Result<()> {
    write_outputs(manifest, out_dir)
}

fn write_outputs(manifest: &RunManifest, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|source| crate::Error::Io {
        path: out_dir.to_owned(),
        source,
    })?;
    let mut written = Vec::new();
    let result = manifest.sweeps.iter().try_for_each(|s| {
        let table = run_sweep(
            &s.config,
            s.axis,
            &s.values,
            manifest.trials_per_point,
            manifest.master_seed,
        )?;
        let path = out_dir.join(&s.output);
        emit_csv(&table, &path)?;
        written.push(path);
        Ok(())
    });
    if result.is_err() {
        for path in written {
            let _ = std::fs::remove_file(path);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_set() {
        let sweeps = canonical_sweeps(&ScenarioConfig::default());
        let names: Vec<_> = sweeps.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(
            names,
            ["fig3_u5", "fig3_u10", "fig3_u20", "fig4_u0", "fig4_u5", "fig4_u10", "fig4_u20", "fig5", "fig7"]
        );
        let fig3 = &sweeps[0];
        assert_eq!(fig3.values.first(), Some(&10.0));
        assert_eq!(fig3.values.last(), Some(&200.0));
        let fig5 = &sweeps[7];
        assert_eq!(fig5.values.len(), 21);
        assert_eq!(fig5.values.last(), Some(&33.0));
        assert_eq!(fig5.config.nodes, 1);
    }

    #[test]
    fn rerun_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let sweeps = vec![sweep(
            "small",
            SweepAxis::Nodes,
            vec![0.0, 2.0],
            ScenarioConfig::default(),
        )];
        let m = run_sweeps(sweeps, 3, 8, &dir.path().join("a"), MANIFEST_FILE).unwrap();
        let read = RunManifest::read(&dir.path().join("a").join(MANIFEST_FILE)).unwrap();
        assert_eq!(read, m);
        rerun(&read, &dir.path().join("b")).unwrap();
        let a = std::fs::read(dir.path().join("a/small.csv")).unwrap();
        let b = std::fs::read(dir.path().join("b/small.csv")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn failed_run_leaves_no_csv() {
        let dir = tempfile::tempdir().unwrap();
        let sweeps = vec![
            sweep("ok", SweepAxis::Nodes, vec![1.0], ScenarioConfig::default()),
            sweep("bad", SweepAxis::Radius, vec![-1.0], ScenarioConfig::default()),
        ];
        assert!(run_sweeps(sweeps, 2, 0, dir.path(), MANIFEST_FILE).is_err());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
