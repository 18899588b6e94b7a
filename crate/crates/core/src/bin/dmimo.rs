use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dmimo::figures::{self, canonical_sweeps, MANIFEST_FILE};
use dmimo::output::RunManifest;
use dmimo::{parse_config, run_trial, Error, ScenarioConfig, SweepAxis};

#[derive(Parser)]
#[command(version, about = "Capacity simulator for two-phase mobile distributed MIMO")]
struct Cli {
    /// Parallel workers (defaults to the number of CPUs).
    #[arg(long, global = true, env = "DMIMO_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML scenario file; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and print its record as JSON.
    Trial {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and write a CSV plus `<out stem>.manifest.json`.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// R, U, d_bs_ue or p_node.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Run the canonical figure sweeps into a directory.
    Figures {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Regenerate the CSV files listed in a manifest.
    Rerun {
        manifest: PathBuf,
        /// Output directory; defaults to the manifest's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(common: &Common) -> dmimo::Result<ScenarioConfig> {
    let cfg = match &common.config {
        Some(path) => parse_config(path)?,
        None => ScenarioConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_text(path: &Path, text: &str) -> dmimo::Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_owned(),
        _ => PathBuf::from("."),
    }
}

fn run(cli: Cli) -> dmimo::Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Sweep(format!("cannot start {n} workers: {e}")))?;
    }
    match cli.command {
        Command::Trial { common, index, out } => {
            let cfg = load(&common)?;
            let record = run_trial(&cfg, common.seed, index)?;
            let json = serde_json::to_string_pretty(&record)? + "\n";
            match out {
                Some(path) => write_text(&path, &json)?,
                None => print!("{json}"),
            }
        }
        Command::Sweep {
            common,
            axis,
            values,
            trials,
            out,
        } => {
            let cfg = load(&common)?;
            let name = out
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Sweep(format!("bad output path {}", out.display())))?
                .to_owned();
            let mut record = figures::sweep(&name, axis, values, cfg);
            record.output = out.file_name().map(PathBuf::from).unwrap_or_default();
            let manifest_name = format!("{name}.manifest.json");
            figures::run_sweeps(vec![record], trials, common.seed, &parent_dir(&out), &manifest_name)?;
        }
        Command::Figures { common, trials, out } => {
            let cfg = load(&common)?;
            let m = figures::run_sweeps(canonical_sweeps(&cfg), trials, common.seed, &out, MANIFEST_FILE)?;
            for s in &m.sweeps {
                println!("{}", out.join(&s.output).display());
            }
        }
        Command::Rerun { manifest, out } => {
            let m = RunManifest::read(&manifest)?;
            let dir = out.unwrap_or_else(|| parent_dir(&manifest));
            figures::rerun(&m, &dir)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
