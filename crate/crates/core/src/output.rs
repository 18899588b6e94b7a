//! Sweep CSV files and run manifests.
//!
//! CSV layout: the axis column, `trials`, then `<metric>_{mean,se,p05,p50,p95}`
//! for every metric in [`METRICS`] order, then `<name>` and `<name>_se` for
//! every statistic in [`DERIVED`]. Numbers use Rust's shortest round-trip decimal
//! form; undefined aggregates are empty cells.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::sweep::{Estimate, Summary, SweepAxis, SweepPoint, SweepTable, DERIVED, METRICS};

const STAT_SUFFIXES: [&str; 5] = ["mean", "se", "p05", "p50", "p95"];

pub fn csv_header(axis: SweepAxis) -> Vec<String> {
    let mut header = vec![axis.name().to_owned(), "trials".to_owned()];
    for m in METRICS {
        header.extend(STAT_SUFFIXES.iter().map(|s| format!("{m}_{s}")));
    }
    for d in DERIVED {
        header.push(d.name.to_owned());
        header.push(format!("{}_se", d.name));
    }
    header
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn point_record(p: &SweepPoint) -> Vec<String> {
    let mut row = vec![p.value.to_string(), p.trials.to_string()];
    for s in &p.metrics {
        let cells = match s {
            Some(s) => [s.mean, s.se, s.p05, s.p50, s.p95].map(|x| x.to_string()),
            None => Default::default(),
        };
        row.extend(cells);
    }
    for r in &p.derived {
        row.push(fmt_opt(r.map(|r| r.value)));
        row.push(fmt_opt(r.map(|r| r.se)));
    }
    row
}

/// Writes the table; a file left half-written by an error is removed.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    if table.points.is_empty() {
        return Err(Error::Sweep("cannot write an empty sweep table".to_owned()));
    }
    let write = || -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(csv_header(table.axis))?;
        for p in &table.points {
            w.write_record(point_record(p))?;
        }
        w.flush().map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    };
    write().inspect_err(|_| {
        let _ = std::fs::remove_file(path);
    })
}

fn parse_cell(path: &Path, cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse().map(Some).map_err(|_| Error::Parse {
        path: path.to_owned(),
        message: format!("not a number: `{cell}`"),
    })
}

/// Reads a file written by [`emit_csv`] back into sweep points.
pub fn read_csv(path: &Path) -> Result<(SweepAxis, Vec<SweepPoint>)> {
    let bad = |message: String| Error::Parse {
        path: path.to_owned(),
        message,
    };
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let axis: SweepAxis = header.first().ok_or_else(|| bad("empty header".into()))?.parse()?;
    if header != csv_header(axis) {
        return Err(bad("header does not match the sweep column layout".into()));
    }

    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let cells: Vec<Option<f64>> = rec.iter().map(|c| parse_cell(path, c)).collect::<Result<_>>()?;
        let value = cells[0].ok_or_else(|| bad("missing axis value".into()))?;
        let trials = rec[1].parse::<usize>().map_err(|e| bad(e.to_string()))?;
        let mut idx = 2;
        let mut metrics = Vec::with_capacity(METRICS.len());
        for _ in METRICS {
            let c = &cells[idx..idx + 5];
            idx += 5;
            metrics.push(match c {
                [Some(mean), Some(se), Some(p05), Some(p50), Some(p95)] => Some(Summary {
                    count: trials,
                    mean: *mean,
                    se: *se,
                    p05: *p05,
                    p50: *p50,
                    p95: *p95,
                }),
                [None, None, None, None, None] => None,
                _ => return Err(bad(format!("partially filled metric at column {idx}"))),
            });
        }
        let mut derived = Vec::with_capacity(DERIVED.len());
        for _ in DERIVED {
            derived.push(match (cells[idx], cells[idx + 1]) {
                (Some(value), Some(se)) => Some(Estimate { value, se }),
                (None, None) => None,
                _ => return Err(bad(format!("partially filled statistic at column {idx}"))),
            });
            idx += 2;
        }
        points.push(SweepPoint {
            value,
            trials,
            metrics,
            derived,
        });
    }
    Ok((axis, points))
}

/// One sweep recorded in a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub name: String,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub config: ScenarioConfig,
    pub output: PathBuf,
}

/// Everything needed to reproduce a run's output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch when the run started.
    pub timestamp: u64,
    pub master_seed: u64,
    pub trials_per_point: usize,
    pub sweeps: Vec<SweepRecord>,
}

impl RunManifest {
    pub fn new(master_seed: u64, trials_per_point: usize) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp,
            master_seed,
            trials_per_point,
            sweeps: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}
