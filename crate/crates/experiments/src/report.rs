//! Files written after a run.
//!
//! `outcomes.csv` columns: seed, d_min, nmac, F, discarded, ra1, ra2,
//! action1, action2, t_ra1, t_ra2. Missing values are empty.
//! `manifest.txt` is `key = value` text. `histogram.csv` has columns
//! bin_low, bin_high, count over the welfare of the valid encounters.

use std::fs::{self, File};
use std::io;
use std::path::{Path, PathBuf};

use netgame_encounter::{write_trajectory_csv, OutcomeRecord};

use crate::batch::RunManifest;
use crate::error::ExperimentError;
use crate::stats::Histogram;
use crate::sweep::SweepPoint;

pub const OUTCOME_COLUMNS: [&str; 11] = [
    "seed",
    "d_min",
    "nmac",
    "F",
    "discarded",
    "ra1",
    "ra2",
    "action1",
    "action2",
    "t_ra1",
    "t_ra2",
];

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

pub fn write_outcomes_csv<W: io::Write>(
    outcomes: &[OutcomeRecord],
    w: W,
) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(OUTCOME_COLUMNS)?;
    for o in outcomes {
        let [p1, p2] = &o.pilots;
        out.write_record([
            o.seed.to_string(),
            o.d_min.to_string(),
            o.nmac.to_string(),
            o.welfare.to_string(),
            o.discarded.to_string(),
            p1.ra.to_string(),
            p2.ra.to_string(),
            opt(p1.action),
            opt(p2.action),
            opt(p1.t_ra),
            opt(p2.t_ra),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_histogram_csv<W: io::Write>(h: &Histogram, w: W) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["bin_low", "bin_high", "count"])?;
    for (k, c) in h.counts.iter().enumerate() {
        out.write_record([
            h.edges[k].to_string(),
            h.edges[k + 1].to_string(),
            c.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One row per grid point.
pub fn write_sweep_csv<W: io::Write>(
    param: &str,
    points: &[SweepPoint],
    w: W,
) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        param,
        "mean_F",
        "std_error",
        "ci_low",
        "ci_high",
        "completed",
        "discarded",
        "failed",
        "nmac",
        "seed",
    ])?;
    for p in points {
        let m = &p.manifest;
        out.write_record([
            p.value.to_string(),
            m.mean_f.to_string(),
            m.std_error.to_string(),
            m.ci.0.to_string(),
            m.ci.1.to_string(),
            m.completed.to_string(),
            m.discarded.to_string(),
            m.failed.to_string(),
            m.nmac.to_string(),
            p.seed.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn valid_welfare(outcomes: &[OutcomeRecord]) -> Vec<f64> {
    outcomes
        .iter()
        .filter(|o| o.is_valid())
        .map(|o| o.welfare)
        .collect()
}

/// Writes `outcomes.csv`, `manifest.txt` and `histogram.csv` into `dir`,
/// plus `trajectories/<seed>.csv` for records that carry one.
pub fn emit_report(
    dir: &Path,
    manifest: Option<&RunManifest>,
    outcomes: &[OutcomeRecord],
    bins: usize,
) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("outcomes.csv");
    write_outcomes_csv(outcomes, File::create(&path)?)?;
    written.push(path);
    if let Some(m) = manifest {
        let path = dir.join("manifest.txt");
        fs::write(&path, m.to_text())?;
        written.push(path);
    }
    let path = dir.join("histogram.csv");
    write_histogram_csv(
        &Histogram::new(&valid_welfare(outcomes), bins),
        File::create(&path)?,
    )?;
    written.push(path);
    for o in outcomes {
        if let Some(t) = &o.trajectory {
            let tdir = dir.join("trajectories");
            fs::create_dir_all(&tdir)?;
            let path = tdir.join(format!("{}.csv", o.seed));
            write_trajectory_csv(t, io::BufWriter::new(File::create(&path)?))?;
            written.push(path);
        }
    }
    Ok(written)
}
