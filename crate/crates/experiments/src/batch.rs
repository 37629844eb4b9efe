use std::fmt::Write as _;
use std::time::{Duration, Instant};

use netgame_encounter::{run_encounter, HorizontalAdvisor, MaintainHeading, OutcomeRecord};

use crate::config::Config;
use crate::error::ExperimentError;
use crate::exec::map_indexed;
use crate::horizontal::HorizontalSearch;
use crate::seed::derive_seed;
use crate::stats::{bootstrap_ci, mean, std_error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets the pool decide.
    pub workers: Option<usize>,
    /// Keep every encounter's trajectory in its record.
    pub trajectories: bool,
}

/// Aggregate of one batch. Everything except `wall_time` is determined by
/// the configuration and the root seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: Vec<(String, String)>,
    pub root_seed: u64,
    pub encounters: usize,
    /// Neither discarded nor failed; these make up the statistics.
    pub completed: usize,
    pub discarded: usize,
    pub failed: usize,
    /// NMACs among the completed encounters.
    pub nmac: usize,
    pub mean_f: f64,
    pub std_error: f64,
    /// 95% percentile-bootstrap interval of the mean.
    pub ci: (f64, f64),
    pub wall_time: Duration,
}

impl RunManifest {
    pub fn summarize(
        cfg: &Config,
        root_seed: u64,
        outcomes: &[OutcomeRecord],
        wall_time: Duration,
    ) -> Result<Self, ExperimentError> {
        let valid: Vec<&OutcomeRecord> = outcomes.iter().filter(|o| o.is_valid()).collect();
        let failed = outcomes.iter().filter(|o| o.failure.is_some()).count();
        let discarded = outcomes.iter().filter(|o| o.discarded).count();
        if valid.is_empty() {
            return Err(ExperimentError::NoValidEncounters {
                total: outcomes.len(),
                failed,
                discarded,
            });
        }
        let f: Vec<f64> = valid.iter().map(|o| o.welfare).collect();
        Ok(RunManifest {
            config: cfg.resolved(),
            root_seed,
            encounters: outcomes.len(),
            completed: valid.len(),
            discarded,
            failed,
            nmac: valid.iter().filter(|o| o.nmac).count(),
            mean_f: mean(&f),
            std_error: std_error(&f),
            ci: bootstrap_ci(
                &f,
                cfg.run.bootstrap,
                0.95,
                derive_seed(root_seed, u64::MAX),
            ),
            wall_time,
        })
    }

    pub fn failure_fraction(&self) -> f64 {
        self.failed as f64 / self.encounters as f64
    }

    /// Fails when more encounters failed than `threshold` allows.
    pub fn check_failures(&self, threshold: f64) -> Result<(), ExperimentError> {
        if self.failure_fraction() > threshold {
            Err(ExperimentError::FailureThreshold {
                total: self.encounters,
                failed: self.failed,
                threshold,
            })
        } else {
            Ok(())
        }
    }

    /// Plain `key = value` text: the resolved configuration followed by the
    /// results under `result.`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(s, "{k} = {v}");
        }
        let _ = writeln!(s, "result.root_seed = {}", self.root_seed);
        let _ = writeln!(s, "result.encounters = {}", self.encounters);
        let _ = writeln!(s, "result.completed = {}", self.completed);
        let _ = writeln!(s, "result.discarded = {}", self.discarded);
        let _ = writeln!(s, "result.failed = {}", self.failed);
        let _ = writeln!(s, "result.nmac = {}", self.nmac);
        let _ = writeln!(s, "result.mean_F = {}", self.mean_f);
        let _ = writeln!(s, "result.std_error = {}", self.std_error);
        let _ = writeln!(s, "result.ci_low = {}", self.ci.0);
        let _ = writeln!(s, "result.ci_high = {}", self.ci.1);
        let _ = writeln!(
            s,
            "result.wall_time_s = {:.3}",
            self.wall_time.as_secs_f64()
        );
        s
    }
}

#[derive(Debug, Clone)]
pub struct Batch {
    pub manifest: RunManifest,
    pub outcomes: Vec<OutcomeRecord>,
}

/// Seed of encounter `index` in a batch rooted at `root`.
pub fn encounter_seed(root: u64, index: usize) -> u64 {
    derive_seed(root, index as u64)
}

/// Runs `n` encounters. In horizontal mode the second alerted aircraft gets
/// the advisory chosen by [`HorizontalSearch`].
pub fn run_batch(
    cfg: &Config,
    n: usize,
    root_seed: u64,
    opts: RunOptions,
) -> Result<Batch, ExperimentError> {
    if cfg.encounter.horizontal {
        run_batch_with(
            cfg,
            n,
            root_seed,
            opts,
            &HorizontalSearch::from_settings(&cfg.run),
        )
    } else {
        run_batch_with(cfg, n, root_seed, opts, &MaintainHeading)
    }
}

pub fn run_batch_with(
    cfg: &Config,
    n: usize,
    root_seed: u64,
    opts: RunOptions,
    advisor: &(dyn HorizontalAdvisor + Sync),
) -> Result<Batch, ExperimentError> {
    cfg.validate()?;
    if n == 0 {
        return Err(ExperimentError::InvalidRun(
            "a batch needs at least one encounter".into(),
        ));
    }
    let started = Instant::now();
    let outcomes = map_indexed(n, opts.workers, |i| {
        run_encounter(
            &cfg.encounter,
            encounter_seed(root_seed, i),
            advisor,
            opts.trajectories,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest::summarize(cfg, root_seed, &outcomes, started.elapsed())?;
    Ok(Batch { manifest, outcomes })
}
