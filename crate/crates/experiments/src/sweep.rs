use std::time::Duration;

use netgame_encounter::{run_encounter, MaintainHeading, OutcomeRecord};

use crate::batch::{encounter_seed, RunManifest, RunOptions};
use crate::config::Config;
use crate::error::ExperimentError;
use crate::exec::map_indexed;
use crate::horizontal::HorizontalSearch;
use crate::seed::point_seed;
use crate::stats::{spearman, Correlation};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// A configuration key, e.g. `noise.M_w`.
    pub param: String,
    pub values: Vec<f64>,
    pub encounters: usize,
    pub root_seed: u64,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    /// Root seed of this point's batch.
    pub seed: u64,
    pub manifest: RunManifest,
    pub outcomes: Vec<OutcomeRecord>,
}

/// One batch per grid value, seeded by [`point_seed`]. All encounters of
/// all points share one work queue.
pub fn run_sweep(
    cfg: &Config,
    spec: &SweepSpec,
    opts: RunOptions,
) -> Result<Vec<SweepPoint>, ExperimentError> {
    if !Config::has_key(&spec.param) {
        return Err(ExperimentError::UnknownKey(spec.param.clone()));
    }
    if spec.values.is_empty() || spec.encounters == 0 {
        return Err(ExperimentError::InvalidRun(
            "a sweep needs at least one value and one encounter per point".into(),
        ));
    }
    let configs = spec
        .values
        .iter()
        .map(|v| {
            let mut c = *cfg;
            c.set(&spec.param, &v.to_string())?;
            c.validate()?;
            Ok(c)
        })
        .collect::<Result<Vec<Config>, ExperimentError>>()?;
    let seeds: Vec<u64> = (0..configs.len())
        .map(|p| point_seed(spec.root_seed, p))
        .collect();
    let n = spec.encounters;
    let mut flat = map_indexed(configs.len() * n, opts.workers, |j| {
        let (p, i) = (j / n, j % n);
        let c = &configs[p];
        let seed = encounter_seed(seeds[p], i);
        if c.encounter.horizontal {
            run_encounter(
                &c.encounter,
                seed,
                &HorizontalSearch::from_settings(&c.run),
                opts.trajectories,
            )
        } else {
            run_encounter(&c.encounter, seed, &MaintainHeading, opts.trajectories)
        }
    })
    .into_iter();
    let mut points = Vec::with_capacity(configs.len());
    for (p, c) in configs.iter().enumerate() {
        let outcomes = flat.by_ref().take(n).collect::<Result<Vec<_>, _>>()?;
        let busy: Duration = outcomes.iter().map(|o| o.wall_time).sum();
        let manifest = RunManifest::summarize(c, seeds[p], &outcomes, busy)?;
        points.push(SweepPoint {
            value: spec.values[p],
            seed: seeds[p],
            manifest,
            outcomes,
        });
    }
    Ok(points)
}

/// Rank correlation between the swept value and the welfare of every valid
/// encounter, pooled over the grid.
pub fn sweep_trend(points: &[SweepPoint]) -> Correlation {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for p in points {
        for o in p.outcomes.iter().filter(|o| o.is_valid()) {
            x.push(p.value);
            y.push(o.welfare);
        }
    }
    spearman(&x, &y)
}
