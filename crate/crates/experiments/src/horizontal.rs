//! Exhaustive search over horizontal advisories and its comparison with
//! always maintaining heading.

use netgame_encounter::{EncounterSim, HorizontalAdvisor, MaintainHeading, HEADING_CANDIDATES_DEG};

use crate::batch::{run_batch_with, Batch, RunOptions};
use crate::config::{Config, RunSettings};
use crate::error::ExperimentError;
use crate::seed::{derive_seed, rollout_seed};
use crate::stats::{bootstrap_ci, ecdf, mean, quantile};

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateStats {
    /// Heading rate, deg/s; positive turns left.
    pub rate_deg: f64,
    /// Mean welfare over the valid rollouts; NaN if there were none.
    pub mean_f: f64,
    pub valid: usize,
    pub discarded: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Index into `candidates` (and [`HEADING_CANDIDATES_DEG`]).
    pub chosen: usize,
    pub candidates: Vec<CandidateStats>,
}

impl SearchResult {
    /// The chosen heading rate, rad/s.
    pub fn rate(&self) -> f64 {
        self.candidates[self.chosen].rate_deg.to_radians()
    }
}

/// Completes the paused encounter `rollouts` times per candidate and picks
/// the candidate with the highest mean welfare. Rollout `r` uses the same
/// seed for every candidate. Ties keep the earlier candidate, so maintain
/// heading wins over turns and moderate turns over hard ones.
pub fn horizontal_ra_search(
    sim: &EncounterSim,
    rollouts: usize,
    failure_threshold: f64,
) -> Result<SearchResult, String> {
    if rollouts == 0 {
        return Err("at least one rollout per candidate is needed".into());
    }
    let mut candidates = Vec::with_capacity(HEADING_CANDIDATES_DEG.len());
    for &deg in &HEADING_CANDIDATES_DEG {
        let mut f = Vec::with_capacity(rollouts);
        let (mut discarded, mut failed) = (0, 0);
        for r in 0..rollouts {
            let o = sim
                .counterfactual(deg.to_radians(), rollout_seed(sim.seed(), r))
                .map_err(|e| e.to_string())?;
            if o.failure.is_some() {
                failed += 1;
            } else if o.discarded {
                discarded += 1;
            } else {
                f.push(o.welfare);
            }
        }
        if failed as f64 > failure_threshold * rollouts as f64 {
            return Err(format!(
                "{failed} of {rollouts} rollouts failed for {deg} deg/s"
            ));
        }
        candidates.push(CandidateStats {
            rate_deg: deg,
            mean_f: mean(&f),
            valid: f.len(),
            discarded,
            failed,
        });
    }
    let means: Vec<f64> = candidates.iter().map(|c| c.mean_f).collect();
    Ok(SearchResult {
        chosen: best_candidate(&means),
        candidates,
    })
}

/// Index of the largest mean. The first of equal means wins, and NaN (no
/// valid rollout) loses to any number.
pub fn best_candidate(means: &[f64]) -> usize {
    let mut chosen = 0;
    for (k, &m) in means.iter().enumerate() {
        let best = means[chosen];
        if m > best || (best.is_nan() && !m.is_nan()) {
            chosen = k;
        }
    }
    chosen
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizontalSearch {
    pub rollouts: usize,
    pub failure_threshold: f64,
}

impl HorizontalSearch {
    pub fn from_settings(run: &RunSettings) -> Self {
        HorizontalSearch {
            rollouts: run.rollouts,
            failure_threshold: run.failure_threshold,
        }
    }
}

impl HorizontalAdvisor for HorizontalSearch {
    fn advise(&self, sim: &EncounterSim, _aircraft: usize) -> Result<f64, String> {
        horizontal_ra_search(sim, self.rollouts, self.failure_threshold).map(|r| r.rate())
    }
}

/// Where the two welfare distributions stand at one quantile of the
/// baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEdge {
    pub p: f64,
    pub edge: f64,
    pub search_cdf: f64,
    pub baseline_cdf: f64,
}

impl QuantileEdge {
    /// At most as much search mass as baseline mass lies at or below the
    /// edge.
    pub fn dominates(&self) -> bool {
        self.search_cdf <= self.baseline_cdf
    }
}

/// Quantile levels of the edges compared: the lower edges of the five
/// quintile bins of the baseline.
pub const QUINTILE_EDGES: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];

#[derive(Debug, Clone)]
pub struct HorizontalComparison {
    pub search: Batch,
    pub baseline: Batch,
    /// Encounters valid under both policies.
    pub paired: usize,
    /// Mean of search minus baseline welfare over the paired encounters.
    pub mean_difference: f64,
    pub difference_ci: (f64, f64),
    pub edges: Vec<QuantileEdge>,
}

impl HorizontalComparison {
    /// The 95% interval of the paired difference lies above zero.
    pub fn search_better(&self) -> bool {
        self.difference_ci.0 > 0.0
    }

    pub fn dominated_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.dominates()).count()
    }
}

/// Runs the same `n` encounters in horizontal mode twice: with the
/// exhaustive search and with every aircraft maintaining heading.
pub fn compare_horizontal(
    cfg: &Config,
    n: usize,
    root_seed: u64,
    opts: RunOptions,
) -> Result<HorizontalComparison, ExperimentError> {
    let mut cfg = *cfg;
    cfg.encounter.horizontal = true;
    let search = run_batch_with(
        &cfg,
        n,
        root_seed,
        opts,
        &HorizontalSearch::from_settings(&cfg.run),
    )?;
    let baseline = run_batch_with(&cfg, n, root_seed, opts, &MaintainHeading)?;
    let diffs: Vec<f64> = search
        .outcomes
        .iter()
        .zip(&baseline.outcomes)
        .filter(|(a, b)| a.is_valid() && b.is_valid())
        .map(|(a, b)| a.welfare - b.welfare)
        .collect();
    if diffs.is_empty() {
        return Err(ExperimentError::NoValidEncounters {
            total: n,
            failed: search.manifest.failed + baseline.manifest.failed,
            discarded: search.manifest.discarded + baseline.manifest.discarded,
        });
    }
    let valid_f = |b: &Batch| {
        b.outcomes
            .iter()
            .filter(|o| o.is_valid())
            .map(|o| o.welfare)
            .collect::<Vec<_>>()
    };
    let (fs, fb) = (valid_f(&search), valid_f(&baseline));
    let mut sorted = fb.clone();
    sorted.sort_by(f64::total_cmp);
    let edges = QUINTILE_EDGES
        .iter()
        .map(|&p| {
            let edge = quantile(&sorted, p);
            QuantileEdge {
                p,
                edge,
                search_cdf: ecdf(&fs, edge),
                baseline_cdf: ecdf(&fb, edge),
            }
        })
        .collect();
    Ok(HorizontalComparison {
        paired: diffs.len(),
        mean_difference: mean(&diffs),
        difference_ci: bootstrap_ci(
            &diffs,
            cfg.run.bootstrap,
            0.95,
            derive_seed(root_seed, u64::MAX - 1),
        ),
        edges,
        search,
        baseline,
    })
}
