use netgame_encounter::{EncounterSim, HEADING_CANDIDATES_DEG};
use netgame_experiments::*;

#[test]
fn best_candidate_rule() {
    assert_eq!(best_candidate(&[1.0, 3.0, 2.0]), 1);
    assert_eq!(best_candidate(&[2.0, 2.0, 2.0, 2.0, 2.0]), 0);
    assert_eq!(best_candidate(&[1.0, 5.0, 5.0]), 1);
    assert_eq!(best_candidate(&[f64::NAN, 1.0, 0.5]), 1);
    assert_eq!(best_candidate(&[0.0, f64::NAN, 0.5]), 2);
    assert_eq!(best_candidate(&[f64::NAN, f64::NAN]), 0);
}

/// A horizontal-mode simulation paused at its first heading decision, with
/// valid rollouts for at least two candidates.
fn paused(cfg: &Config) -> (EncounterSim, SearchResult) {
    (0..200u64)
        .find_map(|seed| {
            let mut sim = EncounterSim::new(cfg.encounter, seed).ok()?;
            if !sim.run_until_heading_decision() {
                return None;
            }
            let r = horizontal_ra_search(&sim, 6, 0.1).ok()?;
            (r.candidates.iter().filter(|c| c.valid > 0).count() >= 2).then_some((sim, r))
        })
        .expect("some encounter reaches a heading decision")
}

#[test]
fn search_picks_the_best_mean() {
    let mut cfg = Config::default();
    cfg.set("sim.mode", "horizontal").unwrap();
    let (sim, r) = paused(&cfg);
    assert_eq!(r.candidates.len(), HEADING_CANDIDATES_DEG.len());
    for (c, deg) in r.candidates.iter().zip(HEADING_CANDIDATES_DEG) {
        assert_eq!(c.rate_deg, deg);
        assert_eq!(c.valid + c.discarded + c.failed, 6);
    }
    let means: Vec<f64> = r.candidates.iter().map(|c| c.mean_f).collect();
    assert_eq!(r.chosen, best_candidate(&means));
    assert!(means.iter().all(|m| !(m > &means[r.chosen])));
    assert_eq!(r.rate(), HEADING_CANDIDATES_DEG[r.chosen].to_radians());
    // Common rollout seeds make the search reproducible.
    assert_eq!(
        format!("{:?}", horizontal_ra_search(&sim, 6, 0.1).unwrap()),
        format!("{r:?}")
    );
    assert!(horizontal_ra_search(&sim, 0, 0.1).is_err());
}

#[test]
fn comparison_pairs_the_same_encounters() {
    let mut cfg = Config::default();
    cfg.set("run.rollouts", "3").unwrap();
    let c = compare_horizontal(&cfg, 12, 5, RunOptions::default()).unwrap();
    for (a, b) in c.search.outcomes.iter().zip(&c.baseline.outcomes) {
        assert_eq!(a.seed, b.seed);
        assert_eq!(a.t_target, b.t_target);
    }
    assert!(
        c.paired
            <= c.search
                .manifest
                .completed
                .min(c.baseline.manifest.completed)
    );
    assert!(c.difference_ci.0 <= c.mean_difference && c.mean_difference <= c.difference_ci.1);
    assert_eq!(c.edges.len(), QUINTILE_EDGES.len());
    for w in c.edges.windows(2) {
        assert!(w[0].edge <= w[1].edge);
    }
    for e in &c.edges {
        assert_eq!(e.dominates(), e.search_cdf <= e.baseline_cdf);
    }
}
