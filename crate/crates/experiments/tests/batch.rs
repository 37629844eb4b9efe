use netgame_encounter::OutcomeRecord;
use netgame_experiments::*;

fn canon(o: &[OutcomeRecord]) -> Vec<String> {
    o.iter().map(OutcomeRecord::canonical).collect()
}

fn opts(workers: usize) -> RunOptions {
    RunOptions {
        workers: Some(workers),
        trajectories: false,
    }
}

/// First root seed whose single encounter is valid.
fn valid_single(cfg: &Config) -> (u64, Batch) {
    (0..100)
        .find_map(|s| run_batch(cfg, 1, s, opts(1)).ok().map(|b| (s, b)))
        .expect("a valid encounter")
}

#[test]
fn single_encounter_mean_is_its_welfare() {
    let (_, b) = valid_single(&Config::default());
    let m = &b.manifest;
    assert_eq!((m.encounters, m.completed), (1, 1));
    assert_eq!(m.mean_f, b.outcomes[0].welfare);
    assert_eq!(m.ci, (m.mean_f, m.mean_f));
}

#[test]
fn worker_count_does_not_change_results() {
    let cfg = Config::default();
    let a = run_batch(&cfg, 24, 3, opts(1)).unwrap();
    let b = run_batch(&cfg, 24, 3, opts(3)).unwrap();
    let c = run_batch(&cfg, 24, 3, RunOptions::default()).unwrap();
    assert_eq!(canon(&a.outcomes), canon(&b.outcomes));
    assert_eq!(canon(&a.outcomes), canon(&c.outcomes));
    let strip = |m: &RunManifest| RunManifest {
        wall_time: Default::default(),
        ..m.clone()
    };
    assert_eq!(strip(&a.manifest), strip(&b.manifest));
}

#[test]
fn outcomes_follow_encounter_seeds() {
    let b = run_batch(&Config::default(), 10, 42, opts(1)).unwrap();
    for (i, o) in b.outcomes.iter().enumerate() {
        assert_eq!(o.seed, encounter_seed(42, i));
    }
    let m = &b.manifest;
    assert_eq!(m.completed + m.discarded + m.failed, 10);
    assert!(m.ci.0 <= m.mean_f && m.mean_f <= m.ci.1);
}

#[test]
fn manifest_text_parses_back_into_the_config() {
    let mut cfg = Config::default();
    cfg.set("tcas.DMOD", "4200").unwrap();
    let (_, b) = valid_single(&cfg);
    let text = b.manifest.to_text();
    let config_part: String = text
        .lines()
        .filter(|l| !l.starts_with("result."))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(Config::parse(&config_part).unwrap(), cfg);
    assert!(text.contains("result.mean_F = "));
}

#[test]
fn single_point_sweep_equals_a_batch() {
    let cfg = Config::default();
    let spec = SweepSpec {
        param: "tcas.DMOD".into(),
        values: vec![3500.0],
        encounters: 12,
        root_seed: 9,
    };
    let points = run_sweep(&cfg, &spec, opts(1)).unwrap();
    assert_eq!(points.len(), 1);
    let b = run_batch(&cfg, 12, point_seed(9, 0), opts(1)).unwrap();
    assert_eq!(points[0].seed, point_seed(9, 0));
    assert_eq!(canon(&points[0].outcomes), canon(&b.outcomes));
    assert_eq!(points[0].manifest.mean_f, b.manifest.mean_f);
}

#[test]
fn sweep_points_get_their_own_seeds_and_values() {
    let cfg = Config::default();
    let spec = SweepSpec {
        param: "utility.alpha1".into(),
        values: vec![1.0, 10.0],
        encounters: 6,
        root_seed: 2,
    };
    let points = run_sweep(&cfg, &spec, RunOptions::default()).unwrap();
    assert_ne!(points[0].seed, points[1].seed);
    assert_eq!(
        points[1]
            .manifest
            .config
            .iter()
            .find(|(k, _)| k == "utility.alpha1")
            .unwrap()
            .1,
        "10"
    );
    let t = sweep_trend(&points);
    assert_eq!(
        t.n,
        points.iter().map(|p| p.manifest.completed).sum::<usize>()
    );
}

#[test]
fn sweep_rejects_bad_specs() {
    let cfg = Config::default();
    let mut spec = SweepSpec {
        param: "no.such".into(),
        values: vec![1.0],
        encounters: 1,
        root_seed: 1,
    };
    assert!(matches!(
        run_sweep(&cfg, &spec, opts(1)),
        Err(ExperimentError::UnknownKey(_))
    ));
    spec.param = "tcas.DMOD".into();
    spec.values.clear();
    assert!(matches!(
        run_sweep(&cfg, &spec, opts(1)),
        Err(ExperimentError::InvalidRun(_))
    ));
    spec.values = vec![-1.0];
    assert_eq!(run_sweep(&cfg, &spec, opts(1)).unwrap_err().exit_code(), 1);
}

#[test]
fn batch_errors() {
    let cfg = Config::default();
    assert!(matches!(
        run_batch(&cfg, 0, 1, opts(1)),
        Err(ExperimentError::InvalidRun(_))
    ));
    let mut bad = cfg;
    bad.set("generator.max_attempts", "0").unwrap();
    assert!(run_batch(&bad, 1, 1, opts(1)).is_err());
}

#[test]
fn failure_threshold_is_enforced() {
    let (_, b) = valid_single(&Config::default());
    let mut m = b.manifest.clone();
    m.check_failures(0.0).unwrap();
    m.encounters = 10;
    m.failed = 2;
    assert!(m.check_failures(0.2).is_ok());
    let e = m.check_failures(0.1).unwrap_err();
    assert!(matches!(
        e,
        ExperimentError::FailureThreshold { failed: 2, .. }
    ));
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn sequential_fallback_matches_the_pool() {
    let sq = map_indexed(100, Some(1), |i| i * i);
    assert_eq!(sq, map_indexed(100, None, |i| i * i));
    assert_eq!(sq, map_indexed(100, Some(4), |i| i * i));
    assert!(map_indexed(0, None, |i| i).is_empty());
}
