use netgame_encounter::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn aircraft(x: f64, y: f64, z: f64, theta: f64, f: f64, z_dot: f64) -> AircraftState {
    AircraftState {
        x,
        y,
        z,
        theta,
        theta_dot: 0.0,
        z_dot,
        f,
        phi_c: 0.0,
        z_dot_c: z_dot,
        f_c: f,
    }
}

fn world(a: AircraftState, b: AircraftState) -> WorldState {
    WorldState {
        aircraft: [a, b],
        ..Default::default()
    }
}

fn obs(r_h: f64, r_h_dot: f64, h_dot: f64, h: f64, h_i: f64) -> TcasObservation {
    TcasObservation {
        r_h,
        r_h_dot,
        h_dot,
        h,
        h_i,
        coincident: false,
    }
}

const UP: TcasIntent = TcasIntent::Issued(Sense::Up);
const DOWN: TcasIntent = TcasIntent::Issued(Sense::Down);

#[test]
fn exact_observation_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = world(
        aircraft(0.0, 0.0, 4000.0, 0.0, 300.0, 0.0),
        aircraft(3000.0, 4000.0, 5000.0, 1.0, 300.0, 0.0),
    );
    let o = tcas_observe(&s, 0, 0.0, &mut rng);
    assert_eq!((o.r_h, o.h, o.h_i), (5000.0, 1000.0, 4000.0));

    let s = world(
        aircraft(0.0, 0.0, 5000.0, 0.0, 100.0, 0.0),
        aircraft(1000.0, 0.0, 5000.0, std::f64::consts::PI, 100.0, 0.0),
    );
    let o = tcas_observe(&s, 0, 0.0, &mut rng);
    assert!((o.r_h_dot + 200.0).abs() < 1e-9, "{}", o.r_h_dot);
    assert!(!o.coincident);

    let s = world(
        aircraft(0.0, 0.0, 5000.0, 0.0, 300.0, -10.0),
        aircraft(9000.0, 0.0, 5500.0, 2.0, 300.0, -10.0),
    );
    assert_eq!(tcas_observe(&s, 1, 0.0, &mut rng).h_dot, 0.0);
}

#[test]
fn coincident_aircraft_flag_zero_range_rate() {
    let s = world(
        aircraft(10.0, 20.0, 5000.0, 0.0, 300.0, 0.0),
        aircraft(10.0, 20.0, 5300.0, 2.0, 250.0, 0.0),
    );
    let o = tcas_exact(&s, 0);
    assert!(o.coincident);
    assert_eq!((o.r_h, o.r_h_dot), (0.0, 0.0));
}

#[test]
fn noisy_observation_has_configured_spread() {
    let s = world(
        aircraft(0.0, 0.0, 8000.0, 0.3, 350.0, 5.0),
        aircraft(20000.0, 1000.0, 8200.0, 3.0, 400.0, -5.0),
    );
    let exact = tcas_exact(&s, 0).to_array();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 50_000;
    let mut sq = [0.0; 5];
    for _ in 0..n {
        let o = tcas_observe(&s, 0, 2.0, &mut rng).to_array();
        for k in 0..5 {
            sq[k] += (o[k] - exact[k]).powi(2);
        }
    }
    for k in 0..5 {
        let sd = (sq[k] / n as f64).sqrt();
        let want = 2.0 * TCAS_NOISE_SIGMA[k];
        assert!(
            (sd / want - 1.0).abs() < 0.02,
            "component {k}: {sd} vs {want}"
        );
    }
}

#[test]
fn far_apart_geometry_gives_no_advisory() {
    let p = TcasParams::default();
    let s = world(
        aircraft(0.0, 0.0, 5000.0, 0.0, 300.0, 0.0),
        aircraft(60000.0, 0.0, 9000.0, 0.0, 300.0, 0.0),
    );
    let o = tcas_exact(&s, 0);
    assert_eq!(
        mini_tcas(&o, TcasIntent::None, TcasIntent::None, &p),
        ResolutionAdvisory::None
    );
    assert_eq!(
        mini_tcas(
            &obs(50000.0, -400.0, 0.0, 4000.0, 5000.0),
            TcasIntent::None,
            TcasIntent::None,
            &p
        ),
        ResolutionAdvisory::None
    );
}

#[test]
fn golden_trace_descends_at_42() {
    // tau = 10 s; a 25 ft/s descent gains 86.18 ft, leaving 136.18 ft < 400.
    let p = TcasParams::default();
    let o = obs(3000.0, -300.0, 0.0, 50.0, 10000.0);
    assert_eq!(
        mini_tcas(&o, TcasIntent::None, TcasIntent::None, &p),
        ResolutionAdvisory::Descend42
    );
    let d = p.displacement(10.0, 25.0);
    assert!((d - 86.180124223602).abs() < 1e-9, "{d}");
}

#[test]
fn wide_margin_gives_weak_advisory_and_level_when_others_blocked() {
    let p = TcasParams::default();
    // tau = 26.7 s: a 25 ft/s climb gains about 503 ft above a 50 ft CPA gap.
    let o = obs(8000.0, -300.0, 0.0, -50.0, 10000.0);
    assert_eq!(
        mini_tcas(&o, TcasIntent::None, TcasIntent::None, &p),
        ResolutionAdvisory::Climb25
    );
    assert_eq!(
        mini_tcas(&o, TcasIntent::None, UP, &p),
        ResolutionAdvisory::Descend25
    );
    let low = obs(8000.0, -300.0, 0.0, -50.0, 900.0);
    assert_eq!(
        mini_tcas(&low, TcasIntent::None, UP, &p),
        ResolutionAdvisory::Level
    );
}

#[test]
fn advisory_in_progress_keeps_its_sense() {
    let p = TcasParams::default();
    let o = obs(8000.0, -300.0, 0.0, -50.0, 10000.0);
    assert_eq!(
        mini_tcas(&o, DOWN, TcasIntent::None, &p).sense(),
        Some(Sense::Down)
    );
    // A blocked own sense is dropped rather than conflicting.
    assert_eq!(mini_tcas(&o, DOWN, DOWN, &p), ResolutionAdvisory::Climb25);
}

#[test]
fn mini_tcas_is_deterministic() {
    let p = TcasParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let o = random_obs(&mut rng);
        let (a, b) = (random_intent(&mut rng), random_intent(&mut rng));
        assert_eq!(mini_tcas(&o, a, b, &p), mini_tcas(&o, a, b, &p));
    }
}

fn random_obs<R: Rng>(rng: &mut R) -> TcasObservation {
    obs(
        rng.random_range(0.0..12000.0),
        rng.random_range(-900.0..300.0),
        rng.random_range(-80.0..80.0),
        rng.random_range(-1500.0..1500.0),
        rng.random_range(0.0..40000.0),
    )
}

fn random_intent<R: Rng>(rng: &mut R) -> TcasIntent {
    TcasIntent::ALL[rng.random_range(0..4)]
}

fn conflicts(ra: ResolutionAdvisory, intruder: TcasIntent) -> bool {
    intruder.sense().is_some() && ra.sense() == intruder.sense()
}

#[test]
fn coordination_safety_on_random_inputs() {
    let p = TcasParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut issued = 0;
    for _ in 0..100_000 {
        let o = random_obs(&mut rng);
        let (own, intruder) = (random_intent(&mut rng), random_intent(&mut rng));
        let ra = mini_tcas(&o, own, intruder, &p);
        issued += ra.is_some() as usize;
        assert!(
            !conflicts(ra, intruder),
            "{o:?} own {own:?} intruder {intruder:?} -> {ra}"
        );
    }
    assert!(
        issued > 10_000,
        "only {issued} advisories; inputs too benign"
    );
}

proptest! {
    #[test]
    fn coordination_safety(
        r in 0.0..20000.0f64, rdot in -1000.0..500.0f64, hdot in -100.0..100.0f64,
        h in -2000.0..2000.0f64, hi in 0.0..40000.0f64, own in 0usize..4, intruder in 0usize..4,
        dmod in 1000.0..6000.0f64, zthr in 200.0..1200.0f64,
    ) {
        let p = TcasParams { dmod, zthr, ..TcasParams::default() };
        let ra = mini_tcas(&obs(r, rdot, hdot, h, hi), TcasIntent::ALL[own], TcasIntent::ALL[intruder], &p);
        prop_assert!(!conflicts(ra, TcasIntent::ALL[intruder]));
    }

    #[test]
    fn zero_noise_is_exact(
        x in -1e5..1e5f64, y in -1e5..1e5f64, z in 0.0..3e4f64, th in -7.0..7.0f64, f in 100.0..600.0f64,
        x2 in -1e5..1e5f64, y2 in -1e5..1e5f64, z2 in 0.0..3e4f64, th2 in -7.0..7.0f64, f2 in 100.0..600.0f64,
        zd in -50.0..50.0f64, zd2 in -50.0..50.0f64, seed in 0u64..1000,
    ) {
        let s = world(aircraft(x, y, z, th, f, zd), aircraft(x2, y2, z2, th2, f2, zd2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = tcas_observe(&s, 0, 0.0, &mut rng);
        let r = (x2 - x).hypot(y2 - y);
        prop_assert!((o.r_h - r).abs() <= 1e-9 * r.max(1.0));
        prop_assert!((o.h - (z2 - z)).abs() <= 1e-9);
        prop_assert!((o.h_dot - (zd2 - zd)).abs() <= 1e-9);
        prop_assert_eq!(o.h_i, z);
        let rdot = ((x2 - x) * (f2 * th2.cos() - f * th.cos()) + (y2 - y) * (f2 * th2.sin() - f * th.sin())) / r;
        prop_assert!((o.r_h_dot - rdot).abs() <= 1e-9 * rdot.abs().max(1.0));
    }
}

#[test]
fn advisory_codes_round_trip() {
    for ra in ResolutionAdvisory::ALL {
        assert_eq!(ResolutionAdvisory::from_code(ra.code()), Some(ra));
    }
    assert_eq!(ResolutionAdvisory::from_code(6), None);
    let labels: Vec<String> = ResolutionAdvisory::ALL
        .iter()
        .map(|r| r.to_string())
        .collect();
    assert_eq!(labels, ["none", "-42", "-25", "0", "+25", "+42"]);
}

#[test]
fn reversal_and_strengthening_classification() {
    use ResolutionAdvisory::*;
    let f = ResolutionAdvisory::is_reversal_or_strengthening;
    assert!(f(Climb25, Climb42));
    assert!(f(Climb25, Descend25));
    assert!(f(Level, Climb25));
    assert!(!f(Climb42, Climb25));
    assert!(!f(Descend25, None));
    assert!(!f(Descend25, Descend25));
    assert!(!f(None, Climb42));
}
