use netgame_encounter::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state() -> WorldState {
    let a = AircraftState {
        x: 100.0,
        y: -200.0,
        z: 7000.0,
        theta: 0.4,
        theta_dot: 0.01,
        z_dot: 8.0,
        f: 350.0,
        phi_c: 0.1,
        z_dot_c: 8.0,
        f_c: 350.0,
    };
    let b = AircraftState {
        x: 20000.0,
        y: 3000.0,
        z: 7100.0,
        theta: 3.5,
        theta_dot: -0.02,
        z_dot: -4.0,
        f: 300.0,
        ..a
    };
    WorldState {
        aircraft: [a, b],
        ..Default::default()
    }
}

#[test]
fn zero_noise_view_is_exact() {
    let s = state();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = pilot_observe(&s, 0.0, &mut rng);
    assert_eq!(
        w.aircraft,
        [s.aircraft[0].observable(), s.aircraft[1].observable()]
    );
}

#[test]
fn heading_rate_is_never_corrupted() {
    let s = state();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let w = pilot_observe(&s, 3.0, &mut rng);
        assert_eq!(w.aircraft[0][4], 0.01);
        assert_eq!(w.aircraft[1][4], -0.02);
    }
}

#[test]
fn altitude_noise_has_sigma_20() {
    let s = state();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 100_000;
    let mut sq = 0.0;
    for _ in 0..n {
        let w = pilot_observe(&s, 1.0, &mut rng);
        sq += (w.aircraft[0][2] - 7000.0).powi(2);
    }
    let sd = (sq / n as f64).sqrt();
    assert!((sd / 20.0 - 1.0).abs() < 0.02, "{sd}");
}

#[test]
fn observation_density_is_an_indicator_on_heading_rate() {
    let s = state();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut w = pilot_observe(&s, 1.0, &mut rng).to_vector();
    assert!(pilot_observation_density(&w, &s, 1.0) > 0.0);
    w[4] += 1e-6;
    assert_eq!(pilot_observation_density(&w, &s, 1.0), 0.0);
}

#[test]
fn utility_examples() {
    let w = |a1, a2, a3| UtilityWeights {
        alpha1: a1,
        alpha2: a2,
        alpha3: a3,
        delta: 1.0,
    };
    assert_eq!(
        pilot_utility(&w(1.0, 0.0, 0.0), 0.0, 0.0, ResolutionAdvisory::None, 0.0),
        0.0
    );
    assert_eq!(
        pilot_utility(&w(0.0, 1.0, 0.0), 0.0, 0.0, ResolutionAdvisory::None, 25.0),
        -25.0
    );
    let u = pilot_utility(
        &UtilityWeights::default(),
        1000.0,
        0.0,
        ResolutionAdvisory::Climb25,
        10.0,
    );
    assert!((u - 31.043_773_896_576).abs() < 1e-6, "{u}");
}

#[test]
fn advisory_term_is_dropped_without_advisory() {
    let w = UtilityWeights::default();
    let with = pilot_utility(&w, 500.0, 3.0, ResolutionAdvisory::Level, 20.0);
    let without = pilot_utility(&w, 500.0, 3.0, ResolutionAdvisory::None, 20.0);
    assert!((without - with - 0.1 * 20.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn utility_decreases_with_deviation(d in 0.0..5000.0f64, z in -50.0..50.0f64, code in 1i64..6) {
        let w = UtilityWeights::default();
        let ra = ResolutionAdvisory::from_code(code).unwrap();
        let target = ra.rate().unwrap();
        // Moving the action away from both the current rate and the
        // advisory strictly lowers the utility.
        let grid: Vec<f64> = (0..=100).map(|k| -50.0 + k as f64).collect();
        for pair in grid.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a >= z.max(target) {
                prop_assert!(pilot_utility(&w, d, z, ra, b) < pilot_utility(&w, d, z, ra, a));
            }
            if b <= z.min(target) {
                prop_assert!(pilot_utility(&w, d, z, ra, a) < pilot_utility(&w, d, z, ra, b));
            }
        }
    }
}
