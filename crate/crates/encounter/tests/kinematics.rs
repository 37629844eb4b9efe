use std::f64::consts::PI;

use netgame_encounter::*;
use proptest::prelude::*;

fn steady(theta: f64, f: f64, z_dot: f64) -> AircraftState {
    AircraftState {
        x: 0.0,
        y: 0.0,
        z: 5000.0,
        theta,
        theta_dot: 0.0,
        z_dot,
        f,
        phi_c: 0.0,
        z_dot_c: z_dot,
        f_c: f,
    }
}

const TAUS: FilterTimeConstants = FilterTimeConstants {
    theta_dot: 2.0,
    z_dot: 3.0,
    f: 5.0,
};

#[test]
fn straight_east() {
    let a = kinematics_step(&steady(0.0, 100.0, 0.0), 1.0, &TAUS);
    assert!((a.x - 100.0).abs() < 1e-9 && a.y.abs() < 1e-9);
    assert_eq!((a.z, a.theta), (5000.0, 0.0));
}

#[test]
fn straight_north() {
    let a = kinematics_step(&steady(PI / 2.0, 100.0, 0.0), 1.0, &TAUS);
    assert!(a.x.abs() < 1e-9 && (a.y - 100.0).abs() < 1e-9);
}

#[test]
fn vertical_rate_filter_uses_pre_update_rate() {
    let mut s = steady(0.0, 100.0, 0.0);
    s.z_dot_c = -25.0;
    let a = kinematics_step(&s, 1.0, &TAUS);
    assert!((a.z_dot + 25.0 / 3.0).abs() < 1e-9, "{}", a.z_dot);
    assert_eq!(a.z, 5000.0);
}

#[test]
fn sixty_steps_at_steady_commands() {
    let start = steady(0.7, 320.0, -12.0);
    let mut a = start;
    for k in 1..=60 {
        a = kinematics_step(&a, 1.0, &TAUS);
        assert_eq!(
            (a.theta, a.z_dot, a.f, a.theta_dot),
            (start.theta, start.z_dot, start.f, 0.0)
        );
        let t = k as f64;
        assert!((a.x - t * 320.0 * 0.7f64.cos()).abs() < 1e-9 * t * 320.0);
        assert!((a.y - t * 320.0 * 0.7f64.sin()).abs() < 1e-9 * t * 320.0);
        assert!((a.z - (5000.0 - 12.0 * t)).abs() < 1e-9 * 5000.0);
    }
}

#[test]
fn roll_command_turns() {
    let mut s = steady(0.0, 400.0, 0.0);
    let rate = 3f64.to_radians();
    s.phi_c = roll_for_turn_rate(rate, s.f);
    assert!((turn_rate(s.phi_c, s.f) - rate).abs() < 1e-15);
    for _ in 0..40 {
        s = kinematics_step(&s, 1.0, &TAUS);
    }
    assert!((s.theta_dot - rate).abs() < 1e-6);
}

#[test]
fn constant_separation_and_single_state() {
    let a = steady(0.0, 300.0, 0.0);
    let mut b = a;
    b.y = 5000.0;
    let mut traj = vec![WorldState {
        aircraft: [a, b],
        ..Default::default()
    }];
    for _ in 0..30 {
        traj.push(world_step(traj.last().unwrap(), 1.0, &TAUS));
    }
    assert!((min_approach_distance(&traj) - 5000.0).abs() < 1e-9);
    assert_eq!(min_approach_distance(&traj[..1]), 5000.0);
}

#[test]
fn crossing_tracks_match_closed_form() {
    // Aircraft 0 heads east from the origin, aircraft 1 north from below,
    // offset by 300 ft so the closest approach misses.
    let a = steady(0.0, 300.0, 0.0);
    let mut b = steady(PI / 2.0, 400.0, 0.0);
    b.x = 300.0 * 40.0 + 300.0;
    b.y = -400.0 * 40.0;
    let s = WorldState {
        aircraft: [a, b],
        ..Default::default()
    };
    let t_cpa = straight_line_cpa_time(&s);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (vx, vy) = (-300.0, 400.0);
    let closed = ((dx + vx * t_cpa).powi(2) + (dy + vy * t_cpa).powi(2)).sqrt();
    let mut traj = vec![s];
    for _ in 0..80 {
        traj.push(world_step(traj.last().unwrap(), 1.0, &TAUS));
    }
    let d = min_approach_distance(&traj);
    assert!(d >= closed - 1e-9 && d - closed <= 500.0, "{d} vs {closed}");
}

proptest! {
    #[test]
    fn zero_rates_conserve_position_and_heading(
        x in -1e6..1e6f64, y in -1e6..1e6f64, z in 0.0..4e4f64, theta in -7.0..7.0f64, dt in 0.01..2.0f64,
    ) {
        let a = AircraftState { x, y, z, theta, theta_dot: 0.0, z_dot: 0.0, f: 0.0, phi_c: 0.0, z_dot_c: 0.0, f_c: 0.0 };
        let b = kinematics_step(&a, dt, &TAUS);
        prop_assert_eq!((b.x, b.y, b.z, b.theta), (x, y, z, theta));
    }

    #[test]
    fn filters_move_toward_commands(
        zd in -50.0..50.0f64, zc in -50.0..50.0f64, f in 200.0..500.0f64, fc in 200.0..500.0f64,
    ) {
        let mut a = steady(0.0, f, zd);
        a.z_dot_c = zc;
        a.f_c = fc;
        let b = kinematics_step(&a, 1.0, &TAUS);
        prop_assert!((b.z_dot - zc).abs() <= (zd - zc).abs());
        prop_assert!((b.f - fc).abs() <= (f - fc).abs());
    }
}
