#![allow(dead_code)]

use fd_uav_ee::{Point, Scenario};

/// Reference mission re-gridded to `dt` second slots over `t` seconds.
pub fn desk(t: f64, dt: f64) -> Scenario {
    Scenario::reference()
        .with_slot_len(dt)
        .unwrap()
        .with_period(t)
        .unwrap()
}

pub fn toy(q0: Point, qf: Point, n: usize, dt: f64) -> Scenario {
    let mut s = Scenario::reference();
    s.q0 = q0;
    s.qf = qf;
    s.slot_len = dt;
    s.n_slots = n;
    s.period = dt * n as f64;
    s.validate().unwrap();
    s
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / b.abs().max(1e-300)
}
