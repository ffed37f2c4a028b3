//! Jamming power by successive convex approximation at several loop
//! interference levels.
//!
//! cargo run --example jamming_sca

use fd_uav_ee::jamming::{optimize_jamming_power, true_objective, JamCoeffs};
use fd_uav_ee::{Point, Scenario, Trajectory};

fn main() -> fd_uav_ee::Result<()> {
    // hover-like path passing right over the eavesdropper
    let base = Scenario::reference()
        .with_slot_len(2.0)?
        .with_period(120.0)?;
    let pts: Vec<Point> = (0..=base.n_slots)
        .map(|k| {
            let u = k as f64 / base.n_slots as f64;
            base.q0.lerp(base.qf, u) + Point::new(150.0 * (std::f64::consts::PI * u).sin(), 0.0)
        })
        .collect();
    let q = Trajectory::new(pts)?;
    for lil in [-110.0, -100.0, -90.0, -80.0, -70.0] {
        let s = base.with_lil_dbm(lil)?;
        let d = s.derive();
        let jc = JamCoeffs::new(&q, &vec![s.pbar_s; s.n_slots], &s, &d);
        let silent = true_objective(&vec![0.0; s.n_slots], &jc, d.beta0);
        let sol =
            optimize_jamming_power(&vec![s.pbar_u; s.n_slots], &jc, d.beta0, s.pbar_u, s.pmax_u);
        let used = sol.power.iter().sum::<f64>() / (s.n_slots as f64 * s.pbar_u);
        println!(
            "LIL {lil:>5} dBm: secrecy sum {:8.3} (silent {silent:8.3}), budget used {:5.1} %, {} iterations",
            sol.objective,
            100.0 * used,
            sol.iterations
        );
    }
    Ok(())
}
