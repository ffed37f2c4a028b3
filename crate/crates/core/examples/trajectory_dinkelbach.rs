//! Trajectory design for fixed powers: each outer step re-expands the
//! tangent bounds and solves the fractional subproblem by Dinkelbach's
//! method.
//!
//! cargo run --release --example trajectory_dinkelbach -- [period_s]

use fd_uav_ee::trajectory::{dinkelbach_solve, optimize_trajectory, TrajExpansion, TrajProblem};
use fd_uav_ee::{evaluate, PowerProfile, Scenario, Trajectory};

fn main() -> fd_uav_ee::Result<()> {
    let period: f64 = std::env::args()
        .nth(1)
        .map_or(120.0, |a| a.parse().expect("period in seconds"));
    let s = Scenario::reference()
        .with_slot_len(2.0)?
        .with_period(period)?;
    let d = s.derive();
    let powers = PowerProfile::average(&s);
    let line = Trajectory::straight_line(s.q0, s.qf, s.n_slots);

    let prob = TrajProblem::new(&s, &powers);
    let first = dinkelbach_solve(&TrajExpansion::at(&line, &s)?, &prob);
    println!(
        "first subproblem: ratio {:.6} after {} Dinkelbach steps",
        first.lambda, first.iterations
    );

    let out = optimize_trajectory(&line, &powers, &s)?;
    let before = evaluate(&line, &powers, &s, &d)?.ee;
    let after = evaluate(&out.trajectory, &powers, &s, &d)?.ee;
    println!(
        "straight line {before:.6e} bits/J -> {after:.6e} bits/J ({} SCA steps, {})",
        out.iterations, out.status
    );
    let closest = out
        .trajectory
        .points()
        .iter()
        .map(|p| p.norm())
        .fold(f64::INFINITY, f64::min);
    println!("closest horizontal approach to the source: {closest:.1} m");
    for (k, v) in out
        .trajectory
        .speeds(s.slot_len)
        .iter()
        .enumerate()
        .step_by(5)
    {
        println!("  slot {:>3}: {:5.2} m/s", k + 1, v);
    }
    Ok(())
}
