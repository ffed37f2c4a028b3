//! Source power for a fixed path and jamming profile: closed form per slot
//! with the budget multiplier found by bisection.
//!
//! cargo run --example source_power

use fd_uav_ee::source_power::{objective, optimize_source_power, SourceCoeffs};
use fd_uav_ee::units::watts_to_dbm;
use fd_uav_ee::{Scenario, Trajectory};

fn main() -> fd_uav_ee::Result<()> {
    let s = Scenario::reference()
        .with_slot_len(2.0)?
        .with_period(120.0)?;
    let d = s.derive();
    let q = Trajectory::straight_line(s.q0, s.qf, s.n_slots);
    let p_u = vec![s.pbar_u; s.n_slots];
    let c = SourceCoeffs::new(&q, &p_u, &s, &d);
    let sol = optimize_source_power(&c, s.pbar_s, s.pmax_s);
    let flat = vec![s.pbar_s; s.n_slots];
    println!("multiplier {:.4e}", sol.mu);
    println!(
        "secrecy sum: flat {:.4}, optimized {:.4} bps/Hz",
        objective(&c, &flat),
        objective(&c, &sol.power)
    );
    for n in (0..s.n_slots).step_by(6) {
        let p = q.at(n + 1);
        println!(
            "  slot {:>2} at ({:6.1},{:7.1}): {:7.2} dBm",
            n + 1,
            p.x,
            p.y,
            watts_to_dbm(sol.power[n])
        );
    }
    Ok(())
}
