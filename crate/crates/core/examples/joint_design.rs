//! Joint source power, jamming power and trajectory design on the reference
//! mission.
//!
//! cargo run --release --example joint_design -- [period_s] [slot_s]

use fd_uav_ee::{solve_pt, Scenario};

fn main() -> fd_uav_ee::Result<()> {
    let mut args = std::env::args().skip(1);
    let period: f64 = args
        .next()
        .map_or(80.0, |a| a.parse().expect("period in seconds"));
    let slot: f64 = args
        .next()
        .map_or(2.0, |a| a.parse().expect("slot length in seconds"));
    let s = Scenario::reference()
        .with_slot_len(slot)?
        .with_period(period)?;

    let t0 = std::time::Instant::now();
    let r = solve_pt(&s, None)?;
    println!(
        "T = {period} s, N = {}: {:.6e} bits/J ({}, {} rounds, {:.1?})",
        s.n_slots,
        r.ee_bits_per_joule,
        r.status,
        r.outer_iters,
        t0.elapsed()
    );
    println!("history: {:?}", r.history);
    for m in r.slots.iter().step_by((s.n_slots / 10).max(1)) {
        println!(
            "  n={:3} q=({:8.2},{:8.2}) v={:5.2} pS={:.3e} pU={:.3e} rsec={:.3}",
            m.n, m.x, m.y, m.v, m.p_s, m.p_u, m.r_sec
        );
    }
    Ok(())
}
