//! Channel gains and Jensen-bounded rates along the straight reference path.
//!
//! cargo run --example link_budget -- [scenario.cfg]

use fd_uav_ee::link::slot_link;
use fd_uav_ee::units::watts_to_dbm;
use fd_uav_ee::{load_scenario, Scenario, Trajectory};

fn main() -> fd_uav_ee::Result<()> {
    let s = match std::env::args().nth(1) {
        Some(path) => load_scenario(path)?,
        None => Scenario::reference(),
    };
    let d = s.derive();
    println!(
        "gamma0 = {:.3e}, beta0 = {:.3e}, omega = {} m, LIL = {} dBm",
        d.gamma0,
        d.beta0,
        d.omega,
        s.lil_dbm()
    );
    println!(
        "source {:.1} dBm, jamming {:.1} dBm",
        watts_to_dbm(s.pbar_s),
        watts_to_dbm(s.pbar_u)
    );
    println!(
        "{:>4} {:>9} {:>9} {:>10} {:>10} {:>8} {:>8} {:>8}",
        "n", "x", "y", "h_su", "h_ue", "r_u", "r_e", "r_sec"
    );
    let q = Trajectory::straight_line(s.q0, s.qf, s.n_slots);
    for n in (1..=s.n_slots).step_by((s.n_slots / 16).max(1)) {
        let p = q.at(n);
        let l = slot_link(s.pbar_s, s.pbar_u, p, &s, &d);
        println!(
            "{n:>4} {:>9.1} {:>9.1} {:>10.3e} {:>10.3e} {:>8.3} {:>8.3} {:>8.3}",
            p.x, p.y, l.h_su, l.h_ue, l.r_u, l.r_e, l.r_sec
        );
    }
    Ok(())
}
