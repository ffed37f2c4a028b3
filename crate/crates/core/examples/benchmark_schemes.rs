//! All four schemes side by side over a few flight periods.
//!
//! cargo run --release --example benchmark_schemes -- [lil_dbm] [slot_s] [periods...]

use fd_uav_ee::baselines::solve;
use fd_uav_ee::{Scenario, SchemeId, SolverOptions};

fn main() -> fd_uav_ee::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let lil = args.first().copied().unwrap_or(-80.0);
    let slot = args.get(1).copied().unwrap_or(2.0);
    let periods = if args.len() > 2 {
        args[2..].to_vec()
    } else {
        vec![40.0, 80.0, 120.0, 160.0]
    };

    let base = Scenario::reference()
        .with_lil_dbm(lil)?
        .with_slot_len(slot)?;
    println!("LIL {lil} dBm, slot {slot} s");
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "T [s]", "pt", "njt", "npt", "pbet"
    );
    for t in periods {
        let s = base.with_period(t)?;
        let mut line = format!("{t:>6}");
        for scheme in SchemeId::ALL {
            let r = solve(scheme, &s, &SolverOptions::default())?;
            line.push_str(&format!(" {:>14.6e}", r.ee_bits_per_joule));
        }
        println!("{line}");
    }
    Ok(())
}
