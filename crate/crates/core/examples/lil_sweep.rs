//! Sweep over flight period and loop-interference level through the
//! command-line entry point, writing traces, summaries and the sweep table.
//!
//! cargo run --release --example lil_sweep -- [out_dir]

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sweep_out".into());
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/desk.cfg");
    let code = fd_uav_ee::cli::run([
        "fd-uav-ee",
        "--config",
        cfg,
        "--scheme",
        "pt,njt",
        "--sweep-t",
        "40,80,120,160",
        "--sweep-lil",
        "-90,-80,-70",
        "--jobs",
        "4",
        "--out-dir",
        &out,
    ]);
    match std::fs::read_to_string(format!("{out}/sweep.csv")) {
        Ok(table) => print!("{table}"),
        Err(e) => eprintln!("no sweep table: {e}"),
    }
    std::process::exit(code);
}
