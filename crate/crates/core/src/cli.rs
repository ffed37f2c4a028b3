//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use rayon::prelude::*;

use crate::baselines::{solve, SchemeId};
use crate::bcd::{SolveResult, SolverOptions};
use crate::error::{Error, Result};
use crate::report::{self, SweepRow};
use crate::scenario::{load_scenario, Scenario};
use crate::status::SolveStatus;

/// Energy-efficient secure relaying by a full-duplex jamming UAV.
#[derive(Debug, Parser)]
#[command(name = "fd-uav-ee", version)]
pub struct Args {
    /// Scenario file.
    #[arg(long)]
    pub config: PathBuf,
    /// Schemes to run, comma separated: pt, njt, npt, pbet.
    #[arg(long, value_delimiter = ',', default_value = "pt")]
    pub scheme: Vec<SchemeId>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Cap on outer rounds.
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// Fractional-increase threshold; overrides the scenario's.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Flight periods to sweep, seconds, comma separated. The slot length is
    /// kept.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep_t: Option<Vec<f64>>,
    /// Loop-interference levels to sweep, dBm, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep_lil: Option<Vec<f64>>,
    /// Worker threads for sweep cells.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ITERATION_CAP: i32 = 2;

#[derive(Debug, Clone)]
struct Cell {
    scheme: SchemeId,
    t_s: f64,
    lil_dbm: f64,
    scenario: Scenario,
    stem: String,
}

fn options(args: &Args) -> SolverOptions {
    let mut opts = SolverOptions::default();
    if let Some(k) = args.max_outer {
        opts.max_outer = k;
    }
    opts.tol = args.tol;
    opts
}

fn check_args(args: &Args) -> std::result::Result<(), String> {
    if args.scheme.is_empty() {
        return Err("--scheme needs at least one scheme".into());
    }
    if args.max_outer == Some(0) {
        return Err("--max-outer must be at least 1".into());
    }
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    if args.jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }
    for (flag, list) in [
        ("--sweep-t", &args.sweep_t),
        ("--sweep-lil", &args.sweep_lil),
    ] {
        if let Some(v) = list {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(format!("{flag} needs a list of finite numbers"));
            }
        }
    }
    Ok(())
}

fn build_cells(args: &Args, base: &Scenario) -> Result<Vec<Cell>> {
    let ts = args.sweep_t.clone().unwrap_or_else(|| vec![base.period]);
    let lils = args
        .sweep_lil
        .clone()
        .unwrap_or_else(|| vec![base.lil_dbm()]);
    let mut cells = Vec::new();
    for &scheme in &args.scheme {
        for &t in &ts {
            for &lil in &lils {
                let scenario = if args.sweep_lil.is_some() {
                    base.with_period(t)?.with_lil_dbm(lil)?
                } else {
                    base.with_period(t)?
                };
                cells.push(Cell {
                    scheme,
                    t_s: t,
                    lil_dbm: lil,
                    scenario,
                    stem: format!(
                        "{}_t{}_lil{}",
                        scheme,
                        report::fmt_sig(t, 9),
                        report::fmt_sig(lil, 9)
                    ),
                });
            }
        }
    }
    Ok(cells)
}

fn write_outputs(
    dir: &Path,
    stem: &str,
    scheme: SchemeId,
    s: &Scenario,
    r: &SolveResult,
) -> Result<()> {
    report::write_trace(
        &report::trace_rows(r),
        dir.join(format!("trace_{stem}.csv")),
    )?;
    report::write_summary(r, scheme, s, dir.join(format!("summary_{stem}.json")))
}

fn execute(args: &Args) -> std::result::Result<i32, (i32, String)> {
    let config_err = |what: &str, e: Error| (EXIT_CONFIG, format!("{what}: {e}"));
    check_args(args).map_err(|m| (EXIT_CONFIG, format!("invalid arguments: {m}")))?;
    let base = load_scenario(&args.config).map_err(|e| match e {
        Error::Io { .. } => (EXIT_CONFIG, format!("cannot read config: {e}")),
        Error::Parse { .. } => (
            EXIT_CONFIG,
            format!("malformed config {}: {e}", args.config.display()),
        ),
        other => (
            EXIT_CONFIG,
            format!("infeasible scenario in {}: {other}", args.config.display()),
        ),
    })?;
    let sweeping = args.sweep_t.is_some() || args.sweep_lil.is_some();
    let cells = build_cells(args, &base).map_err(|e| config_err("infeasible sweep cell", e))?;
    fs::create_dir_all(&args.out_dir).map_err(|source| {
        (
            EXIT_CONFIG,
            format!(
                "cannot create output directory {}: {source}",
                args.out_dir.display()
            ),
        )
    })?;

    let opts = options(args);
    let run_cell = |c: &Cell| -> Result<(SolveResult, String)> {
        let r = solve(c.scheme, &c.scenario, &opts)?;
        let stem = if sweeping {
            c.stem.clone()
        } else {
            c.scheme.to_string()
        };
        write_outputs(&args.out_dir, &stem, c.scheme, &c.scenario, &r)?;
        Ok((r, stem))
    };
    let results: Vec<Result<(SolveResult, String)>> = match args.jobs {
        Some(j) if j > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| (EXIT_CONFIG, format!("cannot start worker pool: {e}")))?;
            pool.install(|| cells.par_iter().map(run_cell).collect())
        }
        _ => cells.iter().map(run_cell).collect(),
    };

    let mut rows = Vec::with_capacity(cells.len());
    let mut worst = SolveStatus::Converged;
    for (cell, res) in cells.iter().zip(results) {
        let (r, stem) =
            res.map_err(|e| (EXIT_CONFIG, format!("solve failed for {}: {e}", cell.stem)))?;
        println!(
            "{stem}: ee {} bits/J, {} after {} rounds",
            report::fmt_sig(r.ee_bits_per_joule, 9),
            r.status,
            r.outer_iters
        );
        worst = worst.merge(r.status);
        rows.push(SweepRow {
            scheme: cell.scheme,
            t_s: cell.t_s,
            lil_dbm: cell.lil_dbm,
            ee_bits_per_joule: r.ee_bits_per_joule,
            status: r.status,
            outer_iters: r.outer_iters,
        });
    }
    if sweeping {
        report::write_sweep(&rows, args.out_dir.join("sweep.csv"))
            .map_err(|e| config_err("write failed", e))?;
        report::write_trends(&rows, args.out_dir.join("sweep_trends.csv"))
            .map_err(|e| config_err("write failed", e))?;
    }
    Ok(if worst == SolveStatus::IterationCap {
        EXIT_ITERATION_CAP
    } else {
        EXIT_OK
    })
}

/// Parses `argv` (program name first) and runs; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&args) {
        Ok(code) => {
            if code == EXIT_ITERATION_CAP {
                eprintln!("warning: outer loop hit its round cap; results written with status iteration-cap");
            }
            code
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
