use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fd-uav-ee"))
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn write_cfg(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("s.cfg");
    fs::write(&p, text).unwrap();
    p
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in [
        "--config",
        "--scheme",
        "--out-dir",
        "--max-outer",
        "--tol",
        "--sweep-t",
        "--sweep-lil",
        "--jobs",
    ] {
        assert!(text.contains(flag), "{flag}");
    }
}

#[test]
fn usage_and_config_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let out = bin().args(args).output().unwrap();
        (
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).to_string(),
        )
    };
    let (code, unknown) = run(&["--config", "x.cfg", "--frobnicate"]);
    assert_eq!(code, Some(1));
    let (code, missing) = run(&["--config", dir.path().join("nope.cfg").to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(missing.contains("cannot read config"));

    let bad = write_cfg(dir.path(), "h = 100 m\nv_max = fast\n");
    let (code, malformed) = run(&["--config", bad.to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(malformed.contains("malformed config") && malformed.contains("line 2"));

    let far = read(scenarios().join("reference.cfg"))
        .replace("qf         = 50,800 m", "qf         = 50,2000 m");
    let far = write_cfg(dir.path(), &far);
    let (code, infeasible) = run(&["--config", far.to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(infeasible.contains("infeasible scenario"));

    let cfg = scenarios().join("reference.cfg");
    let (code, scheme) = run(&["--config", cfg.to_str().unwrap(), "--scheme", "best"]);
    assert_eq!(code, Some(1));

    let msgs = [unknown, missing, malformed, infeasible, scheme];
    for i in 0..msgs.len() {
        for j in i + 1..msgs.len() {
            assert_ne!(msgs[i], msgs[j]);
        }
    }
}

#[test]
fn single_run_writes_consistent_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenarios().join("reference.cfg");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--scheme",
            "pt,pbet",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    for scheme in ["pt", "pbet"] {
        let trace = read(dir.path().join(format!("trace_{scheme}.csv")));
        let lines: Vec<&str> = trace.lines().collect();
        assert_eq!(
            lines[0],
            "n,x_m,y_m,v_mps,p_s_dbm,p_u_dbm,r_u_bpshz,r_e_bpshz,r_sec_bpshz,e_p_j"
        );
        // waypoint row 0 plus one row per slot
        assert_eq!(lines.len() - 1, 81);
        assert!(lines[1].starts_with("0,50,-800,,"));

        let summary: serde_json::Value =
            serde_json::from_str(&read(dir.path().join(format!("summary_{scheme}.json")))).unwrap();
        let status = summary["status"].as_str().unwrap();
        assert!(status == "converged" || status == "iteration-cap");
        assert_eq!(summary["scheme"], scheme);

        let mut rate = 0.0;
        let mut energy = 0.0;
        for row in &lines[2..] {
            let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((f[8] - (f[6] - f[7]).max(0.0)).abs() <= 1e-7 * f[6].abs().max(1.0));
            rate += f[8];
            energy += f[9];
        }
        let dt = summary["scenario"]["slot_len"].as_f64().unwrap();
        let b = summary["scenario"]["bandwidth"].as_f64().unwrap();
        let ee = summary["ee_bits_per_joule"].as_f64().unwrap();
        assert!(((b * dt * rate / energy) - ee).abs() <= 1e-6 * ee);
        assert!((summary["total_energy_j"].as_f64().unwrap() - energy).abs() <= 1e-6 * energy);
        let bits = summary["total_bits"].as_f64().unwrap();
        assert!((b * dt * rate - bits).abs() <= 1e-6 * bits);
        let rate_form = summary["ee_rate_form"].as_f64().unwrap();
        assert!((rate_form * dt - ee).abs() <= 1e-9 * ee);
        assert!(summary["history"].as_array().unwrap().len() >= 2);
    }
}

#[test]
fn hover_rows_show_hover_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenarios().join("desk.cfg");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--scheme",
            "pbet",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let trace = read(dir.path().join("trace_pbet.csv"));
    let hover: Vec<f64> = trace
        .lines()
        .skip(2)
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<f64>().unwrap())
                .collect::<Vec<_>>()
        })
        .filter(|f| f[3] == 0.0)
        .map(|f| f[9])
        .collect();
    assert!(!hover.is_empty());
    for e in hover {
        assert!((e - 2.0 * (79.86 + 88.63)).abs() <= 1e-6 * e);
    }
}

#[test]
fn zero_power_is_minus_infinity_dbm() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenarios().join("desk.cfg");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--scheme",
            "njt",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let trace = read(dir.path().join("trace_njt.csv"));
    for row in trace.lines().skip(2) {
        assert_eq!(row.split(',').nth(5), Some("-inf"));
    }
}

#[test]
fn round_cap_exits_two_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenarios().join("desk.cfg");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--max-outer",
            "1",
            "--tol",
            "1e-12",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let summary: serde_json::Value =
        serde_json::from_str(&read(dir.path().join("summary_pt.json"))).unwrap();
    assert_eq!(summary["status"], "iteration-cap");
}

fn sweep(dir: &Path, jobs: &str) {
    let cfg = scenarios().join("desk.cfg");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--sweep-t",
            "40,80,120,160",
            "--sweep-lil",
            "-80,-70",
            "--scheme",
            "pt,njt,npt,pbet",
            "--jobs",
            jobs,
            "--out-dir",
        ])
        .arg(dir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn sweep_table_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    sweep(a.path(), "4");
    sweep(b.path(), "1");
    let table = read(a.path().join("sweep.csv"));
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,t_s,lil_dbm,ee_bits_per_joule,status,outer_iters"
    );
    assert_eq!(lines.len() - 1, 32);
    assert!(lines[1].starts_with("pt,40,-80,"));

    let trends = read(a.path().join("sweep_trends.csv"));
    for row in trends.lines().skip(1).filter(|l| l.starts_with("pt,")) {
        assert!(row.ends_with(",true"), "{row}");
    }

    // every file identical regardless of thread count
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 2 + 2 * 32);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}
