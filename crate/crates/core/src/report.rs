//! Trace, summary and sweep writers.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::baselines::SchemeId;
use crate::bcd::SolveResult;
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::status::SolveStatus;
use crate::units::watts_to_dbm;

pub const TRACE_HEADER: &str =
    "n,x_m,y_m,v_mps,p_s_dbm,p_u_dbm,r_u_bpshz,r_e_bpshz,r_sec_bpshz,e_p_j";
pub const SWEEP_HEADER: &str = "scheme,t_s,lil_dbm,ee_bits_per_joule,status,outer_iters";
pub const TRENDS_HEADER: &str = "scheme,lil_dbm,t_s,ee_bits_per_joule,nondecreasing_in_t";

/// Formats `x` with `digits` significant digits in the shorter of fixed and
/// exponent notation, without trailing zeros.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g9(x: f64) -> String {
    fmt_sig(x, 9)
}

/// One line of the per-slot trace. Row 0 carries only the start waypoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub v: Option<f64>,
    pub p_s_dbm: Option<f64>,
    pub p_u_dbm: Option<f64>,
    pub r_u: Option<f64>,
    pub r_e: Option<f64>,
    /// Clamped at zero.
    pub r_sec: Option<f64>,
    pub e_p: Option<f64>,
}

impl TraceRow {
    fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(g9).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            g9(self.x),
            g9(self.y),
            opt(self.v),
            opt(self.p_s_dbm),
            opt(self.p_u_dbm),
            opt(self.r_u),
            opt(self.r_e),
            opt(self.r_sec),
            opt(self.e_p),
        )
    }
}

pub fn trace_rows(result: &SolveResult) -> Vec<TraceRow> {
    let q0 = result.trajectory.at(0);
    let mut rows = vec![TraceRow {
        n: 0,
        x: q0.x,
        y: q0.y,
        v: None,
        p_s_dbm: None,
        p_u_dbm: None,
        r_u: None,
        r_e: None,
        r_sec: None,
        e_p: None,
    }];
    rows.extend(result.slots.iter().map(|m| TraceRow {
        n: m.n,
        x: m.x,
        y: m.y,
        v: Some(m.v),
        p_s_dbm: Some(watts_to_dbm(m.p_s)),
        p_u_dbm: Some(watts_to_dbm(m.p_u)),
        r_u: Some(m.r_u),
        r_e: Some(m.r_e),
        r_sec: Some(m.r_sec.max(0.0)),
        e_p: Some(m.e_p),
    }));
    rows
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    Ok(())
}

pub fn render_trace(rows: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

pub fn write_trace(rows: &[TraceRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_trace(rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioEcho {
    #[serde(flatten)]
    pub scenario: Scenario,
    pub lil_dbm: f64,
    pub gamma0: f64,
    pub beta0: f64,
    pub omega_m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scheme: SchemeId,
    pub status: SolveStatus,
    pub outer_iters: usize,
    /// Bits per joule, `B dt sum(r_sec) / sum(E_p)`.
    pub ee_bits_per_joule: f64,
    /// `B sum(r_sec) / sum(E_p)`, the same ratio without the slot length.
    pub ee_rate_form: f64,
    pub total_energy_j: f64,
    pub total_bits: f64,
    pub rate_sum_bpshz: f64,
    pub history: Vec<f64>,
    pub scenario: ScenarioEcho,
}

impl Summary {
    pub fn new(result: &SolveResult, scheme: SchemeId, s: &Scenario) -> Self {
        let d = s.derive();
        Summary {
            scheme,
            status: result.status,
            outer_iters: result.outer_iters,
            ee_bits_per_joule: result.ee_bits_per_joule,
            ee_rate_form: result.ee_rate_form,
            total_energy_j: result.total_energy_j,
            total_bits: result.total_bits,
            rate_sum_bpshz: result.slots.iter().map(|m| m.r_sec.max(0.0)).sum(),
            history: result.history.clone(),
            scenario: ScenarioEcho {
                scenario: s.clone(),
                lil_dbm: s.lil_dbm(),
                gamma0: d.gamma0,
                beta0: d.beta0,
                omega_m: d.omega,
            },
        }
    }
}

pub fn render_summary(result: &SolveResult, scheme: SchemeId, s: &Scenario) -> String {
    let mut text = serde_json::to_string_pretty(&Summary::new(result, scheme, s))
        .expect("summary fields are finite");
    text.push('\n');
    text
}

pub fn write_summary(
    result: &SolveResult,
    scheme: SchemeId,
    s: &Scenario,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_file(path.as_ref(), &render_summary(result, scheme, s))
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: SchemeId,
    pub t_s: f64,
    pub lil_dbm: f64,
    pub ee_bits_per_joule: f64,
    pub status: SolveStatus,
    pub outer_iters: usize,
}

pub fn render_sweep(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.scheme,
            g9(r.t_s),
            g9(r.lil_dbm),
            g9(r.ee_bits_per_joule),
            r.status,
            r.outer_iters
        ));
    }
    out
}

pub fn write_sweep(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_sweep(rows))
}

/// Rows grouped by `(scheme, LIL)` and ordered by period, with a flag telling
/// whether the efficiency did not drop from the previous period.
pub fn render_trends(rows: &[SweepRow]) -> String {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.scheme
            .cmp(&b.scheme)
            .then(a.lil_dbm.total_cmp(&b.lil_dbm))
            .then(a.t_s.total_cmp(&b.t_s))
    });
    let mut out = String::from(TRENDS_HEADER);
    out.push('\n');
    let mut prev: Option<&SweepRow> = None;
    for r in sorted {
        let flag = match prev {
            Some(p) if p.scheme == r.scheme && p.lil_dbm == r.lil_dbm => {
                r.ee_bits_per_joule >= p.ee_bits_per_joule * (1.0 - 1e-9)
            }
            _ => true,
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.scheme,
            g9(r.lil_dbm),
            g9(r.t_s),
            g9(r.ee_bits_per_joule),
            flag
        ));
        prev = Some(r);
    }
    out
}

pub fn write_trends(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &render_trends(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0, 9), "0");
        assert_eq!(fmt_sig(1.0, 9), "1");
        assert_eq!(fmt_sig(-800.0, 9), "-800");
        assert_eq!(fmt_sig(0.1, 9), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(fmt_sig(123456789.4, 9), "123456789");
        assert_eq!(fmt_sig(1234567890.0, 9), "1.23456789e9");
        assert_eq!(fmt_sig(1.5e-7, 9), "1.5e-7");
        assert_eq!(fmt_sig(f64::NEG_INFINITY, 9), "-inf");
    }

    #[test]
    fn nine_digits_round_trip_within_tolerance() {
        for x in [
            std::f64::consts::PI,
            6.02214076e23,
            -1.0e-12 / 7.0,
            706.9370125636569,
        ] {
            let back: f64 = fmt_sig(x, 9).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn trend_flags() {
        let row = |t: f64, ee: f64| SweepRow {
            scheme: SchemeId::Pt,
            t_s: t,
            lil_dbm: -80.0,
            ee_bits_per_joule: ee,
            status: SolveStatus::Converged,
            outer_iters: 1,
        };
        let text = render_trends(&[row(80.0, 2.0), row(40.0, 1.0), row(120.0, 1.5)]);
        let flags: Vec<&str> = text
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap())
            .collect();
        assert_eq!(flags, ["true", "true", "false"]);
    }
}
