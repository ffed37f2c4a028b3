//! Mission description, configuration parsing and derived constants.
//!
//! The configuration format is a flat `key = value unit` text file. Keys are
//! case-insensitive, `#` starts a comment and vectors are written `x,y`:
//!
//! ```text
//! q0       = 50,-800 m
//! h        = 100 m
//! pbar_s   = 20 dBm
//! rho0     = -60 dB
//! b        = 1 MHz
//! ```
//!
//! Two of `t`, `dt` and `n` must be given; the third is derived. The ground
//! source always sits at the origin.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::units::{db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm};

pub const DEFAULT_KAPPA: f64 = 3.0;
pub const DEFAULT_TOL: f64 = 1e-4;

/// Rotary-wing propulsion constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    /// Blade profile power in hover, W.
    pub p0_blade: f64,
    /// Induced power in hover, W.
    pub pi_induced: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub v0_rotor: f64,
    /// Rotor blade tip speed, m/s.
    pub u_tip: f64,
    /// Fuselage drag ratio.
    pub drag_ratio: f64,
    /// Rotor solidity.
    pub solidity: f64,
    /// Rotor disc area, m^2.
    pub disc_area: f64,
    /// Air density, kg/m^3.
    pub air_density: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            p0_blade: 79.86,
            pi_induced: 88.63,
            v0_rotor: 4.03,
            u_tip: 120.0,
            drag_ratio: 0.6,
            solidity: 0.05,
            disc_area: 0.503,
            air_density: 1.225,
        }
    }
}

impl EnergyParams {
    fn validate(&self) -> Result<()> {
        let fields = [
            ("p0", self.p0_blade),
            ("pi", self.pi_induced),
            ("v0", self.v0_rotor),
            ("u_tip", self.u_tip),
            ("d0", self.drag_ratio),
            ("solidity", self.solidity),
            ("disc_area", self.disc_area),
            ("air_density", self.air_density),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!(
                    "energy parameter {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Coefficient of `v^3` in the propulsion power, `d0 rho s A / 2`.
    pub fn parasite_coeff(&self) -> f64 {
        0.5 * self.drag_ratio * self.air_density * self.solidity * self.disc_area
    }
}

/// Full mission description in linear SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub eve: Point,
    pub altitude: f64,
    pub period: f64,
    pub slot_len: f64,
    pub n_slots: usize,
    pub q0: Point,
    pub qf: Point,
    pub v_max: f64,
    /// Linear channel power gain at 1 m.
    pub rho0: f64,
    /// Noise power, W.
    pub sigma2: f64,
    /// Residual self-interference level, W.
    pub sigma_rsi2: f64,
    pub kappa: f64,
    pub pbar_s: f64,
    pub pmax_s: f64,
    pub pbar_u: f64,
    pub pmax_u: f64,
    /// Bandwidth, Hz.
    pub bandwidth: f64,
    pub energy: EnergyParams,
    pub tol: f64,
}

/// Constants derived once from a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Reference SNR `rho0 / sigma2`.
    pub gamma0: f64,
    /// Loop-interference-to-noise ratio `sigma_rsi2 / sigma2`.
    pub beta0: f64,
    /// Largest distance per slot `v_max * dt`, m.
    pub omega: f64,
}

impl Scenario {
    /// The published simulation set: 40 s mission at 0.5 s slots, -80 dBm
    /// loop interference.
    pub fn reference() -> Self {
        let dbm = |x: f64| dbm_to_watts(x).expect("finite");
        Scenario {
            eve: Point::new(200.0, 0.0),
            altitude: 100.0,
            period: 40.0,
            slot_len: 0.5,
            n_slots: 80,
            q0: Point::new(50.0, -800.0),
            qf: Point::new(50.0, 800.0),
            v_max: 40.0,
            rho0: db_to_linear(-60.0).expect("finite"),
            sigma2: dbm(-110.0),
            sigma_rsi2: dbm(-80.0),
            kappa: DEFAULT_KAPPA,
            pbar_s: dbm(20.0),
            pmax_s: dbm(26.0),
            pbar_u: dbm(10.0),
            pmax_u: dbm(16.0),
            bandwidth: 1e6,
            energy: EnergyParams::default(),
            tol: DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        let positive = [
            ("h", self.altitude),
            ("t", self.period),
            ("dt", self.slot_len),
            ("v_max", self.v_max),
            ("rho0", self.rho0),
            ("sigma2", self.sigma2),
            ("pbar_s", self.pbar_s),
            ("pmax_s", self.pmax_s),
            ("pbar_u", self.pbar_u),
            ("pmax_u", self.pmax_u),
            ("b", self.bandwidth),
            ("tol", self.tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be strictly positive, got {v}"));
            }
        }
        if !(self.sigma_rsi2.is_finite() && self.sigma_rsi2 >= 0.0) {
            return bad(format!(
                "sigma_rsi2 must be nonnegative, got {}",
                self.sigma_rsi2
            ));
        }
        for (name, p) in [("q0", self.q0), ("qf", self.qf), ("w_e", self.eve)] {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.n_slots == 0 {
            return bad("n must be a positive integer".into());
        }
        let implied = self.slot_len * self.n_slots as f64;
        if (implied - self.period).abs() > 1e-9 * self.period {
            return bad(format!(
                "t = {} s does not equal dt * n = {} s * {}",
                self.period, self.slot_len, self.n_slots
            ));
        }
        let reach = self.v_max * self.period;
        let dist = self.qf.dist(self.q0);
        if dist > reach * (1.0 + 1e-12) {
            return bad(format!(
                "endpoints are {dist} m apart but at most v_max * t = {reach} m can be flown"
            ));
        }
        if self.pbar_s > self.pmax_s {
            return bad("pbar_s must not exceed pmax_s".into());
        }
        if self.pbar_u > self.pmax_u {
            return bad("pbar_u must not exceed pmax_u".into());
        }
        if !(self.kappa.is_finite() && self.kappa >= 2.0) {
            return bad(format!("kappa must be at least 2, got {}", self.kappa));
        }
        if self.eve.norm() < 1.0 {
            return bad("the eavesdropper must be at least 1 m from the source".into());
        }
        self.energy.validate()
    }

    pub fn derive(&self) -> DerivedConstants {
        DerivedConstants {
            gamma0: self.rho0 / self.sigma2,
            beta0: self.sigma_rsi2 / self.sigma2,
            omega: self.v_max * self.slot_len,
        }
    }

    /// Same mission with a different flight period at the current slot
    /// length.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        let n = (period / self.slot_len).round();
        if n < 1.0 || (n * self.slot_len - period).abs() > 1e-9 * period {
            return Err(Error::Validation(format!(
                "t = {period} s is not a whole number of {} s slots",
                self.slot_len
            )));
        }
        let s = Scenario {
            period,
            n_slots: n as usize,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    /// Same mission with a different slot length, keeping the period.
    pub fn with_slot_len(&self, slot_len: f64) -> Result<Self> {
        let n = (self.period / slot_len).round();
        if n < 1.0 || (n * slot_len - self.period).abs() > 1e-9 * self.period {
            return Err(Error::Validation(format!(
                "t = {} s is not a whole number of {slot_len} s slots",
                self.period
            )));
        }
        let s = Scenario {
            slot_len,
            n_slots: n as usize,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    /// Same mission with the loop-interference level given in dBm.
    pub fn with_lil_dbm(&self, lil_dbm: f64) -> Result<Self> {
        let s = Scenario {
            sigma_rsi2: dbm_to_watts(lil_dbm)?,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn lil_dbm(&self) -> f64 {
        watts_to_dbm(self.sigma_rsi2)
    }

    /// Renders the scenario in the configuration format.
    pub fn to_config(&self) -> String {
        let e = &self.energy;
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<12}= {v}\n"));
        line("q0", format!("{},{} m", self.q0.x, self.q0.y));
        line("qf", format!("{},{} m", self.qf.x, self.qf.y));
        line("w_e", format!("{},{} m", self.eve.x, self.eve.y));
        line("h", format!("{} m", self.altitude));
        line("v_max", format!("{} m/s", self.v_max));
        line("t", format!("{} s", self.period));
        line("dt", format!("{} s", self.slot_len));
        line("rho0", format!("{} dB", linear_to_db(self.rho0)));
        line("sigma2", format!("{} W", self.sigma2));
        line("sigma_rsi2", format!("{} W", self.sigma_rsi2));
        line("kappa", format!("{}", self.kappa));
        line("pbar_s", format!("{} W", self.pbar_s));
        line("pmax_s", format!("{} W", self.pmax_s));
        line("pbar_u", format!("{} W", self.pbar_u));
        line("pmax_u", format!("{} W", self.pmax_u));
        line("b", format!("{} Hz", self.bandwidth));
        line("tol", format!("{}", self.tol));
        line("p0", format!("{} W", e.p0_blade));
        line("pi", format!("{} W", e.pi_induced));
        line("v0", format!("{} m/s", e.v0_rotor));
        line("u_tip", format!("{} m/s", e.u_tip));
        line("d0", format!("{}", e.drag_ratio));
        line("solidity", format!("{}", e.solidity));
        line("disc_area", format!("{} m^2", e.disc_area));
        line("air_density", format!("{} kg/m^3", e.air_density));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Quantity {
    Length,
    Time,
    Speed,
    Power,
    Gain,
    Frequency,
    Area,
    Density,
    Count,
    Ratio,
}

fn quantity_of(key: &str) -> Option<(&'static str, Quantity)> {
    use Quantity::*;
    let q = match key {
        "q0" => ("q0", Length),
        "qf" | "q_f" => ("qf", Length),
        "w_e" | "we" | "eve" => ("w_e", Length),
        "h" | "altitude" => ("h", Length),
        "v_max" | "vmax" => ("v_max", Speed),
        "t" | "period" => ("t", Time),
        "dt" | "delta_t" | "slot_len" => ("dt", Time),
        "n" | "n_slots" => ("n", Count),
        "rho0" => ("rho0", Gain),
        "sigma2" | "noise" => ("sigma2", Power),
        "sigma_rsi2" | "lil" => ("sigma_rsi2", Power),
        "kappa" => ("kappa", Ratio),
        "pbar_s" => ("pbar_s", Power),
        "pmax_s" => ("pmax_s", Power),
        "pbar_u" => ("pbar_u", Power),
        "pmax_u" => ("pmax_u", Power),
        "b" | "bandwidth" => ("b", Frequency),
        "tol" | "epsilon" => ("tol", Ratio),
        "p0" => ("p0", Power),
        "pi" => ("pi", Power),
        "v0" => ("v0", Speed),
        "u_tip" => ("u_tip", Speed),
        "d0" | "drag_ratio" => ("d0", Ratio),
        "solidity" => ("solidity", Ratio),
        "disc_area" | "a" => ("disc_area", Area),
        "air_density" | "rho" => ("air_density", Density),
        _ => return None,
    };
    Some(q)
}

fn unit_factor(q: Quantity, unit: &str, x: f64) -> std::result::Result<f64, String> {
    use Quantity::*;
    let u = unit.to_ascii_lowercase();
    let v = match (q, u.as_str()) {
        (Length, "m") => x,
        (Length, "km") => x * 1e3,
        (Time, "s") => x,
        (Time, "ms") => x * 1e-3,
        (Time, "min") => x * 60.0,
        (Speed, "m/s") => x,
        (Speed, "km/h") => x / 3.6,
        (Power, "w") => x,
        (Power, "mw") => x * 1e-3,
        (Power, "dbm") => dbm_to_watts(x).map_err(|e| e.to_string())?,
        (Power, "dbw") => db_to_linear(x).map_err(|e| e.to_string())?,
        (Gain, "db") => db_to_linear(x).map_err(|e| e.to_string())?,
        (Gain, "") => x,
        (Frequency, "hz") => x,
        (Frequency, "khz") => x * 1e3,
        (Frequency, "mhz") => x * 1e6,
        (Frequency, "ghz") => x * 1e9,
        (Area, "m^2") | (Area, "m2") => x,
        (Density, "kg/m^3") | (Density, "kg/m3") => x,
        (Count, "") | (Ratio, "") => x,
        (_, "") => return Err(format!("missing unit for {q:?} value")),
        _ => return Err(format!("unit '{unit}' is not valid for a {q:?} value")),
    };
    Ok(v)
}

fn split_unit(value: &str) -> (&str, &str) {
    let value = value.trim();
    match value.rsplit_once(char::is_whitespace) {
        Some((num, unit)) if unit.parse::<f64>().is_err() => (num.trim(), unit.trim()),
        _ => {
            // also accept a unit glued to the number, e.g. `100m`
            let idx = value
                .char_indices()
                .find(|&(i, c)| {
                    c.is_ascii_alphabetic()
                        && !(matches!(c, 'e' | 'E')
                            && value[i + 1..]
                                .chars()
                                .next()
                                .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+'))
                })
                .map(|(i, _)| i);
            match idx {
                Some(i) => (value[..i].trim(), value[i..].trim()),
                None => (value, ""),
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Value {
    Scalar(f64),
    Vector(Point),
}

fn parse_value(key: &str, q: Quantity, raw: &str) -> std::result::Result<Value, String> {
    let (num, unit) = split_unit(raw);
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse '{}' as a number for {key}", s.trim()))
    };
    if num.contains(',') {
        let parts: Vec<&str> = num.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("{key} expects a 2-vector 'x,y'"));
        }
        let x = unit_factor(q, unit, parse(parts[0])?)?;
        let y = unit_factor(q, unit, parse(parts[1])?)?;
        Ok(Value::Vector(Point::new(x, y)))
    } else {
        Ok(Value::Scalar(unit_factor(q, unit, parse(num)?)?))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut values: HashMap<&'static str, (usize, Value)> = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim().to_ascii_lowercase();
        let (canonical, q) =
            quantity_of(&key).ok_or_else(|| err(format!("unknown key '{key}'")))?;
        let v = parse_value(canonical, q, value).map_err(err)?;
        if values.insert(canonical, (line_no, v)).is_some() {
            return Err(err(format!("duplicate key '{canonical}'")));
        }
    }

    let scalar = |k: &str| -> Result<Option<f64>> {
        match values.get(k) {
            None => Ok(None),
            Some((_, Value::Scalar(x))) => Ok(Some(*x)),
            Some((line, Value::Vector(_))) => Err(Error::Parse {
                line: *line,
                msg: format!("{k} expects a scalar"),
            }),
        }
    };
    let vector = |k: &str| -> Result<Point> {
        match values.get(k) {
            None => Err(Error::Validation(format!("missing required key '{k}'"))),
            Some((_, Value::Vector(p))) => Ok(*p),
            Some((line, Value::Scalar(_))) => Err(Error::Parse {
                line: *line,
                msg: format!("{k} expects a 2-vector 'x,y'"),
            }),
        }
    };
    let required = |k: &str| -> Result<f64> {
        scalar(k)?.ok_or_else(|| Error::Validation(format!("missing required key '{k}'")))
    };

    let (period, slot_len, n_slots) = resolve_time_grid(scalar("t")?, scalar("dt")?, scalar("n")?)?;
    let defaults = EnergyParams::default();
    let energy = EnergyParams {
        p0_blade: scalar("p0")?.unwrap_or(defaults.p0_blade),
        pi_induced: scalar("pi")?.unwrap_or(defaults.pi_induced),
        v0_rotor: scalar("v0")?.unwrap_or(defaults.v0_rotor),
        u_tip: scalar("u_tip")?.unwrap_or(defaults.u_tip),
        drag_ratio: scalar("d0")?.unwrap_or(defaults.drag_ratio),
        solidity: scalar("solidity")?.unwrap_or(defaults.solidity),
        disc_area: scalar("disc_area")?.unwrap_or(defaults.disc_area),
        air_density: scalar("air_density")?.unwrap_or(defaults.air_density),
    };
    let s = Scenario {
        eve: vector("w_e")?,
        altitude: required("h")?,
        period,
        slot_len,
        n_slots,
        q0: vector("q0")?,
        qf: vector("qf")?,
        v_max: required("v_max")?,
        rho0: required("rho0")?,
        sigma2: required("sigma2")?,
        sigma_rsi2: required("sigma_rsi2")?,
        kappa: scalar("kappa")?.unwrap_or(DEFAULT_KAPPA),
        pbar_s: required("pbar_s")?,
        pmax_s: required("pmax_s")?,
        pbar_u: required("pbar_u")?,
        pmax_u: required("pmax_u")?,
        bandwidth: required("b")?,
        energy,
        tol: scalar("tol")?.unwrap_or(DEFAULT_TOL),
    };
    s.validate()?;
    Ok(s)
}

fn resolve_time_grid(t: Option<f64>, dt: Option<f64>, n: Option<f64>) -> Result<(f64, f64, usize)> {
    let bad = |m: &str| Err(Error::Validation(m.to_string()));
    let n_int = |n: f64| -> Result<usize> {
        if n >= 1.0 && n.fract() == 0.0 && n < 1e9 {
            Ok(n as usize)
        } else {
            Err(Error::Validation(format!(
                "n must be a positive integer, got {n}"
            )))
        }
    };
    match (t, dt, n) {
        (Some(t), Some(dt), None) => {
            if !(t > 0.0 && dt > 0.0) {
                return bad("t and dt must be positive");
            }
            let n = (t / dt).round();
            if (n * dt - t).abs() > 1e-9 * t {
                return Err(Error::Validation(format!(
                    "t = {t} s is not a whole number of dt = {dt} s slots"
                )));
            }
            Ok((t, dt, n_int(n)?))
        }
        (Some(t), None, Some(n)) => {
            let n = n_int(n)?;
            Ok((t, t / n as f64, n))
        }
        (None, Some(dt), Some(n)) => {
            let n = n_int(n)?;
            Ok((dt * n as f64, dt, n))
        }
        (Some(t), Some(dt), Some(n)) => {
            let n = n_int(n)?;
            if (dt * n as f64 - t).abs() > 1e-9 * t {
                return Err(Error::Validation(format!(
                    "t = {t} s, dt = {dt} s and n = {n} are inconsistent"
                )));
            }
            Ok((t, dt, n))
        }
        _ => bad("exactly two of t, dt and n are required"),
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = "\
# published parameter set
q0         = 50,-800 m
qF         = 50,800 m
w_E        = 200,0 m
H          = 100 m
v_max      = 40 m/s
dt         = 0.5 s
T          = 40 s
rho0       = -60 dB
sigma2     = -110 dBm
sigma_rsi2 = -80 dBm
pbar_s     = 20 dBm
pmax_s     = 26 dBm
pbar_u     = 10 dBm
pmax_u     = 16 dBm
b          = 1 MHz
tol        = 1e-4
";

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
    }

    #[test]
    fn accepts_reference_set() {
        let s = parse_scenario(REFERENCE).unwrap();
        let r = Scenario::reference();
        assert_eq!(s.n_slots, 80);
        assert_eq!(s.q0, r.q0);
        assert_eq!(s.qf, r.qf);
        assert_eq!(s.eve, r.eve);
        assert!(close(s.rho0, 1e-6));
        assert!(close(s.sigma2, 1e-14));
        assert!(close(s.pbar_s, 0.1));
        assert!(close(s.bandwidth, 1e6));
        assert_eq!(s.kappa, DEFAULT_KAPPA);
        assert_eq!(s.energy, EnergyParams::default());
        assert_eq!(s.tol, 1e-4);
    }

    #[test]
    fn derives_n_from_t_and_dt() {
        let s = parse_scenario(REFERENCE).unwrap();
        assert_eq!(s.n_slots, 80);
        let alt = REFERENCE.replace("T          = 40 s", "n = 80");
        let s2 = parse_scenario(&alt).unwrap();
        assert!(close(s2.period, 40.0));
    }

    #[test]
    fn inconsistent_time_grid_rejected() {
        let bad = format!("{REFERENCE}n = 81\n");
        assert!(matches!(parse_scenario(&bad), Err(Error::Validation(_))));
        let only_t = REFERENCE.replace("dt         = 0.5 s", "");
        assert!(parse_scenario(&only_t).is_err());
    }

    #[test]
    fn unreachable_endpoint_rejected() {
        let bad = REFERENCE.replace("50,800 m", "50,2000 m");
        let err = parse_scenario(&bad).unwrap_err();
        assert!(err.to_string().contains("v_max"), "{err}");
    }

    #[test]
    fn boundary_reachability_accepted() {
        // 1600 m in 40 s at 40 m/s is exactly feasible
        assert!(parse_scenario(REFERENCE).is_ok());
    }

    #[test]
    fn invariant_violations_rejected() {
        let cases = [
            ("pbar_s     = 20 dBm", "pbar_s = 30 dBm"),
            ("pbar_u     = 10 dBm", "pbar_u = 17 dBm"),
            ("w_E        = 200,0 m", "w_E = 0.5,0 m"),
            ("H          = 100 m", "H = 0 m"),
            ("tol        = 1e-4", "kappa = 1.5"),
            ("v_max      = 40 m/s", "v_max = -1 m/s"),
        ];
        for (from, to) in cases {
            let text = REFERENCE.replace(from, to);
            assert!(parse_scenario(&text).is_err(), "accepted '{to}'");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "q0 = 50,-800 m\nbogus = 3\n";
        match parse_scenario(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let text = "q0 = 50,-800 furlongs\n";
        assert!(matches!(
            parse_scenario(text),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = format!("{REFERENCE}h = 90 m\n");
        assert!(matches!(parse_scenario(&text), Err(Error::Parse { .. })));
        let missing_unit = REFERENCE.replace("H          = 100 m", "H = 100");
        assert!(matches!(
            parse_scenario(&missing_unit),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn keys_case_insensitive_and_units_scaled() {
        let text = REFERENCE
            .replace("b          = 1 MHz", "B = 1000 kHz")
            .replace("H          = 100 m", "h = 0.1 km");
        let s = parse_scenario(&text).unwrap();
        assert!(close(s.bandwidth, 1e6));
        assert!(close(s.altitude, 100.0));
    }

    #[test]
    fn derived_constants() {
        let s = Scenario::reference();
        let d = s.derive();
        assert!(close(d.gamma0, 1e8));
        assert!(close(d.beta0, 1e3));
        assert!(close(d.omega, 20.0));
    }

    #[test]
    fn config_round_trip() {
        let s = Scenario::reference();
        let back = parse_scenario(&s.to_config()).unwrap();
        assert_eq!(back.n_slots, s.n_slots);
        assert!(close(back.rho0, s.rho0));
        assert!(close(back.sigma_rsi2, s.sigma_rsi2));
        assert_eq!(back.energy, s.energy);
    }

    #[test]
    fn reference_matches_shipped_file() {
        let text = include_str!("../scenarios/reference.cfg");
        let s = parse_scenario(text).unwrap();
        let r = Scenario::reference();
        assert_eq!(s.n_slots, r.n_slots);
        assert!(close(s.pmax_s, r.pmax_s));
        assert!(close(s.pmax_u, r.pmax_u));
        assert!(close(s.sigma_rsi2, r.sigma_rsi2));
    }
}
