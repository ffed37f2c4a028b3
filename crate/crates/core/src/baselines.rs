//! Benchmark schemes built on the same outer loop as the joint design.

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::bcd::{solve_blocks, Block, InitialDesign, SolveResult, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{Point, Trajectory};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    /// Source power, jamming power and trajectory jointly.
    Pt,
    /// No jamming; source power and trajectory.
    Njt,
    /// Powers fixed at their averages; trajectory only.
    Npt,
    /// Fixed best-effort trajectory; both powers.
    Pbet,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Pt, SchemeId::Njt, SchemeId::Npt, SchemeId::Pbet];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Pt => "pt",
            SchemeId::Njt => "njt",
            SchemeId::Npt => "npt",
            SchemeId::Pbet => "pbet",
        }
    }

    pub fn blocks(self) -> Vec<Block> {
        match self {
            SchemeId::Pt => vec![Block::SourcePower, Block::JammingPower, Block::Trajectory],
            SchemeId::Njt => vec![Block::SourcePower, Block::Trajectory],
            SchemeId::Npt => vec![Block::Trajectory],
            SchemeId::Pbet => vec![Block::SourcePower, Block::JammingPower],
        }
    }

    pub fn initial_design(self, s: &Scenario) -> InitialDesign {
        let mut init = InitialDesign::default_for(s);
        match self {
            SchemeId::Njt => init.powers.p_u = vec![0.0; s.n_slots],
            SchemeId::Pbet => init.trajectory = build_best_effort_trajectory(s),
            SchemeId::Pt | SchemeId::Npt => {}
        }
        init
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "pt" => Ok(SchemeId::Pt),
            "njt" => Ok(SchemeId::Njt),
            "npt" => Ok(SchemeId::Npt),
            "pbet" => Ok(SchemeId::Pbet),
            other => Err(Error::InvalidInput(format!(
                "unknown scheme '{other}' (expected pt, njt, npt or pbet)"
            ))),
        }
    }
}

/// Runs `scheme` with the loop limits of `opts`; the block list of `opts`
/// is replaced by the scheme's own.
pub fn solve(scheme: SchemeId, s: &Scenario, opts: &SolverOptions) -> Result<SolveResult> {
    let opts = SolverOptions {
        blocks: scheme.blocks(),
        ..opts.clone()
    };
    solve_blocks(s, &scheme.initial_design(s), &opts)
}

pub fn solve_njt(s: &Scenario) -> Result<SolveResult> {
    solve(SchemeId::Njt, s, &SolverOptions::default())
}

pub fn solve_npt(s: &Scenario) -> Result<SolveResult> {
    solve(SchemeId::Npt, s, &SolverOptions::default())
}

pub fn solve_pbet(s: &Scenario) -> Result<SolveResult> {
    solve(SchemeId::Pbet, s, &SolverOptions::default())
}

/// Points `k * omega` along `from -> to`, capped at `to`, for `k = 1..=count`.
fn march(from: Point, to: Point, omega: f64, count: usize) -> impl Iterator<Item = Point> {
    let len = from.dist(to);
    (1..=count).map(move |k| {
        let t = if len > 0.0 {
            (k as f64 * omega / len).min(1.0)
        } else {
            1.0
        };
        from.lerp(to, t)
    })
}

/// Fly to the point above the source at top speed, hover, then fly to the
/// final location at top speed.
pub fn build_best_effort_trajectory(s: &Scenario) -> Trajectory {
    let n = s.n_slots;
    let omega = s.derive().omega;
    let origin = Point::ORIGIN;
    let slots_for = |dist: f64| -> usize {
        let k = dist / omega;
        // distances that are a whole number of slots up to rounding
        if (k - k.round()).abs() < 1e-9 {
            k.round() as usize
        } else {
            k.ceil() as usize
        }
    };
    let n_out = slots_for(s.q0.norm());
    let n_ret = slots_for(s.qf.norm());
    if n_out + n_ret <= n {
        let mut pts = Vec::with_capacity(n + 1);
        pts.push(s.q0);
        pts.extend(march(s.q0, origin, omega, n_out));
        pts.extend(std::iter::repeat_n(origin, n - n_out - n_ret));
        // return leg: residual slot first, full-speed slots after
        let d1 = s.qf.norm();
        pts.extend((0..n_ret).rev().map(|k| {
            let t = if d1 > 0.0 {
                (k as f64 * omega / d1).min(1.0)
            } else {
                0.0
            };
            s.qf.lerp(origin, t)
        }));
        return Trajectory::new(pts).expect("finite waypoints");
    }
    warn!("flight period too short to reach the point above the source; flying a detour toward it");
    let turn = closest_reachable(s, n as f64 * omega);
    arc_length_path(&[s.q0, turn, s.qf], n)
}

/// Point of the ellipse `|p - q0| + |p - qF| <= reach` nearest the origin.
fn closest_reachable(s: &Scenario, reach: f64) -> Point {
    let origin = Point::ORIGIN;
    if origin.dist(s.q0) + origin.dist(s.qf) <= reach {
        return origin;
    }
    let center = s.q0.lerp(s.qf, 0.5);
    let c = 0.5 * s.q0.dist(s.qf);
    let a = 0.5 * reach.max(2.0 * c);
    let b = (a * a - c * c).max(0.0).sqrt();
    let u = if c > 0.0 {
        (s.qf - s.q0) * (1.0 / (2.0 * c))
    } else {
        Point::new(1.0, 0.0)
    };
    let v = Point::new(-u.y, u.x);
    let at = |th: f64| center + u * (a * th.cos()) + v * (b * th.sin());
    let cost = |th: f64| at(th).norm_sq();
    let steps = 3600;
    let h = std::f64::consts::TAU / steps as f64;
    let best = (0..steps)
        .map(|i| i as f64 * h)
        .min_by(|x, y| cost(*x).total_cmp(&cost(*y)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (best - h, best + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if cost(x1) < cost(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    at(0.5 * (lo + hi))
}

/// Uniform arc-length discretization of a polyline into `n` slots.
fn arc_length_path(vertices: &[Point], n: usize) -> Trajectory {
    let seg: Vec<f64> = vertices.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = seg.iter().sum();
    let mut pts = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut target = total * k as f64 / n as f64;
        let mut p = *vertices.last().expect("nonempty");
        for (i, &len) in seg.iter().enumerate() {
            if target <= len || i + 1 == seg.len() {
                let t = if len > 0.0 {
                    (target / len).min(1.0)
                } else {
                    0.0
                };
                p = vertices[i].lerp(vertices[i + 1], t);
                break;
            }
            target -= len;
        }
        pts.push(p);
    }
    pts[0] = vertices[0];
    pts[n] = *vertices.last().expect("nonempty");
    Trajectory::new(pts).expect("finite waypoints")
}
