//! Trajectory design for fixed source and jamming powers.
//!
//! Slack variables replace the squared distances to the source (`g`) and to
//! the eavesdropper (`m`), and `s` stands in for the square root of the
//! induced-power factor. With tangent bounds taken at the previous iterate
//! (the expansion) the secrecy numerator becomes linear in `(g, m)` and the
//! speed-slack constraint becomes `1 / s^2 <= F(s, q)` with `F` affine, so
//! the subproblem is a concave-linear over convex-positive fractional program.
//! It is solved with Dinkelbach's method; each parametric problem
//! `max Num - lambda * Den` is a smooth convex program solved with a
//! log-barrier Newton method.
//!
//! The numerator is strictly decreasing in `g` and `m`, so at the optimum of
//! any parametric problem both slacks sit on their lower bounds. The inner
//! solver therefore eliminates them and works over `(q, s)` only.
//!
//! Slot `n = 1..=N` flies from `q[n-1]` to `q[n]` and its rates are evaluated
//! at `q[n]`.

#![allow(clippy::needless_range_loop)]

use log::{debug, warn};

use crate::banded::BandedSym;
use crate::energy::{blade_factor, induced_factor};
use crate::error::{Error, Result};
use crate::geometry::{Point, Trajectory};
use crate::link::{dist_sq_su, dist_sq_ue, ground_loss};
use crate::metrics::{evaluate, PowerProfile};
use crate::scenario::{DerivedConstants, Scenario};
use crate::status::SolveStatus;

const LN_2: f64 = std::f64::consts::LN_2;

/// Floor on the speed slack guarding `1 / s^2`.
pub const S_MIN: f64 = 1e-3;
const MAX_SCA_ITERS: usize = 50;
const SCA_REL_TOL: f64 = 1e-5;
const MAX_DINKELBACH_ITERS: usize = 50;
const MAX_FALLBACKS: usize = 4;

/// Trajectory with its slack variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajVars {
    pub q: Trajectory,
    /// `g[n] >= H^2 + ||q[n]||^2`, `n = 1..=N` stored at index `n - 1`.
    pub g: Vec<f64>,
    /// `m[n] >= H^2 + ||q[n] - w_E||^2`.
    pub m: Vec<f64>,
    /// `s[n] >= sqrt(induced factor of slot n)`.
    pub s: Vec<f64>,
}

/// Expansion point of the tangent bounds; equality-activated slacks of the
/// incumbent trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajExpansion(pub TrajVars);

impl TrajExpansion {
    pub fn vars(&self) -> &TrajVars {
        &self.0
    }
}

/// Power-dependent constants of the trajectory subproblem.
#[derive(Debug, Clone)]
pub struct TrajProblem<'a> {
    pub scenario: &'a Scenario,
    pub consts: DerivedConstants,
    /// `gamma0 p_S / (beta0 p_U + 1)`
    pub f: Vec<f64>,
    /// `p_S gamma0 ||w_E||^-kappa`
    pub d: Vec<f64>,
    /// `gamma0 p_U`
    pub jam: Vec<f64>,
}

impl<'a> TrajProblem<'a> {
    pub fn new(scenario: &'a Scenario, powers: &PowerProfile) -> Self {
        let c = scenario.derive();
        let loss = ground_loss(scenario);
        let mut f = Vec::with_capacity(scenario.n_slots);
        let mut d = Vec::with_capacity(scenario.n_slots);
        let mut jam = Vec::with_capacity(scenario.n_slots);
        for n in 0..scenario.n_slots {
            let (ps, pu) = (powers.p_s[n], powers.p_u[n]);
            f.push(c.gamma0 * ps / (c.beta0 * pu + 1.0));
            d.push(ps * c.gamma0 * loss);
            jam.push(c.gamma0 * pu);
        }
        TrajProblem {
            scenario,
            consts: c,
            f,
            d,
            jam,
        }
    }

    fn n_slots(&self) -> usize {
        self.scenario.n_slots
    }

    /// Slope magnitude of the source-side tangent in `g`.
    fn g_coeff(&self, n: usize, g_k: f64) -> f64 {
        let f = self.f[n];
        f / (LN_2 * (g_k + f) * g_k)
    }

    /// `C^k[n]`, slope of the eavesdropper-side tangent in `m`.
    fn m_coeff(&self, n: usize, m_k: f64) -> f64 {
        let (d, j) = (self.d[n], self.jam[n]);
        d * j / (LN_2 * (j + (d + 1.0) * m_k) * (j + m_k))
    }

    fn leak(&self, n: usize, m: f64) -> f64 {
        let (d, j) = (self.d[n], self.jam[n]);
        (d * m / (j + m)).ln_1p() / LN_2
    }
}

fn check_feasible(q: &Trajectory, s: &Scenario) -> Result<()> {
    if q.n_slots() != s.n_slots {
        return Err(Error::InvalidInput(format!(
            "trajectory has {} slots, scenario has {}",
            q.n_slots(),
            s.n_slots
        )));
    }
    let tol = 1e-9 * (1.0 + s.q0.norm().max(s.qf.norm()));
    if q.at(0).dist(s.q0) > tol || q.at(s.n_slots).dist(s.qf) > tol {
        return Err(Error::InfeasibleTrajectory(
            "trajectory endpoints differ from q0 and qf".into(),
        ));
    }
    let omega = s.derive().omega;
    for n in 1..=s.n_slots {
        let step = q.displacement(n).norm_sq();
        if step > omega * omega + 1e-6 {
            return Err(Error::InfeasibleTrajectory(format!(
                "slot {n} covers {} m, more than {omega} m",
                step.sqrt()
            )));
        }
    }
    Ok(())
}

/// Slacks at equality for a feasible trajectory.
pub fn init_slacks(q: &Trajectory, s: &Scenario) -> Result<TrajVars> {
    check_feasible(q, s)?;
    let speeds = q.speeds(s.slot_len);
    let mut g = Vec::with_capacity(s.n_slots);
    let mut m = Vec::with_capacity(s.n_slots);
    let mut sl = Vec::with_capacity(s.n_slots);
    for n in 1..=s.n_slots {
        g.push(dist_sq_su(q.at(n), s));
        m.push(dist_sq_ue(q.at(n), s));
        sl.push(induced_factor(speeds[n - 1], &s.energy).sqrt().max(S_MIN));
    }
    Ok(TrajVars {
        q: q.clone(),
        g,
        m,
        s: sl,
    })
}

impl TrajExpansion {
    pub fn at(q: &Trajectory, s: &Scenario) -> Result<Self> {
        Ok(TrajExpansion(init_slacks(q, s)?))
    }
}

/// Secrecy sum written with the slacks,
/// `sum(log2(1 + f/g) - log2(1 + d m / (gamma0 p_U + m)))`.
pub fn slack_numerator(tv: &TrajVars, p: &TrajProblem<'_>) -> f64 {
    (0..p.n_slots())
        .map(|n| (p.f[n] / tv.g[n]).ln_1p() / LN_2 - p.leak(n, tv.m[n]))
        .sum()
}

/// Tangent-bound numerator, linear in `(g, m)`, tight at the expansion and a
/// global lower bound of [`slack_numerator`].
pub fn surrogate_numerator(tv: &TrajVars, exp: &TrajExpansion, p: &TrajProblem<'_>) -> f64 {
    let e = exp.vars();
    (0..p.n_slots())
        .map(|n| {
            let (gk, mk) = (e.g[n], e.m[n]);
            let lb = (p.f[n] / gk).ln_1p() / LN_2 - p.g_coeff(n, gk) * (tv.g[n] - gk);
            let ub = p.m_coeff(n, mk) * (tv.m[n] - mk) + p.leak(n, mk);
            lb - ub
        })
        .sum()
}

/// Denominator of the fractional program,
/// `sum(P0 phi[n] + Pi s[n] + d0 rho s A v[n]^3 / 2)`, in watts.
pub fn denominator(tv: &TrajVars, s: &Scenario) -> f64 {
    let ep = &s.energy;
    let k3 = ep.parasite_coeff();
    tv.q.speeds(s.slot_len)
        .iter()
        .zip(&tv.s)
        .map(|(&v, &sl)| ep.p0_blade * blade_factor(v, ep) + ep.pi_induced * sl + k3 * v * v * v)
        .sum()
}

fn speed_scale(s: &Scenario) -> f64 {
    1.0 / (s.energy.v0_rotor * s.energy.v0_rotor * s.slot_len * s.slot_len)
}

/// `F^k[n] - 1/s[n]^2` for every slot; the linearized speed-slack constraint
/// holds where this is nonnegative.
pub fn speed_slack_bound(tv: &TrajVars, exp: &TrajExpansion, s: &Scenario) -> Vec<f64> {
    let e = exp.vars();
    let w = speed_scale(s);
    (1..=s.n_slots)
        .map(|n| {
            let sk = e.s[n - 1];
            let psi = e.q.displacement(n);
            let delta = tv.q.displacement(n);
            let sl = tv.s[n - 1];
            let f = sk * sk + 2.0 * sk * (sl - sk) - w * psi.norm_sq() + 2.0 * w * psi.dot(delta);
            f - 1.0 / (sl * sl)
        })
        .collect()
}

/// Smallest `s > 0` with `1/s^2 <= s_k^2 + 2 s_k (s - s_k) + lin`.
fn min_speed_slack(sk: f64, lin: f64) -> f64 {
    let h = |x: f64| 2.0 * sk * x + (lin - sk * sk) - 1.0 / (x * x);
    let mut lo = 1e-12;
    let mut hi = sk.max(1.0);
    while h(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Layout of the Newton variables: `[s_1, q_1, s_2, q_2, ..., q_{N-1}, s_N]`.
struct Layout {
    n_slots: usize,
}

impl Layout {
    const BANDWIDTH: usize = 4;

    fn dim(&self) -> usize {
        3 * self.n_slots - 2
    }

    fn s(&self, n: usize) -> usize {
        3 * (n - 1)
    }

    /// Index of `q[n].x` for free waypoints `n = 1..N-1`.
    fn q(&self, n: usize) -> Option<usize> {
        (n >= 1 && n < self.n_slots).then(|| 3 * (n - 1) + 1)
    }
}

/// Objective and constraint data of one parametric problem, in minimization
/// form: `Phi = -(Num - const) + lambda * Den`.
struct Parametric<'p, 'a> {
    prob: &'p TrajProblem<'a>,
    exp: &'p TrajExpansion,
    lambda: f64,
    trust: Option<f64>,
    layout: Layout,
    /// Per-slot coefficients of `g` and `m` in `-Num`.
    a_g: Vec<f64>,
    a_m: Vec<f64>,
    omega_sq: f64,
}

struct Point5 {
    idx: [Option<usize>; 5],
}

impl<'p, 'a> Parametric<'p, 'a> {
    fn new(
        prob: &'p TrajProblem<'a>,
        exp: &'p TrajExpansion,
        lambda: f64,
        trust: Option<f64>,
    ) -> Self {
        let e = exp.vars();
        let n = prob.n_slots();
        let omega = prob.consts.omega;
        Parametric {
            prob,
            exp,
            lambda,
            trust,
            layout: Layout { n_slots: n },
            a_g: (0..n).map(|i| prob.g_coeff(i, e.g[i])).collect(),
            a_m: (0..n).map(|i| prob.m_coeff(i, e.m[i])).collect(),
            omega_sq: omega * omega,
        }
    }

    fn scenario(&self) -> &Scenario {
        self.prob.scenario
    }

    fn n(&self) -> usize {
        self.layout.n_slots
    }

    fn point(&self, x: &[f64], n: usize) -> Point {
        let s = self.scenario();
        match self.layout.q(n) {
            Some(i) => Point::new(x[i], x[i + 1]),
            None if n == 0 => s.q0,
            None => s.qf,
        }
    }

    fn pack(&self, q: &Trajectory, sl: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.layout.dim()];
        for n in 1..=self.n() {
            x[self.layout.s(n)] = sl[n - 1];
            if let Some(i) = self.layout.q(n) {
                let p = q.at(n);
                x[i] = p.x;
                x[i + 1] = p.y;
            }
        }
        x
    }

    fn unpack(&self, x: &[f64]) -> (Trajectory, Vec<f64>) {
        let pts = (0..=self.n()).map(|n| self.point(x, n)).collect();
        let sl = (1..=self.n()).map(|n| x[self.layout.s(n)]).collect();
        (Trajectory::new(pts).expect("finite waypoints"), sl)
    }

    fn barrier_count(&self) -> usize {
        3 * self.n()
            + if self.trust.is_some() {
                self.n() - 1
            } else {
                0
            }
    }

    /// Affine part of the linearized speed-slack constraint of slot `n`
    /// excluding the `s` terms.
    fn speed_lin(&self, n: usize, delta: Point) -> f64 {
        let w = speed_scale(self.scenario());
        let psi = self.exp.vars().q.displacement(n);
        -w * psi.norm_sq() + 2.0 * w * psi.dot(delta)
    }

    /// Constraint margins; `None` if any is not strictly positive.
    fn margins(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.barrier_count());
        let e = self.exp.vars();
        for n in 1..=self.n() {
            let delta = self.point(x, n) - self.point(x, n - 1);
            let sl = x[self.layout.s(n)];
            let sk = e.s[n - 1];
            let mob = self.omega_sq - delta.norm_sq();
            let spd = sk * sk + 2.0 * sk * (sl - sk) + self.speed_lin(n, delta) - 1.0 / (sl * sl);
            let low = sl - S_MIN;
            for c in [mob, spd, low] {
                if !(c > 0.0) {
                    return None;
                }
                out.push(c);
            }
        }
        if let Some(r) = self.trust {
            for n in 1..self.n() {
                let c = r * r - (self.point(x, n) - e.q.at(n)).norm_sq();
                if !(c > 0.0) {
                    return None;
                }
                out.push(c);
            }
        }
        Some(out)
    }

    /// `Phi(x)` without constants.
    fn objective(&self, x: &[f64]) -> f64 {
        let s = self.scenario();
        let ep = &s.energy;
        let a2 = 3.0 * ep.p0_blade / (ep.u_tip * ep.u_tip * s.slot_len * s.slot_len);
        let a3 = ep.parasite_coeff() / (s.slot_len * s.slot_len * s.slot_len);
        let mut phi = 0.0;
        for n in 1..=self.n() {
            let qn = self.point(x, n);
            let delta = qn - self.point(x, n - 1);
            let d2 = delta.norm_sq();
            phi += self.a_g[n - 1] * qn.norm_sq() + self.a_m[n - 1] * (qn - s.eve).norm_sq();
            phi +=
                self.lambda * (a2 * d2 + ep.pi_induced * x[self.layout.s(n)] + a3 * d2 * d2.sqrt());
        }
        phi
    }

    fn barrier_value(&self, x: &[f64], t: f64) -> Option<f64> {
        let m = self.margins(x)?;
        Some(t * self.objective(x) - m.iter().map(|c| c.ln()).sum::<f64>())
    }

    /// Gradient and Hessian of `t * Phi + barrier`.
    fn derivatives(&self, x: &[f64], t: f64) -> (Vec<f64>, BandedSym) {
        let s = self.scenario();
        let ep = &s.energy;
        let a2 = 3.0 * ep.p0_blade / (ep.u_tip * ep.u_tip * s.slot_len * s.slot_len);
        let a3 = ep.parasite_coeff() / (s.slot_len * s.slot_len * s.slot_len);
        let w = speed_scale(s);
        let e = self.exp.vars();
        let dim = self.layout.dim();
        let mut grad = vec![0.0; dim];
        let mut hess = BandedSym::zeros(dim, Layout::BANDWIDTH);

        // Local variable order per slot: [s_n, q_{n-1}.x, q_{n-1}.y, q_n.x, q_n.y].
        for n in 1..=self.n() {
            let prev = self.layout.q(n - 1);
            let cur = self.layout.q(n);
            let loc = Point5 {
                idx: [
                    Some(self.layout.s(n)),
                    prev,
                    prev.map(|i| i + 1),
                    cur,
                    cur.map(|i| i + 1),
                ],
            };
            let qn = self.point(x, n);
            let delta = qn - self.point(x, n - 1);
            let d2 = delta.norm_sq();
            let dn = d2.sqrt();
            let sl = x[self.layout.s(n)];
            let mut g5 = [0.0; 5];
            let mut h5 = [[0.0; 5]; 5];

            // functions of delta: value gradient G (2) and Hessian K (2x2)
            let add_delta =
                |g5: &mut [f64; 5], h5: &mut [[f64; 5]; 5], gd: [f64; 2], kd: [[f64; 2]; 2]| {
                    for a in 0..2 {
                        g5[1 + a] -= gd[a];
                        g5[3 + a] += gd[a];
                        for b in 0..2 {
                            h5[1 + a][1 + b] += kd[a][b];
                            h5[3 + a][3 + b] += kd[a][b];
                            h5[1 + a][3 + b] -= kd[a][b];
                            h5[3 + a][1 + b] -= kd[a][b];
                        }
                    }
                };

            // lambda * (a2 |d|^2 + a3 |d|^3), scaled by t
            let lt = t * self.lambda;
            let mut gd = [2.0 * a2 * delta.x, 2.0 * a2 * delta.y];
            let mut kd = [[2.0 * a2, 0.0], [0.0, 2.0 * a2]];
            if dn > 0.0 {
                let dv = [delta.x, delta.y];
                for a in 0..2 {
                    gd[a] += 3.0 * a3 * dn * dv[a];
                    for b in 0..2 {
                        let id = if a == b { 1.0 } else { 0.0 };
                        kd[a][b] += 3.0 * a3 * (dn * id + dv[a] * dv[b] / dn);
                    }
                }
            }
            for a in 0..2 {
                gd[a] *= lt;
                for b in 0..2 {
                    kd[a][b] *= lt;
                }
            }
            add_delta(&mut g5, &mut h5, gd, kd);
            g5[0] += lt * ep.pi_induced;

            // mobility barrier -ln(omega^2 - |d|^2)
            let mob = self.omega_sq - d2;
            let dv = [delta.x, delta.y];
            let gd = [2.0 * dv[0] / mob, 2.0 * dv[1] / mob];
            let mut kd = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    let id = if a == b { 1.0 } else { 0.0 };
                    kd[a][b] = 4.0 * dv[a] * dv[b] / (mob * mob) + 2.0 * id / mob;
                }
            }
            add_delta(&mut g5, &mut h5, gd, kd);

            // speed-slack barrier -ln(c), c = F(s, q) - 1/s^2
            let sk = e.s[n - 1];
            let psi = e.q.displacement(n);
            let c = sk * sk + 2.0 * sk * (sl - sk) + self.speed_lin(n, delta) - 1.0 / (sl * sl);
            // gradient of c over the local variables
            let dc = [
                2.0 * sk + 2.0 / (sl * sl * sl),
                -2.0 * w * psi.x,
                -2.0 * w * psi.y,
                2.0 * w * psi.x,
                2.0 * w * psi.y,
            ];
            for a in 0..5 {
                g5[a] -= dc[a] / c;
                for b in 0..5 {
                    h5[a][b] += dc[a] * dc[b] / (c * c);
                }
            }
            h5[0][0] += 6.0 / (sl * sl * sl * sl * c);

            // floor barrier -ln(s - s_min)
            let low = sl - S_MIN;
            g5[0] -= 1.0 / low;
            h5[0][0] += 1.0 / (low * low);

            scatter(&loc, &g5, &h5, &mut grad, &mut hess);

            // waypoint terms of slot n: t * (a_g |q|^2 + a_m |q - w|^2) and trust region
            if let Some(i) = cur {
                let (ag, am) = (t * self.a_g[n - 1], t * self.a_m[n - 1]);
                let rel = qn - s.eve;
                grad[i] += 2.0 * ag * qn.x + 2.0 * am * rel.x;
                grad[i + 1] += 2.0 * ag * qn.y + 2.0 * am * rel.y;
                hess.add(i, i, 2.0 * (ag + am));
                hess.add(i + 1, i + 1, 2.0 * (ag + am));
                if let Some(r) = self.trust {
                    let dq = qn - e.q.at(n);
                    let c = r * r - dq.norm_sq();
                    let v = [dq.x, dq.y];
                    for a in 0..2 {
                        grad[i + a] += 2.0 * v[a] / c;
                        for b in 0..=a {
                            let id = if a == b { 1.0 } else { 0.0 };
                            hess.add(i + a, i + b, 4.0 * v[a] * v[b] / (c * c) + 2.0 * id / c);
                        }
                    }
                }
            }
        }
        (grad, hess)
    }
}

fn scatter(
    loc: &Point5,
    g5: &[f64; 5],
    h5: &[[f64; 5]; 5],
    grad: &mut [f64],
    hess: &mut BandedSym,
) {
    for a in 0..5 {
        let Some(i) = loc.idx[a] else { continue };
        grad[i] += g5[a];
        for b in 0..5 {
            let Some(j) = loc.idx[b] else { continue };
            if i > j || a == b {
                hess.add(i, j, h5[a][b]);
            }
        }
    }
}

/// Outcome of a parametric solve.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolution {
    pub vars: TrajVars,
    pub newton_steps: usize,
    /// Barrier duality-gap bound at exit, in objective units.
    pub gap: f64,
    pub status: SolveStatus,
}

/// Strictly feasible starting point near the expansion.
fn interior_start(par: &Parametric<'_, '_>) -> Option<Vec<f64>> {
    let s = par.scenario();
    let e = par.exp.vars();
    let n = par.n();
    let omega = s.derive().omega;
    let line = Trajectory::straight_line(s.q0, s.qf, n);
    let ratio = s.qf.dist(s.q0) / (n as f64 * omega);
    let eta = (1e-6f64).min(0.5 * (1.0 - ratio * ratio));
    if !(eta > 0.0) {
        return None;
    }
    let cap = omega * (1.0 - eta).sqrt();
    let line_step = ratio * omega;
    let mut theta: f64 = 0.0;
    for k in 1..=n {
        let step = e.q.displacement(k).norm();
        if step > cap {
            theta = theta.max((step - cap) / (step - line_step));
        }
    }
    let theta = theta.min(1.0);
    let pts: Vec<Point> = (0..=n).map(|k| e.q.at(k).lerp(line.at(k), theta)).collect();
    let q = Trajectory::new(pts).ok()?;
    let sl: Vec<f64> = (1..=n)
        .map(|k| {
            let lin = par.speed_lin(k, q.displacement(k));
            (min_speed_slack(e.s[k - 1], lin) * (1.0 + 1e-4)).max(2.0 * S_MIN)
        })
        .collect();
    let x = par.pack(&q, &sl);
    par.margins(&x).map(|_| x)
}

fn newton_barrier(
    par: &Parametric<'_, '_>,
    mut x: Vec<f64>,
) -> (Vec<f64>, usize, f64, SolveStatus) {
    let m = par.barrier_count() as f64;
    let scale = par.objective(&x).abs().max(1e-12);
    let gap_target = 1e-11 * scale;
    let mut t = m / scale;
    let mut steps = 0usize;
    let mut status = SolveStatus::Converged;
    loop {
        // centering
        let mut stalled = false;
        for _ in 0..200 {
            let (g, h) = par.derivatives(&x, t);
            let neg: Vec<f64> = g.iter().map(|v| -v).collect();
            let dx = match h.solve(&neg) {
                Some(dx) => dx,
                None => {
                    let mut hr = h.clone();
                    let shift = 1e-10
                        * (0..hr.dim())
                            .map(|i| hr.get(i, i).abs())
                            .fold(1.0, f64::max);
                    hr.add_diagonal(shift);
                    match hr.solve(&neg) {
                        Some(dx) => dx,
                        None => {
                            stalled = true;
                            break;
                        }
                    }
                }
            };
            let dec2: f64 = -g.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
            if dec2 / 2.0 <= 1e-12 {
                break;
            }
            let f0 = par.barrier_value(&x, t).expect("iterate is interior");
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..80 {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + step * b).collect();
                if let Some(f1) = par.barrier_value(&trial, t) {
                    if f1 <= f0 - 0.25 * step * dec2 {
                        x = trial;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            steps += 1;
            if !accepted {
                stalled = true;
                break;
            }
        }
        if m / t <= gap_target {
            break;
        }
        if stalled {
            // rounding floor reached; the current iterate is the best available
            if m / t > 1e-6 * scale {
                status = SolveStatus::IterationCap;
            }
            break;
        }
        t *= 10.0;
    }
    (x, steps, m / t, status)
}

/// Completes `(q, s)` into slack variables at their lower bounds.
fn tighten(par: &Parametric<'_, '_>, q: Trajectory, sl: Vec<f64>) -> TrajVars {
    let s = par.scenario();
    let e = par.exp.vars();
    let n = par.n();
    let g = (1..=n).map(|k| dist_sq_su(q.at(k), s)).collect();
    let m = (1..=n).map(|k| dist_sq_ue(q.at(k), s)).collect();
    let sl = (1..=n)
        .map(|k| {
            let lin = par.speed_lin(k, q.displacement(k));
            min_speed_slack(e.s[k - 1], lin).max(S_MIN).min(sl[k - 1])
        })
        .collect();
    TrajVars { q, g, m, s: sl }
}

fn inner_solve(
    lambda: f64,
    exp: &TrajExpansion,
    prob: &TrajProblem<'_>,
    trust: Option<f64>,
) -> Option<InnerSolution> {
    let par = Parametric::new(prob, exp, lambda, trust);
    if lambda == 0.0 && par.a_g.iter().chain(&par.a_m).all(|&a| a == 0.0) {
        return Some(InnerSolution {
            vars: exp.vars().clone(),
            newton_steps: 0,
            gap: 0.0,
            status: SolveStatus::Converged,
        });
    }
    let x0 = interior_start(&par)?;
    let (x, steps, gap, status) = newton_barrier(&par, x0);
    let (q, sl) = par.unpack(&x);
    Some(InnerSolution {
        vars: tighten(&par, q, sl),
        newton_steps: steps,
        gap,
        status,
    })
}

/// Maximizes `Num - lambda * Den` over the convex feasible set defined by the
/// expansion, with `g` and `m` at their lower bounds.
pub fn inner_concave_solve(
    lambda: f64,
    exp: &TrajExpansion,
    prob: &TrajProblem<'_>,
) -> Result<InnerSolution> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    inner_solve(lambda, exp, prob, None).ok_or_else(|| {
        Error::InfeasibleTrajectory("no strictly feasible point near the expansion".into())
    })
}

/// Outcome of the fractional-programming step.
#[derive(Debug, Clone, PartialEq)]
pub struct DinkelbachSolution {
    pub vars: TrajVars,
    /// Final ratio `Num / Den`.
    pub lambda: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

fn ratio(tv: &TrajVars, exp: &TrajExpansion, prob: &TrajProblem<'_>) -> (f64, f64) {
    (
        surrogate_numerator(tv, exp, prob),
        denominator(tv, prob.scenario),
    )
}

fn dinkelbach_inner(
    exp: &TrajExpansion,
    prob: &TrajProblem<'_>,
    trust: Option<f64>,
) -> DinkelbachSolution {
    let (num0, den0) = ratio(exp.vars(), exp, prob);
    let mut best = exp.vars().clone();
    let mut best_ratio = num0 / den0;
    let mut lambda = best_ratio;
    let mut status = SolveStatus::Converged;

    if lambda < 0.0 {
        // negative ratios make the parametric problem nonconvex; restart
        // from the numerator maximizer when it is positive
        match inner_solve(0.0, exp, prob, trust) {
            Some(sol) => {
                let (num, den) = ratio(&sol.vars, exp, prob);
                if num / den > best_ratio {
                    best = sol.vars;
                    best_ratio = num / den;
                }
                if num <= 0.0 {
                    return DinkelbachSolution {
                        vars: best,
                        lambda: best_ratio,
                        iterations: 1,
                        status,
                    };
                }
                lambda = num / den;
            }
            None => {
                return DinkelbachSolution {
                    vars: best,
                    lambda: best_ratio,
                    iterations: 1,
                    status,
                }
            }
        }
    }

    for it in 1..=MAX_DINKELBACH_ITERS {
        let Some(sol) = inner_solve(lambda, exp, prob, trust) else {
            return DinkelbachSolution {
                vars: best,
                lambda: best_ratio,
                iterations: it,
                status: SolveStatus::IterationCap,
            };
        };
        status = status.merge(sol.status);
        let (num, den) = ratio(&sol.vars, exp, prob);
        let residual = num - lambda * den;
        let r = num / den;
        if r > best_ratio {
            best = sol.vars;
            best_ratio = r;
        }
        debug!("dinkelbach it {it}: lambda {lambda:.9e} residual {residual:.3e}");
        if residual <= (1e-10 * num.abs()).max(2.0 * sol.gap).max(1e-15 * den) {
            return DinkelbachSolution {
                vars: best,
                lambda: best_ratio,
                iterations: it,
                status,
            };
        }
        lambda = r;
    }
    DinkelbachSolution {
        vars: best,
        lambda: best_ratio,
        iterations: MAX_DINKELBACH_ITERS,
        status: SolveStatus::IterationCap,
    }
}

/// Solves the fractional subproblem at an expansion by Dinkelbach's method,
/// starting from the ratio at the expansion. The returned ratio is never
/// below the expansion's.
pub fn dinkelbach_solve(exp: &TrajExpansion, prob: &TrajProblem<'_>) -> DinkelbachSolution {
    dinkelbach_inner(exp, prob, None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySolution {
    pub trajectory: Trajectory,
    /// Unclamped efficiency of the returned trajectory, bits/J.
    pub ee: f64,
    /// Efficiency after every accepted outer step, starting with the input.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub status: SolveStatus,
}

/// Whether the endpoints leave no freedom: the uniform straight line at top
/// speed is the only feasible path.
pub fn is_forced(s: &Scenario) -> bool {
    let reach = s.n_slots as f64 * s.derive().omega;
    s.qf.dist(s.q0) >= reach * (1.0 - 1e-12)
}

/// Successive convex approximation of the trajectory for fixed powers.
pub fn optimize_trajectory(
    init: &Trajectory,
    powers: &PowerProfile,
    s: &Scenario,
) -> Result<TrajectorySolution> {
    check_feasible(init, s)?;
    let d = s.derive();
    let ee_of = |q: &Trajectory| -> Result<f64> { Ok(evaluate(q, powers, s, &d)?.ee_unclamped) };

    if is_forced(s) {
        let q = Trajectory::straight_line(s.q0, s.qf, s.n_slots);
        let ee = ee_of(&q)?;
        return Ok(TrajectorySolution {
            trajectory: q,
            ee,
            history: vec![ee],
            iterations: 0,
            status: SolveStatus::Converged,
        });
    }

    let prob = TrajProblem::new(s, powers);
    let mut q = init.clone();
    let mut ee = ee_of(&q)?;
    let mut history = vec![ee];
    let mut status = SolveStatus::Converged;
    for it in 1..=MAX_SCA_ITERS {
        let exp = TrajExpansion::at(&q, s)?;
        let sol = dinkelbach_inner(&exp, &prob, None);
        status = status.merge(match sol.status {
            SolveStatus::IterationCap => SolveStatus::Converged,
            other => other,
        });
        let mut candidate = sol.vars.q;
        let mut ee_new = ee_of(&candidate)?;

        if ee_new < ee - 1e-12 * ee.abs() {
            warn!(
                "trajectory step lowered efficiency ({ee} -> {ee_new}); retrying in a trust region"
            );
            status = status.merge(SolveStatus::FallbackUsed);
            let mut radius = 0.5 * d.omega;
            let mut recovered = false;
            for _ in 0..MAX_FALLBACKS {
                let sol = dinkelbach_inner(&exp, &prob, Some(radius));
                let e2 = ee_of(&sol.vars.q)?;
                if e2 >= ee {
                    candidate = sol.vars.q;
                    ee_new = e2;
                    recovered = true;
                    break;
                }
                radius *= 0.5;
            }
            if !recovered {
                return Ok(TrajectorySolution {
                    trajectory: q,
                    ee,
                    history,
                    iterations: it,
                    status,
                });
            }
        }
        if ee_new <= ee {
            return Ok(TrajectorySolution {
                trajectory: q,
                ee,
                history,
                iterations: it,
                status,
            });
        }
        let gain = (ee_new - ee) / ee.abs().max(1e-300);
        q = candidate;
        ee = ee_new;
        history.push(ee);
        debug!("trajectory sca it {it}: ee {ee:.9e} gain {gain:.3e}");
        if gain < SCA_REL_TOL {
            return Ok(TrajectorySolution {
                trajectory: q,
                ee,
                history,
                iterations: it,
                status,
            });
        }
    }
    Ok(TrajectorySolution {
        trajectory: q,
        ee,
        history,
        iterations: MAX_SCA_ITERS,
        status: status.merge(SolveStatus::IterationCap),
    })
}
