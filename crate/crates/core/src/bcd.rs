//! Block coordinate ascent over source power, jamming power and trajectory.

use log::{debug, info};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Trajectory;
use crate::jamming::{optimize_jamming_power, JamCoeffs};
use crate::metrics::{evaluate, Evaluation, PowerProfile, SlotMetrics};
use crate::scenario::{DerivedConstants, Scenario};
use crate::source_power::{optimize_source_power, SourceCoeffs};
use crate::status::SolveStatus;
use crate::trajectory::optimize_trajectory;

/// One variable block of the outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Block {
    SourcePower,
    JammingPower,
    Trajectory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_outer: usize,
    /// Fractional-increase threshold; `None` uses the scenario's.
    pub tol: Option<f64>,
    /// Blocks visited in every round, in order.
    pub blocks: Vec<Block>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_outer: 100,
            tol: None,
            blocks: vec![Block::SourcePower, Block::JammingPower, Block::Trajectory],
        }
    }
}

/// Starting point of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDesign {
    pub trajectory: Trajectory,
    pub powers: PowerProfile,
}

impl InitialDesign {
    /// Straight line at constant speed with both powers at their averages.
    pub fn default_for(s: &Scenario) -> Self {
        InitialDesign {
            trajectory: Trajectory::straight_line(s.q0, s.qf, s.n_slots),
            powers: PowerProfile::average(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub trajectory: Trajectory,
    pub p_s: Vec<f64>,
    pub p_u: Vec<f64>,
    /// `B dt sum(max(r_sec, 0)) / sum(E_p)`.
    pub ee_bits_per_joule: f64,
    /// Same ratio without the slot length, `B sum(max(r_sec, 0)) / sum(E_p)`.
    pub ee_rate_form: f64,
    pub slots: Vec<SlotMetrics>,
    pub total_energy_j: f64,
    /// `B dt sum(max(r_sec, 0))`.
    pub total_bits: f64,
    /// Efficiency after every round, starting with the initial design.
    pub history: Vec<f64>,
    pub status: SolveStatus,
    pub outer_iters: usize,
}

impl SolveResult {
    fn from_state(
        state: &State,
        eval: Evaluation,
        s: &Scenario,
        history: Vec<f64>,
        status: SolveStatus,
        outer_iters: usize,
    ) -> Self {
        SolveResult {
            trajectory: state.q.clone(),
            p_s: state.powers.p_s.clone(),
            p_u: state.powers.p_u.clone(),
            ee_bits_per_joule: eval.ee,
            ee_rate_form: eval.ee / s.slot_len,
            total_energy_j: eval.total_energy,
            total_bits: s.bandwidth * s.slot_len * eval.rate_sum_clamped,
            slots: eval.slots,
            history,
            status,
            outer_iters,
        }
    }

    pub fn powers(&self) -> PowerProfile {
        PowerProfile {
            p_s: self.p_s.clone(),
            p_u: self.p_u.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct State {
    q: Trajectory,
    powers: PowerProfile,
}

fn measure(state: &State, s: &Scenario, d: &DerivedConstants) -> Result<Evaluation> {
    evaluate(&state.q, &state.powers, s, d)
}

fn source_block(state: &mut State, s: &Scenario, d: &DerivedConstants) -> Result<()> {
    let c = SourceCoeffs::new(&state.q, &state.powers.p_u, s, d);
    let sol = optimize_source_power(&c, s.pbar_s, s.pmax_s);
    let before = measure(state, s, d)?;
    // the incumbent with its losing slots silenced is always available
    let mut fallback = state.powers.p_s.clone();
    for (p, m) in fallback.iter_mut().zip(&before.slots) {
        if m.r_sec < 0.0 {
            *p = 0.0;
        }
    }
    let obj_new = crate::source_power::objective(&c, &sol.power);
    let obj_old = crate::source_power::objective(&c, &fallback);
    state.powers.p_s = if obj_new >= obj_old {
        sol.power
    } else {
        fallback
    };
    Ok(())
}

fn jamming_block(state: &mut State, s: &Scenario, d: &DerivedConstants) -> Result<SolveStatus> {
    let jc = JamCoeffs::new(&state.q, &state.powers.p_s, s, d);
    let sol = optimize_jamming_power(&state.powers.p_u, &jc, d.beta0, s.pbar_u, s.pmax_u);
    let before = measure(state, s, d)?;
    let mut trial = state.clone();
    trial.powers.p_u = sol.power;
    let after = measure(&trial, s, d)?;
    if after.rate_sum >= before.rate_sum {
        *state = trial;
    }
    Ok(sol.status)
}

fn trajectory_block(
    state: &mut State,
    s: &Scenario,
    d: &DerivedConstants,
    guard_clamped: bool,
) -> Result<SolveStatus> {
    let sol = optimize_trajectory(&state.q, &state.powers, s)?;
    let before = measure(state, s, d)?;
    let mut trial = state.clone();
    trial.q = sol.trajectory;
    let after = measure(&trial, s, d)?;
    let keep =
        after.ee_unclamped >= before.ee_unclamped && (!guard_clamped || after.ee >= before.ee);
    if keep {
        *state = trial;
    }
    Ok(sol.status)
}

/// Runs the outer loop over the given blocks from `init`.
pub fn solve_blocks(
    s: &Scenario,
    init: &InitialDesign,
    opts: &SolverOptions,
) -> Result<SolveResult> {
    s.validate()?;
    if opts.max_outer == 0 {
        return Err(Error::InvalidInput("max_outer must be at least 1".into()));
    }
    let tol = opts.tol.unwrap_or(s.tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = s.derive();
    if init.trajectory.n_slots() != s.n_slots {
        return Err(Error::InvalidInput(format!(
            "initial trajectory has {} slots, scenario has {}",
            init.trajectory.n_slots(),
            s.n_slots
        )));
    }
    crate::trajectory::init_slacks(&init.trajectory, s)?;
    init.powers.check(s)?;

    let mut state = State {
        q: init.trajectory.clone(),
        powers: init.powers.clone(),
    };
    // without a source block nothing restores nonnegative slot rates, so
    // steps must not lower the reported efficiency either
    let guard_clamped = !opts.blocks.contains(&Block::SourcePower);
    let mut ee = measure(&state, s, &d)?.ee;
    let mut history = vec![ee];
    let mut status = SolveStatus::Converged;
    for round in 1..=opts.max_outer {
        for block in &opts.blocks {
            match block {
                Block::SourcePower => source_block(&mut state, s, &d)?,
                Block::JammingPower => {
                    let st = jamming_block(&mut state, s, &d)?;
                    status = status.merge(quiet(st));
                }
                Block::Trajectory => {
                    let st = trajectory_block(&mut state, s, &d, guard_clamped)?;
                    status = status.merge(quiet(st));
                }
            }
        }
        let ee_new = measure(&state, s, &d)?.ee;
        history.push(ee_new);
        let done = if ee > 0.0 {
            (ee_new - ee) / ee < tol
        } else {
            ee_new - ee <= 0.0
        };
        debug!("round {round}: ee {ee_new:.9e}");
        ee = ee_new;
        if done {
            info!("converged after {round} rounds, ee {ee:.6e} bits/J");
            let eval = measure(&state, s, &d)?;
            return Ok(SolveResult::from_state(
                &state, eval, s, history, status, round,
            ));
        }
    }
    let eval = measure(&state, s, &d)?;
    Ok(SolveResult::from_state(
        &state,
        eval,
        s,
        history,
        status.merge(SolveStatus::IterationCap),
        opts.max_outer,
    ))
}

/// Inner caps are benign for the outer loop: every block result is checked
/// for ascent before it is kept.
fn quiet(st: SolveStatus) -> SolveStatus {
    match st {
        SolveStatus::IterationCap => SolveStatus::Converged,
        other => other,
    }
}

/// Joint design of source power, jamming power and trajectory.
pub fn solve_pt(s: &Scenario, init: Option<&InitialDesign>) -> Result<SolveResult> {
    solve_pt_with(s, init, &SolverOptions::default())
}

pub fn solve_pt_with(
    s: &Scenario,
    init: Option<&InitialDesign>,
    opts: &SolverOptions,
) -> Result<SolveResult> {
    let default = InitialDesign::default_for(s);
    solve_blocks(s, init.unwrap_or(&default), opts)
}
