//! Rotary-wing propulsion energy and the energy-efficiency objective.

use crate::error::{Error, Result};
use crate::geometry::Trajectory;
use crate::scenario::{EnergyParams, Scenario};

/// Speed-dependent terms of the propulsion model for one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotEnergy {
    pub v: f64,
    /// Blade-profile factor `1 + 3 v^2 / U_tip^2`.
    pub phi: f64,
    /// Induced-power factor `sqrt(1 + v^4 / (4 v0^4)) - v^2 / (2 v0^2)`.
    pub varphi: f64,
    pub e_p: f64,
}

pub fn blade_factor(v: f64, ep: &EnergyParams) -> f64 {
    1.0 + 3.0 * v * v / (ep.u_tip * ep.u_tip)
}

/// Induced-power factor. Evaluated in the rationalized form
/// `1 / (sqrt(1 + x^2) + x)` with `x = v^2 / (2 v0^2)` so it stays accurate
/// at high speed.
pub fn induced_factor(v: f64, ep: &EnergyParams) -> f64 {
    let x = v * v / (2.0 * ep.v0_rotor * ep.v0_rotor);
    1.0 / (x.hypot(1.0) + x)
}

fn power_unchecked(v: f64, ep: &EnergyParams) -> f64 {
    ep.p0_blade * blade_factor(v, ep)
        + ep.pi_induced * induced_factor(v, ep).sqrt()
        + ep.parasite_coeff() * v * v * v
}

/// Propulsion power in watts at horizontal speed `v`.
pub fn propulsion_power(v: f64, ep: &EnergyParams) -> Result<f64> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "speed must be nonnegative, got {v}"
        )));
    }
    Ok(power_unchecked(v, ep))
}

pub fn slot_energy(v: f64, slot_len: f64, ep: &EnergyParams) -> Result<SlotEnergy> {
    let p = propulsion_power(v, ep)?;
    Ok(SlotEnergy {
        v,
        phi: blade_factor(v, ep),
        varphi: induced_factor(v, ep),
        e_p: slot_len * p,
    })
}

/// Per-slot propulsion energies in joules and their total.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnergy {
    pub per_slot: Vec<f64>,
    pub total: f64,
}

/// Energy of every slot of `q`. Rejects slots flown faster than `v_max`.
pub fn trajectory_energy(q: &Trajectory, s: &Scenario) -> Result<TrajectoryEnergy> {
    if q.n_slots() != s.n_slots {
        return Err(Error::InvalidInput(format!(
            "trajectory has {} slots, scenario has {}",
            q.n_slots(),
            s.n_slots
        )));
    }
    let limit = s.v_max * (1.0 + 1e-6);
    let mut per_slot = Vec::with_capacity(s.n_slots);
    for (n, v) in q.speeds(s.slot_len).into_iter().enumerate() {
        if v > limit {
            return Err(Error::InfeasibleTrajectory(format!(
                "slot {} flown at {v} m/s exceeds v_max = {} m/s",
                n + 1,
                s.v_max
            )));
        }
        per_slot.push(s.slot_len * power_unchecked(v, &s.energy));
    }
    let total = per_slot.iter().sum();
    Ok(TrajectoryEnergy { per_slot, total })
}

/// Secure bits delivered per joule of propulsion energy,
/// `B dt sum(max(r_sec, 0)) / sum(E_p)`.
pub fn energy_efficiency(r_sec: &[f64], e_p: &[f64], s: &Scenario) -> Result<f64> {
    if r_sec.len() != e_p.len() {
        return Err(Error::InvalidInput(format!(
            "{} rates but {} energies",
            r_sec.len(),
            e_p.len()
        )));
    }
    let energy: f64 = e_p.iter().sum();
    if !(energy > 0.0) {
        return Err(Error::InvalidInput("total energy must be positive".into()));
    }
    let rate: f64 = r_sec.iter().map(|r| r.max(0.0)).sum();
    Ok(s.bandwidth * s.slot_len * rate / energy)
}

/// Same ratio without the slot length in the numerator (bits/s per joule).
pub fn energy_efficiency_rate_form(r_sec: &[f64], e_p: &[f64], s: &Scenario) -> Result<f64> {
    Ok(energy_efficiency(r_sec, e_p, s)? / s.slot_len)
}
