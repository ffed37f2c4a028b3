//! Per-slot evaluation of a complete design (trajectory plus powers).

use serde::{Deserialize, Serialize};

use crate::energy::{propulsion_power, trajectory_energy};
use crate::error::{Error, Result};
use crate::geometry::Trajectory;
use crate::link::slot_link;
use crate::scenario::{DerivedConstants, Scenario};

/// Source and jamming power per slot, watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub p_s: Vec<f64>,
    pub p_u: Vec<f64>,
}

impl PowerProfile {
    /// Both powers at their average limits in every slot.
    pub fn average(s: &Scenario) -> Self {
        PowerProfile {
            p_s: vec![s.pbar_s; s.n_slots],
            p_u: vec![s.pbar_u; s.n_slots],
        }
    }

    pub fn check(&self, s: &Scenario) -> Result<()> {
        let n = s.n_slots;
        if self.p_s.len() != n || self.p_u.len() != n {
            return Err(Error::InvalidInput(format!(
                "power profile must have {n} slots"
            )));
        }
        let tol = 1e-8;
        for (name, p, bar, max) in [
            ("source", &self.p_s, s.pbar_s, s.pmax_s),
            ("jamming", &self.p_u, s.pbar_u, s.pmax_u),
        ] {
            if p.iter().any(|&x| !(x >= 0.0 && x <= max * (1.0 + tol))) {
                return Err(Error::InvalidInput(format!(
                    "{name} power outside [0, {max}] W"
                )));
            }
            if p.iter().sum::<f64>() > n as f64 * bar * (1.0 + tol) {
                return Err(Error::InvalidInput(format!(
                    "{name} power exceeds its average limit {bar} W"
                )));
            }
        }
        Ok(())
    }
}

/// One trace row worth of quantities for slot `n = 1..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub p_s: f64,
    pub p_u: f64,
    pub r_u: f64,
    pub r_e: f64,
    /// Unclamped secrecy rate.
    pub r_sec: f64,
    pub e_p: f64,
}

/// A design evaluated slot by slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub slots: Vec<SlotMetrics>,
    pub total_energy: f64,
    /// `sum(r_sec)`, unclamped.
    pub rate_sum: f64,
    /// `sum(max(r_sec, 0))`.
    pub rate_sum_clamped: f64,
    /// Reported efficiency, bits/J, clamped rates.
    pub ee: f64,
    /// Efficiency with unclamped rates; the quantity the optimizer ascends.
    pub ee_unclamped: f64,
}

pub fn evaluate(
    q: &Trajectory,
    powers: &PowerProfile,
    s: &Scenario,
    d: &DerivedConstants,
) -> Result<Evaluation> {
    let energy = trajectory_energy(q, s)?;
    let speeds = q.speeds(s.slot_len);
    let mut slots = Vec::with_capacity(s.n_slots);
    for n in 1..=s.n_slots {
        let qn = q.at(n);
        let l = slot_link(powers.p_s[n - 1], powers.p_u[n - 1], qn, s, d);
        slots.push(SlotMetrics {
            n,
            x: qn.x,
            y: qn.y,
            v: speeds[n - 1],
            p_s: powers.p_s[n - 1],
            p_u: powers.p_u[n - 1],
            r_u: l.r_u,
            r_e: l.r_e,
            r_sec: l.r_sec,
            e_p: energy.per_slot[n - 1],
        });
    }
    let rate_sum: f64 = slots.iter().map(|m| m.r_sec).sum();
    let rate_sum_clamped: f64 = slots.iter().map(|m| m.r_sec.max(0.0)).sum();
    let scale = s.bandwidth * s.slot_len / energy.total;
    Ok(Evaluation {
        slots,
        total_energy: energy.total,
        rate_sum,
        rate_sum_clamped,
        ee: scale * rate_sum_clamped,
        ee_unclamped: scale * rate_sum,
    })
}

/// Hover power `P0 + Pi` of the scenario's airframe.
pub fn hover_power(s: &Scenario) -> f64 {
    propulsion_power(0.0, &s.energy).expect("zero speed is valid")
}
