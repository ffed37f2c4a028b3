//! Line-of-sight channel gains and the expectation-bounded rates.
//!
//! The UAV rate is the lower bound obtained by averaging the loop
//! interference inside the logarithm; the eavesdropper rate is the upper
//! bound obtained by averaging the Rayleigh gain of the ground link. Channels
//! for slot `n` are evaluated at the slot-end waypoint `q[n]`.

use crate::geometry::Point;
use crate::scenario::{DerivedConstants, Scenario};

/// Per-slot link quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotLink {
    pub h_su: f64,
    pub h_ue: f64,
    /// Achievable rate at the UAV, bps/Hz.
    pub r_u: f64,
    /// Leakage rate at the eavesdropper, bps/Hz.
    pub r_e: f64,
    /// `r_u - r_e`, unclamped.
    pub r_sec: f64,
}

/// `H^2 + ||q||^2`, squared distance from the UAV to the source.
pub fn dist_sq_su(q: Point, s: &Scenario) -> f64 {
    s.altitude * s.altitude + q.norm_sq()
}

/// `H^2 + ||q - w_E||^2`, squared distance from the UAV to the eavesdropper.
pub fn dist_sq_ue(q: Point, s: &Scenario) -> f64 {
    s.altitude * s.altitude + (q - s.eve).norm_sq()
}

pub fn gain_su(q: Point, s: &Scenario) -> f64 {
    s.rho0 / dist_sq_su(q, s)
}

pub fn gain_ue(q: Point, s: &Scenario) -> f64 {
    s.rho0 / dist_sq_ue(q, s)
}

/// Path-loss factor `||w_E||^-kappa` of the ground source-to-eavesdropper link.
pub fn ground_loss(s: &Scenario) -> f64 {
    s.eve.norm().powf(-s.kappa)
}

pub fn rate_uav(p_s: f64, p_u: f64, q: Point, s: &Scenario, d: &DerivedConstants) -> f64 {
    let snr = p_s * d.gamma0 / (dist_sq_su(q, s) * (p_u * d.beta0 + 1.0));
    snr.ln_1p() / std::f64::consts::LN_2
}

pub fn rate_eve(p_s: f64, p_u: f64, q: Point, s: &Scenario, d: &DerivedConstants) -> f64 {
    let jam = p_u * d.gamma0 / dist_sq_ue(q, s);
    let snr = p_s * d.gamma0 * ground_loss(s) / (jam + 1.0);
    snr.ln_1p() / std::f64::consts::LN_2
}

/// Unclamped secrecy rate `r_u - r_e`; may be negative.
pub fn secrecy_rate(p_s: f64, p_u: f64, q: Point, s: &Scenario, d: &DerivedConstants) -> f64 {
    rate_uav(p_s, p_u, q, s, d) - rate_eve(p_s, p_u, q, s, d)
}

/// Secrecy rate clamped at zero, as reported.
pub fn secrecy_rate_clamped(
    p_s: f64,
    p_u: f64,
    q: Point,
    s: &Scenario,
    d: &DerivedConstants,
) -> f64 {
    secrecy_rate(p_s, p_u, q, s, d).max(0.0)
}

pub fn slot_link(p_s: f64, p_u: f64, q: Point, s: &Scenario, d: &DerivedConstants) -> SlotLink {
    let r_u = rate_uav(p_s, p_u, q, s, d);
    let r_e = rate_eve(p_s, p_u, q, s, d);
    SlotLink {
        h_su: gain_su(q, s),
        h_ue: gain_ue(q, s),
        r_u,
        r_e,
        r_sec: r_u - r_e,
    }
}
