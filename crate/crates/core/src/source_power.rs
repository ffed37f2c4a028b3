//! Source transmit power for a fixed trajectory and jamming profile.
//!
//! Per slot the objective `log2(1 + a p) - log2(1 + b p)` is concave and
//! increasing when `a > b`, so the optimum has the closed form
//!
//! ```text
//! eta = sqrt((1/(2b) - 1/(2a))^2 + (1/b - 1/a) / (mu ln 2)) - 1/(2a) - 1/(2b)
//! p   = min(max(eta, 0), p_max)   if a > b, else 0
//! ```
//!
//! where `mu >= 0` is the multiplier of the summed budget
//! `sum(p) <= N * p_bar`. Stationarity reads
//! `d/dp [log2(1 + a p) - log2(1 + b p)] = mu` for every slot strictly
//! inside `(0, p_max)`. The multiplier is found by bisection. The closed
//! form is evaluated as the stable root of the equivalent quadratic.

use crate::geometry::Trajectory;
use crate::link::{dist_sq_su, dist_sq_ue, ground_loss};
use crate::scenario::{DerivedConstants, Scenario};

const LN_2: f64 = std::f64::consts::LN_2;

/// Per-slot coefficients of the source-power subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SourceCoeffs {
    pub fn new(q: &Trajectory, p_u: &[f64], s: &Scenario, d: &DerivedConstants) -> Self {
        let loss = ground_loss(s);
        let (a, b) = (1..=s.n_slots)
            .map(|n| {
                let qn = q.at(n);
                let pu = p_u[n - 1];
                let a = d.gamma0 / (dist_sq_su(qn, s) * (pu * d.beta0 + 1.0));
                let b = d.gamma0 * loss / (d.gamma0 * pu / dist_sq_ue(qn, s) + 1.0);
                (a, b)
            })
            .unzip();
        SourceCoeffs { a, b }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Whether a slot can carry any secrecy rate; near-ties count as no.
fn has_gain(a: f64, b: f64) -> bool {
    a > b && (a - b) > 1e-12 * a
}

/// Closed-form optimum of one slot for a given multiplier. `mu = 0` is the
/// unconstrained limit.
pub fn per_slot_power(a: f64, b: f64, mu: f64, p_max: f64) -> f64 {
    if !has_gain(a, b) {
        return 0.0;
    }
    if mu <= 0.0 {
        return p_max;
    }
    // root of the stationarity quadratic, in a form that stays finite as
    // b -> 0 and avoids cancellation
    let gap = a - b;
    let eta = 2.0 * (gap / (mu * LN_2) - 1.0)
        / ((a + b) + (gap * gap + 4.0 * a * b * gap / (mu * LN_2)).sqrt());
    eta.max(0.0).min(p_max)
}

/// Objective of the subproblem, `sum(log2(1 + a p) - log2(1 + b p))`.
pub fn objective(c: &SourceCoeffs, p: &[f64]) -> f64 {
    c.a.iter()
        .zip(&c.b)
        .zip(p)
        .map(|((&a, &b), &p)| ((a * p).ln_1p() - (b * p).ln_1p()) / LN_2)
        .sum()
}

/// Slope of one slot's objective at `p`.
pub fn marginal_rate(a: f64, b: f64, p: f64) -> f64 {
    (a / (1.0 + a * p) - b / (1.0 + b * p)) / LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourcePowerSolution {
    pub power: Vec<f64>,
    /// Multiplier of the summed budget.
    pub mu: f64,
}

/// Maximizes the source-power objective under `0 <= p <= p_max` and
/// `sum(p) <= N p_bar`.
pub fn optimize_source_power(c: &SourceCoeffs, p_bar: f64, p_max: f64) -> SourcePowerSolution {
    let n = c.len();
    let budget = n as f64 * p_bar;
    let power_at = |mu: f64| -> Vec<f64> {
        c.a.iter()
            .zip(&c.b)
            .map(|(&a, &b)| per_slot_power(a, b, mu, p_max))
            .collect()
    };
    let unconstrained = power_at(0.0);
    if unconstrained.iter().sum::<f64>() <= budget {
        return SourcePowerSolution {
            power: unconstrained,
            mu: 0.0,
        };
    }

    let mut hi = 1.0;
    let mut p_hi = power_at(hi);
    while p_hi.iter().sum::<f64>() > budget {
        hi *= 2.0;
        p_hi = power_at(hi);
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo < 1e-12 * hi {
            break;
        }
        let used: f64 = p_hi.iter().sum();
        if budget - used <= 1e-13 * budget {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let p_mid = power_at(mid);
        if p_mid.iter().sum::<f64>() > budget {
            lo = mid;
        } else {
            hi = mid;
            p_hi = p_mid;
        }
    }
    SourcePowerSolution {
        power: p_hi,
        mu: hi,
    }
}
