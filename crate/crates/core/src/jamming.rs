//! UAV jamming power for fixed source power and trajectory.
//!
//! Each slot's secrecy rate is a difference of concave functions of the
//! jamming power:
//!
//! ```text
//! log2(beta0 p + 1 + c) - log2(beta0 p + 1) - log2(e p + 1 + d) + log2(e p + 1)
//! ```
//!
//! The two subtracted concave terms are replaced by their tangents at the
//! current iterate, which bound them from above. The resulting surrogate is
//! concave, separable across slots and tight at the iterate, so maximizing it
//! never decreases the true objective. The surrogate is maximized under the
//! budget `sum(p) <= N p_bar` by bisection on the budget multiplier, with a
//! per-slot root find of the strictly decreasing surrogate slope.

use crate::geometry::Trajectory;
use crate::link::{dist_sq_su, dist_sq_ue, ground_loss};
use crate::scenario::{DerivedConstants, Scenario};
use crate::status::SolveStatus;

const LN_2: f64 = std::f64::consts::LN_2;
const MAX_SCA_ITERS: usize = 100;
const SCA_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct JamCoeffs {
    /// `p_S gamma0 / (H^2 + ||q||^2)`
    pub c: Vec<f64>,
    /// `p_S gamma0 ||w_E||^-kappa`
    pub d: Vec<f64>,
    /// `gamma0 / (H^2 + ||q - w_E||^2)`
    pub e: Vec<f64>,
}

impl JamCoeffs {
    pub fn new(q: &Trajectory, p_s: &[f64], s: &Scenario, dc: &DerivedConstants) -> Self {
        let loss = ground_loss(s);
        let mut out = JamCoeffs {
            c: Vec::with_capacity(s.n_slots),
            d: Vec::with_capacity(s.n_slots),
            e: Vec::with_capacity(s.n_slots),
        };
        for n in 1..=s.n_slots {
            let qn = q.at(n);
            let ps = p_s[n - 1];
            out.c.push(ps * dc.gamma0 / dist_sq_su(qn, s));
            out.d.push(ps * dc.gamma0 * loss);
            out.e.push(dc.gamma0 / dist_sq_ue(qn, s));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Slots without source power carry no secrecy rate at any jamming level.
    fn idle(&self, n: usize) -> bool {
        self.c[n] == 0.0 && self.d[n] == 0.0
    }
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// Secrecy rate of slot `n` as a function of its jamming power.
pub fn slot_objective(p: f64, jc: &JamCoeffs, beta0: f64, n: usize) -> f64 {
    let (c, d, e) = (jc.c[n], jc.d[n], jc.e[n]);
    let bp = beta0 * p;
    let ep = e * p;
    // log2(bp + 1 + c) - log2(bp + 1) = log2(1 + c / (bp + 1))
    log2_1p(c / (bp + 1.0)) - log2_1p(d / (ep + 1.0))
}

/// Sum of unclamped secrecy rates.
pub fn true_objective(p_u: &[f64], jc: &JamCoeffs, beta0: f64) -> f64 {
    (0..jc.len())
        .map(|n| slot_objective(p_u[n], jc, beta0, n))
        .sum()
}

/// Surrogate of slot `n` expanded at `pk`, including the constant terms so
/// it touches the true objective at `p = pk`.
pub fn slot_surrogate(p: f64, pk: f64, jc: &JamCoeffs, beta0: f64, n: usize) -> f64 {
    let (c, d, e) = (jc.c[n], jc.d[n], jc.e[n]);
    let keep = ((beta0 * p + 1.0 + c).ln() + (e * p).ln_1p()) / LN_2;
    let tangent_a = ((beta0 * pk).ln_1p() + beta0 * (p - pk) / (beta0 * pk + 1.0)) / LN_2;
    let tangent_b = ((e * pk + 1.0 + d).ln() + e * (p - pk) / (e * pk + 1.0 + d)) / LN_2;
    keep - tangent_a - tangent_b
}

pub fn surrogate_objective(p_u: &[f64], p_k: &[f64], jc: &JamCoeffs, beta0: f64) -> f64 {
    (0..jc.len())
        .map(|n| slot_surrogate(p_u[n], p_k[n], jc, beta0, n))
        .sum()
}

/// Slope of slot `n`'s surrogate; strictly decreasing in `p` unless both
/// `beta0` and `e` vanish.
pub fn surrogate_slope(p: f64, pk: f64, jc: &JamCoeffs, beta0: f64, n: usize) -> f64 {
    let (c, d, e) = (jc.c[n], jc.d[n], jc.e[n]);
    (beta0 / (beta0 * p + 1.0 + c) + e / (e * p + 1.0)
        - beta0 / (beta0 * pk + 1.0)
        - e / (e * pk + 1.0 + d))
        / LN_2
}

fn slot_response(lambda: f64, pk: f64, jc: &JamCoeffs, beta0: f64, n: usize, p_max: f64) -> f64 {
    if jc.idle(n) {
        return 0.0;
    }
    let slope = |p: f64| surrogate_slope(p, pk, jc, beta0, n);
    if slope(0.0) <= lambda {
        return 0.0;
    }
    if slope(p_max) >= lambda {
        return p_max;
    }
    let (mut lo, mut hi) = (0.0, p_max);
    while hi - lo > 1e-10 * p_max {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximizer of the concave surrogate over `0 <= p <= p_max`,
/// `sum(p) <= N p_bar`, with the budget multiplier found by bisection.
pub fn solve_surrogate(
    p_k: &[f64],
    jc: &JamCoeffs,
    beta0: f64,
    p_bar: f64,
    p_max: f64,
) -> Vec<f64> {
    solve_surrogate_with_multiplier(p_k, jc, beta0, p_bar, p_max).0
}

/// As [`solve_surrogate`], also returning the budget multiplier.
pub fn solve_surrogate_with_multiplier(
    p_k: &[f64],
    jc: &JamCoeffs,
    beta0: f64,
    p_bar: f64,
    p_max: f64,
) -> (Vec<f64>, f64) {
    let budget = jc.len() as f64 * p_bar;
    let respond = |lambda: f64| -> Vec<f64> {
        (0..jc.len())
            .map(|n| slot_response(lambda, p_k[n], jc, beta0, n, p_max))
            .collect()
    };
    let free = respond(0.0);
    if free.iter().sum::<f64>() <= budget {
        return (free, 0.0);
    }
    let mut hi = 1.0;
    let mut p_hi = respond(hi);
    while p_hi.iter().sum::<f64>() > budget {
        hi *= 2.0;
        p_hi = respond(hi);
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo < 1e-12 * hi || budget - p_hi.iter().sum::<f64>() <= 1e-13 * budget {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let p_mid = respond(mid);
        if p_mid.iter().sum::<f64>() > budget {
            lo = mid;
        } else {
            hi = mid;
            p_hi = p_mid;
        }
    }
    (p_hi, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JammingSolution {
    pub power: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

fn sca_from(start: &[f64], jc: &JamCoeffs, beta0: f64, p_bar: f64, p_max: f64) -> JammingSolution {
    let mut p: Vec<f64> = start
        .iter()
        .enumerate()
        .map(|(n, &x)| if jc.idle(n) { 0.0 } else { x.clamp(0.0, p_max) })
        .collect();
    let mut f = true_objective(&p, jc, beta0);
    for it in 1..=MAX_SCA_ITERS {
        let next = solve_surrogate(&p, jc, beta0, p_bar, p_max);
        let f_next = true_objective(&next, jc, beta0);
        if f_next < f {
            // the surrogate step is an ascent step up to rounding
            return JammingSolution {
                power: p,
                objective: f,
                iterations: it,
                status: SolveStatus::Converged,
            };
        }
        let gain = f_next - f;
        p = next;
        f = f_next;
        if gain <= SCA_REL_TOL * f.abs().max(1e-12) {
            return JammingSolution {
                power: p,
                objective: f,
                iterations: it,
                status: SolveStatus::Converged,
            };
        }
    }
    JammingSolution {
        power: p,
        objective: f,
        iterations: MAX_SCA_ITERS,
        status: SolveStatus::IterationCap,
    }
}

/// Successive convex approximation started from `start`, from silence and
/// from the uniform average profile; the best local solution wins, ties
/// going to the earlier start. `iterations` counts the winning run.
pub fn optimize_jamming_power(
    start: &[f64],
    jc: &JamCoeffs,
    beta0: f64,
    p_bar: f64,
    p_max: f64,
) -> JammingSolution {
    let n = jc.len();
    let starts = [start.to_vec(), vec![0.0; n], vec![p_bar.min(p_max); n]];
    let mut best: Option<JammingSolution> = None;
    let mut status = SolveStatus::Converged;
    for (i, s0) in starts.iter().enumerate() {
        if starts[..i].contains(s0) {
            continue;
        }
        let sol = sca_from(s0, jc, beta0, p_bar, p_max);
        status = status.merge(sol.status);
        if best.as_ref().is_none_or(|b| sol.objective > b.objective) {
            best = Some(sol);
        }
    }
    let best = best.expect("at least one start");
    JammingSolution { status, ..best }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::link::secrecy_rate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coeffs(c: &[f64], d: &[f64], e: &[f64]) -> JamCoeffs {
        JamCoeffs {
            c: c.to_vec(),
            d: d.to_vec(),
            e: e.to_vec(),
        }
    }

    #[test]
    fn zero_jamming_objective() {
        let jc = coeffs(&[50.0, 8.0], &[1.25, 1.25], &[100.0, 3.0]);
        let f = true_objective(&[0.0, 0.0], &jc, 1e3);
        let expected = (51.0f64).log2() - 2.25f64.log2() + 9.0f64.log2() - 2.25f64.log2();
        assert!((f - expected).abs() < 1e-12);
    }

    #[test]
    fn idle_slots_contribute_nothing() {
        let jc = coeffs(&[0.0], &[0.0], &[70.0]);
        for p in [0.0, 0.01, 0.04] {
            assert_eq!(true_objective(&[p], &jc, 1e3), 0.0);
        }
        let sol = optimize_jamming_power(&[0.01], &jc, 1e3, 0.01, 0.04);
        assert_eq!(sol.power, vec![0.0]);
    }

    #[test]
    fn matches_link_model() {
        let s = Scenario::reference().with_period(60.0).unwrap();
        let d = s.derive();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point> = (0..=s.n_slots)
            .map(|_| Point::new(rng.gen_range(-600.0..600.0), rng.gen_range(-600.0..600.0)))
            .collect();
        let q = Trajectory::new(pts).unwrap();
        let p_s: Vec<f64> = (0..s.n_slots)
            .map(|_| rng.gen_range(0.0..s.pmax_s))
            .collect();
        let p_u: Vec<f64> = (0..s.n_slots)
            .map(|_| rng.gen_range(0.0..s.pmax_u))
            .collect();
        let jc = JamCoeffs::new(&q, &p_s, &s, &d);
        let via_link: f64 = (1..=s.n_slots)
            .map(|n| secrecy_rate(p_s[n - 1], p_u[n - 1], q.at(n), &s, &d))
            .sum();
        let f = true_objective(&p_u, &jc, d.beta0);
        assert!((f - via_link).abs() < 1e-9, "{f} vs {via_link}");
    }

    #[test]
    fn surrogate_degenerate_coefficients() {
        let jc = coeffs(&[5.0], &[2.0], &[0.0]);
        let a = surrogate_objective(&[0.0], &[0.02], &jc, 0.0);
        let b = surrogate_objective(&[0.04], &[0.02], &jc, 0.0);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn harmful_jamming_returns_zero() {
        // huge loop interference, eavesdropper barely reachable
        let jc = coeffs(&[200.0, 80.0, 30.0], &[1.2, 1.2, 1.2], &[1e-3, 1e-3, 1e-3]);
        let beta0 = 1e6;
        for n in 0..3 {
            assert!(surrogate_slope(0.0, 0.0, &jc, beta0, n) < 0.0);
        }
        let p = solve_surrogate(&[0.0; 3], &jc, beta0, 0.01, 0.04);
        assert_eq!(p, vec![0.0; 3]);
        let sol = optimize_jamming_power(&[0.01; 3], &jc, beta0, 0.01, 0.04);
        assert_eq!(sol.power, vec![0.0; 3]);
    }

    #[test]
    fn fixed_point_terminates_quickly() {
        let jc = coeffs(&[400.0], &[1.25], &[80.0]);
        let first = optimize_jamming_power(&[0.01], &jc, 1e3, 0.01, 0.04);
        let again = optimize_jamming_power(&first.power, &jc, 1e3, 0.01, 0.04);
        assert!(again.iterations <= 2);
        assert!((again.power[0] - first.power[0]).abs() <= 1e-9);
    }

    #[test]
    fn single_slot_matches_golden_section() {
        let jc = coeffs(&[300.0], &[2.0], &[40.0]);
        let (beta0, pk, p_max) = (200.0, 0.013, 0.04);
        let p = solve_surrogate(&[pk], &jc, beta0, p_max, p_max)[0];
        // golden-section search of the concave surrogate on [0, p_max]
        let f = |x: f64| slot_surrogate(x, pk, &jc, beta0, 0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0, p_max);
        for _ in 0..200 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if f(x1) < f(x2) {
                a = x1
            } else {
                b = x2
            }
        }
        let oracle = 0.5 * (a + b);
        assert!((p - oracle).abs() <= 1e-6 * p_max, "{p} vs {oracle}");
    }

    #[test]
    fn surrogate_three_slots_matches_grid() {
        let jc = coeffs(&[300.0, 60.0, 900.0], &[2.0, 2.0, 2.0], &[40.0, 400.0, 5.0]);
        let (beta0, p_bar, p_max) = (50.0, 0.01, 0.04);
        let pk = [0.01, 0.01, 0.01];
        let p = solve_surrogate(&pk, &jc, beta0, p_bar, p_max);
        let best = surrogate_objective(&p, &pk, &jc, beta0);
        let steps = 1000;
        let h = p_max / steps as f64;
        let table: Vec<Vec<f64>> = (0..3)
            .map(|n| {
                (0..=steps)
                    .map(|i| slot_surrogate(i as f64 * h, pk[n], &jc, beta0, n))
                    .collect()
            })
            .collect();
        let mut grid_best = f64::NEG_INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                let rem = 3.0 * p_bar - (i + j) as f64 * h;
                if rem < -1e-15 {
                    break;
                }
                let kmax = ((rem / h + 1e-9).floor() as usize).min(steps);
                let third = (0..=kmax)
                    .map(|k| table[2][k])
                    .fold(f64::NEG_INFINITY, f64::max);
                grid_best = grid_best.max(table[0][i] + table[1][j] + third);
            }
        }
        assert!(best >= grid_best - 1e-12);
        assert!(
            (best - grid_best).abs() <= 1e-5 * grid_best.abs(),
            "{best} vs {grid_best}"
        );
    }

    proptest! {
        #[test]
        fn surrogate_is_a_tight_lower_bound(
            c in 0.0f64..1e3, d in 0.0f64..20.0, e in 0.0f64..1e3,
            beta0 in 0.0f64..1e4, pk in 0.0f64..0.04, p in 0.0f64..0.04,
        ) {
            let jc = coeffs(&[c], &[d], &[e]);
            let at_pk = slot_surrogate(pk, pk, &jc, beta0, 0);
            prop_assert!((at_pk - slot_objective(pk, &jc, beta0, 0)).abs() <= 1e-9);
            prop_assert!(slot_surrogate(p, pk, &jc, beta0, 0) <= slot_objective(p, &jc, beta0, 0) + 1e-9);
        }

        #[test]
        fn sca_ascent_and_feasibility(
            c in proptest::collection::vec(1.0f64..1e3, 4),
            e in proptest::collection::vec(0.1f64..1e3, 4),
            beta0 in 1.0f64..1e4, start in 0.0f64..0.01,
        ) {
            let jc = coeffs(&c, &[1.25; 4], &e);
            let (p_bar, p_max) = (0.01, 0.04);
            let s0 = vec![start; 4];
            let f0 = true_objective(&s0, &jc, beta0);
            let step = solve_surrogate(&s0, &jc, beta0, p_bar, p_max);
            let sur_new = surrogate_objective(&step, &s0, &jc, beta0);
            prop_assert!(sur_new >= surrogate_objective(&s0, &s0, &jc, beta0) - 1e-9);
            prop_assert!(true_objective(&step, &jc, beta0) >= sur_new - 1e-9);
            let sol = optimize_jamming_power(&s0, &jc, beta0, p_bar, p_max);
            prop_assert!(sol.objective >= f0 - 1e-12);
            prop_assert!(sol.power.iter().sum::<f64>() <= 4.0 * p_bar + 1e-8);
            prop_assert!(sol.power.iter().all(|&p| (0.0..=p_max).contains(&p)));
        }
    }
}
