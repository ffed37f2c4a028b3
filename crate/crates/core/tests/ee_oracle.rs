//! The efficiency of arbitrary designs recomputed from the model formulas
//! written out independently of the library.

mod common;

use common::{desk, rel};
use fd_uav_ee::{evaluate, Point, PowerProfile, Scenario, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_ee(q: &[Point], ps: &[f64], pu: &[f64], s: &Scenario) -> f64 {
    let g0 = s.rho0 / s.sigma2;
    let b0 = s.sigma_rsi2 / s.sigma2;
    let e = &s.energy;
    let h2 = s.altitude * s.altitude;
    let we = (s.eve.x * s.eve.x + s.eve.y * s.eve.y).sqrt();
    let mut bits = 0.0;
    let mut joules = 0.0;
    for n in 1..q.len() {
        let (x, y) = (q[n].x, q[n].y);
        let dsu = h2 + x * x + y * y;
        let due = h2 + (x - s.eve.x).powi(2) + (y - s.eve.y).powi(2);
        let ru = (1.0 + ps[n - 1] * g0 / (dsu * (pu[n - 1] * b0 + 1.0))).log2();
        let re = (1.0 + ps[n - 1] * g0 * we.powf(-s.kappa) / (pu[n - 1] * g0 / due + 1.0)).log2();
        bits += (ru - re).max(0.0);
        let v = ((q[n].x - q[n - 1].x).powi(2) + (q[n].y - q[n - 1].y).powi(2)).sqrt() / s.slot_len;
        let induced = ((1.0 + v.powi(4) / (4.0 * e.v0_rotor.powi(4))).sqrt()
            - v * v / (2.0 * e.v0_rotor.powi(2)))
        .sqrt();
        let p = e.p0_blade * (1.0 + 3.0 * v * v / (e.u_tip * e.u_tip))
            + e.pi_induced * induced
            + 0.5 * e.drag_ratio * e.air_density * e.solidity * e.disc_area * v.powi(3);
        joules += p * s.slot_len;
    }
    s.bandwidth * s.slot_len * bits / joules
}

#[test]
fn evaluation_matches_independent_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in [40.0, 80.0, 160.0] {
        let s = desk(t, 2.0);
        let omega = s.derive().omega;
        for _ in 0..25 {
            let line = Trajectory::straight_line(s.q0, s.qf, s.n_slots);
            let slack = 1.0 - s.q0.dist(s.qf) / (s.n_slots as f64 * omega);
            let mut pts = line.points().to_vec();
            let amp = 0.4 * slack * omega * s.n_slots as f64 / 4.0;
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            for (k, p) in pts.iter_mut().enumerate().skip(1).take(s.n_slots - 1) {
                let u = k as f64 / s.n_slots as f64;
                p.x += amp * (std::f64::consts::PI * u).sin() * phase.cos();
            }
            let q = Trajectory::new(pts).unwrap();
            let ps: Vec<f64> = (0..s.n_slots)
                .map(|_| rng.gen_range(0.0..s.pmax_s))
                .collect();
            let pu: Vec<f64> = (0..s.n_slots)
                .map(|_| rng.gen_range(0.0..s.pmax_u))
                .collect();
            if q.speeds(s.slot_len).iter().any(|&v| v > s.v_max) {
                continue;
            }
            let ev = evaluate(
                &q,
                &PowerProfile {
                    p_s: ps.clone(),
                    p_u: pu.clone(),
                },
                &s,
                &s.derive(),
            )
            .unwrap();
            let want = oracle_ee(q.points(), &ps, &pu, &s);
            assert!(rel(ev.ee, want) <= 1e-9, "{} vs {want}", ev.ee);
        }
    }
}
