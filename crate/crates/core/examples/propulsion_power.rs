//! Rotary-wing propulsion power versus speed, with the endurance- and
//! range-optimal speeds.
//!
//! cargo run --example propulsion_power

use fd_uav_ee::energy::propulsion_power;
use fd_uav_ee::Scenario;

fn main() {
    let e = Scenario::reference().energy;
    println!("{:>6} {:>10} {:>10}", "v m/s", "P W", "P/v J/m");
    for v in (0..=40).step_by(4) {
        let v = v as f64;
        let p = propulsion_power(v, &e).unwrap();
        let per_m = if v > 0.0 {
            format!("{:10.2}", p / v)
        } else {
            format!("{:>10}", "-")
        };
        println!("{v:>6.0} {p:>10.2} {per_m}");
    }
    let scan = |f: &dyn Fn(f64) -> f64| {
        (1..=6000)
            .map(|i| i as f64 * 0.01)
            .min_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap()
    };
    let p = |v: f64| propulsion_power(v, &e).unwrap();
    println!("hover power          {:.2} W", p(0.0));
    println!("max-endurance speed  {:.2} m/s", scan(&p));
    println!("max-range speed      {:.2} m/s", scan(&|v| p(v) / v));
}
