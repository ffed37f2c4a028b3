//! Energy-efficiency maximization for a full-duplex UAV that relays a ground
//! source's confidential traffic while jamming an eavesdropper.
//!
//! The UAV receives from a source at the origin and simultaneously jams a
//! ground eavesdropper, paying for it with loop interference in its own
//! receiver. Source power, jamming power and the flight path are designed
//! jointly to maximize secure bits per joule of propulsion energy.
//!
//! ```no_run
//! use fd_uav_ee::{solve_pt, Scenario};
//!
//! let s = Scenario::reference().with_period(80.0).unwrap();
//! let r = solve_pt(&s, None).unwrap();
//! println!("{} bits/J", r.ee_bits_per_joule);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod baselines;
pub mod bcd;
pub mod cli;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod jamming;
pub mod link;
pub mod metrics;
pub mod report;
pub mod scenario;
pub mod source_power;
pub mod status;
pub mod trajectory;
pub mod units;

pub use baselines::{
    build_best_effort_trajectory, solve, solve_njt, solve_npt, solve_pbet, SchemeId,
};
pub use bcd::{solve_pt, solve_pt_with, Block, InitialDesign, SolveResult, SolverOptions};
pub use error::{Error, Result};
pub use geometry::{Point, Trajectory};
pub use metrics::{evaluate, Evaluation, PowerProfile, SlotMetrics};
pub use scenario::{load_scenario, parse_scenario, DerivedConstants, EnergyParams, Scenario};
pub use status::SolveStatus;
