use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Horizontal position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// A discretized trajectory `q[0], ..., q[N]`. Slot `n` (1-based) ends at
/// waypoint `q[n]` and covers the displacement `q[n] - q[n-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    points: Vec<Point>,
}

impl Trajectory {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(
                "a trajectory needs at least two waypoints".into(),
            ));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidInput("non-finite waypoint".into()));
        }
        Ok(Trajectory { points })
    }

    /// Uniform straight line from `from` to `to` over `n_slots` slots.
    pub fn straight_line(from: Point, to: Point, n_slots: usize) -> Self {
        let points = (0..=n_slots)
            .map(|n| {
                if n == n_slots {
                    to
                } else {
                    from.lerp(to, n as f64 / n_slots as f64)
                }
            })
            .collect();
        Trajectory { points }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn n_slots(&self) -> usize {
        self.points.len() - 1
    }

    /// Waypoint `q[n]`, `n = 0..=N`.
    pub fn at(&self, n: usize) -> Point {
        self.points[n]
    }

    /// Displacement of slot `n = 1..=N`.
    pub fn displacement(&self, n: usize) -> Point {
        self.points[n] - self.points[n - 1]
    }

    /// Per-slot speeds `v[n] = ||q[n] - q[n-1]|| / dt`, `n = 1..=N`.
    pub fn speeds(&self, slot_len: f64) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| w[1].dist(w[0]) / slot_len)
            .collect()
    }

    /// Largest distance between this and `other`, waypoint by waypoint.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.dist(*b))
            .fold(0.0, f64::max)
    }
}
