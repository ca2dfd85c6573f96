//! Planar points and the distance/coverage primitives shared by every
//! algorithm in the crate.

use serde::{Deserialize, Serialize};

/// Relative slack applied when testing whether a distance is within a
/// transmission range. Absorbs floating-point round-off only; it is far
/// below the distance gaps of any valid instance.
pub const COVER_EPS_REL: f64 = 1e-12;
/// Absolute slack companion to [`COVER_EPS_REL`].
pub const COVER_EPS_ABS: f64 = 1e-12;

/// Minimum separation required between any two pairwise distances on
/// ingest. Ties at or below this are rejected as degenerate.
pub const DISTINCT_DIST_EPS: f64 = 1e-9;

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Distance from the coordinate origin.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

/// Euclidean distance. Every module computes distances through this one
/// function so that equal geometric quantities are bit-identical wherever
/// they appear.
pub fn dist(a: Point2, b: Point2) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// `true` iff a node at distance `d` receives a transmission of radius `r`.
pub fn covered(r: f64, d: f64) -> bool {
    d <= r * (1.0 + COVER_EPS_REL) + COVER_EPS_ABS
}

/// `r^alpha` with an exact fast path for the default path-loss exponent.
pub fn pow_alpha(r: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        r * r
    } else {
        r.powf(alpha)
    }
}

/// Scan all pairwise distances of a point set for ties within
/// [`DISTINCT_DIST_EPS`]. Returns a diagnostic for the first tie found.
pub fn distinct_distance_violation(positions: &[Point2]) -> Option<String> {
    let n = positions.len();
    let mut all: Vec<(f64, usize, usize)> = Vec::with_capacity(n.saturating_mul(n) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            all.push((dist(positions[i], positions[j]), i, j));
        }
    }
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in all.windows(2) {
        if (w[1].0 - w[0].0).abs() <= DISTINCT_DIST_EPS {
            return Some(format!(
                "d({}, {}) = {} and d({}, {}) = {} differ by less than {}",
                w[0].1, w[0].2, w[0].0, w[1].1, w[1].2, w[1].0, DISTINCT_DIST_EPS
            ));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_is_symmetric_and_exact_on_axes() {
        let a = Point2::new(-3.0, 0.0);
        let b = Point2::new(-2.0, 0.0);
        assert_eq!(dist(a, b), 1.0);
        assert_eq!(dist(a, b), dist(b, a));
    }

    #[test]
    fn covered_accepts_exact_boundary() {
        assert!(covered(1.0, 1.0));
        assert!(covered(0.0, 0.0));
        assert!(!covered(1.0, 1.0 + 1e-6));
    }

    #[test]
    fn pow_alpha_matches_powf() {
        assert_eq!(pow_alpha(3.0, 2.0), 9.0);
        assert!((pow_alpha(2.0, 3.0) - 8.0).abs() < 1e-12);
    }
}
