//! Shared fixtures for the planner benchmarks.

use crossbcast::{generate_random_cross, CrossNetwork, SourceMode};

/// Deterministic benchmark instances, one per size.
pub fn bench_cross(n: usize) -> CrossNetwork {
    generate_random_cross(n, 0xBEEF ^ n as u64, 1.0, SourceMode::Uniform)
        .expect("benchmark instance generates")
}

pub fn bench_cross_at_intersection(n: usize) -> CrossNetwork {
    generate_random_cross(n, 0xFEED ^ n as u64, 1.0, SourceMode::Intersection)
        .expect("benchmark instance generates")
}
