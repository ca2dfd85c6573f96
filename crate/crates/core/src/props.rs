//! Randomized invariant suite, runnable from the command line and from
//! the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::{
    depends_on, prefix_property_holds, reaches_all, simulate_broadcast, RangeAssignment,
};
use crate::cross::coverage_extents_at;
use crate::generate::{generate_random_cross, SourceMode};
use crate::geom::pow_alpha;
use crate::planners::{bip_assignment, distributed_assignment};

#[derive(Clone, Debug)]
pub struct PropResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub detail: Option<String>,
}

impl PropResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn record(name: &'static str, cases: u64, failures: u64, detail: Option<String>) -> PropResult {
    PropResult {
        name,
        cases,
        failures,
        detail,
    }
}

/// Sum-power superadditivity: `(sum a_k)^alpha >= sum a_k^alpha` for
/// positive vectors and `alpha >= 2`.
pub fn check_superadditivity(seed: u64, cases: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = None;
    for _ in 0..cases {
        let w = rng.random_range(1..=10);
        let alpha: f64 = rng.random_range(2.0..=6.0);
        let parts: Vec<f64> = (0..w).map(|_| rng.random_range(1e-6..10.0)).collect();
        let total: f64 = parts.iter().sum();
        let lhs = pow_alpha(total, alpha);
        let rhs: f64 = parts.iter().map(|&a| pow_alpha(a, alpha)).sum();
        if lhs < rhs * (1.0 - 1e-12) {
            failures += 1;
            detail.get_or_insert_with(|| format!("parts {parts:?} alpha {alpha}"));
        }
    }
    record("superadditivity", cases, failures, detail)
}

/// Coverage extents keep their order: own-line reach >= perpendicular
/// reach >= opposite reach.
pub fn check_extent_ordering(seed: u64, cases: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = None;
    for _ in 0..cases {
        let r: f64 = rng.random_range(0.0..10.0);
        let h: f64 = rng.random_range(0.0..10.0);
        let e = coverage_extents_at(r, h);
        if !(e.same >= e.perp && e.perp >= e.oppo && e.oppo >= 0.0) {
            failures += 1;
            detail.get_or_insert_with(|| format!("r {r} h {h} -> {e:?}"));
        }
    }
    record("extent-ordering", cases, failures, detail)
}

/// Receivers grow monotonically with range.
pub fn check_receiver_monotonicity(seed: u64, cases: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = None;
    for case in 0..cases {
        let n = rng.random_range(3..20);
        let net = match generate_random_cross(n, seed ^ case, 1.0, SourceMode::Uniform) {
            Ok(net) => net,
            Err(_) => continue,
        };
        let id = rng.random_range(0..net.node_count());
        let r1: f64 = rng.random_range(0.0..2.0);
        let r2: f64 = r1 + rng.random_range(0.0..1.0);
        let small = net.receivers(id, r1);
        let big = net.receivers(id, r2);
        if !small.iter().all(|u| big.contains(u)) {
            failures += 1;
            detail.get_or_insert_with(|| format!("node {id} r1 {r1} r2 {r2}"));
        }
    }
    record("receiver-monotonicity", cases, failures, detail)
}

/// Whenever a node is covered, so is every node before it on its segment.
pub fn check_prefix_property(seed: u64, cases: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = None;
    for case in 0..cases {
        let n = rng.random_range(3..25);
        let net = match generate_random_cross(n, seed ^ (case << 1), 1.0, SourceMode::Uniform) {
            Ok(net) => net,
            Err(_) => continue,
        };
        let ranges: Vec<f64> = (0..net.node_count())
            .map(|_| {
                if rng.random_bool(0.4) {
                    0.0
                } else {
                    rng.random_range(0.0..2.0)
                }
            })
            .collect();
        let a = RangeAssignment::new(ranges, 2.0).unwrap();
        let out = simulate_broadcast(net.positions(), net.source(), &a);
        if !prefix_property_holds(&net, &out) {
            failures += 1;
            detail.get_or_insert_with(|| format!("case {case} n {n}"));
        }
    }
    record("simulation-prefix", cases, failures, detail)
}

/// Two nodes never depend on each other both ways in a delivering
/// assignment.
pub fn check_dependency_antisymmetry(seed: u64, cases: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = None;
    for case in 0..cases {
        let n = rng.random_range(4..10);
        let net = match generate_random_cross(n, seed ^ (case << 2), 1.0, SourceMode::Uniform) {
            Ok(net) => net,
            Err(_) => continue,
        };
        let a = if rng.random_bool(0.5) {
            distributed_assignment(&net, 2.0).unwrap()
        } else {
            bip_assignment(&net, 2.0).unwrap()
        };
        if !reaches_all(net.positions(), net.source(), &a) {
            failures += 1;
            detail.get_or_insert_with(|| format!("case {case}: planner failed to deliver"));
            continue;
        }
        for x in 0..net.node_count() {
            for y in (x + 1)..net.node_count() {
                let xy = depends_on(net.positions(), net.source(), &a, x, y);
                let yx = depends_on(net.positions(), net.source(), &a, y, x);
                if xy && yx {
                    failures += 1;
                    detail.get_or_insert_with(|| format!("case {case}: mutual {x} <-> {y}"));
                }
            }
        }
    }
    record("dependency-antisymmetry", cases, failures, detail)
}

/// Run the whole suite with sizes matching the acceptance gate.
pub fn run_property_suite(seed: u64) -> Vec<PropResult> {
    vec![
        check_superadditivity(seed, 10_000),
        check_extent_ordering(seed.wrapping_add(1), 10_000),
        check_receiver_monotonicity(seed.wrapping_add(2), 300),
        check_prefix_property(seed.wrapping_add(3), 300),
        check_dependency_antisymmetry(seed.wrapping_add(4), 60),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_is_clean() {
        for r in [
            check_superadditivity(1, 500),
            check_extent_ordering(2, 500),
            check_receiver_monotonicity(3, 40),
            check_prefix_property(4, 40),
            check_dependency_antisymmetry(5, 10),
        ] {
            assert!(r.passed(), "{}: {:?}", r.name, r.detail);
        }
    }
}
