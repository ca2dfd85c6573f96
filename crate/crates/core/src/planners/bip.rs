//! Greedy incremental-power broadcast tree and the transmission-pruning
//! sweep pass. Both work on arbitrary point sets.

use crate::assignment::{reaches_all, RangeAssignment};
use crate::cross::CrossNetwork;
use crate::error::{Error, Result};
use crate::geom::{dist, pow_alpha, Point2};

/// Grow a broadcast tree from the source, at each step attaching the
/// out-of-tree node whose incremental power `d(i,j)^alpha - P(i)` is
/// minimal over in-tree transmitters `i`. Ties break lexicographically on
/// (increment, transmitter id, target id).
pub fn bip_assignment_points(
    positions: &[Point2],
    source: usize,
    alpha: f64,
) -> Result<RangeAssignment> {
    let n = positions.len();
    let mut radius = vec![0.0f64; n];
    let mut in_tree = vec![false; n];
    in_tree[source] = true;

    for _ in 1..n {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if !in_tree[i] {
                continue;
            }
            let power_i = pow_alpha(radius[i], alpha);
            for j in 0..n {
                if in_tree[j] {
                    continue;
                }
                let step = pow_alpha(dist(positions[i], positions[j]), alpha) - power_i;
                let cand = (step, i, j);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (_, i, j) = best.expect("some node remains out of tree");
        let d = dist(positions[i], positions[j]);
        // greedy never picks a target inside an existing radius, so this
        // only grows
        debug_assert!(d >= radius[i]);
        radius[i] = radius[i].max(d);
        in_tree[j] = true;
    }

    RangeAssignment::new(radius, alpha)
}

pub fn bip_assignment(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    bip_assignment_points(net.positions(), net.source(), alpha)
}

/// Eliminate transmissions that are not needed for full delivery: visit
/// nodes in decreasing range order, zero each tentatively, and keep the
/// zero iff everyone is still reached. Repeats until a full pass changes
/// nothing.
pub fn sweep_points(
    positions: &[Point2],
    source: usize,
    assignment: &RangeAssignment,
) -> Result<RangeAssignment> {
    if !reaches_all(positions, source, assignment) {
        return Err(Error::InfeasibleInput(
            "sweep requires an assignment that already delivers to all nodes".into(),
        ));
    }
    let mut current = assignment.clone();
    loop {
        let mut order: Vec<usize> = (0..current.len()).collect();
        order.sort_by(|&a, &b| {
            current
                .range(b)
                .partial_cmp(&current.range(a))
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut changed = false;
        for id in order {
            if current.range(id) == 0.0 {
                continue;
            }
            let saved = current.range(id);
            current.set_range(id, 0.0);
            if reaches_all(positions, source, &current) {
                changed = true;
            } else {
                current.set_range(id, saved);
            }
        }
        if !changed {
            break;
        }
    }
    Ok(current)
}

pub fn sweep(net: &CrossNetwork, assignment: &RangeAssignment) -> Result<RangeAssignment> {
    sweep_points(net.positions(), net.source(), assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::cost;
    use crate::cross::CrossNetwork;

    #[test]
    fn relay_beats_direct_on_a_collinear_pair() {
        // nodes at distance 1 and 2 on the same side: step 1 attaches the
        // near node for 1, step 2 relays through it for 1 (vs 3 direct)
        let net = CrossNetwork::new(
            Point2::new(-3.0, 0.0),
            vec![Point2::new(-2.0, 0.0), Point2::new(-1.0, 0.0)],
            4.0,
        )
        .unwrap();
        let a = bip_assignment(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), 1.0);
        assert_eq!(a.range(0), 1.0);
        assert_eq!(a.range(1), 0.0);
        assert_eq!(cost(&a), 2.0);
    }

    #[test]
    fn single_node_gets_direct_coverage() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(0.0, 1.5)],
            4.0,
        )
        .unwrap();
        let a = bip_assignment(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), net.dist(net.source(), 0));
    }

    #[test]
    fn bip_always_delivers() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(2..20);
            let mut pts = Vec::new();
            for _ in 0..n {
                let c: f64 = rng.random_range(-1.0..1.0);
                if rng.random_bool(0.5) {
                    pts.push(Point2::new(c, 0.0));
                } else {
                    pts.push(Point2::new(0.0, c));
                }
            }
            let src = rng.random_range(0..n);
            let a = bip_assignment_points(&pts, src, 2.0).unwrap();
            assert!(reaches_all(&pts, src, &a));
        }
    }

    #[test]
    fn greedy_can_exceed_the_one_hop_star() {
        // A relay that is locally cheap twice ends up costlier than one
        // direct transmission; the star is not an upper bound for the
        // greedy tree.
        let net = CrossNetwork::new(
            Point2::new(0.0, 0.0),
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.04),
                Point2::new(0.1, 0.0),
            ],
            4.0,
        )
        .unwrap();
        let a = bip_assignment(&net, 2.0).unwrap();
        let star = pow_alpha(1.04, 2.0);
        assert!((cost(&a) - 1.1016).abs() < 1e-9);
        assert!(cost(&a) > star);
    }

    #[test]
    fn sweep_keeps_necessary_chains_untouched() {
        let net = CrossNetwork::new(
            Point2::new(-1.0, 0.0),
            vec![Point2::new(0.5, 0.0), Point2::new(1.5, 0.0)],
            4.0,
        )
        .unwrap();
        let mut hop = RangeAssignment::zeros(net.node_count(), 2.0);
        hop.set_range(net.source(), 1.5);
        hop.set_range(0, 1.0);
        assert!(reaches_all(net.positions(), net.source(), &hop));
        let swept = sweep(&net, &hop).unwrap();
        assert_eq!(swept.ranges(), hop.ranges());
    }

    #[test]
    fn sweep_removes_a_redundant_relay() {
        let net = CrossNetwork::new(
            Point2::new(-1.0, 0.0),
            vec![Point2::new(0.5, 0.0), Point2::new(1.5, 0.0)],
            4.0,
        )
        .unwrap();
        let mut star = RangeAssignment::zeros(net.node_count(), 2.0);
        star.set_range(net.source(), 2.5);
        star.set_range(0, 1.0); // redundant
        let swept = sweep(&net, &star).unwrap();
        assert_eq!(swept.range(0), 0.0);
        assert_eq!(swept.range(net.source()), 2.5);
        assert!(cost(&swept) <= cost(&star));
    }

    #[test]
    fn sweep_rejects_undelivering_input() {
        let net = CrossNetwork::new(
            Point2::new(-1.0, 0.0),
            vec![Point2::new(0.5, 0.0)],
            4.0,
        )
        .unwrap();
        let zeros = RangeAssignment::zeros(net.node_count(), 2.0);
        assert!(matches!(
            sweep(&net, &zeros),
            Err(Error::InfeasibleInput(_))
        ));
    }

    #[test]
    fn sweep_never_raises_cost_and_preserves_delivery() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.random_range(2..15);
            let mut pts = Vec::new();
            for _ in 0..n {
                let c: f64 = rng.random_range(-1.0..1.0);
                if rng.random_bool(0.5) {
                    pts.push(Point2::new(c, 0.0));
                } else {
                    pts.push(Point2::new(0.0, c));
                }
            }
            let src = rng.random_range(0..n);
            let a = bip_assignment_points(&pts, src, 2.0).unwrap();
            let swept = sweep_points(&pts, src, &a).unwrap();
            assert!(cost(&swept) <= cost(&a) + 1e-15);
            assert!(reaches_all(&pts, src, &swept));
        }
    }
}
