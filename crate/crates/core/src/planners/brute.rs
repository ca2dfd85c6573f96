//! Independent exhaustive oracle for small instances.
//!
//! Each node's range is drawn from `{0} ∪ {d(node, u) : u ≠ node}`. The
//! restriction is lossless: shrinking any range onto the farthest node it
//! actually has to reach never loses coverage and never costs more, so
//! the minimum over this grid is the global minimum. Feasibility of each
//! combination is decided by a reachability fixpoint, independent of any
//! planner's bookkeeping.

use crate::assignment::RangeAssignment;
use crate::cross::CrossNetwork;
use crate::error::{Error, Result};
use crate::geom::{covered, pow_alpha};

/// Default node cap: the grid has `N^N` corners.
pub const DEFAULT_BRUTE_CAP: usize = 8;

pub fn brute_force_oracle(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    brute_force_oracle_with_cap(net, alpha, DEFAULT_BRUTE_CAP)
}

pub fn brute_force_oracle_with_cap(
    net: &CrossNetwork,
    alpha: f64,
    cap: usize,
) -> Result<RangeAssignment> {
    let n = net.node_count();
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if n == 1 {
        return RangeAssignment::new(vec![0.0], alpha);
    }

    // ascending candidate ranges per node, each with its coverage mask
    let mut cands: Vec<Vec<(f64, f64, u64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut radii: Vec<f64> = vec![0.0];
        for u in 0..n {
            if u != i {
                radii.push(net.dist(i, u));
            }
        }
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let entries = radii
            .into_iter()
            .map(|r| {
                let mut mask = 0u64;
                for u in 0..n {
                    if covered(r, net.dist(i, u)) {
                        mask |= 1u64 << u;
                    }
                }
                (r, pow_alpha(r, alpha), mask)
            })
            .collect();
        cands.push(entries);
    }

    let source = net.source();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    // one-hop star: a real grid point, so pruning against it keeps every
    // candidate that could still win or tie
    let star_cost = pow_alpha(
        (0..n)
            .filter(|&u| u != source)
            .map(|u| net.dist(source, u))
            .fold(0.0, f64::max),
        alpha,
    );

    struct Dfs<'c> {
        n: usize,
        source: usize,
        full: u64,
        cands: &'c [Vec<(f64, f64, u64)>],
        choice: Vec<usize>,
        picked_mask: Vec<u64>,
        bound: f64,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Dfs<'_> {
        fn feasible(&self) -> bool {
            let mut reached = 1u64 << self.source;
            let mut frontier = reached;
            while frontier != 0 {
                let mut newly = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let i = f.trailing_zeros() as usize;
                    f &= f - 1;
                    newly |= self.picked_mask[i];
                }
                newly &= !reached;
                reached |= newly;
                frontier = newly;
            }
            reached == self.full
        }

        fn go(&mut self, level: usize, cost_so_far: f64) {
            if level == self.n {
                if self.feasible() && self.best.as_ref().is_none_or(|(c, _)| cost_so_far < *c) {
                    self.best = Some((cost_so_far, self.choice.clone()));
                    self.bound = cost_so_far;
                }
                return;
            }
            for (k, &(_, pw, mask)) in self.cands[level].iter().enumerate() {
                let c = cost_so_far + pw;
                // candidates are ascending, so everything past the bound is out
                if c > self.bound {
                    break;
                }
                self.choice[level] = k;
                self.picked_mask[level] = mask;
                self.go(level + 1, c);
            }
        }
    }

    let mut dfs = Dfs {
        n,
        source,
        full,
        cands: &cands,
        choice: vec![0; n],
        picked_mask: vec![0; n],
        bound: star_cost,
        best: None,
    };
    dfs.go(0, 0.0);

    let (_, choice) = dfs.best.expect("the one-hop star is always feasible");
    let ranges: Vec<f64> = choice.iter().enumerate().map(|(i, &k)| cands[i][k].0).collect();
    RangeAssignment::new(ranges, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{cost, reaches_all};
    use crate::geom::Point2;

    #[test]
    fn two_node_network_is_forced() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(-0.3, 0.0)],
            4.0,
        )
        .unwrap();
        let a = brute_force_oracle(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), 1.7);
        assert!((cost(&a) - 2.89).abs() < 1e-12);
    }

    #[test]
    fn three_nodes_on_a_line_go_hop_by_hop() {
        let net = CrossNetwork::new(
            Point2::new(-3.0, 0.0),
            vec![Point2::new(-2.0, 0.0), Point2::new(-1.0, 0.0)],
            4.0,
        )
        .unwrap();
        let a = brute_force_oracle(&net, 2.0).unwrap();
        assert_eq!(cost(&a), 2.0);
        assert!(reaches_all(net.positions(), net.source(), &a));
    }

    #[test]
    fn rejects_oversized_instances() {
        let pts: Vec<Point2> = (0..9).map(|i| Point2::new(0.1 * (i + 1) as f64, 0.0)).collect();
        let net = CrossNetwork::new(Point2::new(-1.0, 0.0), pts, 4.0).unwrap();
        assert!(matches!(
            brute_force_oracle(&net, 2.0),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn line_networks_cost_first_hop_plus_chain() {
        // on a single segment the optimum is the source's hop to the first
        // node followed by the per-node hops
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let n = rng.random_range(2..=7usize);
            let mut xs: Vec<f64> = (0..n - 1)
                .map(|_| rng.random_range(0.05f64..2.0))
                .collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let pts: Vec<Point2> = xs.iter().map(|&x| Point2::new(x, 0.0)).collect();
            let net = CrossNetwork::new(Point2::new(-0.5, 0.0), pts, 4.0).unwrap();
            let a = brute_force_oracle(&net, 2.0).unwrap();
            let mut expected = pow_alpha(net.dist(net.source(), 0), 2.0);
            for id in 0..n - 1 {
                expected += pow_alpha(net.hop_distance(id), 2.0);
            }
            assert!(
                (cost(&a) - expected).abs() < 1e-12,
                "hop-by-hop must be optimal on a line: {} vs {}",
                cost(&a),
                expected
            );
        }
    }

    #[test]
    fn oracle_min_never_exceeds_any_feasible_assignment() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for seed in 0..8u64 {
            let net = crate::generate::generate_random_cross(
                6,
                seed,
                1.0,
                crate::generate::SourceMode::Uniform,
            )
            .unwrap();
            let a = brute_force_oracle(&net, 2.0).unwrap();
            assert!(reaches_all(net.positions(), net.source(), &a));
            // compare against a few random feasible assignments
            for _ in 0..20 {
                let mut r = vec![0.0; net.node_count()];
                for v in r.iter_mut() {
                    *v = rng.random_range(0.0..2.5);
                }
                let cand = RangeAssignment::new(r, 2.0).unwrap();
                if reaches_all(net.positions(), net.source(), &cand) {
                    assert!(cost(&a) <= cost(&cand) + 1e-12);
                }
            }
        }
    }
}
