//! Range assignments, the energy cost functional, and broadcast
//! reachability over arbitrary point sets.

use crate::cross::{CrossNetwork, NodeId};
use crate::error::{Error, Result};
use crate::geom::{covered, dist, pow_alpha, Point2, COVER_EPS_ABS, COVER_EPS_REL};

/// A transmission radius per node plus the path-loss exponent used to
/// price it.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeAssignment {
    ranges: Vec<f64>,
    alpha: f64,
}

impl RangeAssignment {
    pub fn new(ranges: Vec<f64>, alpha: f64) -> Result<Self> {
        if !(2.0..=6.0).contains(&alpha) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in [2, 6], got {alpha}"
            )));
        }
        for (i, &r) in ranges.iter().enumerate() {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "range of node {i} must be finite and non-negative, got {r}"
                )));
            }
        }
        Ok(Self { ranges, alpha })
    }

    pub fn zeros(n: usize, alpha: f64) -> Self {
        Self {
            ranges: vec![0.0; n],
            alpha,
        }
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn range(&self, id: NodeId) -> f64 {
        self.ranges[id]
    }

    pub fn set_range(&mut self, id: NodeId, r: f64) {
        self.ranges[id] = r;
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    /// Total consumed energy: the sum of `r^alpha` over all nodes.
    pub fn cost(&self) -> f64 {
        self.ranges.iter().map(|&r| pow_alpha(r, self.alpha)).sum()
    }
}

/// Total energy of an assignment. Free-function form of
/// [`RangeAssignment::cost`].
pub fn cost(assignment: &RangeAssignment) -> f64 {
    assignment.cost()
}

/// Result of propagating one broadcast to its fixpoint.
#[derive(Clone, Debug)]
pub struct BroadcastOutcome {
    reached: Vec<bool>,
    reached_count: usize,
    /// For each reached node except the source: the transmitter that first
    /// covered it.
    parent: Vec<Option<NodeId>>,
    /// Number of hop waves in which at least one new node was covered.
    rounds: usize,
}

impl BroadcastOutcome {
    pub fn is_reached(&self, id: NodeId) -> bool {
        self.reached[id]
    }

    pub fn reached_count(&self) -> usize {
        self.reached_count
    }

    pub fn all_reached(&self) -> bool {
        self.reached_count == self.reached.len()
    }

    pub fn reached_nodes(&self) -> Vec<NodeId> {
        (0..self.reached.len()).filter(|&i| self.reached[i]).collect()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }
}

/// Propagate a broadcast from `source` to its fixpoint: every covered node
/// retransmits with its own assigned range. Transmitters within a wave are
/// processed in increasing node id, which makes the parent map
/// deterministic; the reached set itself is order-independent.
pub fn simulate_broadcast(
    positions: &[Point2],
    source: NodeId,
    assignment: &RangeAssignment,
) -> BroadcastOutcome {
    let n = positions.len();
    assert_eq!(assignment.len(), n, "assignment size must match network");
    let mut reached = vec![false; n];
    let mut parent = vec![None; n];
    reached[source] = true;
    let mut reached_count = 1;
    let mut frontier = vec![source];
    let mut rounds = 0;

    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            let r = assignment.range(u);
            if r <= 0.0 {
                continue;
            }
            for v in 0..n {
                if !reached[v] && covered(r, dist(positions[u], positions[v])) {
                    reached[v] = true;
                    reached_count += 1;
                    parent[v] = Some(u);
                    next.push(v);
                }
            }
        }
        if !next.is_empty() {
            rounds += 1;
        }
        next.sort_unstable();
        frontier = next;
    }

    BroadcastOutcome {
        reached,
        reached_count,
        parent,
        rounds,
    }
}

/// `true` iff the broadcast reaches every node.
pub fn reaches_all(positions: &[Point2], source: NodeId, assignment: &RangeAssignment) -> bool {
    simulate_broadcast(positions, source, assignment).all_reached()
}

/// The dependency relation: does `b` receive the data only via `a`'s
/// transmission? Decided by knocking out `a` (range set to zero) and
/// re-simulating. Quadratic per query; this is an audit tool, not a hot
/// path.
pub fn depends_on(
    positions: &[Point2],
    source: NodeId,
    assignment: &RangeAssignment,
    b: NodeId,
    a: NodeId,
) -> bool {
    assert_ne!(a, b, "dependency of a node on itself is undefined");
    let before = simulate_broadcast(positions, source, assignment);
    if !before.is_reached(b) {
        return false;
    }
    let mut knocked = assignment.clone();
    knocked.set_range(a, 0.0);
    !simulate_broadcast(positions, source, &knocked).is_reached(b)
}

/// Outcome of [`increased_range_audit`].
#[derive(Clone, Debug)]
pub struct RangeAudit {
    /// Ordinary nodes transmitting strictly beyond their next hop.
    pub increased: Vec<NodeId>,
    /// Whether every other ordinary node transmits with exactly 0 or its
    /// hop distance.
    pub shape_ok: bool,
}

/// Audit which ordinary nodes (outside source and diamond) have increased
/// range, and whether the rest follow the hop-or-nothing shape.
pub fn increased_range_audit(net: &CrossNetwork, assignment: &RangeAssignment) -> RangeAudit {
    let mut increased = Vec::new();
    let mut shape_ok = true;
    for &id in net.n_hat() {
        let r = assignment.range(id);
        let m = net.hop_distance(id);
        if r > m * (1.0 + COVER_EPS_REL) + COVER_EPS_ABS {
            increased.push(id);
        } else {
            let is_zero = r <= COVER_EPS_ABS;
            let is_hop = (r - m).abs() <= m * COVER_EPS_REL + COVER_EPS_ABS;
            if !is_zero && !is_hop {
                shape_ok = false;
            }
        }
    }
    RangeAudit { increased, shape_ok }
}

/// Check the same-segment prefix property of an outcome: whenever a node
/// is reached, every node before it on its segment is reached too.
pub fn prefix_property_holds(net: &CrossNetwork, outcome: &BroadcastOutcome) -> bool {
    use crate::cross::SegmentLabel;
    for label in SegmentLabel::ALL {
        let seg = net.segment_nodes(label);
        let mut seen_unreached = false;
        for &id in seg {
            if !outcome.is_reached(id) {
                seen_unreached = true;
            } else if seen_unreached {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross::CrossNetwork;

    fn fixture() -> CrossNetwork {
        // source (-2,0); n0..n4 = (-3,0), (-1,0), (1,0), (0,2), (0,-1)
        CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![
                Point2::new(-3.0, 0.0),
                Point2::new(-1.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 2.0),
                Point2::new(0.0, -1.0),
            ],
            4.0,
        )
        .unwrap()
    }

    #[test]
    fn cost_examples() {
        let a = RangeAssignment::new(vec![0.0, 0.0, 0.0], 2.0).unwrap();
        assert_eq!(a.cost(), 0.0);
        let a = RangeAssignment::new(vec![1.0, 2.0], 2.0).unwrap();
        assert_eq!(a.cost(), 5.0);
        let a = RangeAssignment::new(
            vec![1.0, 5f64.sqrt(), 2f64.sqrt(), 0.0, 0.0, 0.0],
            2.0,
        )
        .unwrap();
        assert!((a.cost() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_assignments() {
        assert!(RangeAssignment::new(vec![1.0], 1.5).is_err());
        assert!(RangeAssignment::new(vec![-0.1], 2.0).is_err());
        assert!(RangeAssignment::new(vec![f64::NAN], 2.0).is_err());
    }

    #[test]
    fn one_hop_star_reaches_all_in_one_round() {
        let net = fixture();
        let max_d = (0..net.node_count())
            .filter(|&u| u != net.source())
            .map(|u| net.dist(net.source(), u))
            .fold(0.0, f64::max);
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        a.set_range(net.source(), max_d);
        let out = simulate_broadcast(net.positions(), net.source(), &a);
        assert!(out.all_reached());
        assert_eq!(out.rounds(), 1);
        for id in 0..net.node_count() {
            if id != net.source() {
                assert_eq!(out.parent(id), Some(net.source()));
            }
        }
    }

    #[test]
    fn all_zero_ranges_reach_only_the_source() {
        let net = fixture();
        let a = RangeAssignment::zeros(net.node_count(), 2.0);
        let out = simulate_broadcast(net.positions(), net.source(), &a);
        assert_eq!(out.reached_nodes(), vec![net.source()]);
        assert_eq!(out.rounds(), 0);
        assert!(!reaches_all(net.positions(), net.source(), &a));
    }

    #[test]
    fn hand_propagated_assignment_reaches_all_six_nodes() {
        // R(s)=1 covers n0 and n1; R(n1)=sqrt(5) covers n2, n3, n4.
        let net = fixture();
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        a.set_range(net.source(), 1.0);
        a.set_range(1, 5f64.sqrt());
        a.set_range(4, 2f64.sqrt());
        let out = simulate_broadcast(net.positions(), net.source(), &a);
        assert!(out.all_reached());
        assert_eq!(out.parent(0), Some(net.source()));
        assert_eq!(out.parent(1), Some(net.source()));
        assert_eq!(out.parent(2), Some(1));
        assert!((cost(&a) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn depends_on_examples() {
        let net = fixture();
        // one-hop star: nothing depends on any non-source node
        let max_d = (0..5).map(|u| net.dist(net.source(), u)).fold(0.0, f64::max);
        let mut star = RangeAssignment::zeros(net.node_count(), 2.0);
        star.set_range(net.source(), max_d);
        for b in 0..5 {
            for a in 0..5 {
                if a != b {
                    assert!(!depends_on(net.positions(), net.source(), &star, b, a));
                }
            }
        }
        // chain s -> n1 -> n2: n2 depends on n1
        let chain_net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)],
            4.0,
        )
        .unwrap();
        let mut chain = RangeAssignment::zeros(3, 2.0);
        chain.set_range(chain_net.source(), 1.0);
        chain.set_range(0, 2.0);
        assert!(reaches_all(chain_net.positions(), chain_net.source(), &chain));
        assert!(depends_on(chain_net.positions(), chain_net.source(), &chain, 1, 0));
        assert!(!depends_on(chain_net.positions(), chain_net.source(), &chain, 0, 1));
    }

    #[test]
    fn dependency_is_antisymmetric_when_all_reached() {
        let net = fixture();
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        a.set_range(net.source(), 1.0);
        a.set_range(1, 5f64.sqrt());
        a.set_range(4, 2f64.sqrt());
        assert!(reaches_all(net.positions(), net.source(), &a));
        for x in 0..net.node_count() {
            for y in 0..net.node_count() {
                if x != y {
                    let xy = depends_on(net.positions(), net.source(), &a, x, y);
                    let yx = depends_on(net.positions(), net.source(), &a, y, x);
                    assert!(!(xy && yx), "mutual dependency between {x} and {y}");
                }
            }
        }
    }

    #[test]
    fn same_segment_predecessor_never_depends_on_successor() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![
                Point2::new(-2.5, 0.0),
                Point2::new(-3.5, 0.0),
                Point2::new(-4.0, 0.0),
                Point2::new(1.0, 0.0),
            ],
            5.0,
        )
        .unwrap();
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        a.set_range(net.source(), 3.0);
        a.set_range(1, 0.5);
        a.set_range(3, 1.0);
        assert!(reaches_all(net.positions(), net.source(), &a));
        use crate::cross::SegmentLabel;
        for label in SegmentLabel::ALL {
            let seg = net.segment_nodes(label);
            for (i, &before) in seg.iter().enumerate() {
                for &after in &seg[i + 1..] {
                    assert!(!depends_on(net.positions(), net.source(), &a, before, after));
                }
            }
        }
    }

    #[test]
    fn audit_flags_shapes() {
        let net = fixture();
        // hop-by-hop only: nothing increased, shape ok
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        for &id in net.n_hat() {
            a.set_range(id, net.hop_distance(id));
        }
        let audit = increased_range_audit(&net, &a);
        assert!(audit.increased.is_empty());
        assert!(audit.shape_ok);

        // a half-hop range violates the shape
        let target = net.n_hat()[0];
        let hop = net.hop_distance(target);
        if hop > 0.0 {
            a.set_range(target, hop / 2.0);
            let audit = increased_range_audit(&net, &a);
            assert!(!audit.shape_ok);
        }

        // beyond the hop counts as increased
        let mut b = RangeAssignment::zeros(net.node_count(), 2.0);
        b.set_range(target, net.hop_distance(target) + 1.0);
        let audit = increased_range_audit(&net, &b);
        assert_eq!(audit.increased, vec![target]);
    }

    #[test]
    fn raising_a_range_never_shrinks_the_reached_set() {
        let net = fixture();
        let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
        a.set_range(net.source(), 1.0);
        a.set_range(1, 1.2);
        let before = simulate_broadcast(net.positions(), net.source(), &a);
        for id in 0..net.node_count() {
            for bump in [0.3, 1.0, 2.5] {
                let mut raised = a.clone();
                raised.set_range(id, a.range(id) + bump);
                let after = simulate_broadcast(net.positions(), net.source(), &raised);
                for v in before.reached_nodes() {
                    assert!(after.is_reached(v));
                }
            }
        }
    }

    #[test]
    fn prefix_property_on_simulations() {
        let net = fixture();
        for (rs, r1) in [(0.5, 0.0), (1.0, 1.5), (1.0, 5f64.sqrt()), (3.5, 0.2)] {
            let mut a = RangeAssignment::zeros(net.node_count(), 2.0);
            a.set_range(net.source(), rs);
            a.set_range(1, r1);
            let out = simulate_broadcast(net.positions(), net.source(), &a);
            assert!(prefix_property_holds(&net, &out));
        }
    }
}
