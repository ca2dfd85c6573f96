//! Linear-time near-optimal assignment.
//!
//! For each of the 120 segment orders: the source transmits to the first
//! node of the leading (non-empty) segment, then every segment is walked
//! first-to-last, nodes covering only their next hop when it is still
//! uncovered. After a segment is walked, only a constant number of its
//! nodes have their full receiver sets tagged: the ones reaching farthest
//! across the intersection (perpendicular and opposite extents) and, for
//! segments I and II, the one reaching farthest across the source. If the
//! next segment's first node is still uncovered, a designated bridge node
//! is re-aimed at it and same-segment transmissions it now subsumes are
//! zeroed. Orders that strand a node are discarded; the cheapest
//! surviving order wins.

use itertools::Itertools;

use crate::assignment::{reaches_all, RangeAssignment};
use crate::cross::{CrossNetwork, NodeId, SegmentLabel};
use crate::error::Result;
use crate::geom::{covered, pow_alpha};

pub fn near_optimal_assignment(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    let n = net.node_count();
    if n == 1 {
        return RangeAssignment::new(vec![0.0], alpha);
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for perm in (0..5usize).permutations(5) {
        let labels: Vec<SegmentLabel> = perm.into_iter().map(SegmentLabel::from_index).collect();
        if let Some(ranges) = try_order(net, &labels) {
            let cost: f64 = ranges.iter().map(|&r| pow_alpha(r, alpha)).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, ranges));
            }
        }
    }
    let (_, ranges) = best.expect("some segment order always delivers");
    let assignment = RangeAssignment::new(ranges, alpha)?;
    assert!(
        reaches_all(net.positions(), net.source(), &assignment),
        "near-optimal output failed to deliver; this is a bug"
    );
    Ok(assignment)
}

fn tag_receivers(net: &CrossNetwork, id: NodeId, range: f64, tagged: &mut [bool]) {
    if range <= 0.0 {
        return;
    }
    for u in 0..net.node_count() {
        if !tagged[u] && covered(range, net.dist(id, u)) {
            tagged[u] = true;
        }
    }
}

/// Run one segment order to completion. `None` when some node stays
/// uncovered at the moment its segment is walked.
fn try_order(net: &CrossNetwork, order: &[SegmentLabel]) -> Option<Vec<f64>> {
    let n = net.node_count();
    let s = net.source();
    let mut ranges = vec![0.0f64; n];
    let mut tagged = vec![false; n];
    tagged[s] = true;

    let first_nonempty = order
        .iter()
        .copied()
        .find(|&l| !net.is_segment_empty(l))?;
    let f1 = net.segment_nodes(first_nonempty)[0];
    ranges[s] = net.dist(s, f1);
    tag_receivers(net, s, ranges[s], &mut tagged);

    for (pos, &label) in order.iter().enumerate() {
        let seg = net.segment_nodes(label);

        for &nd in seg {
            if !tagged[nd] {
                return None;
            }
            match net.next_adjacent(nd) {
                Some(nx) if !tagged[nx] => {
                    ranges[nd] = net.hop_distance(nd);
                    tagged[nx] = true;
                }
                _ => ranges[nd] = 0.0,
            }
        }

        if !seg.is_empty() {
            // the two cross-intersection maximizers dominate everything the
            // segment's transmitters reach on other arms
            let argmax_by = |value: &dyn Fn(NodeId) -> f64| -> NodeId {
                let mut best = seg[0];
                let mut best_v = value(seg[0]);
                for &m in &seg[1..] {
                    let v = value(m);
                    if v > best_v {
                        best_v = v;
                        best = m;
                    }
                }
                best
            };
            let perp = argmax_by(&|m| net.coverage_extents(m, ranges[m]).perp);
            let oppo = argmax_by(&|m| net.coverage_extents(m, ranges[m]).oppo);
            tag_receivers(net, perp, ranges[perp], &mut tagged);
            tag_receivers(net, oppo, ranges[oppo], &mut tagged);
            if label == SegmentLabel::I || label == SegmentLabel::II {
                // farthest reach across the source onto the facing segment
                let across = argmax_by(&|m| ranges[m] - net.dist(s, m));
                tag_receivers(net, across, ranges[across], &mut tagged);
            }
        }

        // bridge to the immediately following segment when its first node
        // is still dark
        if pos + 1 < order.len() && label != SegmentLabel::I {
            let next_label = order[pos + 1];
            if matches!(
                next_label,
                SegmentLabel::III | SegmentLabel::IV | SegmentLabel::V
            ) {
                if let Some(f_next) = net.first_of(next_label) {
                    if !tagged[f_next] {
                        let bridge: NodeId = if label == SegmentLabel::II {
                            match net.last_of(SegmentLabel::II) {
                                Some(l2) => l2,
                                None => s,
                            }
                        } else {
                            // an empty III/IV/V segment has no bridge node;
                            // the walk of the next segment will abort anyway
                            net.first_of(label)?
                        };
                        let new_r = net.dist(bridge, f_next);
                        debug_assert!(new_r >= ranges[bridge]);
                        ranges[bridge] = new_r;
                        tag_receivers(net, bridge, new_r, &mut tagged);
                        if matches!(
                            label,
                            SegmentLabel::III | SegmentLabel::IV | SegmentLabel::V
                        ) {
                            // transmissions whose only job the bridge now does
                            for &i in seg {
                                if i == bridge {
                                    continue;
                                }
                                if let Some(nx) = net.next_adjacent(i) {
                                    if covered(new_r, net.dist(bridge, nx)) {
                                        ranges[i] = 0.0;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Some(ranges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::cost;
    use crate::geom::Point2;
    use crate::planners::brute::brute_force_oracle;
    use crate::planners::distributed::distributed_assignment;

    #[test]
    fn single_segment_stays_hop_by_hop() {
        let net = CrossNetwork::new(
            Point2::new(-1.0, 0.0),
            vec![
                Point2::new(-2.0, 0.0),
                Point2::new(-2.7, 0.0),
                Point2::new(-4.0, 0.0),
            ],
            4.0,
        )
        .unwrap();
        let a = near_optimal_assignment(&net, 2.0).unwrap();
        let expected = 1.0f64 + 0.7 * 0.7 + 1.3 * 1.3;
        assert!((cost(&a) - expected).abs() < 1e-12);
    }

    #[test]
    fn five_node_fixture_lands_between_oracle_and_distributed() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![
                Point2::new(-3.03, 0.0),
                Point2::new(-1.0, 0.0),
                Point2::new(1.02, 0.0),
                Point2::new(0.0, 2.01),
                Point2::new(0.0, -1.0),
            ],
            4.0,
        )
        .unwrap();
        let no = near_optimal_assignment(&net, 2.0).unwrap();
        let brute = brute_force_oracle(&net, 2.0).unwrap();
        let dist = distributed_assignment(&net, 2.0).unwrap();
        assert!(cost(&no) >= cost(&brute) - 1e-12);
        assert!(cost(&no) <= cost(&dist) + 1e-12);
    }

    #[test]
    fn never_beats_the_oracle_and_always_delivers() {
        for seed in [42u64, 7, 13, 21, 34] {
            for mode in [
                crate::generate::SourceMode::Uniform,
                crate::generate::SourceMode::Intersection,
            ] {
                let net = crate::generate::generate_random_cross(7, seed, 1.0, mode).unwrap();
                let no = near_optimal_assignment(&net, 2.0).unwrap();
                assert!(reaches_all(net.positions(), net.source(), &no));
                let brute = brute_force_oracle(&net, 2.0).unwrap();
                assert!(
                    cost(&no) >= cost(&brute) - 1e-9,
                    "seed {seed}: near-optimal undercut the oracle"
                );
            }
        }
    }

    #[test]
    fn delivers_on_larger_instances_too() {
        for seed in 0..20u64 {
            let net = crate::generate::generate_random_cross(
                40,
                seed,
                1.0,
                crate::generate::SourceMode::Uniform,
            )
            .unwrap();
            let no = near_optimal_assignment(&net, 2.0).unwrap();
            assert!(reaches_all(net.positions(), net.source(), &no));
        }
    }
}
