//! Spanning-tree range assignment: build the Euclidean minimum spanning
//! tree of the full node graph, root it at the source, and give every node
//! the distance to its farthest child.

use crate::assignment::RangeAssignment;
use crate::cross::CrossNetwork;
use crate::error::{Error, Result};
use crate::geom::{dist, distinct_distance_violation, Point2};

/// Prim's algorithm over the complete Euclidean graph. Returns, for every
/// node, the parent edge (`None` for the root). Quadratic, which is right
/// for complete graphs.
pub fn euclidean_mst_parents(positions: &[Point2], root: usize) -> Vec<Option<usize>> {
    let n = positions.len();
    let mut in_tree = vec![false; n];
    let mut best_dist = vec![f64::INFINITY; n];
    let mut best_link = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    in_tree[root] = true;
    for v in 0..n {
        if v != root {
            best_dist[v] = dist(positions[root], positions[v]);
            best_link[v] = root;
        }
    }
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for v in 0..n {
            if !in_tree[v] && best_dist[v] < pick_d {
                pick_d = best_dist[v];
                pick = v;
            }
        }
        debug_assert_ne!(pick, usize::MAX);
        in_tree[pick] = true;
        parent[pick] = Some(best_link[pick]);
        for v in 0..n {
            if !in_tree[v] {
                let d = dist(positions[pick], positions[v]);
                if d < best_dist[v] {
                    best_dist[v] = d;
                    best_link[v] = pick;
                }
            }
        }
    }
    parent
}

/// Tree-based assignment over an arbitrary point set. Distinct pairwise
/// distances are required so that the tree (and thus the assignment) is
/// unique.
pub fn mst_assignment_points(
    positions: &[Point2],
    source: usize,
    alpha: f64,
) -> Result<RangeAssignment> {
    if let Some(diag) = distinct_distance_violation(positions) {
        return Err(Error::TiedWeights(diag));
    }
    let parent = euclidean_mst_parents(positions, source);
    let mut ranges = vec![0.0; positions.len()];
    for (child, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            let d = dist(positions[p], positions[child]);
            if d > ranges[p] {
                ranges[p] = d;
            }
        }
    }
    RangeAssignment::new(ranges, alpha)
}

pub fn mst_assignment(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    mst_assignment_points(net.positions(), net.source(), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::reaches_all;
    use crate::geom::Point2;

    #[test]
    fn two_node_network_is_forced() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(-0.3, 0.0)],
            4.0,
        )
        .unwrap();
        let a = mst_assignment(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), 1.7);
        assert_eq!(a.range(0), 0.0);
    }

    #[test]
    fn chain_on_one_segment_becomes_hop_by_hop() {
        let net = CrossNetwork::new(
            Point2::new(-1.0, 0.0),
            vec![
                Point2::new(0.5, 0.0),
                Point2::new(1.2, 0.0),
                Point2::new(3.0, 0.0),
            ],
            4.0,
        )
        .unwrap();
        let a = mst_assignment(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), 1.5);
        assert_eq!(a.range(0), 0.7);
        assert!((a.range(1) - 1.8).abs() < 1e-15);
        assert_eq!(a.range(2), 0.0);
        assert!(reaches_all(net.positions(), net.source(), &a));
    }

    #[test]
    fn tied_weights_are_rejected() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(-3.0, 0.0), Point2::new(-1.0, 0.0)],
            4.0,
        )
        .unwrap();
        assert!(matches!(
            mst_assignment(&net, 2.0),
            Err(Error::TiedWeights(_))
        ));
    }
}
