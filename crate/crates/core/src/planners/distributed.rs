//! Constant-per-node distributed assignment.
//!
//! Every ordinary node transmits exactly to its next hop. The four nodes
//! bridging the intersection (last of II — or the source when II is empty
//! — and the firsts of III, IV, V) additionally cover their child edges in
//! the minimum spanning tree of their own little complete graph, rooted at
//! the side the data arrives from. The source reaches the first node of
//! each of segments I and II.

use crate::assignment::RangeAssignment;
use crate::cross::{CrossNetwork, NodeId, SegmentLabel};
use crate::error::Result;
use crate::geom::{dist, Point2};

/// Kruskal on a small complete graph given by explicit positions.
/// Returns the chosen edges as index pairs into `vertices`. Ties are
/// broken by (weight, i, j) so the result is deterministic even on
/// degenerate inputs.
pub fn small_mst_edges(vertices: &[Point2]) -> Vec<(usize, usize)> {
    let m = vertices.len();
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            edges.push((dist(vertices[i], vertices[j]), i, j));
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut comp: Vec<usize> = (0..m).collect();
    fn find(comp: &mut Vec<usize>, x: usize) -> usize {
        if comp[x] != x {
            let r = find(comp, comp[x]);
            comp[x] = r;
        }
        comp[x]
    }
    let mut chosen = Vec::new();
    for (_, i, j) in edges {
        let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
        if ri != rj {
            comp[ri] = rj;
            chosen.push((i, j));
            if chosen.len() + 1 == m {
                break;
            }
        }
    }
    chosen
}

/// Orient a tree away from `root` and return, per vertex, the longest
/// edge to a child (0 for leaves).
pub fn rooted_child_max(
    vertex_positions: &[Point2],
    edges: &[(usize, usize)],
    root: usize,
) -> Vec<f64> {
    let m = vertex_positions.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut child_max = vec![0.0f64; m];
    let mut seen = vec![false; m];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                let d = dist(vertex_positions[u], vertex_positions[v]);
                if d > child_max[u] {
                    child_max[u] = d;
                }
                stack.push(v);
            }
        }
    }
    child_max
}

pub fn distributed_assignment(net: &CrossNetwork, alpha: f64) -> Result<RangeAssignment> {
    let n = net.node_count();
    let s = net.source();
    let mut ranges = vec![0.0f64; n];
    for id in 0..n {
        if id != s {
            ranges[id] = net.hop_distance(id);
        }
    }

    let diamond: Vec<NodeId> = net.diamond().to_vec();
    let dpos: Vec<Point2> = diamond.iter().map(|&id| net.position(id)).collect();
    let edges = small_mst_edges(&dpos);
    let root_idx = 0; // diamond[0] is the root by construction
    let child_max = rooted_child_max(&dpos, &edges, root_idx);
    for (k, &id) in diamond.iter().enumerate() {
        if child_max[k] > ranges[id] {
            ranges[id] = child_max[k];
        }
    }

    // The source bootstraps segments I and II; when II is empty its
    // diamond child edges (already folded in above) take over that side.
    let mut rs = ranges[s];
    if let Some(f1) = net.first_of(SegmentLabel::I) {
        rs = rs.max(net.dist(s, f1));
    }
    if let Some(f2) = net.first_of(SegmentLabel::II) {
        rs = rs.max(net.dist(s, f2));
    }
    ranges[s] = rs;

    RangeAssignment::new(ranges, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{cost, reaches_all};
    use crate::geom::pow_alpha;

    /// Exhaustive spanning-tree oracle: try every (m-1)-subset of edges of
    /// the complete graph, keep the connected ones, and return the
    /// minimum-weight tree.
    fn mst_by_enumeration(vertices: &[Point2]) -> (f64, Vec<(usize, usize)>) {
        let m = vertices.len();
        let mut all_edges: Vec<(usize, usize)> = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                all_edges.push((i, j));
            }
        }
        let e = all_edges.len();
        let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
        let mut count_spanning = 0usize;
        for mask in 0u32..(1 << e) {
            if mask.count_ones() as usize != m - 1 {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..e)
                .filter(|&k| mask & (1 << k) != 0)
                .map(|k| all_edges[k])
                .collect();
            // connectivity check
            let mut comp: Vec<usize> = (0..m).collect();
            for &(i, j) in &chosen {
                let (mut ri, mut rj) = (i, j);
                while comp[ri] != ri {
                    ri = comp[ri];
                }
                while comp[rj] != rj {
                    rj = comp[rj];
                }
                if ri != rj {
                    comp[ri] = rj;
                }
            }
            let root_of = |mut x: usize, comp: &[usize]| {
                while comp[x] != x {
                    x = comp[x];
                }
                x
            };
            let r0 = root_of(0, &comp);
            if (0..m).all(|v| root_of(v, &comp) == r0) {
                count_spanning += 1;
                let w: f64 = chosen
                    .iter()
                    .map(|&(i, j)| dist(vertices[i], vertices[j]))
                    .sum();
                if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                    best = Some((w, chosen));
                }
            }
        }
        if m == 4 {
            assert_eq!(count_spanning, 16, "K4 has 16 spanning trees");
        }
        best.unwrap()
    }

    fn perturbed_fixture() -> CrossNetwork {
        CrossNetwork::new(
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
        .unwrap()
    }

    #[test]
    fn five_node_fixture_matches_tree_enumeration_oracle() {
        let net = perturbed_fixture();
        net.check_distinct_distances().unwrap();
        let a = distributed_assignment(&net, 2.0).unwrap();

        // oracle: enumerate the 16 spanning trees of the diamond
        let dids = net.diamond().to_vec();
        assert_eq!(dids, vec![1, 2, 3, 4]);
        let dpos: Vec<Point2> = dids.iter().map(|&i| net.position(i)).collect();
        let (_, oracle_edges) = mst_by_enumeration(&dpos);
        let via_kruskal = small_mst_edges(&dpos);
        let norm = |mut v: Vec<(usize, usize)>| {
            v.sort_unstable();
            v
        };
        assert_eq!(norm(oracle_edges.clone()), norm(via_kruskal));

        // expected ranges derived from the oracle tree rooted at node 1
        let child_max = rooted_child_max(&dpos, &oracle_edges, 0);
        assert_eq!(a.range(net.source()), net.dist(net.source(), 0));
        assert!((a.range(net.source()) - 1.03).abs() < 1e-12);
        assert_eq!(a.range(1), child_max[0]);
        assert!((a.range(1) - 5.0401f64.sqrt()).abs() < 1e-12);
        assert!((a.range(4) - 2.0404f64.sqrt()).abs() < 1e-12);
        assert_eq!(a.range(0), 0.0);
        assert_eq!(a.range(2), 0.0);
        assert_eq!(a.range(3), 0.0);

        let expected_cost = pow_alpha(1.03, 2.0) + 5.0401 + 2.0404;
        assert!((cost(&a) - expected_cost).abs() < 1e-9);
        assert!(reaches_all(net.positions(), net.source(), &a));
    }

    #[test]
    fn source_at_intersection_covers_the_farthest_arm() {
        // one node per half-line; the diamond tree is a star at the source,
        // so the source's range is the farthest arm distance
        let net = CrossNetwork::new(
            Point2::new(0.0, 0.0),
            vec![
                Point2::new(-1.0, 0.0),
                Point2::new(2.2, 0.0),
                Point2::new(0.0, 3.1),
                Point2::new(0.0, -4.3),
            ],
            5.0,
        )
        .unwrap();
        net.check_distinct_distances().unwrap();
        let a = distributed_assignment(&net, 2.0).unwrap();

        // oracle over the 5-vertex diamond (source included)
        let dids = net.diamond().to_vec();
        assert_eq!(dids[0], net.source());
        let dpos: Vec<Point2> = dids.iter().map(|&i| net.position(i)).collect();
        let (_, oracle_edges) = mst_by_enumeration(&dpos);
        let child_max = rooted_child_max(&dpos, &oracle_edges, 0);
        let expected_rs = child_max[0].max(net.dist(net.source(), 0));
        assert_eq!(a.range(net.source()), expected_rs);
        assert_eq!(a.range(net.source()), 4.3);
        for id in 0..4 {
            assert_eq!(a.range(id), 0.0);
        }
        assert!(reaches_all(net.positions(), net.source(), &a));
    }

    #[test]
    fn matches_spanning_tree_assignment_on_the_fixture() {
        let net = perturbed_fixture();
        let d = distributed_assignment(&net, 2.0).unwrap();
        let m = crate::planners::mst::mst_assignment(&net, 2.0).unwrap();
        assert_eq!(d.ranges(), m.ranges());
    }

    #[test]
    fn single_arm_degenerates_to_source_hop() {
        let net = CrossNetwork::new(
            Point2::new(-2.0, 0.0),
            vec![Point2::new(-3.5, 0.0)],
            4.0,
        )
        .unwrap();
        let a = distributed_assignment(&net, 2.0).unwrap();
        assert_eq!(a.range(net.source()), 1.5);
        assert_eq!(a.range(0), 0.0);
    }
}
