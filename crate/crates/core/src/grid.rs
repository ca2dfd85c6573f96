//! Networks on connected arrangements of perpendicular line-segments and
//! the distributed assignment generalized across their intersections.
//!
//! The construction mirrors the single-cross rule at every crossing. A
//! breadth-first sweep over the intersections, started at the source's
//! position on its own segment, fixes the direction data arrives from at
//! each crossing. Per segment, nodes chain to their next neighbor moving
//! away from the nearest entry point, handing off at intersections. Each
//! intersection bridges its arms with the minimum spanning tree of the
//! nearest node per arm, rooted upstream; when the upstream interval is
//! empty the root falls back to the upstream crossing's own root,
//! ultimately the source.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::RangeAssignment;
use crate::cross::NodeId;
use crate::error::{Error, Result};
use crate::geom::{dist, distinct_distance_violation, Point2};
use crate::planners::distributed::{rooted_child_max, small_mst_edges};

/// An axis-aligned segment with endpoints ordered along its axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

impl Segment {
    fn new(a: Point2, b: Point2) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidNetwork("segment endpoint is not finite".into()));
        }
        let horizontal = a.y == b.y;
        let vertical = a.x == b.x;
        if horizontal == vertical {
            // both true = zero length, both false = diagonal
            return Err(Error::InvalidNetwork(format!(
                "segment ({}, {})-({}, {}) is not axis-aligned with positive length",
                a.x, a.y, b.x, b.y
            )));
        }
        let (a, b) = if (horizontal && a.x <= b.x) || (vertical && a.y <= b.y) {
            (a, b)
        } else {
            (b, a)
        };
        Ok(Self { a, b })
    }

    pub fn endpoints(&self) -> (Point2, Point2) {
        (self.a, self.b)
    }

    fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }

    /// The coordinate that is constant along the segment.
    fn fixed(&self) -> f64 {
        if self.is_horizontal() {
            self.a.y
        } else {
            self.a.x
        }
    }

    /// Range of the coordinate that varies along the segment.
    fn span(&self) -> (f64, f64) {
        if self.is_horizontal() {
            (self.a.x, self.b.x)
        } else {
            (self.a.y, self.b.y)
        }
    }

    fn len(&self) -> f64 {
        let (lo, hi) = self.span();
        hi - lo
    }

    fn param_of(&self, p: Point2) -> f64 {
        if self.is_horizontal() {
            p.x
        } else {
            p.y
        }
    }

    fn point_at(&self, t: f64) -> Point2 {
        if self.is_horizontal() {
            Point2::new(t, self.fixed())
        } else {
            Point2::new(self.fixed(), t)
        }
    }

    fn contains(&self, p: Point2) -> bool {
        let (lo, hi) = self.span();
        if self.is_horizontal() {
            p.y == self.fixed() && (lo..=hi).contains(&p.x)
        } else {
            p.x == self.fixed() && (lo..=hi).contains(&p.y)
        }
    }
}

#[derive(Clone, Debug)]
struct Crossing {
    pos: Point2,
    segs: [usize; 2],
}

/// An immutable grid network: declared segments, nodes pinned to them,
/// and the derived perpendicular crossings.
#[derive(Clone, Debug)]
pub struct GridNetwork {
    segments: Vec<Segment>,
    positions: Vec<Point2>,
    node_segment: Vec<usize>,
    source: NodeId,
    crossings: Vec<Crossing>,
}

impl GridNetwork {
    pub fn new(
        segments: Vec<(Point2, Point2)>,
        nodes: Vec<(Point2, usize)>,
        source: NodeId,
    ) -> Result<Self> {
        let segments: Vec<Segment> = segments
            .into_iter()
            .map(|(a, b)| Segment::new(a, b))
            .collect::<Result<_>>()?;
        if segments.is_empty() {
            return Err(Error::InvalidNetwork("a grid needs at least one segment".into()));
        }

        // collinear overlaps make node-to-segment assignment ambiguous
        for i in 0..segments.len() {
            for j in (i + 1)..segments.len() {
                let (si, sj) = (&segments[i], &segments[j]);
                if si.is_horizontal() == sj.is_horizontal() && si.fixed() == sj.fixed() {
                    let (lo_i, hi_i) = si.span();
                    let (lo_j, hi_j) = sj.span();
                    if lo_i.max(lo_j) < hi_i.min(hi_j) {
                        return Err(Error::InvalidNetwork(format!(
                            "segments {i} and {j} overlap along a common line"
                        )));
                    }
                }
            }
        }

        let mut crossings: Vec<Crossing> = Vec::new();
        for i in 0..segments.len() {
            for j in (i + 1)..segments.len() {
                let (si, sj) = (&segments[i], &segments[j]);
                if si.is_horizontal() == sj.is_horizontal() {
                    continue;
                }
                let (h, v, hi_, vi_) = if si.is_horizontal() {
                    (si, sj, i, j)
                } else {
                    (sj, si, j, i)
                };
                let (hx_lo, hx_hi) = h.span();
                let (vy_lo, vy_hi) = v.span();
                let (x, y) = (v.fixed(), h.fixed());
                if (hx_lo..=hx_hi).contains(&x) && (vy_lo..=vy_hi).contains(&y) {
                    crossings.push(Crossing {
                        pos: Point2::new(x, y),
                        segs: [hi_, vi_],
                    });
                }
            }
        }
        crossings.sort_by(|a, b| {
            (a.pos.x, a.pos.y)
                .partial_cmp(&(b.pos.x, b.pos.y))
                .unwrap()
        });
        for w in crossings.windows(2) {
            if w[0].pos == w[1].pos {
                return Err(Error::InvalidNetwork(format!(
                    "more than two segments meet at ({}, {})",
                    w[0].pos.x, w[0].pos.y
                )));
            }
        }

        let positions: Vec<Point2> = nodes.iter().map(|&(p, _)| p).collect();
        let node_segment: Vec<usize> = nodes.iter().map(|&(_, s)| s).collect();
        if positions.is_empty() {
            return Err(Error::InvalidNetwork("a grid needs at least one node".into()));
        }
        if source >= positions.len() {
            return Err(Error::InvalidNetwork(format!(
                "source index {source} out of range"
            )));
        }
        for (id, (&p, &seg)) in positions.iter().zip(&node_segment).enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidNetwork(format!("node {id} is not finite")));
            }
            if seg >= segments.len() {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} declares segment {seg}, which does not exist"
                )));
            }
            if !segments[seg].contains(p) {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} at ({}, {}) is not on its declared segment {seg}",
                    p.x, p.y
                )));
            }
            let lowest = (0..segments.len())
                .find(|&s| segments[s].contains(p))
                .expect("the declared segment contains the node");
            if lowest != seg {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} lies on segment {lowest} too and must be declared there"
                )));
            }
        }
        for i in 0..positions.len() {
            for j in (i + 1)..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::InvalidNetwork(format!(
                        "nodes {i} and {j} share a position"
                    )));
                }
            }
        }
        for s in 0..segments.len() {
            if !node_segment.contains(&s) {
                return Err(Error::EmptySegment(s));
            }
        }

        // segment graph connectivity through shared crossings
        let mut comp: Vec<usize> = (0..segments.len()).collect();
        fn find(comp: &mut Vec<usize>, x: usize) -> usize {
            if comp[x] != x {
                let r = find(comp, comp[x]);
                comp[x] = r;
            }
            comp[x]
        }
        for c in &crossings {
            let (a, b) = (find(&mut comp, c.segs[0]), find(&mut comp, c.segs[1]));
            if a != b {
                comp[a] = b;
            }
        }
        let root = find(&mut comp, 0);
        for s in 1..segments.len() {
            if find(&mut comp, s) != root {
                return Err(Error::DisconnectedGrid);
            }
        }

        Ok(Self {
            segments,
            positions,
            node_segment,
            source,
            crossings,
        })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn segment_endpoints(&self, seg: usize) -> (Point2, Point2) {
        self.segments[seg].endpoints()
    }

    pub fn segment_of(&self, id: NodeId) -> usize {
        self.node_segment[id]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn check_distinct_distances(&self) -> Result<()> {
        match distinct_distance_violation(&self.positions) {
            Some(diag) => Err(Error::TiedWeights(diag)),
            None => Ok(()),
        }
    }

    fn nodes_of_segment(&self, seg: usize) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = (0..self.node_count())
            .filter(|&i| self.node_segment[i] == seg)
            .collect();
        ids.sort_by(|&a, &b| {
            self.segments[seg]
                .param_of(self.positions[a])
                .partial_cmp(&self.segments[seg].param_of(self.positions[b]))
                .unwrap()
                .then(a.cmp(&b))
        });
        ids
    }

    fn crossings_of_segment(&self, seg: usize) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.crossings.len())
            .filter(|&c| self.crossings[c].segs.contains(&seg))
            .collect();
        ids.sort_by(|&a, &b| {
            self.segments[seg]
                .param_of(self.crossings[a].pos)
                .partial_cmp(&self.segments[seg].param_of(self.crossings[b].pos))
                .unwrap()
        });
        ids
    }
}

/// How data first arrives at a crossing.
#[derive(Clone, Debug)]
struct Arrival {
    /// Segment shared with the upstream provider.
    shared_seg: usize,
    /// Position of the upstream provider (source or parent crossing).
    parent_pos: Point2,
    /// Parent crossing, `None` when the provider is the source itself.
    parent: Option<usize>,
}

pub fn grid_distributed_assignment(grid: &GridNetwork, alpha: f64) -> Result<RangeAssignment> {
    let n = grid.node_count();
    if n == 1 {
        return RangeAssignment::new(vec![0.0], alpha);
    }
    let source = grid.source();
    let s_seg = grid.segment_of(source);
    let s_param = grid.segments[s_seg].param_of(grid.positions[source]);

    // breadth-first arrival order over the crossings
    let nc = grid.crossings.len();
    let mut arrival: Vec<Option<Arrival>> = vec![None; nc];
    let mut bfs_order: Vec<usize> = Vec::with_capacity(nc);
    let mut queue = std::collections::VecDeque::new();
    {
        let on_source_seg = grid.crossings_of_segment(s_seg);
        let mut initial: Vec<usize> = Vec::new();
        let before = on_source_seg
            .iter()
            .copied()
            .filter(|&c| grid.segments[s_seg].param_of(grid.crossings[c].pos) <= s_param)
            .last();
        let after = on_source_seg
            .iter()
            .copied()
            .find(|&c| grid.segments[s_seg].param_of(grid.crossings[c].pos) >= s_param);
        if let Some(c) = before {
            initial.push(c);
        }
        if let Some(c) = after {
            if Some(c) != before {
                initial.push(c);
            }
        }
        initial.sort_unstable();
        for c in initial {
            arrival[c] = Some(Arrival {
                shared_seg: s_seg,
                parent_pos: grid.positions[source],
                parent: None,
            });
            queue.push_back(c);
        }
    }
    while let Some(x) = queue.pop_front() {
        bfs_order.push(x);
        for &seg in &grid.crossings[x].segs {
            let along = grid.crossings_of_segment(seg);
            let pos_in = along.iter().position(|&c| c == x).expect("x lies on seg");
            let mut neighbors = Vec::new();
            if pos_in > 0 {
                neighbors.push(along[pos_in - 1]);
            }
            if pos_in + 1 < along.len() {
                neighbors.push(along[pos_in + 1]);
            }
            neighbors.sort_unstable();
            for nb in neighbors {
                if arrival[nb].is_none() {
                    arrival[nb] = Some(Arrival {
                        shared_seg: seg,
                        parent_pos: grid.crossings[x].pos,
                        parent: Some(x),
                    });
                    queue.push_back(nb);
                }
            }
        }
    }

    // entry points per segment: the source's position plus every crossing
    // whose data turns onto the segment there
    let mut entries: Vec<Vec<f64>> = vec![Vec::new(); grid.segment_count()];
    entries[s_seg].push(s_param);
    for (c, arr) in arrival.iter().enumerate() {
        let arr = arr.as_ref().expect("connected grids reach every crossing");
        for &seg in &grid.crossings[c].segs {
            if seg != arr.shared_seg || arr.parent_pos == grid.crossings[c].pos {
                let t = grid.segments[seg].param_of(grid.crossings[c].pos);
                entries[seg].push(t);
            }
        }
    }
    for e in entries.iter_mut() {
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e.dedup();
    }

    let mut ranges = vec![0.0f64; n];

    // per-segment chains: each node covers its next neighbor moving away
    // from the nearest entry, stopping at crossings
    for seg in 0..grid.segment_count() {
        let nodes = grid.nodes_of_segment(seg);
        let cross_params: Vec<f64> = grid
            .crossings_of_segment(seg)
            .iter()
            .map(|&c| grid.segments[seg].param_of(grid.crossings[c].pos))
            .collect();
        let es = &entries[seg];
        for (idx, &a) in nodes.iter().enumerate() {
            if a == source {
                continue;
            }
            let t_a = grid.segments[seg].param_of(grid.positions[a]);
            let nearest_entry = es
                .iter()
                .copied()
                .min_by(|x, y| {
                    ((t_a - x).abs(), *x)
                        .partial_cmp(&((t_a - y).abs(), *y))
                        .unwrap()
                })
                .expect("every segment has an entry point");
            let forward = t_a >= nearest_entry;
            let target = if forward {
                nodes.get(idx + 1).copied()
            } else {
                idx.checked_sub(1).map(|k| nodes[k])
            };
            if let Some(b) = target {
                let t_b = grid.segments[seg].param_of(grid.positions[b]);
                let (lo, hi) = if t_a <= t_b { (t_a, t_b) } else { (t_b, t_a) };
                let blocked = cross_params.iter().any(|&t| lo < t && t < hi);
                if !blocked {
                    ranges[a] = ranges[a].max(dist(grid.positions[a], grid.positions[b]));
                }
            }
        }
    }

    // the source covers the nearest node on each side of its own segment,
    // up to the first crossing
    {
        let nodes = grid.nodes_of_segment(s_seg);
        let cross_params: Vec<f64> = grid
            .crossings_of_segment(s_seg)
            .iter()
            .map(|&c| grid.segments[s_seg].param_of(grid.crossings[c].pos))
            .collect();
        for dir in [1.0f64, -1.0] {
            let bound = cross_params
                .iter()
                .copied()
                .filter(|&t| (t - s_param) * dir > 0.0)
                .fold(f64::INFINITY, |acc, t| acc.min((t - s_param).abs()));
            let nearest = nodes
                .iter()
                .copied()
                .filter(|&b| b != source)
                .filter_map(|b| {
                    let t = grid.segments[s_seg].param_of(grid.positions[b]);
                    let off = (t - s_param) * dir;
                    (off > 0.0 && off < bound).then_some((off, b))
                })
                .min_by(|x, y| x.partial_cmp(y).unwrap());
            if let Some((_, b)) = nearest {
                ranges[source] = ranges[source].max(dist(grid.positions[source], grid.positions[b]));
            }
        }
    }

    // upstream provider per crossing, resolved in breadth-first order with
    // fallback to the parent's provider
    let mut provider: Vec<Option<NodeId>> = vec![None; nc];
    for &c in &bfs_order {
        let arr = arrival[c].as_ref().unwrap();
        let seg = arr.shared_seg;
        let t_x = grid.segments[seg].param_of(grid.crossings[c].pos);
        let t_p = grid.segments[seg].param_of(arr.parent_pos);
        let (lo, hi) = if t_x <= t_p { (t_x, t_p) } else { (t_p, t_x) };
        let upstream = grid
            .nodes_of_segment(seg)
            .into_iter()
            .filter(|&b| {
                let t = grid.segments[seg].param_of(grid.positions[b]);
                // inclusive at the crossing, exclusive at the provider side
                if t_x <= t_p {
                    t >= lo && t < hi
                } else {
                    t > lo && t <= hi
                }
            })
            .min_by(|&a, &b| {
                let ta = (grid.segments[seg].param_of(grid.positions[a]) - t_x).abs();
                let tb = (grid.segments[seg].param_of(grid.positions[b]) - t_x).abs();
                (ta, a).partial_cmp(&(tb, b)).unwrap()
            });
        provider[c] = match upstream {
            Some(u) => Some(u),
            None => match arr.parent {
                Some(p) => provider[p],
                None => Some(source),
            },
        };
    }

    // local bridges: nearest node per outgoing arm, spanning tree rooted
    // at the provider
    for &c in &bfs_order {
        let arr = arrival[c].as_ref().unwrap();
        let x_pos = grid.crossings[c].pos;
        let root = provider[c].expect("provider resolves to a node or the source");
        let mut vertices: Vec<NodeId> = vec![root];
        for &seg in &grid.crossings[c].segs {
            let t_x = grid.segments[seg].param_of(x_pos);
            let cross_params: Vec<f64> = grid
                .crossings_of_segment(seg)
                .iter()
                .map(|&cc| grid.segments[seg].param_of(grid.crossings[cc].pos))
                .collect();
            for dir in [1.0f64, -1.0] {
                // skip the incoming direction
                if seg == arr.shared_seg {
                    let t_p = grid.segments[seg].param_of(arr.parent_pos);
                    if t_p != t_x && ((t_p - t_x) * dir > 0.0) {
                        continue;
                    }
                }
                let bound = cross_params
                    .iter()
                    .copied()
                    .filter(|&t| (t - t_x) * dir > 0.0)
                    .fold(f64::INFINITY, |acc, t| acc.min((t - t_x).abs()));
                let nearest = grid
                    .nodes_of_segment(seg)
                    .into_iter()
                    .filter_map(|b| {
                        let t = grid.segments[seg].param_of(grid.positions[b]);
                        let off = (t - t_x) * dir;
                        (off > 0.0 && off < bound).then_some((off, b))
                    })
                    .min_by(|x, y| x.partial_cmp(y).unwrap());
                if let Some((_, b)) = nearest {
                    if !vertices.contains(&b) {
                        vertices.push(b);
                    }
                }
            }
        }
        if vertices.len() < 2 {
            continue;
        }
        let vpos: Vec<Point2> = vertices.iter().map(|&v| grid.positions[v]).collect();
        let edges = small_mst_edges(&vpos);
        let child_max = rooted_child_max(&vpos, &edges, 0);
        for (k, &v) in vertices.iter().enumerate() {
            ranges[v] = ranges[v].max(child_max[k]);
        }
    }

    let assignment = RangeAssignment::new(ranges, alpha)?;
    debug_assert!(
        crate::assignment::reaches_all(grid.positions(), source, &assignment),
        "grid distributed assignment failed to deliver"
    );
    Ok(assignment)
}

/// A `k x k` grid of square cells with `side`-length edges: `k + 1` full
/// horizontal and `k + 1` full vertical segments. `n` nodes are placed
/// uniformly over the total segment length with one forced onto each
/// segment first; the source is drawn uniformly among the nodes.
pub fn generate_square_grid(k: usize, side: f64, n: usize, seed: u64) -> Result<GridNetwork> {
    if k == 0 {
        return Err(Error::InvalidConfig("grid needs k >= 1".into()));
    }
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "cell side must be positive, got {side}"
        )));
    }
    let extent = side * k as f64;
    let mut segments: Vec<(Point2, Point2)> = Vec::new();
    for j in 0..=k {
        let y = side * j as f64;
        segments.push((Point2::new(0.0, y), Point2::new(extent, y)));
    }
    for i in 0..=k {
        let x = side * i as f64;
        segments.push((Point2::new(x, 0.0), Point2::new(x, extent)));
    }
    let seg_count = segments.len();
    if n < seg_count {
        return Err(Error::InfeasibleN {
            n,
            segments: seg_count,
        });
    }

    let parsed: Vec<Segment> = segments
        .iter()
        .map(|&(a, b)| Segment::new(a, b).expect("generator segments are valid"))
        .collect();
    let total_len: f64 = parsed.iter().map(Segment::len).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut nodes: Vec<(Point2, usize)> = Vec::new();
        for (idx, seg) in parsed.iter().enumerate() {
            let t = rng.random_range(seg.span().0..seg.span().1);
            nodes.push((seg.point_at(t), idx));
        }
        for _ in seg_count..n {
            // uniform over the total length across segments
            let mut pick = rng.random_range(0.0..total_len);
            let mut idx = 0;
            while idx + 1 < seg_count && pick >= parsed[idx].len() {
                pick -= parsed[idx].len();
                idx += 1;
            }
            let seg = &parsed[idx];
            let t = rng.random_range(seg.span().0..seg.span().1);
            nodes.push((seg.point_at(t), idx));
        }
        let source = rng.random_range(0..n);
        // a draw can land on a lower-id segment's line; redraw in that case
        let Ok(grid) = GridNetwork::new(segments.clone(), nodes, source) else {
            continue;
        };
        if grid.check_distinct_distances().is_ok() {
            return Ok(grid);
        }
    }
    Err(Error::InvalidConfig(
        "could not draw a valid grid in 1000 attempts".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::reaches_all;
    use crate::cross::CrossNetwork;
    use crate::planners::distributed::distributed_assignment;

    #[test]
    fn unit_square_layout() {
        let g = generate_square_grid(1, 1.0, 8, 3).unwrap();
        assert_eq!(g.segment_count(), 4);
        assert_eq!(g.crossing_count(), 4);
        assert_eq!(g.node_count(), 8);
    }

    #[test]
    fn two_by_two_layout_and_determinism() {
        let a = generate_square_grid(2, 1.0, 12, 1).unwrap();
        assert_eq!(a.segment_count(), 6);
        assert_eq!(a.crossing_count(), 9);
        assert_eq!(a.node_count(), 12);
        for s in 0..a.segment_count() {
            assert!((0..a.node_count()).any(|i| a.segment_of(i) == s));
        }
        let b = generate_square_grid(2, 1.0, 12, 1).unwrap();
        assert_eq!(a.positions(), b.positions());
        assert_eq!(a.source(), b.source());
    }

    #[test]
    fn infeasible_node_count_is_rejected() {
        assert!(matches!(
            generate_square_grid(2, 1.0, 5, 1),
            Err(Error::InfeasibleN { .. })
        ));
    }

    #[test]
    fn validation_rejects_broken_grids() {
        let p = Point2::new;
        // disconnected: two far-apart crosses
        let segs = vec![
            (p(0.0, 0.0), p(1.0, 0.0)),
            (p(0.5, -0.5), p(0.5, 0.5)),
            (p(10.0, 0.0), p(11.0, 0.0)),
            (p(10.5, -0.5), p(10.5, 0.5)),
        ];
        let nodes = vec![
            (p(0.25, 0.0), 0),
            (p(0.5, 0.25), 1),
            (p(10.25, 0.0), 2),
            (p(10.5, 0.25), 3),
        ];
        assert!(matches!(
            GridNetwork::new(segs, nodes, 0),
            Err(Error::DisconnectedGrid)
        ));

        // empty segment
        let segs = vec![
            (p(0.0, 0.0), p(1.0, 0.0)),
            (p(0.5, -0.5), p(0.5, 0.5)),
        ];
        let nodes = vec![(p(0.25, 0.0), 0)];
        assert!(matches!(
            GridNetwork::new(segs, nodes, 0),
            Err(Error::EmptySegment(1))
        ));

        // node off its declared segment
        let segs = vec![
            (p(0.0, 0.0), p(1.0, 0.0)),
            (p(0.5, -0.5), p(0.5, 0.5)),
        ];
        let nodes = vec![(p(0.25, 0.1), 0), (p(0.5, 0.25), 1)];
        assert!(GridNetwork::new(segs, nodes, 0).is_err());
    }

    #[test]
    fn single_cross_grid_matches_the_cross_rule() {
        for seed in 0..15u64 {
            let cross = crate::generate::generate_random_cross(
                12,
                seed,
                1.0,
                if seed % 2 == 0 {
                    crate::generate::SourceMode::Uniform
                } else {
                    crate::generate::SourceMode::Intersection
                },
            )
            .unwrap();
            let l = cross.arm_half_length() * 1.5;
            let p = Point2::new;
            let segments = vec![
                (p(-l, 0.0), p(l, 0.0)),
                (p(0.0, -l), p(0.0, l)),
            ];
            let nodes: Vec<(Point2, usize)> = cross
                .positions()
                .iter()
                .map(|&pt| (pt, if pt.y == 0.0 { 0 } else { 1 }))
                .collect();
            let grid = GridNetwork::new(segments, nodes, cross.source()).unwrap();
            let via_grid = grid_distributed_assignment(&grid, 2.0).unwrap();
            let via_cross = distributed_assignment(&cross, 2.0).unwrap();
            assert_eq!(
                via_grid.ranges(),
                via_cross.ranges(),
                "seed {seed}: grid and cross rules disagree"
            );
        }
    }

    #[test]
    fn delivery_on_random_square_grids() {
        for seed in 0..30u64 {
            let g = generate_square_grid(2, 1.0, 14, seed).unwrap();
            let a = grid_distributed_assignment(&g, 2.0).unwrap();
            assert!(
                reaches_all(g.positions(), g.source(), &a),
                "seed {seed} failed to deliver"
            );
        }
        for seed in 0..10u64 {
            let g = generate_square_grid(3, 1.0, 20, seed).unwrap();
            let a = grid_distributed_assignment(&g, 2.0).unwrap();
            assert!(reaches_all(g.positions(), g.source(), &a));
        }
    }

    #[test]
    fn ranges_stay_locally_bounded() {
        // no range exceeds the largest pairwise distance among the node's
        // own segment neighbors and the bridge vertices it serves
        for seed in 0..10u64 {
            let g = generate_square_grid(2, 1.0, 16, seed).unwrap();
            let a = grid_distributed_assignment(&g, 2.0).unwrap();
            let diag = 8f64.sqrt(); // grid diameter bound for 2x2 unit cells
            for id in 0..g.node_count() {
                assert!(a.range(id) <= diag);
            }
        }
    }

    #[test]
    fn cross_shaped_grid_without_crossing_node_requirement() {
        // L-junction: two segments touching at a corner
        let p = Point2::new;
        let segs = vec![
            (p(0.0, 0.0), p(1.0, 0.0)),
            (p(1.0, 0.0), p(1.0, 1.0)),
        ];
        let nodes = vec![
            (p(0.2, 0.0), 0),
            (p(0.7, 0.0), 0),
            (p(1.0, 0.4), 1),
            (p(1.0, 0.9), 1),
        ];
        let g = GridNetwork::new(segs, nodes, 0).unwrap();
        assert_eq!(g.crossing_count(), 1);
        let a = grid_distributed_assignment(&g, 2.0).unwrap();
        assert!(reaches_all(g.positions(), g.source(), &a));
    }
}
