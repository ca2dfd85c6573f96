//! Cross networks: nodes on two perpendicular lines.
//!
//! The canonical frame puts the intersection of the two lines at the
//! origin and the source on the non-positive x-axis at `(-d, 0)` with
//! `d >= 0`. `d == 0` is the source-at-intersection special case. Any
//! rigid placement of the source on either axis is accepted by the
//! constructor and rotated into this frame.
//!
//! Relative to the source and the intersection the cross splits into five
//! segments:
//!
//! * `I`   — x-axis beyond the source (`x < -d`),
//! * `II`  — the finite piece between source and intersection (`-d < x < 0`),
//! * `III` — positive x-axis,
//! * `IV`  — positive y-axis,
//! * `V`   — negative y-axis.
//!
//! Within a segment nodes are ordered by increasing distance from the
//! source; the closest is the segment's *first* node, the farthest its
//! *last*. Every non-source node has a *next hop*: the following node on
//! its own segment, at distance `M(a)` (zero for the last node).

use crate::error::{Error, Result};
use crate::geom::{covered, dist, Point2};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentLabel {
    I,
    II,
    III,
    IV,
    V,
}

impl SegmentLabel {
    pub const ALL: [SegmentLabel; 5] = [
        SegmentLabel::I,
        SegmentLabel::II,
        SegmentLabel::III,
        SegmentLabel::IV,
        SegmentLabel::V,
    ];

    pub fn index(self) -> usize {
        match self {
            SegmentLabel::I => 0,
            SegmentLabel::II => 1,
            SegmentLabel::III => 2,
            SegmentLabel::IV => 3,
            SegmentLabel::V => 4,
        }
    }

    pub fn from_index(i: usize) -> SegmentLabel {
        SegmentLabel::ALL[i]
    }
}

impl std::fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SegmentLabel::I => "I",
            SegmentLabel::II => "II",
            SegmentLabel::III => "III",
            SegmentLabel::IV => "IV",
            SegmentLabel::V => "V",
        };
        f.write_str(s)
    }
}

/// Perpendicular-line coverage extents of one transmission.
///
/// With `h` the transmitter's distance to the intersection:
/// `same` is the radius itself, `perp` the reach from the intersection
/// along each perpendicular half-line (`sqrt(max(0, r^2 - h^2))`) and
/// `oppo` the reach beyond the intersection along the transmitter's own
/// line (`max(0, r - h)`). Always `same >= perp >= oppo`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverageExtents {
    pub same: f64,
    pub perp: f64,
    pub oppo: f64,
}

/// Circle geometry of the extents, independent of any node table.
pub fn coverage_extents_at(range: f64, h: f64) -> CoverageExtents {
    let same = range;
    let perp = (range * range - h * h).max(0.0).sqrt();
    let oppo = (range - h).max(0.0);
    CoverageExtents { same, perp, oppo }
}

/// An immutable cross network in the canonical frame.
#[derive(Clone, Debug)]
pub struct CrossNetwork {
    positions: Vec<Point2>,
    source: NodeId,
    source_offset: f64,
    arm_half_length: f64,
    labels: Vec<Option<SegmentLabel>>,
    segments: [Vec<NodeId>; 5],
    next: Vec<Option<NodeId>>,
    hop: Vec<f64>,
    n_hat: Vec<NodeId>,
    diamond: Vec<NodeId>,
}

/// Rotate a cross configuration so the source lands on the non-positive
/// x-axis. Only quarter-turn rotations are used, which are exact in
/// floating point.
fn canonical_rotation(source: Point2) -> Option<fn(Point2) -> Point2> {
    fn ident(p: Point2) -> Point2 {
        p
    }
    fn half_turn(p: Point2) -> Point2 {
        Point2::new(-p.x, -p.y)
    }
    fn quarter_ccw(p: Point2) -> Point2 {
        Point2::new(-p.y, p.x)
    }
    fn quarter_cw(p: Point2) -> Point2 {
        Point2::new(p.y, -p.x)
    }
    if source.y == 0.0 {
        if source.x <= 0.0 {
            Some(ident)
        } else {
            Some(half_turn)
        }
    } else if source.x == 0.0 {
        if source.y > 0.0 {
            Some(quarter_ccw)
        } else {
            Some(quarter_cw)
        }
    } else {
        None
    }
}

impl CrossNetwork {
    /// Build a network from the source position and the remaining nodes.
    ///
    /// Node ids: the `others` keep their indices `0..K`, the source gets
    /// id `K`. The configuration is rotated into the canonical frame.
    /// Positions must be finite, lie on one of the two axes, be pairwise
    /// distinct, and no non-source node may sit exactly on the
    /// intersection.
    pub fn new(source: Point2, others: Vec<Point2>, arm_half_length: f64) -> Result<Self> {
        if !(arm_half_length.is_finite() && arm_half_length > 0.0) {
            return Err(Error::InvalidNetwork(format!(
                "arm_half_length must be positive and finite, got {arm_half_length}"
            )));
        }
        if !source.is_finite() {
            return Err(Error::InvalidNetwork("source position is not finite".into()));
        }
        let rot = canonical_rotation(source).ok_or_else(|| {
            Error::InvalidNetwork(format!(
                "source ({}, {}) does not lie on either axis",
                source.x, source.y
            ))
        })?;

        let source_pos = rot(source);
        let mut positions: Vec<Point2> = others.iter().map(|&p| rot(p)).collect();
        let source_id = positions.len();
        positions.push(source_pos);

        let d = -source_pos.x;
        debug_assert!(d >= 0.0 && source_pos.y == 0.0);

        let n = positions.len();
        let mut labels: Vec<Option<SegmentLabel>> = vec![None; n];
        for (id, p) in positions.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidNetwork(format!("node {id} is not finite")));
            }
            if id == source_id {
                continue;
            }
            if p.x != 0.0 && p.y != 0.0 {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} at ({}, {}) is off both axes",
                    p.x, p.y
                )));
            }
            if p.x == 0.0 && p.y == 0.0 {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} sits exactly on the intersection"
                )));
            }
            if *p == source_pos {
                return Err(Error::InvalidNetwork(format!(
                    "node {id} coincides with the source"
                )));
            }
            labels[id] = Some(classify(p, d));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if positions[i] == positions[j] {
                    return Err(Error::InvalidNetwork(format!(
                        "nodes {i} and {j} share a position"
                    )));
                }
            }
        }

        let mut segments: [Vec<NodeId>; 5] = Default::default();
        for (id, label) in labels.iter().enumerate() {
            if let Some(l) = label {
                segments[l.index()].push(id);
            }
        }
        for seg in segments.iter_mut() {
            seg.sort_by(|&a, &b| {
                dist(positions[a], source_pos)
                    .partial_cmp(&dist(positions[b], source_pos))
                    .unwrap()
                    .then(a.cmp(&b))
            });
        }

        let mut next: Vec<Option<NodeId>> = vec![None; n];
        let mut hop: Vec<f64> = vec![0.0; n];
        for seg in segments.iter() {
            for w in seg.windows(2) {
                next[w[0]] = Some(w[1]);
                hop[w[0]] = dist(positions[w[0]], positions[w[1]]);
            }
        }

        // Diamond: last of II (or the source when II is empty) plus the
        // first node of each of III, IV, V, keeping only the ones that
        // exist.
        let mut diamond = Vec::new();
        match segments[SegmentLabel::II.index()].last() {
            Some(&l2) => diamond.push(l2),
            None => diamond.push(source_id),
        }
        for label in [SegmentLabel::III, SegmentLabel::IV, SegmentLabel::V] {
            if let Some(&f) = segments[label.index()].first() {
                diamond.push(f);
            }
        }

        let n_hat: Vec<NodeId> = (0..n)
            .filter(|&id| id != source_id && !diamond.contains(&id))
            .collect();

        Ok(Self {
            positions,
            source: source_id,
            source_offset: d,
            arm_half_length,
            labels,
            segments,
            next,
            hop,
            n_hat,
            diamond,
        })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn position(&self, id: NodeId) -> Point2 {
        self.positions[id]
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn source_position(&self) -> Point2 {
        self.positions[self.source]
    }

    /// Distance from the source to the intersection.
    pub fn source_offset(&self) -> f64 {
        self.source_offset
    }

    pub fn is_source_at_intersection(&self) -> bool {
        self.source_offset == 0.0
    }

    pub fn arm_half_length(&self) -> f64 {
        self.arm_half_length
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        dist(self.positions[a], self.positions[b])
    }

    /// Segment of a non-source node; `None` for the source, which by
    /// definition is on no segment.
    pub fn label_of(&self, id: NodeId) -> Option<SegmentLabel> {
        self.labels[id]
    }

    /// Nodes of one segment, ordered by increasing distance from the source.
    pub fn segment_nodes(&self, label: SegmentLabel) -> &[NodeId] {
        &self.segments[label.index()]
    }

    pub fn first_of(&self, label: SegmentLabel) -> Option<NodeId> {
        self.segments[label.index()].first().copied()
    }

    pub fn last_of(&self, label: SegmentLabel) -> Option<NodeId> {
        self.segments[label.index()].last().copied()
    }

    /// The node following `id` on its own segment.
    pub fn next_adjacent(&self, id: NodeId) -> Option<NodeId> {
        self.next[id]
    }

    /// `M(id)`: distance to the next node on the segment, 0 for the last
    /// node (and for the source).
    pub fn hop_distance(&self, id: NodeId) -> f64 {
        self.hop[id]
    }

    /// Nodes outside the source-and-diamond special set.
    pub fn n_hat(&self) -> &[NodeId] {
        &self.n_hat
    }

    /// The special set bridging the intersection: last of II (or the
    /// source when II is empty) and the firsts of III, IV, V, in that
    /// order, restricted to the ones that exist.
    pub fn diamond(&self) -> &[NodeId] {
        &self.diamond
    }

    /// Root of the diamond: last of II, or the source when II is empty.
    pub fn diamond_root(&self) -> NodeId {
        self.diamond[0]
    }

    pub fn is_segment_empty(&self, label: SegmentLabel) -> bool {
        self.segments[label.index()].is_empty()
    }

    /// Distance from a node to the intersection.
    pub fn intersection_distance(&self, id: NodeId) -> f64 {
        self.positions[id].norm()
    }

    /// Coverage extents of `id` transmitting with `range`.
    pub fn coverage_extents(&self, id: NodeId, range: f64) -> CoverageExtents {
        coverage_extents_at(range, self.intersection_distance(id))
    }

    /// All nodes (other than `id`) within `range` of `id`.
    pub fn receivers(&self, id: NodeId, range: f64) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&u| u != id && covered(range, self.dist(id, u)))
            .collect()
    }

    /// Receivers of `id` that sit after it on its own segment.
    pub fn same_segment_receivers(&self, id: NodeId, range: f64) -> Vec<NodeId> {
        let Some(label) = self.labels[id] else {
            return Vec::new();
        };
        let seg = self.segment_nodes(label);
        let pos = seg.iter().position(|&u| u == id).expect("node on its segment");
        seg[pos + 1..]
            .iter()
            .copied()
            .filter(|&u| covered(range, self.dist(id, u)))
            .collect()
    }

    /// Receivers of `id` located on segments other than its own. The
    /// source, being on no segment, never appears here; for the source as
    /// transmitter every covered node qualifies.
    pub fn other_segment_receivers(&self, id: NodeId, range: f64) -> Vec<NodeId> {
        let own = self.labels[id];
        (0..self.node_count())
            .filter(|&u| u != id)
            .filter(|&u| self.labels[u].is_some() && self.labels[u] != own)
            .filter(|&u| covered(range, self.dist(id, u)))
            .collect()
    }

    /// Reject the network unless all pairwise distances are separated by
    /// more than the ingest tolerance.
    pub fn check_distinct_distances(&self) -> Result<()> {
        match crate::geom::distinct_distance_violation(&self.positions) {
            Some(diag) => Err(Error::TiedWeights(diag)),
            None => Ok(()),
        }
    }
}

fn classify(p: &Point2, d: f64) -> SegmentLabel {
    if p.y == 0.0 {
        if p.x < -d {
            SegmentLabel::I
        } else if p.x < 0.0 {
            SegmentLabel::II
        } else {
            SegmentLabel::III
        }
    } else if p.y > 0.0 {
        SegmentLabel::IV
    } else {
        SegmentLabel::V
    }
}
