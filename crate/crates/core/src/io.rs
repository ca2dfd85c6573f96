//! JSON file formats for networks and assignments.
//!
//! Cross network: `{"arm_half_length": L, "source": [x, y], "nodes": [[x, y], ...]}`.
//! Node ids are the array indices; the source is listed separately and
//! takes the next id after the last array entry.
//!
//! Assignment: `{"alpha": a, "ranges": [r_0, ..., r_{N-1}]}` indexed by
//! node id.
//!
//! Grid network: `{"segments": [[x1, y1, x2, y2], ...], "nodes":
//! [[x, y, segment_index], ...], "source": node_index}`. Here the source
//! is an ordinary node entry.
//!
//! Floats are written in shortest-round-trip decimal form, so values
//! survive a save/load cycle bit-exactly and re-serializing a loaded file
//! reproduces it byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assignment::RangeAssignment;
use crate::cross::CrossNetwork;
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::grid::GridNetwork;

#[derive(Debug, Serialize, Deserialize)]
struct CrossFile {
    arm_half_length: f64,
    source: [f64; 2],
    nodes: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignmentFile {
    alpha: f64,
    ranges: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GridFile {
    segments: Vec<[f64; 4]>,
    nodes: Vec<(f64, f64, usize)>,
    source: usize,
}

pub fn cross_to_json(net: &CrossNetwork) -> String {
    let s = net.source_position();
    let nodes: Vec<[f64; 2]> = (0..net.node_count())
        .filter(|&id| id != net.source())
        .map(|id| {
            let p = net.position(id);
            [p.x, p.y]
        })
        .collect();
    let file = CrossFile {
        arm_half_length: net.arm_half_length(),
        source: [s.x, s.y],
        nodes,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn cross_from_json(text: &str) -> Result<CrossNetwork> {
    let file: CrossFile = serde_json::from_str(text)?;
    let source = Point2::new(file.source[0], file.source[1]);
    let others: Vec<Point2> = file.nodes.iter().map(|&[x, y]| Point2::new(x, y)).collect();
    let net = CrossNetwork::new(source, others, file.arm_half_length)?;
    net.check_distinct_distances()?;
    Ok(net)
}

pub fn save_cross(net: &CrossNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, cross_to_json(net))?;
    Ok(())
}

pub fn load_cross(path: &Path) -> Result<CrossNetwork> {
    cross_from_json(&std::fs::read_to_string(path)?)
}

pub fn assignment_to_json(assignment: &RangeAssignment) -> String {
    let file = AssignmentFile {
        alpha: assignment.alpha(),
        ranges: assignment.ranges().to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn assignment_from_json(text: &str) -> Result<RangeAssignment> {
    let file: AssignmentFile = serde_json::from_str(text)?;
    RangeAssignment::new(file.ranges, file.alpha)
}

pub fn save_assignment(assignment: &RangeAssignment, path: &Path) -> Result<()> {
    std::fs::write(path, assignment_to_json(assignment))?;
    Ok(())
}

pub fn load_assignment(path: &Path) -> Result<RangeAssignment> {
    assignment_from_json(&std::fs::read_to_string(path)?)
}

pub fn grid_to_json(grid: &GridNetwork) -> String {
    let segments: Vec<[f64; 4]> = (0..grid.segment_count())
        .map(|s| {
            let (a, b) = grid.segment_endpoints(s);
            [a.x, a.y, b.x, b.y]
        })
        .collect();
    let nodes: Vec<(f64, f64, usize)> = (0..grid.node_count())
        .map(|id| {
            let p = grid.positions()[id];
            (p.x, p.y, grid.segment_of(id))
        })
        .collect();
    let file = GridFile {
        segments,
        nodes,
        source: grid.source(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}

pub fn grid_from_json(text: &str) -> Result<GridNetwork> {
    let file: GridFile = serde_json::from_str(text)?;
    let segments: Vec<(Point2, Point2)> = file
        .segments
        .iter()
        .map(|&[x1, y1, x2, y2]| (Point2::new(x1, y1), Point2::new(x2, y2)))
        .collect();
    let nodes: Vec<(Point2, usize)> = file
        .nodes
        .iter()
        .map(|&(x, y, s)| (Point2::new(x, y), s))
        .collect();
    GridNetwork::new(segments, nodes, file.source)
}

pub fn save_grid(grid: &GridNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, grid_to_json(grid))?;
    Ok(())
}

pub fn load_grid(path: &Path) -> Result<GridNetwork> {
    grid_from_json(&std::fs::read_to_string(path)?)
}

/// Either kind of network file, sniffed by shape.
pub enum NetworkFile {
    Cross(CrossNetwork),
    Grid(GridNetwork),
}

pub fn load_network(path: &Path) -> Result<NetworkFile> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("segments").is_some() {
        Ok(NetworkFile::Grid(grid_from_json(&text)?))
    } else if value.get("arm_half_length").is_some() {
        Ok(NetworkFile::Cross(cross_from_json(&text)?))
    } else {
        Err(Error::InvalidNetwork(
            "file is neither a cross network (arm_half_length) nor a grid (segments)".into(),
        ))
    }
}
