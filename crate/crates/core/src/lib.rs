//! Minimum-energy broadcast range assignments for wireless networks whose
//! nodes lie on two perpendicular lines (cross networks) and on grids of
//! perpendicular line-segments.
//!
//! The crate provides:
//!
//! * the cross geometry model ([`cross`]) and the broadcast simulator
//!   ([`assignment`]),
//! * exact, near-optimal, distributed, spanning-tree and greedy
//!   incremental-power planners ([`planners`]),
//! * grid networks and the distributed rule generalized across
//!   intersections ([`grid`]),
//! * seeded generators ([`generate`]), a Monte Carlo experiment harness
//!   ([`experiment`]), JSON file formats ([`io`]) and a randomized
//!   property suite ([`props`]).

pub mod assignment;
pub mod cross;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod geom;
pub mod grid;
pub mod io;
pub mod planners;
pub mod props;

pub use assignment::{
    cost, depends_on, increased_range_audit, prefix_property_holds, reaches_all,
    simulate_broadcast, BroadcastOutcome, RangeAssignment, RangeAudit,
};
pub use cross::{CoverageExtents, CrossNetwork, NodeId, SegmentLabel};
pub use error::{Error, Result};
pub use generate::{generate_random_cross, trial_seed, SourceMode};
pub use geom::{covered, dist, pow_alpha, Point2};
pub use grid::{generate_square_grid, grid_distributed_assignment, GridNetwork};
pub use planners::{PlanOutcome, PlanReport, PlannerKind, SearchOptions};
