//! Range-assignment algorithms and their common dispatch surface.

pub mod bip;
pub mod brute;
pub mod distributed;
pub mod mst;
pub mod near_optimal;
pub mod optimal;

use std::time::Instant;

use crate::assignment::{reaches_all, RangeAssignment};
use crate::cross::CrossNetwork;
use crate::error::{Error, Result};

pub use bip::{bip_assignment, bip_assignment_points, sweep, sweep_points};
pub use brute::{brute_force_oracle, brute_force_oracle_with_cap, DEFAULT_BRUTE_CAP};
pub use distributed::distributed_assignment;
pub use mst::{mst_assignment, mst_assignment_points};
pub use near_optimal::near_optimal_assignment;
pub use optimal::{
    optimal_assignment, optimal_assignment_source_at_intersection,
    optimal_assignment_source_at_intersection_with, optimal_assignment_with, SearchOptions,
    DEFAULT_BUDGET,
};

/// The planners selectable by name on the command line and in experiment
/// configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlannerKind {
    Optimal,
    OptimalIntersection,
    Brute,
    NearOptimal,
    Distributed,
    Mst,
    Bip,
    BipSweep,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 8] = [
        PlannerKind::Optimal,
        PlannerKind::OptimalIntersection,
        PlannerKind::Brute,
        PlannerKind::NearOptimal,
        PlannerKind::Distributed,
        PlannerKind::Mst,
        PlannerKind::Bip,
        PlannerKind::BipSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Optimal => "optimal",
            PlannerKind::OptimalIntersection => "optimal-intersection",
            PlannerKind::Brute => "brute",
            PlannerKind::NearOptimal => "near-optimal",
            PlannerKind::Distributed => "distributed",
            PlannerKind::Mst => "mst",
            PlannerKind::Bip => "bip",
            PlannerKind::BipSweep => "bip-sweep",
        }
    }
}

impl std::str::FromStr for PlannerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PlannerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = PlannerKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidConfig(format!(
                    "unknown planner '{s}' (expected one of: {})",
                    names.join(", ")
                ))
            })
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What a planner run produced, for reporting.
#[derive(Clone, Debug)]
pub struct PlanReport {
    pub planner: PlannerKind,
    pub cost: f64,
    pub runtime_secs: f64,
    pub iterations: u64,
    pub delivered: bool,
}

#[derive(Clone, Debug)]
pub struct PlanOutcome {
    pub assignment: RangeAssignment,
    pub report: PlanReport,
}

/// Run one planner on a cross network.
pub fn run_planner(
    kind: PlannerKind,
    net: &CrossNetwork,
    alpha: f64,
    opts: &SearchOptions,
) -> Result<PlanOutcome> {
    let start = Instant::now();
    let (assignment, iterations) = match kind {
        PlannerKind::Optimal => {
            let out = optimal_assignment_with(net, alpha, opts)?;
            (out.assignment, out.sweeps)
        }
        PlannerKind::OptimalIntersection => {
            let out = optimal_assignment_source_at_intersection_with(net, alpha, opts)?;
            (out.assignment, out.sweeps)
        }
        PlannerKind::Brute => (brute_force_oracle(net, alpha)?, 0),
        PlannerKind::NearOptimal => (near_optimal_assignment(net, alpha)?, 120),
        PlannerKind::Distributed => (distributed_assignment(net, alpha)?, 0),
        PlannerKind::Mst => (mst_assignment(net, alpha)?, 0),
        PlannerKind::Bip => (bip_assignment(net, alpha)?, 0),
        PlannerKind::BipSweep => {
            let base = bip_assignment(net, alpha)?;
            (sweep(net, &base)?, 0)
        }
    };
    let runtime_secs = start.elapsed().as_secs_f64();
    let delivered = reaches_all(net.positions(), net.source(), &assignment);
    Ok(PlanOutcome {
        report: PlanReport {
            planner: kind,
            cost: assignment.cost(),
            runtime_secs,
            iterations,
            delivered,
        },
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in PlannerKind::ALL {
            let parsed: PlannerKind = kind.name().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert!("spanning-tree".parse::<PlannerKind>().is_err());
    }

    #[test]
    fn every_planner_delivers_on_a_small_instance() {
        let net = crate::generate::generate_random_cross(
            6,
            2,
            1.0,
            crate::generate::SourceMode::Intersection,
        )
        .unwrap();
        for kind in PlannerKind::ALL {
            let out = run_planner(kind, &net, 2.0, &SearchOptions::default()).unwrap();
            assert!(out.report.delivered, "{kind} failed to deliver");
        }
    }
}
