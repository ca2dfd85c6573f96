use thiserror::Error;

use crate::planners::optimal::Checkpoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Geometry or structural validation failed.
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    /// Two pairwise distances coincide (within the ingest tolerance), which
    /// several algorithms require to be distinct.
    #[error("tied pairwise distances: {0}")]
    TiedWeights(String),

    /// The instance exceeds the exhaustive oracle's size cap.
    #[error("instance too large for exhaustive search: N={n}, cap={cap}")]
    TooLarge { n: usize, cap: usize },

    /// The optimal search hit its iteration budget. Carries a checkpoint
    /// from which a sequential search can resume.
    #[error("iteration budget exhausted after {steps} walks")]
    BudgetExceeded {
        steps: u64,
        checkpoint: Option<Box<Checkpoint>>,
    },

    #[error("source is not at the intersection")]
    SourceNotAtIntersection,

    /// Sweep was handed an assignment that does not deliver to all nodes.
    #[error("infeasible input assignment: {0}")]
    InfeasibleInput(String),

    #[error("grid segment graph is not connected")]
    DisconnectedGrid,

    #[error("grid segment {0} carries no node")]
    EmptySegment(usize),

    #[error("cannot place {n} nodes on {segments} segments (need at least one per segment)")]
    InfeasibleN { n: usize, segments: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
