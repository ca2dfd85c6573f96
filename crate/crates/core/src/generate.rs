//! Seeded random network generation and the per-trial seed derivation
//! used by the experiment harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cross::CrossNetwork;
use crate::error::{Error, Result};
use crate::geom::Point2;

/// Where the source is placed by the cross generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceMode {
    /// Source exactly at the intersection of the two lines.
    Intersection,
    /// Source drawn uniformly like any other node; the frame is then
    /// re-canonicalized so it sits on the non-positive x-axis.
    Uniform,
}

impl std::str::FromStr for SourceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intersection" => Ok(SourceMode::Intersection),
            "uniform" => Ok(SourceMode::Uniform),
            other => Err(Error::InvalidConfig(format!(
                "unknown source mode '{other}' (expected 'intersection' or 'uniform')"
            ))),
        }
    }
}

fn random_cross_point(rng: &mut ChaCha8Rng, arm: f64) -> Point2 {
    // uniform over the total length: fair coin for the line, uniform
    // coordinate along it
    let c: f64 = rng.random_range(-arm..arm);
    if rng.random_bool(0.5) {
        Point2::new(c, 0.0)
    } else {
        Point2::new(0.0, c)
    }
}

/// Draw a cross network with `n` nodes (source included) uniformly over
/// two perpendicular lines of half-length `arm_half_length`. Degenerate
/// draws (coincident points, tied pairwise distances) are redrawn from
/// the same stream, so the result is a deterministic function of the
/// arguments.
pub fn generate_random_cross(
    n: usize,
    seed: u64,
    arm_half_length: f64,
    mode: SourceMode,
) -> Result<CrossNetwork> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "a generated network needs at least 2 nodes, got {n}"
        )));
    }
    if !(arm_half_length.is_finite() && arm_half_length > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "arm_half_length must be positive, got {arm_half_length}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let source = match mode {
            SourceMode::Intersection => Point2::new(0.0, 0.0),
            SourceMode::Uniform => random_cross_point(&mut rng, arm_half_length),
        };
        let others: Vec<Point2> = (0..n - 1)
            .map(|_| random_cross_point(&mut rng, arm_half_length))
            .collect();
        let Ok(net) = CrossNetwork::new(source, others, arm_half_length) else {
            continue;
        };
        if net.check_distinct_distances().is_ok() {
            return Ok(net);
        }
    }
    Err(Error::InvalidConfig(
        "could not draw a distinct-distance network in 1000 attempts".into(),
    ))
}

/// 64-bit finalizer used to derive independent per-trial seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based seed for trial `t`: independent of evaluation order, so
/// trials can run on any worker in any interleaving.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    splitmix64(master_seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
