//! Seeded Monte Carlo benchmarking of the planners.
//!
//! Every trial derives its own seed from the master seed and the trial
//! index, generates one network, and runs every requested algorithm on
//! it. Trials are independent, so they may run on any number of workers;
//! aggregation folds the per-trial records in trial order, which makes
//! the emitted CSV and JSON byte-identical across worker counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::assignment::RangeAssignment;
use crate::error::{Error, Result};
use crate::generate::{generate_random_cross, trial_seed, SourceMode};
use crate::grid::{generate_square_grid, grid_distributed_assignment};
use crate::planners::{
    bip_assignment_points, mst_assignment_points, run_planner, sweep_points, PlannerKind,
    SearchOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    CrossGeneral,
    CrossIntersection,
    SquareGrid { k: usize },
}

impl Topology {
    pub fn parse(name: &str, grid_k: usize) -> Result<Self> {
        match name {
            "cross-general" => Ok(Topology::CrossGeneral),
            "cross-intersection" => Ok(Topology::CrossIntersection),
            "square-grid" => Ok(Topology::SquareGrid { k: grid_k }),
            other => Err(Error::InvalidConfig(format!(
                "unknown topology '{other}' (expected cross-general, cross-intersection or square-grid)"
            ))),
        }
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::CrossGeneral => f.write_str("cross-general"),
            Topology::CrossIntersection => f.write_str("cross-intersection"),
            Topology::SquareGrid { k } => write!(f, "square-grid-k{k}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub topology: Topology,
    pub n: usize,
    pub trials: u64,
    pub alpha: f64,
    pub master_seed: u64,
    pub algorithms: Vec<PlannerKind>,
    pub denominator: PlannerKind,
    /// Arm half-length for crosses, cell side for grids.
    pub length_scale: f64,
    pub budget: u64,
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            topology: Topology::CrossGeneral,
            n: 10,
            trials: 100,
            alpha: 2.0,
            master_seed: 0,
            algorithms: vec![PlannerKind::NearOptimal, PlannerKind::Distributed],
            denominator: PlannerKind::NearOptimal,
            length_scale: 1.0,
            budget: crate::planners::DEFAULT_BUDGET,
            workers: None,
        }
    }
}

/// Aggregated results for one algorithm at one network size.
#[derive(Clone, Debug, Serialize)]
pub struct AlgoStats {
    pub algo: String,
    pub trials: u64,
    pub mean_cost: f64,
    pub mean_ratio: f64,
    /// 1.96 * sample-stddev / sqrt(trials) of the per-trial ratios.
    pub ci95: f64,
    #[serde(skip)]
    pub mean_runtime_secs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialStats {
    pub topology: String,
    pub n: usize,
    pub denominator: String,
    pub master_seed: u64,
    pub rows: Vec<AlgoStats>,
    /// Set when some trials were dropped on planner budget exhaustion.
    pub partial: bool,
    pub failed_trials: u64,
}

/// Streamed mean/variance accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Half-width of the normal-approximation 95% confidence interval.
    pub fn ci95_half_width(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            1.96 * (self.sample_variance() / self.n as f64).sqrt()
        }
    }
}

fn validate(config: &ExperimentConfig) -> Result<Vec<PlannerKind>> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if config.n < 2 {
        return Err(Error::InvalidConfig("N must be at least 2".into()));
    }
    if config.algorithms.is_empty() {
        return Err(Error::InvalidConfig("need at least one algorithm".into()));
    }
    let mut algos = vec![config.denominator];
    for &a in &config.algorithms {
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    for &a in &algos {
        if a == PlannerKind::Brute && config.n > crate::planners::DEFAULT_BRUTE_CAP {
            return Err(Error::InvalidConfig(format!(
                "brute oracle is capped at N = {}, got N = {}",
                crate::planners::DEFAULT_BRUTE_CAP,
                config.n
            )));
        }
        if let Topology::SquareGrid { .. } = config.topology {
            let ok = matches!(
                a,
                PlannerKind::Distributed
                    | PlannerKind::Mst
                    | PlannerKind::Bip
                    | PlannerKind::BipSweep
            );
            if !ok {
                return Err(Error::InvalidConfig(format!(
                    "planner '{a}' does not apply to grid topologies"
                )));
            }
        }
        if a == PlannerKind::OptimalIntersection && config.topology != Topology::CrossIntersection
        {
            return Err(Error::InvalidConfig(
                "optimal-intersection requires the cross-intersection topology".into(),
            ));
        }
    }
    Ok(algos)
}

struct TrialRecord {
    costs: Vec<(PlannerKind, f64, f64)>,
}

fn run_trial(
    config: &ExperimentConfig,
    algos: &[PlannerKind],
    trial: u64,
) -> Result<Option<TrialRecord>> {
    let seed = trial_seed(config.master_seed, trial);
    let opts = SearchOptions {
        budget: config.budget,
        ..Default::default()
    };
    let mut costs = Vec::with_capacity(algos.len());
    match config.topology {
        Topology::CrossGeneral | Topology::CrossIntersection => {
            let mode = if config.topology == Topology::CrossIntersection {
                SourceMode::Intersection
            } else {
                SourceMode::Uniform
            };
            let net = generate_random_cross(config.n, seed, config.length_scale, mode)?;
            for &algo in algos {
                let start = std::time::Instant::now();
                match run_planner(algo, &net, config.alpha, &opts) {
                    Ok(out) => costs.push((algo, out.assignment.cost(), start.elapsed().as_secs_f64())),
                    Err(Error::BudgetExceeded { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
        }
        Topology::SquareGrid { k } => {
            let grid = generate_square_grid(k, config.length_scale, config.n, seed)?;
            for &algo in algos {
                let start = std::time::Instant::now();
                let a: RangeAssignment = match algo {
                    PlannerKind::Distributed => grid_distributed_assignment(&grid, config.alpha)?,
                    PlannerKind::Mst => {
                        mst_assignment_points(grid.positions(), grid.source(), config.alpha)?
                    }
                    PlannerKind::Bip => {
                        bip_assignment_points(grid.positions(), grid.source(), config.alpha)?
                    }
                    PlannerKind::BipSweep => {
                        let base =
                            bip_assignment_points(grid.positions(), grid.source(), config.alpha)?;
                        sweep_points(grid.positions(), grid.source(), &base)?
                    }
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "planner '{other}' does not apply to grids"
                        )))
                    }
                };
                costs.push((algo, a.cost(), start.elapsed().as_secs_f64()));
            }
        }
    }
    Ok(Some(TrialRecord { costs }))
}

pub fn run_monte_carlo(config: &ExperimentConfig) -> Result<TrialStats> {
    let algos = validate(config)?;

    let run_all = || -> Result<Vec<Option<TrialRecord>>> {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, &algos, t))
            .collect()
    };
    let records: Vec<Option<TrialRecord>> = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?
            .install(run_all),
        None => run_all(),
    }?;

    // fold in trial order so output bytes never depend on scheduling
    let mut cost_acc = vec![Welford::default(); algos.len()];
    let mut ratio_acc = vec![Welford::default(); algos.len()];
    let mut runtime_acc = vec![Welford::default(); algos.len()];
    let mut failed = 0u64;
    for record in &records {
        let Some(record) = record else {
            failed += 1;
            continue;
        };
        let denom_cost = record
            .costs
            .iter()
            .find(|(a, _, _)| *a == config.denominator)
            .map(|&(_, c, _)| c)
            .expect("denominator runs in every trial");
        for (k, &(_, c, secs)) in record.costs.iter().enumerate() {
            cost_acc[k].push(c);
            ratio_acc[k].push(c / denom_cost);
            runtime_acc[k].push(secs);
        }
    }

    let rows = algos
        .iter()
        .enumerate()
        .map(|(k, &algo)| AlgoStats {
            algo: algo.name().to_string(),
            trials: cost_acc[k].count(),
            mean_cost: cost_acc[k].mean(),
            mean_ratio: ratio_acc[k].mean(),
            ci95: ratio_acc[k].ci95_half_width(),
            mean_runtime_secs: runtime_acc[k].mean(),
        })
        .collect();

    Ok(TrialStats {
        topology: config.topology.to_string(),
        n: config.n,
        denominator: config.denominator.name().to_string(),
        master_seed: config.master_seed,
        rows,
        partial: failed > 0,
        failed_trials: failed,
    })
}

pub const CSV_HEADER: &str = "topology,N,algo,trials,mean_cost,mean_ratio,ci95,denominator,seed";

/// One CSV row per algorithm; several stats blocks (e.g. across N values)
/// can be concatenated under a single header.
pub fn stats_to_csv_rows(stats: &TrialStats) -> String {
    let mut out = String::new();
    for row in &stats.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            stats.topology,
            stats.n,
            row.algo,
            row.trials,
            row.mean_cost,
            row.mean_ratio,
            row.ci95,
            stats.denominator,
            stats.master_seed
        ));
    }
    out
}

pub fn stats_to_csv(all: &[TrialStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for stats in all {
        out.push_str(&stats_to_csv_rows(stats));
    }
    out
}

pub fn stats_to_json(all: &[TrialStats]) -> String {
    let mut out = serde_json::to_string_pretty(all).expect("serializable");
    out.push('\n');
    out
}
