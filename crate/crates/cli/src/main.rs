//! Command-line front end: generate networks, compute assignments, verify
//! delivery, run Monte Carlo benchmarks, and exercise the invariant suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use crossbcast::experiment::{
    run_monte_carlo, stats_to_csv, stats_to_json, ExperimentConfig, Topology, TrialStats,
};
use crossbcast::io::{self, NetworkFile};
use crossbcast::planners::{self, PlannerKind, SearchOptions};
use crossbcast::{generate_random_cross, generate_square_grid, SourceMode};

const BUDGET_ENV: &str = "CROSSBCAST_BUDGET";

#[derive(Parser)]
#[command(
    name = "crossbcast",
    version,
    about = "Minimum-energy broadcast range assignment on cross and grid networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random cross network as JSON.
    Gen(GenArgs),
    /// Generate a random square-grid network as JSON.
    GridGen(GridGenArgs),
    /// Compute a range assignment for a network file.
    Assign(AssignArgs),
    /// Check whether an assignment delivers the broadcast to all nodes.
    Verify(VerifyArgs),
    /// Run a seeded Monte Carlo benchmark and emit CSV/JSON statistics.
    Mc(McArgs),
    /// Run the randomized invariant suite.
    Props(PropsArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of nodes, source included.
    #[arg(short = 'N', long = "nodes", value_name = "N")]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Arm half-length of the cross.
    #[arg(long, default_value_t = 1.0)]
    arm: f64,
    /// Source placement: "uniform" or "intersection".
    #[arg(long, default_value = "uniform")]
    source_mode: String,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GridGenArgs {
    /// Cells per side of the square grid.
    #[arg(short, long)]
    k: usize,
    /// Side length of one cell.
    #[arg(long, default_value_t = 1.0)]
    side: f64,
    #[arg(short = 'N', long = "nodes", value_name = "N")]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AssignArgs {
    /// Planner name: optimal, optimal-intersection, brute, near-optimal,
    /// distributed, mst, bip, bip-sweep.
    #[arg(long)]
    algo: String,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Network file (cross or grid, detected by shape).
    #[arg(short, long)]
    input: PathBuf,
    /// Assignment output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Where to write the JSON report record (stderr when omitted).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Sweep budget for the exhaustive search.
    #[arg(long)]
    budget: Option<u64>,
    /// Partition the exhaustive search across threads.
    #[arg(long)]
    parallel: bool,
    /// Disable dominance pruning in the exhaustive search.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Assignment file to check.
    #[arg(short, long)]
    assignment: PathBuf,
}

#[derive(Args)]
struct McArgs {
    /// Comma-separated network sizes.
    #[arg(short = 'N', long = "nodes", value_delimiter = ',', value_name = "N")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Comma-separated planner names to benchmark.
    #[arg(long, value_delimiter = ',')]
    algos: Vec<String>,
    /// Ratio denominator planner.
    #[arg(long, default_value = "near-optimal")]
    denominator: String,
    /// cross-general, cross-intersection or square-grid.
    #[arg(long, default_value = "cross-general")]
    topology: String,
    /// Cells per side for square-grid topologies.
    #[arg(long, default_value_t = 2)]
    grid_k: usize,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Master seed; per-trial seeds derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arm half-length (cross) or cell side (grid).
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads for trials (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON stats output path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PropsArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget = err
                .downcast_ref::<crossbcast::Error>()
                .is_some_and(|e| matches!(e, crossbcast::Error::BudgetExceeded { .. }));
            if budget {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn budget_from_env() -> Option<u64> {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok())
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(budget_from_env).unwrap_or(planners::DEFAULT_BUDGET)
}

fn emit(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Gen(args) => {
            let mode: SourceMode = args.source_mode.parse::<SourceMode>()?;
            let net = generate_random_cross(args.n, args.seed, args.arm, mode)?;
            emit(&io::cross_to_json(&net), args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GridGen(args) => {
            let grid = generate_square_grid(args.k, args.side, args.n, args.seed)?;
            emit(&io::grid_to_json(&grid), args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Assign(args) => {
            let kind: PlannerKind = args.algo.parse::<PlannerKind>()?;
            let opts = SearchOptions {
                prune: !args.no_prune,
                parallel: args.parallel,
                budget: resolve_budget(args.budget),
                resume: None,
            };
            let network = io::load_network(&args.input)
                .with_context(|| format!("loading {}", args.input.display()))?;
            let (assignment, report) = match network {
                NetworkFile::Cross(net) => {
                    let out = planners::run_planner(kind, &net, args.alpha, &opts)?;
                    (out.assignment, out.report)
                }
                NetworkFile::Grid(grid) => {
                    let start = std::time::Instant::now();
                    let assignment = match kind {
                        PlannerKind::Distributed => {
                            crossbcast::grid_distributed_assignment(&grid, args.alpha)?
                        }
                        PlannerKind::Mst => planners::mst_assignment_points(
                            grid.positions(),
                            grid.source(),
                            args.alpha,
                        )?,
                        PlannerKind::Bip => planners::bip_assignment_points(
                            grid.positions(),
                            grid.source(),
                            args.alpha,
                        )?,
                        PlannerKind::BipSweep => {
                            let base = planners::bip_assignment_points(
                                grid.positions(),
                                grid.source(),
                                args.alpha,
                            )?;
                            planners::sweep_points(grid.positions(), grid.source(), &base)?
                        }
                        other => anyhow::bail!("planner '{other}' does not apply to grids"),
                    };
                    let delivered = crossbcast::reaches_all(
                        grid.positions(),
                        grid.source(),
                        &assignment,
                    );
                    let report = planners::PlanReport {
                        planner: kind,
                        cost: assignment.cost(),
                        runtime_secs: start.elapsed().as_secs_f64(),
                        iterations: 0,
                        delivered,
                    };
                    (assignment, report)
                }
            };
            emit(&io::assignment_to_json(&assignment), args.output.as_deref())?;
            let report_json = serde_json::json!({
                "planner": report.planner.name(),
                "cost": report.cost,
                "runtime_secs": report.runtime_secs,
                "iterations": report.iterations,
                "delivered": report.delivered,
            });
            let report_text = format!("{report_json:#}\n");
            match args.report.as_deref() {
                Some(p) => std::fs::write(p, report_text)?,
                None => eprint!("{report_text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let assignment = io::load_assignment(&args.assignment)
                .with_context(|| format!("loading {}", args.assignment.display()))?;
            let (positions, source) = match io::load_network(&args.input)? {
                NetworkFile::Cross(net) => (net.positions().to_vec(), net.source()),
                NetworkFile::Grid(grid) => (grid.positions().to_vec(), grid.source()),
            };
            anyhow::ensure!(
                assignment.len() == positions.len(),
                "assignment covers {} nodes but the network has {}",
                assignment.len(),
                positions.len()
            );
            let outcome = crossbcast::simulate_broadcast(&positions, source, &assignment);
            let verdict = serde_json::json!({
                "delivered": outcome.all_reached(),
                "cost": assignment.cost(),
                "reached": outcome.reached_count(),
                "total": positions.len(),
                "rounds": outcome.rounds(),
            });
            println!("{verdict:#}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Mc(args) => {
            anyhow::ensure!(!args.n.is_empty(), "pass at least one network size via -N");
            anyhow::ensure!(!args.algos.is_empty(), "pass at least one planner via --algos");
            let algorithms: Vec<PlannerKind> = args
                .algos
                .iter()
                .map(|s| s.parse::<PlannerKind>())
                .collect::<Result<_, _>>()?;
            let denominator: PlannerKind = args.denominator.parse::<PlannerKind>()?;
            let topology = Topology::parse(&args.topology, args.grid_k)?;
            let budget = resolve_budget(args.budget);

            let mut all: Vec<TrialStats> = Vec::new();
            for &n in &args.n {
                let config = ExperimentConfig {
                    topology,
                    n,
                    trials: args.trials,
                    alpha: args.alpha,
                    master_seed: args.seed,
                    algorithms: algorithms.clone(),
                    denominator,
                    length_scale: args.scale,
                    budget,
                    workers: args.workers,
                };
                let stats = run_monte_carlo(&config)?;
                for row in &stats.rows {
                    eprintln!(
                        "[mc] {} N={} {}: mean_ratio {:.4} ± {:.4} (mean cost {:.4}, {} trials, {:.1} ms/trial)",
                        stats.topology,
                        stats.n,
                        row.algo,
                        row.mean_ratio,
                        row.ci95,
                        row.mean_cost,
                        row.trials,
                        row.mean_runtime_secs * 1e3,
                    );
                }
                all.push(stats);
            }
            emit(&stats_to_csv(&all), args.csv.as_deref())?;
            if let Some(json_path) = args.json.as_deref() {
                emit(&stats_to_json(&all), Some(json_path))?;
            }
            let partial = all.iter().any(|s| s.partial);
            if partial {
                eprintln!("[mc] warning: some trials hit the planner budget; results are partial");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Props(args) => {
            let results = crossbcast::props::run_property_suite(args.seed);
            let mut ok = true;
            for r in &results {
                let status = if r.passed() { "pass" } else { "FAIL" };
                println!("[props] {:<26} {:>6} cases  {}", r.name, r.cases, status);
                if let Some(d) = &r.detail {
                    println!("        detail: {d}");
                }
                ok &= r.passed();
            }
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
